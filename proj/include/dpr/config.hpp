#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "dpr/params.hpp"
#include "dpr/trace.hpp"
#include "dpr/tunneling.hpp"

namespace dpr {

// Full experiment description, loaded from an INI-style key = value file.
// Unknown sections or keys are errors.
struct ExperimentConfig {
  DonorPairParams donor;
  NuclearConfig nuclear = NuclearConfig::DownDown;

  // Initial-state recipe: t_minus | t_x | t_plus | s_tilde | t0_tilde |
  // dd | du | ud | uu (product states, mainly for anti-parallel runs).
  std::string initial_state = "t_minus";

  // Drive settings, shared by prepare/evolve and the spectrum scan.
  double pulse_rabi = 1e6;        // Hz
  double pulse_phase = 0.0;       // rad
  double pulse_carrier = 0.0;     // Hz; 0 = alpha-transition midpoint
  double pulse_duration = 0.0;    // s; 0 = calibrated pi duration
  double sample_step = 0.0;       // s; 0 = automatic

  // Spectrum scan grid and chirp window.
  double spectrum_start = 0.0;    // Hz; 0 = auto around the alpha line
  double spectrum_stop = 0.0;
  int spectrum_points = 11;
  double chirp_span = 4e6;        // Hz
  double chirp_duration = 20e-6;  // s

  TunnelingParams tunneling;
  bool zeeman_explicit = false;   // zeeman_split given in the file

  TraceParams trace;
  bool ideal_detection = false;   // count ionizations instead of trace blips

  // Tunnel-time fit settings.
  double fit_bin_width = 5e-6;    // s
  double fit_min_cut = -1.0;      // s; < 0 = 1/bandwidth = t_r / 0.35

  // Detection-probability target for threshold calibration. The default
  // makes the parallel mean blip count come out near 1.77 (two detection
  // chances at p each).
  double calibrate_target = 0.885;

  int repetitions = 10000;
  int subgroup_size = 100;
  std::uint64_t master_seed = 1;

  double fit_cut() const {
    if (fit_min_cut >= 0.0) return fit_min_cut;
    const double t_r = std::log(9.0) * trace.filter_time_constant;
    return t_r / 0.35;
  }

  void finalize() {
    donor.validate();
    if (!zeeman_explicit) tunneling.zeeman_split = donor.gamma_e1() * donor.b0;
    tunneling.validate();
    trace.validate();
    if (repetitions < 1) throw ConfigError("run: repetitions must be >= 1");
    if (subgroup_size < 1 || repetitions % subgroup_size != 0)
      throw ConfigError("run: repetitions must be divisible by subgroup_size");
    if (!(calibrate_target > 0.0 && calibrate_target < 1.0))
      throw ConfigError("calibrate: target must be in (0, 1)");
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline double to_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: bad numeric value for '" + key + "': " + v);
  }
}

inline std::uint64_t to_u64(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const std::uint64_t x = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: bad integer value for '" + key + "': " + v);
  }
}

inline bool to_bool(const std::string& key, const std::string& v) {
  if (v == "on" || v == "true" || v == "1") return true;
  if (v == "off" || v == "false" || v == "0") return false;
  throw ConfigError("config: bad boolean value for '" + key + "': " + v);
}

inline NuclearConfig to_nuclear(const std::string& v) {
  if (v == "down_down") return NuclearConfig::DownDown;
  if (v == "down_up") return NuclearConfig::DownUp;
  if (v == "up_down") return NuclearConfig::UpDown;
  if (v == "up_up") return NuclearConfig::UpUp;
  throw ConfigError("config: unknown nuclear orientation '" + v + "'");
}

}  // namespace detail

inline ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(lineno) + ": bad section header");
      section = detail::trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    using detail::to_bool;
    using detail::to_double;
    using detail::to_u64;

    auto unknown = [&]() -> ConfigError {
      return ConfigError("config line " + std::to_string(lineno) + ": unknown key '" +
                         key + "' in section [" + section + "]");
    };
    if (section == "donor") {
      if (key == "b0") cfg.donor.b0 = to_double(key, value);
      else if (key == "g1") cfg.donor.g1 = to_double(key, value);
      else if (key == "g2") cfg.donor.g2 = to_double(key, value);
      else if (key == "a1") cfg.donor.a1 = to_double(key, value);
      else if (key == "a2") cfg.donor.a2 = to_double(key, value);
      else if (key == "j") cfg.donor.j = to_double(key, value);
      else if (key == "gamma_n") cfg.donor.gamma_n = to_double(key, value);
      else throw unknown();
    } else if (section == "nuclear") {
      if (key == "orientation") cfg.nuclear = detail::to_nuclear(value);
      else throw unknown();
    } else if (section == "initial") {
      if (key == "state") cfg.initial_state = value;
      else throw unknown();
    } else if (section == "pulse") {
      if (key == "rabi_frequency") cfg.pulse_rabi = to_double(key, value);
      else if (key == "phase") cfg.pulse_phase = to_double(key, value);
      else if (key == "carrier") cfg.pulse_carrier = to_double(key, value);
      else if (key == "duration") cfg.pulse_duration = to_double(key, value);
      else if (key == "sample_step") cfg.sample_step = to_double(key, value);
      else throw unknown();
    } else if (section == "spectrum") {
      if (key == "start") cfg.spectrum_start = to_double(key, value);
      else if (key == "stop") cfg.spectrum_stop = to_double(key, value);
      else if (key == "points") cfg.spectrum_points = static_cast<int>(to_u64(key, value));
      else if (key == "chirp_span") cfg.chirp_span = to_double(key, value);
      else if (key == "chirp_duration") cfg.chirp_duration = to_double(key, value);
      else throw unknown();
    } else if (section == "tunneling") {
      if (key == "gamma_out") cfg.tunneling.gamma_out = to_double(key, value);
      else if (key == "gamma_in") cfg.tunneling.gamma_in = to_double(key, value);
      else if (key == "electron_temperature") cfg.tunneling.electron_temperature = to_double(key, value);
      else if (key == "mu_set_offset") cfg.tunneling.mu_set_offset = to_double(key, value);
      else if (key == "zeeman_split") {
        cfg.tunneling.zeeman_split = to_double(key, value);
        cfg.zeeman_explicit = true;
      } else if (key == "branching_s_vs_t0") cfg.tunneling.branching_s_vs_t0 = to_double(key, value);
      else if (key == "read_duration") cfg.tunneling.read_duration = to_double(key, value);
      else if (key == "thermal") cfg.tunneling.thermal_channels = to_bool(key, value);
      else throw unknown();
    } else if (section == "trace") {
      if (key == "sample_rate") cfg.trace.sample_rate = to_double(key, value);
      else if (key == "i_off") cfg.trace.i_off = to_double(key, value);
      else if (key == "i_on") cfg.trace.i_on = to_double(key, value);
      else if (key == "filter_time_constant") cfg.trace.filter_time_constant = to_double(key, value);
      else if (key == "noise_sigma") cfg.trace.noise_sigma = to_double(key, value);
      else if (key == "threshold") cfg.trace.threshold = to_double(key, value);
      else if (key == "detection") {
        if (value == "ideal") cfg.ideal_detection = true;
        else if (value == "trace") cfg.ideal_detection = false;
        else throw ConfigError("config: detection must be 'trace' or 'ideal'");
      } else throw unknown();
    } else if (section == "calibrate") {
      if (key == "target") cfg.calibrate_target = to_double(key, value);
      else throw unknown();
    } else if (section == "fit") {
      if (key == "bin_width") cfg.fit_bin_width = to_double(key, value);
      else if (key == "min_duration_cut") cfg.fit_min_cut = to_double(key, value);
      else throw unknown();
    } else if (section == "run") {
      if (key == "repetitions") cfg.repetitions = static_cast<int>(to_u64(key, value));
      else if (key == "subgroup_size") cfg.subgroup_size = static_cast<int>(to_u64(key, value));
      else if (key == "seed") cfg.master_seed = to_u64(key, value);
      else throw unknown();
    } else {
      throw ConfigError("config line " + std::to_string(lineno) + ": unknown section [" +
                        section + "]");
    }
  }
  cfg.finalize();
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  return parse_config(in);
}

inline void write_config(const ExperimentConfig& cfg, std::ostream& out) {
  out.precision(17);
  out << "[donor]\n"
      << "b0 = " << cfg.donor.b0 << "\n"
      << "g1 = " << cfg.donor.g1 << "\n"
      << "g2 = " << cfg.donor.g2 << "\n"
      << "a1 = " << cfg.donor.a1 << "\n"
      << "a2 = " << cfg.donor.a2 << "\n"
      << "j = " << cfg.donor.j << "\n"
      << "gamma_n = " << cfg.donor.gamma_n << "\n\n";
  out << "[nuclear]\norientation = " << to_string(cfg.nuclear) << "\n\n";
  out << "[initial]\nstate = " << cfg.initial_state << "\n\n";
  out << "[pulse]\n"
      << "rabi_frequency = " << cfg.pulse_rabi << "\n"
      << "phase = " << cfg.pulse_phase << "\n"
      << "carrier = " << cfg.pulse_carrier << "\n"
      << "duration = " << cfg.pulse_duration << "\n"
      << "sample_step = " << cfg.sample_step << "\n\n";
  out << "[spectrum]\n"
      << "start = " << cfg.spectrum_start << "\n"
      << "stop = " << cfg.spectrum_stop << "\n"
      << "points = " << cfg.spectrum_points << "\n"
      << "chirp_span = " << cfg.chirp_span << "\n"
      << "chirp_duration = " << cfg.chirp_duration << "\n\n";
  out << "[tunneling]\n"
      << "gamma_out = " << cfg.tunneling.gamma_out << "\n"
      << "gamma_in = " << cfg.tunneling.gamma_in << "\n"
      << "electron_temperature = " << cfg.tunneling.electron_temperature << "\n"
      << "mu_set_offset = " << cfg.tunneling.mu_set_offset << "\n"
      << "zeeman_split = " << cfg.tunneling.zeeman_split << "\n"
      << "branching_s_vs_t0 = " << cfg.tunneling.branching_s_vs_t0 << "\n"
      << "read_duration = " << cfg.tunneling.read_duration << "\n"
      << "thermal = " << (cfg.tunneling.thermal_channels ? "on" : "off") << "\n\n";
  out << "[trace]\n"
      << "sample_rate = " << cfg.trace.sample_rate << "\n"
      << "i_off = " << cfg.trace.i_off << "\n"
      << "i_on = " << cfg.trace.i_on << "\n"
      << "filter_time_constant = " << cfg.trace.filter_time_constant << "\n"
      << "noise_sigma = " << cfg.trace.noise_sigma << "\n"
      << "threshold = " << cfg.trace.threshold << "\n"
      << "detection = " << (cfg.ideal_detection ? "ideal" : "trace") << "\n\n";
  out << "[calibrate]\ntarget = " << cfg.calibrate_target << "\n\n";
  out << "[fit]\n"
      << "bin_width = " << cfg.fit_bin_width << "\n"
      << "min_duration_cut = " << cfg.fit_min_cut << "\n\n";
  out << "[run]\n"
      << "repetitions = " << cfg.repetitions << "\n"
      << "subgroup_size = " << cfg.subgroup_size << "\n"
      << "seed = " << cfg.master_seed << "\n";
}

}  // namespace dpr
