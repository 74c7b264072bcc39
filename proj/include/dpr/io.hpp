#pragma once

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dpr/drive.hpp"
#include "dpr/eigensystem.hpp"
#include "dpr/error.hpp"
#include "dpr/husimi.hpp"
#include "dpr/stats.hpp"
#include "dpr/trace.hpp"
#include "dpr/tunneling.hpp"

namespace dpr {

using json = nlohmann::json;

namespace detail {

// CSV numeric cell: 6 significant digits.
inline std::string csv_num(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

inline std::ofstream open_out(const std::string& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw ConfigError("cannot open output file '" + path + "'");
  return out;
}

}  // namespace detail

// time_s,sz1,sz2,<one population column per eigenstate label>
inline void write_evolution_csv(const EvolutionRecord& rec, std::ostream& out) {
  out << "time_s,sz1,sz2";
  for (const auto& l : rec.population_labels) out << ",p_" << l;
  out << "\n";
  for (size_t i = 0; i < rec.times.size(); ++i) {
    out << detail::csv_num(rec.times[i]) << "," << detail::csv_num(rec.sz1[i]) << ","
        << detail::csv_num(rec.sz2[i]);
    for (Eigen::Index s = 0; s < rec.populations.cols(); ++s)
      out << "," << detail::csv_num(rec.populations(static_cast<Eigen::Index>(i), s));
    out << "\n";
  }
}

// Eigenvalue table with overlaps onto the labelled analytic states.
inline void write_eigen_csv(const EigenSystem& es, std::ostream& out) {
  out << "index,energy_hz,label\n";
  for (int i = 0; i < es.dim(); ++i)
    out << i << "," << detail::csv_num(es.energies[i]) << "," << es.labels[i] << "\n";
}

inline json eigen_json(const EigenSystem& es) {
  json j;
  j["dimension"] = es.dim();
  j["energies_hz"] =
      std::vector<double>(es.energies.data(), es.energies.data() + es.dim());
  j["labels"] = es.labels;
  return j;
}

inline json esr_lines_json(const std::vector<EsrLine>& lines) {
  json arr = json::array();
  for (const auto& l : lines) {
    arr.push_back({{"label", l.label},
                   {"from", l.from},
                   {"to", l.to},
                   {"frequency_hz", l.frequency}});
  }
  return arr;
}

// Husimi map as a CSV matrix: first row is the phi grid, first column the
// theta grid.
inline void write_husimi_csv(const HusimiGrid& grid, std::ostream& out) {
  out << "theta\\phi";
  for (double ph : grid.phis) out << "," << detail::csv_num(ph);
  out << "\n";
  for (size_t i = 0; i < grid.thetas.size(); ++i) {
    out << detail::csv_num(grid.thetas[i]);
    for (size_t k = 0; k < grid.phis.size(); ++k)
      out << "," << detail::csv_num(grid.q(static_cast<Eigen::Index>(i),
                                           static_cast<Eigen::Index>(k)));
    out << "\n";
  }
}

inline json state_json(const SpinState& state) {
  json j;
  j["basis"] = state.basis;
  json re = json::array(), im = json::array();
  for (int i = 0; i < state.dim(); ++i) {
    re.push_back(state.amplitudes(i).real());
    im.push_back(state.amplitudes(i).imag());
  }
  j["amplitudes_re"] = re;
  j["amplitudes_im"] = im;
  return j;
}

// One JSON object per line: seed, events, outcome.
inline void write_timelines_jsonl(const std::vector<EventTimeline>& timelines,
                                  std::ostream& out) {
  for (const auto& tl : timelines) {
    json j;
    j["seed"] = tl.seed;
    j["read_duration_s"] = tl.read_duration;
    j["ionization_count"] = tl.ionization_count();
    j["final_donor1_occupied"] = tl.final_config.donor1_occupied;
    j["final_state"] = tl.final_config.resident_state;
    json evs = json::array();
    for (const auto& e : tl.events) {
      evs.push_back({{"time_s", e.time},
                     {"kind", e.kind == EventKind::IonizeDonor1 ? "out" : "in"},
                     {"from", e.from_state},
                     {"to", e.to_state}});
    }
    j["events"] = evs;
    out << j.dump() << "\n";
  }
}

inline json stats_json(const ReadoutStats& st) {
  json j;
  j["mean_blips"] = st.mean;
  j["sigma_blips"] = st.sigma;
  j["repetitions"] = st.per_trace_counts.size();
  j["subgroups"] = st.subgroup_means.size();
  j["subgroup_means"] = st.subgroup_means;
  j["spin_up_proportion"] = spin_up_proportion(st.per_trace_counts);
  json hist = json::object();
  for (const auto& [count, n] : st.count_histogram) hist[std::to_string(count)] = n;
  j["count_histogram"] = hist;
  return j;
}

inline void write_counts_csv(const std::vector<int>& counts, std::ostream& out) {
  out << "trace_index,blip_count\n";
  for (size_t i = 0; i < counts.size(); ++i) out << i << "," << counts[i] << "\n";
}

// Versioned little-endian binary trace container.
//   8 bytes  magic "DPRTRC01"
//   f64      sample rate (Hz)
//   u64      sample count
//   u64      timeline seed
//   u64      detection-parameter hash
//   f32[n]   samples
inline void write_trace(const CurrentTrace& trace, std::ostream& out) {
  out.write("DPRTRC01", 8);
  auto put = [&out](const void* p, size_t n) {
    out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
  };
  const std::uint64_t n = trace.samples.size();
  put(&trace.sample_rate, 8);
  put(&n, 8);
  put(&trace.timeline_seed, 8);
  put(&trace.params_hash, 8);
  put(trace.samples.data(), 4 * trace.samples.size());
  if (!out) throw NumericError("write_trace: write failed");
}

inline CurrentTrace read_trace(std::istream& in) {
  char magic[8];
  in.read(magic, 8);
  if (!in || std::string(magic, 8) != "DPRTRC01")
    throw ConfigError("read_trace: bad magic (not a trace file)");
  CurrentTrace tr;
  std::uint64_t n = 0;
  in.read(reinterpret_cast<char*>(&tr.sample_rate), 8);
  in.read(reinterpret_cast<char*>(&n), 8);
  in.read(reinterpret_cast<char*>(&tr.timeline_seed), 8);
  in.read(reinterpret_cast<char*>(&tr.params_hash), 8);
  if (!in || !(tr.sample_rate > 0.0) || n > (1ull << 32))
    throw ConfigError("read_trace: corrupt header");
  tr.samples.resize(n);
  in.read(reinterpret_cast<char*>(tr.samples.data()), static_cast<std::streamsize>(4 * n));
  if (!in) throw ConfigError("read_trace: truncated file");
  return tr;
}

inline CurrentTrace load_trace(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open trace file '" + path + "'");
  return read_trace(in);
}

}  // namespace dpr
