#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "dpr/constants.hpp"
#include "dpr/eigensystem.hpp"
#include "dpr/params.hpp"
#include "dpr/rng.hpp"
#include "dpr/spin_state.hpp"

namespace dpr {

// Stochastic model of spin-dependent tunneling between donor 1 and the SET
// island over one readout window.
struct TunnelingParams {
  double gamma_out = 1.0 / 50e-6;   // 1/s, donor -> SET for a fully-up electron
  double gamma_in = 1.0 / 32.8e-6;  // 1/s, SET -> donor entry of a down electron
  double electron_temperature = 0.1;  // K
  double mu_set_offset = 0.0;       // Hz, SET potential relative to the mu_up/mu_down midpoint
  double zeeman_split = electron_gyromagnetic(1.9985);  // Hz (gamma_e * 1 T)
  double branching_s_vs_t0 = 0.5;   // probability of entering S~ on tunnel-in
  double read_duration = 1e-3;      // s
  bool thermal_channels = false;    // enable thermally activated error events

  void validate() const {
    if (!(gamma_out > 0.0) || !(gamma_in > 0.0))
      throw ConfigError("TunnelingParams: rates must be > 0");
    if (branching_s_vs_t0 < 0.0 || branching_s_vs_t0 > 1.0)
      throw ConfigError("TunnelingParams: branching must be in [0, 1]");
    if (electron_temperature < 0.0)
      throw ConfigError("TunnelingParams: temperature must be >= 0");
    if (read_duration <= 0.0)
      throw ConfigError("TunnelingParams: read_duration must be > 0");
  }
};

// Classical charge/spin configuration during a trajectory. While donor 1 is
// occupied the resident label names a two-electron eigenstate (parallel) or
// a product state (anti-parallel); when ionized it names the spin left on
// donor 2.
struct ChargeSpinConfig {
  bool donor1_occupied = true;
  std::string resident_state;  // "T-","S~","T0~","T+" | "dd","du","ud","uu" | "d2","u2"

  bool consistent(NuclearConfig cfg) const {
    if (!donor1_occupied) return resident_state == "d2" || resident_state == "u2";
    if (parallel(cfg))
      return resident_state == "T-" || resident_state == "S~" ||
             resident_state == "T0~" || resident_state == "T+";
    return resident_state == "dd" || resident_state == "du" ||
           resident_state == "ud" || resident_state == "uu";
  }
};

enum class EventKind { IonizeDonor1, NeutralizeDonor1 };

struct TunnelEvent {
  double time = 0.0;  // s, within [0, read_duration]
  EventKind kind = EventKind::IonizeDonor1;
  std::string from_state;
  std::string to_state;
};

// Ordered stochastic transition events from one readout window.
struct EventTimeline {
  std::vector<TunnelEvent> events;
  std::uint64_t seed = 0;
  ChargeSpinConfig final_config;
  double read_duration = 0.0;

  int ionization_count() const {
    int n = 0;
    for (const auto& e : events)
      if (e.kind == EventKind::IonizeDonor1) ++n;
    return n;
  }
};

// Occupation probability 1/(1 + exp(h * offset / kB T)) of a SET level at
// `energy_offset` above the island's electrochemical potential; a step
// function at T = 0.
inline double fermi_factor(double energy_offset, double temperature) {
  if (temperature < 0.0) throw ConfigError("fermi_factor: temperature must be >= 0");
  if (temperature == 0.0)
    return energy_offset > 0.0 ? 0.0 : (energy_offset < 0.0 ? 1.0 : 0.5);
  const double x = kPlanck * energy_offset / (kBoltzmann * temperature);
  if (x > 700.0) return 0.0;
  if (x < -700.0) return 1.0;
  return 1.0 / (1.0 + std::exp(x));
}

// Projective branch at the start of the readout window: samples one
// eigenstate label with probability equal to its population. The quantum
// state is classical from here on.
inline ChargeSpinConfig initial_branch(const SpinState& state,
                                       const DonorPairParams& p,
                                       NuclearConfig cfg, Rng& rng) {
  state.check();
  if (state.dim() != 4) throw ContractError("initial_branch: expected a 4-dim electron state");
  const EigenSystem es = electron_eigensystem(p, cfg);
  double u = rng.uniform();
  ChargeSpinConfig out;
  out.donor1_occupied = true;
  for (int i = 0; i < es.dim(); ++i) {
    const double pop = std::norm(es.states.col(i).dot(state.amplitudes));
    if (u < pop || i == es.dim() - 1) {
      out.resident_state = es.labels[i];
      break;
    }
    u -= pop;
  }
  if (!parallel(cfg)) {
    // Tunneling only cares about the product character; strip the tilde.
    if (out.resident_state == "du~") out.resident_state = "du";
    if (out.resident_state == "ud~") out.resident_state = "ud";
  }
  return out;
}

namespace detail {

struct Channel {
  double rate = 0.0;
  EventKind kind = EventKind::IonizeDonor1;
  std::string to_state;
};

// Probability that electron 1 is spin-up in the given resident state.
inline double up1_weight(const std::string& resident, double theta) {
  if (resident == "T-" || resident == "dd" || resident == "du") return 0.0;
  if (resident == "T+" || resident == "ud" || resident == "uu") return 1.0;
  const double c2 = std::cos(theta) * std::cos(theta);
  if (resident == "S~") return 1.0 - c2;  // sin^2(theta)
  if (resident == "T0~") return c2;
  throw ContractError("up1_weight: unknown resident state '" + resident + "'");
}

}  // namespace detail

// One stochastic readout trajectory. Donor 1 ionizes through its spin-up
// component at gamma_out and neutralizes at gamma_in; with thermal channels
// enabled the energetically forbidden directions acquire Fermi-suppressed
// rates. Events strictly alternate between ionization and neutralization.
inline EventTimeline simulate_readout(const ChargeSpinConfig& branch,
                                      const DonorPairParams& p,
                                      const TunnelingParams& tp,
                                      NuclearConfig cfg, Rng& rng,
                                      std::uint64_t seed = 0) {
  tp.validate();
  if (!branch.consistent(cfg))
    throw ContractError("simulate_readout: branch inconsistent with nuclear configuration");
  const bool par = parallel(cfg);
  const double theta = mixing_angle(p.j, signed_detuning(p, cfg));
  const double t_k = tp.electron_temperature;
  // Level offsets relative to mu_SET; mu_set_offset shifts the island
  // potential off the mu_up/mu_down midpoint.
  const double up_off = 0.5 * tp.zeeman_split - tp.mu_set_offset;
  const double down_off = -0.5 * tp.zeeman_split - tp.mu_set_offset;
  // Out-tunneling needs an empty island level, in-tunneling an occupied one.
  const double f_out_up = fermi_factor(-up_off, t_k);
  const double f_out_down = fermi_factor(-down_off, t_k);
  const double f_in_up = fermi_factor(up_off, t_k);
  const double f_in_down = fermi_factor(down_off, t_k);

  auto channels = [&](const ChargeSpinConfig& c) {
    std::vector<detail::Channel> ch;
    auto add = [&](double rate, EventKind kind, std::string to) {
      if (rate > 0.0) ch.push_back({rate, kind, std::move(to)});
    };
    if (c.donor1_occupied) {
      const double w_up = detail::up1_weight(c.resident_state, theta);
      const double w_down = 1.0 - w_up;
      // The departing electron leaves donor 2 in the opposite spin to the
      // component that tunneled.
      if (par) {
        const bool from_tplus = c.resident_state == "T+";
        const bool from_tminus = c.resident_state == "T-";
        add(tp.gamma_out * w_up * f_out_up, EventKind::IonizeDonor1,
            from_tplus ? "u2" : "d2");
        if (tp.thermal_channels)
          add(tp.gamma_out * w_down * f_out_down, EventKind::IonizeDonor1,
              from_tminus ? "d2" : "u2");
      } else {
        const bool e1_up = c.resident_state[0] == 'u';
        const std::string d2(1, c.resident_state[1]);
        add(e1_up ? tp.gamma_out * f_out_up : 0.0, EventKind::IonizeDonor1, d2 + "2");
        if (tp.thermal_channels && !e1_up)
          add(tp.gamma_out * f_out_down, EventKind::IonizeDonor1, d2 + "2");
      }
    } else {
      const bool d2_up = c.resident_state == "u2";
      if (par) {
        // A down electron entering joins the resident spin: with an up
        // partner it lands in S~ or T0~ (odd parity, branching ratio);
        // with a down partner in T-.
        if (d2_up) {
          add(tp.gamma_in * f_in_down * tp.branching_s_vs_t0,
              EventKind::NeutralizeDonor1, "S~");
          add(tp.gamma_in * f_in_down * (1.0 - tp.branching_s_vs_t0),
              EventKind::NeutralizeDonor1, "T0~");
          if (tp.thermal_channels)
            add(tp.gamma_in * f_in_up, EventKind::NeutralizeDonor1, "T+");
        } else {
          add(tp.gamma_in * f_in_down, EventKind::NeutralizeDonor1, "T-");
          if (tp.thermal_channels) {
            add(tp.gamma_in * f_in_up * tp.branching_s_vs_t0,
                EventKind::NeutralizeDonor1, "S~");
            add(tp.gamma_in * f_in_up * (1.0 - tp.branching_s_vs_t0),
                EventKind::NeutralizeDonor1, "T0~");
          }
        }
      } else {
        const char d2 = d2_up ? 'u' : 'd';
        add(tp.gamma_in * f_in_down, EventKind::NeutralizeDonor1,
            std::string("d") + d2);
        if (tp.thermal_channels)
          add(tp.gamma_in * f_in_up, EventKind::NeutralizeDonor1,
              std::string("u") + d2);
      }
    }
    return ch;
  };

  EventTimeline tl;
  tl.seed = seed;
  tl.read_duration = tp.read_duration;
  ChargeSpinConfig state = branch;
  double t = 0.0;
  while (true) {
    const auto ch = channels(state);
    double total = 0.0;
    for (const auto& c : ch) total += c.rate;
    if (total <= 0.0) break;  // absorbing
    t += rng.exponential(total);
    if (t >= tp.read_duration) break;
    double u = rng.uniform() * total;
    const detail::Channel* pick = &ch.back();
    for (const auto& c : ch) {
      if (u < c.rate) {
        pick = &c;
        break;
      }
      u -= c.rate;
    }
    TunnelEvent ev;
    ev.time = t;
    ev.kind = pick->kind;
    ev.from_state = state.resident_state;
    ev.to_state = pick->to_state;
    tl.events.push_back(ev);
    state.donor1_occupied = pick->kind == EventKind::NeutralizeDonor1;
    state.resident_state = pick->to_state;
  }
  tl.final_config = state;
  return tl;
}

// n independent trajectories with per-index derived seeds; results are in
// index order and reproducible given the master seed.
inline std::vector<EventTimeline> run_batch(const SpinState& initial, int n,
                                            const DonorPairParams& p,
                                            const TunnelingParams& tp,
                                            NuclearConfig cfg,
                                            std::uint64_t master_seed) {
  if (n < 1) throw ConfigError("run_batch: n must be >= 1");
  std::vector<EventTimeline> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    Rng rng = derive_stream(master_seed, static_cast<std::uint64_t>(i));
    const ChargeSpinConfig branch = initial_branch(initial, p, cfg, rng);
    out.push_back(simulate_readout(branch, p, tp, cfg, rng,
                                   splitmix64(master_seed ^ splitmix64(i + 1))));
  }
  return out;
}

}  // namespace dpr
