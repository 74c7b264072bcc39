#include <catch_amalgamated.hpp>

#include <cmath>

#include "dpr/drive.hpp"
#include "dpr/husimi.hpp"
#include "dpr/rng.hpp"

using namespace dpr;

namespace {
const DonorPairParams kP;
const NuclearConfig kPar = NuclearConfig::DownDown;

double population(const SpinState& st, const std::string& label) {
  const EigenSystem es = electron_eigensystem(kP, kPar);
  return std::norm(es.states.col(es.index_of(label)).dot(st.amplitudes));
}
}  // namespace

TEST_CASE("calibrated pi pulse transfers T- to T+") {
  const double t_pi = calibrate_pi_duration(kP, kPar, 1e6);
  // Collective-drive pi time is close to the nominal 1/(2 f_R).
  CHECK(t_pi == Catch::Approx(0.5e-6).epsilon(0.1));
  const SpinState tp = prepare(PreparedState::Tplus, kP, kPar);
  CHECK(population(tp, "T+") >= 0.99);
}

TEST_CASE("pi/2 point gives the (0.25, 0.50, 0.25) triplet mixture") {
  const SpinState tx = prepare(PreparedState::TX, kP, kPar);
  CHECK(population(tx, "T-") == Catch::Approx(0.25).margin(0.05));
  CHECK(population(tx, "T0~") == Catch::Approx(0.50).margin(0.05));
  CHECK(population(tx, "T+") == Catch::Approx(0.25).margin(0.05));
  CHECK(population(tx, "S~") < 0.01);
}

TEST_CASE("evolution preserves the norm and rejects coarse steps") {
  DrivePulse pulse;
  pulse.carrier_frequency = f_alpha_center(kP, kPar);
  pulse.duration = 2e-6;
  const EvolutionRecord rec = evolve(t_minus_state(), pulse, kP, kPar, 1e-9);
  CHECK_NOTHROW(rec.final_state.check());
  // Population columns sum to ~1 at every sample.
  for (Eigen::Index i = 0; i < rec.populations.rows(); ++i)
    CHECK(rec.populations.row(i).sum() == Catch::Approx(1.0).margin(1e-9));
  CHECK_THROWS_AS(evolve(t_minus_state(), pulse, kP, kPar, 1e-6), NumericError);
}

TEST_CASE("step halving leaves the final state unchanged") {
  DrivePulse pulse;
  pulse.carrier_frequency = f_alpha_center(kP, kPar) + 3e5;
  pulse.rabi_frequency = 0.7e6;
  pulse.phase = 0.4;
  pulse.duration = 1.3e-6;
  const SpinState a = evolve(t_minus_state(), pulse, kP, kPar, 1e-9).final_state;
  const SpinState b = evolve(t_minus_state(), pulse, kP, kPar, 0.5e-9).final_state;
  CHECK(overlap_probability(a, b) > 1.0 - 1e-6);
}

TEST_CASE("detuned drive leaves the state mostly unexcited") {
  DrivePulse pulse;
  pulse.carrier_frequency = f_alpha_center(kP, kPar) + 50e6;
  pulse.duration = 1e-6;
  const EvolutionRecord rec = evolve(t_minus_state(), pulse, kP, kPar, 1e-9);
  CHECK(population(rec.final_state, "T-") > 0.99);
}

TEST_CASE("hard pulse criterion against the alpha splitting") {
  // Splitting ~ 405 Hz at defaults; f_R = 1 MHz is deeply in the hard
  // regime, f_R = 100 Hz is not.
  CHECK(hard_pulse_check(1e6, kP, kPar).hard);
  CHECK(hard_pulse_check(1e6, kP, kPar).margin > 1e3);
  CHECK_FALSE(hard_pulse_check(100.0, kP, kPar).hard);
}

TEST_CASE("adiabatic inversion flips a resonance inside the sweep window") {
  // Sweep edges must start well outside the drive linewidth (the collective
  // coupling is sqrt(2) f_R) or the state is not captured adiabatically.
  const double fa = f_alpha_center(kP, kPar);
  const SpinState inverted =
      adiabatic_invert(t_minus_state(), fa, 12e6, 120e-6, 0.25e6, kP, kPar);
  CHECK(population(inverted, "T+") > 0.99);
  const SpinState missed =
      adiabatic_invert(t_minus_state(), fa + 50e6, 12e6, 120e-6, 0.25e6, kP, kPar);
  CHECK(population(missed, "T-") > 0.99);
}

TEST_CASE("Landau-Zener transfer probability on an isolated crossing") {
  // Anti-parallel dd -> ud~ crossing driven at small adiabaticity. The drive
  // matrix element is f_R (cos(theta) + sin(theta)); a linear sweep at rate R
  // transfers with probability 1 - exp(-pi^2 Omega^2 / R).
  const NuclearConfig ap = NuclearConfig::DownUp;
  double f_line = 0.0;
  for (const auto& l : esr_frequencies(kP, ap))
    if (l.label == "f_e1|e2=d") f_line = l.frequency;
  REQUIRE(f_line > 0.0);
  SpinState target;
  for (const auto& [name, st] : analytic_electron_eigenstates(kP, ap))
    if (name == "ud~") target = st;

  const double rabi = 50e3;
  // Coupling strength of the collective drive on this transition.
  const double omega =
      rabi * std::abs(target.amplitudes(1) + target.amplitudes(2));
  const double span = 2e6;
  const double duration = 60e-6;
  const double rate = span / duration;
  const double expected = 1.0 - std::exp(-M_PI * M_PI * omega * omega / rate);
  REQUIRE(expected > 0.3);
  REQUIRE(expected < 0.9);

  const SpinState out =
      adiabatic_invert(basis_state(0), f_line, span, duration, rabi, kP, ap);
  const double p_transfer = overlap_probability(out, target);
  CHECK(p_transfer == Catch::Approx(expected).margin(0.03));
}

TEST_CASE("Husimi maps of the prepared states") {
  const HusimiGrid qm = husimi(t_minus_state(), 91, 121);
  CHECK(husimi_argmax(qm).first == Catch::Approx(M_PI).margin(0.05));
  const HusimiGrid qp = husimi(t_plus_state(), 91, 121);
  CHECK(husimi_argmax(qp).first == Catch::Approx(0.0).margin(0.05));
  const SpinState tx = prepare(PreparedState::TX, kP, kPar);
  const HusimiGrid qx = husimi(tx, 91, 121);
  CHECK(husimi_argmax(qx).first == Catch::Approx(M_PI / 2).margin(0.1));
  CHECK(husimi_norm(qx) == Catch::Approx(1.0).margin(1e-3));
}

TEST_CASE("Husimi normalization over random triplet states") {
  Rng rng(99);
  for (int it = 0; it < 100; ++it) {
    Eigen::Vector4cd v;
    const Complex cp(rng.normal(), rng.normal());
    const Complex c0(rng.normal(), rng.normal());
    const Complex cm(rng.normal(), rng.normal());
    v(3) = cp;
    v(0) = cm;
    v(1) = c0 / std::sqrt(2.0);
    v(2) = c0 / std::sqrt(2.0);
    v.normalize();
    const HusimiGrid g = husimi(electron_state(v), 121, 181);
    CHECK(husimi_norm(g) == Catch::Approx(1.0).margin(1e-3));
  }
}

TEST_CASE("Husimi rejects states with singlet weight") {
  CHECK_THROWS_AS(husimi(singlet_state()), ContractError);
}
