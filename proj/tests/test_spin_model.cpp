#include <catch_amalgamated.hpp>

#include <cmath>

#include "dpr/constants.hpp"
#include "dpr/eigensystem.hpp"
#include "dpr/hamiltonian.hpp"
#include "dpr/params.hpp"

using namespace dpr;

TEST_CASE("electron gyromagnetic ratio at g = 1.9985") {
  CHECK(electron_gyromagnetic(1.9985) == Catch::Approx(27.9714955047413e9).epsilon(1e-12));
}

TEST_CASE("detuning conventions per nuclear orientation") {
  DonorPairParams p;
  CHECK(detuning(p, NuclearConfig::DownDown) == Catch::Approx(90e3));
  CHECK(detuning(p, NuclearConfig::UpUp) == Catch::Approx(90e3));
  CHECK(detuning(p, NuclearConfig::DownUp) == Catch::Approx(117e6));
  CHECK(detuning(p, NuclearConfig::UpDown) == Catch::Approx(117e6));
  // Equal g-factors: the sign flips with the nuclear word.
  CHECK(signed_detuning(p, NuclearConfig::DownDown) < 0.0);
  CHECK(signed_detuning(p, NuclearConfig::UpUp) > 0.0);
  CHECK(std::abs(signed_detuning(p, NuclearConfig::DownDown)) == Catch::Approx(90e3));
}

TEST_CASE("mixing angle") {
  // Frozen: theta = atan(0.1)/2 for J/|Delta| = 0.1.
  CHECK(mixing_angle(0.1, 1.0) == Catch::Approx(0.049834326).margin(1e-9));
  const double th = mixing_angle(0.1, 1.0);
  CHECK(std::cos(th) * std::cos(th) == Catch::Approx(0.997518595).margin(1e-9));
  // tan(2 theta) = J / |Delta| identity over a wide ratio range.
  for (double r : {1e-3, 1e-1, 1.0, 1e1, 1e3})
    CHECK(std::tan(2.0 * mixing_angle(r, 1.0)) == Catch::Approx(r).epsilon(1e-12));
  CHECK(mixing_angle(1e9, 1.0) == Catch::Approx(M_PI / 4).margin(1e-9));
  CHECK(mixing_angle(1.0, 0.0) == Catch::Approx(M_PI / 4).margin(1e-15));
  CHECK_THROWS_AS(mixing_angle(-1.0, 1.0), ContractError);
}

TEST_CASE("analytic electron eigenstates are orthonormal") {
  DonorPairParams p;
  for (auto cfg : {NuclearConfig::DownDown, NuclearConfig::DownUp}) {
    const auto named = analytic_electron_eigenstates(p, cfg);
    REQUIRE(named.size() == 4);
    for (size_t i = 0; i < 4; ++i)
      for (size_t k = 0; k < 4; ++k) {
        const double ov = overlap_probability(named[i].second, named[k].second);
        CHECK(ov == Catch::Approx(i == k ? 1.0 : 0.0).margin(1e-12));
      }
  }
}

TEST_CASE("electron sector eigensystem: labels and energies") {
  DonorPairParams p;
  const EigenSystem es = electron_eigensystem(p, NuclearConfig::DownDown);
  REQUIRE(es.dim() == 4);
  for (int i = 1; i < 4; ++i) CHECK(es.energies(i) >= es.energies(i - 1));
  CHECK(es.labels[0] == "T-");
  CHECK(es.labels[1] == "S~");
  CHECK(es.labels[2] == "T0~");
  CHECK(es.labels[3] == "T+");
  // S~ sits at -3J/4 - small corrections; T0~ at +J/4.
  CHECK(es.energies(es.index_of("S~")) ==
        Catch::Approx(-0.25 * p.j - 0.5 * std::hypot(p.j, 90e3)).epsilon(1e-9));
  CHECK(es.energies(es.index_of("T0~")) ==
        Catch::Approx(-0.25 * p.j + 0.5 * std::hypot(p.j, 90e3)).epsilon(1e-9));
}

TEST_CASE("numeric eigenstates match closed-form mixtures across J/Delta") {
  DonorPairParams p;
  for (double ratio : {1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3}) {
    p.j = ratio * 90e3;
    const EigenSystem es = electron_eigensystem(p, NuclearConfig::DownDown);
    for (const auto& [name, st] : analytic_electron_eigenstates(p, NuclearConfig::DownDown)) {
      const double ov = eigenstate_projection(p, NuclearConfig::DownDown, name, st);
      CHECK(1.0 - ov < 1e-8);
    }
  }
}

TEST_CASE("deep-exchange S~ approaches the bare singlet") {
  // Frozen: ((cos+sin)/sqrt 2)^2 at theta = atan(133)/2.
  DonorPairParams p;
  p.j = 133.0 * 90e3;
  const double ov =
      eigenstate_projection(p, NuclearConfig::DownDown, "S~", singlet_state());
  CHECK(ov == Catch::Approx(0.999985868).margin(1e-8));
}

TEST_CASE("full Hamiltonian: traceless and Hermitian") {
  DonorPairParams p;
  const Matrix16cd h = build_hamiltonian(p);
  CHECK(std::abs(h.trace()) < 1e-3);
  CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-6);
  CHECK_THROWS_AS(eigensystem(Eigen::MatrixXcd(h + Eigen::MatrixXcd::Ones(16, 16) *
                                                       Complex(0.0, 1e6))),
                  ContractError);
}

TEST_CASE("full 16-dim spectrum at defaults matches frozen reference") {
  // Frozen against an independent dense diagonalization of the same
  // parameter set.
  const double ref[16] = {
      -28044970092.307449, -27969140392.606762, -27969095204.442207,
      -27893265504.741299, -61213434.128983,    -61213047.740232,
      -24852279.311378,    -14852220.883496,    9852265.431345,
      19852322.135034,     56213282.806860,     56213286.433432,
      27932970004.936382,  27974095348.866207,  27974140160.811256,
      28015265504.741299};
  DonorPairParams p;
  const EigenSystem es = full_eigensystem(p);
  REQUIRE(es.dim() == 16);
  for (int i = 0; i < 16; ++i)
    CHECK(es.energies(i) == Catch::Approx(ref[i]).margin(1e-2));
}

TEST_CASE("full eigensystem labels cover every electron/nuclear sector") {
  DonorPairParams p;
  const EigenSystem es = full_eigensystem(p);
  int dd = 0;
  for (const auto& l : es.labels)
    if (l.size() >= 2 && l.substr(l.size() - 2) == "DD") ++dd;
  CHECK(dd == 4);
  CHECK_NOTHROW(es.index_of("S~DD"));
  CHECK_NOTHROW(es.index_of("T0~DD"));
  CHECK_NOTHROW(es.index_of("T+UU"));
}

TEST_CASE("parallel ESR lines") {
  DonorPairParams p;
  const auto lines = esr_frequencies(p, NuclearConfig::DownDown);
  REQUIRE(lines.size() == 4);
  double f_beta = 0, f_am = 0, f_ap = 0, f_gamma = 0;
  for (const auto& l : lines) {
    if (l.label == "f_beta") f_beta = l.frequency;
    if (l.label == "f_alpha-") f_am = l.frequency;
    if (l.label == "f_alpha+") f_ap = l.frequency;
    if (l.label == "f_gamma") f_gamma = l.frequency;
  }
  CHECK(f_beta < f_am);
  CHECK(f_ap < f_gamma);
  // The alpha sub-transitions are split by sqrt(J^2 + dA^2) - J.
  // The splitting is a difference of ~28 GHz eigenvalues, so absolute
  // accuracy bottoms out near eps * 28e9 ~ 1e-5 Hz.
  const double split = std::hypot(p.j, 90e3) - p.j;
  CHECK(f_ap - f_am == Catch::Approx(split).margin(1e-4));
  CHECK(f_ap - f_am == Catch::Approx(404.991799).margin(1e-3));
  // beta and gamma are J away from the alpha pair.
  CHECK(f_gamma - f_ap == Catch::Approx(p.j).epsilon(1e-6));
}

TEST_CASE("anti-parallel ESR lines separated by roughly J") {
  DonorPairParams p;
  const auto lines = esr_frequencies(p, NuclearConfig::DownUp);
  REQUIRE(lines.size() == 4);
  double f1d = 0, f1u = 0;
  for (const auto& l : lines) {
    if (l.label == "f_e1|e2=d") f1d = l.frequency;
    if (l.label == "f_e1|e2=u") f1u = l.frequency;
  }
  CHECK(std::abs(std::abs(f1u - f1d) - p.j) / p.j < 1e-3);
}

TEST_CASE("parameter validation") {
  DonorPairParams p;
  p.b0 = -1.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = DonorPairParams{};
  p.j = -1.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
}
