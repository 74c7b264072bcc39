#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <utility>
#include <vector>

#include "dpr/spin_state.hpp"

namespace dpr {

// Husimi Q function of a triplet-manifold electron state on the spin-1
// Bloch sphere, sampled on an equal-angle theta x phi grid. theta = 0 is
// the north pole (T+).
struct HusimiGrid {
  std::vector<double> thetas;  // [0, pi]
  std::vector<double> phis;    // [0, 2 pi]
  Eigen::MatrixXd q;           // n_theta x n_phi
};

inline double singlet_population(const SpinState& state) {
  return overlap_probability(singlet_state(), state);
}

// Q(theta, phi) = |<theta, phi|psi>|^2 with spin-1 coherent states
// |theta, phi> = R(theta, phi) |T+>. The state must lie in the triplet
// manifold (singlet population < 0.01).
inline HusimiGrid husimi(const SpinState& state, int n_theta = 181,
                         int n_phi = 361) {
  state.check();
  if (state.dim() != 4) throw ContractError("husimi: expected a 4-dim electron state");
  if (n_theta < 2 || n_phi < 2) throw ConfigError("husimi: grid too small");
  if (singlet_population(state) >= 0.01)
    throw ContractError("husimi: state is not in the triplet manifold");

  // Triplet amplitudes (c_{+1}, c_0, c_{-1}).
  const Complex cp = state.amplitudes(3);
  const Complex c0 = (state.amplitudes(1) + state.amplitudes(2)) / std::sqrt(2.0);
  const Complex cm = state.amplitudes(0);

  HusimiGrid g;
  g.thetas.resize(n_theta);
  g.phis.resize(n_phi);
  g.q.resize(n_theta, n_phi);
  for (int i = 0; i < n_theta; ++i) g.thetas[i] = M_PI * i / (n_theta - 1);
  for (int k = 0; k < n_phi; ++k) g.phis[k] = 2.0 * M_PI * k / (n_phi - 1);

  for (int i = 0; i < n_theta; ++i) {
    const double c = std::cos(0.5 * g.thetas[i]);
    const double s = std::sin(0.5 * g.thetas[i]);
    for (int k = 0; k < n_phi; ++k) {
      const Complex e1 = std::exp(Complex(0.0, g.phis[k]));
      // Coherent-state components in (m=+1, 0, -1).
      const Complex a_p = c * c;
      const Complex a_0 = std::sqrt(2.0) * c * s * e1;
      const Complex a_m = s * s * e1 * e1;
      const Complex ov = std::conj(a_p) * cp + std::conj(a_0) * c0 + std::conj(a_m) * cm;
      g.q(i, k) = std::norm(ov);
    }
  }
  return g;
}

// (2S+1)/(4 pi) * integral of Q over the sphere; 1 for a pure triplet state
// up to quadrature error. Trapezoidal weights in both angles.
inline double husimi_norm(const HusimiGrid& g) {
  const int nt = static_cast<int>(g.thetas.size());
  const int np = static_cast<int>(g.phis.size());
  const double dth = M_PI / (nt - 1);
  const double dph = 2.0 * M_PI / (np - 1);
  double total = 0.0;
  for (int i = 0; i < nt; ++i) {
    const double wt = (i == 0 || i == nt - 1) ? 0.5 : 1.0;
    double row = 0.0;
    for (int k = 0; k < np; ++k) {
      const double wp = (k == 0 || k == np - 1) ? 0.5 : 1.0;
      row += wp * g.q(i, k);
    }
    total += wt * row * std::sin(g.thetas[i]);
  }
  return 3.0 / (4.0 * M_PI) * total * dth * dph;
}

// Location of the grid maximum, returned as (theta, phi).
inline std::pair<double, double> husimi_argmax(const HusimiGrid& g) {
  Eigen::Index bi = 0, bk = 0;
  g.q.maxCoeff(&bi, &bk);
  return {g.thetas[bi], g.phis[bk]};
}

}  // namespace dpr
