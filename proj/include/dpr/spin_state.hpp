#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "dpr/error.hpp"
#include "dpr/params.hpp"

namespace dpr {

using Complex = std::complex<double>;

// Canonical basis ordering: |e1 e2 n1 n2> with down = index 0, so the basis
// index of the full 16-dim space is e1*8 + e2*4 + n1*2 + n2. The 4-dim
// electron subspace uses e1*2 + e2 with labels "dd","du","ud","uu"
// (d = electron down, u = electron up). Full-space labels append the nuclear
// word in capitals, e.g. "duDU".
inline std::vector<std::string> electron_basis_labels() {
  return {"dd", "du", "ud", "uu"};
}

inline std::vector<std::string> full_basis_labels() {
  std::vector<std::string> out;
  const char* e = "du";
  const char* n = "DU";
  for (int e1 = 0; e1 < 2; ++e1)
    for (int e2 = 0; e2 < 2; ++e2)
      for (int n1 = 0; n1 < 2; ++n1)
        for (int n2 = 0; n2 < 2; ++n2)
          out.push_back({e[e1], e[e2], n[n1], n[n2]});
  return out;
}

// Normalized complex amplitude vector over a labeled spin basis.
struct SpinState {
  Eigen::VectorXcd amplitudes;
  std::vector<std::string> basis;

  int dim() const { return static_cast<int>(amplitudes.size()); }

  double norm_error() const { return std::abs(amplitudes.squaredNorm() - 1.0); }

  void check() const {
    if (static_cast<int>(basis.size()) != dim())
      throw ContractError("SpinState: basis length does not match dimension");
    if (norm_error() > 1e-12)
      throw ContractError("SpinState: amplitudes not normalized");
  }
};

inline SpinState electron_state(const Eigen::Vector4cd& amps) {
  SpinState s;
  s.amplitudes = amps;
  s.basis = electron_basis_labels();
  return s;
}

inline SpinState basis_state(int index) {
  Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
  v(index) = 1.0;
  return electron_state(v);
}

inline SpinState t_minus_state() { return basis_state(0); }
inline SpinState t_plus_state() { return basis_state(3); }

// Hybridized odd-parity eigenstates at mixing angle theta:
//   |du~> = cos(theta)|du> - sin(theta)|ud>
//   |ud~> = cos(theta)|ud> + sin(theta)|du>
// In the parallel regime (theta -> pi/4) these become the singlet-like and
// triplet-like states S~ and T0~; the sign convention here puts S~ = |du~>
// for positive signed detuning f1 > f2 and exchanges roles otherwise.
inline SpinState du_tilde_state(double theta) {
  Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
  v(1) = std::cos(theta);
  v(2) = -std::sin(theta);
  return electron_state(v);
}

inline SpinState ud_tilde_state(double theta) {
  Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
  v(1) = std::sin(theta);
  v(2) = std::cos(theta);
  return electron_state(v);
}

inline SpinState singlet_state() {
  Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
  v(1) = 1.0 / std::sqrt(2.0);
  v(2) = -1.0 / std::sqrt(2.0);
  return electron_state(v);
}

inline SpinState triplet_zero_state() {
  Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
  v(1) = 1.0 / std::sqrt(2.0);
  v(2) = 1.0 / std::sqrt(2.0);
  return electron_state(v);
}

inline double overlap_probability(const SpinState& a, const SpinState& b) {
  if (a.dim() != b.dim()) throw ContractError("overlap: dimension mismatch");
  const Complex ov = a.amplitudes.dot(b.amplitudes);
  return std::norm(ov);
}

}  // namespace dpr
