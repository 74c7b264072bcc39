#pragma once

#include <Eigen/Dense>
#include <array>

#include "dpr/params.hpp"
#include "dpr/spin_state.hpp"

namespace dpr {

using Matrix16cd = Eigen::Matrix<Complex, 16, 16>;

namespace detail {

inline Eigen::Matrix2cd spin_half(int axis) {
  Eigen::Matrix2cd m;
  switch (axis) {
    case 0: m << 0.0, 0.5, 0.5, 0.0; break;                       // Sx
    case 1: m << 0.0, Complex(0, -0.5), Complex(0, 0.5), 0.0; break;  // Sy
    default: m << -0.5, 0.0, 0.0, 0.5; break;                     // Sz, down first
  }
  return m;
}

// Operator acting on one of the four spin-1/2 slots (e1,e2,n1,n2) of the
// 16-dim space, identity elsewhere. Slot 0 is the slowest index.
inline Matrix16cd slot_operator(const Eigen::Matrix2cd& op, int slot) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (int s = 0; s < 4; ++s) {
    const Eigen::Matrix2cd& factor =
        (s == slot) ? op : Eigen::Matrix2cd::Identity();
    Eigen::MatrixXcd next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index i = 0; i < out.rows(); ++i)
      for (Eigen::Index j = 0; j < out.cols(); ++j)
        next.block(i * 2, j * 2, 2, 2) = out(i, j) * factor;
    out = next;
  }
  return out;
}

inline Matrix16cd dot_product(int slot_a, int slot_b) {
  Matrix16cd out = Matrix16cd::Zero();
  for (int axis = 0; axis < 3; ++axis)
    out += slot_operator(spin_half(axis), slot_a) *
           slot_operator(spin_half(axis), slot_b);
  return out;
}

}  // namespace detail

// Full two-donor Hamiltonian H/h in Hz over the canonical |e1 e2 n1 n2>
// ordering: electron and nuclear Zeeman terms, isotropic hyperfine contact
// terms A_i S_i.I_i and the exchange term J S1.S2.
inline Matrix16cd build_hamiltonian(const DonorPairParams& p) {
  p.validate();
  using detail::dot_product;
  using detail::slot_operator;
  using detail::spin_half;

  const Eigen::Matrix2cd sz = spin_half(2);
  Matrix16cd h = Matrix16cd::Zero();
  h += p.gamma_e1() * p.b0 * slot_operator(sz, 0);
  h += p.gamma_e2() * p.b0 * slot_operator(sz, 1);
  h += p.gamma_n * p.b0 * (slot_operator(sz, 2) + slot_operator(sz, 3));
  h += p.a1 * dot_product(0, 2);
  h += p.a2 * dot_product(1, 3);
  h += p.j * dot_product(0, 1);
  return h;
}

// Effective electron-sector Hamiltonian (Hz) for a fixed nuclear
// configuration, over the 4-dim basis {dd, du, ud, uu}:
//
//   H = fbar (Sz1+Sz2) + (delta/2)(Sz1-Sz2) + J S1.S2
//
// with delta the signed electron detuning of the configuration and fbar the
// mean electron resonance frequency. The detuning follows the convention of
// detuning(): the mean hyperfine for anti-parallel nuclei and the full
// hyperfine difference |A1-A2| for parallel nuclei.
inline Eigen::Matrix4cd electron_hamiltonian(const DonorPairParams& p,
                                             NuclearConfig cfg) {
  p.validate();
  const double delta = signed_detuning(p, cfg);
  const double m1 = (cfg == NuclearConfig::UpDown || cfg == NuclearConfig::UpUp) ? 0.5 : -0.5;
  const double m2 = (cfg == NuclearConfig::DownUp || cfg == NuclearConfig::UpUp) ? 0.5 : -0.5;
  const double fbar = 0.5 * (p.gamma_e1() + p.gamma_e2()) * p.b0 +
                      0.5 * (m1 * p.a1 + m2 * p.a2);
  const double f1 = fbar + 0.5 * delta;
  const double f2 = fbar - 0.5 * delta;

  Eigen::Matrix4cd h = Eigen::Matrix4cd::Zero();
  // Zeeman-like diagonal, Sz eigenvalues -1/2 (down) and +1/2 (up).
  const double sz[2] = {-0.5, 0.5};
  for (int e1 = 0; e1 < 2; ++e1)
    for (int e2 = 0; e2 < 2; ++e2)
      h(e1 * 2 + e2, e1 * 2 + e2) = f1 * sz[e1] + f2 * sz[e2] + p.j * sz[e1] * sz[e2];
  // Exchange flip-flop J/2 (|du><ud| + h.c.).
  h(1, 2) += 0.5 * p.j;
  h(2, 1) += 0.5 * p.j;
  return h;
}

}  // namespace dpr
