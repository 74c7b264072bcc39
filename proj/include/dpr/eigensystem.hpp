#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "dpr/hamiltonian.hpp"
#include "dpr/params.hpp"
#include "dpr/spin_state.hpp"

namespace dpr {

// Eigendecomposition with ascending energies and adiabatic labels. Columns
// of `states` are the orthonormal eigenvectors.
struct EigenSystem {
  Eigen::VectorXd energies;   // Hz, ascending
  Eigen::MatrixXcd states;
  std::vector<std::string> labels;

  int dim() const { return static_cast<int>(energies.size()); }

  int index_of(const std::string& label) const {
    for (int i = 0; i < dim(); ++i)
      if (labels[i] == label) return i;
    throw ContractError("EigenSystem: unknown eigenstate label '" + label + "'");
  }

  SpinState state(int i, std::vector<std::string> basis) const {
    SpinState s;
    s.amplitudes = states.col(i);
    s.basis = std::move(basis);
    return s;
  }
};

inline EigenSystem eigensystem(const Eigen::MatrixXcd& h) {
  const double scale = std::max(h.cwiseAbs().maxCoeff(), 1.0);
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * scale)
    throw ContractError("eigensystem: input matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  EigenSystem es;
  es.energies = solver.eigenvalues();
  es.states = solver.eigenvectors();
  es.labels.assign(es.dim(), "");
  return es;
}

// Closed-form electron eigenstates for a fixed nuclear configuration, with
// adiabatic labels. Parallel nuclei use the singlet/triplet naming
// {T-, S~, T0~, T+}; anti-parallel nuclei the product naming
// {dd, du~, ud~, uu}. The odd-parity pair follows the mixing-angle forms
// cos(theta)|du> -/+ sin(theta)|ud> with tan(2 theta) = J/|Delta|.
inline std::vector<std::pair<std::string, SpinState>> analytic_electron_eigenstates(
    const DonorPairParams& p, NuclearConfig cfg) {
  const double delta = signed_detuning(p, cfg);
  const double theta = mixing_angle(p.j, delta);
  // Odd-parity pair, lower energy first.
  SpinState low, high;
  if (delta >= 0.0) {
    low = du_tilde_state(theta);   // cos|du> - sin|ud>
    high = ud_tilde_state(theta);  // sin|du> + cos|ud>
  } else {
    Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
    v(1) = -std::sin(theta);
    v(2) = std::cos(theta);
    low = electron_state(v);       // cos|ud> - sin|du>
    v(1) = std::cos(theta);
    v(2) = std::sin(theta);
    high = electron_state(v);      // cos|du> + sin|ud>
  }
  std::vector<std::pair<std::string, SpinState>> out;
  if (parallel(cfg)) {
    out.emplace_back("T-", t_minus_state());
    out.emplace_back("S~", low);
    out.emplace_back("T0~", high);
    out.emplace_back("T+", t_plus_state());
  } else {
    auto odd_label = [](const SpinState& s) {
      return std::norm(s.amplitudes(1)) >= std::norm(s.amplitudes(2)) ? "du~" : "ud~";
    };
    out.emplace_back("dd", t_minus_state());
    out.emplace_back(odd_label(low), low);
    out.emplace_back(odd_label(high), high);
    out.emplace_back("uu", t_plus_state());
  }
  return out;
}

namespace detail {

// Assign labels by maximal overlap with the named states; within blocks of
// (near-)degenerate eigenvalues the raw eigenvectors are arbitrary, so the
// block is first re-projected onto the named states spanning it.
inline void label_by_overlap(
    EigenSystem& es,
    const std::vector<std::pair<std::string, SpinState>>& named) {
  const double scale = std::max(es.energies.cwiseAbs().maxCoeff(), 1.0);
  const double tol = 1e-9 * scale;
  int i = 0;
  while (i < es.dim()) {
    int j = i + 1;
    while (j < es.dim() && es.energies(j) - es.energies(j - 1) < tol) ++j;
    if (j - i > 1) {
      // Project each named state onto the degenerate block span; keep the
      // projections with the largest norm and orthonormalize.
      const auto block = es.states.middleCols(i, j - i);
      std::vector<std::pair<double, Eigen::VectorXcd>> cand;
      for (const auto& [name, st] : named) {
        Eigen::VectorXcd proj = block * (block.adjoint() * st.amplitudes);
        cand.emplace_back(proj.norm(), proj);
      }
      std::vector<int> order(cand.size());
      for (size_t k = 0; k < order.size(); ++k) order[k] = static_cast<int>(k);
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return cand[a].first > cand[b].first;
      });
      Eigen::MatrixXcd rebuilt(es.states.rows(), j - i);
      int filled = 0;
      for (int k : order) {
        if (filled == j - i) break;
        Eigen::VectorXcd v = cand[k].second;
        for (int c = 0; c < filled; ++c)
          v -= rebuilt.col(c) * (rebuilt.col(c).adjoint() * v);
        if (v.norm() > 1e-6) rebuilt.col(filled++) = v.normalized();
      }
      if (filled == j - i) es.states.middleCols(i, j - i) = rebuilt;
    }
    i = j;
  }
  for (int k = 0; k < es.dim(); ++k) {
    double best = -1.0;
    for (const auto& [name, st] : named) {
      const double ov = std::norm(st.amplitudes.dot(es.states.col(k)));
      if (ov > best) {
        best = ov;
        es.labels[k] = name;
      }
    }
  }
}

}  // namespace detail

// Diagonalized electron sector with adiabatic labels.
inline EigenSystem electron_eigensystem(const DonorPairParams& p, NuclearConfig cfg) {
  EigenSystem es = eigensystem(electron_hamiltonian(p, cfg));
  detail::label_by_overlap(es, analytic_electron_eigenstates(p, cfg));
  return es;
}

// Full 16-dim eigensystem labeled as <electron label><nuclear word>, e.g.
// "S~DD". Labels are assigned per dominant nuclear sector.
inline EigenSystem full_eigensystem(const DonorPairParams& p) {
  EigenSystem es = eigensystem(Eigen::MatrixXcd(build_hamiltonian(p)));
  std::vector<std::pair<std::string, SpinState>> named;
  const NuclearConfig cfgs[] = {NuclearConfig::DownDown, NuclearConfig::DownUp,
                                NuclearConfig::UpDown, NuclearConfig::UpUp};
  const char* words[] = {"DD", "DU", "UD", "UU"};
  for (int c = 0; c < 4; ++c) {
    const int n1 = (c >> 1) & 1, n2 = c & 1;
    for (const auto& [name, st] : analytic_electron_eigenstates(p, cfgs[c])) {
      SpinState fullst;
      fullst.amplitudes = Eigen::VectorXcd::Zero(16);
      for (int e = 0; e < 4; ++e)
        fullst.amplitudes(e * 4 + n1 * 2 + n2) = st.amplitudes(e);
      fullst.basis = full_basis_labels();
      named.emplace_back(name + words[c], fullst);
    }
  }
  detail::label_by_overlap(es, named);
  return es;
}

// |<target|eigenstate>|^2 for the labeled electron eigenstate.
inline double eigenstate_projection(const DonorPairParams& p, NuclearConfig cfg,
                                    const std::string& which,
                                    const SpinState& target) {
  target.check();
  const EigenSystem es = electron_eigensystem(p, cfg);
  const int i = es.index_of(which);
  return std::norm(target.amplitudes.dot(es.states.col(i)));
}

struct EsrLine {
  std::string label;
  std::string from;
  std::string to;
  double frequency = 0.0;  // Hz
};

// ESR transition frequencies as energy differences of the electron-sector
// eigensystem. Parallel nuclei: the beta line T- <-> S~, the two alpha
// sub-transitions T- <-> T0~ and T0~ <-> T+ (split by sqrt(J^2+dA^2) - J),
// and the gamma line S~ <-> T+. Anti-parallel nuclei: two conditional
// rotation frequencies per electron, separated by approximately J.
inline std::vector<EsrLine> esr_frequencies(const DonorPairParams& p,
                                            NuclearConfig cfg) {
  const EigenSystem es = electron_eigensystem(p, cfg);
  auto gap = [&](const std::string& a, const std::string& b) {
    return es.energies(es.index_of(b)) - es.energies(es.index_of(a));
  };
  std::vector<EsrLine> out;
  if (parallel(cfg)) {
    out.push_back({"f_beta", "T-", "S~", gap("T-", "S~")});
    const double f_lower = gap("T-", "T0~");
    const double f_upper = gap("T0~", "T+");
    if (f_lower <= f_upper) {
      out.push_back({"f_alpha-", "T-", "T0~", f_lower});
      out.push_back({"f_alpha+", "T0~", "T+", f_upper});
    } else {
      out.push_back({"f_alpha-", "T0~", "T+", f_upper});
      out.push_back({"f_alpha+", "T-", "T0~", f_lower});
    }
    out.push_back({"f_gamma", "S~", "T+", gap("S~", "T+")});
  } else {
    out.push_back({"f_e1|e2=d", "dd", "ud~", gap("dd", "ud~")});
    out.push_back({"f_e1|e2=u", "du~", "uu", gap("du~", "uu")});
    out.push_back({"f_e2|e1=d", "dd", "du~", gap("dd", "du~")});
    out.push_back({"f_e2|e1=u", "ud~", "uu", gap("ud~", "uu")});
  }
  return out;
}

}  // namespace dpr
