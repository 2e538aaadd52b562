// Copyright 2026 The qdarwin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QDARWIN_ZOO_HPP
#define QDARWIN_ZOO_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "qdarwin/error.hpp"
#include "qdarwin/layout.hpp"
#include "qdarwin/linalg.hpp"
#include "qdarwin/optimizer.hpp"
#include "qdarwin/state.hpp"

namespace qdarwin {

using Seed = std::uint64_t;

// Large enough for a system qubit with six environment qubits.
inline constexpr std::size_t kMaxZooDim = 128;

/// Branch data of a broadcast state
///   sum_i p_i |i><i| (x) rho_i^{E_1} (x) ... (x) rho_i^{E_N}.
/// supports[i][k] lists the basis indices of E_k on which branch i lives,
/// spectra[i][k] the matching eigenvalues. `unitaries`, if non-empty, holds
/// one local basis change per subenvironment.
struct SbsSpec {
  std::vector<double> probabilities;
  std::vector<std::size_t> subenvironment_dims;
  std::vector<std::vector<std::vector<std::size_t>>> supports;
  std::vector<std::vector<std::vector<double>>> spectra;
  std::vector<ComplexMatrix> unitaries;
};

namespace detail {

/// Sorted uniform spacings: a flat point on the (n-1)-simplex.
template <class Rng>
std::vector<double> flat_simplex(std::size_t n, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> cuts{0.0, 1.0};
  for (std::size_t i = 0; i + 1 < n; ++i) cuts.push_back(u(rng));
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) out.push_back(cuts[i + 1] - cuts[i]);
  return out;
}

inline ComplexMatrix projector(const ComplexVector& v) { return v * v.adjoint(); }

inline ComplexVector basis_vector(std::size_t d, std::size_t i) {
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(d));
  v(static_cast<Eigen::Index>(i)) = 1.0;
  return v;
}

inline ComplexMatrix diag_projector(std::size_t d, std::size_t i) { return projector(basis_vector(d, i)); }

}  // namespace detail

inline DensityMatrix make_sbs(const SbsSpec& spec) {
  const std::size_t nb = spec.probabilities.size();
  const std::size_t n = spec.subenvironment_dims.size();
  if (nb < 2) throw Error(ErrorCode::InvalidArgument, "need at least two branches");
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "need at least one subenvironment");
  if (spec.supports.size() != nb || spec.spectra.size() != nb)
    throw Error(ErrorCode::InvalidArgument, "supports/spectra must list every branch");
  if (!spec.unitaries.empty() && spec.unitaries.size() != n)
    throw Error(ErrorCode::InvalidArgument, "one unitary per subenvironment");
  double total = 0.0;
  for (double p : spec.probabilities) {
    if (!(p >= 0.0)) throw Error(ErrorCode::InvalidArgument, "negative branch probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw Error(ErrorCode::InvalidArgument, "branch probabilities must sum to 1");

  for (std::size_t k = 0; k < n; ++k) {
    std::set<std::size_t> used;
    for (std::size_t i = 0; i < nb; ++i) {
      if (spec.supports[i].size() != n || spec.spectra[i].size() != n)
        throw Error(ErrorCode::InvalidArgument, "branch " + std::to_string(i) + " must cover every subenvironment");
      const auto& sup = spec.supports[i][k];
      const auto& sp = spec.spectra[i][k];
      if (sup.empty() || sup.size() != sp.size())
        throw Error(ErrorCode::InvalidArgument, "support and spectrum sizes differ");
      double s = 0.0;
      for (double x : sp) {
        if (!(x >= 0.0)) throw Error(ErrorCode::InvalidArgument, "negative conditional eigenvalue");
        s += x;
      }
      if (std::abs(s - 1.0) > 1e-9) throw Error(ErrorCode::InvalidArgument, "conditional spectrum must sum to 1");
      for (auto j : sup) {
        if (j >= spec.subenvironment_dims[k]) throw Error(ErrorCode::InvalidArgument, "support index out of range");
        if (!used.insert(j).second)
          throw Error(ErrorCode::OverlappingSupports,
                      "index " + std::to_string(j) + " of E" + std::to_string(k + 1) + " used twice");
      }
    }
  }

  std::vector<std::size_t> dims{nb};
  dims.insert(dims.end(), spec.subenvironment_dims.begin(), spec.subenvironment_dims.end());
  const SubsystemLayout layout = SubsystemLayout::system_environment(dims);
  const auto total_dim = static_cast<Eigen::Index>(layout.total_dim());
  ComplexMatrix rho = ComplexMatrix::Zero(total_dim, total_dim);
  for (std::size_t i = 0; i < nb; ++i) {
    if (spec.probabilities[i] == 0.0) continue;
    ComplexMatrix branch = detail::diag_projector(nb, i);
    for (std::size_t k = 0; k < n; ++k) {
      const auto d = static_cast<Eigen::Index>(spec.subenvironment_dims[k]);
      ComplexMatrix local = ComplexMatrix::Zero(d, d);
      for (std::size_t a = 0; a < spec.supports[i][k].size(); ++a) {
        const auto j = static_cast<Eigen::Index>(spec.supports[i][k][a]);
        local(j, j) = spec.spectra[i][k][a];
      }
      if (!spec.unitaries.empty()) local = spec.unitaries[k] * local * spec.unitaries[k].adjoint();
      branch = kron(branch, local);
    }
    rho += spec.probabilities[i] * branch;
  }
  return DensityMatrix::assume_valid(rho, layout);
}

/// Random broadcast state: flat-simplex branch probabilities and spectra,
/// contiguous supports of random size (at least one index per branch) and a
/// Haar-random basis on every subenvironment. Subenvironment dims are drawn
/// uniformly from [n_branches, max_dim].
inline SbsSpec random_sbs_spec(Seed seed, std::size_t n_branches, std::size_t n_subenvs, std::size_t max_dim) {
  if (n_branches < 2) throw Error(ErrorCode::InvalidArgument, "need at least two branches");
  if (n_subenvs < 1) throw Error(ErrorCode::InvalidArgument, "need at least one subenvironment");
  if (max_dim < n_branches)
    throw Error(ErrorCode::DimensionTooSmall, "subenvironment dim " + std::to_string(max_dim) + " cannot hold " +
                                                  std::to_string(n_branches) + " disjoint supports");
  std::mt19937_64 rng(seed);
  SbsSpec spec;
  spec.probabilities = detail::flat_simplex(n_branches, rng);
  spec.supports.assign(n_branches, {});
  spec.spectra.assign(n_branches, {});
  std::uniform_int_distribution<std::size_t> pick_dim(n_branches, max_dim);
  std::uniform_int_distribution<std::size_t> pick_branch(0, n_branches - 1);
  for (std::size_t k = 0; k < n_subenvs; ++k) {
    const std::size_t d = pick_dim(rng);
    spec.subenvironment_dims.push_back(d);
    std::vector<std::size_t> sizes(n_branches, 1);
    for (std::size_t extra = n_branches; extra < d; ++extra)
      if (rng() & 1u) ++sizes[pick_branch(rng)];  // leave some indices unused
    std::size_t next = 0;
    for (std::size_t i = 0; i < n_branches; ++i) {
      std::vector<std::size_t> sup(sizes[i]);
      std::iota(sup.begin(), sup.end(), next);
      next += sizes[i];
      spec.supports[i].push_back(sup);
      spec.spectra[i].push_back(detail::flat_simplex(sizes[i], rng));
    }
    spec.unitaries.push_back(haar_unitary(d, rng));
  }
  return spec;
}

inline DensityMatrix make_random_sbs(Seed seed, std::size_t n_branches, std::size_t n_subenvs,
                                     std::size_t max_dim) {
  return make_sbs(random_sbs_spec(seed, n_branches, n_subenvs, max_dim));
}

/// 1/2 (|0><0|^{(x)(N+1)} + |1><1|^{(x)(N+1)}), system first.
inline DensityMatrix make_ghz_reduced(std::size_t n_subenvs) {
  if (n_subenvs < 1) throw Error(ErrorCode::InvalidArgument, "need n_subenvs >= 1");
  const SubsystemLayout layout = SubsystemLayout::system_environment(std::vector<std::size_t>(n_subenvs + 1, 2));
  if (layout.total_dim() > (std::size_t{1} << 20)) throw Error(ErrorCode::DimensionTooLarge, "ghz too large");
  const auto d = static_cast<Eigen::Index>(layout.total_dim());
  ComplexMatrix rho = ComplexMatrix::Zero(d, d);
  rho(0, 0) = 0.5;
  rho(d - 1, d - 1) = 0.5;
  return DensityMatrix::assume_valid(rho, layout);
}

/// p P(a|00> + b|11>) + (1-p) P(a|10> + b|01>), a = sqrt(p), b = sqrt(1-p).
inline DensityMatrix make_horodecki(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidArgument, "p must lie in [0, 1]");
  const double a = std::sqrt(p), b = std::sqrt(1.0 - p);
  ComplexVector psi1 = ComplexVector::Zero(4), psi2 = ComplexVector::Zero(4);
  psi1(0) = a;  // |00>
  psi1(3) = b;  // |11>
  psi2(2) = a;  // |10>
  psi2(1) = b;  // |01>
  const ComplexMatrix rho = p * detail::projector(psi1) + (1.0 - p) * detail::projector(psi2);
  return DensityMatrix::assume_valid(rho, SubsystemLayout::system_environment({2, 2}));
}

namespace detail {

inline void check_appendix_b(std::size_t n, double p1) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "need n_subenvs >= 2");
  if (!(p1 > 0.0 && p1 < 1.0)) throw Error(ErrorCode::InvalidArgument, "p1 must lie in (0, 1)");
  double dim = 2.0 * std::pow(4.0, static_cast<double>(n));
  if (dim > 4096.0) throw Error(ErrorCode::DimensionTooLarge, "too many subenvironments");
}

/// Index of |j,j,...,j> on n factors of dimension 4.
inline Eigen::Index repeated_index(std::size_t n, std::size_t j) {
  Eigen::Index idx = 0;
  for (std::size_t k = 0; k < n; ++k) idx = idx * 4 + static_cast<Eigen::Index>(j);
  return idx;
}

}  // namespace detail

/// System qubit, N ququarts; branch 1 mixes |0...0> and |1...1>, branch 2
/// mixes |2...2> and |3...3>.
inline DensityMatrix make_appendix_b1(std::size_t n_subenvs, double p1 = 0.5) {
  detail::check_appendix_b(n_subenvs, p1);
  std::vector<std::size_t> dims{2};
  dims.insert(dims.end(), n_subenvs, 4);
  const SubsystemLayout layout = SubsystemLayout::system_environment(dims);
  const auto de = static_cast<Eigen::Index>(layout.total_dim() / 2);
  const auto d = static_cast<Eigen::Index>(layout.total_dim());
  ComplexMatrix rho = ComplexMatrix::Zero(d, d);
  const double p[2] = {p1, 1.0 - p1};
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 2 * i; j < 2 * i + 2; ++j) {
      const Eigen::Index x = static_cast<Eigen::Index>(i) * de + detail::repeated_index(n_subenvs, j);
      rho(x, x) = 0.5 * p[i];
    }
  return DensityMatrix::assume_valid(rho, layout);
}

/// Same supports as make_appendix_b1 with coherent branches
/// (|0...0> + |1...1>)/sqrt2 and (|2...2> + |3...3>)/sqrt2.
inline DensityMatrix make_appendix_b2(std::size_t n_subenvs, double p1 = 0.5) {
  detail::check_appendix_b(n_subenvs, p1);
  std::vector<std::size_t> dims{2};
  dims.insert(dims.end(), n_subenvs, 4);
  const SubsystemLayout layout = SubsystemLayout::system_environment(dims);
  const auto de = static_cast<Eigen::Index>(layout.total_dim() / 2);
  const auto d = static_cast<Eigen::Index>(layout.total_dim());
  ComplexMatrix rho = ComplexMatrix::Zero(d, d);
  const double p[2] = {p1, 1.0 - p1};
  for (std::size_t i = 0; i < 2; ++i) {
    ComplexVector v = ComplexVector::Zero(d);
    for (std::size_t j = 2 * i; j < 2 * i + 2; ++j)
      v(static_cast<Eigen::Index>(i) * de + detail::repeated_index(n_subenvs, j)) = 1.0 / std::sqrt(2.0);
    rho += p[i] * detail::projector(v);
  }
  return DensityMatrix::assume_valid(rho, layout);
}

/// U|0> for a Haar-random U (Ginibre columns, QR, phases of R's diagonal
/// made positive).
inline PureState make_haar_random_pure(Seed seed, const SubsystemLayout& layout) {
  const std::size_t d = layout.total_dim();
  if (d > kMaxZooDim)
    throw Error(ErrorCode::DimensionTooLarge, "total dim " + std::to_string(d) + " exceeds " +
                                                  std::to_string(kMaxZooDim));
  std::mt19937_64 rng(seed);
  const ComplexMatrix u = haar_unitary(d, rng);
  ComplexVector psi = u.col(0);
  psi /= psi.norm();
  return PureState(psi, layout);
}

/// Classical-quantum state sum_i p_i |i><i| (x) |psi_i><psi_i| on [S:n, E1:n].
/// psi_0 = e_0 and psi_i = c psi_{i-1} + sqrt(1-c^2) e_i, so neighbouring
/// conditionals have |<psi_{i-1}|psi_i>| = c exactly; a Haar unitary then
/// scrambles the fragment basis.
inline DensityMatrix make_cq_state(Seed seed, const std::vector<double>& p_list, double overlap) {
  const std::size_t n = p_list.size();
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "need at least two branches");
  if (!(overlap >= 0.0 && overlap <= 1.0)) throw Error(ErrorCode::InvalidArgument, "overlap must lie in [0, 1]");
  double total = 0.0;
  for (double p : p_list) {
    if (!(p >= 0.0)) throw Error(ErrorCode::InvalidArgument, "negative probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw Error(ErrorCode::InvalidArgument, "probabilities must sum to 1");
  if (n * n > kMaxZooDim) throw Error(ErrorCode::DimensionTooLarge, "too many branches");

  std::mt19937_64 rng(seed);
  const ComplexMatrix u = haar_unitary(n, rng);
  const double s = std::sqrt(std::max(0.0, 1.0 - overlap * overlap));
  const auto dn = static_cast<Eigen::Index>(n);
  ComplexMatrix rho = ComplexMatrix::Zero(dn * dn, dn * dn);
  ComplexVector psi = detail::basis_vector(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) psi = overlap * psi + s * detail::basis_vector(n, i);
    const ComplexVector v = u * psi;
    rho += p_list[i] * kron(detail::diag_projector(n, i), detail::projector(v));
  }
  return DensityMatrix::assume_valid(rho, SubsystemLayout::system_environment({n, n}));
}

/// G G^dagger / tr for a complex Ginibre matrix G (Hilbert-Schmidt measure).
template <class Rng>
ComplexMatrix random_density_matrix(std::size_t d, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto n = static_cast<Eigen::Index>(d);
  ComplexMatrix g(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) g(i, j) = cplx(normal(rng), normal(rng));
  ComplexMatrix m = g * g.adjoint();
  return m / m.trace().real();
}

inline DensityMatrix make_random_state(Seed seed, const SubsystemLayout& layout) {
  std::mt19937_64 rng(seed);
  return DensityMatrix::assume_valid(random_density_matrix(layout.total_dim(), rng), layout);
}

/// (1 - eps) rho + eps sigma with sigma a random full-rank state; stays a
/// valid state for every eps in [0, 1].
inline DensityMatrix make_perturbed(const DensityMatrix& rho, Seed seed, double eps) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw Error(ErrorCode::InvalidArgument, "perturbation must lie in [0, 1]");
  std::mt19937_64 rng(seed);
  const ComplexMatrix sigma = random_density_matrix(rho.dim(), rng);
  return DensityMatrix::assume_valid((1.0 - eps) * rho.matrix() + eps * sigma, rho.layout());
}

}  // namespace qdarwin

#endif  // QDARWIN_ZOO_HPP
