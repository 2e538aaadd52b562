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

#ifndef QDARWIN_LINALG_HPP
#define QDARWIN_LINALG_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qdarwin/error.hpp"

namespace qdarwin {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Eigenvalues in descending order with orthonormal eigenvectors as columns.
struct Eigensystem {
  RealVector values;
  ComplexMatrix vectors;
};

/// Largest entry-wise deviation from Hermiticity, |m - m^dagger|_max.
inline double hermiticity_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

inline ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

namespace detail {

// Index of the first component whose magnitude exceeds `floor`.
inline Eigen::Index first_nonzero(const ComplexVector& v, double floor = 1e-12) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v(i)) > floor) return i;
  return v.size();
}

// Rotates the global phase so that the largest-magnitude component is real and
// positive. Near-ties are broken towards the lower index.
inline void canonicalize_phase(Eigen::Ref<ComplexVector> v) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) best = std::max(best, std::abs(v(i)));
  if (best == 0.0) return;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) >= best * (1.0 - 1e-9)) {
      v *= std::conj(v(i)) / std::abs(v(i));
      v(i) = cplx(std::abs(v(i)), 0.0);
      return;
    }
  }
}

// Replaces the columns of `cluster` by the Gram-Schmidt orthonormalisation of
// the standard basis vectors projected onto their span. The result depends on
// the subspace only, not on the basis the solver happened to return.
inline ComplexMatrix canonical_subspace_basis(const ComplexMatrix& cluster) {
  const Eigen::Index n = cluster.rows();
  const Eigen::Index k = cluster.cols();
  ComplexMatrix projector = cluster * cluster.adjoint();
  ComplexMatrix out(n, k);
  Eigen::Index found = 0;
  for (Eigen::Index j = 0; j < n && found < k; ++j) {
    ComplexVector w = projector.col(j);
    for (Eigen::Index q = 0; q < found; ++q) w -= out.col(q).dot(w) * out.col(q);
    for (Eigen::Index q = 0; q < found; ++q) w -= out.col(q).dot(w) * out.col(q);
    const double norm = w.norm();
    if (norm > 1e-6) out.col(found++) = w / norm;
  }
  if (found < k) return cluster;
  return out;
}

}  // namespace detail

/// Eigenvalues only, descending. The input is symmetrised before solving.
inline RealVector hermitian_eigenvalues(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(m), Eigen::EigenvaluesOnly);
  RealVector asc = solver.eigenvalues();
  return asc.reverse();
}

/// Hermitian eigendecomposition with deterministic output.
///
/// Eigenvalues are sorted descending. Inside a degenerate cluster (consecutive
/// gap below `degeneracy_gap`) the eigenvectors are replaced by a canonical
/// orthonormal basis of the cluster's eigenspace; every eigenvector then has
/// its largest-magnitude component made real-positive and vectors in a cluster
/// are ordered by the index of their first nonzero component.
inline Eigensystem eig_hermitian(const ComplexMatrix& m, double herm_tol = 1e-9,
                                 double degeneracy_gap = 1e-9) {
  if (m.rows() != m.cols())
    throw Error(ErrorCode::DimensionMismatch, "eig_hermitian needs a square matrix");
  const double defect = hermiticity_defect(m);
  if (!(defect <= herm_tol))
    throw Error(ErrorCode::NotHermitian, "hermiticity defect " + std::to_string(defect));

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(m));
  const Eigen::Index n = m.rows();
  Eigensystem out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();

  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index stop = start + 1;
    while (stop < n && out.values(stop - 1) - out.values(stop) < degeneracy_gap) ++stop;
    const Eigen::Index size = stop - start;
    if (size > 1) {
      ComplexMatrix basis = detail::canonical_subspace_basis(out.vectors.middleCols(start, size));
      for (Eigen::Index q = 0; q < size; ++q) detail::canonicalize_phase(basis.col(q));
      std::vector<Eigen::Index> order(static_cast<std::size_t>(size));
      std::iota(order.begin(), order.end(), Eigen::Index{0});
      std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return detail::first_nonzero(basis.col(a)) < detail::first_nonzero(basis.col(b));
      });
      for (Eigen::Index q = 0; q < size; ++q) out.vectors.col(start + q) = basis.col(order[q]);
    } else {
      detail::canonicalize_phase(out.vectors.col(start));
    }
    start = stop;
  }
  return out;
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Square root of a positive semidefinite matrix; negative eigenvalues from
/// rounding are clamped to zero.
inline ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(m));
  RealVector roots = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return solver.eigenvectors() * roots.asDiagonal() * solver.eigenvectors().adjoint();
}

/// Trace norm of a Hermitian matrix: sum of absolute eigenvalues.
inline double trace_norm_hermitian(const ComplexMatrix& m) {
  return hermitian_eigenvalues(m).cwiseAbs().sum();
}

/// Trace norm of a general matrix: sum of singular values.
inline double trace_norm(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues().sum();
}

/// exp(i H) for Hermitian H.
inline ComplexMatrix expi_hermitian(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(h));
  ComplexVector phases(h.rows());
  for (Eigen::Index i = 0; i < h.rows(); ++i)
    phases(i) = std::polar(1.0, solver.eigenvalues()(i));
  return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

/// Largest deviation of `basis^dagger basis` from the identity.
inline double orthonormality_defect(const ComplexMatrix& basis) {
  ComplexMatrix gram = basis.adjoint() * basis;
  gram -= ComplexMatrix::Identity(gram.rows(), gram.cols());
  return gram.cwiseAbs().maxCoeff();
}

}  // namespace qdarwin

#endif  // QDARWIN_LINALG_HPP
