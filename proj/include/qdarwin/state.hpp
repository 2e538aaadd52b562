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

#ifndef QDARWIN_STATE_HPP
#define QDARWIN_STATE_HPP

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qdarwin/error.hpp"
#include "qdarwin/layout.hpp"
#include "qdarwin/linalg.hpp"
#include "qdarwin/tolerances.hpp"

namespace qdarwin {

/// Hermitian, positive semidefinite, unit-trace matrix on a subsystem layout.
///
/// Instances are immutable. The only ways to obtain one are
/// validate_density_matrix() and the library operations, which produce valid
/// states from valid inputs.
class DensityMatrix {
 public:
  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  const SubsystemLayout& layout() const noexcept { return layout_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }

  /// Wraps a matrix known to be a state (up to rounding). Only the shape is
  /// checked; the matrix is symmetrised.
  static DensityMatrix assume_valid(const ComplexMatrix& m, SubsystemLayout layout) {
    if (m.rows() != m.cols() || static_cast<std::size_t>(m.rows()) != layout.total_dim())
      throw Error(ErrorCode::DimensionMismatch, "matrix shape does not match layout");
    return DensityMatrix(hermitian_part(m), std::move(layout));
  }

 private:
  DensityMatrix(ComplexMatrix m, SubsystemLayout layout)
      : matrix_(std::move(m)), layout_(std::move(layout)) {}

  ComplexMatrix matrix_;
  SubsystemLayout layout_;
};

inline DensityMatrix validate_density_matrix(const ComplexMatrix& m, const SubsystemLayout& layout,
                                             const Tolerances& tol = {}) {
  if (m.rows() != m.cols())
    throw Error(ErrorCode::DimensionMismatch, "matrix is not square");
  if (static_cast<std::size_t>(m.rows()) != layout.total_dim())
    throw Error(ErrorCode::DimensionMismatch,
                "matrix dimension " + std::to_string(m.rows()) + " but layout total " +
                    std::to_string(layout.total_dim()));
  if (!all_finite(m)) throw Error(ErrorCode::NonFinite, "matrix has NaN or Inf entries");
  const double defect = hermiticity_defect(m);
  if (defect > tol.herm)
    throw Error(ErrorCode::NotHermitian, "hermiticity defect " + std::to_string(defect));
  const double tr = m.trace().real();
  if (std::abs(tr - 1.0) > tol.trace)
    throw Error(ErrorCode::TraceNotOne, "trace " + std::to_string(tr));
  const RealVector ev = hermitian_eigenvalues(m);
  const double lowest = ev(ev.size() - 1);
  if (lowest < -tol.psd)
    throw Error(ErrorCode::NotPositive, "most negative eigenvalue " + std::to_string(lowest));
  return DensityMatrix::assume_valid(m, layout);
}

/// Normalised state vector on a layout.
class PureState {
 public:
  PureState(ComplexVector amplitudes, SubsystemLayout layout, const Tolerances& tol = {})
      : amplitudes_(std::move(amplitudes)), layout_(std::move(layout)) {
    if (static_cast<std::size_t>(amplitudes_.size()) != layout_.total_dim())
      throw Error(ErrorCode::DimensionMismatch, "amplitude count does not match layout");
    if (std::abs(amplitudes_.norm() - 1.0) > tol.trace)
      throw Error(ErrorCode::TraceNotOne, "state vector norm " + std::to_string(amplitudes_.norm()));
  }

  const ComplexVector& amplitudes() const noexcept { return amplitudes_; }
  const SubsystemLayout& layout() const noexcept { return layout_; }

  DensityMatrix to_density() const {
    return DensityMatrix::assume_valid(amplitudes_ * amplitudes_.adjoint(), layout_);
  }

 private:
  ComplexVector amplitudes_;
  SubsystemLayout layout_;
};

/// Orthonormal basis (columns) on one named factor.
class ProjectiveMeasurement {
 public:
  ProjectiveMeasurement(std::string subsystem, ComplexMatrix basis, double orth_tol = 1e-9)
      : subsystem_(std::move(subsystem)), basis_(std::move(basis)) {
    if (basis_.rows() != basis_.cols() || basis_.rows() == 0)
      throw Error(ErrorCode::DimensionMismatch, "measurement basis must be square");
    const double defect = orthonormality_defect(basis_);
    if (defect > orth_tol)
      throw Error(ErrorCode::NotOrthonormal, "basis defect " + std::to_string(defect));
  }

  static ProjectiveMeasurement computational(std::string subsystem, std::size_t dim) {
    const auto n = static_cast<Eigen::Index>(dim);
    return ProjectiveMeasurement(std::move(subsystem), ComplexMatrix::Identity(n, n));
  }

  const std::string& subsystem() const noexcept { return subsystem_; }
  const ComplexMatrix& basis() const noexcept { return basis_; }
  std::size_t outcomes() const noexcept { return static_cast<std::size_t>(basis_.cols()); }

 private:
  std::string subsystem_;
  ComplexMatrix basis_;
};

/// Nonempty set of environment labels, kept in layout order.
class FragmentSelector {
 public:
  FragmentSelector(const SubsystemLayout& layout, const std::vector<std::string>& labels) {
    if (labels.empty()) throw Error(ErrorCode::InvalidArgument, "empty fragment");
    std::set<std::string> seen;
    for (const auto& l : labels) {
      if (!seen.insert(l).second) throw Error(ErrorCode::DuplicateLabel, "fragment repeats " + l);
      if (layout.factor(l).role != Role::Environment)
        throw Error(ErrorCode::InvalidArgument, l + " is not an environment factor");
    }
    for (auto p : layout.positions(labels)) labels_.push_back(layout[p].label);
  }

  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::size_t size() const noexcept { return labels_.size(); }

  bool contains(const std::string& label) const {
    return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
  }

  bool disjoint(const FragmentSelector& other) const {
    return std::none_of(labels_.begin(), labels_.end(),
                        [&](const std::string& l) { return other.contains(l); });
  }

  friend bool operator==(const FragmentSelector&, const FragmentSelector&) = default;

 private:
  std::vector<std::string> labels_;
};

struct ConditionalOutcome {
  double probability = 0.0;
  std::optional<DensityMatrix> state;  // empty when the outcome has probability <= tau_prob
};

struct ConditionalEnsemble {
  std::vector<ConditionalOutcome> outcomes;
  ProjectiveMeasurement source;
};

namespace detail {

// For every full index, its index inside the kept factors and inside the
// remaining factors (both in layout order).
struct IndexSplit {
  std::vector<std::size_t> kept;
  std::vector<std::size_t> rest;
  std::size_t kept_dim = 1;
  std::size_t rest_dim = 1;
};

inline IndexSplit split_indices(const SubsystemLayout& layout,
                                const std::vector<std::size_t>& keep_positions) {
  IndexSplit out;
  const std::size_t n = layout.size();
  std::vector<bool> keep(n, false);
  for (auto p : keep_positions) keep.at(p) = true;
  for (std::size_t k = 0; k < n; ++k) (keep[k] ? out.kept_dim : out.rest_dim) *= layout[k].dim;
  const std::size_t total = layout.total_dim();
  out.kept.resize(total);
  out.rest.resize(total);
  for (std::size_t x = 0; x < total; ++x) {
    std::size_t rem = x, kept_idx = 0, rest_idx = 0, kept_mul = 1, rest_mul = 1;
    for (std::size_t k = n; k-- > 0;) {
      const std::size_t digit = rem % layout[k].dim;
      rem /= layout[k].dim;
      if (keep[k]) {
        kept_idx += digit * kept_mul;
        kept_mul *= layout[k].dim;
      } else {
        rest_idx += digit * rest_mul;
        rest_mul *= layout[k].dim;
      }
    }
    out.kept[x] = kept_idx;
    out.rest[x] = rest_idx;
  }
  return out;
}

inline ComplexMatrix embed_on_factor(const ComplexMatrix& op, const SubsystemLayout& layout,
                                     std::size_t position) {
  std::size_t before = 1;
  for (std::size_t k = 0; k < position; ++k) before *= layout[k].dim;
  const std::size_t after = layout.stride(position);
  return kron(ComplexMatrix::Identity(static_cast<Eigen::Index>(before),
                                      static_cast<Eigen::Index>(before)),
              kron(op, ComplexMatrix::Identity(static_cast<Eigen::Index>(after),
                                               static_cast<Eigen::Index>(after))));
}

}  // namespace detail

/// Reduced state on `keep`, factors in their original order.
inline DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::string>& keep) {
  if (keep.empty()) throw Error(ErrorCode::InvalidArgument, "partial_trace needs a nonempty keep set");
  const auto& layout = rho.layout();
  const auto positions = layout.positions(keep);
  if (positions.size() == layout.size()) return rho;
  const auto split = detail::split_indices(layout, positions);

  std::vector<std::vector<std::size_t>> by_rest(split.rest_dim);
  for (std::size_t x = 0; x < split.kept.size(); ++x) by_rest[split.rest[x]].push_back(x);

  const auto kd = static_cast<Eigen::Index>(split.kept_dim);
  ComplexMatrix out = ComplexMatrix::Zero(kd, kd);
  const ComplexMatrix& m = rho.matrix();
  for (const auto& group : by_rest)
    for (auto x : group)
      for (auto y : group)
        out(static_cast<Eigen::Index>(split.kept[x]), static_cast<Eigen::Index>(split.kept[y])) +=
            m(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
  return DensityMatrix::assume_valid(out, layout.select(positions));
}

/// Permutes tensor factors so that they appear in `order` (a permutation of
/// all labels of the layout).
inline DensityMatrix reorder(const DensityMatrix& rho, const std::vector<std::string>& order) {
  const auto& layout = rho.layout();
  if (order.size() != layout.size())
    throw Error(ErrorCode::InvalidArgument, "reorder needs every label exactly once");
  std::vector<std::size_t> perm;
  for (const auto& l : order) perm.push_back(layout.index_of(l));
  if (std::set<std::size_t>(perm.begin(), perm.end()).size() != perm.size())
    throw Error(ErrorCode::DuplicateLabel, "reorder repeats a label");
  const SubsystemLayout target = layout.select(perm);
  bool identity = true;
  for (std::size_t i = 0; i < perm.size(); ++i) identity = identity && perm[i] == i;
  if (identity) return rho;

  const std::size_t total = layout.total_dim();
  std::vector<Eigen::Index> map(total);
  for (std::size_t x = 0; x < total; ++x) {
    std::size_t y = 0;
    for (std::size_t i = 0; i < perm.size(); ++i) {
      const std::size_t k = perm[i];
      const std::size_t digit = (x / layout.stride(k)) % layout[k].dim;
      y += digit * target.stride(i);
    }
    map[x] = static_cast<Eigen::Index>(y);
  }
  const ComplexMatrix& m = rho.matrix();
  ComplexMatrix out(m.rows(), m.cols());
  for (std::size_t x = 0; x < total; ++x)
    for (std::size_t y = 0; y < total; ++y)
      out(map[x], map[y]) = m(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
  return DensityMatrix::assume_valid(out, target);
}

/// Marginal on `labels` with factors arranged in the given order.
inline DensityMatrix marginal(const DensityMatrix& rho, const std::vector<std::string>& labels) {
  return reorder(partial_trace(rho, labels), labels);
}

/// Kronecker product; layouts are concatenated in argument order.
inline DensityMatrix tensor(const std::vector<DensityMatrix>& states) {
  if (states.empty()) throw Error(ErrorCode::InvalidArgument, "tensor of nothing");
  ComplexMatrix m = states.front().matrix();
  SubsystemLayout layout = states.front().layout();
  for (std::size_t i = 1; i < states.size(); ++i) {
    layout = layout.concat(states[i].layout());
    m = kron(m, states[i].matrix());
  }
  return DensityMatrix::assume_valid(m, std::move(layout));
}

/// Measures one factor; conditional states live on the remaining factors.
inline ConditionalEnsemble measure_subsystem(const DensityMatrix& rho,
                                             const ProjectiveMeasurement& meas,
                                             const Tolerances& tol = {}) {
  const auto& layout = rho.layout();
  const std::size_t pos = layout.index_of(meas.subsystem());
  if (layout[pos].dim != meas.outcomes())
    throw Error(ErrorCode::DimensionMismatch, "measurement dimension differs from factor");
  const auto split = detail::split_indices(layout, {pos});
  std::vector<std::size_t> rest_positions;
  for (std::size_t k = 0; k < layout.size(); ++k)
    if (k != pos) rest_positions.push_back(k);
  const SubsystemLayout rest_layout = layout.select(rest_positions);

  const auto total = static_cast<Eigen::Index>(layout.total_dim());
  const auto rd = static_cast<Eigen::Index>(split.rest_dim);
  ConditionalEnsemble out{{}, meas};
  for (std::size_t a = 0; a < meas.outcomes(); ++a) {
    // (<b_a| x I) as an rd x total matrix
    ComplexMatrix bra = ComplexMatrix::Zero(rd, total);
    for (Eigen::Index x = 0; x < total; ++x)
      bra(static_cast<Eigen::Index>(split.rest[x]), x) =
          std::conj(meas.basis()(static_cast<Eigen::Index>(split.kept[x]), static_cast<Eigen::Index>(a)));
    ComplexMatrix unnormalized = bra * rho.matrix() * bra.adjoint();
    const double p = std::max(0.0, unnormalized.trace().real());
    ConditionalOutcome outcome;
    outcome.probability = p;
    if (p > tol.prob) outcome.state = DensityMatrix::assume_valid(unnormalized / p, rest_layout);
    out.outcomes.push_back(std::move(outcome));
  }
  double sum = 0.0;
  for (const auto& o : out.outcomes) sum += o.probability;
  if (sum > 0.0)
    for (auto& o : out.outcomes) o.probability /= sum;
  return out;
}

/// Non-selective measurement: sum_a (P_a x I) rho (P_a x I).
inline DensityMatrix dephase_subsystem(const DensityMatrix& rho, const ProjectiveMeasurement& meas) {
  const auto& layout = rho.layout();
  const std::size_t pos = layout.index_of(meas.subsystem());
  if (layout[pos].dim != meas.outcomes())
    throw Error(ErrorCode::DimensionMismatch, "measurement dimension differs from factor");
  const ComplexMatrix u = detail::embed_on_factor(meas.basis(), layout, pos);
  ComplexMatrix rotated = u.adjoint() * rho.matrix() * u;
  const std::size_t stride = layout.stride(pos);
  const std::size_t dim = layout[pos].dim;
  for (Eigen::Index x = 0; x < rotated.rows(); ++x)
    for (Eigen::Index y = 0; y < rotated.cols(); ++y)
      if ((static_cast<std::size_t>(x) / stride) % dim != (static_cast<std::size_t>(y) / stride) % dim)
        rotated(x, y) = 0.0;
  return DensityMatrix::assume_valid(u * rotated * u.adjoint(), layout);
}

}  // namespace qdarwin

#endif  // QDARWIN_STATE_HPP
