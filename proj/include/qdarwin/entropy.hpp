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

#ifndef QDARWIN_ENTROPY_HPP
#define QDARWIN_ENTROPY_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qdarwin/error.hpp"
#include "qdarwin/linalg.hpp"
#include "qdarwin/optimizer.hpp"
#include "qdarwin/state.hpp"
#include "qdarwin/tolerances.hpp"

namespace qdarwin {

/// -sum p log2 p over the entries, with entries clamped into [0, 1].
template <class Range>
double shannon_entropy(const Range& probabilities) {
  double h = 0.0;
  for (double p : probabilities) {
    p = std::clamp(p, 0.0, 1.0);
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

inline double shannon_entropy(std::initializer_list<double> probabilities) {
  return shannon_entropy(std::vector<double>(probabilities));
}

inline double entropy_of_spectrum(const RealVector& eigenvalues) {
  return shannon_entropy(std::vector<double>(eigenvalues.data(), eigenvalues.data() + eigenvalues.size()));
}

/// Entropy of a Hermitian PSD matrix, in bits.
inline double matrix_entropy(const ComplexMatrix& m) { return entropy_of_spectrum(hermitian_eigenvalues(m)); }

inline double von_neumann_entropy(const DensityMatrix& rho) { return matrix_entropy(rho.matrix()); }

namespace detail {

inline void require_disjoint(const std::vector<std::vector<std::string>>& parts) {
  std::set<std::string> seen;
  for (const auto& part : parts)
    for (const auto& l : part)
      if (!seen.insert(l).second) throw Error(ErrorCode::OverlappingParts, l + " appears twice");
}

inline std::vector<std::string> join(std::initializer_list<std::vector<std::string>> parts) {
  std::vector<std::string> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

inline double marginal_entropy(const DensityMatrix& rho, const std::vector<std::string>& labels) {
  if (labels.empty()) return 0.0;
  return von_neumann_entropy(partial_trace(rho, labels));
}

}  // namespace detail

/// I(A:B) = H(A) + H(B) - H(AB); factors outside A and B are traced out.
inline double mutual_information(const DensityMatrix& rho, const std::vector<std::string>& part_a,
                                 const std::vector<std::string>& part_b) {
  if (part_a.empty() || part_b.empty()) throw Error(ErrorCode::InvalidArgument, "empty part");
  detail::require_disjoint({part_a, part_b});
  const DensityMatrix ab = partial_trace(rho, detail::join({part_a, part_b}));
  const double value = von_neumann_entropy(partial_trace(ab, part_a)) +
                       von_neumann_entropy(partial_trace(ab, part_b)) - von_neumann_entropy(ab);
  return std::max(0.0, value);
}

/// I(A:B|C) = H(AC) + H(BC) - H(C) - H(ABC), clamped at zero within `eps`.
/// An empty C reduces to the mutual information.
inline double conditional_mutual_information(const DensityMatrix& rho, const std::vector<std::string>& part_a,
                                             const std::vector<std::string>& part_b,
                                             const std::vector<std::string>& cond, double eps = 1e-9) {
  if (part_a.empty() || part_b.empty()) throw Error(ErrorCode::InvalidArgument, "empty part");
  detail::require_disjoint({part_a, part_b, cond});
  const DensityMatrix abc = partial_trace(rho, detail::join({part_a, part_b, cond}));
  const double value = detail::marginal_entropy(abc, detail::join({part_a, cond})) +
                       detail::marginal_entropy(abc, detail::join({part_b, cond})) -
                       detail::marginal_entropy(abc, cond) - von_neumann_entropy(abc);
  return (value < 0.0 && value > -eps) ? 0.0 : value;
}

/// Half the trace norm of the difference.
inline double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "trace_distance");
  return std::min(1.0, 0.5 * trace_norm_hermitian(a.matrix() - b.matrix()));
}

/// Fidelity B(a, b) = || sqrt(a) sqrt(b) ||_1.
inline double fidelity_B(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows()) throw Error(ErrorCode::DimensionMismatch, "fidelity_B");
  return std::min(1.0, trace_norm(psd_sqrt(a) * psd_sqrt(b)));
}

inline double fidelity_B(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "fidelity_B");
  return fidelity_B(a.matrix(), b.matrix());
}

/// Reduced state on S and a fragment F, stored in the factorised form
/// rho_SF = W W^dagger so that conditional spectra for any system basis come
/// from matrices of size min(rank, dim F).
class SystemFragmentModel {
 public:
  SystemFragmentModel(const DensityMatrix& rho, const std::string& system,
                      const std::vector<std::string>& fragment, const Tolerances& tol = {})
      : tol_(tol) {
    if (rho.layout().factor(system).role != Role::System)
      throw Error(ErrorCode::InvalidArgument, system + " is not the system factor");
    if (fragment.empty()) throw Error(ErrorCode::InvalidArgument, "empty fragment");
    detail::require_disjoint({{system}, fragment});
    std::vector<std::string> order{system};
    std::vector<std::string> frag_sorted;
    for (auto p : rho.layout().positions(fragment)) frag_sorted.push_back(rho.layout()[p].label);
    order.insert(order.end(), frag_sorted.begin(), frag_sorted.end());
    joint_.emplace(marginal(rho, order));
    system_label_ = system;
    fragment_ = frag_sorted;
    ds_ = joint_->layout()[0].dim;
    df_ = joint_->dim() / ds_;

    const Eigensystem es = eig_hermitian(joint_->matrix(), 1e-6);
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < es.values.size(); ++i)
      if (es.values(i) > 1e-15) keep.push_back(i);
    const auto rank = static_cast<Eigen::Index>(keep.size());
    factor_ = ComplexMatrix(static_cast<Eigen::Index>(joint_->dim()), std::max<Eigen::Index>(rank, 1));
    factor_.setZero();
    for (Eigen::Index k = 0; k < rank; ++k)
      factor_.col(k) = std::sqrt(es.values(keep[static_cast<std::size_t>(k)])) *
                       es.vectors.col(keep[static_cast<std::size_t>(k)]);
    joint_entropy_ = entropy_of_spectrum(es.values);

    system_state_ = partial_trace(*joint_, {system}).matrix();
    fragment_state_ = partial_trace(*joint_, fragment_).matrix();
    system_entropy_ = matrix_entropy(system_state_);
    fragment_entropy_ = matrix_entropy(fragment_state_);
  }

  const DensityMatrix& joint() const { return *joint_; }
  const std::string& system_label() const noexcept { return system_label_; }
  const std::vector<std::string>& fragment_labels() const noexcept { return fragment_; }
  std::size_t system_dim() const noexcept { return ds_; }
  std::size_t fragment_dim() const noexcept { return df_; }
  const ComplexMatrix& system_state() const noexcept { return system_state_; }
  const ComplexMatrix& fragment_state() const noexcept { return fragment_state_; }

  double system_entropy() const noexcept { return system_entropy_; }
  double fragment_entropy() const noexcept { return fragment_entropy_; }
  double joint_entropy() const noexcept { return joint_entropy_; }
  double mutual_information() const noexcept {
    return std::max(0.0, system_entropy_ + fragment_entropy_ - joint_entropy_);
  }

  /// Unnormalised fragment factor for system outcome vector `b`:
  /// (<b| x I) W, a dim F x rank matrix.
  ComplexMatrix conditional_factor(const ComplexVector& b) const {
    const auto df = static_cast<Eigen::Index>(df_);
    ComplexMatrix m = ComplexMatrix::Zero(df, factor_.cols());
    for (Eigen::Index s = 0; s < static_cast<Eigen::Index>(ds_); ++s)
      if (b(s) != cplx(0.0, 0.0)) m += std::conj(b(s)) * factor_.middleRows(s * df, df);
    return m;
  }

  /// Holevo quantity of the fragment ensemble obtained by measuring the
  /// system in `basis` (columns).
  double holevo(const ComplexMatrix& basis) const {
    double chi = fragment_entropy_;
    for (Eigen::Index a = 0; a < basis.cols(); ++a) {
      const ComplexMatrix m = conditional_factor(basis.col(a));
      const double p = m.squaredNorm();
      if (p <= tol_.prob) continue;
      const ComplexMatrix gram = (m.cols() <= m.rows()) ? ComplexMatrix(m.adjoint() * m)
                                                        : ComplexMatrix(m * m.adjoint());
      chi -= p * entropy_of_spectrum(hermitian_eigenvalues(gram) / p);
    }
    return chi;
  }

  /// Outcome probabilities and normalised fragment conditionals; outcomes at
  /// or below tau_prob carry no state.
  std::vector<ConditionalOutcome> ensemble(const ComplexMatrix& basis) const {
    SubsystemLayout frag_layout = partial_trace(*joint_, fragment_).layout();
    std::vector<ConditionalOutcome> out;
    for (Eigen::Index a = 0; a < basis.cols(); ++a) {
      const ComplexMatrix m = conditional_factor(basis.col(a));
      ConditionalOutcome o;
      o.probability = m.squaredNorm();
      if (o.probability > tol_.prob)
        o.state = DensityMatrix::assume_valid(m * m.adjoint() / o.probability, frag_layout);
      out.push_back(std::move(o));
    }
    return out;
  }

  /// Block (f, f') of rho_SF seen as a system operator.
  ComplexMatrix system_block(Eigen::Index f, Eigen::Index g) const {
    const auto ds = static_cast<Eigen::Index>(ds_);
    const auto df = static_cast<Eigen::Index>(df_);
    ComplexMatrix out(ds, ds);
    for (Eigen::Index s = 0; s < ds; ++s)
      for (Eigen::Index t = 0; t < ds; ++t) out(s, t) = joint_->matrix()(s * df + f, t * df + g);
    return out;
  }

  /// Candidate pointer basis: eigenbasis of rho_S. Within clusters of
  /// eigenvalues closer than `degeneracy`, the basis diagonalises a fixed
  /// generic combination of the system blocks of rho_SF, which is diagonal in
  /// the pointer basis whenever the state is classical-quantum.
  ComplexMatrix pointer_candidate(double degeneracy) const {
    Eigensystem es = eig_hermitian(system_state_, 1e-6);
    const auto ds = static_cast<Eigen::Index>(ds_);
    Eigen::Index start = 0;
    std::optional<ComplexMatrix> probe;
    while (start < ds) {
      Eigen::Index stop = start + 1;
      while (stop < ds && es.values(stop - 1) - es.values(stop) < degeneracy) ++stop;
      if (stop - start > 1) {
        if (!probe) probe = block_probe();
        const ComplexMatrix v = es.vectors.middleCols(start, stop - start);
        const Eigensystem inner = eig_hermitian(hermitian_part(v.adjoint() * *probe * v), 1e-6);
        ComplexMatrix rotated = v * inner.vectors;
        for (Eigen::Index q = 0; q < rotated.cols(); ++q) detail::canonicalize_phase(rotated.col(q));
        es.vectors.middleCols(start, stop - start) = rotated;
      }
      start = stop;
    }
    return es.vectors;
  }

 private:
  ComplexMatrix block_probe() const {
    std::mt19937_64 rng(0x5eedULL);
    std::normal_distribution<double> normal(0.0, 1.0);
    const auto ds = static_cast<Eigen::Index>(ds_);
    ComplexMatrix k = ComplexMatrix::Zero(ds, ds);
    for (Eigen::Index f = 0; f < static_cast<Eigen::Index>(df_); ++f)
      for (Eigen::Index g = 0; g < static_cast<Eigen::Index>(df_); ++g)
        k += cplx(normal(rng), normal(rng)) * system_block(f, g);
    return hermitian_part(k);
  }

  Tolerances tol_;
  std::optional<DensityMatrix> joint_;
  std::string system_label_;
  std::vector<std::string> fragment_;
  std::size_t ds_ = 0, df_ = 0;
  ComplexMatrix factor_;
  ComplexMatrix system_state_, fragment_state_;
  double system_entropy_ = 0.0, fragment_entropy_ = 0.0, joint_entropy_ = 0.0;
};

/// Result of an optimised measure.
struct MeasureValue {
  double value = 0.0;  // bits
  std::optional<ProjectiveMeasurement> optimizer_basis;
  std::size_t restarts = 0;
  double gap = 0.0;  // best-vs-second-best refined value, bits
  bool converged = true;
  static constexpr const char* measurement_class = "rank-1 projective";
};

/// chi for a fixed system basis.
inline double holevo_in_basis(const DensityMatrix& rho, const std::string& system,
                              const FragmentSelector& fragment, const ComplexMatrix& basis) {
  return SystemFragmentModel(rho, system, fragment.labels()).holevo(basis);
}

/// Maximal Holevo quantity of the fragment over projective system
/// measurements.
inline MeasureValue holevo_quantity(const SystemFragmentModel& model, const OptimizerConfig& opt) {
  const ComplexMatrix seed = model.pointer_candidate(1e-6);
  const BasisOptimum best = maximize_over_bases(
      model.system_dim(), [&](const ComplexMatrix& b) { return model.holevo(b); }, {seed}, opt);
  if (!best.converged && opt.throw_on_nonconvergence)
    throw Error(ErrorCode::OptimizerDidNotConverge,
                "restart gap " + std::to_string(best.gap) + " bits exceeds " + std::to_string(opt.tol));
  MeasureValue out;
  out.value = std::clamp(best.value, 0.0, model.fragment_entropy());
  out.optimizer_basis.emplace(model.system_label(), best.basis, 1e-8);
  out.restarts = best.restarts;
  out.gap = best.gap;
  out.converged = best.converged;
  return out;
}

inline MeasureValue holevo_quantity(const DensityMatrix& rho, const std::string& system,
                                    const FragmentSelector& fragment, const OptimizerConfig& opt = {}) {
  return holevo_quantity(SystemFragmentModel(rho, system, fragment.labels()), opt);
}

/// D = I - chi with chi from the same optimisation; clamped to zero within
/// the optimiser tolerance.
inline MeasureValue discord(const SystemFragmentModel& model, const MeasureValue& chi, double eps_opt) {
  MeasureValue out = chi;
  double d = model.mutual_information() - chi.value;
  if (d < 0.0 && d > -eps_opt) d = 0.0;
  out.value = d;
  return out;
}

inline MeasureValue discord(const DensityMatrix& rho, const std::string& system,
                            const FragmentSelector& fragment, const OptimizerConfig& opt = {}) {
  const SystemFragmentModel model(rho, system, fragment.labels());
  return discord(model, holevo_quantity(model, opt), opt.tol);
}

struct AccessibleInfoBounds {
  double lower = 0.0;
  double upper = 0.0;
  bool exact = false;  // conditional ensemble commutes
};

/// Classical mutual information between the outcome label a (probabilities
/// p_a, states rho_a) and a fragment measurement in `basis`.
inline double classical_mutual_information(const std::vector<ConditionalOutcome>& ensemble,
                                           const ComplexMatrix& basis) {
  std::vector<double> joint, pa, pb(static_cast<std::size_t>(basis.cols()), 0.0);
  for (const auto& o : ensemble) {
    if (!o.state) continue;
    pa.push_back(o.probability);
    for (Eigen::Index b = 0; b < basis.cols(); ++b) {
      const double q = std::max(0.0, (basis.col(b).adjoint() * o.state->matrix() * basis.col(b))(0, 0).real());
      joint.push_back(o.probability * q);
      pb[static_cast<std::size_t>(b)] += o.probability * q;
    }
  }
  return std::max(0.0, shannon_entropy(pa) + shannon_entropy(pb) - shannon_entropy(joint));
}

/// Largest Frobenius norm of a commutator between two conditional states.
inline double max_commutator(const std::vector<ConditionalOutcome>& ensemble) {
  double worst = 0.0;
  for (std::size_t i = 0; i < ensemble.size(); ++i)
    for (std::size_t j = i + 1; j < ensemble.size(); ++j) {
      if (!ensemble[i].state || !ensemble[j].state) continue;
      const ComplexMatrix& a = ensemble[i].state->matrix();
      const ComplexMatrix& b = ensemble[j].state->matrix();
      worst = std::max(worst, (a * b - b * a).norm());
    }
  return worst;
}

/// Fragment dimension above which the accessible-information lower bound is
/// taken over candidate bases only, without simplex refinement.
inline constexpr std::size_t kMaxRefinedFragmentDim = 4;

/// Holevo bound and a measured lower bound on the accessible information of
/// the ensemble produced by the chi-optimal system measurement.
///
/// The lower bound maximises the classical mutual information over fragment
/// bases: the common eigenbasis when the conditionals commute, eigenbases of
/// rho_F and of each conditional, Helstrom bases of each pair, and for small
/// fragments a grid/simplex refinement seeded from those candidates.
inline AccessibleInfoBounds accessible_information_bounds(const SystemFragmentModel& model,
                                                          const MeasureValue& chi,
                                                          const OptimizerConfig& opt,
                                                          const MeasureTolerances& mtol = {}) {
  AccessibleInfoBounds out;
  out.upper = chi.value;
  const auto ensemble = model.ensemble(chi.optimizer_basis->basis());
  const double comm = max_commutator(ensemble);
  out.exact = comm < mtol.comm;

  std::vector<ComplexMatrix> candidates;
  candidates.push_back(eig_hermitian(model.fragment_state(), 1e-6).vectors);
  std::vector<const DensityMatrix*> states;
  std::vector<double> probs;
  for (const auto& o : ensemble)
    if (o.state) {
      states.push_back(&*o.state);
      probs.push_back(o.probability);
    }
  if (out.exact && !states.empty()) {
    ComplexMatrix combo = ComplexMatrix::Zero(states[0]->matrix().rows(), states[0]->matrix().cols());
    for (std::size_t a = 0; a < states.size(); ++a)
      combo += (std::sqrt(2.0) + std::sqrt(3.0) * static_cast<double>(a * a + a)) * states[a]->matrix();
    candidates.insert(candidates.begin(), eig_hermitian(combo, 1e-6, 1e-12).vectors);
  }
  for (const auto* s : states) candidates.push_back(eig_hermitian(s->matrix(), 1e-6).vectors);
  for (std::size_t i = 0; i < states.size(); ++i)
    for (std::size_t j = i + 1; j < states.size(); ++j)
      candidates.push_back(
          eig_hermitian(hermitian_part(probs[i] * states[i]->matrix() - probs[j] * states[j]->matrix()), 1e-6)
              .vectors);

  double best = 0.0;
  std::size_t best_index = 0;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const double v = classical_mutual_information(ensemble, candidates[c]);
    if (v > best) {
      best = v;
      best_index = c;
    }
  }
  if (model.fragment_dim() <= kMaxRefinedFragmentDim && model.fragment_dim() >= 2 &&
      !(out.exact && best >= out.upper - mtol.opt)) {
    OptimizerConfig local = opt;
    local.throw_on_nonconvergence = false;
    local.restarts = std::min<std::size_t>(opt.restarts, 8);
    const BasisOptimum refined = maximize_over_bases(
        model.fragment_dim(), [&](const ComplexMatrix& b) { return classical_mutual_information(ensemble, b); },
        {candidates[best_index]}, local);
    best = std::max(best, refined.value);
  }
  out.lower = std::min(best, out.upper);
  return out;
}

/// Every measure needed for one (system, fragment) pair.
struct FragmentMeasures {
  std::vector<std::string> fragment;
  double system_entropy = 0.0;
  double mutual_information = 0.0;
  MeasureValue chi;
  MeasureValue discord;
};

inline FragmentMeasures fragment_measures(const SystemFragmentModel& model, const OptimizerConfig& opt) {
  FragmentMeasures out;
  out.fragment = model.fragment_labels();
  out.system_entropy = model.system_entropy();
  out.mutual_information = model.mutual_information();
  out.chi = holevo_quantity(model, opt);
  out.discord = discord(model, out.chi, opt.tol);
  return out;
}

}  // namespace qdarwin

#endif  // QDARWIN_ENTROPY_HPP
