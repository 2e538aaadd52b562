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

#ifndef QDARWIN_OBJECTIVITY_HPP
#define QDARWIN_OBJECTIVITY_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qdarwin/entropy.hpp"
#include "qdarwin/error.hpp"
#include "qdarwin/optimizer.hpp"
#include "qdarwin/state.hpp"
#include "qdarwin/tolerances.hpp"

namespace qdarwin {

struct SubfragmentResult {
  std::vector<std::string> fragment;
  bool holds = false;
  double I = 0.0;
  double chi = 0.0;
  double discord = 0.0;
};

/// Strong quantum Darwinism: I = chi = H(S) on the fragment and on every
/// listed sub-fragment.
struct SqdVerdict {
  bool holds = false;
  double I = 0.0;
  double chi = 0.0;
  double H_S = 0.0;
  double discord = 0.0;
  std::vector<SubfragmentResult> per_subfragment;
  double tolerance = 0.0;
  AccessibleInfoBounds acc_bounds;
  std::optional<ProjectiveMeasurement> optimizer_basis;
  double chi_gap = 0.0;
  double ratio = 0.0;  // largest deviation over tolerance
  bool borderline = false;
};

/// Spectrum broadcast structure diagnostics in the candidate pointer basis.
struct SbsVerdict {
  bool holds = false;           // full multipartite structure
  bool bipartite = false;       // classical-quantum with distinguishable joint conditionals
  bool bipartite_only = false;  // bipartite but not full
  bool degenerate_spectrum = false;
  std::optional<ProjectiveMeasurement> pointer_basis;
  std::vector<double> branch_probabilities;
  double max_offdiagonal_block_norm = 0.0;
  double max_pairwise_overlap = 0.0;  // per subenvironment
  double max_joint_overlap = 0.0;     // whole fragment
  double max_conditional_cmi = 0.0;
  double max_product_deviation = 0.0;
  double ratio = 0.0;
  double bipartite_ratio = 0.0;
  bool borderline = false;
  bool bipartite_borderline = false;
};

struct StrongIndependence {
  bool holds = true;
  std::pair<std::string, std::string> worst_pair;
  double worst_cmi = 0.0;
  double ratio = 0.0;
  bool borderline = false;
};

enum class TheoremOutcome { Pass, Borderline, Fail };

inline const char* to_string(TheoremOutcome o) {
  switch (o) {
    case TheoremOutcome::Pass: return "pass";
    case TheoremOutcome::Borderline: return "borderline";
    case TheoremOutcome::Fail: return "fail";
  }
  return "?";
}

struct TheoremWitness {
  SqdVerdict sqd;
  SbsVerdict sbs;
  StrongIndependence strong_independence;
  bool consistent = false;  // SBS == (SQD and strong independence)
  bool borderline = false;
  TheoremOutcome outcome = TheoremOutcome::Fail;
};

namespace detail {

inline void require_subfragments(const FragmentSelector& fragment, const std::vector<FragmentSelector>& subs) {
  for (std::size_t i = 0; i < subs.size(); ++i) {
    for (const auto& l : subs[i].labels())
      if (!fragment.contains(l))
        throw Error(ErrorCode::InvalidArgument, "sub-fragment label " + l + " is outside the fragment");
    for (std::size_t j = i + 1; j < subs.size(); ++j)
      if (!subs[i].disjoint(subs[j]))
        throw Error(ErrorCode::OverlappingSubfragments, "sub-fragments " + std::to_string(i) + " and " +
                                                            std::to_string(j) + " intersect");
  }
}

inline std::vector<std::vector<std::string>> singletons(const std::vector<std::string>& labels) {
  std::vector<std::vector<std::string>> out;
  for (const auto& l : labels) out.push_back({l});
  return out;
}

}  // namespace detail

inline SqdVerdict check_strong_qd(const DensityMatrix& rho, const std::string& system,
                                  const FragmentSelector& fragment,
                                  const std::vector<FragmentSelector>& subfragments = {},
                                  const OptimizerConfig& opt = {}, const VerdictTolerances& tol = {}) {
  detail::require_subfragments(fragment, subfragments);
  SqdVerdict out;
  out.tolerance = tol.sqd;

  const SystemFragmentModel model(rho, system, fragment.labels());
  const FragmentMeasures m = fragment_measures(model, opt);
  out.I = m.mutual_information;
  out.chi = m.chi.value;
  out.H_S = m.system_entropy;
  out.discord = m.discord.value;
  out.optimizer_basis = m.chi.optimizer_basis;
  out.chi_gap = m.chi.gap;
  out.acc_bounds = accessible_information_bounds(model, m.chi, opt);

  auto deviation = [](double I, double chi, double H) { return std::max(std::abs(I - chi), std::abs(chi - H)); };
  double worst = deviation(out.I, out.chi, out.H_S);
  out.holds = worst <= tol.sqd;
  for (const auto& sub : subfragments) {
    const SystemFragmentModel sm(rho, system, sub.labels());
    const FragmentMeasures sub_m = fragment_measures(sm, opt);
    SubfragmentResult r{sub.labels(), false, sub_m.mutual_information, sub_m.chi.value, sub_m.discord.value};
    const double dev = deviation(r.I, r.chi, out.H_S);
    r.holds = dev <= tol.sqd;
    out.holds = out.holds && r.holds;
    worst = std::max(worst, dev);
    out.per_subfragment.push_back(std::move(r));
  }
  out.ratio = worst / tol.sqd;
  out.borderline = in_borderline_band(out.ratio, tol.borderline);
  return out;
}

/// Pairwise conditional mutual information I(E_j:E_k|S).
inline StrongIndependence check_strong_independence(const DensityMatrix& rho, const std::string& system,
                                                    const std::vector<std::string>& subenvironments,
                                                    const VerdictTolerances& tol = {}) {
  if (subenvironments.size() < 2)
    throw Error(ErrorCode::NeedTwoSubenvironments, "strong independence needs >= 2 subenvironments");
  StrongIndependence out;
  out.worst_cmi = -1.0;
  for (std::size_t j = 0; j < subenvironments.size(); ++j)
    for (std::size_t k = j + 1; k < subenvironments.size(); ++k) {
      const double cmi =
          conditional_mutual_information(rho, {subenvironments[j]}, {subenvironments[k]}, {system}, 1e-9);
      if (cmi > out.worst_cmi) {
        out.worst_cmi = cmi;
        out.worst_pair = {subenvironments[j], subenvironments[k]};
      }
    }
  out.worst_cmi = std::max(0.0, out.worst_cmi);
  out.holds = out.worst_cmi <= tol.cmi;
  out.ratio = out.worst_cmi / tol.cmi;
  out.borderline = in_borderline_band(out.ratio, tol.borderline);
  return out;
}

/// Spectrum broadcast structure detector.
///
/// (1) pointer basis: eigenbasis of rho_S, degenerate clusters resolved by
///     SystemFragmentModel::pointer_candidate;
/// (2) classical-quantum form: off-diagonal pointer blocks of rho_SF vanish;
/// (3) conditionals are pairwise orthogonal, on the whole fragment
///     (bipartite) and on every subenvironment (full);
/// (4) full structure also needs vanishing I(E_j:E_k|S) and branch states
///     equal to the product of their subenvironment marginals.
inline SbsVerdict detect_sbs(const DensityMatrix& rho, const std::string& system,
                             const FragmentSelector& fragment, const VerdictTolerances& tol = {},
                             const Tolerances& lin = {}) {
  SbsVerdict out;
  const SystemFragmentModel model(rho, system, fragment.labels());
  const ComplexMatrix pointer = model.pointer_candidate(tol.pointer_degeneracy);
  out.pointer_basis.emplace(system, pointer, 1e-8);
  {
    const RealVector ev = hermitian_eigenvalues(model.system_state());
    for (Eigen::Index i = 1; i < ev.size(); ++i)
      if (ev(i - 1) - ev(i) < tol.pointer_degeneracy) out.degenerate_spectrum = true;
  }

  const auto ds = static_cast<Eigen::Index>(model.system_dim());
  const auto df = static_cast<Eigen::Index>(model.fragment_dim());
  const ComplexMatrix u = kron(pointer, ComplexMatrix::Identity(df, df));
  const ComplexMatrix rotated = u.adjoint() * model.joint().matrix() * u;

  const SubsystemLayout frag_layout = partial_trace(model.joint(), model.fragment_labels()).layout();
  std::vector<std::optional<DensityMatrix>> branches;
  for (Eigen::Index i = 0; i < ds; ++i) {
    for (Eigen::Index j = 0; j < ds; ++j)
      if (i != j)
        out.max_offdiagonal_block_norm =
            std::max(out.max_offdiagonal_block_norm, rotated.block(i * df, j * df, df, df).norm());
    const ComplexMatrix block = rotated.block(i * df, i * df, df, df);
    const double p = std::max(0.0, block.trace().real());
    out.branch_probabilities.push_back(p);
    if (p > lin.prob)
      branches.emplace_back(DensityMatrix::assume_valid(block / p, frag_layout));
    else
      branches.emplace_back(std::nullopt);
  }

  const auto& labels = model.fragment_labels();
  std::vector<std::vector<std::optional<DensityMatrix>>> per_env(labels.size());
  for (std::size_t k = 0; k < labels.size(); ++k)
    for (const auto& b : branches)
      per_env[k].push_back(b ? std::optional<DensityMatrix>(partial_trace(*b, {labels[k]})) : std::nullopt);

  for (std::size_t i = 0; i < branches.size(); ++i)
    for (std::size_t j = i + 1; j < branches.size(); ++j) {
      if (!branches[i] || !branches[j]) continue;
      out.max_joint_overlap = std::max(
          out.max_joint_overlap, std::abs((branches[i]->matrix() * branches[j]->matrix()).trace().real()));
      for (std::size_t k = 0; k < labels.size(); ++k)
        out.max_pairwise_overlap =
            std::max(out.max_pairwise_overlap,
                     std::abs((per_env[k][i]->matrix() * per_env[k][j]->matrix()).trace().real()));
    }

  if (labels.size() >= 2) {
    out.max_conditional_cmi = check_strong_independence(model.joint(), system, labels, tol).worst_cmi;
    for (std::size_t i = 0; i < branches.size(); ++i) {
      if (!branches[i]) continue;
      std::vector<DensityMatrix> parts;
      for (std::size_t k = 0; k < labels.size(); ++k) parts.push_back(*per_env[k][i]);
      out.max_product_deviation =
          std::max(out.max_product_deviation, (branches[i]->matrix() - tensor(parts).matrix()).norm());
    }
  }

  out.bipartite_ratio =
      std::max(out.max_offdiagonal_block_norm / tol.offdiag, out.max_joint_overlap / tol.overlap);
  out.ratio = std::max({out.max_offdiagonal_block_norm / tol.offdiag, out.max_pairwise_overlap / tol.overlap,
                        out.max_conditional_cmi / tol.cmi, out.max_product_deviation / tol.product});
  out.bipartite = out.bipartite_ratio <= 1.0;
  out.holds = out.ratio <= 1.0;
  out.bipartite_only = out.bipartite && !out.holds;
  out.borderline = in_borderline_band(out.ratio, tol.borderline);
  out.bipartite_borderline = in_borderline_band(out.bipartite_ratio, tol.borderline);
  return out;
}

/// SBS on the given subenvironments versus strong quantum Darwinism (fragment
/// = all of them, sub-fragments = each one) together with strong
/// independence.
inline TheoremWitness verify_theorem(const DensityMatrix& rho, const std::string& system,
                                     const std::vector<std::string>& subenvironments,
                                     const OptimizerConfig& opt = {}, const VerdictTolerances& tol = {}) {
  TheoremWitness out;
  const FragmentSelector fragment(rho.layout(), subenvironments);
  std::vector<FragmentSelector> subs;
  if (fragment.size() >= 2)
    for (const auto& l : fragment.labels()) subs.emplace_back(rho.layout(), std::vector<std::string>{l});
  out.sqd = check_strong_qd(rho, system, fragment, subs, opt, tol);
  out.sbs = detect_sbs(rho, system, fragment, tol);
  if (fragment.size() >= 2) out.strong_independence = check_strong_independence(rho, system, fragment.labels(), tol);
  out.consistent = out.sbs.holds == (out.sqd.holds && out.strong_independence.holds);
  out.borderline = out.sqd.borderline || out.sbs.borderline || out.strong_independence.borderline;
  out.outcome = out.borderline ? TheoremOutcome::Borderline
                               : (out.consistent ? TheoremOutcome::Pass : TheoremOutcome::Fail);
  return out;
}

/// (H(S) - chi + D) / 2H(S), clamped to [0, 1].
inline double m_sqd(double system_entropy, double chi, double discord, double prob_tol = 1e-12) {
  if (system_entropy <= prob_tol)
    throw Error(ErrorCode::DegenerateSystemEntropy, "H(S) = " + std::to_string(system_entropy));
  return std::clamp((system_entropy - chi + discord) / (2.0 * system_entropy), 0.0, 1.0);
}

inline double m_sqd(const DensityMatrix& rho, const std::string& system, const FragmentSelector& fragment,
                    const OptimizerConfig& opt = {}) {
  const SystemFragmentModel model(rho, system, fragment.labels());
  if (model.system_entropy() <= 1e-12)
    throw Error(ErrorCode::DegenerateSystemEntropy, "H(S) = " + std::to_string(model.system_entropy()));
  const FragmentMeasures m = fragment_measures(model, opt);
  return m_sqd(m.system_entropy, m.chi.value, m.discord.value);
}

/// ||rho_SF - rho_{S^Pi F}||_1 + sum_{i != j} sqrt(p_i p_j) B(rho_F|i, rho_F|j)
/// for the pointer basis `pointer` on the system.
inline double eta_bound(const SystemFragmentModel& model, const ComplexMatrix& pointer) {
  const auto df = static_cast<Eigen::Index>(model.fragment_dim());
  const ProjectiveMeasurement meas(model.system_label(), pointer, 1e-8);
  const DensityMatrix dephased = dephase_subsystem(model.joint(), meas);
  double eta = trace_norm_hermitian(model.joint().matrix() - dephased.matrix());
  (void)df;
  const auto ensemble = model.ensemble(pointer);
  for (std::size_t i = 0; i < ensemble.size(); ++i)
    for (std::size_t j = 0; j < ensemble.size(); ++j) {
      if (i == j || !ensemble[i].state || !ensemble[j].state) continue;
      eta += std::sqrt(ensemble[i].probability * ensemble[j].probability) *
             fidelity_B(*ensemble[i].state, *ensemble[j].state);
    }
  return eta;
}

inline double eta_bound(const DensityMatrix& rho, const std::string& system, const FragmentSelector& fragment,
                        const ProjectiveMeasurement& pointer) {
  if (pointer.subsystem() != system)
    throw Error(ErrorCode::InvalidArgument, "pointer basis must act on the system");
  return eta_bound(SystemFragmentModel(rho, system, fragment.labels()), pointer.basis());
}

/// Everything reported for one state and fragment.
struct ObjectivityReport {
  std::string system;
  std::vector<std::string> fragment;
  std::vector<std::vector<std::string>> subfragments;
  SqdVerdict sqd;
  SbsVerdict sbs;
  StrongIndependence strong_independence;
  bool strong_independence_applicable = false;
  std::optional<double> m_sqd;  // undefined when H(S) = 0
  double eta = 0.0;
  AccessibleInfoBounds acc_bounds;
  OptimizerConfig optimizer;
  VerdictTolerances tolerances;
};

inline ObjectivityReport analyze(const DensityMatrix& rho, const std::string& system,
                                 const FragmentSelector& fragment,
                                 const std::vector<FragmentSelector>& subfragments = {},
                                 const OptimizerConfig& opt = {}, const VerdictTolerances& tol = {}) {
  ObjectivityReport out;
  out.system = system;
  out.fragment = fragment.labels();
  for (const auto& s : subfragments) out.subfragments.push_back(s.labels());
  out.optimizer = opt;
  out.tolerances = tol;
  out.sqd = check_strong_qd(rho, system, fragment, subfragments, opt, tol);
  out.sbs = detect_sbs(rho, system, fragment, tol);
  if (fragment.size() >= 2) {
    out.strong_independence_applicable = true;
    out.strong_independence = check_strong_independence(rho, system, fragment.labels(), tol);
  }
  if (out.sqd.H_S > 1e-12) out.m_sqd = m_sqd(out.sqd.H_S, out.sqd.chi, out.sqd.discord);
  const SystemFragmentModel model(rho, system, fragment.labels());
  out.eta = eta_bound(model, out.sqd.optimizer_basis->basis());
  out.acc_bounds = out.sqd.acc_bounds;
  return out;
}

}  // namespace qdarwin

#endif  // QDARWIN_OBJECTIVITY_HPP
