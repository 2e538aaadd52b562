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

#ifndef QDARWIN_REDUNDANCY_HPP
#define QDARWIN_REDUNDANCY_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "qdarwin/entropy.hpp"
#include "qdarwin/error.hpp"
#include "qdarwin/optimizer.hpp"
#include "qdarwin/state.hpp"

namespace qdarwin {

enum class RedundancyStrategy { Exhaustive, Greedy };

inline const char* to_string(RedundancyStrategy s) {
  return s == RedundancyStrategy::Exhaustive ? "exhaustive" : "greedy";
}

inline constexpr std::size_t kMaxExhaustiveSubenvs = 12;

struct ScanPoint {
  double fraction = 0.0;
  double mean_chi = 0.0;
  double mean_discord = 0.0;
  double mean_I = 0.0;
  std::size_t samples = 0;
};

struct RedundancyOptions {
  RedundancyStrategy strategy = RedundancyStrategy::Greedy;
  std::size_t scan_samples = 50;  // per fraction
  std::uint64_t scan_seed = 1;
  bool scan = true;
  double eps_opt = 1e-6;
};

struct RedundancyReport {
  double delta = 0.0;
  std::string strategy;
  double system_entropy = 0.0;
  double threshold = 0.0;  // (1 - delta) H(S) - eps_opt
  std::size_t R_delta = 0;
  std::vector<std::vector<std::string>> witness_fragments;
  std::vector<double> witness_chi;
  double f_delta_min = 0.0;  // 0 when nothing qualifies
  std::vector<ScanPoint> scan_curve;
  // D <= delta H(S) + eps_opt on qualifying fragments with I <= H(S) + eps_opt
  std::size_t discord_bound_checked = 0;
  std::size_t discord_bound_violations = 0;
  std::size_t discord_bound_skipped = 0;
  std::size_t fragments_evaluated = 0;
};

/// Lazily evaluated measures per fragment, fragments encoded as bitmasks
/// over the environment labels.
class FragmentCache {
 public:
  FragmentCache(const DensityMatrix& rho, std::string system, const OptimizerConfig& opt)
      : rho_(rho), system_(std::move(system)), labels_(rho.layout().environment_labels()), opt_(opt) {
    if (labels_.empty()) throw Error(ErrorCode::InvalidArgument, "no subenvironments");
    if (labels_.size() > 62) throw Error(ErrorCode::InvalidArgument, "too many subenvironments");
  }

  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::size_t size() const noexcept { return labels_.size(); }

  std::vector<std::string> labels_of(std::uint64_t mask) const {
    std::vector<std::string> out;
    for (std::size_t k = 0; k < labels_.size(); ++k)
      if (mask >> k & 1u) out.push_back(labels_[k]);
    return out;
  }

  const FragmentMeasures& at(std::uint64_t mask) {
    auto it = cache_.find(mask);
    if (it != cache_.end()) return it->second;
    const SystemFragmentModel model(rho_, system_, labels_of(mask));
    return cache_.emplace(mask, fragment_measures(model, opt_)).first->second;
  }

  std::size_t evaluated() const noexcept { return cache_.size(); }

 private:
  const DensityMatrix& rho_;
  std::string system_;
  std::vector<std::string> labels_;
  OptimizerConfig opt_;
  std::map<std::uint64_t, FragmentMeasures> cache_;
};

namespace detail {

/// All k-subsets of the low n bits, in lexicographic order of their index
/// lists.
inline std::vector<std::uint64_t> subsets_of_size(std::uint64_t universe, std::size_t k) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < 64; ++i)
    if (universe >> i & 1u) idx.push_back(i);
  std::vector<std::uint64_t> out;
  if (k == 0 || k > idx.size()) return out;
  std::vector<std::size_t> c(k);
  for (std::size_t i = 0; i < k; ++i) c[i] = i;
  while (true) {
    std::uint64_t m = 0;
    for (auto i : c) m |= std::uint64_t{1} << idx[i];
    out.push_back(m);
    std::size_t i = k;
    while (i > 0 && c[i - 1] == idx.size() - k + (i - 1)) --i;
    if (i == 0) break;
    ++c[i - 1];
    for (std::size_t j = i; j < k; ++j) c[j] = c[j - 1] + 1;
  }
  return out;
}

inline double binomial(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

struct Packing {
  std::vector<std::uint64_t> minimal;  // minimal qualifying sets, by size then lexicographic
  std::size_t best = 0;
  std::vector<std::uint64_t> best_sets;
  std::size_t min_size = 1;

  void search(std::uint64_t remaining, std::vector<std::uint64_t>& chosen) {
    if (chosen.size() > best) {
      best = chosen.size();
      best_sets = chosen;
    }
    const std::size_t bound = static_cast<std::size_t>(std::popcount(remaining)) / min_size;
    if (chosen.size() + bound <= best || remaining == 0) return;
    const std::uint64_t low = remaining & (~remaining + 1);
    for (auto s : minimal) {
      if (!(s & low) || (s & ~remaining)) continue;
      chosen.push_back(s);
      search(remaining & ~s, chosen);
      chosen.pop_back();
    }
    search(remaining & ~low, chosen);
  }
};

}  // namespace detail

/// Number of disjoint fragments (unions of whole subenvironments) each with
/// chi >= (1 - delta) H(S) - eps_opt.
///
/// For the system entropy the unmeasured H(S) is used; the pointer
/// measurement that attains chi leaves the diagonal of rho_S in the pointer
/// basis, whose entropy equals H(S) whenever the pointer basis diagonalises
/// rho_S.
inline RedundancyReport redundancy(const DensityMatrix& rho, const std::string& system, double delta,
                                   const OptimizerConfig& opt = {}, const RedundancyOptions& ro = {}) {
  if (!(delta > 0.0 && delta < 1.0)) throw Error(ErrorCode::DeltaOutOfRange, "delta must lie in (0, 1)");
  FragmentCache cache(rho, system, opt);
  const std::size_t n = cache.size();
  if (ro.strategy == RedundancyStrategy::Exhaustive && n > kMaxExhaustiveSubenvs)
    throw Error(ErrorCode::InvalidArgument, "exhaustive search supports at most 12 subenvironments");

  RedundancyReport out;
  out.delta = delta;
  out.strategy = to_string(ro.strategy);
  out.system_entropy = von_neumann_entropy(partial_trace(rho, {system}));
  out.threshold = (1.0 - delta) * out.system_entropy - ro.eps_opt;
  const std::uint64_t all = (n == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);

  std::set<std::uint64_t> checked_seen;
  auto qualifies = [&](std::uint64_t mask) {
    const FragmentMeasures& m = cache.at(mask);
    const bool q = m.chi.value >= out.threshold;
    if (q && checked_seen.insert(mask).second) {
      if (m.mutual_information <= out.system_entropy + ro.eps_opt) {
        ++out.discord_bound_checked;
        if (m.discord.value > delta * out.system_entropy + ro.eps_opt) ++out.discord_bound_violations;
      } else {
        ++out.discord_bound_skipped;
      }
    }
    return q;
  };

  std::vector<std::uint64_t> witnesses;
  if (ro.strategy == RedundancyStrategy::Exhaustive) {
    detail::Packing packing;
    std::vector<std::uint64_t> qualifying;
    for (std::size_t k = 1; k <= n; ++k)
      for (auto m : detail::subsets_of_size(all, k))
        if (qualifies(m)) qualifying.push_back(m);
    const std::set<std::uint64_t> qset(qualifying.begin(), qualifying.end());
    for (auto m : qualifying) {
      bool minimal = true;
      for (std::uint64_t rest = m; rest; rest &= rest - 1) {
        const std::uint64_t sub = m & ~(rest & (~rest + 1));
        if (sub && qset.count(sub)) {
          minimal = false;
          break;
        }
      }
      if (minimal) packing.minimal.push_back(m);
    }
    if (!packing.minimal.empty()) {
      packing.min_size = static_cast<std::size_t>(std::popcount(packing.minimal.front()));
      out.f_delta_min = static_cast<double>(packing.min_size) / static_cast<double>(n);
      std::vector<std::uint64_t> chosen;
      packing.search(all, chosen);
      witnesses = packing.best_sets;
    }
  } else {
    std::uint64_t remaining = all;
    std::size_t k = 1;
    while (remaining && k <= static_cast<std::size_t>(std::popcount(remaining))) {
      bool taken = false;
      for (auto m : detail::subsets_of_size(remaining, k))
        if (qualifies(m)) {
          if (witnesses.empty()) out.f_delta_min = static_cast<double>(k) / static_cast<double>(n);
          witnesses.push_back(m);
          remaining &= ~m;
          taken = true;
          break;
        }
      if (!taken) ++k;
    }
  }
  out.R_delta = witnesses.size();
  for (auto m : witnesses) {
    out.witness_fragments.push_back(cache.labels_of(m));
    out.witness_chi.push_back(cache.at(m).chi.value);
  }

  if (ro.scan) {
    std::mt19937_64 rng(ro.scan_seed);
    for (std::size_t k = 1; k <= n; ++k) {
      std::vector<std::uint64_t> picks;
      if (detail::binomial(n, k) <= static_cast<double>(ro.scan_samples)) {
        picks = detail::subsets_of_size(all, k);
      } else {
        std::set<std::uint64_t> seen;
        std::vector<std::size_t> idx(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = i;
        while (picks.size() < ro.scan_samples) {
          std::shuffle(idx.begin(), idx.end(), rng);
          std::uint64_t m = 0;
          for (std::size_t i = 0; i < k; ++i) m |= std::uint64_t{1} << idx[i];
          if (seen.insert(m).second) picks.push_back(m);
        }
      }
      ScanPoint pt;
      pt.fraction = static_cast<double>(k) / static_cast<double>(n);
      pt.samples = picks.size();
      for (auto m : picks) {
        const FragmentMeasures& fm = cache.at(m);
        pt.mean_chi += fm.chi.value;
        pt.mean_discord += fm.discord.value;
        pt.mean_I += fm.mutual_information;
      }
      pt.mean_chi /= static_cast<double>(pt.samples);
      pt.mean_discord /= static_cast<double>(pt.samples);
      pt.mean_I /= static_cast<double>(pt.samples);
      out.scan_curve.push_back(pt);
    }
  }
  out.fragments_evaluated = cache.evaluated();
  return out;
}

}  // namespace qdarwin

#endif  // QDARWIN_REDUNDANCY_HPP
