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

#ifndef QDARWIN_LAYOUT_HPP
#define QDARWIN_LAYOUT_HPP

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qdarwin/error.hpp"

namespace qdarwin {

enum class Role { System, Environment };

struct Factor {
  std::string label;
  std::size_t dim = 0;
  Role role = Role::Environment;

  friend bool operator==(const Factor&, const Factor&) = default;
};

/// Ordered tensor factors of a Hilbert space. The first factor is the most
/// significant index of the Kronecker product.
///
/// At most one factor carries the SYSTEM role; marginals on environment
/// factors alone have none.
class SubsystemLayout {
 public:
  SubsystemLayout() = default;

  explicit SubsystemLayout(std::vector<Factor> factors) : factors_(std::move(factors)) {
    std::set<std::string> seen;
    int systems = 0;
    for (const auto& f : factors_) {
      if (f.label.empty()) throw Error(ErrorCode::InvalidLayout, "empty factor label");
      if (!seen.insert(f.label).second) throw Error(ErrorCode::DuplicateLabel, f.label);
      if (f.role == Role::System) {
        ++systems;
        if (f.dim < 2) throw Error(ErrorCode::InvalidLayout, "system factor needs dim >= 2");
      } else if (f.dim < 1) {
        throw Error(ErrorCode::InvalidLayout, "factor " + f.label + " needs dim >= 1");
      }
    }
    if (systems > 1) throw Error(ErrorCode::InvalidLayout, "more than one system factor");
  }

  /// Convenience: system factor "S" of dimension `dims[0]` followed by
  /// environments "E1", "E2", ...
  static SubsystemLayout system_environment(const std::vector<std::size_t>& dims) {
    if (dims.empty()) throw Error(ErrorCode::InvalidLayout, "no factors");
    std::vector<Factor> factors;
    factors.push_back({"S", dims[0], Role::System});
    for (std::size_t k = 1; k < dims.size(); ++k)
      factors.push_back({"E" + std::to_string(k), dims[k], Role::Environment});
    return SubsystemLayout(std::move(factors));
  }

  const std::vector<Factor>& factors() const noexcept { return factors_; }
  std::size_t size() const noexcept { return factors_.size(); }
  const Factor& operator[](std::size_t i) const { return factors_.at(i); }

  std::size_t total_dim() const {
    std::size_t d = 1;
    for (const auto& f : factors_) d *= f.dim;
    return d;
  }

  bool contains(const std::string& label) const {
    return std::any_of(factors_.begin(), factors_.end(),
                       [&](const Factor& f) { return f.label == label; });
  }

  std::size_t index_of(const std::string& label) const {
    for (std::size_t i = 0; i < factors_.size(); ++i)
      if (factors_[i].label == label) return i;
    throw Error(ErrorCode::UnknownLabel, label);
  }

  const Factor& factor(const std::string& label) const { return factors_[index_of(label)]; }

  std::optional<std::string> system_label() const {
    for (const auto& f : factors_)
      if (f.role == Role::System) return f.label;
    return std::nullopt;
  }

  std::vector<std::string> labels() const {
    std::vector<std::string> out;
    for (const auto& f : factors_) out.push_back(f.label);
    return out;
  }

  std::vector<std::string> environment_labels() const {
    std::vector<std::string> out;
    for (const auto& f : factors_)
      if (f.role == Role::Environment) out.push_back(f.label);
    return out;
  }

  /// Factor positions of `labels`, sorted into layout order. Throws
  /// UnknownLabel for labels not present.
  std::vector<std::size_t> positions(const std::vector<std::string>& labels) const {
    std::vector<std::size_t> out;
    for (const auto& l : labels) out.push_back(index_of(l));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  SubsystemLayout select(const std::vector<std::size_t>& positions) const {
    std::vector<Factor> out;
    for (auto p : positions) out.push_back(factors_.at(p));
    return SubsystemLayout(std::move(out));
  }

  /// Product of dims of factors strictly after position `i`.
  std::size_t stride(std::size_t i) const {
    std::size_t s = 1;
    for (std::size_t k = i + 1; k < factors_.size(); ++k) s *= factors_[k].dim;
    return s;
  }

  SubsystemLayout concat(const SubsystemLayout& other) const {
    std::vector<Factor> out = factors_;
    out.insert(out.end(), other.factors_.begin(), other.factors_.end());
    return SubsystemLayout(std::move(out));
  }

  friend bool operator==(const SubsystemLayout&, const SubsystemLayout&) = default;

 private:
  std::vector<Factor> factors_;
};

}  // namespace qdarwin

#endif  // QDARWIN_LAYOUT_HPP
