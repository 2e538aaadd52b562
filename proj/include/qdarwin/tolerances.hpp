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

#ifndef QDARWIN_TOLERANCES_HPP
#define QDARWIN_TOLERANCES_HPP

namespace qdarwin {

/// Linear-algebra validation tolerances.
struct Tolerances {
  double herm = 1e-9;
  double psd = 1e-9;
  double trace = 1e-9;
  double orth = 1e-9;
  double eig = 1e-10;
  double prob = 1e-12;
};

/// Numerical slack for entropic quantities, in bits.
///
/// `num` applies to closed-form quantities (entropies of fixed states),
/// `opt` to anything that went through a measurement optimisation.
struct MeasureTolerances {
  double num = 1e-9;
  double opt = 1e-6;
  double comm = 1e-9;
};

/// Tolerances of the structural detectors.
struct VerdictTolerances {
  double offdiag = 1e-8;   // Frobenius norm of off-diagonal pointer blocks
  double overlap = 1e-8;   // tr(rho_i rho_j) between conditionals
  double cmi = 1e-8;       // bits
  double product = 1e-8;   // Frobenius distance of a branch to the product of its marginals
  double sqd = 1e-6;       // bits, for the equalities of strong quantum Darwinism
  double borderline = 10.0;
  // Eigenvalues of rho_S closer than this are treated as one cluster when
  // choosing a pointer basis.
  double pointer_degeneracy = 1e-6;
};

inline constexpr Tolerances kDefaultTolerances{};
inline constexpr MeasureTolerances kDefaultMeasureTolerances{};
inline constexpr VerdictTolerances kDefaultVerdictTolerances{};

/// Ratio of a diagnostic to its tolerance lies in [1/factor, factor].
inline bool in_borderline_band(double ratio, double factor) {
  return ratio >= 1.0 / factor && ratio <= factor;
}

}  // namespace qdarwin

#endif  // QDARWIN_TOLERANCES_HPP
