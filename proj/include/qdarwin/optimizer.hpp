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

#ifndef QDARWIN_OPTIMIZER_HPP
#define QDARWIN_OPTIMIZER_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include "qdarwin/linalg.hpp"

namespace qdarwin {

/// Knobs of the measurement optimisation.
///
/// Qubit factors are searched on a (theta, phi) Bloch grid followed by simplex
/// refinement from the best grid points; larger factors use `restarts` random
/// unitaries U0 and refine U0 exp(iH) over the d^2 real parameters of H.
struct OptimizerConfig {
  std::size_t theta_points = 64;
  std::size_t phi_points = 32;
  std::size_t refine_starts = 5;
  std::size_t restarts = 20;
  std::size_t max_evaluations = 4000;  // per local refinement
  std::uint64_t seed = 20190101;
  double tol = 1e-6;  // bits; best-vs-second-best gap that counts as converged
  bool throw_on_nonconvergence = true;
};

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t evaluations = 0;
};

/// Nelder-Mead minimisation with standard coefficients (1, 2, 1/2, 1/2).
///
/// Stops when the spread of values over the simplex drops below `ftol` or the
/// evaluation budget is spent. The simplex is rebuilt around the incumbent
/// until a rebuild stops improving it, which guards against collapse.
inline SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                 std::vector<double> x0, double step, std::size_t max_evaluations,
                                 double ftol = 1e-14) {
  const std::size_t n = x0.size();
  SimplexResult best{x0, f(x0), 1};
  if (n == 0) return best;

  std::size_t evals = 1;
  double scale = step;
  for (int rebuild = 0; rebuild < 6 && evals < max_evaluations; ++rebuild) {
    std::vector<std::vector<double>> pts(n + 1, best.x);
    std::vector<double> vals(n + 1, best.value);
    for (std::size_t i = 0; i < n; ++i) {
      pts[i + 1][i] += scale;
      vals[i + 1] = f(pts[i + 1]);
      ++evals;
    }
    std::vector<std::size_t> idx(n + 1);
    std::vector<double> centroid(n), trial(n), trial2(n);
    while (evals < max_evaluations) {
      for (std::size_t i = 0; i <= n; ++i) idx[i] = i;
      std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
      const std::size_t lo = idx[0], hi = idx[n], second = idx[n - 1];
      if (std::abs(vals[hi] - vals[lo]) <= ftol) break;

      std::fill(centroid.begin(), centroid.end(), 0.0);
      for (std::size_t i = 0; i <= n; ++i)
        if (i != hi)
          for (std::size_t k = 0; k < n; ++k) centroid[k] += pts[i][k] / static_cast<double>(n);

      for (std::size_t k = 0; k < n; ++k) trial[k] = centroid[k] + (centroid[k] - pts[hi][k]);
      const double fr = f(trial);
      ++evals;
      if (fr < vals[lo]) {
        for (std::size_t k = 0; k < n; ++k) trial2[k] = centroid[k] + 2.0 * (centroid[k] - pts[hi][k]);
        const double fe = f(trial2);
        ++evals;
        if (fe < fr) {
          pts[hi] = trial2;
          vals[hi] = fe;
        } else {
          pts[hi] = trial;
          vals[hi] = fr;
        }
        continue;
      }
      if (fr < vals[second]) {
        pts[hi] = trial;
        vals[hi] = fr;
        continue;
      }
      const bool outside = fr < vals[hi];
      for (std::size_t k = 0; k < n; ++k)
        trial2[k] = outside ? centroid[k] + 0.5 * (trial[k] - centroid[k])
                            : centroid[k] + 0.5 * (pts[hi][k] - centroid[k]);
      const double fc = f(trial2);
      ++evals;
      if (fc < std::min(fr, vals[hi])) {
        pts[hi] = trial2;
        vals[hi] = fc;
        continue;
      }
      // shrink towards the best vertex
      for (std::size_t i = 0; i <= n; ++i) {
        if (i == lo) continue;
        for (std::size_t k = 0; k < n; ++k) pts[i][k] = pts[lo][k] + 0.5 * (pts[i][k] - pts[lo][k]);
        vals[i] = f(pts[i]);
        ++evals;
      }
    }
    const auto it = std::min_element(vals.begin(), vals.end());
    const double improvement = best.value - *it;
    if (*it < best.value) {
      best.value = *it;
      best.x = pts[static_cast<std::size_t>(it - vals.begin())];
    }
    if (rebuild > 0 && improvement <= ftol) break;
    scale *= 0.25;
  }
  best.evaluations = evals;
  return best;
}

/// Qubit basis with first vector (cos(theta/2), e^{i phi} sin(theta/2)).
inline ComplexMatrix bloch_basis(double theta, double phi) {
  ComplexMatrix b(2, 2);
  const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
  const cplx e = std::polar(1.0, phi);
  b(0, 0) = c;
  b(1, 0) = e * s;
  b(0, 1) = -std::conj(e) * s;
  b(1, 1) = c;
  return b;
}

/// Inverse of bloch_basis up to phases of the first column.
inline std::pair<double, double> bloch_angles(const ComplexMatrix& basis) {
  const cplx a = basis(0, 0), b = basis(1, 0);
  const double theta = 2.0 * std::atan2(std::abs(b), std::abs(a));
  const double phi = (std::abs(a) > 0.0 && std::abs(b) > 0.0) ? std::arg(b) - std::arg(a) : 0.0;
  return {theta, phi};
}

/// Hermitian d x d matrix from d^2 real parameters: the first d fill the
/// diagonal, the rest the real and imaginary parts of the upper triangle.
inline ComplexMatrix hermitian_from_params(const std::vector<double>& x, std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  ComplexMatrix h = ComplexMatrix::Zero(n, n);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < n; ++i) h(i, i) = x[k++];
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      h(i, j) = cplx(x[k], x[k + 1]);
      h(j, i) = std::conj(h(i, j));
      k += 2;
    }
  return h;
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases of
/// R's diagonal moved into Q.
template <class Rng>
ComplexMatrix haar_unitary(std::size_t d, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(d);
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) g(i, j) = cplx(normal(rng), normal(rng));
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

struct BasisOptimum {
  ComplexMatrix basis;
  double value = 0.0;
  std::size_t restarts = 0;  // local refinements performed
  double gap = 0.0;          // best minus second-best refined value
  bool converged = true;
};

/// Maximises `objective` over orthonormal bases of a d-dimensional factor.
///
/// `seeds` are extra starting bases (for example a pointer candidate); they
/// are refined after the grid starts for qubits and before the random
/// restarts otherwise. Among refined results within `config.tol` of the best,
/// the earliest one in start order is reported.
inline BasisOptimum maximize_over_bases(std::size_t d,
                                        const std::function<double(const ComplexMatrix&)>& objective,
                                        const std::vector<ComplexMatrix>& seeds,
                                        const OptimizerConfig& config) {
  struct Refined {
    ComplexMatrix basis;
    double value;
  };
  std::vector<Refined> refined;

  if (d == 1) {
    ComplexMatrix one = ComplexMatrix::Identity(1, 1);
    return {one, objective(one), 0, 0.0, true};
  }

  if (d == 2) {
    const std::size_t nt = std::max<std::size_t>(config.theta_points, 2);
    const std::size_t np = std::max<std::size_t>(config.phi_points, 1);
    const double dtheta = std::numbers::pi / static_cast<double>(nt - 1);
    const double dphi = 2.0 * std::numbers::pi / static_cast<double>(np);
    struct GridPoint {
      double value, theta, phi;
    };
    std::vector<GridPoint> grid;
    grid.reserve(nt * np);
    for (std::size_t i = 0; i < nt; ++i) {
      const double theta = dtheta * static_cast<double>(i);
      // at the poles phi only changes phases
      const std::size_t nphi = (i == 0 || i + 1 == nt) ? 1 : np;
      for (std::size_t j = 0; j < nphi; ++j) {
        const double phi = dphi * static_cast<double>(j);
        grid.push_back({objective(bloch_basis(theta, phi)), theta, phi});
      }
    }
    std::vector<std::size_t> order(grid.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return grid[a].value > grid[b].value; });

    std::vector<std::pair<double, double>> starts;
    for (std::size_t k = 0; k < std::min(config.refine_starts, order.size()); ++k)
      starts.emplace_back(grid[order[k]].theta, grid[order[k]].phi);
    for (const auto& s : seeds) starts.push_back(bloch_angles(s));

    auto f = [&](const std::vector<double>& x) { return -objective(bloch_basis(x[0], x[1])); };
    for (const auto& [theta, phi] : starts) {
      auto r = nelder_mead(f, {theta, phi}, 0.5 * dtheta, config.max_evaluations);
      refined.push_back({bloch_basis(r.x[0], r.x[1]), -r.value});
    }
  } else {
    std::mt19937_64 rng(config.seed);
    std::vector<ComplexMatrix> starts = seeds;
    for (std::size_t k = 0; k < config.restarts; ++k) starts.push_back(haar_unitary(d, rng));
    for (const auto& u0 : starts) {
      auto basis_at = [&](const std::vector<double>& x) {
        return ComplexMatrix(u0 * expi_hermitian(hermitian_from_params(x, d)));
      };
      auto f = [&](const std::vector<double>& x) { return -objective(basis_at(x)); };
      auto r = nelder_mead(f, std::vector<double>(d * d, 0.0), 0.3, config.max_evaluations);
      refined.push_back({basis_at(r.x), -r.value});
    }
  }

  BasisOptimum out;
  out.restarts = refined.size();
  std::vector<double> values;
  for (const auto& r : refined) values.push_back(r.value);
  std::sort(values.begin(), values.end(), std::greater<>());
  out.value = values.front();
  out.gap = values.size() > 1 ? values[0] - values[1] : 0.0;
  out.converged = out.gap < config.tol;
  for (const auto& r : refined) {
    if (r.value >= out.value - config.tol) {
      out.basis = r.basis;
      break;
    }
  }
  return out;
}

}  // namespace qdarwin

#endif  // QDARWIN_OPTIMIZER_HPP
