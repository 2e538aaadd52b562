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

// Slow, direct reference implementations used only by the tests. Nothing
// here shares code with the library beyond Eigen's eigenvalue routine.

#ifndef QDARWIN_TESTS_ORACLES_HPP
#define QDARWIN_TESTS_ORACLES_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

inline double h(const std::vector<double>& ps) {
  double s = 0.0;
  for (double p : ps)
    if (p > 1e-300) s -= p * std::log2(p);
  return s;
}

inline double h2(double p) { return h({p, 1.0 - p}); }

inline double entropy(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double v = es.eigenvalues()(i);
    if (v > 1e-15) s -= v * std::log2(v);
  }
  return s;
}

/// Digits of x in the mixed radix `dims`, most significant first.
inline std::vector<std::size_t> digits(std::size_t x, const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> d(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    d[k] = x % dims[k];
    x /= dims[k];
  }
  return d;
}

/// Partial trace by brute force over every matrix element; `keep` is a mask
/// over factors, kept factors stay in their original order.
inline Mat partial_trace(const Mat& rho, const std::vector<std::size_t>& dims, const std::vector<bool>& keep) {
  std::size_t total = 1, kept = 1;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    total *= dims[k];
    if (keep[k]) kept *= dims[k];
  }
  Mat out = Mat::Zero(static_cast<Eigen::Index>(kept), static_cast<Eigen::Index>(kept));
  for (std::size_t r = 0; r < total; ++r)
    for (std::size_t c = 0; c < total; ++c) {
      const auto dr = digits(r, dims), dc = digits(c, dims);
      bool match = true;
      std::size_t ir = 0, ic = 0;
      for (std::size_t k = 0; k < dims.size(); ++k) {
        if (keep[k]) {
          ir = ir * dims[k] + dr[k];
          ic = ic * dims[k] + dc[k];
        } else if (dr[k] != dc[k]) {
          match = false;
        }
      }
      if (match) out(static_cast<Eigen::Index>(ir), static_cast<Eigen::Index>(ic)) += rho(r, c);
    }
  return out;
}

/// chi for system basis `u` (columns) of a two-factor state [S, F].
inline double chi_in_basis(const Mat& rho, std::size_t ds, std::size_t df, const Mat& u) {
  const Mat rf = partial_trace(rho, {ds, df}, {false, true});
  double val = entropy(rf);
  for (Eigen::Index a = 0; a < u.cols(); ++a) {
    Mat block = Mat::Zero(static_cast<Eigen::Index>(df), static_cast<Eigen::Index>(df));
    for (std::size_t i = 0; i < ds; ++i)
      for (std::size_t j = 0; j < ds; ++j) {
        const cplx w = std::conj(u(static_cast<Eigen::Index>(i), a)) * u(static_cast<Eigen::Index>(j), a);
        block += w * rho.block(static_cast<Eigen::Index>(i * df), static_cast<Eigen::Index>(j * df),
                               static_cast<Eigen::Index>(df), static_cast<Eigen::Index>(df));
      }
    const double p = block.trace().real();
    if (p > 1e-14) val -= p * entropy(block / p);
  }
  return val;
}

inline Mat qubit_basis(double theta, double phi) {
  Mat u(2, 2);
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  const cplx e = std::polar(1.0, phi);
  u << c, -std::conj(e) * s, e * s, c;
  return u;
}

/// Brute-force maximum of chi over a theta x phi grid (qubit system).
inline double grid_chi(const Mat& rho, std::size_t df, std::size_t n = 200) {
  double best = 0.0;
  for (std::size_t i = 0; i <= n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double theta = std::numbers::pi * double(i) / double(n);
      const double phi = 2 * std::numbers::pi * double(j) / double(n);
      best = std::max(best, chi_in_basis(rho, 2, df, qubit_basis(theta, phi)));
    }
  return best;
}

/// Horodecki state: H(S) = h(p^2 + (1-p)^2), H(E) = H(SE) = h(p).
inline double horodecki_HS(double p) { return h2(p * p + (1 - p) * (1 - p)); }

/// chi of the Horodecki state in the computational basis of S.
inline double horodecki_chi_computational(double p) {
  const double pt = p * p + (1 - p) * (1 - p);
  return h2(p) - pt * h({p * p / pt, (1 - p) * (1 - p) / pt}) - (1 - pt);
}

/// chi in the eigenbasis of sigma_x: both conditionals are pure, chi = h(p).
inline double horodecki_chi_x(double p) { return h2(p); }

}  // namespace oracle

#endif  // QDARWIN_TESTS_ORACLES_HPP
