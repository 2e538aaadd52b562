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

#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qdarwin/qdarwin.hpp"

using namespace qdarwin;

namespace {

DensityMatrix two_qubit(const ComplexMatrix& m) { return validate_density_matrix(m, SubsystemLayout::system_environment({2, 2})); }

DensityMatrix bell() {
  ComplexVector v = ComplexVector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return two_qubit(v * v.adjoint());
}

// 1/2 (|0><0| x |0><0| + |1><1| x |+><+|)
DensityMatrix cq_plus() {
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  m(0, 0) = 0.5;
  m.block(2, 2, 2, 2).setConstant(0.25);
  return two_qubit(m);
}

FragmentSelector e1(const DensityMatrix& r) { return FragmentSelector(r.layout(), {"E1"}); }

}  // namespace

TEST(Shannon, KnownValues) {
  EXPECT_NEAR(shannon_entropy({0.5, 0.5}), 1.0, 1e-15);
  EXPECT_NEAR(shannon_entropy({1.0, 0.0}), 0.0, 1e-15);
  EXPECT_NEAR(shannon_entropy({0.25, 0.25, 0.25, 0.25}), 2.0, 1e-15);
  EXPECT_NEAR(shannon_entropy({0.25, 0.75}), 0.8112781244591328, 1e-12);
}

TEST(VonNeumann, MatchesOracleOnRandomStates) {
  for (std::uint64_t s = 1; s <= 20; ++s) {
    const auto rho = make_random_state(s, SubsystemLayout::system_environment({3, 2}));
    EXPECT_NEAR(von_neumann_entropy(rho), oracle::entropy(rho.matrix()), 1e-10);
  }
}

TEST(MutualInformation, BellAndProduct) {
  EXPECT_NEAR(mutual_information(bell(), {"S"}, {"E1"}), 2.0, 1e-10);
  const auto prod = tensor({make_random_state(2, SubsystemLayout({{"S", 2, Role::System}})),
                            make_random_state(3, SubsystemLayout({{"E1", 3, Role::Environment}}))});
  EXPECT_NEAR(mutual_information(prod, {"S"}, {"E1"}), 0.0, 1e-10);
  EXPECT_THROW(mutual_information(prod, {"S"}, {"S"}), Error);
}

TEST(ConditionalMutualInformation, GhzAndProperties) {
  const auto ghz = make_ghz_reduced(2);
  EXPECT_NEAR(conditional_mutual_information(ghz, {"E1"}, {"E2"}, {"S"}), 0.0, 1e-10);
  EXPECT_NEAR(conditional_mutual_information(ghz, {"E1"}, {"E2"}, {}), 1.0, 1e-10);
  for (std::uint64_t s = 1; s <= 30; ++s) {
    const auto rho = make_random_state(s, SubsystemLayout::system_environment({2, 2, 2}));
    EXPECT_GE(conditional_mutual_information(rho, {"E1"}, {"E2"}, {"S"}), -1e-9);
  }
}

TEST(Fidelity, PureOverlapAndTraceDistance) {
  ComplexMatrix a = ComplexMatrix::Zero(2, 2);
  a(0, 0) = 1;
  ComplexMatrix plus = ComplexMatrix::Constant(2, 2, 0.5);
  EXPECT_NEAR(fidelity_B(a, plus), 1.0 / std::sqrt(2.0), 1e-12);
  const auto l = SubsystemLayout({{"S", 2, Role::System}});
  EXPECT_NEAR(trace_distance(DensityMatrix::assume_valid(a, l), DensityMatrix::assume_valid(plus, l)),
              1.0 / std::sqrt(2.0), 1e-12);
}

TEST(Holevo, GhzAndBell) {
  const auto ghz = make_ghz_reduced(1);
  const auto chi = holevo_quantity(ghz, "S", e1(ghz), {});
  EXPECT_NEAR(chi.value, 1.0, 1e-9);
  const auto b = bell();
  const auto cb = holevo_quantity(b, "S", e1(b), {});
  EXPECT_NEAR(cb.value, 1.0, 1e-9);
  EXPECT_NEAR(discord(b, "S", e1(b), {}).value, 1.0, 1e-9);
}

TEST(Holevo, HorodeckiComputationalBasisIsTheClosedForm) {
  for (double p : {0.1, 0.25, 0.4, 0.6, 0.9}) {
    const auto r = make_horodecki(p);
    EXPECT_NEAR(holevo_in_basis(r, "S", e1(r), ComplexMatrix::Identity(2, 2)),
                oracle::horodecki_chi_computational(p), 1e-12);
  }
  EXPECT_NEAR(oracle::horodecki_chi_computational(0.25), 0.14315587846583222, 1e-12);
}

TEST(Holevo, HorodeckiOptimumIsSigmaXEigenbasis) {
  // the maximum over system bases exceeds the computational-basis value
  for (double p : {0.1, 0.25, 0.7}) {
    const auto r = make_horodecki(p);
    const auto chi = holevo_quantity(r, "S", e1(r), {});
    EXPECT_NEAR(chi.value, oracle::horodecki_chi_x(p), 1e-7);
    EXPECT_GE(chi.value + 1e-9, oracle::grid_chi(r.matrix(), 2, 60));
  }
}

TEST(Holevo, OptimizerBeatsBruteForceGrid) {
  for (std::uint64_t s = 1; s <= 8; ++s) {
    const auto rho = make_random_state(s, SubsystemLayout::system_environment({2, 2}));
    const double grid = oracle::grid_chi(rho.matrix(), 2, 60);
    const auto chi = holevo_quantity(rho, "S", e1(rho), {});
    EXPECT_GE(chi.value, grid - 1e-9) << "seed " << s;
    EXPECT_LE(chi.value, grid + 5e-3) << "seed " << s;  // grid spacing ~ 3 degrees
  }
}

TEST(Holevo, QutritSystemReachesEntropyOnBroadcastState) {
  const auto rho = make_random_sbs(5, 3, 1, 5);
  const auto chi = holevo_quantity(rho, "S", e1(rho), {});
  EXPECT_NEAR(chi.value, von_neumann_entropy(partial_trace(rho, {"S"})), 1e-7);
  EXPECT_TRUE(chi.converged);
}

TEST(Holevo, BoundedByFragmentEntropyAndI) {
  for (std::uint64_t s = 1; s <= 20; ++s) {
    const auto rho = make_random_state(s, SubsystemLayout::system_environment({2, 3}));
    const SystemFragmentModel m(rho, "S", {"E1"});
    const auto fm = fragment_measures(m, {});
    EXPECT_LE(fm.chi.value, m.fragment_entropy() + 1e-9);
    EXPECT_LE(fm.chi.value, fm.mutual_information + 1e-6);
    EXPECT_NEAR(fm.chi.value + fm.discord.value, fm.mutual_information, 1e-6);
  }
}

TEST(AccessibleInfo, CommutingEnsembleIsExact) {
  const auto ghz = make_ghz_reduced(1);
  const SystemFragmentModel m(ghz, "S", {"E1"});
  const auto chi = holevo_quantity(m, {});
  const auto b = accessible_information_bounds(m, chi, {});
  EXPECT_TRUE(b.exact);
  EXPECT_NEAR(b.lower, b.upper, 1e-9);
}

TEST(AccessibleInfo, LowerBoundBelowHolevo) {
  const auto r = cq_plus();
  const SystemFragmentModel m(r, "S", {"E1"});
  const auto chi = holevo_quantity(m, {});
  const auto b = accessible_information_bounds(m, chi, {});
  EXPECT_FALSE(b.exact);
  EXPECT_LE(b.lower, b.upper + 1e-9);
  EXPECT_GT(b.lower, 0.0);
}

TEST(Eta, CqWithOverlappingConditionals) {
  const auto r = cq_plus();
  EXPECT_NEAR(eta_bound(r, "S", e1(r), ProjectiveMeasurement::computational("S", 2)), 1.0 / std::sqrt(2.0), 1e-10);
}

TEST(Eta, VanishesOnBroadcastState) {
  const auto r = make_ghz_reduced(2);
  EXPECT_NEAR(eta_bound(r, "S", FragmentSelector(r.layout(), {"E1", "E2"}),
                        ProjectiveMeasurement::computational("S", 2)),
              0.0, 1e-12);
}

TEST(Measures, IdentityOnRandomStatesProperty) {
  // I = chi + D at the shared basis, entropy additivity on products
  std::mt19937_64 rng(99);
  for (int t = 0; t < 40; ++t) {
    const auto a = make_random_state(rng(), SubsystemLayout({{"S", 2, Role::System}}));
    const auto b = make_random_state(rng(), SubsystemLayout({{"E1", 2, Role::Environment}}));
    const auto ab = tensor({a, b});
    EXPECT_NEAR(von_neumann_entropy(ab), von_neumann_entropy(a) + von_neumann_entropy(b), 1e-9);
    const auto rho = make_random_state(rng(), SubsystemLayout::system_environment({2, 2}));
    const auto fm = fragment_measures(SystemFragmentModel(rho, "S", {"E1"}), {});
    EXPECT_NEAR(fm.mutual_information, fm.chi.value + fm.discord.value, 1e-6);
    EXPECT_GE(fm.discord.value, -1e-6);
  }
}
