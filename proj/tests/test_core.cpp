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
#include "qdarwin/io.hpp"
#include "qdarwin/qdarwin.hpp"

using namespace qdarwin;

namespace {

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no exception";
  return ErrorCode::InvalidArgument;
}

ComplexMatrix bell() {
  ComplexVector v = ComplexVector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return v * v.adjoint();
}

}  // namespace

TEST(Layout, RejectsBadFactors) {
  EXPECT_EQ(code_of([] { SubsystemLayout({{"S", 2, Role::System}, {"S", 2, Role::Environment}}); }),
            ErrorCode::DuplicateLabel);
  EXPECT_EQ(code_of([] { SubsystemLayout({{"S", 1, Role::System}}); }), ErrorCode::InvalidLayout);
  EXPECT_EQ(code_of([] { SubsystemLayout({{"A", 2, Role::System}, {"B", 2, Role::System}}); }),
            ErrorCode::InvalidLayout);
  EXPECT_EQ(code_of([] { SubsystemLayout({{"", 2, Role::Environment}}); }), ErrorCode::InvalidLayout);
  auto l = SubsystemLayout::system_environment({2, 3, 4});
  EXPECT_EQ(l.total_dim(), 24u);
  EXPECT_EQ(l.stride(0), 12u);
  EXPECT_EQ(code_of([&] { l.index_of("E9"); }), ErrorCode::UnknownLabel);
}

TEST(Validate, ReportsFirstFailure) {
  const auto l = SubsystemLayout::system_environment({2, 2});
  EXPECT_EQ(code_of([&] { validate_density_matrix(ComplexMatrix::Identity(3, 3) / 3.0, l); }),
            ErrorCode::DimensionMismatch);
  ComplexMatrix m = bell();
  m(0, 1) = 0.3;
  EXPECT_EQ(code_of([&] { validate_density_matrix(m, l); }), ErrorCode::NotHermitian);
  EXPECT_EQ(code_of([&] { validate_density_matrix(2.0 * bell(), l); }), ErrorCode::TraceNotOne);
  ComplexMatrix neg = ComplexMatrix::Zero(4, 4);
  neg(0, 0) = 1.2;
  neg(1, 1) = -0.2;
  EXPECT_EQ(code_of([&] { validate_density_matrix(neg, l); }), ErrorCode::NotPositive);
  ComplexMatrix nan = bell();
  nan(2, 2) = std::nan("");
  EXPECT_EQ(code_of([&] { validate_density_matrix(nan, l); }), ErrorCode::NonFinite);
  EXPECT_NO_THROW(validate_density_matrix(bell(), l));
}

TEST(PartialTrace, BellMarginalIsMaximallyMixed) {
  const auto rho = validate_density_matrix(bell(), SubsystemLayout::system_environment({2, 2}));
  const auto s = partial_trace(rho, {"S"});
  EXPECT_LT((s.matrix() - ComplexMatrix::Identity(2, 2) / 2.0).norm(), 1e-12);
  EXPECT_EQ(s.layout().size(), 1u);
}

TEST(PartialTrace, MatchesBruteForceOnRandomStates) {
  const auto layout = SubsystemLayout::system_environment({2, 3, 2});
  const std::vector<std::vector<std::string>> keeps{{"S"}, {"E1"}, {"E2"}, {"S", "E2"}, {"E1", "E2"}, {"S", "E1"}};
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto rho = make_random_state(seed, layout);
    for (const auto& keep : keeps) {
      std::vector<bool> mask(3, false);
      for (const auto& l : keep) mask[layout.index_of(l)] = true;
      const auto ref = oracle::partial_trace(rho.matrix(), {2, 3, 2}, mask);
      EXPECT_LT((partial_trace(rho, keep).matrix() - ref).norm(), 1e-12);
    }
  }
}

TEST(PartialTrace, TracingEverythingButNothingIsIdentityMap) {
  const auto rho = make_random_state(3, SubsystemLayout::system_environment({2, 2}));
  EXPECT_LT((partial_trace(rho, {"S", "E1"}).matrix() - rho.matrix()).norm(), 1e-14);
  EXPECT_EQ(code_of([&] { partial_trace(rho, {"X"}); }), ErrorCode::UnknownLabel);
}

TEST(Reorder, SwapIsInvolution) {
  const auto rho = make_random_state(5, SubsystemLayout::system_environment({2, 3}));
  const auto swapped = reorder(rho, {"E1", "S"});
  EXPECT_EQ(swapped.layout()[0].label, "E1");
  EXPECT_LT((reorder(swapped, {"S", "E1"}).matrix() - rho.matrix()).norm(), 1e-14);
  // marginals agree after reordering
  EXPECT_LT((partial_trace(swapped, {"S"}).matrix() - partial_trace(rho, {"S"}).matrix()).norm(), 1e-14);
}

TEST(Measurement, RejectsNonOrthonormalBasis) {
  ComplexMatrix b(2, 2);
  b << 1, 1, 0, 1;
  EXPECT_EQ(code_of([&] { ProjectiveMeasurement("S", b); }), ErrorCode::NotOrthonormal);
}

TEST(Measurement, BellConditionalsArePure) {
  const auto rho = validate_density_matrix(bell(), SubsystemLayout::system_environment({2, 2}));
  const auto ens = measure_subsystem(rho, ProjectiveMeasurement::computational("S", 2));
  ASSERT_EQ(ens.outcomes.size(), 2u);
  for (std::size_t a = 0; a < 2; ++a) {
    EXPECT_NEAR(ens.outcomes[a].probability, 0.5, 1e-12);
    ASSERT_TRUE(ens.outcomes[a].state);
    EXPECT_NEAR(std::abs(ens.outcomes[a].state->matrix()(a, a)), 1.0, 1e-12);
  }
  const auto deph = dephase_subsystem(rho, ProjectiveMeasurement::computational("S", 2));
  EXPECT_NEAR(std::abs(deph.matrix()(0, 3)), 0.0, 1e-14);
}

TEST(Measurement, ZeroProbabilityOutcomeHasNoState) {
  const auto rho = make_ghz_reduced(1);
  ComplexMatrix b = ComplexMatrix::Identity(2, 2);
  const auto ens = measure_subsystem(partial_trace(rho, {"S", "E1"}), ProjectiveMeasurement("S", b));
  EXPECT_TRUE(ens.outcomes[0].state);
  const auto pure = validate_density_matrix(
      [] {
        ComplexMatrix m = ComplexMatrix::Zero(4, 4);
        m(0, 0) = 1;
        return m;
      }(),
      SubsystemLayout::system_environment({2, 2}));
  const auto e2 = measure_subsystem(pure, ProjectiveMeasurement("S", b));
  EXPECT_FALSE(e2.outcomes[1].state);
  EXPECT_EQ(e2.outcomes[1].probability, 0.0);
}

TEST(Fragment, RejectsSystemAndDuplicates) {
  const auto l = SubsystemLayout::system_environment({2, 2, 2});
  EXPECT_THROW(FragmentSelector(l, {"S"}), Error);
  EXPECT_THROW(FragmentSelector(l, {"E1", "E1"}), Error);
  EXPECT_THROW(FragmentSelector(l, {}), Error);
  EXPECT_EQ(FragmentSelector(l, {"E2", "E1"}).labels(), (std::vector<std::string>{"E1", "E2"}));
}

TEST(Eig, DegenerateClustersAreCanonical) {
  // identity in a rotated basis must come back as the standard basis
  std::mt19937_64 rng(4);
  const ComplexMatrix u = haar_unitary(3, rng);
  ComplexMatrix m = u * RealVector::Ones(3).asDiagonal() * u.adjoint();
  const auto es = eig_hermitian(m);
  EXPECT_LT((es.vectors - ComplexMatrix::Identity(3, 3)).norm(), 1e-8);
  EXPECT_THROW(eig_hermitian(ComplexMatrix::Random(3, 3)), Error);
}

TEST(Eig, ValuesDescendAndReconstruct) {
  const auto rho = make_random_state(8, SubsystemLayout::system_environment({4}));
  const auto es = eig_hermitian(rho.matrix());
  for (Eigen::Index i = 1; i < es.values.size(); ++i) EXPECT_GE(es.values(i - 1), es.values(i));
  const ComplexMatrix back = es.vectors * es.values.cast<cplx>().asDiagonal() * es.vectors.adjoint();
  EXPECT_LT((back - rho.matrix()).norm(), 1e-12);
  EXPECT_LT(orthonormality_defect(es.vectors), 1e-12);
}

TEST(Pure, NormChecked) {
  ComplexVector v = ComplexVector::Ones(4);
  EXPECT_THROW(PureState(v, SubsystemLayout::system_environment({2, 2})), Error);
  v /= 2.0;
  const PureState psi(v, SubsystemLayout::system_environment({2, 2}));
  EXPECT_NEAR(psi.to_density().matrix().trace().real(), 1.0, 1e-14);
}

TEST(StateFile, RoundTripsBitForBit) {
  const auto rho = make_random_state(11, SubsystemLayout::system_environment({2, 3}));
  const auto text = state_to_json(rho);
  const auto back = state_from_json(text);
  EXPECT_EQ(back.layout(), rho.layout());
  EXPECT_EQ((back.matrix() - rho.matrix()).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(state_to_json(back), text);
}

TEST(StateFile, MalformedInputs) {
  EXPECT_EQ(code_of([] { state_from_json("{"); }), ErrorCode::MalformedFile);
  EXPECT_EQ(code_of([] { state_from_json(R"({"layout": []})"); }), ErrorCode::MalformedFile);
  EXPECT_EQ(code_of([] {
              state_from_json(
                  R"({"layout":[{"label":"S","dim":2,"role":"system"}],"matrix":[[[1,0],[0,0]]]})");
            }),
            ErrorCode::MalformedFile);
  EXPECT_EQ(code_of([] {
              state_from_json(
                  R"({"layout":[{"label":"S","dim":2,"role":"system"}],"matrix":[[[1,0],[0,0]],[[0,0],[1,0]]]})");
            }),
            ErrorCode::TraceNotOne);
}

TEST(Tensor, KroneckerOrderFollowsArguments) {
  ComplexMatrix a = ComplexMatrix::Zero(2, 2), b = ComplexMatrix::Zero(3, 3);
  a(1, 1) = 1;
  b(0, 0) = 1;
  const auto t = tensor({DensityMatrix::assume_valid(a, SubsystemLayout({{"S", 2, Role::System}})),
                         DensityMatrix::assume_valid(b, SubsystemLayout({{"E1", 3, Role::Environment}}))});
  EXPECT_NEAR(t.matrix()(3, 3).real(), 1.0, 1e-15);  // |1>|0> -> index 1*3 + 0
}
