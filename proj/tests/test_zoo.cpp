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

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qdarwin/qdarwin.hpp"

using namespace qdarwin;

TEST(MakeSbs, TwoPureBranchesIsGhz) {
  SbsSpec spec;
  spec.probabilities = {0.5, 0.5};
  spec.subenvironment_dims = {2, 2};
  spec.supports = {{{0}, {0}}, {{1}, {1}}};
  spec.spectra = {{{1.0}, {1.0}}, {{1.0}, {1.0}}};
  EXPECT_LT((make_sbs(spec).matrix() - make_ghz_reduced(2).matrix()).norm(), 1e-15);
}

TEST(MakeSbs, OverlappingSupports) {
  SbsSpec spec;
  spec.probabilities = {0.5, 0.5};
  spec.subenvironment_dims = {3};
  spec.supports = {{{0, 1}}, {{1}}};
  spec.spectra = {{{0.5, 0.5}}, {{1.0}}};
  try {
    make_sbs(spec);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OverlappingSupports);
  }
}

TEST(RandomSbs, DeterministicAndBroadcast) {
  const auto a = make_random_sbs(1, 2, 3, 4);
  const auto b = make_random_sbs(1, 2, 3, 4);
  EXPECT_EQ((a.matrix() - b.matrix()).cwiseAbs().maxCoeff(), 0.0);
  const auto c = make_random_sbs(2, 2, 3, 4);
  EXPECT_GT((a.layout() == c.layout()) ? (a.matrix() - c.matrix()).norm() : 1.0, 1e-3);
  for (const auto* r : {&a, &c}) {
    EXPECT_NO_THROW(validate_density_matrix(r->matrix(), r->layout()));
    EXPECT_TRUE(detect_sbs(*r, "S", FragmentSelector(r->layout(), r->layout().environment_labels())).holds);
  }
}

TEST(RandomSbs, RecoversBranchProbabilities) {
  for (Seed s = 10; s < 20; ++s) {
    const auto spec = random_sbs_spec(s, 3, 2, 4);
    const auto rho = make_sbs(spec);
    const auto v = detect_sbs(rho, "S", FragmentSelector(rho.layout(), rho.layout().environment_labels()));
    ASSERT_TRUE(v.holds);
    // the pointer basis is a permutation of the computational one
    std::vector<double> got = v.branch_probabilities, want = spec.probabilities;
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(got[i], want[i], 1e-9);
  }
}

TEST(RandomSbs, DimensionTooSmall) {
  try {
    make_random_sbs(1, 3, 2, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionTooSmall);
  }
}

TEST(Ghz, MarginalsAndInformation) {
  const auto g1 = make_ghz_reduced(1);
  EXPECT_NEAR(g1.matrix()(0, 0).real(), 0.5, 0);
  EXPECT_NEAR(g1.matrix()(3, 3).real(), 0.5, 0);
  const auto g5 = make_ghz_reduced(5);
  EXPECT_EQ(g5.dim(), 64u);
  EXPECT_LT((partial_trace(g5, {"S"}).matrix() - ComplexMatrix::Identity(2, 2) / 2.0).norm(), 1e-15);
  EXPECT_NEAR(mutual_information(g5, {"S"}, {"E3"}), 1.0, 1e-10);
}

TEST(Horodecki, MarginalIdentitiesOnGrid) {
  for (int k = 1; k <= 99; ++k) {
    const double p = k / 100.0;
    const auto r = make_horodecki(p);
    const double pt = p * p + (1 - p) * (1 - p);
    ComplexMatrix s = ComplexMatrix::Zero(2, 2), e = ComplexMatrix::Zero(2, 2);
    s(0, 0) = pt;
    s(1, 1) = 1 - pt;
    e(0, 0) = p;
    e(1, 1) = 1 - p;
    EXPECT_LT((partial_trace(r, {"S"}).matrix() - s).norm(), 1e-9);
    EXPECT_LT((partial_trace(r, {"E1"}).matrix() - e).norm(), 1e-9);
    EXPECT_NEAR(von_neumann_entropy(r), oracle::h2(p), 1e-9);
  }
  EXPECT_NEAR(partial_trace(make_horodecki(0.0), {"E1"}).matrix()(1, 1).real(), 1.0, 1e-15);
  EXPECT_THROW(make_horodecki(1.5), Error);
}

TEST(AppendixB, Construction) {
  const auto r = make_appendix_b2(2, 0.5);
  EXPECT_NEAR(von_neumann_entropy(r), 1.0, 1e-10);  // rank 2, equal weights
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(r.matrix());
  int rank = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) rank += es.eigenvalues()(i) > 1e-12;
  EXPECT_EQ(rank, 2);
  EXPECT_EQ(make_appendix_b1(3, 0.3).dim(), 128u);
  EXPECT_THROW(make_appendix_b1(1, 0.5), Error);
  EXPECT_THROW(make_appendix_b2(2, 1.0), Error);
  // partial trace of the coherent branches gives the mixed ones
  const auto b1 = make_appendix_b1(3, 0.3), b2 = make_appendix_b2(3, 0.3);
  EXPECT_LT((partial_trace(b1, {"S", "E2"}).matrix() - partial_trace(b2, {"S", "E2"}).matrix()).norm(), 1e-14);
}

TEST(Haar, NormDeterminismAndPurity) {
  const auto l = SubsystemLayout::system_environment({2, 2, 2});
  const auto a = make_haar_random_pure(7, l), b = make_haar_random_pure(7, l);
  EXPECT_NEAR(a.amplitudes().norm(), 1.0, 1e-9);
  EXPECT_EQ((a.amplitudes() - b.amplitudes()).cwiseAbs().maxCoeff(), 0.0);
  // mean marginal purity for two qubits is (dA + dB) / (dA dB + 1) = 4/5
  double mean = 0.0;
  const int n = 2000;
  for (int s = 0; s < n; ++s) {
    const auto rho = make_haar_random_pure(Seed(s), SubsystemLayout::system_environment({2, 2})).to_density();
    const ComplexMatrix m = partial_trace(rho, {"S"}).matrix();
    mean += (m * m).trace().real();
  }
  mean /= n;
  EXPECT_NEAR(mean, 0.8, 0.02);
  EXPECT_THROW(make_haar_random_pure(1, SubsystemLayout::system_environment({2, 2, 2, 2, 2, 2, 2, 2})), Error);
}

TEST(Cq, OverlapKnob) {
  const auto zero = make_cq_state(3, {0.5, 0.5}, 0.0);
  EXPECT_TRUE(detect_sbs(zero, "S", FragmentSelector(zero.layout(), {"E1"})).bipartite);
  const auto one = make_cq_state(3, {0.4, 0.6}, 1.0);
  const auto fm = fragment_measures(SystemFragmentModel(one, "S", {"E1"}), {});
  EXPECT_NEAR(fm.chi.value, 0.0, 1e-9);
  EXPECT_NEAR(fm.mutual_information, 0.0, 1e-9);
  const auto half = make_cq_state(3, {0.5, 0.5}, 0.5);
  EXPECT_GT(m_sqd(half, "S", FragmentSelector(half.layout(), {"E1"})), 0.01);
  // neighbouring conditionals have the requested fidelity
  const SystemFragmentModel m(make_cq_state(4, {0.2, 0.3, 0.5}, 0.3), "S", {"E1"});
  const auto ens = m.ensemble(ComplexMatrix::Identity(3, 3));
  EXPECT_NEAR(fidelity_B(*ens[0].state, *ens[1].state), 0.3, 1e-9);
  EXPECT_NEAR(fidelity_B(*ens[1].state, *ens[2].state), 0.3, 1e-9);
}

TEST(Perturbed, StaysAState) {
  const auto r = make_perturbed(make_ghz_reduced(2), 5, 1e-2);
  EXPECT_NO_THROW(validate_density_matrix(r.matrix(), r.layout()));
  EXPECT_FALSE(detect_sbs(r, "S", FragmentSelector(r.layout(), {"E1", "E2"})).holds);
}
