// Copyright 2026 The ffprotect Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ffp/qcore.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.h"

namespace ffp {
namespace {

constexpr double kTol = 1e-12;

Operator2 from_oracle(const oracle::M<2>& m) {
  Operator2 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out(i, j) = m[i][j];
  return out;
}

oracle::M<2> to_oracle(const Operator2& m) {
  oracle::M<2> out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out[i][j] = m(i, j);
  return out;
}

Operator2 random_operator(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Operator2 m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m(i, j) = Complex(n(rng), n(rng));
  return m;
}

TEST(PureStateTest, NormalizesAmplitudes) {
  const PureState s(3.0, Complex(0.0, 4.0));
  EXPECT_NEAR(s.population0(), 0.36, kTol);
  EXPECT_NEAR(s.population1(), 0.64, kTol);
  EXPECT_NEAR(s.ket().norm(), 1.0, kTol);
}

TEST(PureStateTest, ZeroVectorThrows) { EXPECT_THROW(PureState(0.0, 0.0), std::domain_error); }

TEST(PureStateTest, BlochAngles) {
  const PureState s = PureState::from_bloch(M_PI / 2, M_PI / 2);
  EXPECT_NEAR(std::abs(s.a0() - Complex(M_SQRT1_2)), 0.0, kTol);
  EXPECT_NEAR(std::abs(s.a1() - Complex(0.0, M_SQRT1_2)), 0.0, kTol);
}

TEST(ChannelParamsTest, RejectsOutsideUnitInterval) {
  EXPECT_THROW(ChannelParams(-0.1), std::domain_error);
  EXPECT_THROW(ChannelParams(1.1), std::domain_error);
  EXPECT_THROW(ChannelParams(std::nan("")), std::domain_error);
  EXPECT_NO_THROW(ChannelParams(0.0));
  EXPECT_NO_THROW(ChannelParams(1.0));
}

TEST(ChannelParamsTest, FromDecay) {
  const ChannelParams c = ChannelParams::from_decay(std::log(2.5));
  EXPECT_NEAR(c.r(), 0.6, kTol);
  EXPECT_NEAR(c.survival(), 0.4, kTol);
  EXPECT_THROW(ChannelParams::from_decay(-1.0), std::domain_error);
}

TEST(MeasurementStrengthsTest, Validates) {
  EXPECT_THROW(MeasurementStrengths(1.5, 0, 0), std::domain_error);
  EXPECT_THROW(MeasurementStrengths(0.5, -0.1, 0), std::domain_error);
  EXPECT_THROW(MeasurementStrengths(0.5, 0, 2), std::domain_error);
}

TEST(KrausTest, Endpoints) {
  const auto k0 = amplitude_damping_kraus(ChannelParams(0.0));
  EXPECT_TRUE(k0[0].isApprox(Operator2::Identity()));
  EXPECT_EQ(k0[1].cwiseAbs().maxCoeff(), 0.0);

  const auto k1 = amplitude_damping_kraus(ChannelParams(1.0));
  EXPECT_NEAR(std::abs(k1[0](1, 1)), 0.0, kTol);
  EXPECT_NEAR(std::abs(k1[1](0, 1) - 1.0), 0.0, kTol);

  const auto k = amplitude_damping_kraus(ChannelParams(0.6));
  EXPECT_NEAR(std::abs(k[0](1, 1) - std::sqrt(0.4)), 0.0, kTol);
}

TEST(KrausTest, ApplyChannelExamples) {
  const auto k = amplitude_damping_kraus(ChannelParams(0.6));
  const Density2 excited = PureState::excited().projector();
  const Density2 out = apply_channel<2>(excited, k);
  EXPECT_NEAR(out(0, 0).real(), 0.6, kTol);
  EXPECT_NEAR(out(1, 1).real(), 0.4, kTol);

  const Density2 ground = PureState::ground().projector();
  EXPECT_TRUE(apply_channel<2>(ground, k).isApprox(ground, kTol));

  const Density2 plus = PureState(1.0, 1.0).projector();
  EXPECT_TRUE(apply_channel<2>(plus, amplitude_damping_kraus(ChannelParams(0.0))).isApprox(plus, kTol));
}

TEST(KrausTest, ChannelMatchesOracleAndStaysPhysical) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double r = u(rng);
    const PureState s(Complex(u(rng) - 0.5, u(rng) - 0.5), Complex(u(rng) - 0.5, u(rng) - 0.5));
    const auto k = amplitude_damping_kraus(ChannelParams(r));
    const Density2 out = apply_channel<2>(s.projector(), k);
    ASSERT_TRUE(is_density_matrix(out));
    const auto rho = to_oracle(s.projector());
    const auto expect = oracle::add(oracle::sandwich(oracle::damping_stay(r), rho),
                                    oracle::sandwich(oracle::damping_jump(r), rho));
    ASSERT_LT((out - from_oracle(expect)).cwiseAbs().maxCoeff(), kTol);
  }
}

TEST(MeasurementTest, Examples) {
  const auto m = pre_measurement(0.3);
  const MeasuredState g = measure_branch(PureState::ground(), m[0]);
  EXPECT_NEAR(g.probability, 0.3, kTol);
  ASSERT_TRUE(g.possible());
  EXPECT_NEAR(std::abs(g.state->a0()), 1.0, kTol);

  const PureState any(0.3, Complex(0.1, 0.7));
  const MeasuredState id = measure_branch(any, Operator2::Identity());
  EXPECT_NEAR(id.probability, 1.0, kTol);
  EXPECT_TRUE(id.state->ket().isApprox(any.ket(), kTol));

  for (double p : {0.0, 0.2, 0.5, 0.9, 1.0}) {
    EXPECT_NEAR(measure_branch(PureState(1.0, 1.0), pre_measurement(p)[0]).probability, 0.5, kTol);
  }
}

TEST(MeasurementTest, ImpossibleOutcomeHasNoState) {
  const MeasuredState m = measure_branch(PureState::ground(), pre_measurement(0.0)[0]);
  EXPECT_EQ(m.probability, 0.0);
  EXPECT_FALSE(m.possible());
}

TEST(AlgebraTest, RandomizedIdentities) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Operator2 x = feed_forward(FeedForward::kFlip);
  for (int i = 0; i < 1000; ++i) {
    const double p = u(rng), r = u(rng), pu = u(rng), pv = u(rng);
    const auto kraus = amplitude_damping_kraus(ChannelParams(r));
    ASSERT_LT((completeness_sum<2>(kraus) - Operator2::Identity()).cwiseAbs().maxCoeff(), kTol);
    const auto pre = pre_measurement(p);
    ASSERT_LT((completeness_sum<2>(pre) - Operator2::Identity()).cwiseAbs().maxCoeff(), kTol);
    ASSERT_LT((x * x - Operator2::Identity()).cwiseAbs().maxCoeff(), kTol);

    // Post-selection operators are contractions.
    for (const Operator2& k : {post_measurement_n(pu), post_measurement_w(pv)}) {
      Eigen::SelfAdjointEigenSolver<Operator2> es(Operator2::Identity() - k.adjoint() * k);
      ASSERT_GE(es.eigenvalues().minCoeff(), -kTol);
    }

    // Tensor lift is a homomorphism and matches an independent Kronecker product.
    const Operator2 a = random_operator(rng), b = random_operator(rng);
    const Operator2 c = random_operator(rng), d = random_operator(rng);
    const Operator4 lhs = lift_to_two_qubits(a, b) * lift_to_two_qubits(c, d);
    const Operator4 rhs = lift_to_two_qubits(a * c, b * d);
    ASSERT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-11);
    const auto ref = oracle::kron(to_oracle(a), to_oracle(b));
    const Operator4 lifted = lift_to_two_qubits(a, b);
    for (int row = 0; row < 4; ++row)
      for (int col = 0; col < 4; ++col) {
        ASSERT_LT(std::abs(lifted(row, col) - ref[row][col]), kTol);
      }
  }
}

TEST(AlgebraTest, TwoQubitPreMeasurementIsComplete) {
  const auto ma = pre_measurement(0.3), mb = pre_measurement(0.85);
  std::array<Operator4, 4> ops;
  int k = 0;
  for (const auto& a : ma)
    for (const auto& b : mb) ops[k++] = lift_to_two_qubits(a, b);
  EXPECT_LT((completeness_sum<4>(ops) - Operator4::Identity()).cwiseAbs().maxCoeff(), kTol);
}

TEST(FeedForwardTest, FlipSwapsAmplitudes) {
  const PureState s(0.6, Complex(0.0, 0.8));
  EXPECT_TRUE(apply_unitary(s, feed_forward(FeedForward::kIdentity)).ket().isApprox(s.ket(), kTol));
  const PureState f = apply_unitary(s, feed_forward(FeedForward::kFlip));
  EXPECT_NEAR(std::abs(f.a0() - s.a1()), 0.0, kTol);
  EXPECT_NEAR(std::abs(f.a1() - s.a0()), 0.0, kTol);
  const PureState ff = apply_unitary(f, feed_forward(FeedForward::kFlip));
  EXPECT_TRUE(ff.ket().isApprox(s.ket(), kTol));
}

TEST(FeedForwardTest, NonUnitaryRejected) {
  EXPECT_THROW(apply_unitary(PureState::ground(), pre_measurement(0.3)[0]), std::invalid_argument);
}

TEST(FeedForwardTest, LiftedFlipOnGround) {
  const Operator2 x = feed_forward(FeedForward::kFlip);
  Vec<4> ground = Vec<4>::Zero();
  ground(0) = 1.0;
  const Vec<4> out = lift_to_two_qubits(x, x) * ground;
  EXPECT_NEAR(std::abs(out(3) - 1.0), 0.0, kTol);
  EXPECT_TRUE(lift_to_two_qubits(Operator2::Identity(), Operator2::Identity()).isIdentity(kTol));
}

TEST(FidelityTest, Examples) {
  const PureState s(0.2, Complex(0.5, 0.1));
  EXPECT_NEAR(fidelity_pure_mixed(s, s.projector()), 1.0, kTol);
  Density2 d = Density2::Zero();
  d(0, 0) = 0.6;
  d(1, 1) = 0.4;
  EXPECT_NEAR(fidelity_pure_mixed(PureState::ground(), d), 0.6, kTol);
  EXPECT_NEAR(fidelity_pure_mixed(PureState(1.0, 1.0), Density2::Identity() / 2.0), 0.5, kTol);
}

TEST(ConcurrenceTest, Examples) {
  Vec<4> bell = Vec<4>::Zero();
  bell(0) = bell(3) = M_SQRT1_2;
  const Density4 bell_rho = bell * bell.adjoint();
  EXPECT_NEAR(concurrence_x_state(bell_rho, 1.0), 1.0, kTol);

  Density4 product = Density4::Zero();
  product(0, 0) = 1.0;
  EXPECT_EQ(concurrence_x_state(product, 1.0), 0.0);

  Density4 x = Density4::Zero();
  x(0, 0) = 0.45;
  x(3, 3) = 0.45;
  x(1, 1) = x(2, 2) = 0.05;
  x(0, 3) = x(3, 0) = 0.2;
  EXPECT_NEAR(concurrence_x_state(x, 1.0), 0.3, kTol);
  // Unnormalized input is divided by the supplied norm.
  EXPECT_NEAR(concurrence_x_state(x * 0.5, 0.5), 0.3, kTol);
  EXPECT_NEAR(concurrence_witness(x, 1.0), 0.3, kTol);
}

TEST(ConcurrenceTest, RejectsNonXAndNonPositiveNorm) {
  Density4 rho = Density4::Identity() / 4.0;
  rho(1, 2) = rho(2, 1) = 0.1;
  EXPECT_FALSE(is_x_form(rho));
  EXPECT_THROW(concurrence_x_state(rho, 1.0), StructureError);
  EXPECT_THROW(concurrence_x_state(Density4::Identity() / 4.0, 0.0), std::domain_error);
}

TEST(DensityMatrixTest, Checks) {
  EXPECT_TRUE(is_density_matrix<2>(Density2::Identity() / 2.0));
  EXPECT_FALSE(is_density_matrix<2>(Density2::Identity()));
  EXPECT_TRUE(is_density_matrix<2>(Density2::Identity(), false));
  Density2 neg = Density2::Zero();
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  EXPECT_FALSE(is_density_matrix<2>(neg));
}

}  // namespace
}  // namespace ffp
