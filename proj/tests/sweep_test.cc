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

#include "ffp/sweep.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.h"

namespace ffp {
namespace {

constexpr double kTol = 1e-12;

TEST(GaussLegendreTest, ExactForPolynomials) {
  for (int n : {1, 4, 9, 32}) {
    const GaussLegendreRule rule = gauss_legendre(n);
    ASSERT_EQ(rule.nodes.size(), static_cast<std::size_t>(n));
    for (int degree = 0; degree <= 2 * n - 1; ++degree) {
      double sum = 0.0;
      for (int i = 0; i < n; ++i) sum += rule.weights[i] * std::pow(rule.nodes[i], degree);
      const double exact = degree % 2 == 1 ? 0.0 : 2.0 / (degree + 1);
      ASSERT_NEAR(sum, exact, 1e-13) << "n=" << n << " degree=" << degree;
    }
  }
  EXPECT_THROW(gauss_legendre(0), std::invalid_argument);
}

TEST(BlochAverageTest, ConstantEvaluator) {
  const AverageResult a = bloch_average([](const PureState&) { return Evaluation{0.3, 0.7}; });
  EXPECT_NEAR(a.success_prob, 0.3, kTol);
  EXPECT_NEAR(*a.fidelity, 0.7, kTol);
  EXPECT_THROW(bloch_average([](const PureState&) { return Evaluation{1.0, 1.0}; }, 4), std::invalid_argument);
}

TEST(BlochAverageTest, ExactRegimeMatchesClosedForm) {
  const ChannelParams c(0.6);
  const auto eval = [&](const PureState& s) { return exact_closed_forms(s, 0.5, c); };
  const AverageResult a = bloch_average(eval, 32);
  EXPECT_NEAR(a.success_prob, 0.52, 1e-10);
  EXPECT_NEAR(*a.fidelity, 0.44 / 0.52, 1e-10);

  for (double r = 0.05; r < 1.0; r += 0.15) {
    const ChannelParams cr(r);
    const double lo = exact_lower_bound(cr);
    for (double t = 0.05; t < 1.0; t += 0.15) {
      const double p = lo + (1 - lo) * t;
      const AverageResult q = bloch_average([&](const PureState& s) { return exact_closed_forms(s, p, cr); }, 32);
      ASSERT_NEAR(*q.fidelity, oracle::exact_average_fidelity(p, r), 1e-10);
    }
  }
}

TEST(BlochAverageTest, NoiselessIsPerfect) {
  const ChannelParams c(0.0);
  const AverageResult a = bloch_average([&](const PureState& s) { return exact_closed_forms(s, 0.7, c); });
  EXPECT_NEAR(*a.fidelity, 1.0, kTol);
}

TEST(BlochAverageTest, GeneralStrengthsMatchBruteForceSphere) {
  const MeasurementStrengths s(0.8, 0.3, 0.1);
  const ChannelParams c(0.6);
  const AverageResult a = bloch_average([&](const PureState& st) { return optimal_closed_forms(st, s, c); });
  const oracle::Gf ref = oracle::bloch_average_bruteforce(0.8, 0.3, 0.1, 0.6, 400, 8);
  EXPECT_NEAR(a.success_prob, ref.g, 1e-5);
  EXPECT_NEAR(*a.fidelity, ref.f, 1e-5);
}

TEST(SweepGridTest, Axes) {
  SweepGrid g;
  g.resolution = 11;
  const auto axis = g.strength_axis();
  ASSERT_EQ(axis.size(), 11u);
  EXPECT_EQ(axis.front(), 0.0);
  EXPECT_EQ(axis.back(), 1.0);
  const auto p = g.p_axis();
  EXPECT_TRUE(std::is_sorted(p.begin(), p.end()));
  EXPECT_EQ(std::adjacent_find(p.begin(), p.end()), p.end());
  // 0.9 sits on both the uniform axis and the refinement.
  EXPECT_EQ(p.size(), 11u + 16u - 1u);
  EXPECT_NEAR(p[p.size() - 2], 1.0 - 1e-4, kTol);

  g.refine_near_one = false;
  EXPECT_EQ(g.p_axis().size(), 11u);
  g.resolution = 1;
  EXPECT_THROW(g.validate(), std::invalid_argument);
}

TEST(ScenarioAveragerTest, SingleStateMatchesProtocol) {
  const PureState psi = PureState::from_bloch(3 * M_PI / 4, 0.0);
  const ScenarioAverager avg(SingleStateScenario{psi});
  const MeasurementStrengths s(0.9, 0.2, 0.05);
  const ChannelParams c(0.6);
  const Evaluation e = avg.feed_forward(s, c);
  const ProtocolResult r = run_protocol(psi, s, c);
  EXPECT_NEAR(e.success_prob, r.success_prob, kTol);
  EXPECT_NEAR(*e.fidelity, *r.fidelity, kTol);
  EXPECT_NEAR(avg.bare_fidelity(c), bare_channel_fidelity(psi, c), kTol);
}

TEST(ScenarioAveragerTest, PairMatchesNonorthogonalWrapper) {
  const NonorthogonalPair pair(7 * M_PI / 16, 0.0);
  const MeasurementStrengths s(0.995, 0.0052, 0.005);
  const ChannelParams c(0.6);
  const Evaluation e = ScenarioAverager(pair).feed_forward(s, c);
  const NonorthogonalResult r = run_nonorthogonal(pair, s, c);
  EXPECT_NEAR(e.success_prob, r.combined.success_prob, kTol);
  EXPECT_NEAR(*e.fidelity, *r.combined.fidelity, kTol);
}

TEST(ScenarioAveragerTest, AverageExactMatchesClosedForm) {
  const ChannelParams c(0.6);
  const Evaluation e = ScenarioAverager(BlochAverageScenario{}).exact(0.5, c);
  EXPECT_NEAR(e.success_prob, 0.52, 1e-10);
  EXPECT_NEAR(*e.fidelity, 0.44 / 0.52, 1e-10);
}

struct P {
  double fidelity;
  double success_prob;
};

TEST(ParetoTest, PrunesDominatedPoints) {
  const std::vector<P> pts{{0.9, 0.5}, {0.8, 0.6}, {0.85, 0.55}, {0.7, 0.5}, {0.9, 0.4}, {0.95, 0.1}};
  const auto front = pareto_prune(pts);
  ASSERT_EQ(front.size(), 4u);
  EXPECT_EQ(front[0].fidelity, 0.8);
  EXPECT_EQ(front[1].fidelity, 0.85);
  EXPECT_EQ(front[2].fidelity, 0.9);
  EXPECT_EQ(front[2].success_prob, 0.5);
  EXPECT_EQ(front[3].fidelity, 0.95);
  EXPECT_EQ(*frontier_success_at<P>(front, 0.86), 0.5);
  EXPECT_FALSE(frontier_success_at<P>(front, 0.99).has_value());
}

TEST(FrontierTest, NoiselessContainsPerfectPoint) {
  SweepGrid g;
  g.resolution = 21;
  const auto f = optimal_frontier(SingleStateScenario{PureState::from_bloch(M_PI / 2, 0)}, ChannelParams(0), g, 1);
  ASSERT_TRUE(f.has_value());
  EXPECT_NEAR(f->back().fidelity, 1.0, kTol);
  EXPECT_NEAR(f->back().success_prob, 1.0, kTol);
}

TEST(FrontierTest, NonDominatedAndCoversGrid) {
  SweepGrid g;
  g.resolution = 31;
  const Scenario sc = SingleStateScenario{PureState::from_bloch(3 * M_PI / 4, 0)};
  const ChannelParams c(0.6);
  const auto all = evaluate_grid(sc, c, g, 2);
  const auto front = *optimal_frontier(sc, c, g, 2);
  for (std::size_t i = 0; i < front.size(); ++i) {
    for (std::size_t j = 0; j < front.size(); ++j) {
      if (i == j) continue;
      const bool dominated = front[j].fidelity >= front[i].fidelity && front[j].success_prob >= front[i].success_prob;
      ASSERT_FALSE(dominated) << i << " dominated by " << j;
    }
  }
  double lo = 1.0, hi = 0.0;
  for (const auto& pt : all) {
    lo = std::min(lo, pt.fidelity);
    hi = std::max(hi, pt.fidelity);
  }
  const double bin = (hi - lo) / kFrontierBins;
  for (const auto& pt : all) {
    bool covered = false;
    for (const auto& f : front) {
      if (f.success_prob >= pt.success_prob - kTol && f.fidelity >= pt.fidelity - bin - kTol) {
        covered = true;
        break;
      }
    }
    ASSERT_TRUE(covered) << "F=" << pt.fidelity << " G=" << pt.success_prob;
  }
}

TEST(FrontierTest, LargerExcitedWeightGainsMoreOverNoControl) {
  SweepGrid g;
  g.resolution = 41;
  const ChannelParams c(0.6);
  const auto gain = [&](double theta) {
    const Scenario sc = SingleStateScenario{PureState::from_bloch(theta, 0)};
    const auto front = *optimal_frontier(sc, c, g, 1);
    const double bare = ScenarioAverager(sc).bare_fidelity(c);
    // Best fidelity reachable while keeping half the runs.
    double best = 0.0;
    for (const auto& f : front)
      if (f.success_prob >= 0.5) best = std::max(best, f.fidelity);
    return best - bare;
  };
  EXPECT_GT(gain(3 * M_PI / 4), gain(M_PI / 4));
  EXPECT_GT(gain(3 * M_PI / 4), 0.0);
}

TEST(FrontierTest, NonorthogonalHighFidelityPointIsReached) {
  const auto front = *optimal_frontier(NonorthogonalPair(7 * M_PI / 16, 0.0), ChannelParams(0.6), SweepGrid{});
  bool found = false;
  for (const auto& f : front) found = found || (f.fidelity >= 0.98 && f.success_prob >= 0.99);
  EXPECT_TRUE(found);
}

TEST(FrontierTest, DeterministicAcrossWorkerCounts) {
  SweepGrid g;
  g.resolution = 25;
  const Scenario sc = BlochAverageScenario{16};
  const ChannelParams c(0.3);
  const auto a = evaluate_grid(sc, c, g, 1);
  const auto b = evaluate_grid(sc, c, g, 3);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    ASSERT_EQ(a[i].fidelity, b[i].fidelity);
    ASSERT_EQ(a[i].success_prob, b[i].success_prob);
  }
  const auto fa = *optimal_frontier(sc, c, g, 1);
  const auto fb = *optimal_frontier(sc, c, g, 4);
  ASSERT_EQ(fa.size(), fb.size());
  for (std::size_t i = 0; i < fa.size(); ++i) {
    ASSERT_EQ(fa[i].fidelity, fb[i].fidelity);
    ASSERT_EQ(fa[i].success_prob, fb[i].success_prob);
  }
  const auto wa = *wmr_frontier(sc, c, g, 1);
  const auto wb = *wmr_frontier(sc, c, g, 2);
  ASSERT_EQ(wa.size(), wb.size());
  for (std::size_t i = 0; i < wa.size(); ++i) {
    ASSERT_EQ(wa[i].success_prob, wb[i].success_prob);
  }
}

// Each frontier is matched by the other to within one fidelity bin over the
// shared fidelity range. The top end keeps moving with resolution because the
// fidelity supremum is only approached as the success probability vanishes.
TEST(FrontierTest, ConvergesUnderResolutionDoubling) {
  const Scenario sc = SingleStateScenario{PureState::from_bloch(3 * M_PI / 4, 0)};
  const ChannelParams c(0.6);
  SweepGrid coarse, fine;
  coarse.resolution = 201;
  fine.resolution = 401;
  const auto a = *optimal_frontier(sc, c, coarse);
  const auto b = *optimal_frontier(sc, c, fine);
  const double bin = (a.back().fidelity - a.front().fidelity) / kFrontierBins;
  const double top = std::min(a.back().fidelity, b.back().fidelity);
  const auto covered_by = [&](const std::vector<FrontierPoint>& from, const std::vector<FrontierPoint>& by) {
    for (const auto& x : from) {
      if (x.fidelity > top) continue;
      const auto g = frontier_success_at<FrontierPoint>(by, x.fidelity - bin);
      if (!g || *g < x.success_prob - 1e-3) return false;
    }
    return true;
  };
  EXPECT_TRUE(covered_by(a, b));
  EXPECT_TRUE(covered_by(b, a));
}

TEST(ExactCurveTest, AxisAndValues) {
  SweepGrid g;
  g.resolution = 41;
  const ChannelParams c(0.6);
  const auto axis = exact_p_axis(c, g);
  for (double p : axis) {
    ASSERT_GE(p, exact_lower_bound(c));
    ASSERT_LT(p, 1.0);
  }
  const std::vector<double> half{0.5};
  const auto pt = exact_curve(BlochAverageScenario{}, c, half).front();
  EXPECT_NEAR(pt.success_prob, 0.52, 1e-10);
  EXPECT_NEAR(*pt.fidelity, 0.44 / 0.52, 1e-10);

  const auto flat = exact_curve(BlochAverageScenario{}, ChannelParams(0), exact_p_axis(ChannelParams(0), g));
  for (const auto& q : flat) {
    ASSERT_NEAR(*q.fidelity, 1.0, 1e-12);
  }
}

TEST(ExactCurveTest, MonotoneInP) {
  SweepGrid g;
  for (double r : {0.1, 0.6, 0.9}) {
    const ChannelParams c(r);
    const auto curve = exact_curve(BlochAverageScenario{}, c, exact_p_axis(c, g));
    for (std::size_t i = 1; i < curve.size(); ++i) {
      ASSERT_GT(*curve[i].fidelity, *curve[i - 1].fidelity) << "r=" << r << " p=" << curve[i].p;
      ASSERT_LT(curve[i].success_prob, curve[i - 1].success_prob) << "r=" << r << " p=" << curve[i].p;
    }
  }
}

TEST(EsdScanTest, NoiselessKeepsInputConcurrence) {
  SweepGrid g;
  g.resolution = 21;
  const double alpha = 0.42, beta = std::sqrt(1 - alpha * alpha);
  const EsdScan scan = esd_scan(alpha, ChannelParams(0), ChannelParams(0), g);
  for (const EsdRow& row : scan.feed_forward) {
    ASSERT_NEAR(*row.concurrence, 2 * alpha * beta, 1e-12);
  }
}

TEST(EsdScanTest, StrongDampingAvoidsSuddenDeath) {
  const EsdScan scan = esd_scan(0.42, ChannelParams(0.9), ChannelParams(0.9), SweepGrid{});
  ASSERT_TRUE(scan.min_concurrence_feed_forward.has_value());
  EXPECT_GT(*scan.min_concurrence_feed_forward, 0.0);
  ASSERT_TRUE(scan.min_concurrence_baseline.has_value());
  EXPECT_EQ(*scan.min_concurrence_baseline, 0.0);
  for (const EsdRow& row : scan.baseline) {
    if (row.concurrence && *row.concurrence == 0.0) {
      ASSERT_LT(row.success_prob, 0.05);
    }
  }
}

}  // namespace
}  // namespace ffp
