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

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ffp/parallel.h"

namespace ffp {

GaussLegendreRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
  GaussLegendreRule rule{std::vector<double>(n), std::vector<double>(n)};
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double derivative = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      derivative = n * (z * p1 - p2) / (z * z - 1.0);
      const double step = p1 / derivative;
      z -= step;
      if (std::abs(step) < 1e-16) break;
    }
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    const double w = 2.0 / ((1.0 - z * z) * derivative * derivative);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

AverageResult bloch_average(const StateEvaluator& evaluator, int nodes) {
  if (nodes < 8) throw std::invalid_argument("bloch_average: need at least 8 quadrature nodes");
  const GaussLegendreRule rule = gauss_legendre(nodes);
  AverageResult out;
  double fidelity = 0.0;
  bool all_selected = true;
  for (int i = 0; i < nodes; ++i) {
    // d(cos theta) / 2 is the normalized polar measure once phi is integrated out.
    const double w = rule.weights[i] / 2.0;
    const Evaluation e = evaluator(PureState::from_bloch(std::acos(rule.nodes[i]), 0.0));
    out.success_prob += w * e.success_prob;
    if (e.fidelity) {
      fidelity += w * *e.fidelity;
    } else {
      all_selected = false;
    }
  }
  if (all_selected) out.fidelity = fidelity;
  return out;
}

void SweepGrid::validate() const {
  if (resolution < 2) throw std::invalid_argument("sweep grid resolution must be >= 2");
  if (refine_points < 0) throw std::invalid_argument("sweep grid refinement count must be >= 0");
}

std::vector<double> SweepGrid::strength_axis() const {
  validate();
  std::vector<double> axis(static_cast<std::size_t>(resolution));
  for (int i = 0; i < resolution; ++i) axis[i] = static_cast<double>(i) / (resolution - 1);
  return axis;
}

namespace {

// 1 - p log-spaced over [1e-4, 1e-1].
std::vector<double> near_one_points(int count) {
  std::vector<double> out;
  for (int k = 0; k < count; ++k) {
    const double exponent = count == 1 ? -1.0 : -4.0 + 3.0 * k / (count - 1);
    out.push_back(1.0 - std::pow(10.0, exponent));
  }
  return out;
}

std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end(), [](double a, double b) { return std::abs(a - b) < 1e-15; }), v.end());
  return v;
}

}  // namespace

std::vector<double> SweepGrid::p_axis() const {
  std::vector<double> axis = strength_axis();
  if (refine_near_one) {
    const auto extra = near_one_points(refine_points);
    axis.insert(axis.end(), extra.begin(), extra.end());
  }
  return sorted_unique(std::move(axis));
}

ScenarioAverager::ScenarioAverager(const Scenario& scenario) {
  std::visit(
      [this](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SingleStateScenario>) {
          states_ = {s.state};
          weights_ = {1.0};
        } else if constexpr (std::is_same_v<T, BlochAverageScenario>) {
          if (s.nodes < 8) throw std::invalid_argument("Bloch average needs at least 8 quadrature nodes");
          const GaussLegendreRule rule = gauss_legendre(s.nodes);
          for (int i = 0; i < s.nodes; ++i) {
            states_.push_back(PureState::from_bloch(std::acos(rule.nodes[i]), 0.0));
            weights_.push_back(rule.weights[i] / 2.0);
          }
        } else {
          states_ = {s.plus(), s.minus()};
          weights_ = {0.5, 0.5};
        }
      },
      scenario);
}

template <class Fn>
Evaluation ScenarioAverager::average(Fn&& per_state) const {
  Evaluation out;
  double fidelity = 0.0;
  bool all_selected = true;
  for (std::size_t i = 0; i < states_.size(); ++i) {
    const Evaluation e = per_state(states_[i]);
    out.success_prob += weights_[i] * e.success_prob;
    if (e.fidelity) {
      fidelity += weights_[i] * *e.fidelity;
    } else {
      all_selected = false;
    }
  }
  if (all_selected) out.fidelity = fidelity;
  return out;
}

Evaluation ScenarioAverager::feed_forward(const MeasurementStrengths& s, const ChannelParams& c) const {
  return average([&](const PureState& psi) { return optimal_closed_forms(psi.population0(), s, c); });
}

Evaluation ScenarioAverager::exact(double p, const ChannelParams& c) const {
  return average([&](const PureState& psi) { return exact_closed_forms(psi, p, c); });
}

Evaluation ScenarioAverager::wmr(const WmrStrengths& s, const ChannelParams& c) const {
  return average([&](const PureState& psi) { return run_wmr_single(psi, s, c).evaluation(); });
}

double ScenarioAverager::bare_fidelity(const ChannelParams& c) const {
  double out = 0.0;
  for (std::size_t i = 0; i < states_.size(); ++i) out += weights_[i] * bare_channel_fidelity(states_[i], c);
  return out;
}

namespace {

// Outer axis is split into blocks; `eval(outer, inner1, inner2)` returns a point or nothing.
template <class Point, class Eval>
std::vector<std::vector<Point>> evaluate_blocks(const std::vector<double>& outer, const std::vector<double>& inner1,
                                                const std::vector<double>& inner2, int workers, Eval&& eval) {
  std::vector<std::vector<Point>> blocks(outer.size());
  parallel_for_blocks(outer.size(), workers, [&](std::size_t b) {
    auto& out = blocks[b];
    for (double x : inner1) {
      for (double y : inner2) {
        if (auto point = eval(outer[b], x, y)) out.push_back(*point);
      }
    }
  });
  return blocks;
}

template <class Point>
std::vector<Point> flatten(std::vector<std::vector<Point>> blocks) {
  std::vector<Point> out;
  for (auto& b : blocks) out.insert(out.end(), b.begin(), b.end());
  return out;
}

// Frontier over the union of per-block non-dominated sets. Every point left of
// the highest-success point is dominated by it, so the fidelity bins only span
// the non-dominated range.
template <class Point>
std::optional<std::vector<Point>> merge_frontier(std::vector<std::vector<Point>> blocks) {
  std::vector<Point> candidates;
  for (auto& b : blocks) {
    auto pruned = pareto_prune(std::move(b));
    candidates.insert(candidates.end(), pruned.begin(), pruned.end());
  }
  if (candidates.empty()) return std::nullopt;
  return extract_frontier<Point>(std::span<const Point>(candidates));
}

std::vector<std::vector<FrontierPoint>> feed_forward_blocks(const Scenario& scenario, const ChannelParams& c,
                                                            const SweepGrid& grid, int workers) {
  const ScenarioAverager averager(scenario);
  const auto p_axis = grid.p_axis();
  const auto post_axis = grid.strength_axis();
  return evaluate_blocks<FrontierPoint>(
      p_axis, post_axis, post_axis, workers, [&](double p, double pu, double pv) -> std::optional<FrontierPoint> {
        const MeasurementStrengths s(p, pu, pv);
        const Evaluation e = averager.feed_forward(s, c);
        if (!e.fidelity) return std::nullopt;
        return FrontierPoint{*e.fidelity, e.success_prob, s};
      });
}

std::vector<std::vector<WmrFrontierPoint>> wmr_blocks(const Scenario& scenario, const ChannelParams& c,
                                                      const SweepGrid& grid, int workers) {
  const ScenarioAverager averager(scenario);
  const auto axis = grid.p_axis();
  const std::vector<double> single{0.0};
  return evaluate_blocks<WmrFrontierPoint>(
      axis, axis, single, workers, [&](double q, double qr, double) -> std::optional<WmrFrontierPoint> {
        const WmrStrengths s(q, qr);
        const Evaluation e = averager.wmr(s, c);
        if (!e.fidelity) return std::nullopt;
        return WmrFrontierPoint{*e.fidelity, e.success_prob, s};
      });
}

}  // namespace

std::vector<FrontierPoint> evaluate_grid(const Scenario& scenario, const ChannelParams& c, const SweepGrid& grid,
                                         int workers) {
  return flatten(feed_forward_blocks(scenario, c, grid, workers));
}

std::vector<WmrFrontierPoint> evaluate_wmr_grid(const Scenario& scenario, const ChannelParams& c,
                                                const SweepGrid& grid, int workers) {
  return flatten(wmr_blocks(scenario, c, grid, workers));
}

std::optional<std::vector<FrontierPoint>> optimal_frontier(const Scenario& scenario, const ChannelParams& c,
                                                           const SweepGrid& grid, int workers) {
  return merge_frontier(feed_forward_blocks(scenario, c, grid, workers));
}

std::optional<std::vector<WmrFrontierPoint>> wmr_frontier(const Scenario& scenario, const ChannelParams& c,
                                                          const SweepGrid& grid, int workers) {
  return merge_frontier(wmr_blocks(scenario, c, grid, workers));
}

std::vector<double> exact_p_axis(const ChannelParams& c, const SweepGrid& grid) {
  grid.validate();
  const double bound = exact_lower_bound(c);
  std::vector<double> axis;
  for (int i = 0; i < grid.resolution; ++i) {
    const double p = bound + (1.0 - bound) * i / grid.resolution;
    if (p > 0.0) axis.push_back(p);
  }
  if (grid.refine_near_one) {
    for (double p : near_one_points(grid.refine_points))
      if (p >= bound && p > 0.0) axis.push_back(p);
  }
  return sorted_unique(std::move(axis));
}

std::vector<ExactCurvePoint> exact_curve(const Scenario& scenario, const ChannelParams& c,
                                         std::span<const double> p_values) {
  const ScenarioAverager averager(scenario);
  const double bare = averager.bare_fidelity(c);
  std::vector<ExactCurvePoint> out;
  out.reserve(p_values.size());
  for (double p : p_values) {
    const Evaluation e = averager.exact(p, c);
    out.push_back({p, e.success_prob, e.fidelity, bare});
  }
  return out;
}

namespace {

std::optional<double> min_concurrence(const std::vector<EsdRow>& rows) {
  std::optional<double> out;
  for (const EsdRow& row : rows)
    if (row.concurrence && (!out || *row.concurrence < *out)) out = row.concurrence;
  return out;
}

}  // namespace

EsdScan esd_scan(Complex alpha, const ChannelParams& channel_a, const ChannelParams& channel_b,
                 const SweepGrid& grid) {
  EsdScan scan;
  // The admissible range starts at the larger lower bound, i.e. the weaker channel.
  const ChannelParams weaker(std::min(channel_a.r(), channel_b.r()));
  for (double p : exact_p_axis(weaker, grid)) {
    const auto cfg = TwoQubitConfig::with_exact_strengths(alpha, p, p, channel_a, channel_b);
    const TwoQubitResult res = run_two_qubit(cfg);
    scan.feed_forward.push_back({p, cfg.strengths_a().p_u(), res.success_prob, res.concurrence});
  }
  for (double q : grid.p_axis()) {
    if (q >= 1.0) continue;
    const auto cfg = WmrTwoQubitConfig::with_exact_reversal(alpha, q, channel_a, channel_b);
    const TwoQubitResult res = run_wmr_two_qubit(cfg);
    scan.baseline.push_back({q, cfg.strengths_a().q_r(), res.success_prob, res.concurrence});
  }
  scan.min_concurrence_feed_forward = min_concurrence(scan.feed_forward);
  scan.min_concurrence_baseline = min_concurrence(scan.baseline);
  return scan;
}

}  // namespace ffp
