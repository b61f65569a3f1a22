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

// Parameter-space exploration over measurement strengths, reduced to
// (fidelity, success probability) frontiers. All grid evaluations are split into fixed blocks and
// merged in block order, so results do not depend on the worker count.

#ifndef FFP_SWEEP_H
#define FFP_SWEEP_H

#include <algorithm>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "ffp/baseline.h"
#include "ffp/protocol.h"
#include "ffp/qcore.h"

namespace ffp {

struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1].
GaussLegendreRule gauss_legendre(int n);

struct AverageResult {
  double success_prob = 0.0;
  std::optional<double> fidelity;
};

using StateEvaluator = std::function<Evaluation(const PureState&)>;

/// Uniform average over the Bloch sphere. The integrands used here depend on phi
/// only through |alpha|^2, so phi is fixed at 0 and theta is integrated by
/// Gauss-Legendre in cos(theta). Fidelity is the average of the per-state ratio.
/// Requires nodes >= 8.
AverageResult bloch_average(const StateEvaluator& evaluator, int nodes = 32);

struct SweepGrid {
  /// Points per strength axis, uniform on [0, 1] inclusive.
  int resolution = 101;
  /// Adds log-spaced points with 1 - p in [1e-4, 1e-1] to the pre-measurement axis.
  bool refine_near_one = true;
  int refine_points = 16;

  void validate() const;
  std::vector<double> strength_axis() const;
  std::vector<double> p_axis() const;
};

struct SingleStateScenario {
  PureState state;
};
struct BlochAverageScenario {
  int nodes = 32;
};
using Scenario = std::variant<SingleStateScenario, BlochAverageScenario, NonorthogonalPair>;

/// A scenario reduced to a weighted set of input states.
class ScenarioAverager {
 public:
  explicit ScenarioAverager(const Scenario& scenario);

  Evaluation feed_forward(const MeasurementStrengths& s, const ChannelParams& c) const;
  Evaluation exact(double p, const ChannelParams& c) const;
  Evaluation wmr(const WmrStrengths& s, const ChannelParams& c) const;
  double bare_fidelity(const ChannelParams& c) const;

 private:
  template <class Fn>
  Evaluation average(Fn&& per_state) const;

  std::vector<PureState> states_;
  std::vector<double> weights_;
};

struct FrontierPoint {
  double fidelity;
  double success_prob;
  MeasurementStrengths strengths;
};

struct WmrFrontierPoint {
  double fidelity;
  double success_prob;
  WmrStrengths strengths;
};

inline constexpr int kFrontierBins = 200;

/// Removes every point weakly dominated by another (higher fidelity and no lower
/// success probability). Output is sorted by ascending fidelity.
template <class Point>
std::vector<Point> pareto_prune(std::vector<Point> points) {
  std::stable_sort(points.begin(), points.end(), [](const Point& a, const Point& b) {
    if (a.fidelity != b.fidelity) return a.fidelity > b.fidelity;
    return a.success_prob > b.success_prob;
  });
  std::vector<Point> kept;
  double best = -std::numeric_limits<double>::infinity();
  for (const Point& p : points) {
    if (p.success_prob > best) {
      kept.push_back(p);
      best = p.success_prob;
    }
  }
  std::reverse(kept.begin(), kept.end());
  return kept;
}

/// Bins fidelity over [lo, hi] into `bins` equal-width bins, keeps the highest
/// success probability per bin, then prunes to the non-dominated subset.
template <class Point>
std::vector<Point> extract_frontier(std::span<const Point> points, double lo, double hi, int bins = kFrontierBins) {
  std::vector<std::optional<Point>> winners(static_cast<std::size_t>(bins));
  const double width = (hi - lo) / bins;
  for (const Point& p : points) {
    std::size_t idx = 0;
    if (width > 0.0) {
      idx = static_cast<std::size_t>(std::clamp((p.fidelity - lo) / width, 0.0, bins - 1.0));
    }
    auto& slot = winners[idx];
    if (!slot || p.success_prob > slot->success_prob ||
        (p.success_prob == slot->success_prob && p.fidelity > slot->fidelity)) {
      slot = p;
    }
  }
  std::vector<Point> best;
  for (auto& w : winners)
    if (w) best.push_back(*w);
  return pareto_prune(std::move(best));
}

/// Bins span the non-dominated fidelity range, from the highest-success point
/// to the highest-fidelity point.
template <class Point>
std::vector<Point> extract_frontier(std::span<const Point> points, int bins = kFrontierBins) {
  if (points.empty()) return {};
  const std::vector<Point> front = pareto_prune(std::vector<Point>(points.begin(), points.end()));
  return extract_frontier<Point>(front, front.front().fidelity, front.back().fidelity, bins);
}

/// Highest success probability among frontier points reaching at least `fidelity`.
template <class Point>
std::optional<double> frontier_success_at(std::span<const Point> frontier, double fidelity) {
  std::optional<double> best;
  for (const Point& p : frontier) {
    if (p.fidelity >= fidelity - kAlgebraTol && (!best || p.success_prob > *best)) best = p.success_prob;
  }
  return best;
}

/// Every selected grid point, in grid-index order (p outermost, then p_u, then p_v).
std::vector<FrontierPoint> evaluate_grid(const Scenario& scenario, const ChannelParams& c, const SweepGrid& grid,
                                         int workers = 0);
std::vector<WmrFrontierPoint> evaluate_wmr_grid(const Scenario& scenario, const ChannelParams& c,
                                                const SweepGrid& grid, int workers = 0);

/// Empty optional when no grid point survives post-selection.
std::optional<std::vector<FrontierPoint>> optimal_frontier(const Scenario& scenario, const ChannelParams& c,
                                                           const SweepGrid& grid, int workers = 0);
/// Both WMR axes carry the near-one refinement, since exact reversal sits near q_r = 1.
std::optional<std::vector<WmrFrontierPoint>> wmr_frontier(const Scenario& scenario, const ChannelParams& c,
                                                          const SweepGrid& grid, int workers = 0);

struct ExactCurvePoint {
  double p;
  double success_prob;
  std::optional<double> fidelity;
  /// Fidelity with no measurement and no feed-forward.
  double bare_fidelity;
};

/// Uniform points on [(1-r)/(2-r), 1) plus the near-one refinement; p = 0 and p = 1 excluded.
std::vector<double> exact_p_axis(const ChannelParams& c, const SweepGrid& grid);

std::vector<ExactCurvePoint> exact_curve(const Scenario& scenario, const ChannelParams& c,
                                         std::span<const double> p_values);

struct EsdRow {
  /// p (feed-forward) or q (baseline), equal on both qubits.
  double strength;
  /// p_u = p_v (feed-forward) or q_r (baseline) on qubit a.
  double post_strength;
  double success_prob;
  std::optional<double> concurrence;
};

struct EsdScan {
  std::vector<EsdRow> feed_forward;
  std::vector<EsdRow> baseline;
  std::optional<double> min_concurrence_feed_forward;
  std::optional<double> min_concurrence_baseline;
};

/// Exact strengths per qubit on the admissible p grid; baseline with exact reversal on q in [0, 1).
EsdScan esd_scan(Complex alpha, const ChannelParams& channel_a, const ChannelParams& channel_b,
                 const SweepGrid& grid);

}  // namespace ffp

#endif  // FFP_SWEEP_H
