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

// Monte Carlo jump/no-jump trajectories of the feed-forward protocol.
//
// Each trajectory draws the pre-measurement outcome, applies the feed-forward,
// draws a jump with the state-dependent probability r|beta_f|^2, reverses the
// feed-forward and draws acceptance with the post-selection Born weight. The
// simulator only uses qcore primitives; it shares no code path with the
// branch bookkeeping in protocol.cc.

#ifndef FFP_MC_ORACLE_H
#define FFP_MC_ORACLE_H

#include <array>
#include <cstdint>
#include <limits>
#include <optional>

#include "ffp/protocol.h"
#include "ffp/qcore.h"

namespace ffp {

/// SplitMix64, seeded per trajectory from (seed, index). Satisfies UniformRandomBitGenerator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t state) : state_(state) {}
  static SplitMix64 for_stream(std::uint64_t seed, std::uint64_t index);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();

 private:
  std::uint64_t state_;
};

/// Trajectories are processed in fixed blocks of this size, reduced in block order.
inline constexpr std::uint64_t kTrajectoryBlock = 4096;

struct SingleTrajectoryConfig {
  PureState input;
  MeasurementStrengths strengths;
  ChannelParams channel;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 42;
  int workers = 0;
};

/// Index of a trajectory class: pre-measurement outcome x jump x acceptance.
constexpr std::size_t trajectory_class(PreResult pre, Trajectory t, bool accepted) {
  return (pre == PreResult::kSecond ? 4u : 0u) + (t == Trajectory::kJump ? 2u : 0u) + (accepted ? 1u : 0u);
}

struct McEstimate {
  std::uint64_t samples = 0;
  std::uint64_t accepted = 0;
  double success_prob_hat = 0.0;
  double success_std_error = 0.0;
  /// Mean |<psi_0|psi_k>|^2 over accepted trajectories; empty if none were accepted.
  std::optional<double> fidelity_hat;
  double fidelity_std_error = 0.0;
  /// Counts per trajectory_class(); sums to `samples`.
  std::array<std::uint64_t, 8> branch_counts{};

  std::uint64_t count(PreResult pre, Trajectory t, bool accepted) const {
    return branch_counts[trajectory_class(pre, t, accepted)];
  }
};

McEstimate simulate_single(const SingleTrajectoryConfig& cfg);

struct TwoQubitTrajectoryConfig {
  TwoQubitConfig config;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 42;
  int workers = 0;
  int bootstrap_resamples = 100;
};

struct TwoQubitMcEstimate {
  std::uint64_t samples = 0;
  std::uint64_t accepted = 0;
  double success_prob_hat = 0.0;
  double success_std_error = 0.0;
  /// Unnormalized per-case density estimates, cases ordered as in run_two_qubit.
  std::array<Density4, 4> case_densities;
  std::array<double, 4> case_success_hat{};
  std::optional<double> concurrence_hat;
  /// Bootstrap standard deviation of concurrence_hat.
  double concurrence_std_error = 0.0;
};

TwoQubitMcEstimate simulate_two_qubit(const TwoQubitTrajectoryConfig& cfg);

}  // namespace ffp

#endif  // FFP_MC_ORACLE_H
