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

// Feed-forward protection protocol.
//
// A qubit is measured by the complete weak measurement {M_1, M_2}. Outcome 1
// is followed by the do-nothing feed-forward and the post-selection N_1;
// outcome 2 is flipped by sigma_x before the amplitude-damping channel,
// flipped back afterwards and post-selected by W_1. The channel is unravelled
// into a no-jump branch (E_1) and a jump branch (E_2, collapse to |0>), so
// every run is a weighted mixture of four pure branches.

#ifndef FFP_PROTOCOL_H
#define FFP_PROTOCOL_H

#include <optional>
#include <vector>

#include "ffp/qcore.h"

namespace ffp {

enum class PreResult { kFirst, kSecond };
enum class Trajectory { kNoJump, kJump };

struct BranchOutcome {
  PreResult pre;
  Trajectory trajectory;
  /// Joint probability of the pre-measurement outcome, the trajectory and acceptance.
  double weight = 0.0;
  /// Accepted state; empty when weight is zero.
  std::optional<PureState> state;
};

struct BranchPair {
  BranchOutcome no_jump;
  BranchOutcome jump;
};

/// Success probability and post-selected fidelity. `fidelity` is empty when
/// nothing survives post-selection.
struct Evaluation {
  double success_prob = 0.0;
  std::optional<double> fidelity;
  bool selected() const { return fidelity.has_value(); }
};

struct ProtocolResult {
  double success_prob = 0.0;
  std::optional<double> fidelity;
  std::optional<Density2> final_state;
  std::vector<BranchOutcome> branches;

  bool selected() const { return fidelity.has_value(); }
  Evaluation evaluation() const { return {success_prob, fidelity}; }
};

BranchPair run_branch1(const PureState& input, const MeasurementStrengths& s, const ChannelParams& c);
BranchPair run_branch2(const PureState& input, const MeasurementStrengths& s, const ChannelParams& c);

/// Composes all four branches numerically and forms the post-selected mixture.
ProtocolResult run_protocol(const PureState& input, const MeasurementStrengths& s, const ChannelParams& c);

/// Smallest pre-measurement strength admitting exact protection: (1 - r) / (2 - r).
double exact_lower_bound(const ChannelParams& c);

/// p_u = p_v = 1 - (1 - p)(1 - r) / p. Throws std::domain_error below exact_lower_bound.
MeasurementStrengths exact_strengths(double p, const ChannelParams& c);

/// Closed-form success probability and fidelity under exact strengths.
Evaluation exact_closed_forms(const PureState& input, double p, const ChannelParams& c);

/// Bloch-sphere average of the exact-protection fidelity.
std::optional<double> exact_average_fidelity(double p, const ChannelParams& c);

/// Closed-form (G, F) for arbitrary strengths. Depends on the state only through |alpha|^2.
Evaluation optimal_closed_forms(const PureState& input, const MeasurementStrengths& s, const ChannelParams& c);
Evaluation optimal_closed_forms(double population0, const MeasurementStrengths& s, const ChannelParams& c);

/// Fidelity with no measurement or feed-forward, only the channel.
double bare_channel_fidelity(const PureState& input, const ChannelParams& c);

/// |psi_+-> = cos(theta/2)|+> +- e^{i phi} sin(theta/2)|->, overlap cos(theta).
class NonorthogonalPair {
 public:
  NonorthogonalPair(double theta, double phi);

  double theta() const { return theta_; }
  double phi() const { return phi_; }
  PureState plus() const;
  PureState minus() const;

 private:
  double theta_;
  double phi_;
};

struct NonorthogonalResult {
  /// Equal-prior average of the two states' (G, F).
  Evaluation combined;
  ProtocolResult plus;
  ProtocolResult minus;
};

NonorthogonalResult run_nonorthogonal(const NonorthogonalPair& pair, const MeasurementStrengths& s,
                                      const ChannelParams& c);
Evaluation nonorthogonal_closed_forms(const NonorthogonalPair& pair, const MeasurementStrengths& s,
                                      const ChannelParams& c);

/// alpha|00> + beta|11> with beta = sqrt(1 - |alpha|^2), independent channels per qubit.
class TwoQubitConfig {
 public:
  TwoQubitConfig(Complex alpha, ChannelParams channel_a, ChannelParams channel_b,
                 MeasurementStrengths strengths_a, MeasurementStrengths strengths_b);

  /// Both qubits get p_u = p_v from exact_strengths for their own channel.
  static TwoQubitConfig with_exact_strengths(Complex alpha, double p_a, double p_b,
                                             ChannelParams channel_a, ChannelParams channel_b);

  Complex alpha() const { return alpha_; }
  Complex beta() const { return beta_; }
  const ChannelParams& channel_a() const { return channel_a_; }
  const ChannelParams& channel_b() const { return channel_b_; }
  const MeasurementStrengths& strengths_a() const { return strengths_a_; }
  const MeasurementStrengths& strengths_b() const { return strengths_b_; }
  Vec<4> initial_state() const;

 private:
  Complex alpha_;
  Complex beta_;
  ChannelParams channel_a_;
  ChannelParams channel_b_;
  MeasurementStrengths strengths_a_;
  MeasurementStrengths strengths_b_;
};

struct TwoQubitCase {
  /// Unnormalized post-selected density; trace is `success_prob`.
  Density4 density;
  double success_prob = 0.0;
  /// Trace before the post-selection step.
  double pre_selection_weight = 0.0;
  double omega = 0.0;
  double concurrence = 0.0;
};

struct TwoQubitResult {
  std::vector<TwoQubitCase> cases;
  double success_prob = 0.0;
  std::optional<double> concurrence;
};

/// Four pre-measurement cases (11, 22, 12, 21) in that order.
TwoQubitResult run_two_qubit(const TwoQubitConfig& cfg);

/// Assembles per-case results into the selected totals; throws StructureError on non-X densities.
TwoQubitResult summarize_cases(std::vector<TwoQubitCase> cases);

struct EsdPredicates {
  bool bare;
  bool baseline;
};

/// Requires |beta| >= |alpha|; throws std::domain_error otherwise.
EsdPredicates esd_predicates(const TwoQubitConfig& cfg);

}  // namespace ffp

#endif  // FFP_PROTOCOL_H
