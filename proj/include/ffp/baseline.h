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

// Weak measurement and measurement reversal without feed-forward, used as the
// comparison scheme. A partial collapse diag(1, sqrt(1-q)) before the channel
// is undone after it by diag(sqrt(1-q_r), 1); both steps are selective.

#ifndef FFP_BASELINE_H
#define FFP_BASELINE_H

#include "ffp/protocol.h"
#include "ffp/qcore.h"

namespace ffp {

class WmrStrengths {
 public:
  WmrStrengths(double q, double q_r);

  double q() const { return q_; }
  double q_r() const { return q_r_; }

 private:
  double q_;
  double q_r_;
};

Operator2 wmr_weak_measurement(double q);
Operator2 wmr_reversal(double q_r);

/// Reversal strength for which reversal * E_1 * weak measurement is proportional
/// to the identity, i.e. the no-jump branch returns the input exactly.
double wmr_reversal_strength(double q, const ChannelParams& c);

/// Selected fidelity and success probability; `branches` is left empty.
ProtocolResult run_wmr_single(const PureState& input, const WmrStrengths& s, const ChannelParams& c);

class WmrTwoQubitConfig {
 public:
  WmrTwoQubitConfig(Complex alpha, ChannelParams channel_a, ChannelParams channel_b, WmrStrengths strengths_a,
                    WmrStrengths strengths_b);

  /// Same weak strength on both qubits with the exact reversal per qubit.
  static WmrTwoQubitConfig with_exact_reversal(Complex alpha, double q, ChannelParams channel_a,
                                               ChannelParams channel_b);

  Complex alpha() const { return alpha_; }
  Complex beta() const { return beta_; }
  const ChannelParams& channel_a() const { return channel_a_; }
  const ChannelParams& channel_b() const { return channel_b_; }
  const WmrStrengths& strengths_a() const { return strengths_a_; }
  const WmrStrengths& strengths_b() const { return strengths_b_; }
  Vec<4> initial_state() const;

 private:
  Complex alpha_;
  Complex beta_;
  ChannelParams channel_a_;
  ChannelParams channel_b_;
  WmrStrengths strengths_a_;
  WmrStrengths strengths_b_;
};

/// One selected case; `cases` has a single entry.
TwoQubitResult run_wmr_two_qubit(const WmrTwoQubitConfig& cfg);

}  // namespace ffp

#endif  // FFP_BASELINE_H
