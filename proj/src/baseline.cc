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

#include "ffp/baseline.h"

#include <algorithm>
#include <cmath>

namespace ffp {

WmrStrengths::WmrStrengths(double q, double q_r) : q_(q), q_r_(q_r) {
  require_unit_interval(q, "weak-measurement strength q");
  require_unit_interval(q_r, "reversal strength q_r");
}

Operator2 wmr_weak_measurement(double q) {
  require_unit_interval(q, "weak-measurement strength q");
  Operator2 w = Operator2::Zero();
  w(0, 0) = 1.0;
  w(1, 1) = std::sqrt(1.0 - q);
  return w;
}

Operator2 wmr_reversal(double q_r) {
  require_unit_interval(q_r, "reversal strength q_r");
  Operator2 w = Operator2::Zero();
  w(0, 0) = std::sqrt(1.0 - q_r);
  w(1, 1) = 1.0;
  return w;
}

double wmr_reversal_strength(double q, const ChannelParams& c) {
  require_unit_interval(q, "weak-measurement strength q");
  // No-jump operator is diag(sqrt(1-q_r), sqrt((1-q)(1-r))); equal diagonal entries.
  return std::clamp(1.0 - (1.0 - q) * c.survival(), 0.0, 1.0);
}

ProtocolResult run_wmr_single(const PureState& input, const WmrStrengths& s, const ChannelParams& c) {
  const Operator2 weak = wmr_weak_measurement(s.q());
  const Operator2 reversal = wmr_reversal(s.q_r());
  const auto kraus = amplitude_damping_kraus(c);

  Density2 rho = weak * input.projector() * weak.adjoint();
  rho = apply_channel<2>(rho, kraus);
  rho = reversal * rho * reversal.adjoint();

  ProtocolResult out;
  out.success_prob = rho.trace().real();
  if (out.success_prob > 0.0) {
    out.final_state = rho / out.success_prob;
    out.fidelity = fidelity_pure_mixed(input, *out.final_state);
  }
  return out;
}

WmrTwoQubitConfig::WmrTwoQubitConfig(Complex alpha, ChannelParams channel_a, ChannelParams channel_b,
                                     WmrStrengths strengths_a, WmrStrengths strengths_b)
    : alpha_(alpha),
      channel_a_(channel_a),
      channel_b_(channel_b),
      strengths_a_(strengths_a),
      strengths_b_(strengths_b) {
  const double a2 = std::norm(alpha);
  if (!(a2 <= 1.0 + kAlgebraTol)) {
    throw std::domain_error("two-qubit state: |alpha| must not exceed 1");
  }
  beta_ = std::sqrt(std::max(0.0, 1.0 - a2));
}

WmrTwoQubitConfig WmrTwoQubitConfig::with_exact_reversal(Complex alpha, double q, ChannelParams channel_a,
                                                         ChannelParams channel_b) {
  return {alpha, channel_a, channel_b, WmrStrengths(q, wmr_reversal_strength(q, channel_a)),
          WmrStrengths(q, wmr_reversal_strength(q, channel_b))};
}

Vec<4> WmrTwoQubitConfig::initial_state() const {
  Vec<4> psi = Vec<4>::Zero();
  psi(0) = alpha_;
  psi(3) = beta_;
  return psi;
}

TwoQubitResult run_wmr_two_qubit(const WmrTwoQubitConfig& cfg) {
  const Operator4 weak =
      lift_to_two_qubits(wmr_weak_measurement(cfg.strengths_a().q()), wmr_weak_measurement(cfg.strengths_b().q()));
  const Operator4 reversal =
      lift_to_two_qubits(wmr_reversal(cfg.strengths_a().q_r()), wmr_reversal(cfg.strengths_b().q_r()));
  const auto kraus_a = amplitude_damping_kraus(cfg.channel_a());
  const auto kraus_b = amplitude_damping_kraus(cfg.channel_b());
  std::array<Operator4, 4> kraus;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) kraus[2 * i + j] = lift_to_two_qubits(kraus_a[i], kraus_b[j]);

  const Vec<4> psi = cfg.initial_state();
  Density4 rho = weak * psi * psi.adjoint() * weak.adjoint();
  rho = apply_channel<4>(rho, kraus);

  TwoQubitCase selected;
  selected.pre_selection_weight = rho.trace().real();
  selected.density = reversal * rho * reversal.adjoint();
  selected.success_prob = selected.density.trace().real();
  return summarize_cases({selected});
}

}  // namespace ffp
