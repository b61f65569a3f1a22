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

#include "ffp/protocol.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace ffp {
namespace {

// Pre-measurement, feed-forward, unravelled channel, reversal, post-selection.
BranchPair run_branch(const PureState& input, const Operator2& pre, const Operator2& forward,
                      const Operator2& post, const ChannelParams& c, PreResult label) {
  BranchPair out{{label, Trajectory::kNoJump, 0.0, std::nullopt},
                 {label, Trajectory::kJump, 0.0, std::nullopt}};
  const MeasuredState measured = measure_branch(input, pre);
  if (!measured.possible()) return out;
  const PureState forwarded = apply_unitary(*measured.state, forward);
  const auto kraus = amplitude_damping_kraus(c);

  auto propagate = [&](const Operator2& kraus_op, BranchOutcome& branch) {
    const MeasuredState through = measure_branch(forwarded, kraus_op);
    if (!through.possible()) return;
    const PureState reversed = apply_unitary(*through.state, forward);
    const MeasuredState accepted = measure_branch(reversed, post);
    if (!accepted.possible()) return;
    branch.weight = measured.probability * through.probability * accepted.probability;
    branch.state = accepted.state;
  };
  propagate(kraus[0], out.no_jump);
  propagate(kraus[1], out.jump);
  return out;
}

constexpr std::array<std::pair<int, int>, 4> kTwoQubitCases{{{0, 0}, {1, 1}, {0, 1}, {1, 0}}};

}  // namespace

BranchPair run_branch1(const PureState& input, const MeasurementStrengths& s, const ChannelParams& c) {
  return run_branch(input, pre_measurement(s.p())[0], feed_forward(FeedForward::kIdentity),
                    post_measurement_n(s.p_u()), c, PreResult::kFirst);
}

BranchPair run_branch2(const PureState& input, const MeasurementStrengths& s, const ChannelParams& c) {
  return run_branch(input, pre_measurement(s.p())[1], feed_forward(FeedForward::kFlip),
                    post_measurement_w(s.p_v()), c, PreResult::kSecond);
}

ProtocolResult run_protocol(const PureState& input, const MeasurementStrengths& s, const ChannelParams& c) {
  const BranchPair first = run_branch1(input, s, c);
  const BranchPair second = run_branch2(input, s, c);

  ProtocolResult result;
  result.branches = {first.no_jump, first.jump, second.no_jump, second.jump};
  Density2 mixture = Density2::Zero();
  for (const BranchOutcome& b : result.branches) {
    if (!b.state) continue;
    result.success_prob += b.weight;
    mixture += b.weight * b.state->projector();
  }
  if (result.success_prob > 0.0) {
    result.final_state = mixture / result.success_prob;
    result.fidelity = fidelity_pure_mixed(input, *result.final_state);
  }
  return result;
}

double exact_lower_bound(const ChannelParams& c) { return (1.0 - c.r()) / (2.0 - c.r()); }

MeasurementStrengths exact_strengths(double p, const ChannelParams& c) {
  const double bound = exact_lower_bound(c);
  if (!(p > 0.0) || p > 1.0 || p < bound - kAlgebraTol) {
    throw std::domain_error("exact protection requires p in [(1-r)/(2-r), 1] = [" + std::to_string(bound) +
                            ", 1] and p > 0, got p = " + std::to_string(p));
  }
  double post = std::clamp(1.0 - (1.0 - p) * c.survival() / p, 0.0, 1.0);
  if (post < kAlgebraTol) post = 0.0;  // rounding at the lower bound
  return {p, post, post};
}

Evaluation exact_closed_forms(const PureState& input, double p, const ChannelParams& c) {
  exact_strengths(p, c);  // domain check
  const double r = c.r();
  const double jump = (1.0 - p) * (1.0 - p) * r * (1.0 - r) / p;
  const double restored = 2.0 * (1.0 - p) * (1.0 - r);
  const double g = jump + restored;
  Evaluation out{g, std::nullopt};
  if (g > 0.0) {
    const double mixing = input.population0() * input.population1();
    out.fidelity = (2.0 * jump * mixing + restored) / g;
  }
  return out;
}

std::optional<double> exact_average_fidelity(double p, const ChannelParams& c) {
  exact_strengths(p, c);
  const double r = c.r();
  const double jump = (1.0 - p) * (1.0 - p) * r * (1.0 - r) / p;
  const double restored = 2.0 * (1.0 - p) * (1.0 - r);
  const double g = jump + restored;
  if (!(g > 0.0)) return std::nullopt;
  return (jump / 3.0 + restored) / g;
}

Evaluation optimal_closed_forms(double population0, const MeasurementStrengths& s, const ChannelParams& c) {
  const double a2 = population0;
  const double b2 = 1.0 - population0;
  const double p = s.p();
  const double keep_u = 1.0 - s.p_u();
  const double keep_v = 1.0 - s.p_v();
  const double r = c.r();
  const double survive = 1.0 - r;
  const double q = 1.0 - p;

  const double g = p * keep_u * a2 + q * keep_u * r * b2 + p * keep_v * b2 + q * keep_v * r * a2 + q * survive;
  Evaluation out{g, std::nullopt};
  if (!(g > 0.0)) return out;

  const double coherence = 2.0 * std::sqrt(p * q * survive) * a2 * b2;
  const double first = p * keep_u * a2 * a2 + q * survive * b2 * b2 + q * keep_u * r * a2 * b2 +
                       coherence * std::sqrt(keep_u);
  const double second = q * survive * a2 * a2 + p * keep_v * b2 * b2 + q * keep_v * r * a2 * b2 +
                        coherence * std::sqrt(keep_v);
  out.fidelity = (first + second) / g;
  return out;
}

Evaluation optimal_closed_forms(const PureState& input, const MeasurementStrengths& s, const ChannelParams& c) {
  return optimal_closed_forms(input.population0(), s, c);
}

double bare_channel_fidelity(const PureState& input, const ChannelParams& c) {
  const auto kraus = amplitude_damping_kraus(c);
  return fidelity_pure_mixed(input, apply_channel<2>(input.projector(), kraus));
}

NonorthogonalPair::NonorthogonalPair(double theta, double phi) : theta_(theta), phi_(phi) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi / 2.0)) {
    throw std::domain_error("nonorthogonal pair: theta must lie in [0, pi/2]");
  }
  if (!(phi >= 0.0 && phi < 2.0 * std::numbers::pi)) {
    throw std::domain_error("nonorthogonal pair: phi must lie in [0, 2pi)");
  }
}

PureState NonorthogonalPair::plus() const {
  const Complex c = std::cos(theta_ / 2.0);
  const Complex s = std::polar(std::sin(theta_ / 2.0), phi_);
  return {(c + s) / std::numbers::sqrt2, (c - s) / std::numbers::sqrt2};
}

PureState NonorthogonalPair::minus() const {
  const Complex c = std::cos(theta_ / 2.0);
  const Complex s = std::polar(std::sin(theta_ / 2.0), phi_);
  return {(c - s) / std::numbers::sqrt2, (c + s) / std::numbers::sqrt2};
}

namespace {

Evaluation average_pair(const Evaluation& plus, const Evaluation& minus) {
  Evaluation out{(plus.success_prob + minus.success_prob) / 2.0, std::nullopt};
  if (plus.fidelity && minus.fidelity) out.fidelity = (*plus.fidelity + *minus.fidelity) / 2.0;
  return out;
}

}  // namespace

NonorthogonalResult run_nonorthogonal(const NonorthogonalPair& pair, const MeasurementStrengths& s,
                                      const ChannelParams& c) {
  NonorthogonalResult out;
  out.plus = run_protocol(pair.plus(), s, c);
  out.minus = run_protocol(pair.minus(), s, c);
  out.combined = average_pair(out.plus.evaluation(), out.minus.evaluation());
  return out;
}

Evaluation nonorthogonal_closed_forms(const NonorthogonalPair& pair, const MeasurementStrengths& s,
                                      const ChannelParams& c) {
  return average_pair(optimal_closed_forms(pair.plus(), s, c), optimal_closed_forms(pair.minus(), s, c));
}

TwoQubitConfig::TwoQubitConfig(Complex alpha, ChannelParams channel_a, ChannelParams channel_b,
                               MeasurementStrengths strengths_a, MeasurementStrengths strengths_b)
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

TwoQubitConfig TwoQubitConfig::with_exact_strengths(Complex alpha, double p_a, double p_b,
                                                    ChannelParams channel_a, ChannelParams channel_b) {
  return {alpha, channel_a, channel_b, exact_strengths(p_a, channel_a), exact_strengths(p_b, channel_b)};
}

Vec<4> TwoQubitConfig::initial_state() const {
  Vec<4> psi = Vec<4>::Zero();
  psi(0) = alpha_;
  psi(3) = beta_;
  return psi;
}

TwoQubitResult summarize_cases(std::vector<TwoQubitCase> cases) {
  TwoQubitResult out;
  double weighted = 0.0;
  for (TwoQubitCase& k : cases) {
    if (!is_x_form(k.density)) {
      throw StructureError("two-qubit protocol produced a density outside the X form");
    }
    if (k.success_prob > 0.0) {
      k.omega = concurrence_witness(k.density, k.success_prob);
      k.concurrence = std::max(0.0, k.omega);
    }
    out.success_prob += k.success_prob;
    weighted += k.success_prob * k.concurrence;
  }
  if (out.success_prob > 0.0) out.concurrence = weighted / out.success_prob;
  out.cases = std::move(cases);
  return out;
}

TwoQubitResult run_two_qubit(const TwoQubitConfig& cfg) {
  const auto pre_a = pre_measurement(cfg.strengths_a().p());
  const auto pre_b = pre_measurement(cfg.strengths_b().p());
  const std::array<Operator2, 2> forward{feed_forward(FeedForward::kIdentity), feed_forward(FeedForward::kFlip)};
  const std::array<Operator2, 2> post_a{post_measurement_n(cfg.strengths_a().p_u()),
                                        post_measurement_w(cfg.strengths_a().p_v())};
  const std::array<Operator2, 2> post_b{post_measurement_n(cfg.strengths_b().p_u()),
                                        post_measurement_w(cfg.strengths_b().p_v())};

  const auto kraus_a = amplitude_damping_kraus(cfg.channel_a());
  const auto kraus_b = amplitude_damping_kraus(cfg.channel_b());
  std::array<Operator4, 4> kraus;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) kraus[2 * i + j] = lift_to_two_qubits(kraus_a[i], kraus_b[j]);

  const Vec<4> psi = cfg.initial_state();
  const Density4 rho0 = psi * psi.adjoint();

  std::vector<TwoQubitCase> cases;
  for (const auto& [ia, ib] : kTwoQubitCases) {
    const Operator4 m = lift_to_two_qubits(pre_a[ia], pre_b[ib]);
    const Operator4 f = lift_to_two_qubits(forward[ia], forward[ib]);
    const Operator4 k = lift_to_two_qubits(post_a[ia], post_b[ib]);

    Density4 rho = f * m * rho0 * m.adjoint() * f.adjoint();
    rho = apply_channel<4>(rho, kraus);
    rho = f * rho * f.adjoint();
    TwoQubitCase out;
    out.pre_selection_weight = rho.trace().real();
    out.density = k * rho * k.adjoint();
    out.success_prob = out.density.trace().real();
    cases.push_back(out);
  }
  return summarize_cases(std::move(cases));
}

EsdPredicates esd_predicates(const TwoQubitConfig& cfg) {
  const double a = std::abs(cfg.alpha());
  const double b = std::abs(cfg.beta());
  if (b < a) {
    throw std::domain_error("ESD conditions hold only for |beta| >= |alpha|");
  }
  const double ratio = a / b;
  const double ra = cfg.channel_a().r();
  const double rb = cfg.channel_b().r();
  const double survive = (1.0 - cfg.strengths_a().p()) * (1.0 - cfg.strengths_b().p());
  // Cross-multiplied so that ra * rb = 0 reads as "no ESD" instead of dividing by zero.
  return {std::sqrt(ra * rb) >= ratio, survive * ra * rb >= ratio * ratio};
}

}  // namespace ffp
