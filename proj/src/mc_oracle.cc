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

#include "ffp/mc_oracle.h"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "ffp/parallel.h"

namespace ffp {

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kBootstrapSalt = 0x6a09e667f3bcc909ULL;

std::size_t block_count(std::uint64_t samples) {
  return static_cast<std::size_t>((samples + kTrajectoryBlock - 1) / kTrajectoryBlock);
}

void require_samples(std::uint64_t samples) {
  if (samples < 1) throw std::invalid_argument("Monte Carlo run needs at least one sample");
}

// Draws one of two outcomes with Born weights |op0 psi|^2, |op1 psi|^2 (summing to one).
template <int N>
std::pair<int, Vec<N>> draw(const Vec<N>& psi, const Mat<N>& op0, const Mat<N>& op1, double u) {
  const Collapse<N> first = collapse<N>(psi, op0);
  if (u < first.probability) return {0, *first.state};
  const Collapse<N> second = collapse<N>(psi, op1);
  if (!second.state) return {0, first.state.value()};
  return {1, *second.state};
}

struct SingleBlock {
  std::array<std::uint64_t, 8> counts{};
  std::uint64_t accepted = 0;
  double fidelity_sum = 0.0;
  double fidelity_sq_sum = 0.0;
};

}  // namespace

SplitMix64 SplitMix64::for_stream(std::uint64_t seed, std::uint64_t index) {
  return SplitMix64(mix64(seed + kGolden * mix64(index + 1)));
}

SplitMix64::result_type SplitMix64::operator()() {
  state_ += kGolden;
  return mix64(state_);
}

double SplitMix64::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

McEstimate simulate_single(const SingleTrajectoryConfig& cfg) {
  require_samples(cfg.samples);
  const auto pre = pre_measurement(cfg.strengths.p());
  const std::array<Operator2, 2> forward{feed_forward(FeedForward::kIdentity), feed_forward(FeedForward::kFlip)};
  const std::array<Operator2, 2> post{post_measurement_n(cfg.strengths.p_u()),
                                      post_measurement_w(cfg.strengths.p_v())};
  const auto kraus = amplitude_damping_kraus(cfg.channel);
  const Vec<2> target = cfg.input.ket();

  std::vector<SingleBlock> blocks(block_count(cfg.samples));
  parallel_for_blocks(blocks.size(), cfg.workers, [&](std::size_t b) {
    SingleBlock& acc = blocks[b];
    const std::uint64_t begin = b * kTrajectoryBlock;
    const std::uint64_t end = std::min(cfg.samples, begin + kTrajectoryBlock);
    for (std::uint64_t t = begin; t < end; ++t) {
      SplitMix64 rng = SplitMix64::for_stream(cfg.seed, t);
      auto [outcome, psi] = draw<2>(target, pre[0], pre[1], rng.uniform());
      psi = forward[outcome] * psi;
      // Kraus order {E_2, E_1} so that index 0 is the jump.
      auto [no_jump, after] = draw<2>(psi, kraus[1], kraus[0], rng.uniform());
      const bool jumped = no_jump == 0;
      psi = forward[outcome] * after;
      const Collapse<2> kept = collapse<2>(psi, post[outcome]);
      const bool accepted = rng.uniform() < kept.probability;

      const PreResult pre_result = outcome == 0 ? PreResult::kFirst : PreResult::kSecond;
      ++acc.counts[trajectory_class(pre_result, jumped ? Trajectory::kJump : Trajectory::kNoJump, accepted)];
      if (accepted) {
        const double f = std::norm(target.dot(*kept.state));
        ++acc.accepted;
        acc.fidelity_sum += f;
        acc.fidelity_sq_sum += f * f;
      }
    }
  });

  SingleBlock total;
  for (const SingleBlock& b : blocks) {
    for (std::size_t k = 0; k < 8; ++k) total.counts[k] += b.counts[k];
    total.accepted += b.accepted;
    total.fidelity_sum += b.fidelity_sum;
    total.fidelity_sq_sum += b.fidelity_sq_sum;
  }

  McEstimate est;
  est.samples = cfg.samples;
  est.accepted = total.accepted;
  est.branch_counts = total.counts;
  const double n = static_cast<double>(cfg.samples);
  est.success_prob_hat = total.accepted / n;
  est.success_std_error = std::sqrt(est.success_prob_hat * (1.0 - est.success_prob_hat) / n);
  if (total.accepted > 0) {
    const double k = static_cast<double>(total.accepted);
    const double mean = total.fidelity_sum / k;
    est.fidelity_hat = mean;
    if (total.accepted > 1) {
      const double var = std::max(0.0, (total.fidelity_sq_sum / k - mean * mean) * k / (k - 1.0));
      est.fidelity_std_error = std::sqrt(var / k);
    }
  }
  return est;
}

namespace {

// case (4) x jump on a (2) x jump on b (2) x accepted (2)
constexpr std::size_t kTwoQubitClasses = 32;

constexpr std::size_t two_qubit_class(int pre_case, bool jump_a, bool jump_b, bool accepted) {
  return static_cast<std::size_t>(pre_case) * 8 + (jump_a ? 4 : 0) + (jump_b ? 2 : 0) + (accepted ? 1 : 0);
}

struct TwoQubitBlock {
  std::array<std::uint64_t, kTwoQubitClasses> counts{};
  std::array<Density4, kTwoQubitClasses> projector_sums;
  TwoQubitBlock() {
    for (auto& d : projector_sums) d.setZero();
  }
};

std::optional<double> concurrence_from_cases(const std::array<Density4, 4>& cases) {
  double total = 0.0;
  double weighted = 0.0;
  for (const Density4& rho : cases) {
    const double p = rho.trace().real();
    if (!(p > 0.0)) continue;
    total += p;
    weighted += p * concurrence_x_state(rho, p);
  }
  if (!(total > 0.0)) return std::nullopt;
  return weighted / total;
}

}  // namespace

TwoQubitMcEstimate simulate_two_qubit(const TwoQubitTrajectoryConfig& cfg) {
  require_samples(cfg.samples);
  const TwoQubitConfig& tq = cfg.config;
  const auto pre_a = pre_measurement(tq.strengths_a().p());
  const auto pre_b = pre_measurement(tq.strengths_b().p());
  const std::array<Operator2, 2> forward{feed_forward(FeedForward::kIdentity), feed_forward(FeedForward::kFlip)};
  const std::array<Operator2, 2> post_a{post_measurement_n(tq.strengths_a().p_u()),
                                        post_measurement_w(tq.strengths_a().p_v())};
  const std::array<Operator2, 2> post_b{post_measurement_n(tq.strengths_b().p_u()),
                                        post_measurement_w(tq.strengths_b().p_v())};
  const auto kraus_a = amplitude_damping_kraus(tq.channel_a());
  const auto kraus_b = amplitude_damping_kraus(tq.channel_b());
  const Operator2 id = Operator2::Identity();
  const Operator4 jump_a = lift_to_two_qubits(kraus_a[1], id);
  const Operator4 stay_a = lift_to_two_qubits(kraus_a[0], id);
  const Operator4 jump_b = lift_to_two_qubits(id, kraus_b[1]);
  const Operator4 stay_b = lift_to_two_qubits(id, kraus_b[0]);

  constexpr std::array<std::pair<int, int>, 4> kCases{{{0, 0}, {1, 1}, {0, 1}, {1, 0}}};
  std::array<Operator4, 4> pre_ops;
  std::array<Operator4, 4> forward_ops;
  std::array<Operator4, 4> post_ops;
  for (std::size_t k = 0; k < 4; ++k) {
    const auto [ia, ib] = kCases[k];
    pre_ops[k] = lift_to_two_qubits(pre_a[ia], pre_b[ib]);
    forward_ops[k] = lift_to_two_qubits(forward[ia], forward[ib]);
    post_ops[k] = lift_to_two_qubits(post_a[ia], post_b[ib]);
  }
  const Vec<4> initial = tq.initial_state();

  std::vector<TwoQubitBlock> blocks(block_count(cfg.samples));
  parallel_for_blocks(blocks.size(), cfg.workers, [&](std::size_t b) {
    TwoQubitBlock& acc = blocks[b];
    const std::uint64_t begin = b * kTrajectoryBlock;
    const std::uint64_t end = std::min(cfg.samples, begin + kTrajectoryBlock);
    for (std::uint64_t t = begin; t < end; ++t) {
      SplitMix64 rng = SplitMix64::for_stream(cfg.seed, t);
      // Complete four-outcome pre-measurement.
      double u = rng.uniform();
      int pre_case = 3;
      Vec<4> psi;
      for (int k = 0; k < 4; ++k) {
        const Collapse<4> c = collapse<4>(initial, pre_ops[k]);
        if (!c.state) continue;
        psi = *c.state;
        pre_case = k;
        if (u < c.probability) break;
        u -= c.probability;
      }
      psi = forward_ops[pre_case] * psi;
      auto [a_outcome, after_a] = draw<4>(psi, jump_a, stay_a, rng.uniform());
      auto [b_outcome, after_b] = draw<4>(after_a, jump_b, stay_b, rng.uniform());
      psi = forward_ops[pre_case] * after_b;
      const Collapse<4> kept = collapse<4>(psi, post_ops[pre_case]);
      const bool accepted = rng.uniform() < kept.probability;

      const std::size_t cls = two_qubit_class(pre_case, a_outcome == 0, b_outcome == 0, accepted);
      ++acc.counts[cls];
      if (accepted) acc.projector_sums[cls] += *kept.state * kept.state->adjoint();
    }
  });

  TwoQubitBlock total;
  for (const TwoQubitBlock& b : blocks) {
    for (std::size_t k = 0; k < kTwoQubitClasses; ++k) {
      total.counts[k] += b.counts[k];
      total.projector_sums[k] += b.projector_sums[k];
    }
  }

  const double n = static_cast<double>(cfg.samples);
  TwoQubitMcEstimate est;
  est.samples = cfg.samples;
  for (auto& d : est.case_densities) d.setZero();
  for (std::size_t k = 0; k < kTwoQubitClasses; ++k) {
    if (k % 2 == 0) continue;  // rejected
    const std::size_t pre_case = k / 8;
    est.accepted += total.counts[k];
    est.case_success_hat[pre_case] += total.counts[k] / n;
    est.case_densities[pre_case] += total.projector_sums[k] / n;
  }
  est.success_prob_hat = est.accepted / n;
  est.success_std_error = std::sqrt(est.success_prob_hat * (1.0 - est.success_prob_hat) / n);
  est.concurrence_hat = concurrence_from_cases(est.case_densities);

  // Multinomial bootstrap over trajectory classes. Trajectories within one class
  // end in the same state, so resampling class counts resamples trajectories.
  if (est.concurrence_hat && cfg.bootstrap_resamples > 1) {
    std::vector<double> replicas;
    for (int rep = 0; rep < cfg.bootstrap_resamples; ++rep) {
      SplitMix64 rng = SplitMix64::for_stream(cfg.seed ^ kBootstrapSalt, static_cast<std::uint64_t>(rep));
      std::uint64_t remaining = cfg.samples;
      double mass = 1.0;
      std::array<Density4, 4> cases;
      for (auto& d : cases) d.setZero();
      for (std::size_t k = 0; k < kTwoQubitClasses && remaining > 0; ++k) {
        const double prob = total.counts[k] / n;
        std::uint64_t drawn = 0;
        if (prob > 0.0) {
          const double share = std::min(1.0, prob / mass);
          drawn = share >= 1.0 ? remaining : std::binomial_distribution<std::uint64_t>(remaining, share)(rng);
        }
        mass -= prob;
        remaining -= drawn;
        if (k % 2 == 1 && total.counts[k] > 0) {
          cases[k / 8] += total.projector_sums[k] * (static_cast<double>(drawn) / total.counts[k]) / n;
        }
      }
      if (auto c = concurrence_from_cases(cases)) replicas.push_back(*c);
    }
    if (replicas.size() > 1) {
      double mean = 0.0;
      for (double c : replicas) mean += c;
      mean /= replicas.size();
      double var = 0.0;
      for (double c : replicas) var += (c - mean) * (c - mean);
      est.concurrence_std_error = std::sqrt(var / (replicas.size() - 1));
    }
  }
  return est;
}

}  // namespace ffp
