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

#include <algorithm>
#include <cmath>
#include <string>

namespace ffp {

PureState::PureState(Complex a0, Complex a1) {
  const double norm = std::sqrt(std::norm(a0) + std::norm(a1));
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw std::domain_error("PureState: amplitudes must have a finite nonzero norm");
  }
  a0_ = a0 / norm;
  a1_ = a1 / norm;
}

PureState PureState::from_bloch(double theta, double phi) {
  return {std::cos(theta / 2.0), std::polar(std::sin(theta / 2.0), phi)};
}

Density2 PureState::projector() const {
  const Vec<2> k = ket();
  return k * k.adjoint();
}

void require_unit_interval(double value, const char* what) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw std::domain_error(std::string(what) + " must lie in [0, 1], got " + std::to_string(value));
  }
}

ChannelParams::ChannelParams(double r) : r_(r) { require_unit_interval(r, "damping magnitude r"); }

ChannelParams ChannelParams::from_decay(double gamma_tau) {
  if (!(gamma_tau >= 0.0)) {
    throw std::domain_error("decay exponent gamma*tau must be >= 0");
  }
  return ChannelParams(-std::expm1(-gamma_tau));
}

MeasurementStrengths::MeasurementStrengths(double p, double p_u, double p_v)
    : p_(p), p_u_(p_u), p_v_(p_v) {
  require_unit_interval(p, "pre-measurement strength p");
  require_unit_interval(p_u, "post-measurement strength p_u");
  require_unit_interval(p_v, "post-measurement strength p_v");
}

std::array<Operator2, 2> amplitude_damping_kraus(const ChannelParams& channel) {
  Operator2 e1 = Operator2::Zero();
  e1(0, 0) = 1.0;
  e1(1, 1) = std::sqrt(channel.survival());
  Operator2 e2 = Operator2::Zero();
  e2(0, 1) = std::sqrt(channel.r());
  return {e1, e2};
}

std::array<Operator2, 2> pre_measurement(double p) {
  require_unit_interval(p, "pre-measurement strength p");
  Operator2 m1 = Operator2::Zero();
  m1(0, 0) = std::sqrt(p);
  m1(1, 1) = std::sqrt(1.0 - p);
  Operator2 m2 = Operator2::Zero();
  m2(0, 0) = std::sqrt(1.0 - p);
  m2(1, 1) = std::sqrt(p);
  return {m1, m2};
}

Operator2 feed_forward(FeedForward kind) {
  if (kind == FeedForward::kIdentity) return Operator2::Identity();
  Operator2 x = Operator2::Zero();
  x(0, 1) = 1.0;
  x(1, 0) = 1.0;
  return x;
}

Operator2 post_measurement_n(double p_u) {
  require_unit_interval(p_u, "post-measurement strength p_u");
  Operator2 n = Operator2::Zero();
  n(0, 0) = std::sqrt(1.0 - p_u);
  n(1, 1) = 1.0;
  return n;
}

Operator2 post_measurement_w(double p_v) {
  require_unit_interval(p_v, "post-measurement strength p_v");
  Operator2 w = Operator2::Zero();
  w(0, 0) = 1.0;
  w(1, 1) = std::sqrt(1.0 - p_v);
  return w;
}

MeasuredState measure_branch(const PureState& state, const Operator2& m) {
  const Collapse<2> c = collapse<2>(state.ket(), m);
  if (!c.state) return {0.0, std::nullopt};
  return {c.probability, PureState(*c.state)};
}

PureState apply_unitary(const PureState& state, const Operator2& u) {
  if (!is_unitary<2>(u)) {
    throw std::invalid_argument("apply_unitary: operator is not unitary");
  }
  return PureState(Vec<2>(u * state.ket()));
}

double fidelity_pure_mixed(const PureState& target, const Density2& rho) {
  const Vec<2> k = target.ket();
  return (k.adjoint() * rho * k)(0, 0).real();
}

double fidelity_pure_mixed(const Vec<4>& target, const Density4& rho) {
  return (target.adjoint() * rho * target)(0, 0).real();
}

Operator4 lift_to_two_qubits(const Operator2& a, const Operator2& b) {
  Operator4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

bool is_x_form(const Density4& rho, double tol) {
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const bool on_pattern = i == j || (i == 0 && j == 3) || (i == 3 && j == 0);
      if (!on_pattern && std::abs(rho(i, j)) > tol) return false;
    }
  }
  return true;
}

double concurrence_witness(const Density4& rho, double norm) {
  if (!is_x_form(rho)) {
    throw StructureError("concurrence_x_state: density is not of X form");
  }
  if (!(norm > 0.0)) {
    throw std::domain_error("concurrence_x_state: normalization must be positive");
  }
  const double d22 = std::max(0.0, rho(1, 1).real());
  const double d33 = std::max(0.0, rho(2, 2).real());
  return 2.0 * (std::abs(rho(0, 3)) - std::sqrt(d22 * d33)) / norm;
}

double concurrence_x_state(const Density4& rho, double norm) {
  return std::max(0.0, concurrence_witness(rho, norm));
}

}  // namespace ffp
