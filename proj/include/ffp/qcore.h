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

#ifndef FFP_QCORE_H
#define FFP_QCORE_H

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <optional>
#include <span>
#include <stdexcept>

namespace ffp {

using Complex = std::complex<double>;

/// Tolerance for algebraic identities such as operator completeness.
inline constexpr double kAlgebraTol = 1e-12;
/// Tolerance for positivity and sparsity-pattern checks.
inline constexpr double kPositivityTol = 1e-10;

template <int N>
using Mat = Eigen::Matrix<Complex, N, N>;
template <int N>
using Vec = Eigen::Matrix<Complex, N, 1>;

using Operator2 = Mat<2>;
using Operator4 = Mat<4>;
using Density2 = Mat<2>;
using Density4 = Mat<4>;

/// Raised when a two-qubit density leaves the X pattern it must keep.
class StructureError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Normalized qubit state a0|0> + a1|1>.
class PureState {
 public:
  /// Normalizes the given amplitudes. Throws std::domain_error on a zero vector.
  PureState(Complex a0, Complex a1);
  explicit PureState(const Vec<2>& ket) : PureState(ket(0), ket(1)) {}

  /// alpha = cos(theta/2), beta = e^{i phi} sin(theta/2).
  static PureState from_bloch(double theta, double phi);
  static PureState ground() { return {1.0, 0.0}; }
  static PureState excited() { return {0.0, 1.0}; }

  Complex a0() const { return a0_; }
  Complex a1() const { return a1_; }
  double population0() const { return std::norm(a0_); }
  double population1() const { return std::norm(a1_); }
  Vec<2> ket() const { return Vec<2>(a0_, a1_); }
  Density2 projector() const;

 private:
  Complex a0_;
  Complex a1_;
};

/// Amplitude-damping magnitude r in [0, 1]; the survival factor e^{-Gamma tau} is 1 - r.
class ChannelParams {
 public:
  explicit ChannelParams(double r);
  static ChannelParams from_decay(double gamma_tau);

  double r() const { return r_; }
  double survival() const { return 1.0 - r_; }

 private:
  double r_;
};

/// Pre-measurement strength p and the two post-measurement strengths.
class MeasurementStrengths {
 public:
  MeasurementStrengths(double p, double p_u, double p_v);

  double p() const { return p_; }
  double p_u() const { return p_u_; }
  double p_v() const { return p_v_; }

 private:
  double p_;
  double p_u_;
  double p_v_;
};

/// Throws std::domain_error naming `what` unless value lies in [0, 1].
void require_unit_interval(double value, const char* what);

std::array<Operator2, 2> amplitude_damping_kraus(const ChannelParams& channel);

/// Complete pre-measurement {M_1, M_2} with M_1 = diag(sqrt p, sqrt(1-p)).
std::array<Operator2, 2> pre_measurement(double p);

enum class FeedForward { kIdentity, kFlip };
Operator2 feed_forward(FeedForward kind);

/// Post-selection after outcome 1: diag(sqrt(1 - p_u), 1).
Operator2 post_measurement_n(double p_u);
/// Post-selection after outcome 2: diag(1, sqrt(1 - p_v)).
Operator2 post_measurement_w(double p_v);

/// sum_i E_i rho E_i^dagger.
template <int N>
Mat<N> apply_channel(const Mat<N>& rho, std::span<const Mat<N>> kraus) {
  Mat<N> out = Mat<N>::Zero();
  for (const auto& e : kraus) out += e * rho * e.adjoint();
  return out;
}

template <int N>
Mat<N> completeness_sum(std::span<const Mat<N>> ops) {
  Mat<N> out = Mat<N>::Zero();
  for (const auto& m : ops) out += m.adjoint() * m;
  return out;
}

template <int N>
bool is_unitary(const Mat<N>& u, double tol = kAlgebraTol) {
  return ((u.adjoint() * u) - Mat<N>::Identity()).cwiseAbs().maxCoeff() <= tol;
}

/// Hermitian, unit trace (when `normalized`), eigenvalues >= -kPositivityTol.
template <int N>
bool is_density_matrix(const Mat<N>& rho, bool normalized = true) {
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kAlgebraTol) return false;
  if (normalized && std::abs(rho.trace() - Complex(1.0)) > kAlgebraTol) return false;
  Eigen::SelfAdjointEigenSolver<Mat<N>> solver(rho);
  return solver.eigenvalues().minCoeff() >= -kPositivityTol;
}

/// Outcome of applying a (not necessarily complete) measurement operator to a ket.
/// `state` is empty when the outcome has zero probability.
template <int N>
struct Collapse {
  double probability;
  std::optional<Vec<N>> state;
};

template <int N>
Collapse<N> collapse(const Vec<N>& ket, const Mat<N>& op) {
  Vec<N> out = op * ket;
  const double prob = out.squaredNorm();
  if (!(prob > 0.0)) return {0.0, std::nullopt};
  return {prob, out / std::sqrt(prob)};
}

struct MeasuredState {
  double probability;
  std::optional<PureState> state;
  bool possible() const { return state.has_value(); }
};

/// Born probability <psi|M^dagger M|psi> and the renormalized post-measurement state.
MeasuredState measure_branch(const PureState& state, const Operator2& m);

/// Throws std::invalid_argument if `u` is not unitary within kAlgebraTol.
PureState apply_unitary(const PureState& state, const Operator2& u);

/// <psi|rho|psi>.
double fidelity_pure_mixed(const PureState& target, const Density2& rho);
double fidelity_pure_mixed(const Vec<4>& target, const Density4& rho);

/// a (x) b with qubit a as the left factor; basis |00>, |01>, |10>, |11>.
Operator4 lift_to_two_qubits(const Operator2& a, const Operator2& b);

/// True when every entry outside the diagonal and the (0,3)/(3,0) corners is below tol.
bool is_x_form(const Density4& rho, double tol = kPositivityTol);

/// max{0, 2(|rho_14| - sqrt(rho_22 rho_33)) / norm} for an unnormalized X-form density.
/// Throws StructureError for non-X input and std::domain_error for norm <= 0.
double concurrence_x_state(const Density4& rho, double norm);

/// The signed quantity inside the max of concurrence_x_state.
double concurrence_witness(const Density4& rho, double norm);

}  // namespace ffp

#endif  // FFP_QCORE_H
