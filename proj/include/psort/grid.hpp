// Copyright 2026 The psort Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace psort {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

/// Uniform momentum grid k_j = -k_max + j*dk, j = 0..n-1, with dk = 2*k_max/n.
/// All momenta and rates are in units of the first emitter's coupling rate.
///
/// The induced time grid is t_m = (m - n/2)*dt with dt = 2*pi/(n*dk), so the
/// discrete transform pair is exact between the two samplings.
struct Grid {
  int n = 0;
  double k_max = 0.0;
  double dk = 0.0;

  double k(int j) const { return -k_max + j * dk; }
  double dt() const { return 2.0 * kPi / (n * dk); }
  double t(int m) const { return (m - n / 2) * dt(); }
  double time_extent() const { return 2.0 * kPi / dk; }

  /// Index of -k_j. The point -k_max has no partner on an even grid and wraps
  /// onto itself.
  int negated(int j) const { return (n - j) % n; }

  std::vector<double> points() const;

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.n == b.n && a.k_max == b.k_max;
  }
};

Grid make_grid(int n, double k_max);

/// Fast-test and production grids.
Grid fast_grid();
Grid default_grid();

enum class Domain { momentum, time };

/// Single-photon amplitude density sampled on a grid. In the momentum domain
/// amp_j = phi(k_j); in the time domain amp_m = phi~(t_m). Norms use the
/// continuum weights dk (resp. dt).
struct Pulse {
  Grid grid;
  CVector amp;
  Domain domain = Domain::momentum;

  double weight() const { return domain == Domain::momentum ? grid.dk : grid.dt(); }
  double norm2() const { return amp.squaredNorm() * weight(); }
  double norm() const;
};

Pulse zero_pulse(const Grid& g);
Pulse from_function(const Grid& g, const std::function<cplx(double)>& f);

Pulse lorentzian_pulse(const Grid& g, double sigma);
/// amp ∝ exp(-width_param * k^2); the default reproduces exp(-2 (k/Γ)^2).
Pulse gaussian_pulse(const Grid& g, double width_param = 2.0);
/// Causal rise-and-decay pulse t*exp(-kappa*t/2) for t>0, i.e. amp ∝ (k + i kappa/2)^-2.
/// Complex and asymmetric in k; used as a third optimizer seed.
Pulse exp_decay_pulse(const Grid& g, double kappa = 1.0);

Pulse to_time_domain(const Pulse& p);
Pulse to_momentum_domain(const Pulse& p);

/// Band-limited evaluation phi~(t) = dk/sqrt(2 pi) sum_j phi_j exp(-i k_j t) at
/// arbitrary times (momentum-domain input).
std::vector<cplx> sample_time(const Pulse& p, const std::vector<double>& times);

cplx inner(const Pulse& a, const Pulse& b);
Pulse normalize(const Pulse& p);

/// phi(k) -> phi(-k); equivalent to t -> -t in the time domain.
Pulse negate_momenta(const Pulse& p);
/// phi(k) -> conj(phi(-k)).
Pulse conj_reflect(const Pulse& p);
/// phi(k) -> phi(k) exp(i k t_d).
Pulse phase_ramp(const Pulse& p, double t_d);

void require_same_grid(const Grid& a, const Grid& b);

/// Copy a momentum-domain pulse onto a grid with the same dk and a wider
/// window, zero-filling the new points.
Pulse extend_window(const Pulse& p, int factor);

}  // namespace psort
