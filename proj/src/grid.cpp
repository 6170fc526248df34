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

#include "psort/grid.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>

#include <fftw3.h>

namespace psort {

namespace {

// fftw's planner is not thread-safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// FFTW_FORWARD computes sum_j x_j exp(-2 pi i j m / n).
CVector fft(const CVector& in, int sign) {
  const int n = static_cast<int>(in.size());
  CVector out(n);
  CVector work = in;
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(work.data()),
                            reinterpret_cast<fftw_complex*>(out.data()), sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

double alternating(int j) { return (j % 2 == 0) ? 1.0 : -1.0; }

}  // namespace

std::vector<double> Grid::points() const {
  std::vector<double> ks(n);
  for (int j = 0; j < n; ++j) ks[j] = k(j);
  return ks;
}

Grid make_grid(int n, double k_max) {
  if (n < 64 || n % 2 != 0) {
    throw std::invalid_argument("grid size must be even and >= 64, got " + std::to_string(n));
  }
  if (!(k_max > 0.0) || !std::isfinite(k_max)) {
    throw std::invalid_argument("k_max must be positive");
  }
  return Grid{n, k_max, 2.0 * k_max / n};
}

Grid fast_grid() { return make_grid(128, 8.0); }
Grid default_grid() { return make_grid(512, 40.0); }

double Pulse::norm() const { return std::sqrt(norm2()); }

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw std::invalid_argument("grid mismatch");
}

Pulse zero_pulse(const Grid& g) { return Pulse{g, CVector::Zero(g.n), Domain::momentum}; }

Pulse from_function(const Grid& g, const std::function<cplx(double)>& f) {
  Pulse p = zero_pulse(g);
  for (int j = 0; j < g.n; ++j) p.amp[j] = f(g.k(j));
  return p;
}

Pulse lorentzian_pulse(const Grid& g, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("lorentzian width must be positive");
  return normalize(from_function(g, [sigma](double k) { return cplx(1.0 / (k * k + sigma * sigma)); }));
}

Pulse gaussian_pulse(const Grid& g, double width_param) {
  if (!(width_param > 0.0)) throw std::invalid_argument("gaussian width parameter must be positive");
  return normalize(from_function(g, [width_param](double k) { return cplx(std::exp(-width_param * k * k)); }));
}

Pulse exp_decay_pulse(const Grid& g, double kappa) {
  if (!(kappa > 0.0)) throw std::invalid_argument("decay rate must be positive");
  return normalize(from_function(g, [kappa](double k) {
    const cplx d = k + kI * (0.5 * kappa);
    return 1.0 / (d * d);
  }));
}

Pulse to_time_domain(const Pulse& p) {
  if (p.domain == Domain::time) return p;
  const Grid& g = p.grid;
  const int n = g.n;
  CVector x(n);
  for (int j = 0; j < n; ++j) x[j] = alternating(j) * p.amp[j];
  CVector y = fft(x, FFTW_FORWARD);
  const double scale = g.dk / std::sqrt(2.0 * kPi) * alternating(n / 2);
  Pulse out{g, CVector(n), Domain::time};
  for (int m = 0; m < n; ++m) out.amp[m] = scale * alternating(m) * y[m];
  return out;
}

Pulse to_momentum_domain(const Pulse& p) {
  if (p.domain == Domain::momentum) return p;
  const Grid& g = p.grid;
  const int n = g.n;
  CVector x(n);
  for (int m = 0; m < n; ++m) x[m] = alternating(m) * p.amp[m];
  CVector y = fft(x, FFTW_BACKWARD);
  const double scale = g.dt() / std::sqrt(2.0 * kPi) * alternating(n / 2);
  Pulse out{g, CVector(n), Domain::momentum};
  for (int j = 0; j < n; ++j) out.amp[j] = scale * alternating(j) * y[j];
  return out;
}

std::vector<cplx> sample_time(const Pulse& p, const std::vector<double>& times) {
  if (p.domain != Domain::momentum) throw std::invalid_argument("sample_time expects a momentum-domain pulse");
  const Grid& g = p.grid;
  const double pref = g.dk / std::sqrt(2.0 * kPi);
  std::vector<cplx> out(times.size());
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    // exp(-i k_j t) = exp(i k_max t) * exp(-i dk t)^j
    const cplx step = std::polar(1.0, -g.dk * t);
    cplx rot = std::polar(1.0, g.k_max * t);
    cplx acc = 0.0;
    for (int j = 0; j < g.n; ++j) {
      if (j % 64 == 0) rot = std::polar(1.0, -g.k(j) * t);
      acc += p.amp[j] * rot;
      rot *= step;
    }
    out[i] = pref * acc;
  }
  return out;
}

cplx inner(const Pulse& a, const Pulse& b) {
  require_same_grid(a.grid, b.grid);
  if (a.domain != b.domain) throw std::invalid_argument("inner product across domains");
  return a.amp.dot(b.amp) * a.weight();
}

Pulse normalize(const Pulse& p) {
  const double nrm = p.norm();
  if (!(nrm > 0.0) || !std::isfinite(nrm)) throw std::invalid_argument("cannot normalize a zero-norm pulse");
  Pulse out = p;
  out.amp /= nrm;
  return out;
}

Pulse negate_momenta(const Pulse& p) {
  Pulse out = p;
  for (int j = 0; j < p.grid.n; ++j) out.amp[j] = p.amp[p.grid.negated(j)];
  return out;
}

Pulse conj_reflect(const Pulse& p) {
  Pulse out = negate_momenta(p);
  out.amp = out.amp.conjugate();
  return out;
}

Pulse phase_ramp(const Pulse& p, double t_d) {
  Pulse out = p;
  for (int j = 0; j < p.grid.n; ++j) out.amp[j] *= std::polar(1.0, p.grid.k(j) * t_d);
  return out;
}

Pulse extend_window(const Pulse& p, int factor) {
  if (factor < 1) throw std::invalid_argument("window factor must be >= 1");
  if (p.domain != Domain::momentum) throw std::invalid_argument("extend_window expects a momentum-domain pulse");
  const Grid g = make_grid(p.grid.n * factor, p.grid.k_max * factor);
  Pulse out = zero_pulse(g);
  const int offset = (factor - 1) * p.grid.n / 2;
  for (int j = 0; j < p.grid.n; ++j) out.amp[j + offset] = p.amp[j];
  return out;
}

}  // namespace psort
