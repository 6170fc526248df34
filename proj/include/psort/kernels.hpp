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
#include <vector>

#include <Eigen/Dense>

namespace psort::kernels {

/// Per-grid-point coefficients of one emitter.
///   s_j = 1/(k_j - delta + i*Gamma_tot/2)   (resonance factor)
///   t_j = single-photon transmission
///   bound = constant of the correlated (energy-shell) term
struct EmitterCoeffs {
  Eigen::VectorXcd s;
  Eigen::VectorXcd t;
  std::complex<double> bound;
  double dk = 0.0;
};

// Forward map on a symmetric n x n amplitude:
//   out(i,j) = t_i t_j in(i,j) + bound * s_i s_j * I[i+j]
//   I[m]     = dk * sum_p s_p in(p, m-p)
//
// Adjoint map (exact discrete adjoint on the symmetric subspace, dk^2 weights):
//   out(i,j) = conj(t_i t_j) in(i,j) + (conj(s_i)+conj(s_j))/2 * J[i+j]
//   J[m]     = conj(bound) * dk * sum_p conj(s_p s_{m-p}) in(p, m-p)
//
// Both have O(n^2) cost and never form the n^2 x n^2 kernel.

namespace serial {
void emitter_forward(const EmitterCoeffs& c, const Eigen::MatrixXcd& in, Eigen::MatrixXcd& out);
void emitter_adjoint(const EmitterCoeffs& c, const Eigen::MatrixXcd& in, Eigen::MatrixXcd& out);
std::vector<std::complex<double>> shell_sums(const Eigen::MatrixXcd& in, const Eigen::VectorXcd& weight);
}  // namespace serial

namespace omp {
void emitter_forward(const EmitterCoeffs& c, const Eigen::MatrixXcd& in, Eigen::MatrixXcd& out);
void emitter_adjoint(const EmitterCoeffs& c, const Eigen::MatrixXcd& in, Eigen::MatrixXcd& out);
std::vector<std::complex<double>> shell_sums(const Eigen::MatrixXcd& in, const Eigen::VectorXcd& weight);
}  // namespace omp

/// Number of threads the OpenMP kernels will use (1 when built without OpenMP).
int max_threads();

}  // namespace psort::kernels
