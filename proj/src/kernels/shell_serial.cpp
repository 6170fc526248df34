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

#include "psort/kernels.hpp"

namespace psort::kernels::serial {

using cplx = std::complex<double>;

// sum over each anti-diagonal m = i + j of weight_i * in(i, j)
std::vector<cplx> shell_sums(const Eigen::MatrixXcd& in, const Eigen::VectorXcd& weight) {
  const Eigen::Index n = in.rows();
  std::vector<cplx> sums(2 * n - 1, cplx(0.0));
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) sums[i + j] += weight[i] * in(i, j);
  }
  return sums;
}

void emitter_forward(const EmitterCoeffs& c, const Eigen::MatrixXcd& in, Eigen::MatrixXcd& out) {
  const Eigen::Index n = in.rows();
  std::vector<cplx> shell = shell_sums(in, c.s);
  for (auto& v : shell) v *= c.bound * c.dk;
  out.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      out(i, j) = c.t[i] * c.t[j] * in(i, j) + c.s[i] * c.s[j] * shell[i + j];
    }
  }
}

void emitter_adjoint(const EmitterCoeffs& c, const Eigen::MatrixXcd& in, Eigen::MatrixXcd& out) {
  const Eigen::Index n = in.rows();
  std::vector<cplx> shell(2 * n - 1, cplx(0.0));
  for (Eigen::Index j = 0; j < n; ++j) {
    const cplx sj = std::conj(c.s[j]);
    for (Eigen::Index i = 0; i < n; ++i) shell[i + j] += std::conj(c.s[i]) * sj * in(i, j);
  }
  const cplx scale = std::conj(c.bound) * c.dk;
  for (auto& v : shell) v *= scale;
  out.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      out(i, j) = std::conj(c.t[i] * c.t[j]) * in(i, j) +
                  0.5 * (std::conj(c.s[i]) + std::conj(c.s[j])) * shell[i + j];
    }
  }
}

}  // namespace psort::kernels::serial
