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

#ifdef _OPENMP
#include <omp.h>
#endif

namespace psort::kernels {

using cplx = std::complex<double>;

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace omp {

namespace {

// Per-thread partial shell sums over a block of columns.
template <class Weight>
std::vector<cplx> reduce_shells(const Eigen::MatrixXcd& in, Weight&& w) {
  const Eigen::Index n = in.rows();
  const Eigen::Index nshell = 2 * n - 1;
  const int nthreads = max_threads();
  // Partials are reduced in thread order so results are reproducible run to run.
  std::vector<std::vector<cplx>> partial(nthreads);
#pragma omp parallel num_threads(nthreads)
  {
#ifdef _OPENMP
    const int tid = omp_get_thread_num();
#else
    const int tid = 0;
#endif
    std::vector<cplx> local(nshell, cplx(0.0));
#pragma omp for schedule(static)
    for (Eigen::Index j = 0; j < n; ++j) {
      const cplx* col = in.data() + j * n;
      cplx* dst = local.data() + j;
      for (Eigen::Index i = 0; i < n; ++i) dst[i] += w(i, j) * col[i];
    }
    partial[tid] = std::move(local);
  }
  std::vector<cplx> sums(nshell, cplx(0.0));
  for (const auto& part : partial) {
    if (part.empty()) continue;
    for (Eigen::Index m = 0; m < nshell; ++m) sums[m] += part[m];
  }
  return sums;
}

}  // namespace

std::vector<cplx> shell_sums(const Eigen::MatrixXcd& in, const Eigen::VectorXcd& weight) {
  return reduce_shells(in, [&](Eigen::Index i, Eigen::Index) { return weight[i]; });
}

void emitter_forward(const EmitterCoeffs& c, const Eigen::MatrixXcd& in, Eigen::MatrixXcd& out) {
  const Eigen::Index n = in.rows();
  std::vector<cplx> shell = shell_sums(in, c.s);
  const cplx scale = c.bound * c.dk;
  for (auto& v : shell) v *= scale;
  out.resize(n, n);
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < n; ++j) {
    const cplx tj = c.t[j];
    const cplx sj = c.s[j];
    const cplx* src = in.data() + j * n;
    cplx* dst = out.data() + j * n;
    const cplx* sh = shell.data() + j;
    for (Eigen::Index i = 0; i < n; ++i) dst[i] = c.t[i] * tj * src[i] + c.s[i] * sj * sh[i];
  }
}

void emitter_adjoint(const EmitterCoeffs& c, const Eigen::MatrixXcd& in, Eigen::MatrixXcd& out) {
  const Eigen::Index n = in.rows();
  const Eigen::VectorXcd sc = c.s.conjugate();
  std::vector<cplx> shell = reduce_shells(in, [&](Eigen::Index i, Eigen::Index j) { return sc[i] * sc[j]; });
  const cplx scale = std::conj(c.bound) * c.dk;
  for (auto& v : shell) v *= scale;
  const Eigen::VectorXcd tc = c.t.conjugate();
  out.resize(n, n);
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < n; ++j) {
    const cplx* src = in.data() + j * n;
    cplx* dst = out.data() + j * n;
    const cplx* sh = shell.data() + j;
    for (Eigen::Index i = 0; i < n; ++i) {
      dst[i] = tc[i] * tc[j] * src[i] + 0.5 * (sc[i] + sc[j]) * sh[i];
    }
  }
}

}  // namespace omp
}  // namespace psort::kernels
