// Copyright 2026 The Spanlink Authors.
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

// Compiled with -mavx2 -mfma. Nothing in here may run before Avx2Table()
// has confirmed CPU support.

#include <immintrin.h>

#include "spanlink/kernels.h"

namespace spanlink::kernels {
namespace {

inline double HorizontalSum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d shuf = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

double DotAvx2(const double *x, const double *y, size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i),
                           acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4),
                           _mm256_loadu_pd(y + i + 4), acc1);
  }
  if (i + 4 <= n) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i),
                           acc0);
    i += 4;
  }
  double s = HorizontalSum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void AxpyAvx2(double a, const double *x, double *y, size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void GemvAvx2(const double *a, size_t rows, size_t cols, const double *x,
              double *y) {
  for (size_t r = 0; r < rows; ++r) y[r] = DotAvx2(a + r * cols, x, cols);
}

void GemvTAccAvx2(const double *a, size_t rows, size_t cols, const double *x,
                  double *y) {
  for (size_t r = 0; r < rows; ++r) {
    if (x[r] != 0.0) AxpyAvx2(x[r], a + r * cols, y, cols);
  }
}

void GerAvx2(double alpha, const double *x, size_t rows, const double *y,
             size_t cols, double *a) {
  for (size_t r = 0; r < rows; ++r) {
    double s = alpha * x[r];
    if (s != 0.0) AxpyAvx2(s, y, a + r * cols, cols);
  }
}

void AdamAvx2(double *param, const double *grad, double *m, double *v,
              size_t n, const AdamStep &step) {
  const __m256d b1 = _mm256_set1_pd(step.beta1);
  const __m256d b2 = _mm256_set1_pd(step.beta2);
  const __m256d one_b1 = _mm256_set1_pd(1.0 - step.beta1);
  const __m256d one_b2 = _mm256_set1_pd(1.0 - step.beta2);
  const __m256d bc1 = _mm256_set1_pd(step.bias_correction1);
  const __m256d bc2 = _mm256_set1_pd(step.bias_correction2);
  const __m256d lr = _mm256_set1_pd(step.learning_rate);
  const __m256d eps = _mm256_set1_pd(step.epsilon);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d g = _mm256_loadu_pd(grad + i);
    __m256d vm = _mm256_add_pd(_mm256_mul_pd(b1, _mm256_loadu_pd(m + i)),
                               _mm256_mul_pd(one_b1, g));
    __m256d vv = _mm256_add_pd(_mm256_mul_pd(b2, _mm256_loadu_pd(v + i)),
                               _mm256_mul_pd(one_b2, _mm256_mul_pd(g, g)));
    _mm256_storeu_pd(m + i, vm);
    _mm256_storeu_pd(v + i, vv);
    __m256d mhat = _mm256_div_pd(vm, bc1);
    __m256d vhat = _mm256_div_pd(vv, bc2);
    __m256d denom = _mm256_add_pd(_mm256_sqrt_pd(vhat), eps);
    __m256d upd = _mm256_div_pd(_mm256_mul_pd(lr, mhat), denom);
    _mm256_storeu_pd(param + i, _mm256_sub_pd(_mm256_loadu_pd(param + i), upd));
  }
  if (i < n) {
    ScalarTable().adam(param + i, grad + i, m + i, v + i, n - i, step);
  }
}

}  // namespace

const KernelTable &Avx2KernelTable() {
  static const KernelTable table{"avx2",   DotAvx2,      AxpyAvx2, GemvAvx2,
                                 GemvTAccAvx2, GerAvx2, AdamAvx2};
  return table;
}

}  // namespace spanlink::kernels
