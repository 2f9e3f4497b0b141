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

#include <cmath>

#include "spanlink/kernels.h"

namespace spanlink::kernels {
namespace {

double DotScalar(const double *x, const double *y, size_t n) {
  double s = 0.0;
  for (size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

void AxpyScalar(double a, const double *x, double *y, size_t n) {
  for (size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void GemvScalar(const double *a, size_t rows, size_t cols, const double *x,
                double *y) {
  for (size_t r = 0; r < rows; ++r) y[r] = DotScalar(a + r * cols, x, cols);
}

void GemvTAccScalar(const double *a, size_t rows, size_t cols,
                    const double *x, double *y) {
  for (size_t r = 0; r < rows; ++r) {
    if (x[r] != 0.0) AxpyScalar(x[r], a + r * cols, y, cols);
  }
}

void GerScalar(double alpha, const double *x, size_t rows, const double *y,
               size_t cols, double *a) {
  for (size_t r = 0; r < rows; ++r) {
    double s = alpha * x[r];
    if (s != 0.0) AxpyScalar(s, y, a + r * cols, cols);
  }
}

void AdamScalar(double *param, const double *grad, double *m, double *v,
                size_t n, const AdamStep &step) {
  const double b1 = step.beta1, b2 = step.beta2;
  for (size_t i = 0; i < n; ++i) {
    double g = grad[i];
    m[i] = b1 * m[i] + (1.0 - b1) * g;
    v[i] = b2 * v[i] + (1.0 - b2) * (g * g);
    double mhat = m[i] / step.bias_correction1;
    double vhat = v[i] / step.bias_correction2;
    param[i] -= step.learning_rate * mhat / (std::sqrt(vhat) + step.epsilon);
  }
}

}  // namespace

const KernelTable &ScalarTable() {
  static const KernelTable table{"scalar",   DotScalar,      AxpyScalar,
                                 GemvScalar, GemvTAccScalar, GerScalar,
                                 AdamScalar};
  return table;
}

}  // namespace spanlink::kernels
