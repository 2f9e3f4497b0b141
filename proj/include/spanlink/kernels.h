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

#ifndef SPANLINK_KERNELS_H_
#define SPANLINK_KERNELS_H_

// Dense double-precision kernels behind the span scorer and its optimizer.
//
// Every kernel has a portable scalar reference implementation. On x86-64 an
// AVX2+FMA variant is compiled into a separate translation unit and selected
// at runtime when the CPU supports it. The environment variable
// SPANLINK_KERNELS=scalar|avx2 forces a choice. Variants agree to rounding
// error, not bitwise: results are reproducible for a fixed table only.

#include <cstddef>
#include <span>
#include <string_view>

namespace spanlink::kernels {

struct AdamStep {
  double learning_rate;
  double beta1;
  double beta2;
  double epsilon;
  // 1 - beta^t for the current step t.
  double bias_correction1;
  double bias_correction2;
};

struct KernelTable {
  const char *name;
  // sum_i x[i] * y[i]
  double (*dot)(const double *x, const double *y, size_t n);
  // y += a * x
  void (*axpy)(double a, const double *x, double *y, size_t n);
  // y = A x, A row-major rows x cols.
  void (*gemv)(const double *a, size_t rows, size_t cols, const double *x,
               double *y);
  // y += A^T x
  void (*gemv_t_acc)(const double *a, size_t rows, size_t cols,
                     const double *x, double *y);
  // A += alpha * x y^T
  void (*ger)(double alpha, const double *x, size_t rows, const double *y,
              size_t cols, double *a);
  // In-place Adam update of n parameters.
  void (*adam)(double *param, const double *grad, double *m, double *v,
               size_t n, const AdamStep &step);
};

const KernelTable &ScalarTable();

// nullptr when the variant was not compiled in or the CPU lacks support.
const KernelTable *Avx2Table();

// Table chosen once per process.
const KernelTable &Active();

// Looks up a table by name ("scalar", "avx2"); nullptr if unavailable.
const KernelTable *FindTable(std::string_view name);

inline double Dot(std::span<const double> x, std::span<const double> y) {
  return Active().dot(x.data(), y.data(), x.size());
}

inline void Axpy(double a, std::span<const double> x, std::span<double> y) {
  Active().axpy(a, x.data(), y.data(), x.size());
}

}  // namespace spanlink::kernels

#endif  // SPANLINK_KERNELS_H_
