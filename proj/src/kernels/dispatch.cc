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

#include <cstdio>
#include <cstdlib>
#include <string>

#include "spanlink/kernels.h"

namespace spanlink::kernels {

#if defined(SPANLINK_HAVE_AVX2)
const KernelTable &Avx2KernelTable();
#endif

const KernelTable *Avx2Table() {
#if defined(SPANLINK_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2") &&
                                __builtin_cpu_supports("fma");
  if (supported) return &Avx2KernelTable();
#endif
  return nullptr;
}

const KernelTable *FindTable(std::string_view name) {
  if (name == "scalar") return &ScalarTable();
  if (name == "avx2") return Avx2Table();
  return nullptr;
}

const KernelTable &Active() {
  static const KernelTable &table = [] () -> const KernelTable & {
    if (const char *forced = std::getenv("SPANLINK_KERNELS")) {
      if (const KernelTable *t = FindTable(forced)) return *t;
      std::fprintf(stderr,
                   "spanlink: kernel table '%s' unavailable, using default\n",
                   forced);
    }
    if (const KernelTable *t = Avx2Table()) return *t;
    return ScalarTable();
  }();
  return table;
}

}  // namespace spanlink::kernels
