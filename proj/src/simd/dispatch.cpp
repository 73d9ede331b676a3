// SPDX-License-Identifier: Apache-2.0
//
// prach-hybrid: link-level simulator and hybrid receiver for 5G NR PRACH
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "prach/simd.hpp"

namespace prach::simd {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

const KernelTable* resolve_default() {
  const char* env = std::getenv("PRACH_SIMD");
  if (env != nullptr) {
    const std::string want(env);
    if (want == "scalar") return &scalar_kernels();
    if (want == "avx2" && avx2_kernels() != nullptr && cpu_has_avx2()) return avx2_kernels();
  }
  if (avx2_kernels() != nullptr && cpu_has_avx2()) return avx2_kernels();
  return &scalar_kernels();
}

std::atomic<const KernelTable*>& active() {
  static std::atomic<const KernelTable*> table{resolve_default()};
  return table;
}

}  // namespace

const KernelTable& kernels() { return *active().load(std::memory_order_acquire); }

void select_isa(Isa isa) {
  if (isa == Isa::scalar) {
    active().store(&scalar_kernels(), std::memory_order_release);
    return;
  }
  if (avx2_kernels() == nullptr || !cpu_has_avx2())
    throw std::invalid_argument("AVX2 kernels are not available on this machine");
  active().store(avx2_kernels(), std::memory_order_release);
}

std::string_view isa_name(Isa isa) { return isa == Isa::scalar ? "scalar" : "avx2"; }

}  // namespace prach::simd
