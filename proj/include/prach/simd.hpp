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

#pragma once

// Data-parallel inner loops used by the transform, correlator and network
// code. Every kernel has a scalar reference implementation and an AVX2+FMA
// variant; the active table is chosen once at startup from the CPU features
// and can be pinned with PRACH_SIMD=scalar|avx2 or select_isa().

#include <complex>
#include <cstddef>
#include <string_view>

namespace prach::simd {

using cplx = std::complex<double>;

enum class Isa { scalar, avx2 };

struct KernelTable {
  Isa isa;
  // sum_i a[i] * b[i]
  cplx (*cdot)(const cplx* a, const cplx* b, std::size_t n);
  // sum_i a[i] * conj(b[i])
  cplx (*cdot_conj)(const cplx* a, const cplx* b, std::size_t n);
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // y[i] += scale * |x[i]|^2
  void (*accumulate_power)(double scale, const cplx* x, double* y, std::size_t n);
};

const KernelTable& scalar_kernels();
// Null when the binary was built without AVX2 support.
const KernelTable* avx2_kernels();

bool cpu_has_avx2();

// Active table. First call resolves PRACH_SIMD / CPU detection.
const KernelTable& kernels();

// Forces a table; throws std::invalid_argument if the ISA is unavailable.
void select_isa(Isa isa);

std::string_view isa_name(Isa isa);

}  // namespace prach::simd
