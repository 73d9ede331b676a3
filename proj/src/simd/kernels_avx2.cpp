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

#include "prach/simd.hpp"

// Built with -mavx2 -mfma; nothing here may run before the dispatcher has
// confirmed CPU support.
#if defined(__AVX2__) && defined(__FMA__)
#define PRACH_HAVE_AVX2_TU 1
#include <immintrin.h>
#else
#define PRACH_HAVE_AVX2_TU 0
#endif

namespace prach::simd {

#if PRACH_HAVE_AVX2_TU

namespace {

// std::complex<double> is layout-compatible with double[2]; one __m256d holds
// two interleaved complex samples.

inline __m256d load2(const cplx* p) {
  return _mm256_loadu_pd(reinterpret_cast<const double*>(p));
}

inline cplx horizontal_cplx(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  alignas(16) double out[2];
  _mm_store_pd(out, s);
  return {out[0], out[1]};
}

inline double horizontal_sum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  __m128d s = _mm_add_pd(lo, hi);
  s = _mm_add_sd(s, _mm_unpackhi_pd(s, s));
  return _mm_cvtsd_f64(s);
}

// acc_re collects [ar*br, ai*br], acc_im collects [ai*bi, ar*bi]; the sign
// pattern is applied once after the loop.
cplx cdot_avx2(const cplx* a, const cplx* b,
                                                   std::size_t n) {
  __m256d acc_re0 = _mm256_setzero_pd(), acc_im0 = _mm256_setzero_pd();
  __m256d acc_re1 = _mm256_setzero_pd(), acc_im1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d va0 = load2(a + i), vb0 = load2(b + i);
    const __m256d va1 = load2(a + i + 2), vb1 = load2(b + i + 2);
    acc_re0 = _mm256_fmadd_pd(va0, _mm256_movedup_pd(vb0), acc_re0);
    acc_im0 = _mm256_fmadd_pd(_mm256_permute_pd(va0, 0b0101), _mm256_permute_pd(vb0, 0b1111), acc_im0);
    acc_re1 = _mm256_fmadd_pd(va1, _mm256_movedup_pd(vb1), acc_re1);
    acc_im1 = _mm256_fmadd_pd(_mm256_permute_pd(va1, 0b0101), _mm256_permute_pd(vb1, 0b1111), acc_im1);
  }
  for (; i + 2 <= n; i += 2) {
    const __m256d va = load2(a + i), vb = load2(b + i);
    acc_re0 = _mm256_fmadd_pd(va, _mm256_movedup_pd(vb), acc_re0);
    acc_im0 = _mm256_fmadd_pd(_mm256_permute_pd(va, 0b0101), _mm256_permute_pd(vb, 0b1111), acc_im0);
  }
  const __m256d acc_re = _mm256_add_pd(acc_re0, acc_re1);
  const __m256d acc_im = _mm256_add_pd(acc_im0, acc_im1);
  cplx sum = horizontal_cplx(_mm256_addsub_pd(acc_re, acc_im));
  for (; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    sum += cplx(ar * br - ai * bi, ar * bi + ai * br);
  }
  return sum;
}

cplx cdot_conj_avx2(const cplx* a, const cplx* b,
                                                        std::size_t n) {
  __m256d acc_re0 = _mm256_setzero_pd(), acc_im0 = _mm256_setzero_pd();
  __m256d acc_re1 = _mm256_setzero_pd(), acc_im1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d va0 = load2(a + i), vb0 = load2(b + i);
    const __m256d va1 = load2(a + i + 2), vb1 = load2(b + i + 2);
    acc_re0 = _mm256_fmadd_pd(va0, _mm256_movedup_pd(vb0), acc_re0);
    acc_im0 = _mm256_fmadd_pd(_mm256_permute_pd(va0, 0b0101), _mm256_permute_pd(vb0, 0b1111), acc_im0);
    acc_re1 = _mm256_fmadd_pd(va1, _mm256_movedup_pd(vb1), acc_re1);
    acc_im1 = _mm256_fmadd_pd(_mm256_permute_pd(va1, 0b0101), _mm256_permute_pd(vb1, 0b1111), acc_im1);
  }
  for (; i + 2 <= n; i += 2) {
    const __m256d va = load2(a + i), vb = load2(b + i);
    acc_re0 = _mm256_fmadd_pd(va, _mm256_movedup_pd(vb), acc_re0);
    acc_im0 = _mm256_fmadd_pd(_mm256_permute_pd(va, 0b0101), _mm256_permute_pd(vb, 0b1111), acc_im0);
  }
  const __m256d acc_re = _mm256_add_pd(acc_re0, acc_re1);
  const __m256d acc_im = _mm256_add_pd(acc_im0, acc_im1);
  // even lanes: re = ar*br + ai*bi, odd lanes: im = ai*br - ar*bi
  const __m256d neg = _mm256_sub_pd(_mm256_setzero_pd(), acc_im);
  cplx sum = horizontal_cplx(_mm256_addsub_pd(acc_re, neg));
  for (; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    sum += cplx(ar * br + ai * bi, ai * br - ar * bi);
  }
  return sum;
}

double dot_avx2(const double* a, const double* b,
                                                    std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  double s = horizontal_sum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_avx2(double alpha, const double* x, double* y,
                                                   std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void accumulate_power_avx2(double scale, const cplx* x,
                                                               double* y, std::size_t n) {
  const __m256d vs = _mm256_set1_pd(scale);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v0 = load2(x + i);
    const __m256d v1 = load2(x + i + 2);
    // hadd of squares gives |x0|^2 |x2|^2 |x1|^2 |x3|^2 after the lane split
    const __m256d h = _mm256_hadd_pd(_mm256_mul_pd(v0, v0), _mm256_mul_pd(v1, v1));
    const __m256d p = _mm256_permute4x64_pd(h, 0b11011000);
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(vs, p, _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) {
    const double re = x[i].real(), im = x[i].imag();
    y[i] += scale * (re * re + im * im);
  }
}

}  // namespace

const KernelTable* avx2_kernels() {
  static const KernelTable table{Isa::avx2, cdot_avx2, cdot_conj_avx2,
                                 dot_avx2,  axpy_avx2, accumulate_power_avx2};
  return &table;
}

#else

const KernelTable* avx2_kernels() { return nullptr; }

#endif

}  // namespace prach::simd
