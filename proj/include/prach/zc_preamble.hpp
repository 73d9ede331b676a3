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

// Zadoff-Chu base sequences, cyclic shifts and the prime-length DFT used to
// build the frequency-domain PRACH signal.
//
// Transform convention: the forward DFT is unnormalized with a negative
// exponent, X(k) = sum_n x(n) exp(-j 2 pi n k / L); the inverse carries 1/L.
// Under this convention the time-domain rotation x(n) -> x((n + C) mod L)
// multiplies the spectrum by exp(+j 2 pi k C / L).

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace prach {

using cplx = std::complex<double>;

struct PreambleConfig {
  int root = 1;             // u, coprime with sequence_length
  int preamble_index = 0;   // v, 0 <= v < sequence_length / cyclic_shift
  int sequence_length = 139;
  int cyclic_shift = 13;    // N_CS, also the correlation window width
  int fft_size = 4096;      // N
  double scs_hz = 30000.0;

  // Throws ConfigError on any violated invariant.
  void validate() const;

  int windows_per_root() const { return sequence_length / cyclic_shift; }
  int shift_samples() const { return preamble_index * cyclic_shift; }
  // Time samples at rate N * scs per correlation bin (4096/139 = 29.47).
  double samples_per_bin() const {
    return static_cast<double>(fft_size) / static_cast<double>(sequence_length);
  }
};

enum class Domain { time, freq };

struct ComplexSeq {
  std::vector<cplx> values;
  Domain domain = Domain::time;

  std::size_t size() const { return values.size(); }
  const cplx& operator[](std::size_t i) const { return values[i]; }
  cplx& operator[](std::size_t i) { return values[i]; }
};

// x_u(n) = exp(-j pi u n (n+1) / L), n = 0..L-1.
ComplexSeq generate_base_sequence(const PreambleConfig& cfg);

// out[n] = x[(n + v * N_CS) mod L].
ComplexSeq apply_cyclic_shift(const ComplexSeq& x, const PreambleConfig& cfg);

// Table-driven L-point transforms over the active SIMD kernels.
ComplexSeq dft(const ComplexSeq& x);
ComplexSeq idft(const ComplexSeq& spectrum);
// Same as dft/idft, writing into caller storage of equal length.
void dft_into(std::span<const cplx> x, std::span<cplx> out);
void idft_into(std::span<const cplx> spectrum, std::span<cplx> out);

// Direct matrix-free summation with per-term exponentials. Reference for the
// table-driven path.
ComplexSeq dft_direct(const ComplexSeq& x);

// dft(apply_cyclic_shift(generate_base_sequence(cfg), cfg)).
ComplexSeq preamble_freq(const PreambleConfig& cfg);
// X_u(k) * exp(+j 2 pi k C_v / L): the rotate-spectrum route to the same signal.
ComplexSeq preamble_freq_by_rotation(const PreambleConfig& cfg);

// The ordered list of root indices hosting the 64 RAPIDs.
struct RootSet {
  std::vector<int> roots{1, 2, 3, 4, 5, 6, 7};
  int max_rapids = 64;

  // Throws ConfigError when a root is invalid for the given template.
  void validate(const PreambleConfig& base) const;
  // RAPID = windows_per_root * base_index + v, or -1 when out of range.
  int rapid(int base_index, int window_index, int windows_per_root) const;
  // Config for a given RAPID, sharing N, L_RA, N_CS and SCS with `base`.
  PreambleConfig config_for_rapid(int rapid, const PreambleConfig& base) const;
};

bool is_prime(int n);

}  // namespace prach
