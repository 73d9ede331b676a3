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

#include "prach/zc_preamble.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>
#include <string>

#include "prach/errors.hpp"
#include "prach/simd.hpp"

namespace prach {

bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

void PreambleConfig::validate() const {
  if (sequence_length != 139 && sequence_length != 839)
    throw ConfigError("sequence length must be 139 or 839, got " + std::to_string(sequence_length));
  if (root < 1 || root >= sequence_length || std::gcd(root, sequence_length) != 1)
    throw ConfigError("root index " + std::to_string(root) + " is not coprime with " +
                      std::to_string(sequence_length));
  if (cyclic_shift < 1 || cyclic_shift > sequence_length)
    throw ConfigError("cyclic shift step out of range: " + std::to_string(cyclic_shift));
  if (preamble_index < 0 || preamble_index >= windows_per_root())
    throw ConfigError("preamble index " + std::to_string(preamble_index) + " outside 0.." +
                      std::to_string(windows_per_root() - 1));
  if (fft_size < sequence_length)
    throw ConfigError("FFT size smaller than the sequence length");
  if (!(scs_hz > 0.0)) throw ConfigError("subcarrier spacing must be positive");
}

namespace {

// Row k holds exp(-j 2 pi ((n k) mod L) / L) for n = 0..L-1. Reducing the
// index before the exponential keeps every entry within one rounding of exact.
class DftPlan {
 public:
  explicit DftPlan(std::size_t length) : length_(length), matrix_(length * length) {
    std::vector<cplx> twiddle(length);
    for (std::size_t m = 0; m < length; ++m) {
      const double angle = -2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(length);
      twiddle[m] = {std::cos(angle), std::sin(angle)};
    }
    for (std::size_t k = 0; k < length; ++k)
      for (std::size_t n = 0; n < length; ++n) matrix_[k * length + n] = twiddle[(n * k) % length];
  }

  std::size_t length() const { return length_; }
  const cplx* row(std::size_t k) const { return matrix_.data() + k * length_; }

 private:
  std::size_t length_;
  std::vector<cplx> matrix_;
};

const DftPlan& plan_for(std::size_t length) {
  static std::mutex mutex;
  static std::map<std::size_t, std::unique_ptr<DftPlan>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[length];
  if (!slot) slot = std::make_unique<DftPlan>(length);
  return *slot;
}

}  // namespace

ComplexSeq generate_base_sequence(const PreambleConfig& cfg) {
  cfg.validate();
  const auto L = static_cast<std::int64_t>(cfg.sequence_length);
  ComplexSeq out{std::vector<cplx>(static_cast<std::size_t>(L)), Domain::time};
  for (std::int64_t n = 0; n < L; ++n) {
    // u n (n+1) is reduced mod 2L so the phase argument stays small.
    const std::int64_t m = (static_cast<std::int64_t>(cfg.root) * n * (n + 1)) % (2 * L);
    const double angle = -std::numbers::pi * static_cast<double>(m) / static_cast<double>(L);
    out.values[static_cast<std::size_t>(n)] = {std::cos(angle), std::sin(angle)};
  }
  return out;
}

ComplexSeq apply_cyclic_shift(const ComplexSeq& x, const PreambleConfig& cfg) {
  const auto L = static_cast<std::size_t>(cfg.sequence_length);
  if (x.size() != L) throw ArgumentError("cyclic shift: sequence length mismatch");
  const auto shift = static_cast<std::size_t>(cfg.shift_samples()) % L;
  ComplexSeq out{std::vector<cplx>(L), x.domain};
  for (std::size_t n = 0; n < L; ++n) out.values[n] = x.values[(n + shift) % L];
  return out;
}

void dft_into(std::span<const cplx> x, std::span<cplx> out) {
  if (x.empty() || out.size() != x.size()) throw ArgumentError("dft: length mismatch");
  const DftPlan& plan = plan_for(x.size());
  const auto& k = simd::kernels();
  for (std::size_t bin = 0; bin < x.size(); ++bin) out[bin] = k.cdot(plan.row(bin), x.data(), x.size());
}

void idft_into(std::span<const cplx> spectrum, std::span<cplx> out) {
  if (spectrum.empty() || out.size() != spectrum.size()) throw ArgumentError("idft: length mismatch");
  const DftPlan& plan = plan_for(spectrum.size());
  const auto& k = simd::kernels();
  const double scale = 1.0 / static_cast<double>(spectrum.size());
  for (std::size_t n = 0; n < spectrum.size(); ++n)
    out[n] = k.cdot_conj(spectrum.data(), plan.row(n), spectrum.size()) * scale;
}

ComplexSeq dft(const ComplexSeq& x) {
  ComplexSeq out{std::vector<cplx>(x.size()), Domain::freq};
  dft_into(x.values, out.values);
  return out;
}

ComplexSeq idft(const ComplexSeq& spectrum) {
  ComplexSeq out{std::vector<cplx>(spectrum.size()), Domain::time};
  idft_into(spectrum.values, out.values);
  return out;
}

ComplexSeq dft_direct(const ComplexSeq& x) {
  if (x.size() == 0) throw ArgumentError("dft: empty input");
  const std::size_t L = x.size();
  ComplexSeq out{std::vector<cplx>(L), Domain::freq};
  for (std::size_t k = 0; k < L; ++k) {
    cplx acc{0.0, 0.0};
    for (std::size_t n = 0; n < L; ++n) {
      const double angle =
          -2.0 * std::numbers::pi * static_cast<double>((n * k) % L) / static_cast<double>(L);
      acc += x.values[n] * std::polar(1.0, angle);
    }
    out.values[k] = acc;
  }
  return out;
}

ComplexSeq preamble_freq(const PreambleConfig& cfg) {
  return dft(apply_cyclic_shift(generate_base_sequence(cfg), cfg));
}

ComplexSeq preamble_freq_by_rotation(const PreambleConfig& cfg) {
  PreambleConfig base = cfg;
  base.preamble_index = 0;
  ComplexSeq spectrum = dft(generate_base_sequence(base));
  const auto L = static_cast<std::size_t>(cfg.sequence_length);
  const auto shift = static_cast<std::size_t>(cfg.shift_samples());
  for (std::size_t k = 0; k < L; ++k) {
    const double angle =
        2.0 * std::numbers::pi * static_cast<double>((k * shift) % L) / static_cast<double>(L);
    spectrum.values[k] *= std::polar(1.0, angle);
  }
  return spectrum;
}

void RootSet::validate(const PreambleConfig& base) const {
  if (roots.empty()) throw ConfigError("root set is empty");
  const int per_root = base.windows_per_root();
  if (static_cast<int>(roots.size()) * per_root < max_rapids)
    throw ConfigError("root set too small to host " + std::to_string(max_rapids) + " preambles");
  for (int u : roots) {
    PreambleConfig c = base;
    c.root = u;
    c.preamble_index = 0;
    c.validate();
  }
}

int RootSet::rapid(int base_index, int window_index, int windows_per_root) const {
  if (base_index < 0 || base_index >= static_cast<int>(roots.size())) return -1;
  if (window_index < 0 || window_index >= windows_per_root) return -1;
  const int r = windows_per_root * base_index + window_index;
  return r < max_rapids ? r : -1;
}

PreambleConfig RootSet::config_for_rapid(int rapid_id, const PreambleConfig& base) const {
  const int per_root = base.windows_per_root();
  if (rapid_id < 0 || rapid_id >= max_rapids || rapid_id / per_root >= static_cast<int>(roots.size()))
    throw ConfigError("RAPID " + std::to_string(rapid_id) + " is not valid");
  PreambleConfig c = base;
  c.root = roots[static_cast<std::size_t>(rapid_id / per_root)];
  c.preamble_index = rapid_id % per_root;
  c.validate();
  return c;
}

}  // namespace prach
