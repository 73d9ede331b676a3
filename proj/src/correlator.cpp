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

#include "prach/correlator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "prach/errors.hpp"
#include "prach/simd.hpp"

namespace prach {

ProfileKind parse_profile_kind(std::string_view name) {
  if (name == "pdp") return ProfileKind::pdp;
  if (name == "cdp") return ProfileKind::cdp;
  throw ConfigError("unknown input kind '" + std::string(name) + "' (valid: pdp, cdp)");
}

std::string_view profile_kind_name(ProfileKind kind) { return kind == ProfileKind::pdp ? "pdp" : "cdp"; }

std::string_view label_name(Label label) {
  switch (label) {
    case Label::absent: return "absent";
    case Label::present: return "present";
    default: return "unknown";
  }
}

Label parse_label(std::string_view name) {
  if (name == "absent") return Label::absent;
  if (name == "present") return Label::present;
  if (name == "unknown" || name.empty()) return Label::unknown;
  throw DataError("unknown label '" + std::string(name) + "'");
}

double CorrelationProfile::mean_power() const {
  double sum = 0.0;
  if (kind == ProfileKind::pdp) {
    for (double v : power) sum += v;
    return power.empty() ? 0.0 : sum / static_cast<double>(power.size());
  }
  for (const auto& v : complex) sum += std::norm(v);
  return complex.empty() ? 0.0 : sum / static_cast<double>(complex.size());
}

WindowLayout::WindowLayout(const PreambleConfig& cfg)
    : windows_(cfg.windows_per_root()), width_(cfg.cyclic_shift), length_(cfg.sequence_length) {}

std::optional<int> WindowLayout::window_of(int b) const {
  if (b < 0 || b >= windows_ * width_) return std::nullopt;
  return b / width_;
}

int WindowLayout::lag_of_bin(int b) const { return ((width_ - 1 - b) % length_ + length_) % length_; }

std::vector<int> WindowLayout::guard_bins() const {
  std::vector<int> out;
  for (int b = windows_ * width_; b < length_; ++b) out.push_back(b);
  return out;
}

Correlator::Correlator(const PreambleConfig& root_cfg)
    : Correlator(root_cfg, [&] {
        PreambleConfig base = root_cfg;
        base.preamble_index = 0;
        return dft(generate_base_sequence(base));
      }()) {}

Correlator::Correlator(const PreambleConfig& root_cfg, const ComplexSeq& base_spectrum)
    : cfg_(root_cfg), layout_(root_cfg) {
  const auto L = static_cast<std::size_t>(cfg_.sequence_length);
  if (base_spectrum.size() != L) throw ArgumentError("base spectrum length mismatch");
  const double unit = std::sqrt(static_cast<double>(L));
  inverse_reference_.resize(L);
  for (std::size_t k = 0; k < L; ++k) {
    if (std::abs(base_spectrum[k]) == 0.0) throw ArgumentError("base spectrum has a zero bin");
    inverse_reference_[k] = unit / base_spectrum[k];
  }
}

void Correlator::antenna_profile(const ComplexSeq& y, std::span<cplx> scratch,
                                 std::span<cplx> out) const {
  const std::size_t L = inverse_reference_.size();
  if (y.size() != L) throw ArgumentError("antenna length does not match the sequence length");
  for (std::size_t k = 0; k < L; ++k) {
    const double ar = y[k].real(), ai = y[k].imag();
    const double br = inverse_reference_[k].real(), bi = inverse_reference_[k].imag();
    scratch[k] = {ar * br - ai * bi, ar * bi + ai * br};
  }
  idft_into(scratch, out);
  // Reorder lags into profile bins: bin b <- lag (N_CS - 1 - b) mod L.
  std::rotate(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(layout_.width()) % L), out.end());
  std::reverse(out.begin(), out.end());
}

CorrelationProfile Correlator::cdp(const RxGrid& grid) const {
  if (grid.antennas.empty()) throw ArgumentError("grid has no antennas");
  const std::size_t L = inverse_reference_.size();
  std::vector<cplx> scratch(L), single(L);
  CorrelationProfile out;
  out.kind = ProfileKind::cdp;
  out.num_rx_combined = grid.num_rx();
  out.complex.assign(L, cplx{0.0, 0.0});
  for (const auto& antenna : grid.antennas) {
    antenna_profile(antenna, scratch, single);
    for (std::size_t b = 0; b < L; ++b) out.complex[b] += single[b];
  }
  const double scale = 1.0 / static_cast<double>(grid.antennas.size());
  for (auto& v : out.complex) v *= scale;
  return out;
}

CorrelationProfile Correlator::pdp(const RxGrid& grid) const {
  if (grid.antennas.empty()) throw ArgumentError("grid has no antennas");
  const std::size_t L = inverse_reference_.size();
  std::vector<cplx> scratch(L), single(L);
  CorrelationProfile out;
  out.kind = ProfileKind::pdp;
  out.num_rx_combined = grid.num_rx();
  out.power.assign(L, 0.0);
  const double scale = 1.0 / static_cast<double>(grid.antennas.size());
  const auto& k = simd::kernels();
  for (const auto& antenna : grid.antennas) {
    antenna_profile(antenna, scratch, single);
    k.accumulate_power(scale, single.data(), out.power.data(), L);
  }
  return out;
}

const Correlator& correlator_for(const PreambleConfig& root_cfg) {
  using Key = std::tuple<int, int, int, int, double>;
  static std::mutex mutex;
  static std::map<Key, std::unique_ptr<Correlator>> cache;
  const Key key{root_cfg.root, root_cfg.sequence_length, root_cfg.cyclic_shift, root_cfg.fft_size, root_cfg.scs_hz};
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[key];
  if (!slot) {
    PreambleConfig c = root_cfg;
    c.preamble_index = 0;
    slot = std::make_unique<Correlator>(c);
  }
  return *slot;
}

namespace {

PreambleConfig root_config_from_grid(const RxGrid& grid) {
  PreambleConfig c = grid.preamble;
  c.preamble_index = 0;
  return c;
}

}  // namespace

CorrelationProfile compute_cdp(const RxGrid& grid, const ComplexSeq& base_spectrum) {
  return Correlator(root_config_from_grid(grid), base_spectrum).cdp(grid);
}

CorrelationProfile compute_pdp(const RxGrid& grid, const ComplexSeq& base_spectrum) {
  return Correlator(root_config_from_grid(grid), base_spectrum).pdp(grid);
}

std::vector<WindowInstance> extract_windows(const CorrelationProfile& profile,
                                            const PreambleConfig& cfg, int base_index,
                                            const RootSet& roots) {
  const WindowLayout layout(cfg);
  if (static_cast<int>(profile.size()) != layout.length())
    throw ArgumentError("profile length does not match the sequence length");
  const double mean = profile.mean_power();
  std::vector<WindowInstance> out;
  out.reserve(static_cast<std::size_t>(layout.windows()));
  for (int v = 0; v < layout.windows(); ++v) {
    WindowInstance w;
    w.kind = profile.kind;
    w.base_index = base_index;
    w.window_index = v;
    w.rapid = roots.rapid(base_index, v, layout.windows());
    w.profile_mean = mean;
    w.num_rx = profile.num_rx_combined;
    const auto first = static_cast<std::size_t>(layout.first_bin(v));
    const auto width = static_cast<std::size_t>(layout.width());
    if (profile.kind == ProfileKind::pdp) {
      w.features.assign(profile.power.begin() + static_cast<std::ptrdiff_t>(first),
                        profile.power.begin() + static_cast<std::ptrdiff_t>(first + width));
    } else {
      w.features.reserve(2 * width);
      for (std::size_t j = 0; j < width; ++j) {
        w.features.push_back(profile.complex[first + j].real());
        w.features.push_back(profile.complex[first + j].imag());
      }
    }
    out.push_back(std::move(w));
  }
  return out;
}

std::vector<double> window_power(const WindowInstance& w) {
  if (w.kind == ProfileKind::pdp) return w.features;
  std::vector<double> out(w.features.size() / 2);
  for (std::size_t j = 0; j < out.size(); ++j) {
    const double re = w.features[2 * j], im = w.features[2 * j + 1];
    out[j] = re * re + im * im;
  }
  return out;
}

}  // namespace prach
