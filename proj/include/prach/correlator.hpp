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

// Correlation against a root's base spectrum, equal-gain combining across
// antennas and partitioning of the delay profile into preamble windows.
//
// Profile orientation: profile bin b holds correlation lag (N_CS - 1 - b)
// mod L of the inverse transform. With this layout a zero-delay preamble v
// peaks at bin N_CS * v + N_CS - 1, the rightmost bin of window v, and each
// further N / L time samples of delay moves the peak one bin to the left.
// Bins N_CS * (L / N_CS) .. L - 1 form a guard region outside every window.

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "prach/channel.hpp"
#include "prach/zc_preamble.hpp"

namespace prach {

enum class ProfileKind { cdp, pdp };

ProfileKind parse_profile_kind(std::string_view name);
std::string_view profile_kind_name(ProfileKind kind);

struct CorrelationProfile {
  ProfileKind kind = ProfileKind::pdp;
  std::vector<double> power;  // PDP values, filled for kind == pdp
  std::vector<cplx> complex;  // CDP values, filled for kind == cdp
  int num_rx_combined = 0;

  std::size_t size() const { return kind == ProfileKind::pdp ? power.size() : complex.size(); }
  // Mean of PDP (pdp) or of |CDP|^2 (cdp) over the whole profile.
  double mean_power() const;
};

// Window geometry for one preamble template.
class WindowLayout {
 public:
  explicit WindowLayout(const PreambleConfig& cfg);

  int windows() const { return windows_; }
  int width() const { return width_; }
  int length() const { return length_; }
  // First profile bin of window v.
  int first_bin(int window) const { return window * width_; }
  // Profile bin of position j (0 = leftmost) in window v.
  int bin(int window, int position) const { return window * width_ + position; }
  // Window owning a profile bin, or nullopt for guard bins.
  std::optional<int> window_of(int bin) const;
  // Inverse-transform lag stored at a profile bin.
  int lag_of_bin(int bin) const;
  std::vector<int> guard_bins() const;

 private:
  int windows_;
  int width_;
  int length_;
};

// Stores the reciprocal of the unit-power transmitted base spectrum
// X_u(k) / sqrt(L) for one root.
class Correlator {
 public:
  explicit Correlator(const PreambleConfig& root_cfg);
  // Builds from an explicit base spectrum X_u (|X_u(k)| = sqrt(L)).
  Correlator(const PreambleConfig& root_cfg, const ComplexSeq& base_spectrum);

  CorrelationProfile cdp(const RxGrid& grid) const;
  CorrelationProfile pdp(const RxGrid& grid) const;

  const PreambleConfig& config() const { return cfg_; }
  const WindowLayout& layout() const { return layout_; }

 private:
  // Per-antenna inverse transform of y_i / ref, already in profile order.
  void antenna_profile(const ComplexSeq& y, std::span<cplx> scratch, std::span<cplx> out) const;

  PreambleConfig cfg_;
  WindowLayout layout_;
  std::vector<cplx> inverse_reference_;
};

// Shared, lazily built correlator for a root (preamble index ignored).
// Thread-safe; references stay valid for the life of the process.
const Correlator& correlator_for(const PreambleConfig& root_cfg);

// chi(k) = 1/N_RX sum_i IDFT[y_i(k) / X_u(k)], X_u the root's base spectrum.
CorrelationProfile compute_cdp(const RxGrid& grid, const ComplexSeq& base_spectrum);
// 1/N_RX sum_i |IDFT[y_i(k) / X_u(k)]|^2 (power before combining).
CorrelationProfile compute_pdp(const RxGrid& grid, const ComplexSeq& base_spectrum);

enum class Label { absent = 0, present = 1, unknown = 2 };

std::string_view label_name(Label label);
Label parse_label(std::string_view name);

struct WindowInstance {
  std::vector<double> features;  // N_CS PDP values or 2 N_CS interleaved CDP values
  ProfileKind kind = ProfileKind::pdp;
  int base_index = 0;
  int window_index = 0;
  int rapid = -1;  // -1: no valid RAPID
  Label label = Label::unknown;
  std::optional<double> true_delay_samples;
  std::optional<int> true_delay_bins;
  double snr_db = std::numeric_limits<double>::quiet_NaN();
  // Mean profile power of the source profile, used for input normalization.
  double profile_mean = 1.0;
  std::string channel;
  int num_rx = 0;
};

// Splits a profile into L / N_CS windows of N_CS bins. base_index is
// recorded on every window and used to derive RAPIDs through `roots`.
std::vector<WindowInstance> extract_windows(const CorrelationProfile& profile,
                                            const PreambleConfig& cfg, int base_index = 0,
                                            const RootSet& roots = RootSet{});

// PDP-equivalent bin powers of a window (|.|^2 of interleaved CDP pairs).
std::vector<double> window_power(const WindowInstance& w);

}  // namespace prach
