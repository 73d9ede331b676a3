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

// Timing advance from the peak position inside a detected window, unit
// conversions, and the two ground-truth labeling schemes.

#include <span>

#include "prach/channel.hpp"
#include "prach/correlator.hpp"

namespace prach {

inline constexpr double kSpeedOfLight = 3e8;

struct TaEstimate {
  int ta_bins = 0;
  double ta_time_samples = 0.0;  // ta_bins * N / L
  double ta_meters = 0.0;        // time_samples * c / (N * scs)
};

// Converts a bin count into time samples and meters.
TaEstimate ta_units(int ta_bins, int fft_size, int sequence_length, double scs_hz);

// ta_bins = (N_CS - 1) - argmax over the window; on ties the rightmost bin
// wins, giving the smaller TA. Throws NumericError on an all-zero window.
int estimate_ta_bins(std::span<const double> window_power);
TaEstimate estimate_ta(const WindowInstance& w, const PreambleConfig& cfg);

enum class TaScheme { exact, tol1 };

struct TaGroundTruth {
  TaScheme scheme = TaScheme::exact;
  int value_bins = 0;

  // exact: est == truth; tol1: |est - truth| <= 1.
  bool accepts(int estimated_bins) const;
};

// truth = round_half_up((delay + mean channel delay) * L / N). Throws
// NumericError when the label falls outside [0, N_CS - 1].
TaGroundTruth make_ground_truth(double delay_samples, const ChannelConfig& channel,
                                const PreambleConfig& cfg, TaScheme scheme);
// Unchecked label value, for callers that regenerate out-of-range instances.
int ground_truth_bins(double delay_samples, const ChannelConfig& channel, const PreambleConfig& cfg);

}  // namespace prach
