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

#include "prach/ta_estimator.hpp"

#include <cmath>
#include <string>

#include "prach/errors.hpp"

namespace prach {

TaEstimate ta_units(int ta_bins, int fft_size, int sequence_length, double scs_hz) {
  TaEstimate e;
  e.ta_bins = ta_bins;
  e.ta_time_samples = ta_bins * static_cast<double>(fft_size) / static_cast<double>(sequence_length);
  e.ta_meters = e.ta_time_samples * kSpeedOfLight / (static_cast<double>(fft_size) * scs_hz);
  return e;
}

int estimate_ta_bins(std::span<const double> power) {
  if (power.empty()) throw NumericError("empty window");
  std::size_t best = 0;
  bool any = false;
  for (std::size_t j = 0; j < power.size(); ++j) {
    if (power[j] != 0.0) any = true;
    if (power[j] >= power[best]) best = j;
  }
  if (!any) throw NumericError("cannot estimate timing advance from an all-zero window");
  return static_cast<int>(power.size() - 1 - best);
}

TaEstimate estimate_ta(const WindowInstance& w, const PreambleConfig& cfg) {
  const auto power = window_power(w);
  return ta_units(estimate_ta_bins(power), cfg.fft_size, cfg.sequence_length, cfg.scs_hz);
}

bool TaGroundTruth::accepts(int estimated_bins) const {
  const int diff = std::abs(estimated_bins - value_bins);
  return scheme == TaScheme::exact ? diff == 0 : diff <= 1;
}

int ground_truth_bins(double delay_samples, const ChannelConfig& channel, const PreambleConfig& cfg) {
  const double total = delay_samples + mean_channel_delay_samples(channel, cfg);
  return static_cast<int>(std::floor(total / cfg.samples_per_bin() + 0.5));
}

TaGroundTruth make_ground_truth(double delay_samples, const ChannelConfig& channel,
                                const PreambleConfig& cfg, TaScheme scheme) {
  const int bins = ground_truth_bins(delay_samples, channel, cfg);
  if (bins < 0 || bins > cfg.cyclic_shift - 1)
    throw NumericError("TA label " + std::to_string(bins) + " bins outside the window");
  return {scheme, bins};
}

}  // namespace prach
