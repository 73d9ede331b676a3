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

// Reception model: per-subcarrier delay ramp, block-fading TDL channel,
// multi-antenna reception and AWGN on the L_RA PRACH resource elements.
//
// SNR is defined per resource element on the PRACH subcarriers: the
// transmitted preamble is scaled to unit power per RE and the noise variance
// per RE per antenna is 10^(-snr_db / 10).

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "prach/rng.hpp"
#include "prach/zc_preamble.hpp"

namespace prach {

enum class ChannelModel { awgn, tdlc300 };

ChannelModel parse_channel_model(std::string_view name);
std::string_view channel_model_name(ChannelModel model);

struct ChannelConfig {
  ChannelModel model = ChannelModel::awgn;
  int num_rx = 1;
  double delay_spread_s = 300e-9;
  // +infinity disables noise.
  double snr_db = std::numeric_limits<double>::infinity();
  // True propagation delay in N-rate time samples; fractional values allowed.
  double delay_samples = 0.0;
  std::uint64_t seed = 0;

  // Requires the preamble config to bound the delay to one window.
  void validate(const PreambleConfig& preamble) const;
  bool noise_enabled() const { return std::isfinite(snr_db); }
};

struct RxGrid {
  std::vector<ComplexSeq> antennas;
  PreambleConfig preamble;
  ChannelConfig channel;

  int num_rx() const { return static_cast<int>(antennas.size()); }
};

struct Tap {
  double delay_s;
  double power;  // linear, taps sum to one
};

// TDL-C power-delay profile (normalized delays scaled by the RMS delay
// spread, powers normalized to unit sum).
std::vector<Tap> tdlc_taps(double delay_spread_s);

// Power-weighted mean tap delay in seconds; zero for AWGN.
double mean_channel_delay_s(const ChannelConfig& cfg);
// Same, in N-rate time samples.
double mean_channel_delay_samples(const ChannelConfig& cfg, const PreambleConfig& preamble);

// out(k) = y(k) * exp(-j 2 pi k delay / N) for local RE index k.
ComplexSeq apply_delay(const ComplexSeq& y, double delay_samples, int fft_size);

// One block-fading realization per antenna, evaluated at RE spacing scs_hz.
std::vector<ComplexSeq> draw_channel(const ChannelConfig& cfg, int sequence_length,
                                     double scs_hz, Rng& rng);

// Adds CN(0, 10^(-snr_db/10)) to every RE of every antenna. No-op for +inf.
void add_awgn(RxGrid& grid, double snr_db, Rng& rng);

// One transmitting user: its preamble and its own propagation delay.
struct UserTx {
  PreambleConfig preamble;
  double delay_samples = 0.0;
};

// y_i(k) = h_i(k) * y_uv(k) * ramp(k) + w_i(k), seeded by c.seed. When the
// user is absent only the noise term is generated.
RxGrid simulate_reception(const PreambleConfig& p, const ChannelConfig& c, bool user_present);

// Several users on the same occasion, each with an independent channel
// realization; the delay in `c` is ignored in favor of each user's own.
RxGrid simulate_users(std::span<const UserTx> users, const PreambleConfig& grid_template,
                      const ChannelConfig& c);

}  // namespace prach
