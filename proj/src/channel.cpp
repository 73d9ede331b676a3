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

#include "prach/channel.hpp"
#include "prach/simd.hpp"

#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <numbers>
#include <string>

#include "prach/errors.hpp"

namespace prach {

ChannelModel parse_channel_model(std::string_view name) {
  if (name == "awgn") return ChannelModel::awgn;
  if (name == "tdlc300") return ChannelModel::tdlc300;
  throw ConfigError("unknown channel model '" + std::string(name) + "' (valid: awgn, tdlc300)");
}

std::string_view channel_model_name(ChannelModel model) {
  return model == ChannelModel::awgn ? "awgn" : "tdlc300";
}

void ChannelConfig::validate(const PreambleConfig& preamble) const {
  if (num_rx < 1) throw ConfigError("num_rx must be >= 1");
  if (!(delay_spread_s > 0.0)) throw ConfigError("delay spread must be positive");
  if (!(delay_samples >= 0.0)) throw ArgumentError("delay must be non-negative");
  const double limit = preamble.cyclic_shift * preamble.samples_per_bin();
  if (delay_samples >= limit)
    throw ArgumentError("delay " + std::to_string(delay_samples) +
                        " samples exceeds one correlation window (" + std::to_string(limit) + ")");
  if (std::isnan(snr_db)) throw ConfigError("SNR is NaN");
}

namespace {

// 3GPP TR 38.901 TDL-C: normalized delay, power in dB.
constexpr std::array<std::array<double, 2>, 24> kTdlC{{
    {0.0000, -4.4},  {0.2099, -1.2},  {0.2219, -3.5},  {0.2329, -5.2},  {0.2176, -2.5},
    {0.6366, 0.0},   {0.6448, -2.2},  {0.6560, -3.9},  {0.6584, -7.4},  {0.7935, -7.1},
    {0.8213, -10.7}, {0.9336, -11.1}, {1.2285, -5.1},  {1.3083, -6.8},  {2.1704, -8.7},
    {2.7105, -13.2}, {4.2589, -13.9}, {4.6003, -13.9}, {5.4902, -15.8}, {5.6077, -17.1},
    {6.3065, -16.0}, {6.6374, -15.7}, {7.0427, -21.6}, {8.6523, -22.8},
}};

}  // namespace

std::vector<Tap> tdlc_taps(double delay_spread_s) {
  std::vector<Tap> taps;
  taps.reserve(kTdlC.size());
  double total = 0.0;
  for (const auto& [delay, power_db] : kTdlC) {
    const double p = std::pow(10.0, power_db / 10.0);
    taps.push_back({delay * delay_spread_s, p});
    total += p;
  }
  for (auto& t : taps) t.power /= total;
  return taps;
}

double mean_channel_delay_s(const ChannelConfig& cfg) {
  if (cfg.model == ChannelModel::awgn) return 0.0;
  double mean = 0.0;
  for (const auto& t : tdlc_taps(cfg.delay_spread_s)) mean += t.power * t.delay_s;
  return mean;
}

double mean_channel_delay_samples(const ChannelConfig& cfg, const PreambleConfig& preamble) {
  return mean_channel_delay_s(cfg) * preamble.fft_size * preamble.scs_hz;
}

ComplexSeq apply_delay(const ComplexSeq& y, double delay_samples, int fft_size) {
  if (!(delay_samples >= 0.0)) throw ArgumentError("delay must be non-negative");
  if (fft_size <= 0) throw ArgumentError("FFT size must be positive");
  ComplexSeq out = y;
  if (delay_samples == 0.0) return out;
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) * delay_samples / fft_size;
    out.values[k] *= std::polar(1.0, angle);
  }
  return out;
}

namespace {

// Per-subcarrier tap phasors, row-major [k][tap].
const std::vector<cplx>& steering_table(std::size_t L, double scs_hz, double delay_spread_s) {
  using Key = std::tuple<std::size_t, double, double>;
  static std::mutex mutex;
  static std::map<Key, std::unique_ptr<std::vector<cplx>>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[Key{L, scs_hz, delay_spread_s}];
  if (!slot) {
    const auto taps = tdlc_taps(delay_spread_s);
    slot = std::make_unique<std::vector<cplx>>(L * taps.size());
    for (std::size_t k = 0; k < L; ++k)
      for (std::size_t t = 0; t < taps.size(); ++t)
        (*slot)[k * taps.size() + t] =
            std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k) * scs_hz * taps[t].delay_s);
  }
  return *slot;
}

}  // namespace

std::vector<ComplexSeq> draw_channel(const ChannelConfig& cfg, int sequence_length, double scs_hz,
                                     Rng& rng) {
  if (cfg.num_rx < 1) throw ConfigError("num_rx must be >= 1");
  const auto L = static_cast<std::size_t>(sequence_length);
  std::vector<ComplexSeq> out(static_cast<std::size_t>(cfg.num_rx),
                              ComplexSeq{std::vector<cplx>(L, cplx{1.0, 0.0}), Domain::freq});
  if (cfg.model == ChannelModel::awgn) return out;

  const auto taps = tdlc_taps(cfg.delay_spread_s);
  const auto& steer = steering_table(L, scs_hz, cfg.delay_spread_s);
  const auto& k = simd::kernels();
  std::vector<cplx> gains(taps.size());
  for (auto& antenna : out) {
    for (std::size_t t = 0; t < taps.size(); ++t) {
      const double sigma = std::sqrt(taps[t].power / 2.0);
      const double re = rng.normal();
      const double im = rng.normal();
      gains[t] = {sigma * re, sigma * im};
    }
    for (std::size_t b = 0; b < L; ++b)
      antenna.values[b] = k.cdot(steer.data() + b * taps.size(), gains.data(), taps.size());
  }
  return out;
}

void add_awgn(RxGrid& grid, double snr_db, Rng& rng) {
  if (!std::isfinite(snr_db)) {
    if (snr_db > 0) return;
    throw ArgumentError("SNR must be finite or +inf");
  }
  const double sigma = std::sqrt(std::pow(10.0, -snr_db / 10.0) / 2.0);
  for (auto& antenna : grid.antennas) {
    for (auto& v : antenna.values) {
      const double re = rng.normal();
      const double im = rng.normal();
      v += cplx{sigma * re, sigma * im};
    }
  }
}

namespace {

// Unit power per RE: |X_u(k)| = sqrt(L) for a Zadoff-Chu root.
ComplexSeq transmitted_signal(const PreambleConfig& p) {
  ComplexSeq y = preamble_freq(p);
  const double scale = 1.0 / std::sqrt(static_cast<double>(p.sequence_length));
  for (auto& v : y.values) v *= scale;
  return y;
}

}  // namespace

RxGrid simulate_users(std::span<const UserTx> users, const PreambleConfig& grid_template,
                      const ChannelConfig& c) {
  grid_template.validate();
  if (c.num_rx < 1) throw ConfigError("num_rx must be >= 1");
  const auto L = static_cast<std::size_t>(grid_template.sequence_length);
  RxGrid grid;
  grid.preamble = grid_template;
  grid.channel = c;
  grid.antennas.assign(static_cast<std::size_t>(c.num_rx),
                       ComplexSeq{std::vector<cplx>(L, cplx{0.0, 0.0}), Domain::freq});

  Rng rng(c.seed);
  for (const auto& user : users) {
    ChannelConfig per_user = c;
    per_user.delay_samples = user.delay_samples;
    per_user.validate(user.preamble);
    if (user.preamble.sequence_length != grid_template.sequence_length)
      throw ArgumentError("users must share the sequence length");
    const ComplexSeq tx = apply_delay(transmitted_signal(user.preamble), user.delay_samples,
                                      user.preamble.fft_size);
    const auto h = draw_channel(per_user, user.preamble.sequence_length, user.preamble.scs_hz, rng);
    for (std::size_t i = 0; i < grid.antennas.size(); ++i)
      for (std::size_t k = 0; k < L; ++k) grid.antennas[i].values[k] += h[i].values[k] * tx.values[k];
  }
  add_awgn(grid, c.snr_db, rng);
  return grid;
}

RxGrid simulate_reception(const PreambleConfig& p, const ChannelConfig& c, bool user_present) {
  p.validate();
  c.validate(p);
  if (!user_present) {
    RxGrid grid = simulate_users({}, p, c);
    grid.preamble = p;
    return grid;
  }
  const UserTx user{p, c.delay_samples};
  RxGrid grid = simulate_users(std::span<const UserTx>(&user, 1), p, c);
  grid.preamble = p;
  return grid;
}

}  // namespace prach
