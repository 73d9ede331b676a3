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

// Oracles and fixtures shared by the unit tests. The oracles restate the
// definitions directly (naive summation, hard-coded channel table) and do not
// call into the library code they check.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "prach/channel.hpp"
#include "prach/dataset.hpp"
#include "prach/mlp.hpp"
#include "prach/zc_preamble.hpp"

namespace oracle {

using cplx = std::complex<double>;

// TDL-C, normalized delay and power in dB (3GPP TR 38.901 Table 7.7.2-3).
inline constexpr std::array<std::array<double, 2>, 24> kTdlC{{
    {0.0, -4.4},     {0.2099, -1.2},  {0.2219, -3.5},  {0.2329, -5.2},  {0.2176, -2.5},  {0.6366, 0.0},
    {0.6448, -2.2},  {0.6560, -3.9},  {0.6584, -7.4},  {0.7935, -7.1},  {0.8213, -10.7}, {0.9336, -11.1},
    {1.2285, -5.1},  {1.3083, -6.8},  {2.1704, -8.7},  {2.7105, -13.2}, {4.2589, -13.9}, {4.6003, -13.9},
    {5.4902, -15.8}, {5.6077, -17.1}, {6.3065, -16.0}, {6.6374, -15.7}, {7.0427, -21.6}, {8.6523, -22.8},
}};

inline double tdlc_total_power() {
  double total = 0.0;
  for (const auto& t : kTdlC) total += std::pow(10.0, t[1] / 10.0);
  return total;
}

// Power-weighted mean delay in seconds for a given RMS delay spread.
inline double tdlc_mean_delay_s(double spread_s) {
  double acc = 0.0;
  for (const auto& t : kTdlC) acc += std::pow(10.0, t[1] / 10.0) * t[0] * spread_s;
  return acc / tdlc_total_power();
}

inline double tdlc_rms_delay_s(double spread_s) {
  const double mean = tdlc_mean_delay_s(spread_s);
  double acc = 0.0;
  for (const auto& t : kTdlC) {
    const double d = t[0] * spread_s - mean;
    acc += std::pow(10.0, t[1] / 10.0) * d * d;
  }
  return std::sqrt(acc / tdlc_total_power());
}

// Frequency correlation E[h(k) h*(k + dk)] of a unit-power TDL-C channel.
inline cplx tdlc_freq_correlation(int dk, double scs_hz, double spread_s) {
  cplx acc{0.0, 0.0};
  for (const auto& t : kTdlC)
    acc += std::pow(10.0, t[1] / 10.0) *
           std::polar(1.0, 2.0 * std::numbers::pi * dk * scs_hz * t[0] * spread_s);
  return acc / tdlc_total_power();
}

// x_u(n) = exp(-j pi u n (n+1) / L) with the exponent reduced exactly.
inline std::vector<cplx> zc(int u, int L) {
  std::vector<cplx> x(static_cast<std::size_t>(L));
  for (long long n = 0; n < L; ++n) {
    const long long e = (static_cast<long long>(u) * n * (n + 1)) % (2LL * L);
    x[static_cast<std::size_t>(n)] = std::polar(1.0, -std::numbers::pi * static_cast<double>(e) / L);
  }
  return x;
}

// Forward DFT by naive summation in long double, negative exponent.
inline std::vector<cplx> dft(const std::vector<cplx>& x) {
  const std::size_t L = x.size();
  std::vector<cplx> out(L);
  for (std::size_t k = 0; k < L; ++k) {
    long double re = 0.0L, im = 0.0L;
    for (std::size_t n = 0; n < L; ++n) {
      const long double a = -2.0L * std::numbers::pi_v<long double> * static_cast<long double>((n * k) % L) / L;
      const long double c = std::cos(a), s = std::sin(a);
      re += x[n].real() * c - x[n].imag() * s;
      im += x[n].real() * s + x[n].imag() * c;
    }
    out[k] = {static_cast<double>(re), static_cast<double>(im)};
  }
  return out;
}

// Per-antenna correlation by definition: lag l of IDFT[y(k) / (X_u(k)/sqrt(L))],
// reported at profile bin b = (N_CS - 1 - l) mod L.
inline std::vector<cplx> correlate_antenna(const std::vector<cplx>& y, int u, int L, int ncs) {
  const auto X = dft(zc(u, L));
  const double unit = std::sqrt(static_cast<double>(L));
  std::vector<cplx> lags(static_cast<std::size_t>(L));
  for (int l = 0; l < L; ++l) {
    cplx acc{0.0, 0.0};
    for (int k = 0; k < L; ++k)
      acc += y[static_cast<std::size_t>(k)] / (X[static_cast<std::size_t>(k)] / unit) *
             std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>((static_cast<long long>(k) * l) % L) / L);
    lags[static_cast<std::size_t>(l)] = acc / static_cast<double>(L);
  }
  std::vector<cplx> bins(static_cast<std::size_t>(L));
  for (int b = 0; b < L; ++b) bins[static_cast<std::size_t>(b)] = lags[static_cast<std::size_t>(((ncs - 1 - b) % L + L) % L)];
  return bins;
}

}  // namespace oracle

namespace fixture {

// Desk-scale TDL-C 1-RX PDP dataset and model, built once per process.
inline const std::vector<prach::WindowInstance>& tdlc_data() {
  static const std::vector<prach::WindowInstance> data = [] {
    prach::DatasetSpec spec;
    spec.instances_per_snr = 2000;
    spec.channel = prach::ChannelModel::tdlc300;
    spec.seed = 11;
    spec.threads = 0;
    return prach::generate_instances(spec);
  }();
  return data;
}

struct TrainedSplit {
  prach::MlpModel model;
  std::vector<prach::WindowInstance> train;
  std::vector<prach::WindowInstance> test;
};

inline const TrainedSplit& tdlc_model() {
  static const TrainedSplit split = [] {
    auto [train, test] = prach::split_dataset(tdlc_data(), 0.75, 11);
    prach::TrainConfig cfg;
    cfg.seed = 11;
    prach::MlpModel m = prach::train(train, cfg);
    return TrainedSplit{std::move(m), std::move(train), std::move(test)};
  }();
  return split;
}

inline const prach::MlpModel& awgn_model() {
  static const prach::MlpModel model = [] {
    prach::DatasetSpec spec;
    spec.instances_per_snr = 2000;
    spec.channel = prach::ChannelModel::awgn;
    spec.seed = 12;
    spec.threads = 0;
    prach::TrainConfig cfg;
    cfg.seed = 12;
    return prach::train(prach::generate_instances(spec), cfg);
  }();
  return model;
}

}  // namespace fixture
