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

#include "prach/detectors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "prach/errors.hpp"
#include "prach/parallel.hpp"

namespace prach {

std::vector<int> DetectionResult::detected_rapids() const {
  std::vector<int> out;
  for (const auto& w : windows)
    if (w.present && w.rapid >= 0) out.push_back(w.rapid);
  return out;
}

double noise_floor(std::span<const double> pdp) {
  if (pdp.empty()) throw ArgumentError("empty profile");
  std::vector<double> sorted(pdp.begin(), pdp.end());
  const std::size_t mid = sorted.size() / 2;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(mid), sorted.end());
  double median = sorted[mid];
  if (sorted.size() % 2 == 0) {
    const double lower = *std::max_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(mid));
    median = 0.5 * (median + lower);
  }
  return median / std::numbers::ln2;
}

double conventional_statistic(std::span<const double> window, double floor) {
  if (window.empty()) throw ArgumentError("empty window");
  const double peak = *std::max_element(window.begin(), window.end());
  if (floor <= 0.0) return peak > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return peak / floor;
}

DetectionResult detect_conventional(const CorrelationProfile& pdp, const PreambleConfig& cfg,
                                    double alpha, int base_index, const RootSet& roots) {
  if (pdp.kind != ProfileKind::pdp) throw ArgumentError("conventional detection needs a PDP profile");
  const WindowLayout layout(cfg);
  if (static_cast<int>(pdp.power.size()) != layout.length())
    throw ArgumentError("profile length does not match the sequence length");
  const double floor = noise_floor(pdp.power);
  DetectionResult result;
  for (int v = 0; v < layout.windows(); ++v) {
    const int rapid = roots.rapid(base_index, v, layout.windows());
    if (rapid < 0) continue;
    const std::span<const double> window(pdp.power.data() + layout.first_bin(v),
                                         static_cast<std::size_t>(layout.width()));
    const double stat = conventional_statistic(window, floor);
    result.windows.push_back({base_index, v, rapid, stat > alpha, alpha > 0.0 ? stat / alpha : stat});
  }
  return result;
}

HybridDecision detect_hybrid(const WindowInstance& w, const MlpModel& m, double decision_point) {
  if (w.kind != m.input_kind)
    throw ArgumentError(std::string("model expects ") + std::string(profile_kind_name(m.input_kind)) +
                        " windows, got " + std::string(profile_kind_name(w.kind)));
  const auto p = forward(m, model_input(w, m.normalization));
  return {p[1] >= decision_point, p[1]};
}

namespace {

std::vector<double> noise_statistics(const CalibrationSpec& spec, std::uint64_t stream_offset) {
  if (spec.profiles < 1) throw ConfigError("calibration needs at least one profile");
  PreambleConfig root = spec.preamble;
  root.preamble_index = 0;
  const Correlator& corr = correlator_for(root);
  const WindowLayout& layout = corr.layout();
  const auto per_profile = static_cast<std::size_t>(layout.windows());
  std::vector<double> stats(static_cast<std::size_t>(spec.profiles) * per_profile);
  parallel_for(static_cast<std::size_t>(spec.profiles), spec.threads, [&](std::size_t i) {
    ChannelConfig ch;
    ch.num_rx = spec.num_rx;
    ch.snr_db = 0.0;
    ch.seed = substream_seed(spec.seed, stream_offset + i);
    const RxGrid grid = simulate_reception(root, ch, false);
    const auto pdp = corr.pdp(grid);
    const double floor = noise_floor(pdp.power);
    for (std::size_t v = 0; v < per_profile; ++v) {
      const std::span<const double> window(pdp.power.data() + layout.first_bin(static_cast<int>(v)),
                                           static_cast<std::size_t>(layout.width()));
      stats[i * per_profile + v] = conventional_statistic(window, floor);
    }
  });
  return stats;
}

}  // namespace

AlphaCalibration calibrate_alpha(const CalibrationSpec& spec) {
  if (!(spec.target_false_alarm > 0.0 && spec.target_false_alarm < 1.0))
    throw ConfigError("false-alarm target must lie in (0, 1)");
  std::vector<double> stats = noise_statistics(spec, 0);
  std::sort(stats.begin(), stats.end());
  // Smallest alpha with at most target * n exceedances (strict >).
  const auto n = static_cast<double>(stats.size());
  const auto keep = static_cast<std::size_t>(std::ceil((1.0 - spec.target_false_alarm) * n));
  const std::size_t idx = std::min(stats.size() - 1, keep == 0 ? 0 : keep - 1);
  return {stats[idx], spec.target_false_alarm, static_cast<std::int64_t>(stats.size()), spec.num_rx};
}

double measure_false_alarm(double alpha, const CalibrationSpec& spec) {
  // Streams offset so measurement noise is independent of calibration noise.
  const std::vector<double> stats = noise_statistics(spec, std::uint64_t{1} << 40);
  const auto hits = std::count_if(stats.begin(), stats.end(), [&](double s) { return s > alpha; });
  return static_cast<double>(hits) / static_cast<double>(stats.size());
}

std::vector<ReceiverOutput> run_receiver(const RxGrid& grid, const RootSet& roots, const MlpModel* model,
                                         const ReceiverOptions& opts) {
  if (opts.kind == ReceiverKind::hybrid && model == nullptr)
    throw ArgumentError("hybrid receiver needs a model");
  const PreambleConfig& tmpl = grid.preamble;
  roots.validate(tmpl);
  std::vector<ReceiverOutput> out;
  const int per_root = tmpl.windows_per_root();
  for (std::size_t b = 0; b < roots.roots.size(); ++b) {
    const int base_index = static_cast<int>(b);
    if (roots.rapid(base_index, 0, per_root) < 0) break;
    PreambleConfig root = tmpl;
    root.root = roots.roots[b];
    root.preamble_index = 0;
    const Correlator& corr = correlator_for(root);
    const ProfileKind kind =
        opts.kind == ReceiverKind::hybrid ? model->input_kind : ProfileKind::pdp;
    const CorrelationProfile profile = kind == ProfileKind::pdp ? corr.pdp(grid) : corr.cdp(grid);
    const auto windows = extract_windows(profile, root, base_index, roots);
    const double floor = kind == ProfileKind::pdp ? noise_floor(profile.power) : 0.0;
    for (const auto& w : windows) {
      if (w.rapid < 0) continue;
      bool present = false;
      double score = 0.0;
      if (opts.kind == ReceiverKind::hybrid) {
        const auto d = detect_hybrid(w, *model, opts.decision_point);
        present = d.present;
        score = d.probability;
      } else {
        const double stat = conventional_statistic(w.features, floor);
        present = stat > opts.alpha;
        score = opts.alpha > 0.0 ? stat / opts.alpha : stat;
      }
      if (!present) continue;
      out.push_back({w.rapid, base_index, w.window_index, score, estimate_ta(w, root)});
    }
  }
  return out;
}

}  // namespace prach
