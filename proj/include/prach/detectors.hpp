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

// The two receivers: correlation + threshold, and the hybrid receiver whose
// per-window presence decision comes from the network. Both feed the same
// peak-detection TA estimator.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "prach/correlator.hpp"
#include "prach/mlp.hpp"
#include "prach/ta_estimator.hpp"

namespace prach {

struct WindowDecision {
  int base_index = 0;
  int window_index = 0;
  int rapid = -1;
  bool present = false;
  // Threshold margin max / (alpha * floor) for the conventional receiver,
  // p(present) for the hybrid one.
  double score = 0.0;
};

struct DetectionResult {
  std::vector<WindowDecision> windows;

  std::vector<int> detected_rapids() const;
};

// median(PDP) / ln 2: the mean of exponentially distributed noise bins
// estimated from their median.
double noise_floor(std::span<const double> pdp);

// max(window) / noise_floor, the statistic compared against alpha.
double conventional_statistic(std::span<const double> window, double floor);

// Per-window thresholding of one root's PDP. Only windows that map to a
// valid RAPID are reported.
DetectionResult detect_conventional(const CorrelationProfile& pdp, const PreambleConfig& cfg,
                                    double alpha, int base_index = 0, const RootSet& roots = RootSet{});

struct HybridDecision {
  bool present = false;
  double probability = 0.0;
};

// Throws ArgumentError when the window kind differs from the model input kind.
HybridDecision detect_hybrid(const WindowInstance& w, const MlpModel& m, double decision_point = 0.5);

struct AlphaCalibration {
  double alpha = 0.0;
  double target_false_alarm = 0.0;
  std::int64_t windows = 0;
  int num_rx = 1;
};

struct CalibrationSpec {
  int num_rx = 1;
  double target_false_alarm = 1e-3;
  int profiles = 20000;
  std::uint64_t seed = 1;
  PreambleConfig preamble{};
  unsigned threads = 1;
};

// Empirical (1 - target) quantile of the window statistic on noise-only
// profiles.
AlphaCalibration calibrate_alpha(const CalibrationSpec& spec);

// Fraction of noise-only windows whose statistic exceeds alpha.
double measure_false_alarm(double alpha, const CalibrationSpec& spec);

enum class ReceiverKind { conventional, hybrid };

struct ReceiverOptions {
  ReceiverKind kind = ReceiverKind::hybrid;
  double alpha = 0.0;           // conventional threshold
  double decision_point = 0.5;  // hybrid threshold on p(present)
};

struct ReceiverOutput {
  int rapid = -1;
  int base_index = 0;
  int window_index = 0;
  double score = 0.0;
  TaEstimate ta;
};

// Full multi-root sweep: for every root one PDP (or CDP for CDP models), the
// windows that map to RAPIDs 0..63, a presence decision per window and a TA
// estimate for each detected window. `model` may be null for the
// conventional receiver.
std::vector<ReceiverOutput> run_receiver(const RxGrid& grid, const RootSet& roots,
                                         const MlpModel* model, const ReceiverOptions& opts);

}  // namespace prach
