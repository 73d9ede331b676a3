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

// Monte-Carlo evaluation of the conventional and hybrid receivers over SNR,
// channel and antenna-count grids.
//
// Detection probability: fraction of user-present trials whose own window is
// declared present. False-alarm probability: fraction of noise-only trials
// whose window is declared present. TA accuracies are over detected
// user-present trials.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "prach/dataset.hpp"
#include "prach/detectors.hpp"
#include "prach/mlp.hpp"

namespace prach {

struct EvalSpec {
  std::vector<double> snr_db{-20, -15, -10, -5, 0, 5, 10, 15, 20};
  int trials = 2000;  // user-present trials per point; the same number of noise-only trials
  std::uint64_t seed = 7;
  PreambleConfig preamble{};
  RootSet roots{};
  double delay_spread_s = 300e-9;
  double max_delay_bins = 12.5;
  double target_false_alarm = 1e-3;
  int calibration_profiles = 20000;
  unsigned threads = 1;

  void validate() const;
};

struct EvalRow {
  std::string channel;
  int num_rx = 1;
  double snr_db = 0.0;
  std::string receiver;        // conventional | hybrid
  std::string detector_input;  // pdp | cdp
  int n_trials = 0;
  double p_detect = 0.0;
  double p_false_alarm = 0.0;
  double ta_acc_exact = 0.0;
  double ta_acc_tol1 = 0.0;
};

// One (channel, num_rx) configuration. Models are evaluated on the same
// occasions as the conventional receiver.
struct EvalTarget {
  ChannelModel channel = ChannelModel::tdlc300;
  int num_rx = 1;
  std::vector<const MlpModel*> models;
  bool conventional = true;
  // Conventional threshold; calibrated from noise when <= 0.
  double alpha = 0.0;
};

struct EvalResult {
  std::vector<EvalRow> rows;
  // alpha used per (channel, num_rx) target, in target order.
  std::vector<double> alphas;
};

EvalResult run_evaluation(const std::vector<EvalTarget>& targets, const EvalSpec& spec);

// Header comment lines (each starting with '#') describing the run.
std::string eval_header(const EvalSpec& spec, const std::vector<EvalTarget>& targets, const EvalResult& result);

inline constexpr const char* kEvalCsvColumns =
    "channel,num_rx,snr_db,receiver,detector_input,n_trials,p_detect,p_false_alarm,ta_acc_exact,ta_acc_tol1";

void write_eval_csv(const std::filesystem::path& path, const EvalResult& result, const std::string& header);
// gnuplot script with the curves inlined as data blocks.
void write_plot_script(const std::filesystem::path& path, const EvalResult& result, const std::string& title);

}  // namespace prach
