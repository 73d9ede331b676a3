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

// Shapley attribution of p(present) over the network inputs. Absent
// features take their baseline value (interventional masking).

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "prach/correlator.hpp"
#include "prach/mlp.hpp"

namespace prach {

// Exact enumeration is limited to this many inputs (2^16 coalitions).
inline constexpr int kMaxExactShapleyInputs = 16;

struct Attribution {
  std::vector<double> values;
  double f_x = 0.0;         // p(present) at the input
  double f_baseline = 0.0;  // p(present) at the baseline
};

// Exact values from all 2^n coalitions. Inputs are model inputs (already
// normalized). Throws ArgumentError for CDP models or n > 16.
Attribution shapley_values(const MlpModel& m, std::span<const double> x, std::span<const double> baseline);

struct SampledAttribution {
  std::vector<double> mean;
  std::vector<double> std_error;
};

// Monte-Carlo permutation-sampling estimate (any input size).
SampledAttribution shapley_sampled(const MlpModel& m, std::span<const double> x,
                                   std::span<const double> baseline, int permutations, std::uint64_t seed);

// Per-feature mean of the model inputs of a reference set.
std::vector<double> mean_baseline(const MlpModel& m, std::span<const WindowInstance> reference);

struct ExplainRow {
  std::size_t instance = 0;
  Attribution attribution;
  std::vector<double> input;
};

struct ExplainSummary {
  std::size_t instances = 0;
  std::size_t detected = 0;
  // Detected instances whose largest |attribution| sits on the largest input.
  std::size_t argmax_agree = 0;
  double argmax_agree_fraction = 0.0;
  // Share of total |attribution| on the bins adjacent to the input peak.
  double neighbor_share = 0.0;
  double peak_share = 0.0;
};

struct ExplainReport {
  std::size_t inputs = 0;  // model input size
  std::vector<ExplainRow> rows;
  ExplainSummary summary;
};

// Attributes every instance in the slice; summary statistics use the
// instances the model declares present.
ExplainReport explain_report(const MlpModel& m, std::span<const WindowInstance> slice,
                             std::span<const double> baseline, unsigned threads = 1);

// CSV: instance,phi_0..phi_{n-1},f_x,f_baseline, with '#' header lines.
void write_explain_csv(const std::filesystem::path& path, const ExplainReport& report,
                       const std::string& header_comment);
void write_explain_summary(const std::filesystem::path& path, const ExplainSummary& s);

}  // namespace prach
