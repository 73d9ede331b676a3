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

// Dense network 13 -> 128 -> 64 -> 64 -> 2 (26 inputs for CDP windows) with
// rectifier hidden layers, softmax output and cross-entropy training.

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "prach/correlator.hpp"

namespace prach {

enum class Normalization { profile_mean, none };

Normalization parse_normalization(std::string_view name);
std::string_view normalization_name(Normalization n);

// Weights are stored row-major as (inputs x outputs).
struct DenseLayer {
  int inputs = 0;
  int outputs = 0;
  std::vector<double> weights;
  std::vector<double> bias;
};

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;
  double train_accuracy = 0.0;
  double val_accuracy = 0.0;
  double learning_rate = 0.0;
};

struct TrainMeta {
  std::uint64_t seed = 0;
  int epochs_run = 0;
  int best_epoch = 0;
  double initial_learning_rate = 0.0;
  double final_learning_rate = 0.0;
  double final_train_loss = 0.0;
  double final_val_loss = 0.0;
  std::string stop_reason;
  std::vector<EpochRecord> curve;
  // Resolved optimizer settings.
  int batch_size = 0;
  int max_epochs = 0;
  int patience = 0;
  int plateau_patience = 0;
  double validation_fraction = 0.0;
  double beta1 = 0.0;
  double beta2 = 0.0;
  // Provenance of the training data.
  std::string channel;
  int num_rx = 0;
  std::string tool_version;
};

struct MlpModel {
  ProfileKind input_kind = ProfileKind::pdp;
  Normalization normalization = Normalization::profile_mean;
  std::vector<DenseLayer> layers;
  TrainMeta train_meta;

  int input_size() const { return layers.empty() ? 0 : layers.front().inputs; }
  std::size_t parameter_count() const;
  // Throws ArgumentError when shapes do not chain or a parameter is not finite.
  void validate() const;
};

// Hidden widths used by the detector: 128, 64, 64.
inline constexpr std::array<int, 3> kHiddenWidths{128, 64, 64};

// Zero-initialized network with the given layer widths (input first).
MlpModel make_model(std::span<const int> widths, ProfileKind kind = ProfileKind::pdp);
// Detector architecture for a window of the given kind and N_CS.
MlpModel make_detector_model(ProfileKind kind, int window_width = 13);
// Fan-in scaled uniform initialization, biases zero.
void initialize_weights(MlpModel& m, std::uint64_t seed);

// Class probabilities {absent, present}. Throws ArgumentError on shape
// mismatch or non-finite input.
std::array<double, 2> forward(const MlpModel& m, std::span<const double> x);

// Reusable buffers for allocation-free inference in tight loops.
class ForwardWorkspace {
 public:
  explicit ForwardWorkspace(const MlpModel& m);
  std::array<double, 2> run(std::span<const double> x);

 private:
  const MlpModel* model_;
  std::vector<std::vector<double>> activations_;
};

// Model input for a window under the model's normalization mode: PDP bins
// divided by the profile mean, CDP parts divided by its square root.
std::vector<double> model_input(const WindowInstance& w, Normalization mode);

struct TrainConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int batch_size = 256;
  int max_epochs = 200;
  int patience = 10;          // early stop on validation loss
  int plateau_patience = 4;   // halve learning rate after this many flat epochs
  double min_learning_rate = 1e-6;
  double validation_fraction = 0.1;
  std::uint64_t seed = 1;
  Normalization normalization = Normalization::profile_mean;

  void validate() const;
};

// Trains a detector on labeled windows. Throws NumericError for single-class
// data or a non-finite loss.
MlpModel train(std::span<const WindowInstance> data, const TrainConfig& cfg);

// Lower-level entry point over prepared inputs (labels 0 = absent, 1 = present).
MlpModel train_on(MlpModel init, const std::vector<std::vector<double>>& inputs,
                  const std::vector<int>& labels, const TrainConfig& cfg);

// Cross-entropy loss of a single example and its gradient with respect to
// every parameter, flattened layer by layer as (weights, bias).
double loss_and_gradient(const MlpModel& m, std::span<const double> x, int label,
                         std::vector<double>& gradient);

// Flattened parameter access in the same order as the gradient.
std::vector<double> flatten_parameters(const MlpModel& m);
void assign_parameters(MlpModel& m, std::span<const double> params);

struct GradientCheckOptions {
  double step = 1e-5;
  // Parameters compared; evenly strided when the model has more.
  std::size_t max_parameters = 4096;
};

// max |analytic - numeric| / (|analytic| + |numeric| + 1e-12) over the
// sampled parameters, numeric from central differences.
double gradient_check(const MlpModel& m, std::span<const double> x, int label,
                      const GradientCheckOptions& opts = {});

// Mean cross-entropy and accuracy over a labeled set.
struct Evaluation {
  double loss = 0.0;
  double accuracy = 0.0;
};
Evaluation evaluate(const MlpModel& m, const std::vector<std::vector<double>>& inputs,
                    const std::vector<int>& labels);

// Floating-point operations per inference: 2 * inputs * outputs per dense
// layer (one multiply and one add per weight). Activation costs are not
// counted by default; pass per-unit costs to include them.
struct FlopCosts {
  std::int64_t per_hidden_unit = 0;  // rectifier
  std::int64_t per_output_unit = 0;  // softmax
};
std::int64_t count_flops(const MlpModel& m, const FlopCosts& costs = {});
// Real floating-point operations of one correlation (divide, L-point inverse
// transform by direct summation, power accumulation) for one antenna.
std::int64_t count_correlation_flops(int sequence_length);

inline constexpr int kModelFormatVersion = 1;

void save_model(const MlpModel& m, const std::filesystem::path& path);
MlpModel load_model(const std::filesystem::path& path);
std::string serialize_model(const MlpModel& m);
MlpModel parse_model(std::string_view text);

}  // namespace prach
