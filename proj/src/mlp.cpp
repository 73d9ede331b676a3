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

#include "prach/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "prach/errors.hpp"
#include "prach/version.hpp"
#include "prach/rng.hpp"
#include "prach/simd.hpp"

namespace prach {

using json = nlohmann::json;

Normalization parse_normalization(std::string_view name) {
  if (name == "profile_mean") return Normalization::profile_mean;
  if (name == "none") return Normalization::none;
  throw ConfigError("unknown normalization '" + std::string(name) + "' (valid: profile_mean, none)");
}

std::string_view normalization_name(Normalization n) {
  return n == Normalization::profile_mean ? "profile_mean" : "none";
}

std::size_t MlpModel::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.weights.size() + l.bias.size();
  return n;
}

void MlpModel::validate() const {
  if (layers.empty()) throw ArgumentError("model has no layers");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& l = layers[i];
    if (l.inputs <= 0 || l.outputs <= 0) throw ArgumentError("layer with non-positive width");
    if (l.weights.size() != static_cast<std::size_t>(l.inputs) * static_cast<std::size_t>(l.outputs) ||
        l.bias.size() != static_cast<std::size_t>(l.outputs))
      throw ArgumentError("layer " + std::to_string(i) + " parameter count does not match its shape");
    if (i > 0 && layers[i - 1].outputs != l.inputs)
      throw ArgumentError("layer " + std::to_string(i) + " does not chain with its predecessor");
    for (double w : l.weights)
      if (!std::isfinite(w)) throw ArgumentError("non-finite weight in layer " + std::to_string(i));
    for (double b : l.bias)
      if (!std::isfinite(b)) throw ArgumentError("non-finite bias in layer " + std::to_string(i));
  }
  if (layers.back().outputs != 2) throw ArgumentError("output layer must have two units");
}

MlpModel make_model(std::span<const int> widths, ProfileKind kind) {
  if (widths.size() < 2) throw ArgumentError("need at least input and output widths");
  MlpModel m;
  m.input_kind = kind;
  for (std::size_t i = 0; i + 1 < widths.size(); ++i) {
    DenseLayer l;
    l.inputs = widths[i];
    l.outputs = widths[i + 1];
    l.weights.assign(static_cast<std::size_t>(l.inputs) * static_cast<std::size_t>(l.outputs), 0.0);
    l.bias.assign(static_cast<std::size_t>(l.outputs), 0.0);
    m.layers.push_back(std::move(l));
  }
  return m;
}

MlpModel make_detector_model(ProfileKind kind, int window_width) {
  const int in = kind == ProfileKind::pdp ? window_width : 2 * window_width;
  const std::array<int, 5> widths{in, kHiddenWidths[0], kHiddenWidths[1], kHiddenWidths[2], 2};
  return make_model(widths, kind);
}

void initialize_weights(MlpModel& m, std::uint64_t seed) {
  Rng rng(seed, 0x1417);
  for (auto& l : m.layers) {
    const double limit = std::sqrt(6.0 / static_cast<double>(l.inputs));
    for (auto& w : l.weights) w = rng.uniform(-limit, limit);
    std::fill(l.bias.begin(), l.bias.end(), 0.0);
  }
}

namespace {

void softmax2(std::span<const double> logits, std::array<double, 2>& p) {
  const double top = std::max(logits[0], logits[1]);
  const double e0 = std::exp(logits[0] - top);
  const double e1 = std::exp(logits[1] - top);
  const double s = e0 + e1;
  p = {e0 / s, e1 / s};
}

void check_input(const MlpModel& m, std::span<const double> x) {
  if (m.layers.empty()) throw ArgumentError("model has no layers");
  if (static_cast<int>(x.size()) != m.input_size())
    throw ArgumentError("input length " + std::to_string(x.size()) + " does not match model input " +
                        std::to_string(m.input_size()));
  for (double v : x)
    if (!std::isfinite(v)) throw ArgumentError("non-finite model input");
}

// acts[0] = x, acts[l + 1] = output of layer l (rectified except the last).
void forward_pass(const MlpModel& m, std::span<const double> x, std::vector<std::vector<double>>& acts) {
  const auto& k = simd::kernels();
  acts.resize(m.layers.size() + 1);
  acts[0].assign(x.begin(), x.end());
  for (std::size_t li = 0; li < m.layers.size(); ++li) {
    const auto& layer = m.layers[li];
    auto& out = acts[li + 1];
    out.assign(layer.bias.begin(), layer.bias.end());
    const auto& in = acts[li];
    const auto width = static_cast<std::size_t>(layer.outputs);
    for (std::size_t i = 0; i < in.size(); ++i) {
      if (in[i] != 0.0) k.axpy(in[i], layer.weights.data() + i * width, out.data(), width);
    }
    if (li + 1 < m.layers.size())
      for (auto& v : out) v = v > 0.0 ? v : 0.0;
  }
}

// Accumulates d(loss)/d(params) for one example into `grad` (same layout as
// flatten_parameters). Returns the example's loss.
double backprop(const MlpModel& m, std::vector<std::vector<double>>& acts,
                std::vector<double>& delta, std::vector<double>& prev_delta, int label,
                std::vector<double>& grad, std::array<double, 2>& probs) {
  const auto& k = simd::kernels();
  softmax2(acts.back(), probs);
  const double loss = -std::log(std::max(probs[static_cast<std::size_t>(label)],
                                         std::numeric_limits<double>::min()));
  delta.assign({probs[0] - (label == 0 ? 1.0 : 0.0), probs[1] - (label == 1 ? 1.0 : 0.0)});

  // Offsets of each layer's block in the flattened gradient.
  std::vector<std::size_t> offsets(m.layers.size());
  std::size_t off = 0;
  for (std::size_t li = 0; li < m.layers.size(); ++li) {
    offsets[li] = off;
    off += m.layers[li].weights.size() + m.layers[li].bias.size();
  }

  for (std::size_t li = m.layers.size(); li-- > 0;) {
    const auto& layer = m.layers[li];
    const auto width = static_cast<std::size_t>(layer.outputs);
    const auto& in = acts[li];
    double* gw = grad.data() + offsets[li];
    double* gb = gw + layer.weights.size();
    for (std::size_t i = 0; i < in.size(); ++i)
      if (in[i] != 0.0) k.axpy(in[i], delta.data(), gw + i * width, width);
    for (std::size_t o = 0; o < width; ++o) gb[o] += delta[o];
    if (li == 0) break;
    prev_delta.resize(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) {
      // in[i] is the rectified output of the previous layer; zero means inactive.
      prev_delta[i] = in[i] > 0.0 ? k.dot(layer.weights.data() + i * width, delta.data(), width) : 0.0;
    }
    std::swap(delta, prev_delta);
  }
  return loss;
}

}  // namespace

std::array<double, 2> forward(const MlpModel& m, std::span<const double> x) {
  check_input(m, x);
  std::vector<std::vector<double>> acts;
  forward_pass(m, x, acts);
  std::array<double, 2> p{};
  softmax2(acts.back(), p);
  return p;
}

ForwardWorkspace::ForwardWorkspace(const MlpModel& m) : model_(&m) {}

std::array<double, 2> ForwardWorkspace::run(std::span<const double> x) {
  check_input(*model_, x);
  forward_pass(*model_, x, activations_);
  std::array<double, 2> p{};
  softmax2(activations_.back(), p);
  return p;
}

std::vector<double> model_input(const WindowInstance& w, Normalization mode) {
  std::vector<double> x = w.features;
  if (mode == Normalization::none) return x;
  const double mean = w.profile_mean;
  if (!(mean > 0.0) || !std::isfinite(mean)) throw ArgumentError("window has no usable profile mean");
  const double scale = w.kind == ProfileKind::pdp ? 1.0 / mean : 1.0 / std::sqrt(mean);
  for (auto& v : x) v *= scale;
  return x;
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0) || !(beta1 > 0.0 && beta1 < 1.0) || !(beta2 > 0.0 && beta2 < 1.0) ||
      !(epsilon > 0.0))
    throw ConfigError("optimizer hyperparameters must be positive (betas in (0,1))");
  if (batch_size < 1 || max_epochs < 1 || patience < 1 || plateau_patience < 1)
    throw ConfigError("batch size, epochs and patience must be positive");
  if (!(validation_fraction > 0.0 && validation_fraction < 1.0))
    throw ConfigError("validation fraction must lie in (0, 1)");
}

std::vector<double> flatten_parameters(const MlpModel& m) {
  std::vector<double> out;
  out.reserve(m.parameter_count());
  for (const auto& l : m.layers) {
    out.insert(out.end(), l.weights.begin(), l.weights.end());
    out.insert(out.end(), l.bias.begin(), l.bias.end());
  }
  return out;
}

void assign_parameters(MlpModel& m, std::span<const double> params) {
  if (params.size() != m.parameter_count()) throw ArgumentError("parameter vector length mismatch");
  std::size_t off = 0;
  for (auto& l : m.layers) {
    std::copy_n(params.begin() + static_cast<std::ptrdiff_t>(off), l.weights.size(), l.weights.begin());
    off += l.weights.size();
    std::copy_n(params.begin() + static_cast<std::ptrdiff_t>(off), l.bias.size(), l.bias.begin());
    off += l.bias.size();
  }
}

double loss_and_gradient(const MlpModel& m, std::span<const double> x, int label,
                         std::vector<double>& gradient) {
  check_input(m, x);
  if (label != 0 && label != 1) throw ArgumentError("label must be 0 or 1");
  std::vector<std::vector<double>> acts;
  forward_pass(m, x, acts);
  gradient.assign(m.parameter_count(), 0.0);
  std::vector<double> delta, prev;
  std::array<double, 2> probs{};
  return backprop(m, acts, delta, prev, label, gradient, probs);
}

double gradient_check(const MlpModel& m, std::span<const double> x, int label,
                      const GradientCheckOptions& opts) {
  std::vector<double> analytic;
  loss_and_gradient(m, x, label, analytic);
  std::vector<double> params = flatten_parameters(m);
  const std::size_t n = params.size();
  const std::size_t stride = std::max<std::size_t>(1, (n + opts.max_parameters - 1) / opts.max_parameters);
  MlpModel probe = m;
  const auto loss_at = [&](std::size_t idx, double value) {
    const double saved = params[idx];
    params[idx] = value;
    assign_parameters(probe, params);
    params[idx] = saved;
    const auto p = forward(probe, x);
    return -std::log(std::max(p[static_cast<std::size_t>(label)], std::numeric_limits<double>::min()));
  };
  double worst = 0.0;
  for (std::size_t idx = 0; idx < n; idx += stride) {
    const double plus = loss_at(idx, params[idx] + opts.step);
    const double minus = loss_at(idx, params[idx] - opts.step);
    const double numeric = (plus - minus) / (2.0 * opts.step);
    const double err = std::abs(analytic[idx] - numeric) / (std::abs(analytic[idx]) + std::abs(numeric) + 1e-12);
    worst = std::max(worst, err);
  }
  return worst;
}

Evaluation evaluate(const MlpModel& m, const std::vector<std::vector<double>>& inputs,
                    const std::vector<int>& labels) {
  Evaluation e;
  if (inputs.empty()) return e;
  ForwardWorkspace ws(m);
  double loss = 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const auto p = ws.run(inputs[i]);
    const auto y = static_cast<std::size_t>(labels[i]);
    loss -= std::log(std::max(p[y], std::numeric_limits<double>::min()));
    if ((p[1] >= 0.5 ? 1 : 0) == labels[i]) ++correct;
  }
  e.loss = loss / static_cast<double>(inputs.size());
  e.accuracy = static_cast<double>(correct) / static_cast<double>(inputs.size());
  return e;
}

MlpModel train_on(MlpModel model, const std::vector<std::vector<double>>& inputs,
                  const std::vector<int>& labels, const TrainConfig& cfg) {
  cfg.validate();
  model.validate();
  if (inputs.size() != labels.size()) throw ArgumentError("inputs and labels differ in length");
  std::array<std::vector<std::size_t>, 2> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) throw ArgumentError("training labels must be 0 or 1");
    by_class[static_cast<std::size_t>(labels[i])].push_back(i);
  }
  if (by_class[0].empty() || by_class[1].empty())
    throw NumericError("training data contains a single class");
  for (const auto& x : inputs) check_input(model, x);

  // Label-stratified validation hold-out.
  Rng rng(cfg.seed, 0x7a11);
  std::vector<std::size_t> train_idx, val_idx;
  for (auto& cls : by_class) {
    std::shuffle(cls.begin(), cls.end(), rng.engine());
    const auto n_val = static_cast<std::size_t>(std::llround(cfg.validation_fraction * static_cast<double>(cls.size())));
    const auto split = std::min(cls.size() - 1, std::max<std::size_t>(n_val, 1));
    val_idx.insert(val_idx.end(), cls.begin(), cls.begin() + static_cast<std::ptrdiff_t>(split));
    train_idx.insert(train_idx.end(), cls.begin() + static_cast<std::ptrdiff_t>(split), cls.end());
  }
  std::sort(train_idx.begin(), train_idx.end());
  std::sort(val_idx.begin(), val_idx.end());
  std::vector<std::vector<double>> train_x, val_x;
  std::vector<int> train_y, val_y;
  for (auto i : train_idx) { train_x.push_back(inputs[i]); train_y.push_back(labels[i]); }
  for (auto i : val_idx) { val_x.push_back(inputs[i]); val_y.push_back(labels[i]); }

  const std::size_t n_params = model.parameter_count();
  std::vector<double> params = flatten_parameters(model);
  std::vector<double> grad(n_params), m1(n_params, 0.0), m2(n_params, 0.0);
  std::vector<double> best = params;
  std::vector<std::vector<double>> acts;
  std::vector<double> delta, prev;
  std::array<double, 2> probs{};

  TrainMeta meta;
  meta.seed = cfg.seed;
  meta.initial_learning_rate = cfg.learning_rate;
  meta.batch_size = cfg.batch_size;
  meta.max_epochs = cfg.max_epochs;
  meta.patience = cfg.patience;
  meta.plateau_patience = cfg.plateau_patience;
  meta.validation_fraction = cfg.validation_fraction;
  meta.beta1 = cfg.beta1;
  meta.beta2 = cfg.beta2;
  meta.tool_version = kToolVersion;
  double lr = cfg.learning_rate;
  double best_val = std::numeric_limits<double>::infinity();
  int since_best = 0, since_change = 0;
  std::int64_t step = 0;
  std::vector<std::size_t> order(train_x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng.engine());
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      std::fill(grad.begin(), grad.end(), 0.0);
      double batch_loss = 0.0;
      for (std::size_t b = start; b < end; ++b) {
        forward_pass(model, train_x[order[b]], acts);
        batch_loss += backprop(model, acts, delta, prev, train_y[order[b]], grad, probs);
      }
      if (!std::isfinite(batch_loss))
        throw NumericError("non-finite training loss at epoch " + std::to_string(epoch) + ", step " +
                           std::to_string(step) + ", learning rate " + std::to_string(lr));
      const double inv = 1.0 / static_cast<double>(end - start);
      ++step;
      const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
      const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
      for (std::size_t p = 0; p < n_params; ++p) {
        const double g = grad[p] * inv;
        m1[p] = cfg.beta1 * m1[p] + (1.0 - cfg.beta1) * g;
        m2[p] = cfg.beta2 * m2[p] + (1.0 - cfg.beta2) * g * g;
        params[p] -= lr * (m1[p] / c1) / (std::sqrt(m2[p] / c2) + cfg.epsilon);
      }
      assign_parameters(model, params);
    }

    const Evaluation tr = evaluate(model, train_x, train_y);
    const Evaluation va = evaluate(model, val_x, val_y);
    if (!std::isfinite(tr.loss) || !std::isfinite(va.loss))
      throw NumericError("non-finite loss after epoch " + std::to_string(epoch) + " (train " +
                         std::to_string(tr.loss) + ", validation " + std::to_string(va.loss) + ")");
    meta.curve.push_back({epoch, tr.loss, va.loss, tr.accuracy, va.accuracy, lr});
    meta.epochs_run = epoch;

    if (va.loss < best_val) {
      best_val = va.loss;
      best = params;
      meta.best_epoch = epoch;
      since_best = 0;
      since_change = 0;
    } else {
      ++since_best;
      ++since_change;
    }
    if (since_best >= cfg.patience) {
      meta.stop_reason = "early_stop";
      break;
    }
    if (since_change >= cfg.plateau_patience && lr > cfg.min_learning_rate) {
      lr = std::max(cfg.min_learning_rate, lr * 0.5);
      since_change = 0;
    }
  }
  if (meta.stop_reason.empty()) meta.stop_reason = "max_epochs";

  assign_parameters(model, best);
  const Evaluation tr = evaluate(model, train_x, train_y);
  const Evaluation va = evaluate(model, val_x, val_y);
  meta.final_learning_rate = lr;
  meta.final_train_loss = tr.loss;
  meta.final_val_loss = va.loss;
  model.train_meta = std::move(meta);
  return model;
}

MlpModel train(std::span<const WindowInstance> data, const TrainConfig& cfg) {
  if (data.empty()) throw NumericError("no training data");
  const ProfileKind kind = data.front().kind;
  std::vector<std::vector<double>> inputs;
  std::vector<int> labels;
  inputs.reserve(data.size());
  labels.reserve(data.size());
  for (const auto& w : data) {
    if (w.kind != kind) throw ArgumentError("training data mixes PDP and CDP windows");
    if (w.label == Label::unknown) throw ArgumentError("training data contains unlabeled windows");
    inputs.push_back(model_input(w, cfg.normalization));
    labels.push_back(w.label == Label::present ? 1 : 0);
  }
  const int width = kind == ProfileKind::pdp ? static_cast<int>(data.front().features.size())
                                             : static_cast<int>(data.front().features.size() / 2);
  MlpModel model = make_detector_model(kind, width);
  model.normalization = cfg.normalization;
  initialize_weights(model, cfg.seed);
  MlpModel trained = train_on(std::move(model), inputs, labels, cfg);
  trained.train_meta.channel = data.front().channel;
  trained.train_meta.num_rx = data.front().num_rx;
  return trained;
}

std::int64_t count_flops(const MlpModel& m, const FlopCosts& costs) {
  std::int64_t total = 0;
  for (std::size_t i = 0; i < m.layers.size(); ++i) {
    const auto& l = m.layers[i];
    total += 2 * static_cast<std::int64_t>(l.inputs) * l.outputs;
    total += static_cast<std::int64_t>(l.outputs) *
             (i + 1 < m.layers.size() ? costs.per_hidden_unit : costs.per_output_unit);
  }
  return total;
}

std::int64_t count_correlation_flops(int sequence_length) {
  const std::int64_t L = sequence_length;
  // complex multiply by the stored reciprocal: 6; complex MAC: 8; |.|^2 + accumulate: 3
  return 6 * L + 8 * L * L + 3 * L;
}

std::string serialize_model(const MlpModel& m) {
  json doc;
  doc["format_version"] = kModelFormatVersion;
  doc["input_kind"] = std::string(profile_kind_name(m.input_kind));
  doc["normalization"] = std::string(normalization_name(m.normalization));
  json shapes = json::array();
  json layers = json::array();
  for (const auto& l : m.layers) {
    shapes.push_back({l.inputs, l.outputs});
    layers.push_back({{"inputs", l.inputs}, {"outputs", l.outputs}, {"weights", l.weights}, {"bias", l.bias}});
  }
  doc["layer_shapes"] = shapes;
  doc["layers"] = layers;
  const auto& t = m.train_meta;
  json curve = json::array();
  for (const auto& e : t.curve)
    curve.push_back({{"epoch", e.epoch}, {"train_loss", e.train_loss}, {"val_loss", e.val_loss},
                     {"train_accuracy", e.train_accuracy}, {"val_accuracy", e.val_accuracy},
                     {"learning_rate", e.learning_rate}});
  doc["train_meta"] = {{"seed", t.seed},
                       {"epochs_run", t.epochs_run},
                       {"best_epoch", t.best_epoch},
                       {"initial_learning_rate", t.initial_learning_rate},
                       {"final_learning_rate", t.final_learning_rate},
                       {"final_train_loss", t.final_train_loss},
                       {"final_val_loss", t.final_val_loss},
                       {"stop_reason", t.stop_reason},
                       {"batch_size", t.batch_size},
                       {"max_epochs", t.max_epochs},
                       {"patience", t.patience},
                       {"plateau_patience", t.plateau_patience},
                       {"validation_fraction", t.validation_fraction},
                       {"beta1", t.beta1},
                       {"beta2", t.beta2},
                       {"tool_version", t.tool_version},
                       {"channel", t.channel},
                       {"num_rx", t.num_rx},
                       {"curve", curve}};
  return doc.dump(1) + "\n";
}

MlpModel parse_model(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (!doc.is_object() || !doc.contains("format_version")) throw DataError("model file has no format_version");
    const int version = doc.at("format_version").get<int>();
    if (version != kModelFormatVersion)
      throw DataError("unsupported model format version " + std::to_string(version) + " (expected " +
                      std::to_string(kModelFormatVersion) + ")");
    MlpModel m;
    m.input_kind = parse_profile_kind(doc.at("input_kind").get<std::string>());
    m.normalization = parse_normalization(doc.at("normalization").get<std::string>());
    for (const auto& l : doc.at("layers")) {
      DenseLayer layer;
      layer.inputs = l.at("inputs").get<int>();
      layer.outputs = l.at("outputs").get<int>();
      layer.weights = l.at("weights").get<std::vector<double>>();
      layer.bias = l.at("bias").get<std::vector<double>>();
      m.layers.push_back(std::move(layer));
    }
    const auto& t = doc.at("train_meta");
    auto& meta = m.train_meta;
    meta.seed = t.at("seed").get<std::uint64_t>();
    meta.epochs_run = t.at("epochs_run").get<int>();
    meta.best_epoch = t.at("best_epoch").get<int>();
    meta.initial_learning_rate = t.at("initial_learning_rate").get<double>();
    meta.final_learning_rate = t.at("final_learning_rate").get<double>();
    meta.final_train_loss = t.at("final_train_loss").get<double>();
    meta.final_val_loss = t.at("final_val_loss").get<double>();
    meta.stop_reason = t.at("stop_reason").get<std::string>();
    meta.batch_size = t.at("batch_size").get<int>();
    meta.max_epochs = t.at("max_epochs").get<int>();
    meta.patience = t.at("patience").get<int>();
    meta.plateau_patience = t.at("plateau_patience").get<int>();
    meta.validation_fraction = t.at("validation_fraction").get<double>();
    meta.beta1 = t.at("beta1").get<double>();
    meta.beta2 = t.at("beta2").get<double>();
    meta.tool_version = t.at("tool_version").get<std::string>();
    meta.channel = t.at("channel").get<std::string>();
    meta.num_rx = t.at("num_rx").get<int>();
    for (const auto& e : t.at("curve"))
      meta.curve.push_back({e.at("epoch").get<int>(), e.at("train_loss").get<double>(),
                            e.at("val_loss").get<double>(), e.at("train_accuracy").get<double>(),
                            e.at("val_accuracy").get<double>(), e.at("learning_rate").get<double>()});
    m.validate();
    return m;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed model file: ") + e.what());
  } catch (const ConfigError& e) {
    throw DataError(std::string("malformed model file: ") + e.what());
  } catch (const ArgumentError& e) {
    throw DataError(std::string("malformed model file: ") + e.what());
  }
}

void save_model(const MlpModel& m, const std::filesystem::path& path) {
  m.validate();
  const std::string text = serialize_model(m);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw DataError("failed writing " + path.string());
}

MlpModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

}  // namespace prach
