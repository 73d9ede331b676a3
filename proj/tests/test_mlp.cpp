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

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <regex>
#include <sstream>

#include "prach/errors.hpp"
#include "prach/mlp.hpp"
#include "support.hpp"

using namespace prach;

namespace {

std::vector<double> random_input(std::size_t n, std::mt19937_64& g, double lo = -2.0, double hi = 2.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> x(n);
  for (auto& v : x) v = d(g);
  return x;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("prach_test_" + name);
}

}  // namespace

TEST_SUITE("mlp") {

TEST_CASE("architecture and FLOPS") {
  const auto m = make_detector_model(ProfileKind::pdp);
  REQUIRE(m.layers.size() == 4);
  CHECK(m.layers[0].inputs == 13);
  CHECK(m.layers[0].outputs == 128);
  CHECK(m.layers[1].outputs == 64);
  CHECK(m.layers[2].outputs == 64);
  CHECK(m.layers[3].outputs == 2);
  CHECK(count_flops(m) == 2 * (13 * 128 + 128 * 64 + 64 * 64 + 64 * 2));
  CHECK(count_flops(m) == 28160);
  CHECK(count_flops(make_detector_model(ProfileKind::cdp)) == 31488);
  const int one[] = {1, 1};
  CHECK(count_flops(make_model(one)) == 2);
  CHECK(count_flops(m, FlopCosts{1, 5}) == 28160 + 256 + 10);
  CHECK(count_correlation_flops(139) == 6 * 139 + 8 * 139 * 139 + 3 * 139);
}

TEST_CASE("softmax output") {
  auto m = make_detector_model(ProfileKind::pdp);
  const std::vector<double> x(13, 3.0);
  const auto p0 = forward(m, x);
  CHECK(p0[0] == 0.5);
  CHECK(p0[1] == 0.5);
  std::mt19937_64 g(1);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    initialize_weights(m, seed);
    const auto p = forward(m, random_input(13, g, -50.0, 50.0));
    CHECK(p[0] + p[1] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(p[0] >= 0.0);
    CHECK(p[1] >= 0.0);
  }
  CHECK_THROWS_AS(forward(m, std::vector<double>(12, 0.0)), ArgumentError);
  std::vector<double> bad(13, 0.0);
  bad[4] = std::nan("");
  CHECK_THROWS_AS(forward(m, bad), ArgumentError);
  ForwardWorkspace ws(m);
  const auto x2 = random_input(13, g);
  CHECK(ws.run(x2) == forward(m, x2));
}

TEST_CASE("gradient check") {
  std::mt19937_64 g(2);
  auto m = make_detector_model(ProfileKind::pdp);
  for (std::uint64_t seed : {3u, 4u, 5u}) {
    initialize_weights(m, seed);
    for (int label : {0, 1}) CHECK(gradient_check(m, random_input(13, g), label) < 1e-4);
  }
  // All pre-activations positive: no rectifier kink near the evaluation point.
  initialize_weights(m, 6);
  for (std::size_t i = 0; i + 1 < m.layers.size(); ++i) {
    for (auto& w : m.layers[i].weights) w = 0.3 * std::abs(w);
    for (auto& b : m.layers[i].bias) b = 0.1;
  }
  GradientCheckOptions opts;
  opts.max_parameters = 100000;
  CHECK(gradient_check(m, random_input(13, g, 0.5, 1.5), 1, opts) < 1e-4);

  // Zero input, zero weights: output-bias gradients are finite and mirror each other.
  const auto zero = make_detector_model(ProfileKind::pdp);
  std::vector<double> grad;
  const double loss = loss_and_gradient(zero, std::vector<double>(13, 0.0), 1, grad);
  CHECK(loss == doctest::Approx(std::log(2.0)));
  REQUIRE(grad.size() == zero.parameter_count());
  const double g0 = grad[grad.size() - 2], g1 = grad[grad.size() - 1];
  CHECK(std::isfinite(g0));
  CHECK(std::isfinite(g1));
  CHECK(std::abs(g0) == doctest::Approx(std::abs(g1)));
  CHECK(g0 == doctest::Approx(0.5));
  CHECK(g1 == doctest::Approx(-0.5));
}

TEST_CASE("parameter flattening round trip") {
  auto m = make_detector_model(ProfileKind::pdp);
  initialize_weights(m, 9);
  const auto p = flatten_parameters(m);
  CHECK(p.size() == m.parameter_count());
  auto copy = make_detector_model(ProfileKind::pdp);
  assign_parameters(copy, p);
  CHECK(flatten_parameters(copy) == p);
}

TEST_CASE("separable toy data trains to 100% within 50 epochs") {
  std::mt19937_64 g(4);
  std::uniform_real_distribution<double> small(0.0, 0.5);
  std::uniform_int_distribution<int> pos(0, 12);
  std::vector<std::vector<double>> x;
  std::vector<int> y;
  for (int i = 0; i < 2000; ++i) {
    std::vector<double> v(13);
    for (auto& e : v) e = small(g);
    const int label = i % 2;
    if (label == 1) v[static_cast<std::size_t>(pos(g))] = 10.0;
    x.push_back(v);
    y.push_back(label);
  }
  TrainConfig cfg;
  cfg.max_epochs = 50;
  cfg.patience = 50;
  cfg.normalization = Normalization::none;
  auto init = make_detector_model(ProfileKind::pdp);
  initialize_weights(init, 1);
  const auto m = train_on(init, x, y, cfg);
  CHECK(m.train_meta.epochs_run <= 50);
  CHECK(evaluate(m, x, y).accuracy == 1.0);

  // Determinism: same data and seed give identical weights.
  const auto again = train_on(init, x, y, cfg);
  CHECK(flatten_parameters(again) == flatten_parameters(m));

  std::vector<int> single(y.size(), 1);
  CHECK_THROWS_AS(train_on(init, x, single, cfg), NumericError);
}

TEST_CASE("training configuration validation") {
  TrainConfig cfg;
  cfg.batch_size = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = TrainConfig{};
  cfg.validation_fraction = 1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("serialization") {
  auto m = make_detector_model(ProfileKind::pdp);
  initialize_weights(m, 21);
  m.train_meta.seed = 21;
  m.train_meta.stop_reason = "max_epochs";
  const auto path = temp_path("model.json");
  save_model(m, path);
  const auto back = load_model(path);
  CHECK(flatten_parameters(back) == flatten_parameters(m));
  CHECK(serialize_model(back) == serialize_model(m));
  std::mt19937_64 g(5);
  for (int i = 0; i < 100; ++i) {
    const auto x = random_input(13, g, 0.0, 20.0);
    CHECK(forward(back, x) == forward(m, x));
  }

  const std::string text = serialize_model(m);
  CHECK_THROWS_AS(parse_model(text.substr(0, text.size() / 2)), DataError);
  std::string versioned = text;
  const std::regex version_field("\"format_version\":\\s*1");
  REQUIRE(std::regex_search(versioned, version_field));
  versioned = std::regex_replace(versioned, version_field, "\"format_version\": 99");
  try {
    parse_model(versioned);
    FAIL("expected a version error");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("version") != std::string::npos);
  }
  {
    std::ofstream out(path, std::ios::trunc);
    out << text.substr(0, 100);
  }
  CHECK_THROWS_AS(load_model(path), DataError);
  CHECK_THROWS_AS(load_model(temp_path("missing.json")), DataError);
  std::filesystem::remove(path);
}

TEST_CASE("desk-scale TDL-C model") {
  const auto& fx = fixture::tdlc_model();
  const auto& m = fx.model;
  std::vector<std::vector<double>> x;
  std::vector<int> y;
  for (const auto& w : fx.test) {
    x.push_back(model_input(w, m.normalization));
    y.push_back(w.label == Label::present ? 1 : 0);
  }
  const auto test = evaluate(m, x, y);
  MESSAGE("TDL-C 1 RX test accuracy " << test.accuracy << " over " << y.size() << " windows");
  CHECK(test.accuracy >= 0.85);
  CHECK(m.train_meta.tool_version == kToolVersion);
  CHECK(m.train_meta.channel == "tdlc300");

  // A noiseless peak is confidently present.
  WindowInstance w;
  w.features.assign(13, 0.0);
  w.features[9] = 1.0;
  w.profile_mean = 1.0 / 139.0;
  CHECK(forward(m, model_input(w, m.normalization))[1] > 0.99);
}

}  // TEST_SUITE
