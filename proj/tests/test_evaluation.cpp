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
#include <iterator>
#include <sstream>

#include "prach/errors.hpp"
#include "prach/evaluation.hpp"
#include "support.hpp"

using namespace prach;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_SUITE("evaluation") {

TEST_CASE("sweep rows, metrics and determinism across thread counts") {
  const auto& m = fixture::tdlc_model().model;
  EvalSpec spec;
  spec.snr_db = {-10.0, 20.0};
  spec.trials = 2000;
  spec.calibration_profiles = 5000;
  spec.threads = 1;
  EvalTarget target;
  target.models = {&m};
  const auto a = run_evaluation({target}, spec);
  REQUIRE(a.rows.size() == 4);
  REQUIRE(a.alphas.size() == 1);
  CHECK(a.alphas[0] > 1.0);
  for (const auto& r : a.rows) {
    CHECK(r.n_trials == 2000);
    CHECK(r.channel == "tdlc300");
    CHECK(r.num_rx == 1);
    CHECK(r.detector_input == "pdp");
    CHECK(r.p_detect >= 0.0);
    CHECK(r.p_detect <= 1.0);
    CHECK(r.ta_acc_tol1 >= r.ta_acc_exact);
  }
  const auto hybrid_20 = std::find_if(a.rows.begin(), a.rows.end(), [](const EvalRow& r) {
    return r.receiver == "hybrid" && r.snr_db == 20.0;
  });
  REQUIRE(hybrid_20 != a.rows.end());
  MESSAGE("hybrid TDL-C 1 RX at 20 dB: p_detect " << hybrid_20->p_detect);
  CHECK(hybrid_20->p_detect >= 0.999);

  spec.threads = 3;
  const auto b = run_evaluation({target}, spec);
  REQUIRE(b.rows.size() == a.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].p_detect == b.rows[i].p_detect);
    CHECK(a.rows[i].p_false_alarm == b.rows[i].p_false_alarm);
    CHECK(a.rows[i].ta_acc_exact == b.rows[i].ta_acc_exact);
  }

  const auto path = std::filesystem::temp_directory_path() / "prach_test_eval.csv";
  write_eval_csv(path, a, eval_header(spec, {target}, a));
  const auto text = slurp(path);
  CHECK(text.find(std::string(kEvalCsvColumns) + "\n") != std::string::npos);
  CHECK(text.find("# ") == 0);
  CHECK(text.find("alpha") != std::string::npos);
  CHECK(text.find(kToolVersion) != std::string::npos);
  std::istringstream lines(text);
  std::string line;
  int data_lines = 0;
  while (std::getline(lines, line))
    if (!line.empty() && line[0] != '#' && line.rfind("channel,", 0) != 0) ++data_lines;
  CHECK(data_lines == 4);
  const auto plot = std::filesystem::temp_directory_path() / "prach_test_eval.gp";
  write_plot_script(plot, a, "test");
  CHECK(slurp(plot).find("plot") != std::string::npos);
  std::filesystem::remove(path);
  std::filesystem::remove(plot);
}

TEST_CASE("fixed alpha is used as given") {
  EvalSpec spec;
  spec.snr_db = {0.0};
  spec.trials = 200;
  EvalTarget target;
  target.channel = ChannelModel::awgn;
  target.alpha = 1e9;
  const auto r = run_evaluation({target}, spec);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.alphas[0] == 1e9);
  CHECK(r.rows[0].p_detect == 0.0);
  CHECK(r.rows[0].p_false_alarm == 0.0);
}

TEST_CASE("spec validation") {
  EvalSpec spec;
  spec.trials = 0;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec = EvalSpec{};
  spec.snr_db.clear();
  CHECK_THROWS_AS(spec.validate(), ConfigError);
}

}  // TEST_SUITE
