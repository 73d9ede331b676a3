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
#include <map>
#include <set>

#include "prach/dataset.hpp"
#include "prach/errors.hpp"
#include "prach/mlp.hpp"
#include "prach/rng.hpp"

using namespace prach;

namespace {

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("prach_test_" + name);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::size_t count_lines(const std::filesystem::path& p) {
  const auto text = slurp(p);
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

DatasetSpec small_spec(int instances = 40) {
  DatasetSpec spec;
  spec.instances_per_snr = instances;
  spec.seed = 3;
  return spec;
}

bool same_window(const WindowInstance& a, const WindowInstance& b) {
  return a.features == b.features && a.kind == b.kind && a.base_index == b.base_index &&
         a.window_index == b.window_index && a.rapid == b.rapid && a.label == b.label &&
         a.profile_mean == b.profile_mean && a.num_rx == b.num_rx && a.channel == b.channel &&
         a.true_delay_samples == b.true_delay_samples && a.true_delay_bins == b.true_delay_bins &&
         (a.snr_db == b.snr_db || (std::isnan(a.snr_db) && std::isnan(b.snr_db)));
}

}  // namespace

TEST_SUITE("dataset") {

TEST_CASE("default spec size") {
  const DatasetSpec spec;
  CHECK(spec.snr_db == std::vector<double>{-20, -15, -10, -5, 0, 5, 10, 15, 20});
  CHECK(spec.instances_per_snr == 10000);
  CHECK(spec.snr_db.size() * static_cast<std::size_t>(spec.instances_per_snr) == 90000);
}

TEST_CASE("generation: line count, stratification and labels") {
  const auto spec = small_spec(40);
  const auto data = generate_instances(spec);
  REQUIRE(data.size() == 9 * 40);
  std::map<double, std::pair<int, int>> per_snr;
  for (const auto& w : data) {
    auto& [present, absent] = per_snr[w.snr_db];
    if (w.label == Label::present) {
      ++present;
      REQUIRE(w.true_delay_bins.has_value());
      CHECK(*w.true_delay_bins >= 0);
      CHECK(*w.true_delay_bins <= 12);
      CHECK(*w.true_delay_samples < 12.5 * 4096.0 / 139.0);
    } else {
      ++absent;
      CHECK_FALSE(w.true_delay_bins.has_value());
    }
    CHECK(w.rapid == 10 * w.base_index + w.window_index);
    CHECK(w.rapid < 64);
    CHECK(w.features.size() == 13);
    CHECK(w.channel == "tdlc300");
  }
  for (const auto& [snr, counts] : per_snr) {
    CHECK(counts.first == 20);
    CHECK(counts.second == 20);
  }
  int present = 0;
  for (int j = 0; j < 1000; ++j) present += is_present_instance(j, 0.3);
  CHECK(present == 300);
}

TEST_CASE("generation is byte-identical across runs and thread counts") {
  auto spec = small_spec(30);
  const auto a = temp_path("gen_a.jsonl"), b = temp_path("gen_b.jsonl");
  spec.threads = 1;
  write_dataset(a, generate_instances(spec), provenance_of(spec));
  spec.threads = 3;
  write_dataset(b, generate_instances(spec), provenance_of(spec));
  CHECK(count_lines(a) == 270);
  CHECK(slurp(a) == slurp(b));
  spec.seed = 4;
  write_dataset(b, generate_instances(spec), provenance_of(spec));
  CHECK(slurp(a) != slurp(b));
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}

TEST_CASE("JSON lines and gzip round trip") {
  auto spec = small_spec(10);
  spec.input_kind = ProfileKind::cdp;
  const auto data = generate_instances(spec);
  for (const auto& name : {"rt.jsonl", "rt.jsonl.gz"}) {
    const auto p = temp_path(name);
    write_dataset(p, data, provenance_of(spec));
    const auto back = read_dataset(p);
    REQUIRE(back.size() == data.size());
    for (std::size_t i = 0; i < data.size(); ++i) CHECK(same_window(back[i], data[i]));
    if (std::string(name).ends_with(".gz")) {
      const auto bytes = slurp(p);
      REQUIRE(bytes.size() > 2);
      CHECK(static_cast<unsigned char>(bytes[0]) == 0x1f);
      CHECK(static_cast<unsigned char>(bytes[1]) == 0x8b);
    }
    std::filesystem::remove(p);
  }
  const std::string line = window_to_json_line(data[0], provenance_of(spec), 0);
  CHECK(line.find("\"generator\":\"" + std::string(kToolVersion) + "\"") != std::string::npos);
  try {
    window_from_json_line("{\"snr_db\": 1", 7);
    FAIL("expected a data error");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("line 7") != std::string::npos);
  }
}

TEST_CASE("stratified split") {
  // 9 SNRs x 10000 balanced instances: 67500 / 22500.
  std::vector<WindowInstance> data;
  data.reserve(90000);
  for (int s = 0; s < 9; ++s)
    for (int j = 0; j < 10000; ++j) {
      WindowInstance w;
      w.snr_db = -20.0 + 5.0 * s;
      w.label = j % 2 ? Label::present : Label::absent;
      w.features = {static_cast<double>(s * 10000 + j)};
      data.push_back(std::move(w));
    }
  const auto [train, test] = split_dataset(data, 0.75, 5);
  CHECK(train.size() == 67500);
  CHECK(test.size() == 22500);
  std::set<double> ids;
  for (const auto& w : train) ids.insert(w.features[0]);
  for (const auto& w : test) ids.insert(w.features[0]);
  CHECK(ids.size() == 90000);
  std::map<std::pair<double, int>, int> strata;
  for (const auto& w : train) ++strata[{w.snr_db, static_cast<int>(w.label)}];
  for (const auto& [key, n] : strata) CHECK(n == 3750);

  const auto [train2, test2] = split_dataset(data, 0.75, 5);
  REQUIRE(train2.size() == train.size());
  for (std::size_t i = 0; i < train.size(); ++i) CHECK(train2[i].features == train[i].features);

  CHECK_THROWS_AS(split_dataset(data, 1.0, 5), ConfigError);
  CHECK_THROWS_AS(split_dataset(data, 0.0, 5), ConfigError);
  std::vector<WindowInstance> lonely(1);
  lonely[0].snr_db = 0.0;
  lonely[0].label = Label::present;
  CHECK_THROWS_AS(split_dataset(lonely, 0.5, 5), DataError);
}

TEST_CASE("capture export and import reproduce the direct pipeline") {
  const RootSet roots;
  const PreambleConfig tmpl{};
  std::vector<CaptureOccasion> occasions;
  for (int i = 0; i < 4; ++i) {
    ChannelConfig c;
    c.model = ChannelModel::tdlc300;
    c.num_rx = 2;
    c.snr_db = 5.0;
    c.seed = static_cast<std::uint64_t>(40 + i);
    c.delay_samples = 50.0 * i;
    const int rapid = 11 * i + 2;
    CaptureOccasion occ;
    occ.grid = simulate_reception(roots.config_for_rapid(rapid, tmpl), c, i != 3);
    occ.label_known = true;
    if (i != 3) occ.label_rapid = rapid;
    occasions.push_back(std::move(occ));
  }
  const auto path = temp_path("capture.csv");
  write_capture(path, occasions, "channel: tdlc300\nnum_rx: 2");
  CHECK(slurp(path).find("# num_rx: 2\n") != std::string::npos);

  CaptureMeta meta;
  meta.snr_db = 5.0;
  meta.channel = "tdlc300";
  const auto back = read_capture(path, meta);
  REQUIRE(back.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    REQUIRE(back[i].grid.num_rx() == 2);
    for (int a = 0; a < 2; ++a)
      CHECK(back[i].grid.antennas[static_cast<std::size_t>(a)].values ==
            occasions[i].grid.antennas[static_cast<std::size_t>(a)].values);
    CHECK(back[i].label_rapid == occasions[i].label_rapid);
  }

  const auto imported = import_capture(path, meta, ProfileKind::pdp);
  std::vector<WindowInstance> direct;
  for (const auto& occ : occasions) {
    auto w = occasion_windows(occ.grid, roots, ProfileKind::pdp, occ.label_rapid, true, 5.0, "tdlc300");
    direct.insert(direct.end(), w.begin(), w.end());
  }
  REQUIRE(imported.size() == 4 * 64);
  REQUIRE(direct.size() == imported.size());
  for (std::size_t i = 0; i < direct.size(); ++i) CHECK(same_window(imported[i], direct[i]));
  int present = 0;
  for (const auto& w : imported) present += w.label == Label::present;
  CHECK(present == 3);
  std::filesystem::remove(path);
}

TEST_CASE("malformed capture line is reported by number and nothing is written") {
  const auto path = temp_path("bad_capture.csv");
  {
    std::ofstream out(path);
    out << "# comment\n";
    out << "none";
    for (int i = 0; i < 278; ++i) out << ",0.5";
    out << "\n3";
    for (int i = 0; i < 100; ++i) out << ",0.5";
    out << "\n";
  }
  const auto out_path = temp_path("bad_capture_out.jsonl");
  std::filesystem::remove(out_path);
  try {
    const auto w = import_capture(path, CaptureMeta{}, ProfileKind::pdp);
    write_dataset(out_path, w, DatasetProvenance{});
    FAIL("expected a data error");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_FALSE(std::filesystem::exists(out_path));
  {
    std::ofstream out(path);
    out << "99,1,2\n";
  }
  CHECK_THROWS_AS(read_capture(path, CaptureMeta{}), DataError);
  std::filesystem::remove(path);
}

TEST_CASE("unlabeled captures cannot be used for training") {
  std::vector<CaptureOccasion> occasions(1);
  ChannelConfig c;
  c.snr_db = 0.0;
  c.seed = 2;
  occasions[0].grid = simulate_reception(PreambleConfig{}, c, true);
  const auto path = temp_path("unlabeled.csv");
  write_capture(path, occasions);
  const auto windows = import_capture(path, CaptureMeta{}, ProfileKind::pdp);
  REQUIRE(windows.size() == 64);
  for (const auto& w : windows) CHECK(w.label == Label::unknown);
  CHECK_THROWS_AS(train(windows, TrainConfig{}), ArgumentError);
  std::filesystem::remove(path);
}

TEST_CASE("spec validation") {
  DatasetSpec spec;
  spec.instances_per_snr = 0;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec = DatasetSpec{};
  spec.present_ratio = 1.5;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec = DatasetSpec{};
  spec.snr_db.clear();
  CHECK_THROWS_AS(spec.validate(), ConfigError);
}

}  // TEST_SUITE
