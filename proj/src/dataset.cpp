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

#include "prach/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include <json.hpp>

#include "prach/errors.hpp"
#include "prach/parallel.hpp"
#include "prach/ta_estimator.hpp"
#include "text_io.hpp"

namespace prach {

using json = nlohmann::json;

void DatasetSpec::validate() const {
  if (snr_db.empty()) throw ConfigError("SNR list is empty");
  for (double s : snr_db)
    if (!std::isfinite(s)) throw ConfigError("SNR values must be finite");
  if (instances_per_snr < 1) throw ConfigError("instances per SNR must be positive");
  if (num_rx < 1) throw ConfigError("num_rx must be >= 1");
  if (!(present_ratio >= 0.0 && present_ratio <= 1.0)) throw ConfigError("present ratio must lie in [0, 1]");
  if (!(max_delay_bins > 0.0 && max_delay_bins <= preamble.cyclic_shift))
    throw ConfigError("maximum delay must lie in (0, N_CS] bins");
  PreambleConfig p = preamble;
  p.preamble_index = 0;
  p.validate();
  roots.validate(p);
}

bool is_present_instance(int j, double ratio) {
  const auto before = static_cast<long long>(std::floor(static_cast<double>(j) * ratio + 1e-12));
  const auto after = static_cast<long long>(std::floor(static_cast<double>(j + 1) * ratio + 1e-12));
  return after > before;
}

Occasion draw_occasion(const DatasetSpec& spec, double snr_db, std::uint64_t index, bool present) {
  Rng rng(spec.seed, index);
  Occasion occ;
  occ.present = present;
  occ.rapid = rng.uniform_int(0, spec.roots.max_rapids - 1);
  occ.user = spec.roots.config_for_rapid(occ.rapid, spec.preamble);
  occ.base_index = occ.rapid / spec.preamble.windows_per_root();

  ChannelConfig ch;
  ch.model = spec.channel;
  ch.num_rx = spec.num_rx;
  ch.delay_spread_s = spec.delay_spread_s;
  ch.snr_db = snr_db;

  if (present) {
    const double max_delay = spec.max_delay_bins * spec.preamble.samples_per_bin();
    for (int attempt = 0;; ++attempt) {
      if (attempt == 1000) throw NumericError("could not draw a delay with an in-window TA label");
      const double delay = rng.uniform(0.0, max_delay);
      const int bins = ground_truth_bins(delay, ch, spec.preamble);
      if (bins >= 0 && bins <= spec.preamble.cyclic_shift - 1) {
        occ.delay_samples = delay;
        occ.truth_bins = bins;
        break;
      }
    }
  }
  ch.delay_samples = occ.delay_samples;
  ch.seed = rng.engine()();
  occ.grid = simulate_reception(occ.user, ch, present);
  return occ;
}

WindowInstance occasion_window(const Occasion& occ, const DatasetSpec& spec, ProfileKind kind) {
  PreambleConfig root = occ.user;
  root.preamble_index = 0;
  const Correlator& corr = correlator_for(root);
  const auto profile = kind == ProfileKind::pdp ? corr.pdp(occ.grid) : corr.cdp(occ.grid);
  auto windows = extract_windows(profile, root, occ.base_index, spec.roots);
  WindowInstance w = std::move(windows[static_cast<std::size_t>(occ.user.preamble_index)]);
  w.label = occ.present ? Label::present : Label::absent;
  w.snr_db = occ.grid.channel.snr_db;
  w.channel = std::string(channel_model_name(spec.channel));
  w.num_rx = spec.num_rx;
  if (occ.present) {
    w.true_delay_samples = occ.delay_samples;
    w.true_delay_bins = occ.truth_bins;
  }
  return w;
}

std::vector<WindowInstance> generate_instances(const DatasetSpec& spec) {
  spec.validate();
  const auto per_snr = static_cast<std::size_t>(spec.instances_per_snr);
  const std::size_t total = spec.snr_db.size() * per_snr;
  std::vector<WindowInstance> out(total);
  parallel_for(total, spec.threads, [&](std::size_t i) {
    const std::size_t s = i / per_snr;
    const int j = static_cast<int>(i % per_snr);
    const bool present = is_present_instance(j, spec.present_ratio);
    const Occasion occ = draw_occasion(spec, spec.snr_db[s], i, present);
    out[i] = occasion_window(occ, spec, spec.input_kind);
  });
  return out;
}

DatasetProvenance provenance_of(const DatasetSpec& spec) {
  DatasetProvenance p;
  p.seed = spec.seed;
  p.fft_size = spec.preamble.fft_size;
  p.sequence_length = spec.preamble.sequence_length;
  p.cyclic_shift = spec.preamble.cyclic_shift;
  p.scs_hz = spec.preamble.scs_hz;
  p.delay_spread_s = spec.delay_spread_s;
  return p;
}

std::string window_to_json_line(const WindowInstance& w, const DatasetProvenance& prov, std::uint64_t index) {
  // Ordered keys keep the byte layout fixed.
  nlohmann::ordered_json j;
  j["snr_db"] = std::isfinite(w.snr_db) ? json(w.snr_db) : json(nullptr);
  j["channel"] = w.channel;
  j["num_rx"] = w.num_rx;
  j["input_kind"] = std::string(profile_kind_name(w.kind));
  j["base_index"] = w.base_index;
  j["window_index"] = w.window_index;
  j["rapid"] = w.rapid >= 0 ? json(w.rapid) : json(nullptr);
  j["label"] = std::string(label_name(w.label));
  j["true_delay_samples"] = w.true_delay_samples ? json(*w.true_delay_samples) : json(nullptr);
  j["true_delay_bins"] = w.true_delay_bins ? json(*w.true_delay_bins) : json(nullptr);
  j["profile_mean"] = w.profile_mean;
  j["features"] = w.features;
  j["meta"] = {{"generator", prov.generator},   {"source", prov.source},
               {"seed", prov.seed},             {"instance", index},
               {"fft_size", prov.fft_size},     {"sequence_length", prov.sequence_length},
               {"cyclic_shift", prov.cyclic_shift}, {"scs_hz", prov.scs_hz},
               {"delay_spread_s", prov.delay_spread_s}};
  return j.dump() + "\n";
}

WindowInstance window_from_json_line(const std::string& line, std::size_t line_number) {
  const auto fail = [&](const std::string& why) {
    return DataError("dataset line " + std::to_string(line_number) + ": " + why);
  };
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw fail(std::string("invalid JSON (") + e.what() + ")");
  }
  try {
    WindowInstance w;
    w.snr_db = j.at("snr_db").is_null() ? std::numeric_limits<double>::quiet_NaN() : j.at("snr_db").get<double>();
    w.channel = j.at("channel").get<std::string>();
    w.num_rx = j.at("num_rx").get<int>();
    w.kind = parse_profile_kind(j.at("input_kind").get<std::string>());
    w.base_index = j.at("base_index").get<int>();
    w.window_index = j.at("window_index").get<int>();
    w.rapid = j.at("rapid").is_null() ? -1 : j.at("rapid").get<int>();
    w.label = parse_label(j.at("label").get<std::string>());
    if (!j.at("true_delay_samples").is_null()) w.true_delay_samples = j.at("true_delay_samples").get<double>();
    if (j.contains("true_delay_bins") && !j.at("true_delay_bins").is_null())
      w.true_delay_bins = j.at("true_delay_bins").get<int>();
    w.profile_mean = j.at("profile_mean").get<double>();
    w.features = j.at("features").get<std::vector<double>>();
    if (w.features.empty()) throw fail("empty feature vector");
    return w;
  } catch (const json::exception& e) {
    throw fail(std::string("missing or mistyped field (") + e.what() + ")");
  } catch (const ConfigError& e) {
    throw fail(e.what());
  }
}

void write_dataset(const std::filesystem::path& path, const std::vector<WindowInstance>& data,
                   const DatasetProvenance& prov) {
  detail::LineWriter out(path);
  for (std::size_t i = 0; i < data.size(); ++i) out.write(window_to_json_line(data[i], prov, i));
  out.close();
}

std::vector<WindowInstance> read_dataset(const std::filesystem::path& path) {
  detail::LineReader in(path);
  std::vector<WindowInstance> out;
  std::string line;
  std::size_t n = 0;
  while (in.next(line)) {
    ++n;
    if (line.empty()) continue;
    out.push_back(window_from_json_line(line, n));
  }
  return out;
}

std::pair<std::vector<WindowInstance>, std::vector<WindowInstance>> split_dataset(
    const std::vector<WindowInstance>& data, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw ConfigError("split fraction must lie in (0, 1)");
  if (data.empty()) throw DataError("cannot split an empty dataset");
  // NaN SNRs (unknown) share one stratum per label.
  std::map<std::pair<double, int>, std::vector<std::size_t>> strata;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double snr = std::isnan(data[i].snr_db) ? -std::numeric_limits<double>::infinity() : data[i].snr_db;
    strata[{snr, static_cast<int>(data[i].label)}].push_back(i);
  }
  std::vector<char> in_first(data.size(), 0);
  std::uint64_t stratum_id = 0;
  for (auto& [key, idx] : strata) {
    if (idx.size() < 2)
      throw DataError("stratum (snr " + std::to_string(key.first) + ", label " +
                      std::string(label_name(static_cast<Label>(key.second))) + ") has fewer than two instances");
    Rng rng(seed, stratum_id++);
    std::shuffle(idx.begin(), idx.end(), rng.engine());
    const auto take = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(idx.size())));
    for (std::size_t i = 0; i < take; ++i) in_first[idx[i]] = 1;
  }
  std::pair<std::vector<WindowInstance>, std::vector<WindowInstance>> out;
  for (std::size_t i = 0; i < data.size(); ++i) (in_first[i] ? out.first : out.second).push_back(data[i]);
  return out;
}

namespace {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::vector<CaptureOccasion> read_capture(const std::filesystem::path& path, const CaptureMeta& meta) {
  PreambleConfig tmpl = meta.preamble;
  tmpl.preamble_index = 0;
  tmpl.validate();
  const auto L = static_cast<std::size_t>(tmpl.sequence_length);
  detail::LineReader in(path);
  std::vector<CaptureOccasion> out;
  std::string line;
  std::size_t n = 0;
  while (in.next(line)) {
    ++n;
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto fail = [&](const std::string& why) {
      return DataError(path.string() + ": line " + std::to_string(n) + ": " + why);
    };
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    const auto trim = [](std::string_view s) {
      while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
      while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
      return s;
    };
    CaptureOccasion occ;
    occ.line_number = n;
    const std::string_view label = trim(fields.front());
    if (label == "?" || label.empty()) {
      occ.label_known = false;
    } else if (label == "none") {
      occ.label_known = true;
    } else {
      int rapid = -1;
      const auto res = std::from_chars(label.data(), label.data() + label.size(), rapid);
      if (res.ec != std::errc() || res.ptr != label.data() + label.size() || rapid < 0 ||
          rapid >= meta.roots.max_rapids)
        throw fail("invalid label '" + std::string(label) + "' (expected a RAPID, 'none' or '?')");
      occ.label_known = true;
      occ.label_rapid = rapid;
    }
    const std::size_t values = fields.size() - 1;
    if (values == 0 || values % (2 * L) != 0)
      throw fail("expected a multiple of " + std::to_string(2 * L) + " values, got " + std::to_string(values));
    const auto antennas = static_cast<int>(values / (2 * L));
    if (meta.num_rx > 0 && antennas != meta.num_rx)
      throw fail("expected " + std::to_string(meta.num_rx) + " antennas, got " + std::to_string(antennas));
    if (!out.empty() && antennas != out.front().grid.num_rx())
      throw fail("antenna count differs from earlier occasions");
    occ.grid.preamble = tmpl;
    occ.grid.channel.num_rx = antennas;
    occ.grid.channel.snr_db = meta.snr_db;
    occ.grid.antennas.assign(static_cast<std::size_t>(antennas), ComplexSeq{std::vector<cplx>(L), Domain::freq});
    for (std::size_t v = 0; v < values; ++v) {
      const std::string_view f = trim(fields[v + 1]);
      double x = 0.0;
      const auto res = std::from_chars(f.data(), f.data() + f.size(), x);
      if (res.ec != std::errc() || res.ptr != f.data() + f.size() || !std::isfinite(x))
        throw fail("field " + std::to_string(v + 2) + " is not a finite number: '" + std::string(f) + "'");
      const std::size_t pair = v / 2;
      auto& slot = occ.grid.antennas[pair / L].values[pair % L];
      if (v % 2 == 0) slot.real(x);
      else slot.imag(x);
    }
    out.push_back(std::move(occ));
  }
  return out;
}

void write_capture(const std::filesystem::path& path, const std::vector<CaptureOccasion>& occasions,
                   const std::string& header_comment) {
  std::string text = "# label,re,im,... (antenna-major, " + std::string(kGeneratorVersion) + ")\n";
  std::size_t start = 0;
  while (start < header_comment.size()) {
    auto end = header_comment.find('\n', start);
    if (end == std::string::npos) end = header_comment.size();
    text += "# " + header_comment.substr(start, end - start) + "\n";
    start = end + 1;
  }
  for (const auto& occ : occasions) {
    if (!occ.label_known) text += "?";
    else if (occ.label_rapid) text += std::to_string(*occ.label_rapid);
    else text += "none";
    for (const auto& antenna : occ.grid.antennas)
      for (const auto& v : antenna.values) {
        text += ',';
        text += format_double(v.real());
        text += ',';
        text += format_double(v.imag());
      }
    text += '\n';
  }
  detail::write_file_atomically(path, text);
}

std::vector<WindowInstance> occasion_windows(const RxGrid& grid, const RootSet& roots, ProfileKind kind,
                                             std::optional<int> label_rapid, bool label_known,
                                             double snr_db, const std::string& channel) {
  std::vector<WindowInstance> out;
  const int per_root = grid.preamble.windows_per_root();
  for (std::size_t b = 0; b < roots.roots.size(); ++b) {
    const int base_index = static_cast<int>(b);
    if (roots.rapid(base_index, 0, per_root) < 0) break;
    PreambleConfig root = grid.preamble;
    root.root = roots.roots[b];
    root.preamble_index = 0;
    const Correlator& corr = correlator_for(root);
    const auto profile = kind == ProfileKind::pdp ? corr.pdp(grid) : corr.cdp(grid);
    for (auto& w : extract_windows(profile, root, base_index, roots)) {
      if (w.rapid < 0) continue;
      if (label_known) w.label = (label_rapid && *label_rapid == w.rapid) ? Label::present : Label::absent;
      else w.label = Label::unknown;
      w.snr_db = snr_db;
      w.channel = channel;
      out.push_back(std::move(w));
    }
  }
  return out;
}

std::vector<WindowInstance> import_capture(const std::filesystem::path& path, const CaptureMeta& meta,
                                           ProfileKind kind) {
  const auto occasions = read_capture(path, meta);
  std::vector<WindowInstance> out;
  for (const auto& occ : occasions) {
    auto windows = occasion_windows(occ.grid, meta.roots, kind, occ.label_rapid, occ.label_known, meta.snr_db,
                                    meta.channel);
    out.insert(out.end(), std::make_move_iterator(windows.begin()), std::make_move_iterator(windows.end()));
  }
  return out;
}

}  // namespace prach
