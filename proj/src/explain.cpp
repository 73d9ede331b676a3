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

#include "prach/explain.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "prach/errors.hpp"
#include "prach/parallel.hpp"
#include "prach/rng.hpp"
#include "text_io.hpp"

namespace prach {

namespace {

void check_shapes(const MlpModel& m, std::span<const double> x, std::span<const double> baseline) {
  if (static_cast<int>(x.size()) != m.input_size() || baseline.size() != x.size())
    throw ArgumentError("input and baseline must match the model input size");
}

std::size_t argmax(std::span<const double> v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

Attribution shapley_values(const MlpModel& m, std::span<const double> x, std::span<const double> baseline) {
  if (m.input_kind != ProfileKind::pdp)
    throw ArgumentError("exact Shapley values are only supported for PDP models; use shapley_sampled");
  check_shapes(m, x, baseline);
  const int n = static_cast<int>(x.size());
  if (n > kMaxExactShapleyInputs) throw ArgumentError("too many inputs for exact enumeration");

  const std::size_t coalitions = std::size_t{1} << n;
  std::vector<double> value(coalitions);
  std::vector<double> probe(baseline.begin(), baseline.end());
  ForwardWorkspace ws(m);
  for (std::size_t mask = 0; mask < coalitions; ++mask) {
    for (int i = 0; i < n; ++i) probe[static_cast<std::size_t>(i)] = (mask >> i) & 1U ? x[static_cast<std::size_t>(i)] : baseline[static_cast<std::size_t>(i)];
    value[mask] = ws.run(probe)[1];
  }

  // weight(s) = s! (n - s - 1)! / n!
  std::vector<double> weight(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s)
    weight[static_cast<std::size_t>(s)] = std::exp(std::lgamma(s + 1.0) + std::lgamma(n - s) - std::lgamma(n + 1.0));

  Attribution out;
  out.values.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    const std::size_t bit = std::size_t{1} << i;
    double acc = 0.0;
    for (std::size_t mask = 0; mask < coalitions; ++mask) {
      if (mask & bit) continue;
      acc += weight[static_cast<std::size_t>(std::popcount(mask))] * (value[mask | bit] - value[mask]);
    }
    out.values[static_cast<std::size_t>(i)] = acc;
  }
  out.f_x = value[coalitions - 1];
  out.f_baseline = value[0];
  return out;
}

SampledAttribution shapley_sampled(const MlpModel& m, std::span<const double> x,
                                   std::span<const double> baseline, int permutations, std::uint64_t seed) {
  check_shapes(m, x, baseline);
  if (permutations < 2) throw ArgumentError("need at least two permutations");
  const std::size_t n = x.size();
  std::vector<double> sum(n, 0.0), sum_sq(n, 0.0);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> probe(n);
  ForwardWorkspace ws(m);
  Rng rng(seed, 0x5ab1e);
  for (int p = 0; p < permutations; ++p) {
    std::shuffle(order.begin(), order.end(), rng.engine());
    std::copy(baseline.begin(), baseline.end(), probe.begin());
    double prev = ws.run(probe)[1];
    for (std::size_t idx : order) {
      probe[idx] = x[idx];
      const double cur = ws.run(probe)[1];
      const double delta = cur - prev;
      sum[idx] += delta;
      sum_sq[idx] += delta * delta;
      prev = cur;
    }
  }
  SampledAttribution out;
  out.mean.resize(n);
  out.std_error.resize(n);
  const double k = permutations;
  for (std::size_t i = 0; i < n; ++i) {
    out.mean[i] = sum[i] / k;
    const double var = std::max(0.0, (sum_sq[i] - k * out.mean[i] * out.mean[i]) / (k - 1.0));
    out.std_error[i] = std::sqrt(var / k);
  }
  return out;
}

std::vector<double> mean_baseline(const MlpModel& m, std::span<const WindowInstance> reference) {
  std::vector<double> mean(static_cast<std::size_t>(m.input_size()), 0.0);
  if (reference.empty()) return mean;
  for (const auto& w : reference) {
    const auto x = model_input(w, m.normalization);
    if (x.size() != mean.size()) throw ArgumentError("reference window does not match the model input");
    for (std::size_t i = 0; i < x.size(); ++i) mean[i] += x[i];
  }
  for (auto& v : mean) v /= static_cast<double>(reference.size());
  return mean;
}

ExplainReport explain_report(const MlpModel& m, std::span<const WindowInstance> slice,
                             std::span<const double> baseline, unsigned threads) {
  ExplainReport report;
  report.inputs = static_cast<std::size_t>(m.input_size());
  report.rows.resize(slice.size());
  parallel_for(slice.size(), threads, [&](std::size_t i) {
    if (slice[i].kind != m.input_kind) throw ArgumentError("window kind does not match the model");
    auto& row = report.rows[i];
    row.instance = i;
    row.input = model_input(slice[i], m.normalization);
    row.attribution = shapley_values(m, row.input, baseline);
  });

  auto& s = report.summary;
  s.instances = slice.size();
  double total_abs = 0.0, neighbor_abs = 0.0, peak_abs = 0.0;
  for (const auto& row : report.rows) {
    if (row.attribution.f_x < 0.5) continue;
    ++s.detected;
    const auto& phi = row.attribution.values;
    std::vector<double> magnitude(phi.size());
    std::transform(phi.begin(), phi.end(), magnitude.begin(), [](double v) { return std::abs(v); });
    const std::size_t peak = argmax(row.input);
    if (argmax(magnitude) == peak) ++s.argmax_agree;
    total_abs += std::accumulate(magnitude.begin(), magnitude.end(), 0.0);
    peak_abs += magnitude[peak];
    if (peak > 0) neighbor_abs += magnitude[peak - 1];
    if (peak + 1 < magnitude.size()) neighbor_abs += magnitude[peak + 1];
  }
  if (s.detected > 0) s.argmax_agree_fraction = static_cast<double>(s.argmax_agree) / static_cast<double>(s.detected);
  if (total_abs > 0.0) {
    s.neighbor_share = neighbor_abs / total_abs;
    s.peak_share = peak_abs / total_abs;
  }
  return report;
}

void write_explain_csv(const std::filesystem::path& path, const ExplainReport& report,
                       const std::string& header_comment) {
  std::ostringstream out;
  out.precision(17);
  std::istringstream comment(header_comment);
  for (std::string line; std::getline(comment, line);) out << "# " << line << '\n';
  const std::size_t n = report.inputs;
  out << "instance";
  for (std::size_t i = 0; i < n; ++i) out << ",phi_" << i;
  out << ",f_x,f_baseline\n";
  for (const auto& row : report.rows) {
    out << row.instance;
    for (double v : row.attribution.values) out << ',' << v;
    out << ',' << row.attribution.f_x << ',' << row.attribution.f_baseline << '\n';
  }
  detail::write_file_atomically(path, out.str());
}

void write_explain_summary(const std::filesystem::path& path, const ExplainSummary& s) {
  nlohmann::ordered_json j;
  j["instances"] = s.instances;
  j["detected"] = s.detected;
  j["argmax_agree"] = s.argmax_agree;
  j["argmax_agree_fraction"] = s.argmax_agree_fraction;
  j["peak_share"] = s.peak_share;
  j["neighbor_share"] = s.neighbor_share;
  detail::write_file_atomically(path, j.dump(1) + "\n");
}

}  // namespace prach
