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

#include "prach/evaluation.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "prach/errors.hpp"
#include "prach/parallel.hpp"
#include "prach/version.hpp"
#include "text_io.hpp"

namespace prach {

void EvalSpec::validate() const {
  if (snr_db.empty()) throw ConfigError("SNR list is empty");
  if (trials < 1) throw ConfigError("trials must be positive");
  if (!(target_false_alarm > 0.0 && target_false_alarm < 1.0))
    throw ConfigError("false-alarm target must lie in (0, 1)");
  if (calibration_profiles < 1) throw ConfigError("calibration profiles must be positive");
}

namespace {

struct TrialOutcome {
  // Per receiver slot: conventional first (when enabled), then models.
  std::vector<char> detected;
  std::vector<char> ta_exact;
  std::vector<char> ta_tol1;
};

DatasetSpec occasion_spec(const EvalSpec& spec, const EvalTarget& t) {
  DatasetSpec d;
  d.channel = t.channel;
  d.num_rx = t.num_rx;
  d.seed = spec.seed;
  d.preamble = spec.preamble;
  d.roots = spec.roots;
  d.delay_spread_s = spec.delay_spread_s;
  d.max_delay_bins = spec.max_delay_bins;
  d.snr_db = spec.snr_db;
  return d;
}

TrialOutcome run_trial(const EvalSpec& spec, const EvalTarget& t, const DatasetSpec& dspec, double alpha,
                       double snr, std::uint64_t index, bool present) {
  const Occasion occ = draw_occasion(dspec, snr, index, present);
  PreambleConfig root = occ.user;
  root.preamble_index = 0;
  const Correlator& corr = correlator_for(root);
  const auto v = static_cast<std::size_t>(occ.user.preamble_index);

  const auto pdp = corr.pdp(occ.grid);
  auto pdp_window = std::move(extract_windows(pdp, root, occ.base_index, spec.roots)[v]);
  std::optional<WindowInstance> cdp_window;

  TrialOutcome out;
  const auto record = [&](bool detected, const WindowInstance& w) {
    out.detected.push_back(detected ? 1 : 0);
    bool exact = false, tol1 = false;
    if (present && detected) {
      const int est = estimate_ta_bins(window_power(w));
      exact = TaGroundTruth{TaScheme::exact, occ.truth_bins}.accepts(est);
      tol1 = TaGroundTruth{TaScheme::tol1, occ.truth_bins}.accepts(est);
    }
    out.ta_exact.push_back(exact ? 1 : 0);
    out.ta_tol1.push_back(tol1 ? 1 : 0);
  };

  if (t.conventional) {
    const double floor = noise_floor(pdp.power);
    record(conventional_statistic(pdp_window.features, floor) > alpha, pdp_window);
  }
  for (const MlpModel* m : t.models) {
    if (m->input_kind == ProfileKind::pdp) {
      record(detect_hybrid(pdp_window, *m).present, pdp_window);
    } else {
      if (!cdp_window) {
        const auto cdp = corr.cdp(occ.grid);
        cdp_window = std::move(extract_windows(cdp, root, occ.base_index, spec.roots)[v]);
      }
      // TA always comes from the PDP peak of the detected window.
      const bool detected = detect_hybrid(*cdp_window, *m).present;
      record(detected, pdp_window);
    }
  }
  return out;
}

}  // namespace

EvalResult run_evaluation(const std::vector<EvalTarget>& targets, const EvalSpec& spec) {
  spec.validate();
  EvalResult result;
  for (const auto& t : targets) {
    for (const MlpModel* m : t.models)
      if (m == nullptr) throw ArgumentError("null model in evaluation target");
    double alpha = t.alpha;
    if (t.conventional && !(alpha > 0.0)) {
      CalibrationSpec cal;
      cal.num_rx = t.num_rx;
      cal.target_false_alarm = spec.target_false_alarm;
      cal.profiles = spec.calibration_profiles;
      cal.seed = substream_seed(spec.seed, 0xca1 + static_cast<std::uint64_t>(t.num_rx));
      cal.preamble = spec.preamble;
      cal.threads = spec.threads;
      alpha = calibrate_alpha(cal).alpha;
    }
    result.alphas.push_back(alpha);

    const DatasetSpec dspec = occasion_spec(spec, t);
    const std::size_t slots = (t.conventional ? 1 : 0) + t.models.size();
    const auto n = static_cast<std::size_t>(spec.trials);
    for (double snr : spec.snr_db) {
      std::vector<TrialOutcome> outcomes(2 * n);
      parallel_for(2 * n, spec.threads, [&](std::size_t i) {
        const bool present = i < n;
        outcomes[i] = run_trial(spec, t, dspec, alpha, snr, i, present);
      });
      for (std::size_t s = 0; s < slots; ++s) {
        std::size_t hits = 0, fa = 0, exact = 0, tol1 = 0;
        for (std::size_t i = 0; i < n; ++i) {
          hits += static_cast<std::size_t>(outcomes[i].detected[s]);
          exact += static_cast<std::size_t>(outcomes[i].ta_exact[s]);
          tol1 += static_cast<std::size_t>(outcomes[i].ta_tol1[s]);
        }
        for (std::size_t i = n; i < 2 * n; ++i) fa += static_cast<std::size_t>(outcomes[i].detected[s]);
        EvalRow row;
        row.channel = std::string(channel_model_name(t.channel));
        row.num_rx = t.num_rx;
        row.snr_db = snr;
        const bool conv = t.conventional && s == 0;
        row.receiver = conv ? "conventional" : "hybrid";
        row.detector_input =
            conv ? "pdp" : std::string(profile_kind_name(t.models[s - (t.conventional ? 1 : 0)]->input_kind));
        row.n_trials = spec.trials;
        row.p_detect = static_cast<double>(hits) / static_cast<double>(n);
        row.p_false_alarm = static_cast<double>(fa) / static_cast<double>(n);
        const double nan = std::numeric_limits<double>::quiet_NaN();
        row.ta_acc_exact = hits ? static_cast<double>(exact) / static_cast<double>(hits) : nan;
        row.ta_acc_tol1 = hits ? static_cast<double>(tol1) / static_cast<double>(hits) : nan;
        result.rows.push_back(row);
      }
    }
  }
  return result;
}

std::string eval_header(const EvalSpec& spec, const std::vector<EvalTarget>& targets, const EvalResult& result) {
  std::ostringstream h;
  h.precision(17);
  h << "# " << kToolVersion << " evaluation\n";
  h << "# seed=" << spec.seed << " trials=" << spec.trials << " fa_target=" << spec.target_false_alarm
    << " calibration_profiles=" << spec.calibration_profiles << " max_delay_bins=" << spec.max_delay_bins
    << " delay_spread_s=" << spec.delay_spread_s << "\n";
  h << "# fft_size=" << spec.preamble.fft_size << " sequence_length=" << spec.preamble.sequence_length
    << " cyclic_shift=" << spec.preamble.cyclic_shift << " scs_hz=" << spec.preamble.scs_hz << " roots=";
  for (std::size_t i = 0; i < spec.roots.roots.size(); ++i) h << (i ? ":" : "") << spec.roots.roots[i];
  h << "\n# snr_db is per-RE SNR on the PRACH subcarriers (unit signal power per RE)\n";
  h << "# p_detect: user-present trials whose own window is declared present; "
       "p_false_alarm: noise-only trials whose window is declared present\n";
  h << "# ta_acc_*: over detected user-present trials; truth = round((delay + mean channel delay) * L / N)\n";
  for (std::size_t i = 0; i < targets.size(); ++i) {
    h << "# target channel=" << channel_model_name(targets[i].channel) << " num_rx=" << targets[i].num_rx;
    if (targets[i].conventional) h << " alpha=" << result.alphas[i];
    for (const MlpModel* m : targets[i].models)
      h << " model[" << profile_kind_name(m->input_kind) << ",trained_on=" << m->train_meta.channel << "/"
        << m->train_meta.num_rx << "rx,seed=" << m->train_meta.seed << "]";
    h << "\n";
  }
  return h.str();
}

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  std::ostringstream s;
  s.precision(10);
  s << v;
  return s.str();
}

}  // namespace

void write_eval_csv(const std::filesystem::path& path, const EvalResult& result, const std::string& header) {
  std::ostringstream out;
  out << header << kEvalCsvColumns << "\n";
  for (const auto& r : result.rows)
    out << r.channel << ',' << r.num_rx << ',' << fmt(r.snr_db) << ',' << r.receiver << ',' << r.detector_input
        << ',' << r.n_trials << ',' << fmt(r.p_detect) << ',' << fmt(r.p_false_alarm) << ','
        << fmt(r.ta_acc_exact) << ',' << fmt(r.ta_acc_tol1) << '\n';
  detail::write_file_atomically(path, out.str());
}

void write_plot_script(const std::filesystem::path& path, const EvalResult& result, const std::string& title) {
  std::map<std::string, std::vector<const EvalRow*>> series;
  std::vector<std::string> order;
  for (const auto& r : result.rows) {
    const std::string key = r.channel + " " + std::to_string(r.num_rx) + "RX " + r.receiver + " " + r.detector_input;
    if (!series.count(key)) order.push_back(key);
    series[key].push_back(&r);
  }
  std::ostringstream g;
  g << "# gnuplot script generated by " << kToolVersion << "\n";
  for (std::size_t i = 0; i < order.size(); ++i) {
    g << "$s" << i << " << EOD\n";
    for (const EvalRow* r : series[order[i]])
      g << fmt(r->snr_db) << ' ' << fmt(r->p_detect) << ' ' << fmt(r->ta_acc_exact) << ' ' << fmt(r->ta_acc_tol1)
        << '\n';
    g << "EOD\n";
  }
  g << "set title '" << title << "'\nset xlabel 'SNR per RE (dB)'\nset ylabel 'Probability of detection'\n"
    << "set grid\nset key bottom right\nset yrange [0:1.02]\nplot ";
  for (std::size_t i = 0; i < order.size(); ++i)
    g << (i ? ", \\\n     " : "") << "$s" << i << " using 1:2 with linespoints title '" << order[i] << "'";
  g << "\n";
  detail::write_file_atomically(path, g.str());
}

}  // namespace prach
