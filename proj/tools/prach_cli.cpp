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

// prach: command-line front end for dataset generation, training, evaluation,
// capture import/export, the multi-root receiver and attribution reports.

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "prach/channel.hpp"
#include "prach/dataset.hpp"
#include "prach/detectors.hpp"
#include "prach/errors.hpp"
#include "prach/evaluation.hpp"
#include "prach/explain.hpp"
#include "prach/mlp.hpp"
#include "prach/rng.hpp"
#include "prach/simd.hpp"
#include "prach/version.hpp"

namespace {

using namespace prach;

enum Exit { kOk = 0, kUsage = 2, kData = 3, kNumeric = 4 };

// "a:step:b" (inclusive) or a comma separated list.
std::vector<double> parse_snr_list(const std::string& text) {
  const auto number = [&](std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
      throw ConfigError("bad SNR value '" + std::string(s) + "' in --snr-list");
    return v;
  };
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string_view> parts;
    std::string_view rest(text);
    while (true) {
      const auto c = rest.find(':');
      parts.push_back(rest.substr(0, c));
      if (c == std::string_view::npos) break;
      rest.remove_prefix(c + 1);
    }
    if (parts.size() != 3) throw ConfigError("--snr-list range must be start:step:stop");
    const double a = number(parts[0]), step = number(parts[1]), b = number(parts[2]);
    if (!(step > 0.0) || b < a) throw ConfigError("--snr-list range needs step > 0 and stop >= start");
    const auto n = static_cast<int>(std::floor((b - a) / step + 1e-9));
    for (int i = 0; i <= n; ++i) out.push_back(a + step * i);
    return out;
  }
  std::string_view rest(text);
  while (true) {
    const auto c = rest.find(',');
    out.push_back(number(rest.substr(0, c)));
    if (c == std::string_view::npos) break;
    rest.remove_prefix(c + 1);
  }
  return out;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::vector<WindowInstance> filter_labeled(std::vector<WindowInstance> data) {
  for (const auto& w : data)
    if (w.label == Label::unknown)
      throw DataError("dataset contains unlabeled windows; they can be used by detect but not for training");
  return data;
}

std::vector<std::vector<double>> inputs_of(const MlpModel& m, const std::vector<WindowInstance>& data) {
  std::vector<std::vector<double>> out;
  out.reserve(data.size());
  for (const auto& w : data) out.push_back(model_input(w, m.normalization));
  return out;
}

std::vector<int> labels_of(const std::vector<WindowInstance>& data) {
  std::vector<int> out;
  out.reserve(data.size());
  for (const auto& w : data) out.push_back(w.label == Label::present ? 1 : 0);
  return out;
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  std::string snr_list = "-20:5:20";
  int instances = 10000;
  std::string channel = "tdlc300";
  int num_rx = 1;
  std::string input = "pdp";
  double ratio = 0.5;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_generate(const GenerateArgs& a, unsigned threads) {
  DatasetSpec spec;
  spec.snr_db = parse_snr_list(a.snr_list);
  spec.instances_per_snr = a.instances;
  spec.channel = parse_channel_model(a.channel);
  spec.num_rx = a.num_rx;
  spec.input_kind = parse_profile_kind(a.input);
  spec.present_ratio = a.ratio;
  spec.seed = a.seed;
  spec.threads = threads;
  spec.validate();
  const auto data = generate_instances(spec);
  write_dataset(a.out, data, provenance_of(spec));
  std::cout << "wrote " << data.size() << " windows to " << a.out << "\n";
  return kOk;
}

// ---------------------------------------------------------------- train

struct TrainArgs {
  std::string data;
  std::string out;
  double test_fraction = 0.25;
  std::uint64_t seed = 1;
  int epochs = 200;
  int batch = 256;
  double lr = 1e-3;
  int patience = 10;
  double val_fraction = 0.1;
  std::string normalization = "profile_mean";
};

int cmd_train(const TrainArgs& a) {
  TrainConfig cfg;
  cfg.seed = a.seed;
  cfg.max_epochs = a.epochs;
  cfg.batch_size = a.batch;
  cfg.learning_rate = a.lr;
  cfg.patience = a.patience;
  cfg.validation_fraction = a.val_fraction;
  cfg.normalization = parse_normalization(a.normalization);
  cfg.validate();
  if (!(a.test_fraction > 0.0 && a.test_fraction < 1.0)) throw ConfigError("--test-fraction must be in (0, 1)");

  const auto data = filter_labeled(read_dataset(a.data));
  auto [train_part, test_part] = split_dataset(data, 1.0 - a.test_fraction, a.seed);
  const MlpModel m = train(train_part, cfg);
  save_model(m, a.out);

  const auto tr = evaluate(m, inputs_of(m, train_part), labels_of(train_part));
  const auto te = evaluate(m, inputs_of(m, test_part), labels_of(test_part));
  double val_acc = 0.0;
  for (const auto& e : m.train_meta.curve)
    if (e.epoch == m.train_meta.best_epoch) val_acc = e.val_accuracy;
  std::cout << "train_windows " << train_part.size() << " test_windows " << test_part.size() << "\n"
            << "epochs " << m.train_meta.epochs_run << " best_epoch " << m.train_meta.best_epoch << " stop "
            << m.train_meta.stop_reason << "\n"
            << "train_accuracy " << format_number(tr.accuracy) << "\n"
            << "val_accuracy " << format_number(val_acc) << "\n"
            << "test_accuracy " << format_number(te.accuracy) << "\n";
  return kOk;
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
  std::vector<std::string> models;
  std::vector<std::string> channels{"tdlc300"};
  std::vector<int> num_rx{1};
  std::string snr_list = "-20:5:20";
  int trials = 2000;
  std::uint64_t seed = 7;
  bool no_conventional = false;
  double alpha = 0.0;
  int calibration_profiles = 20000;
  double target_fa = 1e-3;
  std::string out;
  std::string plot_script;
};

int cmd_eval(const EvalArgs& a, unsigned threads) {
  EvalSpec spec;
  spec.snr_db = parse_snr_list(a.snr_list);
  spec.trials = a.trials;
  spec.seed = a.seed;
  spec.calibration_profiles = a.calibration_profiles;
  spec.target_false_alarm = a.target_fa;
  spec.threads = threads;
  spec.validate();

  std::vector<std::unique_ptr<MlpModel>> models;
  for (const auto& path : a.models) models.push_back(std::make_unique<MlpModel>(load_model(path)));
  std::vector<bool> used(models.size(), false);

  std::vector<EvalTarget> targets;
  for (const auto& ch : a.channels)
    for (int rx : a.num_rx) {
      EvalTarget t;
      t.channel = parse_channel_model(ch);
      t.num_rx = rx;
      t.conventional = !a.no_conventional;
      t.alpha = a.alpha;
      // A model serves the configuration it was trained on; models without
      // provenance serve every configuration.
      for (std::size_t i = 0; i < models.size(); ++i) {
        const auto& meta = models[i]->train_meta;
        if (meta.channel.empty() || (meta.channel == ch && meta.num_rx == rx)) {
          t.models.push_back(models[i].get());
          used[i] = true;
        }
      }
      if (t.models.empty() && !t.conventional)
        throw ConfigError("no receiver to evaluate for " + ch + " / " + std::to_string(rx) + " RX");
      targets.push_back(std::move(t));
    }
  for (std::size_t i = 0; i < models.size(); ++i)
    if (!used[i])
      throw ConfigError("model " + a.models[i] + " was trained on " + models[i]->train_meta.channel + " / " +
                        std::to_string(models[i]->train_meta.num_rx) + " RX, which is not an evaluated configuration");

  const auto result = run_evaluation(targets, spec);
  std::string header = eval_header(spec, targets, result);
  for (const auto& path : a.models) header += "# model: " + path + "\n";
  write_eval_csv(a.out, result, header);
  if (!a.plot_script.empty()) write_plot_script(a.plot_script, result, "PRACH detection, " + a.out);
  std::cout << "wrote " << result.rows.size() << " rows to " << a.out << "\n";
  return kOk;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::vector<int> rapids;
  double snr = 10.0;
  std::string channel = "tdlc300";
  int num_rx = 1;
  double delay_bins = -1.0;  // < 0: uniform in [0, 12.5) bins per user
  int occasions = 1;
  std::uint64_t seed = 1;
  bool unlabeled = false;
  std::string out;
};

int cmd_simulate(const SimulateArgs& a) {
  if (a.occasions < 1) throw ConfigError("--occasions must be >= 1");
  const PreambleConfig tmpl{};
  const RootSet roots{};
  roots.validate(tmpl);
  ChannelConfig c;
  c.model = parse_channel_model(a.channel);
  c.num_rx = a.num_rx;
  c.snr_db = a.snr;
  if (c.num_rx < 1) throw ConfigError("--num-rx must be >= 1");
  for (int r : a.rapids)
    if (r < 0 || r >= roots.max_rapids) throw ConfigError("--rapid must be in 0.." + std::to_string(roots.max_rapids - 1));
  if (a.delay_bins >= tmpl.cyclic_shift) throw ConfigError("--delay-bins must be below the window width");

  std::vector<CaptureOccasion> occasions;
  for (int i = 0; i < a.occasions; ++i) {
    Rng rng(a.seed, 2 * static_cast<std::uint64_t>(i));
    std::vector<UserTx> users;
    for (int r : a.rapids) {
      UserTx u;
      u.preamble = roots.config_for_rapid(r, tmpl);
      const double bins = a.delay_bins >= 0.0 ? a.delay_bins : rng.uniform(0.0, 12.5);
      u.delay_samples = bins * tmpl.samples_per_bin();
      users.push_back(u);
    }
    ChannelConfig ci = c;
    ci.seed = substream_seed(a.seed, 2 * static_cast<std::uint64_t>(i) + 1);
    CaptureOccasion occ;
    occ.grid = simulate_users(users, tmpl, ci);
    occ.label_known = !a.unlabeled && a.rapids.size() <= 1;
    if (occ.label_known && !a.rapids.empty()) occ.label_rapid = a.rapids.front();
    occasions.push_back(std::move(occ));
  }
  std::ostringstream header;
  header << "generator: " << kToolVersion << "\nseed: " << a.seed << "\nchannel: " << a.channel
         << "\nnum_rx: " << a.num_rx << "\nsnr_db: " << a.snr << "\nrapids:";
  for (int r : a.rapids) header << ' ' << r;
  header << "\ndelay_bins: " << (a.delay_bins >= 0 ? format_number(a.delay_bins) : std::string("uniform[0,12.5)"))
         << "\noccasions: " << a.occasions << "\nsequence_length: " << tmpl.sequence_length
         << "\nfft_size: " << tmpl.fft_size << "\nscs_hz: " << tmpl.scs_hz;
  write_capture(a.out, occasions, header.str());
  std::cout << "wrote " << occasions.size() << " occasions to " << a.out << "\n";
  return kOk;
}

// ---------------------------------------------------------------- import

struct ImportArgs {
  std::string capture;
  std::string out;
  std::string input = "pdp";
  int num_rx = 0;
  double snr = std::numeric_limits<double>::quiet_NaN();
  std::string channel = "capture";
};

int cmd_import(const ImportArgs& a) {
  CaptureMeta meta;
  meta.num_rx = a.num_rx;
  meta.snr_db = a.snr;
  meta.channel = a.channel;
  const auto windows = import_capture(a.capture, meta, parse_profile_kind(a.input));
  DatasetProvenance prov;
  prov.source = "capture:" + std::filesystem::path(a.capture).filename().string();
  write_dataset(a.out, windows, prov);
  std::cout << "wrote " << windows.size() << " windows to " << a.out << "\n";
  return kOk;
}

// ---------------------------------------------------------------- detect

struct DetectArgs {
  std::string capture;
  std::string model;
  std::string receiver = "hybrid";
  double alpha = 0.0;
  double decision_point = 0.5;
  int num_rx = 0;
  int calibration_profiles = 20000;
  std::uint64_t seed = 1;
};

int cmd_detect(const DetectArgs& a, unsigned threads) {
  ReceiverOptions opts;
  opts.decision_point = a.decision_point;
  std::optional<MlpModel> model;
  if (a.receiver == "hybrid") {
    if (a.model.empty()) throw ConfigError("the hybrid receiver needs --model");
    model = load_model(a.model);
    opts.kind = ReceiverKind::hybrid;
  } else if (a.receiver == "conventional") {
    opts.kind = ReceiverKind::conventional;
  } else {
    throw ConfigError("unknown receiver '" + a.receiver + "' (valid: hybrid, conventional)");
  }
  CaptureMeta meta;
  meta.num_rx = a.num_rx;
  const auto occasions = read_capture(a.capture, meta);
  if (opts.kind == ReceiverKind::conventional) {
    opts.alpha = a.alpha;
    if (opts.alpha <= 0.0 && !occasions.empty()) {
      CalibrationSpec cs;
      cs.num_rx = occasions.front().grid.num_rx();
      cs.profiles = a.calibration_profiles;
      cs.seed = a.seed;
      cs.threads = threads;
      opts.alpha = calibrate_alpha(cs).alpha;
    }
  }
  for (std::size_t i = 0; i < occasions.size(); ++i) {
    const auto out = run_receiver(occasions[i].grid, meta.roots, model ? &*model : nullptr, opts);
    for (const auto& o : out) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "%d, %d, %.1f", o.rapid, o.ta.ta_bins, o.ta.ta_meters);
      std::cout << buf;
      if (occasions.size() > 1) std::cout << ", " << i;
      std::cout << "\n";
    }
  }
  return kOk;
}

// ---------------------------------------------------------------- explain

struct ExplainArgs {
  std::string model;
  std::string data;
  std::string out;
  std::string summary;
  std::optional<double> snr;
  std::string label = "present";
  int limit = 200;
  std::string baseline = "mean";
};

int cmd_explain(const ExplainArgs& a, unsigned threads) {
  const MlpModel m = load_model(a.model);
  const auto data = read_dataset(a.data);
  std::vector<WindowInstance> slice;
  const bool any = a.label == "any";
  const Label want = any ? Label::unknown : parse_label(a.label);
  for (const auto& w : data) {
    if (static_cast<int>(slice.size()) >= a.limit) break;
    if (a.snr && !(w.snr_db == *a.snr)) continue;
    if (!any && w.label != want) continue;
    slice.push_back(w);
  }
  std::vector<double> base;
  if (a.baseline == "mean") base = data.empty() ? std::vector<double>(static_cast<std::size_t>(m.input_size()), 0.0)
                                                : mean_baseline(m, data);
  else if (a.baseline == "zero") base.assign(static_cast<std::size_t>(m.input_size()), 0.0);
  else throw ConfigError("unknown baseline '" + a.baseline + "' (valid: mean, zero)");

  const auto report = explain_report(m, slice, base, threads);
  std::ostringstream header;
  header << "generator: " << kToolVersion << "\nmodel: " << a.model << "\ndata: " << a.data
         << "\nsnr_db: " << (a.snr ? format_number(*a.snr) : std::string("all")) << "\nlabel: " << a.label
         << "\nlimit: " << a.limit << "\nbaseline: " << a.baseline << "\nvalue: p(present), exact Shapley";
  write_explain_csv(a.out, report, header.str());
  if (!a.summary.empty()) write_explain_summary(a.summary, report.summary);
  std::cout << "instances " << report.summary.instances << " detected " << report.summary.detected
            << " argmax_agree " << format_number(report.summary.argmax_agree_fraction) << " neighbor_share "
            << format_number(report.summary.neighbor_share) << "\n";
  return kOk;
}

// ---------------------------------------------------------------- flops

struct FlopsArgs {
  std::string input = "pdp";
  std::string model;
  int relu_cost = 0;
  int softmax_cost = 0;
};

int cmd_flops(const FlopsArgs& a) {
  const MlpModel m = a.model.empty() ? make_detector_model(parse_profile_kind(a.input)) : load_model(a.model);
  FlopCosts costs;
  costs.per_hidden_unit = a.relu_cost;
  costs.per_output_unit = a.softmax_cost;
  std::cout << "architecture";
  for (const auto& l : m.layers) std::cout << ' ' << l.inputs;
  std::cout << ' ' << m.layers.back().outputs << "\n";
  std::cout << "formula sum(2*in*out) + per-unit activation costs\n";
  std::cout << "nn_flops " << count_flops(m, costs) << "\n";
  const PreambleConfig p{};
  std::cout << "correlation_flops_per_antenna " << count_correlation_flops(p.sequence_length) << "\n";
  return kOk;
}

// ---------------------------------------------------------------- calibrate

struct CalibrateArgs {
  int num_rx = 1;
  double target = 1e-3;
  int profiles = 20000;
  std::uint64_t seed = 1;
};

int cmd_calibrate(const CalibrateArgs& a, unsigned threads) {
  CalibrationSpec cs;
  cs.num_rx = a.num_rx;
  cs.target_false_alarm = a.target;
  cs.profiles = a.profiles;
  cs.seed = a.seed;
  cs.threads = threads;
  const auto cal = calibrate_alpha(cs);
  std::cout << "num_rx " << cal.num_rx << "\ntarget_false_alarm " << format_number(cal.target_false_alarm)
            << "\nwindows " << cal.windows << "\nalpha " << format_number(cal.alpha) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PRACH preamble detection: conventional and hybrid receivers", "prach"};
  app.set_version_flag("--version", kToolVersion);
  app.set_config("--config", "", "INI/TOML file with option values ([subcommand] sections); flags override it");
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = all cores); results do not depend on it");
  std::string isa;
  app.add_option("--isa", isa, "Force kernel set")->check(CLI::IsMember({"scalar", "avx2"}));

  const auto add_seed = [](CLI::App* sub, std::uint64_t& seed) {
    sub->add_option("--seed", seed, "Random seed")->envname("PRACH_SEED")->capture_default_str();
  };

  GenerateArgs ga;
  auto* gen = app.add_subcommand("generate", "Simulate a labeled window dataset (JSON lines, .gz supported)");
  gen->add_option("--snr-list", ga.snr_list, "start:step:stop or comma list (dB)")->capture_default_str();
  gen->add_option("--instances", ga.instances, "Instances per SNR")->capture_default_str();
  gen->add_option("--channel", ga.channel, "awgn | tdlc300")->capture_default_str();
  gen->add_option("--num-rx", ga.num_rx, "Receive antennas")->capture_default_str();
  gen->add_option("--input", ga.input, "pdp | cdp")->capture_default_str();
  gen->add_option("--ratio", ga.ratio, "Present fraction")->capture_default_str();
  add_seed(gen, ga.seed);
  gen->add_option("--out", ga.out, "Output dataset")->required();

  TrainArgs ta;
  auto* tr = app.add_subcommand("train", "Train the detector network with a 75/25 train/test split");
  tr->add_option("--data", ta.data, "Dataset file")->required();
  tr->add_option("--out", ta.out, "Model file")->required();
  tr->add_option("--test-fraction", ta.test_fraction)->capture_default_str();
  add_seed(tr, ta.seed);
  tr->add_option("--epochs", ta.epochs, "Maximum epochs")->capture_default_str();
  tr->add_option("--batch", ta.batch)->capture_default_str();
  tr->add_option("--lr", ta.lr)->capture_default_str();
  tr->add_option("--patience", ta.patience)->capture_default_str();
  tr->add_option("--val-fraction", ta.val_fraction)->capture_default_str();
  tr->add_option("--normalization", ta.normalization, "profile_mean | none")->capture_default_str();

  EvalArgs ea;
  auto* ev = app.add_subcommand("eval", "Monte-Carlo detection/TA sweep to CSV");
  ev->add_option("--model", ea.models, "Model file (repeatable); used for the configuration it was trained on");
  ev->add_option("--channel", ea.channels, "awgn | tdlc300 (repeatable)")->delimiter(',')->capture_default_str();
  ev->add_option("--num-rx", ea.num_rx, "Antenna counts (repeatable)")->delimiter(',')->capture_default_str();
  ev->add_option("--snr-list", ea.snr_list)->capture_default_str();
  ev->add_option("--trials", ea.trials, "User-present trials per point (same number noise-only)")->capture_default_str();
  add_seed(ev, ea.seed);
  ev->add_flag("--no-conventional", ea.no_conventional);
  ev->add_option("--alpha", ea.alpha, "Conventional threshold; calibrated when omitted");
  ev->add_option("--calibration-profiles", ea.calibration_profiles)->capture_default_str();
  ev->add_option("--target-fa", ea.target_fa)->capture_default_str();
  ev->add_option("--out", ea.out, "Output CSV")->required();
  ev->add_option("--plot-script", ea.plot_script, "Also write a gnuplot script");

  SimulateArgs sa;
  auto* sim = app.add_subcommand("simulate", "Write simulated occasions as a capture file");
  sim->add_option("--rapid", sa.rapids, "Transmitting RAPIDs (repeatable; none = noise only)")->delimiter(',');
  sim->add_option("--snr", sa.snr)->capture_default_str();
  sim->add_option("--channel", sa.channel)->capture_default_str();
  sim->add_option("--num-rx", sa.num_rx)->capture_default_str();
  sim->add_option("--delay-bins", sa.delay_bins, "Fixed delay in bins; uniform [0, 12.5) when omitted");
  sim->add_option("--occasions", sa.occasions)->capture_default_str();
  add_seed(sim, sa.seed);
  sim->add_flag("--unlabeled", sa.unlabeled, "Write '?' labels");
  sim->add_option("--out", sa.out, "Capture file")->required();

  ImportArgs ia;
  auto* imp = app.add_subcommand("import", "Convert a capture file into a window dataset");
  imp->add_option("--capture", ia.capture)->required();
  imp->add_option("--out", ia.out)->required();
  imp->add_option("--input", ia.input)->capture_default_str();
  imp->add_option("--num-rx", ia.num_rx, "0 = infer from line length")->capture_default_str();
  imp->add_option("--snr", ia.snr, "SNR to record, if known");
  imp->add_option("--channel", ia.channel)->capture_default_str();

  DetectArgs da;
  auto* det = app.add_subcommand("detect", "Run the receiver on a capture; prints 'rapid, ta_bins, ta_meters'");
  det->add_option("--capture", da.capture)->required();
  det->add_option("--model", da.model);
  det->add_option("--receiver", da.receiver, "hybrid | conventional")->capture_default_str();
  det->add_option("--alpha", da.alpha, "Conventional threshold; calibrated when omitted");
  det->add_option("--decision-point", da.decision_point)->capture_default_str();
  det->add_option("--num-rx", da.num_rx)->capture_default_str();
  det->add_option("--calibration-profiles", da.calibration_profiles)->capture_default_str();
  add_seed(det, da.seed);

  ExplainArgs xa;
  auto* ex = app.add_subcommand("explain", "Exact Shapley attributions over a dataset slice");
  ex->add_option("--model", xa.model)->required();
  ex->add_option("--data", xa.data)->required();
  ex->add_option("--out", xa.out, "Attribution CSV")->required();
  ex->add_option("--summary", xa.summary, "Summary JSON");
  ex->add_option("--snr", xa.snr, "Only windows at this SNR");
  ex->add_option("--label", xa.label, "present | absent | any")->capture_default_str();
  ex->add_option("--limit", xa.limit)->capture_default_str();
  ex->add_option("--baseline", xa.baseline, "mean | zero")->capture_default_str();

  FlopsArgs fa;
  auto* fl = app.add_subcommand("flops", "Operation counts of the network and the correlation");
  fl->add_option("--input", fa.input)->capture_default_str();
  fl->add_option("--model", fa.model);
  fl->add_option("--relu-cost", fa.relu_cost)->capture_default_str();
  fl->add_option("--softmax-cost", fa.softmax_cost)->capture_default_str();

  CalibrateArgs ca;
  auto* cal = app.add_subcommand("calibrate", "Calibrate the conventional threshold on noise");
  cal->add_option("--num-rx", ca.num_rx)->capture_default_str();
  cal->add_option("--target", ca.target)->capture_default_str();
  cal->add_option("--profiles", ca.profiles)->capture_default_str();
  add_seed(cal, ca.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (!isa.empty()) simd::select_isa(isa == "avx2" ? simd::Isa::avx2 : simd::Isa::scalar);
    if (*gen) return cmd_generate(ga, threads);
    if (*tr) return cmd_train(ta);
    if (*ev) return cmd_eval(ea, threads);
    if (*sim) return cmd_simulate(sa);
    if (*imp) return cmd_import(ia);
    if (*det) return cmd_detect(da, threads);
    if (*ex) return cmd_explain(xa, threads);
    if (*fl) return cmd_flops(fa);
    if (*cal) return cmd_calibrate(ca, threads);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kUsage;
  } catch (const ArgumentError& e) {
    std::cerr << "argument error: " << e.what() << "\n";
    return kUsage;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kData;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kData;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kNumeric;
  } catch (const std::invalid_argument& e) {
    std::cerr << "argument error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
