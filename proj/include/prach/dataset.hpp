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

// Window-instance datasets: simulated generation, JSON-lines persistence
// (gzip when the path ends in .gz), stratified splits and import of captured
// frequency-domain PRACH occasions.

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "prach/channel.hpp"
#include "prach/correlator.hpp"
#include "prach/version.hpp"

namespace prach {

inline constexpr const char* kGeneratorVersion = kToolVersion;

struct DatasetSpec {
  std::vector<double> snr_db{-20, -15, -10, -5, 0, 5, 10, 15, 20};
  int instances_per_snr = 10000;  // desk scale: 2000
  ChannelModel channel = ChannelModel::tdlc300;
  int num_rx = 1;
  ProfileKind input_kind = ProfileKind::pdp;
  double present_ratio = 0.5;
  std::uint64_t seed = 1;
  PreambleConfig preamble{};
  RootSet roots{};
  double delay_spread_s = 300e-9;
  // Propagation delay is drawn uniformly from [0, max_delay_bins) bins.
  double max_delay_bins = 12.5;
  unsigned threads = 1;

  void validate() const;
};

// One simulated PRACH occasion with a single (possibly absent) user.
struct Occasion {
  RxGrid grid;
  PreambleConfig user;  // root and preamble index of the (intended) RAPID
  int rapid = 0;
  int base_index = 0;
  bool present = false;
  double delay_samples = 0.0;
  int truth_bins = -1;  // ground-truth TA label, -1 when absent
};

// Draws occasion `index` of the spec's random stream at the given SNR. The
// RAPID is uniform over the valid range; present users get a delay whose TA
// label lies inside the window (redrawn otherwise).
Occasion draw_occasion(const DatasetSpec& spec, double snr_db, std::uint64_t index, bool present);

// The window of the occasion's RAPID, labeled and annotated.
WindowInstance occasion_window(const Occasion& occ, const DatasetSpec& spec, ProfileKind kind);

// Whether instance j of a stratum of n is present, giving exactly
// floor(n * ratio) present instances spread through the stratum.
bool is_present_instance(int j, double ratio);

std::vector<WindowInstance> generate_instances(const DatasetSpec& spec);

struct DatasetProvenance {
  std::string generator = kGeneratorVersion;
  std::uint64_t seed = 0;
  int fft_size = 4096;
  int sequence_length = 139;
  int cyclic_shift = 13;
  double scs_hz = 30000.0;
  double delay_spread_s = 300e-9;
  std::string source = "simulated";
};

DatasetProvenance provenance_of(const DatasetSpec& spec);

void write_dataset(const std::filesystem::path& path, const std::vector<WindowInstance>& data,
                   const DatasetProvenance& prov);
std::vector<WindowInstance> read_dataset(const std::filesystem::path& path);

std::string window_to_json_line(const WindowInstance& w, const DatasetProvenance& prov, std::uint64_t index);
WindowInstance window_from_json_line(const std::string& line, std::size_t line_number);

// Seeded split stratified by (snr, label); each stratum contributes
// round(fraction * size) instances to the first part. Order is preserved.
std::pair<std::vector<WindowInstance>, std::vector<WindowInstance>> split_dataset(
    const std::vector<WindowInstance>& data, double fraction, std::uint64_t seed);

// Captured occasions: one line per occasion,
//   <label>,<re>,<im>,<re>,<im>,...
// with num_rx * L complex pairs (antenna-major). <label> is the RAPID of a
// known user, "none" for a known empty occasion, or "?" when unknown. Lines
// starting with '#' are comments.
struct CaptureOccasion {
  RxGrid grid;
  std::optional<int> label_rapid;  // nullopt: unknown
  bool label_known = false;
  std::size_t line_number = 0;
};

struct CaptureMeta {
  PreambleConfig preamble{};
  RootSet roots{};
  int num_rx = 0;  // 0: infer from the line length
  double snr_db = std::numeric_limits<double>::quiet_NaN();
  std::string channel = "capture";
};

std::vector<CaptureOccasion> read_capture(const std::filesystem::path& path, const CaptureMeta& meta);
// header_comment lines are written as '#' comments ahead of the data.
void write_capture(const std::filesystem::path& path, const std::vector<CaptureOccasion>& occasions,
                   const std::string& header_comment = {});

// All RAPID windows of one occasion across every root, labeled from the
// occasion label when known.
std::vector<WindowInstance> occasion_windows(const RxGrid& grid, const RootSet& roots, ProfileKind kind,
                                             std::optional<int> label_rapid, bool label_known,
                                             double snr_db, const std::string& channel);

// Reads a capture file and runs the correlator/windowing over every occasion.
std::vector<WindowInstance> import_capture(const std::filesystem::path& path, const CaptureMeta& meta,
                                           ProfileKind kind);

}  // namespace prach
