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

// Line-oriented file access; paths ending in ".gz" go through zlib.

#include <filesystem>
#include <fstream>
#include <string>

#include <zlib.h>

namespace prach::detail {

bool is_gzip_path(const std::filesystem::path& path);

class LineWriter {
 public:
  explicit LineWriter(const std::filesystem::path& path);
  ~LineWriter();
  LineWriter(const LineWriter&) = delete;
  LineWriter& operator=(const LineWriter&) = delete;

  void write(const std::string& text);
  // Flushes and reports write failures.
  void close();

 private:
  std::filesystem::path path_;
  std::ofstream plain_;
  gzFile gz_ = nullptr;
};

class LineReader {
 public:
  explicit LineReader(const std::filesystem::path& path);
  ~LineReader();
  LineReader(const LineReader&) = delete;
  LineReader& operator=(const LineReader&) = delete;

  bool next(std::string& line);

 private:
  std::ifstream plain_;
  gzFile gz_ = nullptr;
};

// Writes `content` to a temporary sibling and renames it over `path`, so a
// failed run never leaves a partial file.
void write_file_atomically(const std::filesystem::path& path, const std::string& content);

}  // namespace prach::detail
