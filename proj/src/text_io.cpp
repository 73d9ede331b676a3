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

#include "text_io.hpp"

#include <system_error>

#include "prach/errors.hpp"

namespace prach::detail {

bool is_gzip_path(const std::filesystem::path& path) { return path.extension() == ".gz"; }

LineWriter::LineWriter(const std::filesystem::path& path) : path_(path) {
  if (is_gzip_path(path)) {
    gz_ = gzopen(path.c_str(), "wb6");
    if (gz_ == nullptr) throw DataError("cannot open " + path.string() + " for writing");
  } else {
    plain_.open(path, std::ios::binary | std::ios::trunc);
    if (!plain_) throw DataError("cannot open " + path.string() + " for writing");
  }
}

LineWriter::~LineWriter() {
  if (gz_ != nullptr) gzclose(gz_);
}

void LineWriter::write(const std::string& text) {
  if (gz_ != nullptr) {
    if (!text.empty() && gzwrite(gz_, text.data(), static_cast<unsigned>(text.size())) == 0)
      throw DataError("failed writing " + path_.string());
    return;
  }
  plain_ << text;
  if (!plain_) throw DataError("failed writing " + path_.string());
}

void LineWriter::close() {
  if (gz_ != nullptr) {
    const int rc = gzclose(gz_);
    gz_ = nullptr;
    if (rc != Z_OK) throw DataError("failed closing " + path_.string());
    return;
  }
  plain_.close();
  if (!plain_) throw DataError("failed closing " + path_.string());
}

LineReader::LineReader(const std::filesystem::path& path) {
  if (is_gzip_path(path)) {
    gz_ = gzopen(path.c_str(), "rb");
    if (gz_ == nullptr) throw DataError("cannot open " + path.string());
  } else {
    plain_.open(path, std::ios::binary);
    if (!plain_) throw DataError("cannot open " + path.string());
  }
}

LineReader::~LineReader() {
  if (gz_ != nullptr) gzclose(gz_);
}

bool LineReader::next(std::string& line) {
  if (gz_ == nullptr) {
    if (!std::getline(plain_, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }
  line.clear();
  char buf[4096];
  bool any = false;
  while (gzgets(gz_, buf, sizeof buf) != nullptr) {
    any = true;
    line += buf;
    if (!line.empty() && line.back() == '\n') {
      line.pop_back();
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return true;
    }
  }
  return any;
}

void write_file_atomically(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open " + tmp.string() + " for writing");
    out << content;
    if (!out) throw DataError("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw DataError("cannot move output into place at " + path.string() + ": " + ec.message());
}

}  // namespace prach::detail
