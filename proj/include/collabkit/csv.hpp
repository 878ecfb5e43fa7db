// Copyright 2026 The collabkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "collabkit/errors.hpp"

namespace collabkit {

// All real-valued CSV fields: '.' decimal separator, fixed 6 decimals,
// no thousands separators. Locale independent.
inline std::string format_real(double v) {
  if (v == 0.0) v = 0.0;  // normalize -0
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return std::string(buf);
}

inline std::string format_opt_real(const std::optional<double>& v) {
  return v ? format_real(*v) : std::string();
}

// Emitted CSV is unquoted by contract; a field containing a delimiter would
// break round-tripping, so that is treated as an internal invariant.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) { row(header); }

  void row(const std::vector<std::string>& fields) {
    std::string line;
    for (size_t i = 0; i < fields.size(); ++i) {
      const std::string& f = fields[i];
      check_invariant(f.find_first_of(",\"\r\n") == std::string::npos,
                      "csv field contains a delimiter: '" + f + "'");
      if (i) line.push_back(',');
      line += f;
    }
    line.push_back('\n');
    out_ += line;
  }

  const std::string& str() const { return out_; }

 private:
  std::string out_;
};

// Parses CSV written by CsvWriter (no quoting). Keeps empty fields.
inline std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    std::vector<std::string> fields;
    size_t f = 0;
    while (true) {
      size_t c = line.find(',', f);
      if (c == std::string_view::npos) {
        fields.emplace_back(line.substr(f));
        break;
      }
      fields.emplace_back(line.substr(f, c - f));
      f = c + 1;
    }
    rows.push_back(std::move(fields));
    pos = nl + 1;
  }
  return rows;
}

inline std::string reemit_csv(const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  for (const auto& r : rows) {
    for (size_t i = 0; i < r.size(); ++i) {
      if (i) out.push_back(',');
      out += r[i];
    }
    out.push_back('\n');
  }
  return out;
}

}  // namespace collabkit
