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
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "collabkit/errors.hpp"
#include "collabkit/parallel.hpp"
#include "collabkit/rules.hpp"

namespace collabkit {

// Raw strings are preserved byte-exact from the input. An empty orgs or
// suborgs list means the metadata was absent for that author.
struct AuthorEntry {
  std::string name;
  std::vector<std::string> orgs;
  std::vector<std::string> suborgs;

  bool operator==(const AuthorEntry&) const = default;
};

struct PaperRecord {
  std::string id;
  int year = 0;
  std::vector<AuthorEntry> authors;

  bool operator==(const PaperRecord&) const = default;
};

// Fields that are malformed but skippable; parsing reports their counts
// instead of failing the whole ingest.
struct ParseReport {
  uint64_t skipped_authors = 0;      // author entries without a usable name
  uint64_t skipped_strings = 0;      // non-string entries inside orgs/suborgs
  uint64_t coerced_fields = 0;       // orgs/suborgs present but not an array

  uint64_t total() const { return skipped_authors + skipped_strings + coerced_fields; }
};

struct Corpus {
  std::vector<PaperRecord> papers;                 // input order
  std::unordered_map<std::string, size_t> index;   // id -> position
  std::vector<std::string> provenance;             // sources + filter history
  ParseReport parse_report;

  size_t size() const { return papers.size(); }
  bool contains(const std::string& id) const { return index.count(id) != 0; }
  const PaperRecord& at(const std::string& id) const {
    auto it = index.find(id);
    require_input(it != index.end(), "unknown paper id '" + id + "'");
    return papers[it->second];
  }
};

namespace detail {

inline PaperRecord parse_paper_line(std::string_view line, size_t line_no,
                                    std::string_view source, ParseReport& rep) {
  auto fail = [&](const std::string& what) -> ValidationError {
    std::ostringstream os;
    os << source << ":" << line_no << ": " << what;
    return ValidationError(os.str());
  };
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw fail(std::string("malformed line: ") + e.what());
  }
  if (!j.is_object()) throw fail("record must be a JSON object");
  if (!j.contains("id") || !j["id"].is_string()) throw fail("missing string field 'id'");
  if (!j.contains("year") || !j["year"].is_number_integer())
    throw fail("missing integer field 'year'");
  if (!j.contains("authors") || !j["authors"].is_array())
    throw fail("missing array field 'authors'");

  PaperRecord p;
  p.id = j["id"].get<std::string>();
  // Ids flow into CSV outputs; delimiters in them cannot round-trip.
  if (p.id.empty() || p.id.find_first_of(",;\"\r\n") != std::string::npos) {
    throw fail("paper id is empty or contains a CSV delimiter: '" + p.id + "'");
  }
  p.year = j["year"].get<int>();
  for (const auto& a : j["authors"]) {
    if (!a.is_object() || !a.contains("name") || !a["name"].is_string()) {
      ++rep.skipped_authors;
      continue;
    }
    AuthorEntry author;
    author.name = a["name"].get<std::string>();
    auto read_strings = [&](const char* key, std::vector<std::string>& out) {
      if (!a.contains(key)) return;  // absent array means empty
      if (!a[key].is_array()) {
        ++rep.coerced_fields;
        return;
      }
      for (const auto& s : a[key]) {
        if (s.is_string()) {
          out.push_back(s.get<std::string>());
        } else {
          ++rep.skipped_strings;
        }
      }
    };
    read_strings("orgs", author.orgs);
    read_strings("suborgs", author.suborgs);
    p.authors.push_back(std::move(author));
  }
  return p;
}

}  // namespace detail

// Parses the newline-delimited papers format. Chunks are parsed in parallel
// and merged in order, so the result is independent of the worker count.
inline Corpus parse_papers(std::string_view text, int workers = 1,
                           const std::string& source = "<memory>") {
  std::vector<std::string_view> lines = split_lines(text);

  struct ChunkResult {
    std::vector<PaperRecord> papers;
    ParseReport report;
  };
  std::vector<ChunkResult> chunks = map_chunked<ChunkResult>(
      lines.size(), workers, [&](size_t begin, size_t end) {
        ChunkResult r;
        r.papers.reserve(end - begin);
        for (size_t i = begin; i < end; ++i) {
          r.papers.push_back(
              detail::parse_paper_line(lines[i], i + 1, source, r.report));
        }
        return r;
      });

  Corpus corpus;
  corpus.papers.reserve(lines.size());
  std::unordered_map<std::string, size_t> first_line;
  first_line.reserve(lines.size());
  size_t line_no = 0;
  for (auto& chunk : chunks) {
    for (auto& p : chunk.papers) {
      ++line_no;
      auto [it, inserted] = first_line.emplace(p.id, line_no);
      if (!inserted) {
        std::ostringstream os;
        os << source << ": duplicate paper id '" << p.id << "' at lines "
           << it->second << " and " << line_no;
        throw ValidationError(os.str());
      }
      corpus.index.emplace(p.id, corpus.papers.size());
      corpus.papers.push_back(std::move(p));
    }
    corpus.parse_report.skipped_authors += chunk.report.skipped_authors;
    corpus.parse_report.skipped_strings += chunk.report.skipped_strings;
    corpus.parse_report.coerced_fields += chunk.report.coerced_fields;
  }
  corpus.provenance.push_back("parsed " + std::to_string(corpus.papers.size()) +
                              " papers from " + source);
  return corpus;
}

inline nlohmann::json paper_to_json(const PaperRecord& p) {
  nlohmann::json authors = nlohmann::json::array();
  for (const auto& a : p.authors) {
    authors.push_back({{"name", a.name}, {"orgs", a.orgs}, {"suborgs", a.suborgs}});
  }
  return {{"id", p.id}, {"year", p.year}, {"authors", authors}};
}

// Canonical serialization: compact JSON, key-sorted, one record per line.
// parse -> serialize -> parse is a fixed point.
inline std::string serialize_papers(const Corpus& corpus) {
  std::string out;
  for (const auto& p : corpus.papers) {
    out += paper_to_json(p).dump();
    out.push_back('\n');
  }
  return out;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require_input(in.good(), "cannot open file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  require_input(out.good(), "cannot write file: " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

inline Corpus load_papers_file(const std::filesystem::path& path, int workers = 1) {
  return parse_papers(read_file(path), workers, path.filename().string());
}

// Retains papers with min_year <= year <= max_year (closed interval).
inline Corpus filter_by_year(const Corpus& corpus, int min_year, int max_year) {
  require_input(min_year <= max_year, "filter_by_year: min_year > max_year");
  Corpus out;
  out.provenance = corpus.provenance;
  out.parse_report = corpus.parse_report;
  for (const auto& p : corpus.papers) {
    if (p.year >= min_year && p.year <= max_year) {
      out.index.emplace(p.id, out.papers.size());
      out.papers.push_back(p);
    }
  }
  size_t dropped = corpus.size() - out.size();
  out.provenance.push_back("filter_by_year [" + std::to_string(min_year) + "," +
                           std::to_string(max_year) + "]: kept " +
                           std::to_string(out.size()) + ", dropped " +
                           std::to_string(dropped));
  return out;
}

// Retains papers with at least one author org resolving to home_id.
inline Corpus select_by_institution(const Corpus& corpus, const RuleSet& rules,
                                    const std::string& home_id) {
  require_input(rules.has_institution(home_id),
                "unknown home institution id '" + home_id + "' in ruleset");
  Corpus out;
  out.provenance = corpus.provenance;
  out.parse_report = corpus.parse_report;
  std::unordered_map<std::string, bool> memo;
  auto is_home = [&](const std::string& raw) {
    auto it = memo.find(raw);
    if (it != memo.end()) return it->second;
    Resolution r = resolve_institution(raw, rules);
    bool home = r.outcome == Outcome::Resolved && r.id == home_id;
    memo.emplace(raw, home);
    return home;
  };
  for (const auto& p : corpus.papers) {
    bool keep = false;
    for (const auto& a : p.authors) {
      for (const auto& org : a.orgs) {
        if (is_home(org)) {
          keep = true;
          break;
        }
      }
      if (keep) break;
    }
    if (keep) {
      out.index.emplace(p.id, out.papers.size());
      out.papers.push_back(p);
    }
  }
  size_t dropped = corpus.size() - out.size();
  out.provenance.push_back("select_by_institution '" + home_id + "': kept " +
                           std::to_string(out.size()) + ", dropped " +
                           std::to_string(dropped));
  return out;
}

inline bool same_papers(const Corpus& a, const Corpus& b) {
  return a.papers == b.papers;
}

}  // namespace collabkit
