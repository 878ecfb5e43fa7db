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

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "collabkit/classify.hpp"
#include "collabkit/corpus.hpp"
#include "collabkit/errors.hpp"
#include "collabkit/parallel.hpp"

namespace collabkit {

// Citation adjacency over opaque ids. Citing papers are corpus papers; cited
// works may be external. The in/out views are kept symmetric; self-loops are
// dropped and counted, duplicate edges collapse to one.
struct CitationGraph {
  std::unordered_map<std::string, std::set<std::string>> out_edges;  // citing -> cited
  std::unordered_map<std::string, std::set<std::string>> in_edges;   // cited -> citing
  std::unordered_map<std::string, std::optional<int>> work_years;    // cited work -> year
  uint64_t self_loops_dropped = 0;
  uint64_t duplicate_edges = 0;
  uint64_t edge_count = 0;

  int in_citations(const std::string& id) const {
    auto it = in_edges.find(id);
    return it == in_edges.end() ? 0 : static_cast<int>(it->second.size());
  }
};

namespace detail {

struct Edge {
  std::string citing;
  std::string cited;
};

inline Edge parse_edge_line(std::string_view line, size_t line_no,
                            std::string_view source) {
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
  if (!j.is_object() || !j.contains("citing") || !j["citing"].is_string() ||
      !j.contains("cited") || !j["cited"].is_string()) {
    throw fail("edge must be an object with string fields 'citing' and 'cited'");
  }
  return {j["citing"].get<std::string>(), j["cited"].get<std::string>()};
}

}  // namespace detail

inline void check_graph_symmetry(const CitationGraph& g) {
  uint64_t out_total = 0, in_total = 0;
  for (const auto& [citing, cited_set] : g.out_edges) {
    out_total += cited_set.size();
    for (const auto& cited : cited_set) {
      auto it = g.in_edges.find(cited);
      check_invariant(it != g.in_edges.end() && it->second.count(citing),
                      "citation graph asymmetry: (" + citing + "," + cited + ")");
    }
  }
  for (const auto& [_, s] : g.in_edges) in_total += s.size();
  check_invariant(out_total == in_total, "citation graph edge totals differ");
}

// Builds the citation network from the edge stream plus year metadata for
// cited works. Citing ids must exist in the corpus; cited ids may be external.
inline CitationGraph build_graph(const Corpus& corpus, std::string_view citations_text,
                                 std::string_view works_text, int workers = 1,
                                 const std::string& citations_source = "citations.jsonl",
                                 const std::string& works_source = "works.jsonl") {
  std::vector<std::string_view> lines = split_lines(citations_text);
  std::vector<std::vector<detail::Edge>> chunks =
      map_chunked<std::vector<detail::Edge>>(
          lines.size(), workers, [&](size_t begin, size_t end) {
            std::vector<detail::Edge> part;
            part.reserve(end - begin);
            for (size_t i = begin; i < end; ++i) {
              part.push_back(detail::parse_edge_line(lines[i], i + 1, citations_source));
            }
            return part;
          });

  CitationGraph g;
  size_t line_no = 0;
  for (const auto& chunk : chunks) {
    for (const auto& e : chunk) {
      ++line_no;
      if (!corpus.contains(e.citing)) {
        std::ostringstream os;
        os << citations_source << ":" << line_no << ": citing id '" << e.citing
           << "' is not in the corpus";
        throw ValidationError(os.str());
      }
      if (e.citing == e.cited) {
        ++g.self_loops_dropped;
        continue;
      }
      if (!g.out_edges[e.citing].insert(e.cited).second) {
        ++g.duplicate_edges;
        continue;
      }
      g.in_edges[e.cited].insert(e.citing);
      ++g.edge_count;
    }
  }

  // Year metadata: corpus papers carry their own year; external works come
  // from the works stream; anything else stays unknown.
  std::unordered_map<std::string, std::optional<int>> external_years;
  size_t wline = 0;
  for (std::string_view line : split_lines(works_text)) {
    ++wline;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      std::ostringstream os;
      os << works_source << ":" << wline << ": malformed line: " << e.what();
      throw ValidationError(os.str());
    }
    bool ok = j.is_object() && j.contains("id") && j["id"].is_string() &&
              j.contains("year") && (j["year"].is_number_integer() || j["year"].is_null());
    if (!ok) {
      std::ostringstream os;
      os << works_source << ":" << wline
         << ": work must be an object with string 'id' and integer-or-null 'year'";
      throw ValidationError(os.str());
    }
    std::optional<int> year;
    if (j["year"].is_number_integer()) year = j["year"].get<int>();
    external_years[j["id"].get<std::string>()] = year;
  }
  for (const auto& [cited, _] : g.in_edges) {
    if (corpus.contains(cited)) {
      g.work_years[cited] = corpus.at(cited).year;
    } else if (auto it = external_years.find(cited); it != external_years.end()) {
      g.work_years[cited] = it->second;
    } else {
      g.work_years[cited] = std::nullopt;
    }
  }

  check_graph_symmetry(g);
  return g;
}

inline int citation_count(const CitationGraph& g, const Corpus& corpus,
                          const std::string& paper_id) {
  require_input(corpus.contains(paper_id),
                "citation_count: unknown paper id '" + paper_id + "'");
  return g.in_citations(paper_id);
}

// ---------------------------------------------------------------------------
// Group statistics

enum class Dimension { All, Authorship, Institutional, Departmental };

inline const char* to_string(Dimension d) {
  switch (d) {
    case Dimension::All: return "all";
    case Dimension::Authorship: return "authorship";
    case Dimension::Institutional: return "institutional";
    default: return "departmental";
  }
}

struct GroupStats {
  std::string dimension;
  std::string group;
  std::optional<int> year;  // nullopt = all years
  bool aggregate = false;   // true for "with-affiliations" style union rows
  uint64_t n = 0;
  std::optional<double> median;
  std::optional<double> mean;
  std::optional<double> pct_cited;  // 0..100
};

// Median with even-n mean of the two central order statistics; exact in
// binary floating point for integer counts.
inline double median_of_sorted(const std::vector<int>& sorted) {
  size_t n = sorted.size();
  if (n % 2 == 1) return static_cast<double>(sorted[n / 2]);
  return (static_cast<double>(sorted[n / 2 - 1]) + static_cast<double>(sorted[n / 2])) / 2.0;
}

inline GroupStats make_group_stats(std::string dimension, std::string group,
                                   std::optional<int> year, bool aggregate,
                                   std::vector<int> counts) {
  GroupStats s;
  s.dimension = std::move(dimension);
  s.group = std::move(group);
  s.year = year;
  s.aggregate = aggregate;
  s.n = counts.size();
  if (!counts.empty()) {
    std::sort(counts.begin(), counts.end());
    int64_t sum = 0;
    int64_t cited = 0;
    for (int c : counts) {
      sum += c;
      if (c >= 1) ++cited;
    }
    s.median = median_of_sorted(counts);
    s.mean = static_cast<double>(sum) / static_cast<double>(counts.size());
    s.pct_cited = 100.0 * static_cast<double>(cited) / static_cast<double>(counts.size());
  }
  return s;
}

// The groups of one dimension. Partition groups cover every paper exactly
// once; aggregate groups are unions emitted alongside (Table-2 style).
struct GroupDef {
  std::string name;
  bool aggregate;
};

inline std::vector<GroupDef> groups_for(Dimension dim) {
  switch (dim) {
    case Dimension::All:
      return {{"all", false}};
    case Dimension::Authorship:
      return {{"multi-author", false}, {"single-author", false}, {"excluded", false}};
    case Dimension::Institutional:
      return {{"with-inst-affiliations", true},
              {"multi-institution", false},
              {"single-institution", false},
              {"without-inst-affiliations", false}};
    default:
      return {{"with-dept-affiliations", true},
              {"multi-dept", false},
              {"single-dept", false},
              {"without-dept-affiliations", false}};
  }
}

// Partition group of one paper for a dimension (never an aggregate name).
inline std::string partition_group(const CollabLabels& l, Dimension dim) {
  switch (dim) {
    case Dimension::All:
      return "all";
    case Dimension::Authorship:
      return to_string(l.authorship);
    case Dimension::Institutional:
      return l.institutional == Institutional::Excluded ? "without-inst-affiliations"
                                                        : to_string(l.institutional);
    default:
      return l.departmental == Departmental::Excluded ? "without-dept-affiliations"
                                                      : to_string(l.departmental);
  }
}

inline bool group_contains(const CollabLabels& l, Dimension dim, const std::string& group) {
  if (group == "with-inst-affiliations") return l.institutional != Institutional::Excluded;
  if (group == "with-dept-affiliations") return l.departmental != Departmental::Excluded;
  return partition_group(l, dim) == group;
}

// Citation statistics per group; with by_year, one row per (group, year).
inline std::vector<GroupStats> group_stats(const Corpus& corpus,
                                           const std::vector<CollabLabels>& labels,
                                           const CitationGraph& graph, Dimension dim,
                                           bool by_year) {
  check_invariant(labels.size() == corpus.size(), "labels do not cover the corpus");
  std::vector<GroupStats> out;
  for (const GroupDef& gd : groups_for(dim)) {
    if (!by_year) {
      std::vector<int> counts;
      for (size_t i = 0; i < labels.size(); ++i) {
        if (group_contains(labels[i], dim, gd.name)) {
          counts.push_back(graph.in_citations(corpus.papers[i].id));
        }
      }
      out.push_back(make_group_stats(to_string(dim), gd.name, std::nullopt,
                                     gd.aggregate, std::move(counts)));
    } else {
      std::map<int, std::vector<int>> per_year;
      for (size_t i = 0; i < labels.size(); ++i) {
        if (group_contains(labels[i], dim, gd.name)) {
          per_year[corpus.papers[i].year].push_back(
              graph.in_citations(corpus.papers[i].id));
        }
      }
      for (auto& [year, counts] : per_year) {
        out.push_back(make_group_stats(to_string(dim), gd.name, year, gd.aggregate,
                                       std::move(counts)));
      }
    }
  }
  return out;
}

// Values within the nearest-rank percentile band [P_lo, P_hi], sorted.
// Medians and means are never computed from this; they always use all data.
inline std::vector<int> trimmed_distribution(std::vector<int> counts, int lo_pct = 10,
                                             int hi_pct = 90) {
  require_input(!counts.empty(), "trimmed_distribution: empty input");
  require_input(0 <= lo_pct && lo_pct <= hi_pct && hi_pct <= 100,
                "trimmed_distribution: bad percentile bounds");
  std::sort(counts.begin(), counts.end());
  const size_t n = counts.size();
  auto nearest_rank = [&](int pct) -> int {
    size_t rank = static_cast<size_t>((static_cast<uint64_t>(pct) * n + 99) / 100);
    if (rank < 1) rank = 1;
    return counts[rank - 1];
  };
  int lo = nearest_rank(lo_pct);
  int hi = nearest_rank(hi_pct);
  std::vector<int> out;
  for (int c : counts) {
    if (c >= lo && c <= hi) out.push_back(c);
  }
  return out;
}

// Total out-citation links of each department's papers. A paper contributes
// its full reference list to every department it resolves to.
inline std::map<std::string, uint64_t> department_out_citations(
    const Corpus& corpus, const std::vector<CollabLabels>& labels,
    const CitationGraph& graph) {
  std::map<std::string, uint64_t> out;
  for (size_t i = 0; i < labels.size(); ++i) {
    auto it = graph.out_edges.find(corpus.papers[i].id);
    if (it == graph.out_edges.end()) continue;
    uint64_t refs = it->second.size();
    for (const auto& d : labels[i].departments()) out[d] += refs;
  }
  return out;
}

}  // namespace collabkit
