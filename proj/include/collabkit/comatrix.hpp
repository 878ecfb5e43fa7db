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
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "collabkit/citegraph.hpp"
#include "collabkit/classify.hpp"
#include "collabkit/corpus.hpp"
#include "collabkit/errors.hpp"
#include "collabkit/rules.hpp"

namespace collabkit {

enum class CoKind { CoCitation, CoAuthorship };

// Binary department x item membership. Rows and columns are sorted by id;
// cells are stored as sorted column indices per row.
struct IncidenceMatrix {
  CoKind kind = CoKind::CoCitation;
  std::vector<std::string> row_ids;                 // department ids, sorted
  std::vector<std::string> col_ids;                 // work/paper ids, sorted
  std::vector<std::vector<uint32_t>> rows;          // sorted col indices per row
};

// Square symmetric co-occurrence counts plus the row-normalized view.
// counts = B * B^T over the binary incidence; the diagonal is each
// department's own column count and participates in row sums.
struct CoMatrix {
  CoKind kind = CoKind::CoCitation;
  std::vector<std::string> ids;
  std::vector<std::vector<uint64_t>> counts;
  std::vector<std::vector<double>> normalized;
  std::vector<uint8_t> zero_row;  // rows with no co-occurrences at all

  size_t size() const { return ids.size(); }
};

namespace detail {

inline std::vector<std::vector<uint32_t>> accumulate_rows(
    size_t n_rows, const std::vector<std::vector<std::pair<uint32_t, uint32_t>>>& chunks) {
  std::vector<std::vector<uint32_t>> rows(n_rows);
  for (const auto& chunk : chunks) {
    for (auto [r, c] : chunk) rows[r].push_back(c);
  }
  for (auto& row : rows) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  return rows;
}

}  // namespace detail

// Department-paper incidence over cited works: column w survives when at
// least min_cocite distinct corpus papers cite it and its year is known and
// >= min_work_year; cell (d, w) is set when some corpus paper with an author
// resolved to d cites w. Row space comes from the compiled ruleset.
inline IncidenceMatrix citation_incidence(const Corpus& corpus,
                                          const std::vector<CollabLabels>& labels,
                                          const CitationGraph& graph,
                                          const RuleSet& rules, int min_cocite = 2,
                                          int min_work_year = 1991, int workers = 1) {
  check_invariant(labels.size() == corpus.size(), "labels do not cover the corpus");
  IncidenceMatrix m;
  m.kind = CoKind::CoCitation;
  m.row_ids = rules.department_ids;

  for (const auto& [work, citing] : graph.in_edges) {
    if (static_cast<int>(citing.size()) < min_cocite) continue;
    auto yit = graph.work_years.find(work);
    if (yit == graph.work_years.end() || !yit->second) continue;  // unknown year
    if (*yit->second < min_work_year) continue;
    m.col_ids.push_back(work);
  }
  std::sort(m.col_ids.begin(), m.col_ids.end());

  std::unordered_map<std::string, uint32_t> row_of, col_of;
  for (uint32_t i = 0; i < m.row_ids.size(); ++i) row_of[m.row_ids[i]] = i;
  for (uint32_t j = 0; j < m.col_ids.size(); ++j) col_of[m.col_ids[j]] = j;

  auto chunks = map_chunked<std::vector<std::pair<uint32_t, uint32_t>>>(
      corpus.size(), workers, [&](size_t begin, size_t end) {
        std::vector<std::pair<uint32_t, uint32_t>> cells;
        for (size_t i = begin; i < end; ++i) {
          std::set<std::string> depts = labels[i].departments();
          if (depts.empty()) continue;
          auto oit = graph.out_edges.find(corpus.papers[i].id);
          if (oit == graph.out_edges.end()) continue;
          for (const auto& cited : oit->second) {
            auto cit = col_of.find(cited);
            if (cit == col_of.end()) continue;
            for (const auto& d : depts) {
              cells.emplace_back(row_of.at(d), cit->second);
            }
          }
        }
        return cells;
      });
  m.rows = detail::accumulate_rows(m.row_ids.size(), chunks);
  return m;
}

// Department-paper incidence over the corpus itself: cell (d, p) is set when
// paper p has an author resolved to department d. Columns are all papers.
inline IncidenceMatrix authorship_incidence(const Corpus& corpus,
                                            const std::vector<CollabLabels>& labels,
                                            const RuleSet& rules, int workers = 1) {
  check_invariant(labels.size() == corpus.size(), "labels do not cover the corpus");
  IncidenceMatrix m;
  m.kind = CoKind::CoAuthorship;
  m.row_ids = rules.department_ids;
  m.col_ids.reserve(corpus.size());
  for (const auto& p : corpus.papers) m.col_ids.push_back(p.id);
  std::sort(m.col_ids.begin(), m.col_ids.end());

  std::unordered_map<std::string, uint32_t> row_of, col_of;
  for (uint32_t i = 0; i < m.row_ids.size(); ++i) row_of[m.row_ids[i]] = i;
  for (uint32_t j = 0; j < m.col_ids.size(); ++j) col_of[m.col_ids[j]] = j;

  auto chunks = map_chunked<std::vector<std::pair<uint32_t, uint32_t>>>(
      corpus.size(), workers, [&](size_t begin, size_t end) {
        std::vector<std::pair<uint32_t, uint32_t>> cells;
        for (size_t i = begin; i < end; ++i) {
          uint32_t col = col_of.at(corpus.papers[i].id);
          for (const auto& d : labels[i].departments()) {
            cells.emplace_back(row_of.at(d), col);
          }
        }
        return cells;
      });
  m.rows = detail::accumulate_rows(m.row_ids.size(), chunks);
  return m;
}

namespace detail {

inline uint64_t sorted_intersection_size(const std::vector<uint32_t>& a,
                                         const std::vector<uint32_t>& b) {
  uint64_t n = 0;
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (a[i] > b[j]) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

inline void normalize_counts(CoMatrix& cm) {
  const size_t n = cm.size();
  cm.normalized.assign(n, std::vector<double>(n, 0.0));
  cm.zero_row.assign(n, 0);
  for (size_t i = 0; i < n; ++i) {
    uint64_t row_sum = 0;
    for (size_t j = 0; j < n; ++j) row_sum += cm.counts[i][j];
    if (row_sum == 0) {
      cm.zero_row[i] = 1;
      continue;
    }
    for (size_t j = 0; j < n; ++j) {
      cm.normalized[i][j] =
          static_cast<double>(cm.counts[i][j]) / static_cast<double>(row_sum);
    }
  }
}

}  // namespace detail

// counts[d][e] = number of columns shared by rows d and e (B * B^T);
// the diagonal is each row's own column count.
inline CoMatrix co_matrix(const IncidenceMatrix& incidence) {
  CoMatrix cm;
  cm.kind = incidence.kind;
  cm.ids = incidence.row_ids;
  const size_t n = cm.ids.size();
  cm.counts.assign(n, std::vector<uint64_t>(n, 0));
  for (size_t i = 0; i < n; ++i) {
    cm.counts[i][i] = incidence.rows[i].size();
    for (size_t j = i + 1; j < n; ++j) {
      uint64_t c = detail::sorted_intersection_size(incidence.rows[i], incidence.rows[j]);
      cm.counts[i][j] = c;
      cm.counts[j][i] = c;
    }
  }
  detail::normalize_counts(cm);
  return cm;
}

// Restricts a co-matrix to the given ids (order-preserving on the matrix's
// own sorted order) and renormalizes over the restricted counts.
inline CoMatrix restrict_to(const CoMatrix& cm, const std::set<std::string>& keep) {
  CoMatrix out;
  out.kind = cm.kind;
  std::vector<size_t> take;
  for (size_t i = 0; i < cm.size(); ++i) {
    if (keep.count(cm.ids[i])) {
      take.push_back(i);
      out.ids.push_back(cm.ids[i]);
    }
  }
  require_input(!out.ids.empty(), "matrix restriction removed every department");
  out.counts.assign(take.size(), std::vector<uint64_t>(take.size(), 0));
  for (size_t a = 0; a < take.size(); ++a) {
    for (size_t b = 0; b < take.size(); ++b) {
      out.counts[a][b] = cm.counts[take[a]][take[b]];
    }
  }
  detail::normalize_counts(out);
  return out;
}

// Drops departments below the out-citation floor or on the exclusion list,
// then renormalizes over the restricted counts.
inline CoMatrix select_for_clustering(const CoMatrix& cm,
                                      const std::map<std::string, uint64_t>& out_citations,
                                      uint64_t min_out_citations = 20,
                                      const std::set<std::string>& exclude = {}) {
  std::set<std::string> keep;
  for (const auto& id : cm.ids) {
    auto it = out_citations.find(id);
    uint64_t n = it == out_citations.end() ? 0 : it->second;
    if (n >= min_out_citations && !exclude.count(id)) keep.insert(id);
  }
  require_input(!keep.empty(),
                "select_for_clustering: every department was excluded");
  return restrict_to(cm, keep);
}

inline void check_comatrix_invariants(const CoMatrix& cm) {
  const size_t n = cm.size();
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      check_invariant(cm.counts[i][j] == cm.counts[j][i], "co-matrix not symmetric");
      check_invariant(cm.counts[i][i] >= cm.counts[i][j],
                      "co-matrix diagonal not dominant");
    }
    double row_sum = 0;
    for (size_t j = 0; j < n; ++j) row_sum += cm.normalized[i][j];
    if (cm.zero_row[i]) {
      check_invariant(row_sum == 0.0, "zero row has nonzero normalized values");
    } else {
      check_invariant(std::abs(row_sum - 1.0) <= 1e-12,
                      "normalized row does not sum to 1");
    }
  }
}

}  // namespace collabkit
