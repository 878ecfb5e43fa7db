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
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "collabkit/citegraph.hpp"
#include "collabkit/classify.hpp"
#include "collabkit/cluster.hpp"
#include "collabkit/comatrix.hpp"
#include "collabkit/csv.hpp"

namespace collabkit {

inline std::string emit_labels_csv(std::vector<CollabLabels> labels) {
  std::sort(labels.begin(), labels.end(),
            [](const CollabLabels& a, const CollabLabels& b) {
              return a.paper_id < b.paper_id;
            });
  CsvWriter w({"paper_id", "authorship", "institutional", "departmental",
               "inst_reason", "dept_reason", "departments"});
  for (const auto& l : labels) {
    std::string depts;
    for (const auto& d : l.departments()) {
      if (!depts.empty()) depts.push_back(';');
      depts += d;
    }
    w.row({l.paper_id, to_string(l.authorship), to_string(l.institutional),
           to_string(l.departmental), l.inst_reason, l.dept_reason, depts});
  }
  return w.str();
}

// Table-1-shaped counts: every label bucket plus the with-affiliations
// aggregates. Subset percentages are computed within their aggregate and
// marked in pct_basis. An empty corpus emits the header only.
inline std::string emit_group_count_table(const std::vector<CollabLabels>& labels) {
  CsvWriter w({"dimension", "group", "count", "pct", "pct_basis"});
  if (labels.empty()) return w.str();
  const double total = static_cast<double>(labels.size());

  w.row({"all", "all-papers", std::to_string(labels.size()), "", ""});
  for (Dimension dim : {Dimension::Authorship, Dimension::Institutional,
                        Dimension::Departmental}) {
    uint64_t subset_base = 0;
    for (const GroupDef& gd : groups_for(dim)) {
      if (gd.aggregate) {
        for (const auto& l : labels) {
          if (group_contains(l, dim, gd.name)) ++subset_base;
        }
      }
    }
    for (const GroupDef& gd : groups_for(dim)) {
      uint64_t n = 0;
      for (const auto& l : labels) {
        if (group_contains(l, dim, gd.name)) ++n;
      }
      bool subset = !gd.aggregate && subset_base > 0 &&
                    (gd.name.rfind("multi-", 0) == 0 || gd.name.rfind("single-", 0) == 0) &&
                    dim != Dimension::Authorship;
      double base = subset ? static_cast<double>(subset_base) : total;
      std::string pct = base > 0 ? format_real(100.0 * static_cast<double>(n) / base)
                                 : std::string();
      w.row({to_string(dim), gd.name, std::to_string(n), pct,
             subset ? "subset" : "all"});
    }
  }
  return w.str();
}

// One row per (year, dimension, partition label) with count and within-year
// percentage; per-year percentages sum to 100 within rounding.
inline std::string emit_timeseries(const Corpus& corpus,
                                   const std::vector<CollabLabels>& labels) {
  CsvWriter w({"year", "dimension", "label", "count", "pct"});
  std::set<int> years;
  for (const auto& p : corpus.papers) years.insert(p.year);
  std::map<int, uint64_t> year_total;
  for (const auto& p : corpus.papers) ++year_total[p.year];

  for (int year : years) {
    for (Dimension dim : {Dimension::Authorship, Dimension::Institutional,
                          Dimension::Departmental}) {
      for (const GroupDef& gd : groups_for(dim)) {
        if (gd.aggregate) continue;
        uint64_t n = 0;
        for (size_t i = 0; i < labels.size(); ++i) {
          if (corpus.papers[i].year == year &&
              partition_group(labels[i], dim) == gd.name) {
            ++n;
          }
        }
        double pct = 100.0 * static_cast<double>(n) /
                     static_cast<double>(year_total[year]);
        w.row({std::to_string(year), to_string(dim), gd.name, std::to_string(n),
               format_real(pct)});
      }
    }
  }
  return w.str();
}

inline std::string emit_stats_csv(const std::vector<GroupStats>& rows) {
  CsvWriter w({"dimension", "group", "year", "n", "median", "mean", "pct_cited"});
  for (const auto& s : rows) {
    w.row({s.dimension, s.group, s.year ? std::to_string(*s.year) : "ALL",
           std::to_string(s.n), format_opt_real(s.median), format_opt_real(s.mean),
           format_opt_real(s.pct_cited)});
  }
  return w.str();
}

// Trimmed per-year citation distributions for the labeled (multi/single)
// groups of each dimension; feeds a violin-plot renderer downstream.
inline std::string emit_violin_csv(const Corpus& corpus,
                                   const std::vector<CollabLabels>& labels,
                                   const CitationGraph& graph, int lo_pct = 10,
                                   int hi_pct = 90) {
  CsvWriter w({"dimension", "group", "year", "value"});
  for (Dimension dim : {Dimension::Authorship, Dimension::Institutional,
                        Dimension::Departmental}) {
    for (const GroupDef& gd : groups_for(dim)) {
      bool labeled = gd.name.rfind("multi-", 0) == 0 || gd.name.rfind("single-", 0) == 0;
      if (gd.aggregate || !labeled) continue;
      std::map<int, std::vector<int>> per_year;
      for (size_t i = 0; i < labels.size(); ++i) {
        if (partition_group(labels[i], dim) == gd.name) {
          per_year[corpus.papers[i].year].push_back(
              graph.in_citations(corpus.papers[i].id));
        }
      }
      for (auto& [year, counts] : per_year) {
        for (int v : trimmed_distribution(std::move(counts), lo_pct, hi_pct)) {
          w.row({to_string(dim), gd.name, std::to_string(year), std::to_string(v)});
        }
      }
    }
  }
  return w.str();
}

// Square matrix with a department-id header row and column.
inline std::string emit_comatrix_csv(const CoMatrix& cm, bool normalized) {
  std::vector<std::string> header{"id"};
  header.insert(header.end(), cm.ids.begin(), cm.ids.end());
  CsvWriter w(header);
  for (size_t i = 0; i < cm.size(); ++i) {
    std::vector<std::string> row{cm.ids[i]};
    for (size_t j = 0; j < cm.size(); ++j) {
      row.push_back(normalized ? format_real(cm.normalized[i][j])
                               : std::to_string(cm.counts[i][j]));
    }
    w.row(row);
  }
  return w.str();
}

inline std::string emit_linkage_csv(const Linkage& lk) {
  CsvWriter w({"step", "a", "b", "distance", "size"});
  for (size_t k = 0; k < lk.merges.size(); ++k) {
    const auto& m = lk.merges[k];
    w.row({std::to_string(k), std::to_string(m.a), std::to_string(m.b),
           format_real(m.distance), std::to_string(m.size)});
  }
  return w.str();
}

inline std::string emit_leaf_order(const std::vector<std::string>& order) {
  std::string out;
  for (const auto& id : order) {
    out += id;
    out.push_back('\n');
  }
  return out;
}

// ---------------------------------------------------------------------------
// Heatmap rendering

// Inputs for the dendrogram-ordered co-authorship heatmap. `matrix` is the
// row-normalized co-authorship matrix restricted to the clustered
// departments; `annotations` carries each department's count of papers
// co-authored with another department in the rendered set.
struct HeatmapSpec {
  CoMatrix matrix;
  std::map<std::string, uint64_t> annotations;
};

namespace detail {

inline std::string svg_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

inline std::string fmt2(double v) {
  if (v == 0.0) v = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return std::string(buf);
}

// Linear white -> dark blue ramp over [0, vmax]; documented in the SVG desc.
inline std::string ramp_color(double v, double vmax) {
  double t = vmax > 0.0 ? v / vmax : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  auto ch = [&](double from, double to) {
    return static_cast<int>(std::llround(from + (to - from) * t));
  };
  return "rgb(" + std::to_string(ch(255, 8)) + "," + std::to_string(ch(255, 48)) +
         "," + std::to_string(ch(255, 107)) + ")";
}

}  // namespace detail

// Deterministic SVG: dendrogram topology on the left (uniform level spacing,
// no distance axis), the heatmap grid ordered by the dendrogram's leaf order
// on both axes, diagonal cells rendered as value 0.
inline std::string render_heatmap(const HeatmapSpec& spec, const Dendrogram& dendro) {
  const std::vector<std::string>& order = dendro.leaves_in_order;
  {
    std::set<std::string> a(order.begin(), order.end());
    std::set<std::string> b(spec.matrix.ids.begin(), spec.matrix.ids.end());
    if (a != b) {
      std::string msg = "render_heatmap: leaf order and matrix ids differ;";
      for (const auto& id : a) {
        if (!b.count(id)) msg += " only-in-order:" + id;
      }
      for (const auto& id : b) {
        if (!a.count(id)) msg += " only-in-matrix:" + id;
      }
      throw ValidationError(msg);
    }
  }
  const size_t n = order.size();
  std::map<std::string, size_t> matrix_pos;
  for (size_t i = 0; i < spec.matrix.size(); ++i) matrix_pos[spec.matrix.ids[i]] = i;

  // Values in render order with the diagonal zeroed.
  std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
  double vmax = 0.0;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      v[i][j] = spec.matrix.normalized[matrix_pos.at(order[i])][matrix_pos.at(order[j])];
      vmax = std::max(vmax, v[i][j]);
    }
  }

  const double cell = 18.0;
  const double dendro_w = 120.0;
  const double label_w = 230.0;
  const double top = 150.0;
  const double left = dendro_w + label_w;
  const double grid = cell * static_cast<double>(n);
  const double width = left + grid + 20.0;
  const double height = top + grid + 20.0;

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::fmt2(width) +
         "\" height=\"" + detail::fmt2(height) + "\" viewBox=\"0 0 " +
         detail::fmt2(width) + " " + detail::fmt2(height) + "\">\n";
  svg += "<desc>row-normalized co-authorship heatmap; rows and columns follow the "
         "co-citation dendrogram leaf order; diagonal zeroed; color ramp linear "
         "rgb(255,255,255) to rgb(8,48,107) over [0," +
         format_real(vmax) + "]; labels show department and its count of papers "
         "co-authored with another department</desc>\n";
  svg += "<style>text{font-family:monospace;font-size:11px;fill:#222;}"
         ".dendro{stroke:#555;stroke-width:1;fill:none;}"
         ".cell{stroke:#ddd;stroke-width:0.25;}</style>\n";

  // Dendrogram: leaves at x = dendro_w, one uniform level per merge step.
  const int n_leaves = static_cast<int>(dendro.ids.size());
  const size_t n_merges = dendro.nodes.size() - static_cast<size_t>(n_leaves);
  std::map<std::string, size_t> row_of;
  for (size_t i = 0; i < n; ++i) row_of[order[i]] = i;
  auto leaf_y = [&](size_t row) { return top + (static_cast<double>(row) + 0.5) * cell; };
  std::vector<double> node_y(dendro.nodes.size(), 0.0);
  std::vector<double> node_x(dendro.nodes.size(), dendro_w);
  for (int leaf = 0; leaf < n_leaves; ++leaf) {
    node_y[leaf] = leaf_y(row_of.at(dendro.ids[leaf]));
  }
  svg += "<g class=\"dendrogram\">\n";
  for (size_t k = 0; k < n_merges; ++k) {
    size_t node = static_cast<size_t>(n_leaves) + k;
    const auto& nd = dendro.nodes[node];
    node_x[node] = dendro_w * (1.0 - (static_cast<double>(k) + 1.0) /
                                         static_cast<double>(n_merges));
    node_y[node] = (node_y[nd.left] + node_y[nd.right]) / 2.0;
    const double x = node_x[node];
    svg += "<path class=\"dendro\" d=\"M" + detail::fmt2(node_x[nd.left]) + " " +
           detail::fmt2(node_y[nd.left]) + " L" + detail::fmt2(x) + " " +
           detail::fmt2(node_y[nd.left]) + " L" + detail::fmt2(x) + " " +
           detail::fmt2(node_y[nd.right]) + " L" + detail::fmt2(node_x[nd.right]) +
           " " + detail::fmt2(node_y[nd.right]) + "\"/>\n";
  }
  svg += "</g>\n";

  // Cells, row-major in leaf order.
  svg += "<g class=\"cells\">\n";
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      svg += "<rect class=\"cell\" data-i=\"" + std::to_string(i) + "\" data-j=\"" +
             std::to_string(j) + "\" x=\"" + detail::fmt2(left + cell * j) +
             "\" y=\"" + detail::fmt2(top + cell * i) + "\" width=\"" +
             detail::fmt2(cell) + "\" height=\"" + detail::fmt2(cell) +
             "\" fill=\"" + detail::ramp_color(v[i][j], vmax) + "\"/>\n";
    }
  }
  svg += "</g>\n";

  svg += "<g class=\"row-labels\">\n";
  for (size_t i = 0; i < n; ++i) {
    uint64_t count = 0;
    if (auto it = spec.annotations.find(order[i]); it != spec.annotations.end()) {
      count = it->second;
    }
    svg += "<text class=\"row-label\" x=\"" + detail::fmt2(dendro_w + 6.0) +
           "\" y=\"" + detail::fmt2(leaf_y(i) + 4.0) + "\">" +
           detail::svg_escape(order[i]) + " (" + std::to_string(count) + ")</text>\n";
  }
  svg += "</g>\n<g class=\"col-labels\">\n";
  for (size_t j = 0; j < n; ++j) {
    const double x = left + cell * (static_cast<double>(j) + 0.5) + 4.0;
    svg += "<text class=\"col-label\" x=\"" + detail::fmt2(x) + "\" y=\"" +
           detail::fmt2(top - 6.0) + "\" transform=\"rotate(-90 " + detail::fmt2(x) +
           " " + detail::fmt2(top - 6.0) + ")\">" + detail::svg_escape(order[j]) +
           "</text>\n";
  }
  svg += "</g>\n</svg>\n";
  return svg;
}

}  // namespace collabkit
