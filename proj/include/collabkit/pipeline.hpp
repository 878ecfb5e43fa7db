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

#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "collabkit/citegraph.hpp"
#include "collabkit/classify.hpp"
#include "collabkit/cluster.hpp"
#include "collabkit/comatrix.hpp"
#include "collabkit/corpus.hpp"
#include "collabkit/report.hpp"
#include "collabkit/rules.hpp"

namespace collabkit {

struct PipelineOptions {
  std::filesystem::path papers;
  std::filesystem::path citations;
  std::filesystem::path works;
  std::filesystem::path rules;
  std::filesystem::path out_dir;
  std::string home_id;
  std::optional<int> min_year;
  std::optional<int> max_year;
  int min_cocite = 2;
  int min_work_year = 1991;
  uint64_t min_out_citations = 20;
  std::set<std::string> exclude;  // clustering and heatmap exclusions
  int workers = 1;
};

// In-memory state shared by the CLI subcommands; each stage builds on the
// previous one. The heavy inputs are loaded once.
struct PipelineState {
  RuleSet rules;
  Corpus corpus;
  std::vector<CollabLabels> labels;
  CitationGraph graph;
};

inline PipelineState load_and_classify(const PipelineOptions& opt,
                                       bool need_graph = true) {
  PipelineState st;
  st.rules = compile_rules(read_file(opt.rules));
  st.corpus = load_papers_file(opt.papers, opt.workers);
  if (opt.min_year || opt.max_year) {
    int lo = opt.min_year.value_or(std::numeric_limits<int>::min());
    int hi = opt.max_year.value_or(std::numeric_limits<int>::max());
    st.corpus = filter_by_year(st.corpus, lo, hi);
  }
  st.corpus = select_by_institution(st.corpus, st.rules, opt.home_id);
  st.labels = classify_corpus(st.corpus, st.rules, opt.home_id, opt.workers);
  if (need_graph) {
    st.graph = build_graph(st.corpus, read_file(opt.citations), read_file(opt.works),
                           opt.workers, opt.citations.filename().string(),
                           opt.works.filename().string());
  }
  return st;
}

inline std::vector<GroupStats> all_group_stats(const PipelineState& st) {
  std::vector<GroupStats> rows;
  for (Dimension dim : {Dimension::All, Dimension::Authorship,
                        Dimension::Institutional, Dimension::Departmental}) {
    for (auto& r : group_stats(st.corpus, st.labels, st.graph, dim, false)) {
      rows.push_back(std::move(r));
    }
    for (auto& r : group_stats(st.corpus, st.labels, st.graph, dim, true)) {
      rows.push_back(std::move(r));
    }
  }
  return rows;
}

// Departments kept for clustering, plus the matrices and linkage.
struct ClusterStage {
  CoMatrix cocitation;        // full department space
  CoMatrix coauthorship;      // full department space
  CoMatrix cocitation_kept;   // restricted to clustered departments
  CoMatrix coauthorship_kept; // restricted to the same departments
  Linkage linkage;
  Dendrogram dendrogram;
  std::map<std::string, uint64_t> out_citations;
  size_t cocited_works = 0;
};

inline ClusterStage run_cluster_stage(const PipelineState& st,
                                      const PipelineOptions& opt) {
  ClusterStage cs;
  IncidenceMatrix ci = citation_incidence(st.corpus, st.labels, st.graph, st.rules,
                                          opt.min_cocite, opt.min_work_year,
                                          opt.workers);
  IncidenceMatrix ai = authorship_incidence(st.corpus, st.labels, st.rules, opt.workers);
  cs.cocited_works = ci.col_ids.size();
  cs.cocitation = co_matrix(ci);
  cs.coauthorship = co_matrix(ai);
  check_comatrix_invariants(cs.cocitation);
  check_comatrix_invariants(cs.coauthorship);

  cs.out_citations = department_out_citations(st.corpus, st.labels, st.graph);
  cs.cocitation_kept = select_for_clustering(cs.cocitation, cs.out_citations,
                                             opt.min_out_citations, opt.exclude);
  require_input(cs.cocitation_kept.size() >= 2,
                "clustering needs at least 2 departments after exclusions");

  cs.linkage = ward_linkage(cs.cocitation_kept.normalized, cs.cocitation_kept.ids);
  cs.dendrogram = build_dendrogram(cs.linkage);

  std::set<std::string> kept(cs.cocitation_kept.ids.begin(), cs.cocitation_kept.ids.end());
  cs.coauthorship_kept = restrict_to(cs.coauthorship, kept);
  return cs;
}

// Papers co-authored with another department, per department, within the
// rendered set: multi-departmental papers whose department set intersects the
// kept set in at least two ids.
inline std::map<std::string, uint64_t> heatmap_annotations(
    const std::vector<CollabLabels>& labels, const std::set<std::string>& kept) {
  std::map<std::string, uint64_t> out;
  for (const auto& id : kept) out[id] = 0;
  for (const auto& l : labels) {
    if (l.departmental != Departmental::MultiDept) continue;
    std::vector<std::string> in_kept;
    for (const auto& d : l.departments()) {
      if (kept.count(d)) in_kept.push_back(d);
    }
    if (in_kept.size() < 2) continue;
    for (const auto& d : in_kept) ++out[d];
  }
  return out;
}

inline std::string render_pipeline_heatmap(const PipelineState& st,
                                           const ClusterStage& cs) {
  HeatmapSpec spec;
  spec.matrix = cs.coauthorship_kept;
  std::set<std::string> kept(cs.coauthorship_kept.ids.begin(),
                             cs.coauthorship_kept.ids.end());
  spec.annotations = heatmap_annotations(st.labels, kept);
  return render_heatmap(spec, cs.dendrogram);
}

struct PipelineResult {
  size_t papers = 0;
  size_t departments = 0;
  size_t clustered_departments = 0;
};

// Runs every stage and writes the full output set under out_dir. All outputs
// are deterministic functions of the inputs and options.
inline PipelineResult run_pipeline(const PipelineOptions& opt) {
  namespace fs = std::filesystem;
  fs::create_directories(opt.out_dir);

  PipelineState st = load_and_classify(opt);
  ClusterStage cs = run_cluster_stage(st, opt);

  write_file(opt.out_dir / "labels.csv", emit_labels_csv(st.labels));
  write_file(opt.out_dir / "counts.csv", emit_group_count_table(st.labels));
  write_file(opt.out_dir / "timeseries.csv", emit_timeseries(st.corpus, st.labels));
  write_file(opt.out_dir / "stats.csv", emit_stats_csv(all_group_stats(st)));
  write_file(opt.out_dir / "violin.csv",
             emit_violin_csv(st.corpus, st.labels, st.graph));
  write_file(opt.out_dir / "cocitation_counts.csv",
             emit_comatrix_csv(cs.cocitation, false));
  write_file(opt.out_dir / "cocitation_norm.csv",
             emit_comatrix_csv(cs.cocitation, true));
  write_file(opt.out_dir / "coauthorship_counts.csv",
             emit_comatrix_csv(cs.coauthorship, false));
  write_file(opt.out_dir / "coauthorship_norm.csv",
             emit_comatrix_csv(cs.coauthorship, true));
  write_file(opt.out_dir / "linkage.csv", emit_linkage_csv(cs.linkage));
  write_file(opt.out_dir / "leaf_order.txt",
             emit_leaf_order(cs.dendrogram.leaves_in_order));
  write_file(opt.out_dir / "heatmap.svg", render_pipeline_heatmap(st, cs));

  nlohmann::json manifest;
  manifest["inputs"] = {{"papers", opt.papers.filename().string()},
                        {"citations", opt.citations.filename().string()},
                        {"works", opt.works.filename().string()},
                        {"rules", opt.rules.filename().string()}};
  manifest["params"] = {
      {"home", opt.home_id},
      {"min_year", opt.min_year ? nlohmann::json(*opt.min_year) : nlohmann::json()},
      {"max_year", opt.max_year ? nlohmann::json(*opt.max_year) : nlohmann::json()},
      {"min_cocite", opt.min_cocite},
      {"min_work_year", opt.min_work_year},
      {"min_out_citations", opt.min_out_citations},
      {"exclude", std::vector<std::string>(opt.exclude.begin(), opt.exclude.end())}};
  manifest["provenance"] = st.corpus.provenance;
  manifest["skippable_fields"] = {
      {"skipped_authors", st.corpus.parse_report.skipped_authors},
      {"skipped_strings", st.corpus.parse_report.skipped_strings},
      {"coerced_fields", st.corpus.parse_report.coerced_fields}};
  manifest["graph"] = {{"edges", st.graph.edge_count},
                       {"self_loops_dropped", st.graph.self_loops_dropped},
                       {"duplicate_edges", st.graph.duplicate_edges}};
  std::vector<std::string> zero_rows;
  for (size_t i = 0; i < cs.cocitation.size(); ++i) {
    if (cs.cocitation.zero_row[i]) zero_rows.push_back(cs.cocitation.ids[i]);
  }
  manifest["matrix"] = {{"departments", cs.cocitation.size()},
                        {"cocited_works", cs.cocited_works},
                        {"zero_rows", zero_rows},
                        {"clustered_departments", cs.cocitation_kept.size()}};
  write_file(opt.out_dir / "manifest.json", manifest.dump(2) + "\n");

  PipelineResult res;
  res.papers = st.corpus.size();
  res.departments = cs.cocitation.size();
  res.clustered_departments = cs.cocitation_kept.size();
  return res;
}

}  // namespace collabkit
