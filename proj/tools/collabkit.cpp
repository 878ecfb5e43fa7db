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

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "collabkit/pipeline.hpp"
#include "collabkit/synth.hpp"

namespace fs = std::filesystem;
using namespace collabkit;

namespace {

struct CommonArgs {
  std::string papers, citations, works, rules;
  std::string home;
  std::optional<int> min_year, max_year;
  int min_cocite = 2;
  int min_work_year = 1991;
  uint64_t min_outcitations = 20;
  std::vector<std::string> exclude;
  std::string out_dir = "out";
  int workers = 1;
};

PipelineOptions to_options(const CommonArgs& a) {
  PipelineOptions opt;
  opt.papers = a.papers;
  opt.citations = a.citations;
  opt.works = a.works;
  opt.rules = a.rules;
  opt.out_dir = a.out_dir;
  opt.home_id = a.home;
  opt.min_year = a.min_year;
  opt.max_year = a.max_year;
  opt.min_cocite = a.min_cocite;
  opt.min_work_year = a.min_work_year;
  opt.min_out_citations = a.min_outcitations;
  opt.exclude = std::set<std::string>(a.exclude.begin(), a.exclude.end());
  opt.workers = a.workers;
  return opt;
}

void add_input_flags(CLI::App* cmd, CommonArgs& a, bool with_graph,
                     bool with_matrix_knobs) {
  cmd->add_option("--papers", a.papers, "papers.jsonl input")->required();
  cmd->add_option("--rules", a.rules, "rules.json input")->required();
  cmd->add_option("--home", a.home, "home institution id")->required();
  if (with_graph) {
    cmd->add_option("--citations", a.citations, "citations.jsonl input")->required();
    cmd->add_option("--works", a.works, "works.jsonl input")->required();
  }
  cmd->add_option("--min-year", a.min_year, "keep papers with year >= this");
  cmd->add_option("--max-year", a.max_year, "keep papers with year <= this");
  if (with_matrix_knobs) {
    cmd->add_option("--min-cocite", a.min_cocite,
                    "a cited work needs this many distinct citing papers");
    cmd->add_option("--min-work-year", a.min_work_year,
                    "drop cited works older than this (unknown years drop too)");
    cmd->add_option("--min-outcitations", a.min_outcitations,
                    "departments below this out-citation count are not clustered");
    cmd->add_option("--exclude", a.exclude,
                    "department ids excluded from clustering and the heatmap");
  }
  cmd->add_option("--out-dir", a.out_dir, "output directory");
  cmd->add_option("--workers", a.workers, "worker threads for parsing/accumulation");
}

void write_out(const fs::path& dir, const std::string& name, const std::string& content) {
  fs::create_directories(dir);
  write_file(dir / name, content);
  std::cout << "wrote " << (dir / name).string() << "\n";
}

int run_validate(const CommonArgs& a) {
  PipelineOptions opt = to_options(a);
  PipelineState st = load_and_classify(opt, /*need_graph=*/!a.citations.empty());
  std::cout << "papers: " << st.corpus.size() << "\n";
  for (const auto& line : st.corpus.provenance) std::cout << "  " << line << "\n";
  std::cout << "skippable fields: authors=" << st.corpus.parse_report.skipped_authors
            << " strings=" << st.corpus.parse_report.skipped_strings
            << " coerced=" << st.corpus.parse_report.coerced_fields << "\n";
  std::cout << "institutions: " << st.rules.institution_ids.size()
            << ", departments: " << st.rules.department_ids.size() << "\n";
  if (!a.citations.empty()) {
    std::cout << "citation edges: " << st.graph.edge_count
              << " (self-loops dropped: " << st.graph.self_loops_dropped
              << ", duplicates: " << st.graph.duplicate_edges << ")\n";
  }
  std::cout << "ok\n";
  return kExitOk;
}

int run_classify(const CommonArgs& a) {
  PipelineOptions opt = to_options(a);
  PipelineState st = load_and_classify(opt, /*need_graph=*/false);
  write_out(opt.out_dir, "labels.csv", emit_labels_csv(st.labels));
  return kExitOk;
}

int run_stats(const CommonArgs& a) {
  PipelineOptions opt = to_options(a);
  PipelineState st = load_and_classify(opt);
  write_out(opt.out_dir, "stats.csv", emit_stats_csv(all_group_stats(st)));
  write_out(opt.out_dir, "violin.csv", emit_violin_csv(st.corpus, st.labels, st.graph));
  return kExitOk;
}

int run_matrix(const CommonArgs& a) {
  PipelineOptions opt = to_options(a);
  PipelineState st = load_and_classify(opt);
  IncidenceMatrix ci = citation_incidence(st.corpus, st.labels, st.graph, st.rules,
                                          opt.min_cocite, opt.min_work_year, opt.workers);
  IncidenceMatrix ai = authorship_incidence(st.corpus, st.labels, st.rules, opt.workers);
  CoMatrix cc = co_matrix(ci);
  CoMatrix ca = co_matrix(ai);
  check_comatrix_invariants(cc);
  check_comatrix_invariants(ca);
  write_out(opt.out_dir, "cocitation_counts.csv", emit_comatrix_csv(cc, false));
  write_out(opt.out_dir, "cocitation_norm.csv", emit_comatrix_csv(cc, true));
  write_out(opt.out_dir, "coauthorship_counts.csv", emit_comatrix_csv(ca, false));
  write_out(opt.out_dir, "coauthorship_norm.csv", emit_comatrix_csv(ca, true));
  return kExitOk;
}

int run_cluster(const CommonArgs& a) {
  PipelineOptions opt = to_options(a);
  PipelineState st = load_and_classify(opt);
  ClusterStage cs = run_cluster_stage(st, opt);
  write_out(opt.out_dir, "linkage.csv", emit_linkage_csv(cs.linkage));
  write_out(opt.out_dir, "leaf_order.txt", emit_leaf_order(cs.dendrogram.leaves_in_order));
  return kExitOk;
}

int run_render(const CommonArgs& a) {
  PipelineOptions opt = to_options(a);
  PipelineState st = load_and_classify(opt);
  ClusterStage cs = run_cluster_stage(st, opt);
  write_out(opt.out_dir, "heatmap.svg", render_pipeline_heatmap(st, cs));
  return kExitOk;
}

int run_pipeline_cmd(const CommonArgs& a) {
  PipelineOptions opt = to_options(a);
  PipelineResult res = run_pipeline(opt);
  std::cout << "pipeline complete: " << res.papers << " papers, "
            << res.departments << " departments, " << res.clustered_departments
            << " clustered; outputs in " << opt.out_dir.string() << "\n";
  return kExitOk;
}

int run_synth(const std::string& config_path, std::optional<uint64_t> seed,
              const std::string& out_dir) {
  SynthConfig cfg = config_path.empty()
                        ? SynthConfig{}
                        : SynthConfig::from_json(read_file(config_path));
  if (seed) cfg.seed = *seed;
  cfg.validate();
  SynthOutput out = generate(cfg);
  fs::path dir(out_dir);
  write_out(dir, "papers.jsonl", out.papers);
  write_out(dir, "citations.jsonl", out.citations);
  write_out(dir, "works.jsonl", out.works);
  write_out(dir, "rules.json", out.rules);
  write_out(dir, "truth_labels.csv", out.truth_labels);
  write_out(dir, "truth_clusters.csv", out.truth_clusters);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"collabkit: collaboration analytics over bibliographic corpora"};
  app.require_subcommand(1);

  CommonArgs validate_args, classify_args, stats_args, matrix_args, cluster_args,
      render_args, pipeline_args;

  CLI::App* c_validate = app.add_subcommand("validate", "parse and check all inputs");
  add_input_flags(c_validate, validate_args, false, false);
  c_validate->add_option("--citations", validate_args.citations, "citations.jsonl input");
  c_validate->add_option("--works", validate_args.works, "works.jsonl input");

  CLI::App* c_classify =
      app.add_subcommand("classify", "label papers and write labels.csv");
  add_input_flags(c_classify, classify_args, false, false);

  CLI::App* c_stats =
      app.add_subcommand("stats", "citation statistics per group (stats.csv, violin.csv)");
  add_input_flags(c_stats, stats_args, true, false);

  CLI::App* c_matrix =
      app.add_subcommand("matrix", "co-citation and co-authorship matrices");
  add_input_flags(c_matrix, matrix_args, true, true);

  CLI::App* c_cluster =
      app.add_subcommand("cluster", "ward clustering (linkage.csv, leaf_order.txt)");
  add_input_flags(c_cluster, cluster_args, true, true);

  CLI::App* c_render =
      app.add_subcommand("render", "dendrogram-ordered co-authorship heatmap (SVG)");
  add_input_flags(c_render, render_args, true, true);

  CLI::App* c_pipeline = app.add_subcommand("pipeline", "run every stage");
  add_input_flags(c_pipeline, pipeline_args, true, true);

  std::string synth_config;
  std::string synth_out = "out";
  std::optional<uint64_t> synth_seed;
  CLI::App* c_synth =
      app.add_subcommand("synth", "generate a synthetic corpus with ground truth");
  c_synth->add_option("--config", synth_config, "synth config JSON file");
  c_synth->add_option("--seed", synth_seed, "override the config seed");
  c_synth->add_option("--out-dir", synth_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInput;
  }

  try {
    if (c_validate->parsed()) return run_validate(validate_args);
    if (c_classify->parsed()) return run_classify(classify_args);
    if (c_stats->parsed()) return run_stats(stats_args);
    if (c_matrix->parsed()) return run_matrix(matrix_args);
    if (c_cluster->parsed()) return run_cluster(cluster_args);
    if (c_render->parsed()) return run_render(render_args);
    if (c_pipeline->parsed()) return run_pipeline_cmd(pipeline_args);
    if (c_synth->parsed()) return run_synth(synth_config, synth_seed, synth_out);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const InvariantError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInput;
}
