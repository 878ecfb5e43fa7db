#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "collabkit/pipeline.hpp"
#include "collabkit/synth.hpp"

using namespace collabkit;
namespace fs = std::filesystem;

namespace {

fs::path fixtures() { return fs::path(FIXTURE_DIR); }

int run_cli(const std::string& args) {
  std::string cmd = std::string(CLI_PATH) + " " + args + " >/dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

PipelineOptions curated_options(const fs::path& out_dir) {
  PipelineOptions opt;
  opt.papers = fixtures() / "curated" / "papers.jsonl";
  opt.citations = fixtures() / "curated" / "citations.jsonl";
  opt.works = fixtures() / "curated" / "works.jsonl";
  opt.rules = fixtures() / "curated" / "rules.json";
  opt.out_dir = out_dir;
  opt.home_id = "uw";
  opt.min_year = 2009;
  opt.max_year = 2015;
  opt.min_out_citations = 1;
  return opt;
}

}  // namespace

TEST_CASE("bundled demo ruleset compiles to its documented department count") {
  RuleSet rs = compile_rules(read_file(fixtures() / "demo" / "rules.json"));
  CHECK(rs.department_ids.size() == 12);  // matches synth_config.json
  CHECK(rs.fuzzy);                        // demo carries misspelling noise
}

TEST_CASE("run_pipeline produces the full output set on the curated corpus") {
  fs::path out = fs::temp_directory_path() / "collabkit_test_pipeline";
  fs::remove_all(out);
  PipelineResult res = run_pipeline(curated_options(out));
  CHECK(res.papers == 12);
  CHECK(res.departments == 9);
  for (const char* name :
       {"labels.csv", "counts.csv", "timeseries.csv", "stats.csv", "violin.csv",
        "cocitation_counts.csv", "cocitation_norm.csv", "coauthorship_counts.csv",
        "coauthorship_norm.csv", "linkage.csv", "leaf_order.txt", "heatmap.svg",
        "manifest.json"}) {
    CHECK(fs::exists(out / name));
  }
  // leaf_order.txt and linkage.csv are consistent: n leaves, n-1 merges.
  std::string leaf_text = read_file(out / "leaf_order.txt");
  size_t leaves = 0;
  for (auto line : split_lines(leaf_text)) {
    if (!line.empty()) ++leaves;
  }
  auto linkage_rows = parse_csv(read_file(out / "linkage.csv"));
  CHECK(linkage_rows.size() == leaves);  // header + (leaves - 1) merges
  fs::remove_all(out);
}

TEST_CASE("heatmap annotations count multi-department papers per department") {
  SynthConfig cfg;
  cfg.seed = 21;
  cfg.n_papers = 120;
  cfg.p_second_department = 0.5;
  cfg.p_missing_suborg = 0.0;
  SynthOutput out = generate(cfg);
  RuleSet rules = compile_rules(out.rules);
  Corpus corpus = parse_papers(out.papers);
  auto labels = classify_corpus(corpus, rules, "home-university");

  std::set<std::string> kept(rules.department_ids.begin(), rules.department_ids.end());
  auto ann = heatmap_annotations(labels, kept);
  for (const auto& [dept, count] : ann) {
    uint64_t want = 0;
    for (const auto& l : labels) {
      if (l.departmental == Departmental::MultiDept && l.departments().count(dept)) {
        ++want;
      }
    }
    CHECK(count == want);
  }
}

TEST_CASE("cli exit codes: 0 on success, 2 on input errors") {
  fs::path out = fs::temp_directory_path() / "collabkit_test_cli";
  fs::remove_all(out);
  std::string curated = (fixtures() / "curated").string();
  std::string good = "classify --papers " + curated + "/papers.jsonl --rules " +
                     curated + "/rules.json --home uw --out-dir " + out.string();
  CHECK(run_cli(good) == 0);

  std::string bad_home = "classify --papers " + curated + "/papers.jsonl --rules " +
                         curated + "/rules.json --home nowhere --out-dir " + out.string();
  CHECK(run_cli(bad_home) == 2);

  std::string missing_file = "classify --papers /nonexistent.jsonl --rules " +
                             curated + "/rules.json --home uw --out-dir " + out.string();
  CHECK(run_cli(missing_file) == 2);

  CHECK(run_cli("no-such-subcommand") == 2);
  fs::remove_all(out);
}
