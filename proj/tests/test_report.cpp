#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "collabkit/pipeline.hpp"
#include "collabkit/report.hpp"

using namespace collabkit;

namespace {

std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(FIXTURE_DIR) / "curated" / name;
}

struct Loaded {
  RuleSet rules;
  Corpus corpus;
  std::vector<CollabLabels> labels;
  CitationGraph graph;
};

Loaded load_curated() {
  Loaded l;
  l.rules = compile_rules(read_file(fixture("rules.json")));
  l.corpus = load_papers_file(fixture("papers.jsonl"));
  l.labels = classify_corpus(l.corpus, l.rules, "uw");
  l.graph = build_graph(l.corpus, read_file(fixture("citations.jsonl")),
                        read_file(fixture("works.jsonl")));
  return l;
}

std::vector<std::vector<std::string>> body(const std::string& csv) {
  auto rows = parse_csv(csv);
  rows.erase(rows.begin());
  return rows;
}

}  // namespace

TEST_CASE("labels.csv schema and ordering") {
  Loaded l = load_curated();
  std::string csv = emit_labels_csv(l.labels);
  auto rows = parse_csv(csv);
  REQUIRE(!rows.empty());
  CHECK(rows[0] == std::vector<std::string>{"paper_id", "authorship", "institutional",
                                            "departmental", "inst_reason",
                                            "dept_reason", "departments"});
  // Sorted by paper id.
  for (size_t i = 2; i < rows.size(); ++i) {
    CHECK(rows[i - 1][0] < rows[i][0]);
  }
  // Departments are ;-joined sorted ids.
  for (const auto& r : body(csv)) {
    if (r[0] == "c001") CHECK(r[6] == "department-of-biology;department-of-chemistry");
    if (r[0] == "c014") {
      CHECK(r[1] == "excluded");
      CHECK(r[4] == "no-authors");
    }
  }
}

TEST_CASE("counts.csv partitions the corpus and marks subset percentages") {
  Loaded l = load_curated();
  std::string csv = emit_group_count_table(l.labels);
  auto rows = body(csv);

  auto count_of = [&](const std::string& dim, const std::string& group) -> uint64_t {
    for (const auto& r : rows) {
      if (r[0] == dim && r[1] == group) return std::stoull(r[2]);
    }
    FAIL("missing row " + dim + "/" + group);
    return 0;
  };
  uint64_t all = count_of("all", "all-papers");
  CHECK(all == l.corpus.size());
  // Exact counts, derived by hand from the curated fixture (unfiltered).
  CHECK(count_of("authorship", "multi-author") == 9);
  CHECK(count_of("authorship", "single-author") == 6);
  CHECK(count_of("authorship", "excluded") == 1);
  CHECK(count_of("institutional", "multi-institution") == 2);
  CHECK(count_of("institutional", "single-institution") == 9);
  CHECK(count_of("institutional", "without-inst-affiliations") == 5);
  CHECK(count_of("departmental", "multi-dept") == 3);
  CHECK(count_of("departmental", "single-dept") == 9);
  CHECK(count_of("departmental", "without-dept-affiliations") == 4);
  CHECK(count_of("authorship", "multi-author") + count_of("authorship", "single-author") +
            count_of("authorship", "excluded") ==
        all);
  CHECK(count_of("institutional", "multi-institution") +
            count_of("institutional", "single-institution") +
            count_of("institutional", "without-inst-affiliations") ==
        all);
  CHECK(count_of("institutional", "with-inst-affiliations") ==
        count_of("institutional", "multi-institution") +
            count_of("institutional", "single-institution"));
  CHECK(count_of("departmental", "multi-dept") + count_of("departmental", "single-dept") +
            count_of("departmental", "without-dept-affiliations") ==
        all);

  // Percentages recompute from counts within the two-decimal contract.
  for (const auto& r : rows) {
    if (r[3].empty()) continue;
    double base = r[4] == "subset"
                      ? static_cast<double>(
                            count_of(r[0], r[0] == "institutional"
                                               ? "with-inst-affiliations"
                                               : "with-dept-affiliations"))
                      : static_cast<double>(all);
    double want = 100.0 * static_cast<double>(std::stoull(r[2])) / base;
    CHECK(std::abs(std::stod(r[3]) - want) <= 0.05);
  }
}

TEST_CASE("counts.csv on an empty corpus is header-only") {
  std::string csv = emit_group_count_table({});
  auto rows = parse_csv(csv);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0][0] == "dimension");
}

TEST_CASE("timeseries.csv: per-year percentages sum to 100") {
  Loaded l = load_curated();
  std::string csv = emit_timeseries(l.corpus, l.labels);
  std::map<std::pair<std::string, std::string>, double> sums;  // (year, dim)
  for (const auto& r : body(csv)) {
    sums[{r[0], r[1]}] += std::stod(r[4]);
  }
  for (const auto& [key, total] : sums) {
    CHECK(total == Catch::Approx(100.0).margin(0.01));
  }
  // A single-year corpus emits exactly one year.
  Corpus single = parse_papers(R"({"authors":[],"id":"x","year":2010})" "\n");
  auto labels = classify_corpus(single, l.rules, "uw");
  auto rows = body(emit_timeseries(single, labels));
  for (const auto& r : rows) CHECK(r[0] == "2010");
}

TEST_CASE("stats.csv carries ALL and per-year rows") {
  Loaded l = load_curated();
  std::vector<GroupStats> rows;
  for (auto& r : group_stats(l.corpus, l.labels, l.graph, Dimension::Authorship, false))
    rows.push_back(r);
  for (auto& r : group_stats(l.corpus, l.labels, l.graph, Dimension::Authorship, true))
    rows.push_back(r);
  std::string csv = emit_stats_csv(rows);
  bool saw_all = false, saw_year = false;
  for (const auto& r : body(csv)) {
    if (r[2] == "ALL") saw_all = true;
    if (r[2] == "2010") saw_year = true;
    if (r[3] == "0") {
      CHECK(r[4].empty());
      CHECK(r[5].empty());
      CHECK(r[6].empty());
    }
  }
  CHECK(saw_all);
  CHECK(saw_year);
}

TEST_CASE("every emitted csv round-trips byte-identically") {
  Loaded l = load_curated();
  IncidenceMatrix ci = citation_incidence(l.corpus, l.labels, l.graph, l.rules, 2, 1991);
  CoMatrix cc = co_matrix(ci);
  std::vector<GroupStats> gs = group_stats(l.corpus, l.labels, l.graph,
                                           Dimension::Departmental, false);
  for (const std::string& csv :
       {emit_labels_csv(l.labels), emit_group_count_table(l.labels),
        emit_timeseries(l.corpus, l.labels), emit_stats_csv(gs),
        emit_violin_csv(l.corpus, l.labels, l.graph), emit_comatrix_csv(cc, false),
        emit_comatrix_csv(cc, true)}) {
    CHECK(reemit_csv(parse_csv(csv)) == csv);
  }
}

TEST_CASE("heatmap svg: cells, order, zero diagonal, determinism") {
  CoMatrix cm;
  cm.ids = {"dept-a", "dept-b"};
  cm.counts = {{3, 1}, {1, 2}};
  detail::normalize_counts(cm);
  Linkage lk = ward_linkage(cm.normalized, cm.ids);
  Dendrogram dg = build_dendrogram(lk);

  HeatmapSpec spec;
  spec.matrix = cm;
  spec.annotations = {{"dept-a", 4}, {"dept-b", 1}};
  std::string svg = render_heatmap(spec, dg);

  // 4 cells, 2 row labels.
  CHECK(std::count(svg.begin(), svg.end(), '\n') > 4);
  size_t cells = 0, pos = 0;
  while ((pos = svg.find("class=\"cell\"", pos)) != std::string::npos) {
    ++cells;
    ++pos;
  }
  CHECK(cells == 4);

  // Diagonal cells carry the zero color (white).
  pos = 0;
  int white_diag = 0;
  while ((pos = svg.find("<rect class=\"cell\"", pos)) != std::string::npos) {
    size_t end = svg.find("/>", pos);
    std::string cell = svg.substr(pos, end - pos);
    bool diag = cell.find("data-i=\"0\" data-j=\"0\"") != std::string::npos ||
                cell.find("data-i=\"1\" data-j=\"1\"") != std::string::npos;
    if (diag) {
      CHECK(cell.find("fill=\"rgb(255,255,255)\"") != std::string::npos);
      ++white_diag;
    }
    pos = end;
  }
  CHECK(white_diag == 2);

  // Row label order equals leaf order, annotations attached.
  size_t a = svg.find("dept-a (4)");
  size_t b = svg.find("dept-b (1)");
  REQUIRE(a != std::string::npos);
  REQUIRE(b != std::string::npos);
  std::vector<std::string> order = dg.leaves_in_order;
  CHECK((order[0] == "dept-a" ? a < b : b < a));

  // Byte-identical across repeated runs.
  CHECK(render_heatmap(spec, dg) == svg);
}

TEST_CASE("heatmap svg: id mismatch is an error that lists the difference") {
  CoMatrix cm;
  cm.ids = {"dept-a", "dept-b"};
  cm.counts = {{1, 0}, {0, 1}};
  detail::normalize_counts(cm);
  Linkage lk = ward_linkage({{0.0}, {1.0}, {2.0}}, {"dept-a", "dept-b", "dept-c"});
  Dendrogram dg = build_dendrogram(lk);
  HeatmapSpec spec;
  spec.matrix = cm;
  CHECK_THROWS_WITH(render_heatmap(spec, dg),
                    Catch::Matchers::ContainsSubstring("dept-c"));
}

TEST_CASE("linkage.csv and leaf_order.txt formats") {
  Linkage lk = ward_linkage({{0.0}, {1.0}, {5.0}}, {"x", "y", "z"});
  auto rows = parse_csv(emit_linkage_csv(lk));
  REQUIRE(rows.size() == 3);  // header + 2 merges
  CHECK(rows[0] == std::vector<std::string>{"step", "a", "b", "distance", "size"});
  CHECK(rows[1][0] == "0");
  CHECK(emit_leaf_order({"b", "a"}) == "b\na\n");
}
