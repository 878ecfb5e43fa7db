#include <catch_amalgamated.hpp>

#include <filesystem>
#include <random>
#include <string>

#include "collabkit/corpus.hpp"
#include "collabkit/synth.hpp"

using namespace collabkit;

namespace {

std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(FIXTURE_DIR) / "curated" / name;
}

}  // namespace

TEST_CASE("parse_papers: empty stream") {
  Corpus c = parse_papers("");
  CHECK(c.size() == 0);
}

TEST_CASE("parse_papers: minimal record, no orgs") {
  Corpus c = parse_papers(
      R"({"authors":[{"name":"Solo"}],"id":"p1","year":2012})" "\n");
  REQUIRE(c.size() == 1);
  REQUIRE(c.papers[0].authors.size() == 1);
  CHECK(c.papers[0].authors[0].orgs.empty());
  CHECK(c.papers[0].authors[0].suborgs.empty());
  CHECK(c.papers[0].year == 2012);
}

TEST_CASE("parse_papers: malformed line reports the line number") {
  std::string text = R"({"authors":[],"id":"p1","year":2012})" "\n" "not json\n";
  CHECK_THROWS_WITH(parse_papers(text, 1, "papers.jsonl"),
                    Catch::Matchers::ContainsSubstring("papers.jsonl:2"));
  CHECK_THROWS_AS(parse_papers("{\"id\":\"x\"}\n"), ValidationError);
}

TEST_CASE("parse_papers: duplicate id names both lines") {
  std::string text = R"({"authors":[],"id":"dup","year":2012})" "\n"
                     R"({"authors":[],"id":"ok","year":2012})" "\n"
                     R"({"authors":[],"id":"dup","year":2013})" "\n";
  CHECK_THROWS_WITH(parse_papers(text, 1, "p.jsonl"),
                    Catch::Matchers::ContainsSubstring("lines 1 and 3"));
}

TEST_CASE("parse_papers: skippable fields are counted, not fatal") {
  std::string text =
      R"({"authors":[{"name":"A","orgs":["x",7]},{"noname":true},{"name":"B","orgs":"oops"}],"id":"p1","year":2012})" "\n";
  Corpus c = parse_papers(text);
  REQUIRE(c.size() == 1);
  CHECK(c.papers[0].authors.size() == 2);  // the nameless entry is skipped
  CHECK(c.parse_report.skipped_authors == 1);
  CHECK(c.parse_report.skipped_strings == 1);
  CHECK(c.parse_report.coerced_fields == 1);
}

TEST_CASE("parse round trip is a fixed point and preserves raw strings") {
  // Synthetic corpus of 100 records in canonical form; byte-exact round trip.
  SynthConfig cfg;
  cfg.seed = 11;
  cfg.n_papers = 100;
  cfg.misspelling_rate = 0.2;  // noisy strings must survive byte-exact
  SynthOutput out = generate(cfg);

  Corpus c1 = parse_papers(out.papers);
  CHECK(c1.size() == 100);
  std::string reemitted = serialize_papers(c1);
  CHECK(reemitted == out.papers);
  Corpus c2 = parse_papers(reemitted);
  CHECK(same_papers(c1, c2));
}

TEST_CASE("parse result is independent of worker count") {
  SynthConfig cfg;
  cfg.seed = 3;
  cfg.n_papers = 500;
  SynthOutput out = generate(cfg);
  Corpus a = parse_papers(out.papers, 1);
  Corpus b = parse_papers(out.papers, 8);
  CHECK(same_papers(a, b));
  CHECK(a.parse_report.total() == b.parse_report.total());
}

TEST_CASE("filter_by_year: closed interval semantics") {
  std::string text;
  for (int year : {2008, 2009, 2015, 2016}) {
    text += R"({"authors":[],"id":"y)" + std::to_string(year) +
            R"(","year":)" + std::to_string(year) + "}\n";
  }
  Corpus c = parse_papers(text);
  Corpus f = filter_by_year(c, 2009, 2015);
  REQUIRE(f.size() == 2);
  CHECK(f.contains("y2009"));
  CHECK(f.contains("y2015"));
}

TEST_CASE("filter_by_year: identity on [y, y] for uniform year") {
  std::string text;
  for (int i = 0; i < 5; ++i) {
    text += R"({"authors":[],"id":"p)" + std::to_string(i) + R"(","year":2012})" "\n";
  }
  Corpus c = parse_papers(text);
  Corpus f = filter_by_year(c, 2012, 2012);
  CHECK(same_papers(c, f));
}

TEST_CASE("filter_by_year: recount oracle on 1000 papers") {
  std::mt19937_64 rng(99);
  std::string text;
  std::vector<int> years;
  for (int i = 0; i < 1000; ++i) {
    int year = 2000 + static_cast<int>(rng() % 21);
    years.push_back(year);
    text += R"({"authors":[],"id":"p)" + std::to_string(i) + R"(","year":)" +
            std::to_string(year) + "}\n";
  }
  Corpus c = parse_papers(text);
  Corpus f = filter_by_year(c, 2009, 2015);
  size_t expected = 0;
  for (int y : years) {
    if (y >= 2009 && y <= 2015) ++expected;
  }
  CHECK(f.size() == expected);
  CHECK(f.size() + (c.size() - f.size()) == c.size());
}

TEST_CASE("filter_by_year is idempotent and commutes with institution selection") {
  RuleSet rules = compile_rules(read_file(fixture("rules.json")));
  Corpus c = load_papers_file(fixture("papers.jsonl"));

  Corpus once = filter_by_year(c, 2009, 2015);
  Corpus twice = filter_by_year(once, 2009, 2015);
  CHECK(same_papers(once, twice));

  Corpus a = select_by_institution(filter_by_year(c, 2009, 2015), rules, "uw");
  Corpus b = filter_by_year(select_by_institution(c, rules, "uw"), 2009, 2015);
  CHECK(same_papers(a, b));
}

TEST_CASE("select_by_institution") {
  RuleSet rules = compile_rules(read_file(fixture("rules.json")));
  Corpus c = load_papers_file(fixture("papers.jsonl"));
  Corpus s = select_by_institution(c, rules, "uw");
  CHECK(s.contains("c001"));   // alias match
  CHECK(!s.contains("c016"));  // MIT-only paper
  CHECK(!s.contains("c014"));  // zero authors cannot match
  CHECK_THROWS_AS(select_by_institution(c, rules, "nowhere"), ValidationError);
}

TEST_CASE("select_by_institution: planted home-affiliation rate") {
  // 500 papers; every third gets a home org. The generator's ground truth is
  // the retained count.
  std::string text;
  size_t planted = 0;
  for (int i = 0; i < 500; ++i) {
    bool home = i % 3 == 0;
    if (home) ++planted;
    std::string org = home ? "University of Washington" : "Elsewhere Institute";
    text += R"({"authors":[{"name":"A","orgs":[")" + org +
            R"("]}],"id":"p)" + std::to_string(i) + R"(","year":2010})" "\n";
  }
  RuleSet rules = compile_rules(read_file(fixture("rules.json")));
  Corpus c = parse_papers(text);
  Corpus s = select_by_institution(c, rules, "uw");
  CHECK(s.size() == planted);
}
