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
#include <random>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "collabkit/classify.hpp"
#include "collabkit/csv.hpp"
#include "collabkit/errors.hpp"
#include "collabkit/text.hpp"

namespace collabkit {

// Seeded corpus generator configuration. Generation is single-threaded and a
// pure function of the config, so outputs are byte-identical across runs.
struct SynthConfig {
  uint64_t seed = 1;
  int n_departments = 12;
  int n_clusters = 3;
  int n_papers = 150;
  int authors_min = 1;
  int authors_max = 6;
  double p_external_institution = 0.3;
  double p_missing_org = 0.1;
  double p_missing_suborg = 0.1;
  double p_second_department = 0.2;
  double p_within_pool = 0.8;
  double p_cross_pool = 0.05;
  int works_per_pool = 45;
  int internal_citations_max = 3;
  double misspelling_rate = 0.0;
  double p_old_work = 0.0;      // work year before the default 1991 floor
  double p_unknown_year_work = 0.0;
  int year_min = 2009;
  int year_max = 2015;

  static SynthConfig from_json(const std::string& text);
  void validate() const;
};

struct SynthOutput {
  std::string papers;          // papers.jsonl
  std::string citations;      // citations.jsonl
  std::string works;          // works.jsonl
  std::string rules;          // rules.json
  std::string truth_labels;   // truth_labels.csv, same schema as labels.csv
  std::string truth_clusters; // truth_clusters.csv: department_id,cluster
};

inline SynthConfig SynthConfig::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("synth config: invalid JSON: ") + e.what());
  }
  require_input(j.is_object(), "synth config: top level must be an object");
  SynthConfig c;
  auto geti = [&](const char* k, int& out) {
    if (j.contains(k)) {
      require_input(j[k].is_number_integer(), std::string("synth config: '") + k + "' must be an integer");
      out = j[k].get<int>();
    }
  };
  auto getd = [&](const char* k, double& out) {
    if (j.contains(k)) {
      require_input(j[k].is_number(), std::string("synth config: '") + k + "' must be a number");
      out = j[k].get<double>();
    }
  };
  if (j.contains("seed")) {
    require_input(j["seed"].is_number_unsigned() || j["seed"].is_number_integer(),
                  "synth config: 'seed' must be an integer");
    c.seed = j["seed"].get<uint64_t>();
  }
  geti("n_departments", c.n_departments);
  geti("n_clusters", c.n_clusters);
  geti("n_papers", c.n_papers);
  geti("authors_min", c.authors_min);
  geti("authors_max", c.authors_max);
  geti("works_per_pool", c.works_per_pool);
  geti("internal_citations_max", c.internal_citations_max);
  geti("year_min", c.year_min);
  geti("year_max", c.year_max);
  getd("p_external_institution", c.p_external_institution);
  getd("p_missing_org", c.p_missing_org);
  getd("p_missing_suborg", c.p_missing_suborg);
  getd("p_second_department", c.p_second_department);
  getd("p_within_pool", c.p_within_pool);
  getd("p_cross_pool", c.p_cross_pool);
  getd("misspelling_rate", c.misspelling_rate);
  getd("p_old_work", c.p_old_work);
  getd("p_unknown_year_work", c.p_unknown_year_work);
  c.validate();
  return c;
}

inline void SynthConfig::validate() const {
  require_input(n_papers >= 1, "synth config: n_papers must be >= 1");
  require_input(n_departments >= 1, "synth config: n_departments must be >= 1");
  require_input(n_clusters >= 1 && n_clusters <= n_departments,
                "synth config: need 1 <= n_clusters <= n_departments");
  require_input(authors_min >= 1 && authors_min <= authors_max,
                "synth config: need 1 <= authors_min <= authors_max");
  require_input(works_per_pool >= 0, "synth config: works_per_pool must be >= 0");
  require_input(internal_citations_max >= 0,
                "synth config: internal_citations_max must be >= 0");
  require_input(year_min <= year_max, "synth config: year_min > year_max");
  for (double p : {p_external_institution, p_missing_org, p_missing_suborg,
                   p_second_department, p_within_pool, p_cross_pool,
                   misspelling_rate, p_old_work, p_unknown_year_work}) {
    require_input(p >= 0.0 && p <= 1.0, "synth config: probabilities must be in [0,1]");
  }
}

namespace detail {

// Deterministic helpers over mt19937_64. The standard distributions are
// implementation-defined, so they are avoided on purpose.
class SynthRng {
 public:
  explicit SynthRng(uint64_t seed) : eng_(seed) {}

  uint64_t next_u64() { return eng_(); }
  // Uniform in [lo, hi] inclusive.
  int uniform_int(int lo, int hi) {
    uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next_u64() % span);
  }
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 eng_;
};

inline std::string make_word(SynthRng& rng, int syllables) {
  static constexpr const char* kOnsets[] = {"b", "d", "f", "g", "k", "l", "m",
                                            "n", "p", "r", "s", "t", "v", "z"};
  static constexpr const char* kVowels[] = {"a", "e", "i", "o", "u"};
  std::string w;
  for (int s = 0; s < syllables; ++s) {
    w += kOnsets[rng.uniform_int(0, 13)];
    w += kVowels[rng.uniform_int(0, 4)];
  }
  return w;
}

// Distinct pseudo-words, pairwise Damerau-Levenshtein distance >= 4, so a
// single-character misspelling can never become ambiguous under the fuzzy
// matcher's distance-2 rule.
inline std::vector<std::string> make_distinct_words(SynthRng& rng, int count) {
  std::vector<std::string> words;
  while (static_cast<int>(words.size()) < count) {
    std::string w = make_word(rng, 4);
    bool ok = true;
    for (const auto& prev : words) {
      if (damerau_levenshtein(w, prev, 4) < 4) {
        ok = false;
        break;
      }
    }
    if (ok) words.push_back(std::move(w));
  }
  return words;
}

inline std::string capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 0x20);
  return s;
}

// One random single-character edit on a token of length >= 5, recoverable by
// the fuzzy matcher. Strings without such a token are left unchanged.
inline std::string misspell(SynthRng& rng, const std::string& s) {
  std::vector<std::pair<size_t, size_t>> spans;  // [begin, end) of long tokens
  size_t b = 0;
  for (size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == ' ') {
      if (i - b >= 5) spans.emplace_back(b, i);
      b = i + 1;
    }
  }
  if (spans.empty()) return s;
  auto [tb, te] = spans[static_cast<size_t>(rng.uniform_int(0, static_cast<int>(spans.size()) - 1))];
  std::string out = s;
  int kind = rng.uniform_int(0, 3);
  size_t pos = tb + static_cast<size_t>(rng.uniform_int(0, static_cast<int>(te - tb) - 1));
  char letter = static_cast<char>('a' + rng.uniform_int(0, 25));
  switch (kind) {
    case 0:  // substitute
      out[pos] = letter;
      break;
    case 1:  // delete
      out.erase(pos, 1);
      break;
    case 2:  // insert
      out.insert(pos, 1, letter);
      break;
    default:  // transpose adjacent
      if (pos + 1 < te) {
        std::swap(out[pos], out[pos + 1]);
      } else if (pos > tb) {
        std::swap(out[pos - 1], out[pos]);
      }
      break;
  }
  return out;
}

inline std::string zero_pad(int value, int width) {
  std::string s = std::to_string(value);
  while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
  return s;
}

}  // namespace detail

// Generates a corpus with known labels and planted co-citation structure.
// Department d belongs to cluster d % n_clusters; each paper's citation pool
// is its primary department's cluster. The first author always carries the
// home institution so institution selection keeps every paper.
inline SynthOutput generate(const SynthConfig& cfg) {
  cfg.validate();
  detail::SynthRng rng(cfg.seed);

  const std::string home_id = "home-university";
  const int n_ext = std::max(2, cfg.n_departments / 5);

  std::vector<std::string> dept_words = detail::make_distinct_words(rng, cfg.n_departments);
  std::vector<std::string> dept_ids;
  std::vector<int> dept_cluster(cfg.n_departments);
  for (int d = 0; d < cfg.n_departments; ++d) {
    dept_ids.push_back("department-of-" + dept_words[d]);
    dept_cluster[d] = d % cfg.n_clusters;
  }

  // Rules document.
  nlohmann::json dept_aliases = nlohmann::json::object();
  for (int d = 0; d < cfg.n_departments; ++d) {
    std::string w = detail::capitalize(dept_words[d]);
    dept_aliases[dept_ids[d]] = {"Department of " + w, "Dept of " + w, "Dept " + w,
                                 w + " Department"};
  }
  nlohmann::json inst_aliases = nlohmann::json::object();
  inst_aliases[home_id] = {"Home University", "Home Univ", "The Home University"};
  std::vector<std::string> ext_ids;
  for (int e = 0; e < n_ext; ++e) {
    std::string id = "external-university-" + std::to_string(e);
    ext_ids.push_back(id);
    inst_aliases[id] = {"External University " + std::to_string(e),
                        "Ext Univ " + std::to_string(e)};
  }
  nlohmann::json rules = {{"institution_aliases", inst_aliases},
                          {"department_aliases", dept_aliases},
                          {"merges", nlohmann::json::object()},
                          {"lab_to_dept", nlohmann::json::object()},
                          {"school_rollups", nlohmann::json::object()},
                          {"exclusions", nlohmann::json::array()},
                          {"fuzzy", cfg.misspelling_rate > 0.0}};

  auto dept_alias_pick = [&](int d) {
    const auto& arr = dept_aliases[dept_ids[d]];
    std::string s = arr[rng.uniform_int(0, static_cast<int>(arr.size()) - 1)].get<std::string>();
    if (cfg.misspelling_rate > 0.0 && rng.bernoulli(cfg.misspelling_rate)) {
      s = detail::misspell(rng, s);
    }
    return s;
  };
  auto inst_alias_pick = [&](const std::string& id) {
    const auto& arr = inst_aliases[id];
    std::string s = arr[rng.uniform_int(0, static_cast<int>(arr.size()) - 1)].get<std::string>();
    if (cfg.misspelling_rate > 0.0 && rng.bernoulli(cfg.misspelling_rate)) {
      s = detail::misspell(rng, s);
    }
    return s;
  };

  // Cited work pools, one per cluster.
  struct Work {
    std::string id;
    std::optional<int> year;
    bool qualifies_by_year;
  };
  std::vector<std::vector<Work>> pools(cfg.n_clusters);
  std::string works_out;
  for (int c = 0; c < cfg.n_clusters; ++c) {
    for (int wi = 0; wi < cfg.works_per_pool; ++wi) {
      Work w;
      w.id = "work-" + std::to_string(c) + "-" + detail::zero_pad(wi, 4);
      if (cfg.p_unknown_year_work > 0.0 && rng.bernoulli(cfg.p_unknown_year_work)) {
        w.year = std::nullopt;
        w.qualifies_by_year = false;
      } else if (cfg.p_old_work > 0.0 && rng.bernoulli(cfg.p_old_work)) {
        w.year = rng.uniform_int(1985, 1990);
        w.qualifies_by_year = false;
      } else {
        w.year = rng.uniform_int(1992, 2014);
        w.qualifies_by_year = true;
      }
      nlohmann::json j = {{"id", w.id},
                          {"year", w.year ? nlohmann::json(*w.year) : nlohmann::json()}};
      works_out += j.dump();
      works_out.push_back('\n');
      pools[c].push_back(std::move(w));
    }
  }

  const int id_width = static_cast<int>(std::to_string(cfg.n_papers).size());
  std::string papers_out;
  std::string citations_out;

  struct Truth {
    std::string paper_id;
    Authorship authorship;
    Institutional institutional;
    Departmental departmental;
    std::string inst_reason, dept_reason;
    std::set<std::string> departments;
  };
  std::vector<Truth> truths;
  truths.reserve(cfg.n_papers);

  for (int pi = 0; pi < cfg.n_papers; ++pi) {
    const std::string paper_id = "p" + detail::zero_pad(pi, id_width);
    const int year = rng.uniform_int(cfg.year_min, cfg.year_max);
    const int d0 = pi % cfg.n_departments;
    std::vector<int> paper_depts{d0};
    if (rng.bernoulli(cfg.p_second_department)) {
      // Second department from the same cluster keeps planted pools clean.
      std::vector<int> same_cluster;
      for (int d = 0; d < cfg.n_departments; ++d) {
        if (d != d0 && dept_cluster[d] == dept_cluster[d0]) same_cluster.push_back(d);
      }
      if (!same_cluster.empty()) {
        paper_depts.push_back(
            same_cluster[rng.uniform_int(0, static_cast<int>(same_cluster.size()) - 1)]);
      }
    }

    const int n_authors = rng.uniform_int(cfg.authors_min, cfg.authors_max);
    nlohmann::json authors = nlohmann::json::array();
    // Intended (pre-noise) facts for ground truth labels.
    std::vector<std::set<std::string>> author_insts(n_authors);
    std::vector<std::set<std::string>> author_depts(n_authors);
    for (int ai = 0; ai < n_authors; ++ai) {
      nlohmann::json author;
      author["name"] = "Author " + paper_id + "-" + std::to_string(ai);
      std::vector<std::string> orgs, suborgs;
      if (ai == 0) {
        orgs.push_back(inst_alias_pick(home_id));
        author_insts[ai].insert(home_id);
      } else if (!rng.bernoulli(cfg.p_missing_org)) {
        if (rng.bernoulli(cfg.p_external_institution)) {
          const std::string& ext = ext_ids[static_cast<size_t>(
              rng.uniform_int(0, static_cast<int>(ext_ids.size()) - 1))];
          orgs.push_back(inst_alias_pick(ext));
          author_insts[ai].insert(ext);
        } else {
          orgs.push_back(inst_alias_pick(home_id));
          author_insts[ai].insert(home_id);
        }
      }
      if (n_authors == 1 && paper_depts.size() == 2) {
        // A lone author may legitimately list both departments.
        if (!rng.bernoulli(cfg.p_missing_suborg)) {
          for (int d : paper_depts) {
            suborgs.push_back(dept_alias_pick(d));
            author_depts[ai].insert(dept_ids[d]);
          }
        }
      } else if (!rng.bernoulli(cfg.p_missing_suborg)) {
        int d = paper_depts[static_cast<size_t>(ai) % paper_depts.size()];
        suborgs.push_back(dept_alias_pick(d));
        author_depts[ai].insert(dept_ids[d]);
      }
      author["orgs"] = orgs;
      author["suborgs"] = suborgs;
      authors.push_back(author);
    }
    nlohmann::json paper = {{"id", paper_id}, {"year", year}, {"authors", authors}};
    papers_out += paper.dump();
    papers_out.push_back('\n');

    // Citations: Bernoulli per (paper, work), within-pool vs cross-pool.
    const int own_pool = dept_cluster[d0];
    for (int c = 0; c < cfg.n_clusters; ++c) {
      const double p = c == own_pool ? cfg.p_within_pool : cfg.p_cross_pool;
      if (p <= 0.0) continue;
      for (const auto& w : pools[c]) {
        if (rng.bernoulli(p)) {
          nlohmann::json e = {{"citing", paper_id}, {"cited", w.id}};
          citations_out += e.dump();
          citations_out.push_back('\n');
        }
      }
    }
    if (cfg.internal_citations_max > 0 && pi > 0) {
      int n_cite = rng.uniform_int(0, cfg.internal_citations_max);
      std::set<int> targets;
      for (int t = 0; t < n_cite; ++t) targets.insert(rng.uniform_int(0, pi - 1));
      for (int t : targets) {
        nlohmann::json e = {{"citing", paper_id},
                            {"cited", "p" + detail::zero_pad(t, id_width)}};
        citations_out += e.dump();
        citations_out.push_back('\n');
      }
    }

    // Ground truth labels from the intended facts, computed independently
    // of the classifier.
    Truth t;
    t.paper_id = paper_id;
    t.authorship = n_authors >= 2 ? Authorship::MultiAuthor : Authorship::SingleAuthor;
    std::set<std::string> inst_union;
    bool any_unresolved = false;
    for (const auto& s : author_insts) {
      inst_union.insert(s.begin(), s.end());
      if (s.empty()) any_unresolved = true;
    }
    bool home_only = inst_union.size() == 1 && *inst_union.begin() == home_id;
    if (n_authors >= 2 && inst_union.size() >= 2 && inst_union.count(home_id)) {
      t.institutional = Institutional::MultiInstitution;
    } else if (home_only && !any_unresolved) {
      t.institutional = Institutional::SingleInstitution;
    } else if (home_only && any_unresolved) {
      t.institutional = Institutional::Excluded;
      t.inst_reason = kMissingAffiliations;
    } else {
      t.institutional = Institutional::Excluded;
      t.inst_reason = kSingleAuthorMultiInst;
    }
    for (const auto& s : author_depts) t.departments.insert(s.begin(), s.end());
    if (t.departments.empty()) {
      t.departmental = Departmental::Excluded;
      t.dept_reason = kNoDeptAffiliations;
    } else {
      bool multi = false;
      for (int i = 0; i < n_authors && !multi; ++i) {
        for (int j = 0; j < n_authors && !multi; ++j) {
          if (i == j) continue;
          for (const auto& d1 : author_depts[i]) {
            for (const auto& d2 : author_depts[j]) {
              if (d1 != d2) {
                multi = true;
                break;
              }
            }
            if (multi) break;
          }
        }
      }
      t.departmental = multi ? Departmental::MultiDept : Departmental::SingleDept;
    }
    truths.push_back(std::move(t));
  }

  SynthOutput out;
  out.papers = std::move(papers_out);
  out.citations = std::move(citations_out);
  out.works = std::move(works_out);
  out.rules = rules.dump(2) + "\n";

  CsvWriter tl({"paper_id", "authorship", "institutional", "departmental",
                "inst_reason", "dept_reason", "departments"});
  std::sort(truths.begin(), truths.end(),
            [](const Truth& a, const Truth& b) { return a.paper_id < b.paper_id; });
  for (const auto& t : truths) {
    std::string depts;
    for (const auto& d : t.departments) {
      if (!depts.empty()) depts.push_back(';');
      depts += d;
    }
    tl.row({t.paper_id, to_string(t.authorship), to_string(t.institutional),
            to_string(t.departmental), t.inst_reason, t.dept_reason, depts});
  }
  out.truth_labels = tl.str();

  CsvWriter tc({"department_id", "cluster"});
  std::vector<std::pair<std::string, int>> dc;
  for (int d = 0; d < cfg.n_departments; ++d) dc.emplace_back(dept_ids[d], dept_cluster[d]);
  std::sort(dc.begin(), dc.end());
  for (const auto& [id, c] : dc) tc.row({id, std::to_string(c)});
  out.truth_clusters = tc.str();
  return out;
}

}  // namespace collabkit
