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

#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "collabkit/corpus.hpp"
#include "collabkit/parallel.hpp"
#include "collabkit/rules.hpp"
#include "collabkit/text.hpp"

namespace collabkit {

enum class Authorship { MultiAuthor, SingleAuthor, Excluded };
enum class Institutional { MultiInstitution, SingleInstitution, Excluded };
enum class Departmental { MultiDept, SingleDept, Excluded };

// Exclusion reason codes.
inline constexpr const char* kNoAuthors = "no-authors";
inline constexpr const char* kMissingAffiliations = "missing-affiliations";
inline constexpr const char* kSingleAuthorMultiInst = "single-author-multi-inst";
inline constexpr const char* kNoDeptAffiliations = "no-dept-affiliations";

// Per-paper verdicts for the three collaboration dimensions. The departmental
// label never looks at institutions and vice versa. Author distinctness is by
// canonicalized full name within the paper; nothing crosses papers.
struct CollabLabels {
  std::string paper_id;
  int year = 0;

  Authorship authorship = Authorship::Excluded;
  Institutional institutional = Institutional::Excluded;
  Departmental departmental = Departmental::Excluded;
  std::string inst_reason;  // set iff institutional == Excluded
  std::string dept_reason;  // set iff departmental == Excluded

  // One entry per distinct author (entries with equal canonicalized names are
  // merged), in order of first appearance.
  std::vector<std::set<std::string>> institutions_per_author;
  std::vector<std::set<std::string>> departments_per_author;

  std::set<std::string> departments() const {
    std::set<std::string> u;
    for (const auto& d : departments_per_author) u.insert(d.begin(), d.end());
    return u;
  }
  std::set<std::string> institutions() const {
    std::set<std::string> u;
    for (const auto& i : institutions_per_author) u.insert(i.begin(), i.end());
    return u;
  }
};

inline const char* to_string(Authorship a) {
  switch (a) {
    case Authorship::MultiAuthor: return "multi-author";
    case Authorship::SingleAuthor: return "single-author";
    default: return "excluded";
  }
}
inline const char* to_string(Institutional i) {
  switch (i) {
    case Institutional::MultiInstitution: return "multi-institution";
    case Institutional::SingleInstitution: return "single-institution";
    default: return "excluded";
  }
}
inline const char* to_string(Departmental d) {
  switch (d) {
    case Departmental::MultiDept: return "multi-dept";
    case Departmental::SingleDept: return "single-dept";
    default: return "excluded";
  }
}

// Memoizes resolutions across a corpus pass; raw affiliation strings repeat
// heavily in real metadata.
class ResolutionCache {
 public:
  explicit ResolutionCache(const RuleSet& rules) : rules_(rules) {}

  const Resolution& institution(const std::string& raw) {
    auto it = inst_.find(raw);
    if (it == inst_.end()) it = inst_.emplace(raw, resolve_institution(raw, rules_)).first;
    return it->second;
  }
  const Resolution& department(const std::string& raw) {
    auto it = dept_.find(raw);
    if (it == dept_.end()) it = dept_.emplace(raw, resolve_department(raw, rules_)).first;
    return it->second;
  }

 private:
  const RuleSet& rules_;
  std::unordered_map<std::string, Resolution> inst_;
  std::unordered_map<std::string, Resolution> dept_;
};

inline CollabLabels classify_paper(const PaperRecord& paper, const RuleSet& rules,
                                   const std::string& home_id,
                                   ResolutionCache* cache = nullptr) {
  CollabLabels out;
  out.paper_id = paper.id;
  out.year = paper.year;

  if (paper.authors.empty()) {
    out.authorship = Authorship::Excluded;
    out.institutional = Institutional::Excluded;
    out.departmental = Departmental::Excluded;
    out.inst_reason = kNoAuthors;
    out.dept_reason = kNoAuthors;
    return out;
  }

  ResolutionCache local(rules);
  ResolutionCache& rc = cache ? *cache : local;

  // Merge author entries by canonicalized name.
  std::unordered_map<std::string, size_t> unit_of_name;
  std::vector<std::set<std::string>> unit_insts;
  std::vector<std::set<std::string>> unit_depts;
  std::vector<bool> unit_has_org_metadata;
  for (const auto& a : paper.authors) {
    std::string key = canonicalize_text(a.name);
    auto [it, inserted] = unit_of_name.emplace(key, unit_insts.size());
    if (inserted) {
      unit_insts.emplace_back();
      unit_depts.emplace_back();
      unit_has_org_metadata.push_back(false);
    }
    size_t u = it->second;
    for (const auto& org : a.orgs) {
      const Resolution& r = rc.institution(org);
      if (r.outcome == Outcome::Resolved) unit_insts[u].insert(r.id);
    }
    for (const auto& sub : a.suborgs) {
      const Resolution& r = rc.department(sub);
      if (r.outcome == Outcome::Resolved) unit_depts[u].insert(r.id);
    }
  }
  const size_t n_authors = unit_insts.size();
  out.institutions_per_author = unit_insts;
  out.departments_per_author = unit_depts;

  out.authorship = n_authors >= 2 ? Authorship::MultiAuthor : Authorship::SingleAuthor;

  // Institutional label. I is the union of resolved institutions; authors
  // with no resolved institution are tolerated for the multi-institution case
  // but poison the single-institution case.
  std::set<std::string> inst_union = out.institutions();
  bool any_author_unresolved = false;
  for (const auto& s : unit_insts) {
    if (s.empty()) any_author_unresolved = true;
  }
  bool home_only = inst_union.size() == 1 && *inst_union.begin() == home_id;
  if (n_authors >= 2 && inst_union.size() >= 2 && inst_union.count(home_id)) {
    out.institutional = Institutional::MultiInstitution;
  } else if (!any_author_unresolved && home_only) {
    out.institutional = Institutional::SingleInstitution;
  } else if (home_only && any_author_unresolved) {
    out.institutional = Institutional::Excluded;
    out.inst_reason = kMissingAffiliations;
  } else {
    out.institutional = Institutional::Excluded;
    out.inst_reason = kSingleAuthorMultiInst;
  }

  // Departmental label: two distinct authors must represent two distinct
  // departments. A single author listing several departments is not a
  // collaboration.
  std::set<std::string> dept_union = out.departments();
  if (dept_union.empty()) {
    out.departmental = Departmental::Excluded;
    out.dept_reason = kNoDeptAffiliations;
  } else {
    bool multi = false;
    for (size_t i = 0; i < n_authors && !multi; ++i) {
      for (size_t j = 0; j < n_authors && !multi; ++j) {
        if (i == j) continue;
        for (const auto& d1 : unit_depts[i]) {
          if (multi) break;
          for (const auto& d2 : unit_depts[j]) {
            if (d1 != d2) {
              multi = true;
              break;
            }
          }
        }
      }
    }
    out.departmental = multi ? Departmental::MultiDept : Departmental::SingleDept;
  }
  return out;
}

// Labels every paper. Output is parallel to corpus.papers; CSV emission sorts
// by paper id.
inline std::vector<CollabLabels> classify_corpus(const Corpus& corpus,
                                                 const RuleSet& rules,
                                                 const std::string& home_id,
                                                 int workers = 1) {
  std::vector<std::vector<CollabLabels>> chunks =
      map_chunked<std::vector<CollabLabels>>(
          corpus.size(), workers, [&](size_t begin, size_t end) {
            std::vector<CollabLabels> part;
            part.reserve(end - begin);
            ResolutionCache cache(rules);
            for (size_t i = begin; i < end; ++i) {
              part.push_back(classify_paper(corpus.papers[i], rules, home_id, &cache));
            }
            return part;
          });
  std::vector<CollabLabels> out;
  out.reserve(corpus.size());
  for (auto& c : chunks) {
    for (auto& l : c) out.push_back(std::move(l));
  }
  return out;
}

}  // namespace collabkit
