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
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "collabkit/errors.hpp"
#include "collabkit/text.hpp"

namespace collabkit {

enum class Outcome { Resolved, Unmatched, Excluded };

struct Resolution {
  Outcome outcome = Outcome::Unmatched;
  std::string id;                   // canonical id when Resolved
  std::vector<std::string> trace;   // applied rules, empty iff Unmatched
};

namespace detail {

struct FuzzyPattern {
  std::vector<std::string> tokens;  // canonicalized pattern tokens
  std::string pattern;
  std::string id;
};

}  // namespace detail

// A compiled disambiguation ruleset. Patterns are stored canonicalized; all
// structural invariants (acyclic merges, unambiguous patterns, canonical
// rollup targets) are checked at compile time.
struct RuleSet {
  std::unordered_map<std::string, std::string> institution_patterns;
  std::unordered_map<std::string, std::string> department_patterns;
  std::unordered_map<std::string, std::string> lab_patterns;
  std::unordered_map<std::string, std::string> merges;
  std::unordered_map<std::string, std::string> school_rollups;
  std::unordered_set<std::string> exclusions;
  bool fuzzy = false;

  std::vector<std::string> institution_ids;  // sorted
  std::vector<std::string> department_ids;   // sorted, post-merge/rollup space

  std::vector<detail::FuzzyPattern> department_fuzzy;   // sorted by pattern
  std::vector<detail::FuzzyPattern> institution_fuzzy;  // sorted by pattern

  bool has_institution(const std::string& id) const {
    return std::binary_search(institution_ids.begin(), institution_ids.end(), id);
  }
};

namespace detail {

inline std::string chase_merges(const RuleSet& rs, std::string id,
                                std::vector<std::string>* trace) {
  while (true) {
    auto it = rs.merges.find(id);
    if (it == rs.merges.end()) return id;
    if (trace) trace->push_back("merge: " + id + " -> " + it->second);
    id = it->second;
  }
}

inline std::string apply_rollup(const RuleSet& rs, std::string id,
                                std::vector<std::string>* trace) {
  auto it = rs.school_rollups.find(id);
  if (it == rs.school_rollups.end()) return id;
  if (trace) trace->push_back("rollup: " + id + " -> " + it->second);
  return it->second;
}

inline void claim_pattern(std::unordered_map<std::string, std::string>& table,
                          const std::string& pattern, const std::string& id,
                          const char* space) {
  auto [it, inserted] = table.emplace(pattern, id);
  if (!inserted && it->second != id) {
    throw ValidationError(std::string("rules: pattern '") + pattern + "' in " +
                          space + " is claimed by both '" + it->second +
                          "' and '" + id + "'");
  }
}

// Token-wise fuzzy match: same token count; each token pair either equal or,
// for tokens of length >= 5, within Damerau-Levenshtein distance 2. Matches
// only when exactly one canonical id qualifies; ties yield no match.
inline bool fuzzy_lookup(const std::string& canonical,
                         const std::vector<FuzzyPattern>& patterns,
                         std::string* matched_id,
                         std::string* matched_pattern) {
  std::vector<std::string_view> toks = split_tokens(canonical);
  if (toks.empty()) return false;
  std::vector<size_t> tok_len;
  tok_len.reserve(toks.size());
  for (auto t : toks) tok_len.push_back(decode_utf8(t).size());

  std::string found_id, found_pattern;
  bool found = false;
  for (const FuzzyPattern& fp : patterns) {
    if (fp.tokens.size() != toks.size()) continue;
    if (found && fp.id == found_id) continue;  // one qualifying pattern is enough
    bool ok = true;
    for (size_t i = 0; i < toks.size() && ok; ++i) {
      if (toks[i] == fp.tokens[i]) continue;
      size_t plen = decode_utf8(fp.tokens[i]).size();
      if (std::min(tok_len[i], plen) < 5) {
        ok = false;
        break;
      }
      if (damerau_levenshtein(toks[i], fp.tokens[i], 2) > 2) ok = false;
    }
    if (!ok) continue;
    if (found && fp.id != found_id) return false;  // ambiguous across ids
    if (!found) {
      found = true;
      found_id = fp.id;
      found_pattern = fp.pattern;
    }
  }
  if (!found) return false;
  *matched_id = found_id;
  *matched_pattern = found_pattern;
  return true;
}

}  // namespace detail

// Compiles the rules document (see README for the schema). Alias patterns are
// canonicalized; every mentioned canonical id also matches its own
// canonicalized form, so resolving an id's display form yields that id.
inline RuleSet compile_rules(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("rules: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("rules: top level must be an object");

  auto get_map = [&](const char* key) -> nlohmann::json {
    if (!doc.contains(key)) return nlohmann::json::object();
    const auto& v = doc.at(key);
    if (!v.is_object())
      throw ValidationError(std::string("rules: '") + key + "' must be an object");
    return v;
  };

  RuleSet rs;
  if (doc.contains("fuzzy")) {
    if (!doc["fuzzy"].is_boolean())
      throw ValidationError("rules: 'fuzzy' must be a boolean");
    rs.fuzzy = doc["fuzzy"].get<bool>();
  }

  // Canonical ids flow into CSV headers and label columns; delimiters in
  // them cannot round-trip.
  auto check_id = [](const std::string& id) {
    if (id.empty() || id.find_first_of(",;\"\r\n") != std::string::npos) {
      throw ValidationError(
          "rules: canonical id is empty or contains a CSV delimiter: '" + id + "'");
    }
  };

  // Ordered views keep compilation deterministic regardless of JSON library
  // internals (nlohmann objects are already key-sorted, but do not rely on it).
  auto sorted_items = [](const nlohmann::json& obj) {
    std::map<std::string, nlohmann::json> m;
    for (auto it = obj.begin(); it != obj.end(); ++it) m[it.key()] = it.value();
    return m;
  };

  std::set<std::string> mentioned_depts;
  std::set<std::string> mentioned_insts;

  for (const auto& [id, patterns] : sorted_items(get_map("institution_aliases"))) {
    if (!patterns.is_array())
      throw ValidationError("rules: institution_aliases['" + id + "'] must be an array");
    check_id(id);
    mentioned_insts.insert(id);
    for (const auto& p : patterns) {
      if (!p.is_string())
        throw ValidationError("rules: institution alias patterns must be strings");
      std::string c = canonicalize_text(p.get<std::string>());
      if (c.empty()) continue;
      detail::claim_pattern(rs.institution_patterns, c, id, "institution_aliases");
    }
  }

  for (const auto& [id, patterns] : sorted_items(get_map("department_aliases"))) {
    if (!patterns.is_array())
      throw ValidationError("rules: department_aliases['" + id + "'] must be an array");
    check_id(id);
    mentioned_depts.insert(id);
    for (const auto& p : patterns) {
      if (!p.is_string())
        throw ValidationError("rules: department alias patterns must be strings");
      std::string c = canonicalize_text(p.get<std::string>());
      if (c.empty()) continue;
      detail::claim_pattern(rs.department_patterns, c, id, "department_aliases");
    }
  }

  for (const auto& [old_id, target] : sorted_items(get_map("merges"))) {
    if (!target.is_string())
      throw ValidationError("rules: merges['" + old_id + "'] must be a string");
    check_id(old_id);
    check_id(target.get<std::string>());
    rs.merges[old_id] = target.get<std::string>();
    mentioned_depts.insert(old_id);
    mentioned_depts.insert(target.get<std::string>());
  }

  for (const auto& [pattern, dept] : sorted_items(get_map("lab_to_dept"))) {
    if (!dept.is_string())
      throw ValidationError("rules: lab_to_dept['" + pattern + "'] must be a string");
    std::string c = canonicalize_text(pattern);
    if (c.empty()) continue;
    if (rs.department_patterns.count(c)) {
      throw ValidationError("rules: pattern '" + c +
                            "' appears in both department_aliases (-> '" +
                            rs.department_patterns.at(c) + "') and lab_to_dept (-> '" +
                            dept.get<std::string>() + "')");
    }
    detail::claim_pattern(rs.lab_patterns, c, dept.get<std::string>(), "lab_to_dept");
    mentioned_depts.insert(dept.get<std::string>());
  }

  for (const auto& [dept, school] : sorted_items(get_map("school_rollups"))) {
    if (!school.is_string())
      throw ValidationError("rules: school_rollups['" + dept + "'] must be a string");
    rs.school_rollups[dept] = school.get<std::string>();
    mentioned_depts.insert(dept);
    mentioned_depts.insert(school.get<std::string>());
  }

  if (doc.contains("exclusions")) {
    if (!doc["exclusions"].is_array())
      throw ValidationError("rules: 'exclusions' must be an array");
    for (const auto& p : doc["exclusions"]) {
      if (!p.is_string())
        throw ValidationError("rules: exclusion patterns must be strings");
      std::string c = canonicalize_text(p.get<std::string>());
      if (!c.empty()) rs.exclusions.insert(c);
    }
  }

  // Merge chains must be acyclic.
  for (const auto& [start, _] : rs.merges) {
    std::vector<std::string> path{start};
    std::unordered_set<std::string> seen{start};
    std::string cur = start;
    while (true) {
      auto it = rs.merges.find(cur);
      if (it == rs.merges.end()) break;
      cur = it->second;
      if (!seen.insert(cur).second) {
        std::string msg = "rules: merge cycle: ";
        for (const auto& s : path) msg += s + " -> ";
        msg += cur;
        throw ValidationError(msg);
      }
      path.push_back(cur);
    }
  }

  // Rollup targets must be canonical: not merged away and not rolled further.
  for (const auto& [dept, school] : rs.school_rollups) {
    if (rs.merges.count(school)) {
      throw ValidationError("rules: rollup target '" + school + "' (from '" + dept +
                            "') is itself merged away");
    }
    if (rs.school_rollups.count(school)) {
      throw ValidationError("rules: rollup target '" + school + "' (from '" + dept +
                            "') is itself rolled up; chained rollups are not allowed");
    }
  }

  // Every mentioned id resolves from its own canonicalized form. A collision
  // with an explicit pattern for the same id is harmless; a collision across
  // ids is a genuine ambiguity.
  for (const auto& id : mentioned_depts) {
    std::string c = canonicalize_text(id);
    if (c.empty()) continue;
    auto lab = rs.lab_patterns.find(c);
    if (lab != rs.lab_patterns.end() && lab->second != id) {
      throw ValidationError("rules: canonical form of id '" + id +
                            "' collides with lab pattern for '" + lab->second + "'");
    }
    detail::claim_pattern(rs.department_patterns, c, id, "department ids");
  }
  for (const auto& id : mentioned_insts) {
    std::string c = canonicalize_text(id);
    if (c.empty()) continue;
    detail::claim_pattern(rs.institution_patterns, c, id, "institution ids");
  }

  // The canonical department space: image of merge-chase + rollup over every
  // mentioned id. Matrix shapes downstream derive from this set.
  std::set<std::string> canon;
  for (const auto& id : mentioned_depts) {
    canon.insert(detail::apply_rollup(rs, detail::chase_merges(rs, id, nullptr), nullptr));
  }
  rs.department_ids.assign(canon.begin(), canon.end());
  rs.institution_ids.assign(mentioned_insts.begin(), mentioned_insts.end());

  auto build_fuzzy = [](const std::unordered_map<std::string, std::string>& table,
                        std::vector<detail::FuzzyPattern>& out) {
    for (const auto& [pattern, id] : table) {
      detail::FuzzyPattern fp;
      for (auto t : split_tokens(pattern)) fp.tokens.emplace_back(t);
      fp.pattern = pattern;
      fp.id = id;
      out.push_back(std::move(fp));
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.pattern < b.pattern; });
  };
  build_fuzzy(rs.department_patterns, rs.department_fuzzy);
  build_fuzzy(rs.lab_patterns, rs.department_fuzzy);
  std::sort(rs.department_fuzzy.begin(), rs.department_fuzzy.end(),
            [](const auto& a, const auto& b) { return a.pattern < b.pattern; });
  build_fuzzy(rs.institution_patterns, rs.institution_fuzzy);
  return rs;
}

// Precedence: exact alias > lab mapping > fuzzy > exclusion > Unmatched.
// Resolved ids are then chased through merges and rolled up at most once.
inline Resolution resolve_department(std::string_view raw, const RuleSet& rs) {
  std::string c = canonicalize_text(raw);
  Resolution r;
  std::string id;
  if (auto it = rs.department_patterns.find(c); it != rs.department_patterns.end()) {
    id = it->second;
    r.trace.push_back("alias: '" + c + "' -> " + id);
  } else if (auto lab = rs.lab_patterns.find(c); lab != rs.lab_patterns.end()) {
    id = lab->second;
    r.trace.push_back("lab: '" + c + "' -> " + id);
  } else {
    std::string fid, fpat;
    if (rs.fuzzy && detail::fuzzy_lookup(c, rs.department_fuzzy, &fid, &fpat)) {
      id = fid;
      r.trace.push_back("fuzzy: '" + c + "' ~ '" + fpat + "' -> " + id);
    } else if (rs.exclusions.count(c)) {
      r.outcome = Outcome::Excluded;
      r.trace.push_back("excluded: '" + c + "'");
      return r;
    } else {
      return r;  // Unmatched, empty trace
    }
  }
  id = detail::chase_merges(rs, id, &r.trace);
  id = detail::apply_rollup(rs, id, &r.trace);
  r.outcome = Outcome::Resolved;
  r.id = id;
  return r;
}

inline Resolution resolve_institution(std::string_view raw, const RuleSet& rs) {
  std::string c = canonicalize_text(raw);
  Resolution r;
  if (auto it = rs.institution_patterns.find(c); it != rs.institution_patterns.end()) {
    r.outcome = Outcome::Resolved;
    r.id = it->second;
    r.trace.push_back("alias: '" + c + "' -> " + r.id);
    return r;
  }
  std::string fid, fpat;
  if (rs.fuzzy && detail::fuzzy_lookup(c, rs.institution_fuzzy, &fid, &fpat)) {
    r.outcome = Outcome::Resolved;
    r.id = fid;
    r.trace.push_back("fuzzy: '" + c + "' ~ '" + fpat + "' -> " + fid);
    return r;
  }
  return r;
}

}  // namespace collabkit
