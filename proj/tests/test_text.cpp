#include <catch_amalgamated.hpp>

#include <random>
#include <string>

#include "collabkit/text.hpp"

using namespace collabkit;

TEST_CASE("canonicalize_text collapses punctuation and whitespace") {
  CHECK(canonicalize_text("  Dept.  of  BIOL ") == "dept of biol");
  CHECK(canonicalize_text("Dept-Bio") == "dept bio");
  CHECK(canonicalize_text("") == "");
  CHECK(canonicalize_text("...") == "");
  CHECK(canonicalize_text("a") == "a");
  CHECK(canonicalize_text("Computer Science & Engineering") ==
        "computer science engineering");
}

TEST_CASE("canonicalize_text folds case but preserves diacritics") {
  CHECK(canonicalize_text("Département") == "département");
  CHECK(canonicalize_text("DÉPARTEMENT") == "département");
  CHECK(canonicalize_text("ZOOLOGY") == "zoology");
}

TEST_CASE("canonicalize_text is idempotent on random strings") {
  // Mixed printable ASCII, punctuation, multi-byte sequences, and raw bytes.
  std::mt19937_64 rng(7);
  auto random_string = [&]() {
    std::string s;
    size_t len = rng() % 40;
    for (size_t i = 0; i < len; ++i) {
      switch (rng() % 4) {
        case 0: s.push_back(static_cast<char>('a' + rng() % 26)); break;
        case 1: s.push_back(static_cast<char>(' ' + rng() % 95)); break;
        case 2: {
          const char* samples[] = {"é", "Ж", "Λ", "ß", "—", " ", "中", " "};
          s += samples[rng() % 8];
          break;
        }
        default: s.push_back(static_cast<char>(rng() % 256)); break;
      }
    }
    return s;
  };
  for (int i = 0; i < 10000; ++i) {
    std::string s = random_string();
    std::string once = canonicalize_text(s);
    CHECK(canonicalize_text(once) == once);
  }
}

TEST_CASE("split_tokens") {
  auto toks = split_tokens("dept of biol");
  REQUIRE(toks.size() == 3);
  CHECK(toks[0] == "dept");
  CHECK(toks[2] == "biol");
  CHECK(split_tokens("").empty());
}

TEST_CASE("damerau_levenshtein distances") {
  CHECK(damerau_levenshtein("", "") == 0);
  CHECK(damerau_levenshtein("abc", "abc") == 0);
  CHECK(damerau_levenshtein("abc", "") == 3);
  CHECK(damerau_levenshtein("ca", "ac") == 1);        // transposition
  CHECK(damerau_levenshtein("universty", "university") == 1);
  CHECK(damerau_levenshtein("washngton", "washington") == 1);
  CHECK(damerau_levenshtein("kitten", "sitting") == 3);
  CHECK(damerau_levenshtein("abcdef", "badcfe") == 3);  // three swaps
}

TEST_CASE("damerau_levenshtein cap") {
  CHECK(damerau_levenshtein("aaaaaaaa", "bbbbbbbb", 2) == 3);
  CHECK(damerau_levenshtein("abcdefgh", "abcdefgh", 2) == 0);
  CHECK(damerau_levenshtein("abcdefghijk", "a", 2) == 3);  // length gap short-circuit
}
