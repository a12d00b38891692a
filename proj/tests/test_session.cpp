#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "nrgen/errors.hpp"
#include "nrgen/session.hpp"
#include "support/oracles.hpp"

using namespace nrgen;
using namespace nrgen::testing;

namespace {

const Engine kEngines[] = {Engine::rejection, Engine::recursive, Engine::unranking};

SessionConfig config(std::shared_ptr<const WeightTable> table, int n, std::size_t k, Engine e, std::uint64_t seed) {
  SessionConfig c;
  c.table = std::move(table);
  c.n = n;
  c.k = k;
  c.engine = e;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("engine names") {
  for (Engine e : kEngines) CHECK(parse_engine(to_string(e)) == e);
  CHECK_THROWS_AS(parse_engine("boltzmann"), Error);
}

TEST_CASE("naive rejection") {
  const auto bt = table_for(kBinaryTrees, 5);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    CHECK(naive_rejection(*bt, 5, {}, rng).attempts == 1);
  }

  Rng rng(7);
  std::uint64_t attempts = 0;
  const int runs = 4000;
  for (int i = 0; i < runs; ++i) {
    const RejectionDraw d = naive_rejection(*bt, 5, {"ababb"}, rng);
    CHECK(*d.word == "aabbb");
    attempts += d.attempts;
  }
  // Geometric with success 1/2: mean 2, variance 2.
  CHECK(std::abs(attempts / double(runs) - 2.0) <= 3 * std::sqrt(2.0 / runs));

  const auto ab = table_for(kAStarBStar, 4);
  std::map<std::string, int> counts;
  const int draws = 30000;
  for (int i = 0; i < draws; ++i) ++counts[*naive_rejection(*ab, 4, {"bbbb"}, rng).word];
  CHECK(counts.count("bbbb") == 0);
  const std::map<std::string, double> p{{"aaaa", 1.0 / 15}, {"aaab", 2.0 / 15}, {"aabb", 4.0 / 15}, {"abbb", 8.0 / 15}};
  for (const auto& [w, q] : p) {
    CAPTURE(w);
    CHECK(std::abs(counts[w] / double(draws) - q) <= three_sigma(q, draws));
  }

  const RejectionDraw capped = naive_rejection(*bt, 5, {"ababb", "aabbb"}, rng, 10);
  CHECK_FALSE(capped.word);
  CHECK(capped.attempts == 10);
}

TEST_CASE("expected attempts for uniform collection") {
  CHECK(expected_attempts_uniform(5, 1) == 1);
  CHECK(expected_attempts_uniform(5, 5) == Rational(137, 12));
  CHECK(expected_attempts_uniform(2, 2) == 3);
  CHECK_THROWS_AS(expected_attempts_uniform(2, 3), RangeError);
  CHECK_THROWS_AS(expected_attempts_uniform(2, 0), RangeError);
}

TEST_CASE("set probability") {
  const auto ab = table_for(kAStarBStar, 2);
  const std::vector<std::string> both{"a", "b"};
  CHECK(set_probability(*ab, both, 1) == 1);
  const std::vector<std::string> pair{"aa", "ab"};
  CHECK(set_probability(*ab, pair, 2) == Rational(11, 105));
  const auto bt = table_for(kBinaryTrees, 5);
  const std::vector<std::string> one{"ababb"};
  CHECK(set_probability(*bt, one, 5) == Rational(1, 2));
  const std::vector<std::string> bad{"ba"};
  CHECK_THROWS_AS(set_probability(*ab, bad, 2), RangeError);

  // The k-subsets of L_n form a probability space.
  const auto ab4 = table_for(kAStarBStar, 4);
  std::vector<std::string> words;
  for (auto& w : enumerate_words(ab4->grammar().grammar(), 4)) words.push_back(w.word);
  Rational total(0);
  for (std::size_t i = 0; i < words.size(); ++i)
    for (std::size_t j = i + 1; j < words.size(); ++j) {
      const std::vector<std::string> r{words[i], words[j]};
      total += set_probability(*ab4, r, 4);
    }
  CHECK(total == 1);
}

TEST_CASE("generate_distinct collects the whole language") {
  const auto bt = table_for(kBinaryTrees, 9);
  std::vector<std::string> oracle;
  for (auto& w : enumerate_words(bt->grammar().grammar(), 9)) oracle.push_back(w.word);
  REQUIRE(oracle.size() == 14);
  std::sort(oracle.begin(), oracle.end());
  for (Engine e : kEngines) {
    CAPTURE(to_string(e));
    const GeneratedSet set = generate_distinct(config(bt, 9, 14, e, 3));
    auto words = set.words;
    std::sort(words.begin(), words.end());
    CHECK(words == oracle);
    CHECK_FALSE(set.exhausted);
    for (const auto& p : set.probabilities) CHECK(p == Rational(1, 14));
    if (e != Engine::rejection) CHECK(set.attempts == 14);
  }
}

TEST_CASE("generate_distinct reports exhaustion with the admissible words") {
  const auto ab = table_for(kAStarBStar, 4);
  for (Engine e : kEngines) {
    CAPTURE(to_string(e));
    SessionConfig c = config(ab, 4, 6, e, 11);
    c.external_forbidden = {"aabb"};
    const GeneratedSet set = generate_distinct(c);
    CHECK(set.exhausted);
    auto words = set.words;
    std::sort(words.begin(), words.end());
    CHECK(words == std::vector<std::string>{"aaaa", "aaab", "abbb", "bbbb"});
    if (e != Engine::rejection) {
      CHECK(set.external_rejections == 1);
      CHECK(set.attempts == 5);
    }
  }
}

TEST_CASE("external forbidden words cost at most one draw each") {
  const auto bt = table_for(kBinaryTrees, 9);
  std::vector<std::string> all;
  for (auto& w : enumerate_words(bt->grammar().grammar(), 9)) all.push_back(w.word);
  const std::vector<std::string> external{all[0], all[3], all[7], all[13], "notaword", "ab"};
  for (Engine e : kEngines) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      SessionConfig c = config(bt, 9, 8, e, seed);
      c.external_forbidden = external;
      const GeneratedSet set = generate_distinct(c);
      CHECK(set.words.size() == 8);
      CHECK(std::set<std::string>(set.words.begin(), set.words.end()).size() == 8);
      for (const auto& w : set.words) CHECK(std::find(external.begin(), external.end(), w) == external.end());
      if (e != Engine::rejection) {
        CHECK(set.external_rejections <= 4);
        CHECK(set.attempts == set.words.size() + set.external_rejections);
      }
    }
  }
}

TEST_CASE("k = 1 draws from the single-word law") {
  const auto ab = table_for(kAStarBStar, 2);
  for (Engine e : kEngines) {
    std::map<std::string, int> counts;
    const int runs = 14000;
    for (int s = 0; s < runs; ++s) ++counts[generate_distinct(config(ab, 2, 1, e, static_cast<std::uint64_t>(s))).words[0]];
    const std::map<std::string, double> p{{"aa", 1.0 / 7}, {"ab", 2.0 / 7}, {"bb", 4.0 / 7}};
    for (const auto& [w, q] : p) {
      CAPTURE(to_string(e));
      CAPTURE(w);
      CHECK(std::abs(counts[w] / double(runs) - q) <= three_sigma(q, runs));
    }
  }
}

TEST_CASE("generate_distinct is reproducible per seed") {
  const auto bt = table_for(kBinaryTrees, 61);
  for (Engine e : kEngines) {
    const auto a = generate_distinct(config(bt, 61, 12, e, 2024));
    const auto b = generate_distinct(config(bt, 61, 12, e, 2024));
    CHECK(a.words == b.words);
    CHECK(a.attempts == b.attempts);
    const auto c = generate_distinct(config(bt, 61, 12, e, 2025));
    CHECK(a.words != c.words);
  }
}

TEST_CASE("generate_distinct argument checks") {
  const auto bt = table_for(kBinaryTrees, 5);
  CHECK_THROWS_AS(generate_distinct(config(bt, 4, 1, Engine::recursive, 0)), ExhaustedError);
  CHECK_THROWS_AS(generate_distinct(config(bt, 6, 1, Engine::recursive, 0)), RangeError);
  CHECK_THROWS_AS(generate_distinct(config(bt, 5, 0, Engine::recursive, 0)), Error);
  CHECK_THROWS_AS(generate_distinct(config(nullptr, 5, 1, Engine::recursive, 0)), Error);

  SessionConfig capped = config(bt, 5, 2, Engine::rejection, 0);
  capped.attempt_cap = 1;
  const auto set = generate_distinct(capped);
  CHECK(set.cap_reached);
  CHECK(set.words.size() == 1);
  CHECK(set.attempts == 1);
}

TEST_CASE("set law agrees with the exact formula for every engine") {
  const auto ab = table_for(kAStarBStar, 2);
  const int runs = 20000;
  for (Engine e : kEngines) {
    std::map<std::set<std::string>, int> counts;
    for (int s = 0; s < runs; ++s) {
      const auto set = generate_distinct(config(ab, 2, 2, e, static_cast<std::uint64_t>(s)));
      ++counts[{set.words.begin(), set.words.end()}];
    }
    for (const auto& [r, count] : counts) {
      const std::vector<std::string> words(r.begin(), r.end());
      const double p = to_double(set_probability(*ab, words, 2));
      CAPTURE(to_string(e));
      CHECK(std::abs(count / double(runs) - p) <= three_sigma(p, runs));
    }
  }
}

TEST_CASE("rejection blow-up statistics") {
  const auto bt = table_for(kBinaryTrees, 9);
  const BlowupStats one = rejection_blowup_stats(*bt, 9, 1, 50, 1);
  CHECK(one.mean_attempts[0] == 1.0);

  const BlowupStats serial = rejection_blowup_stats(*bt, 9, 14, 300, 9, 1);
  const BlowupStats parallel = rejection_blowup_stats(*bt, 9, 14, 300, 9, 4);
  CHECK(serial.mean_attempts == parallel.mean_attempts);
  for (std::size_t k = 1; k < 14; ++k) CHECK(serial.mean_attempts[k] > serial.mean_attempts[k - 1]);
  const double expected = to_double(expected_attempts_uniform(14, 14));
  CHECK(std::abs(serial.mean_attempts[13] - expected) / expected < 0.1);
}
