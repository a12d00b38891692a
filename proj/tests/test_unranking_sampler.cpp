#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "nrgen/errors.hpp"
#include "nrgen/recursive_sampler.hpp"
#include "nrgen/unranking_sampler.hpp"
#include "support/oracles.hpp"

using namespace nrgen;
using namespace nrgen::testing;

namespace {

RankInterval iv(long low, long high) { return {BigInt(low), BigInt(high)}; }

Unranked unrank_axiom(const WeightTable& t, int n, long r) { return unrank(t, t.grammar().axiom(), n, BigInt(r)); }

}  // namespace

TEST_CASE("rank examples") {
  const auto bt = table_for(kBinaryTrees, 5);
  CHECK(rank(*bt, "ababb") == iv(0, 1));
  CHECK(rank(*bt, "aabbb") == iv(1, 2));
  CHECK(rank(*bt, "b") == iv(0, 1));
  CHECK_THROWS_AS(rank(*bt, "abbab"), RangeError);
  CHECK_THROWS_AS(rank(*bt, "aaaaaaa"), RangeError);

  const auto ab = table_for(kAStarBStar, 2);
  CHECK(rank(*ab, "aa") == iv(0, 1));
  CHECK(rank(*ab, "ab") == iv(1, 3));
  CHECK(rank(*ab, "bb") == iv(3, 7));
  CHECK(to_string(rank(*ab, "ab")) == "[1,3)");
  CHECK_THROWS_AS(rank(*ab, "ba"), RangeError);
}

TEST_CASE("unrank examples") {
  const auto bt = table_for(kBinaryTrees, 5);
  CHECK(unrank_axiom(*bt, 5, 0).word == "ababb");
  CHECK(unrank_axiom(*bt, 5, 0).interval == iv(0, 1));
  CHECK(unrank_axiom(*bt, 5, 1).word == "aabbb");
  CHECK(unrank_axiom(*bt, 5, 1).interval == iv(1, 2));

  const auto ab = table_for(kAStarBStar, 2);
  const Unranked u = unrank_axiom(*ab, 2, 2);
  CHECK(u.word == "ab");
  CHECK(u.interval == iv(1, 3));
  CHECK_THROWS_AS(unrank_axiom(*ab, 2, 7), RangeError);
  CHECK_THROWS_AS(unrank_axiom(*ab, 2, -1), RangeError);
}

TEST_CASE("rank and unrank agree with the enumeration order and tile the rank space") {
  for (const auto& text : cnf_corpus()) {
    CAPTURE(text);
    const auto table = table_for(text, 10);
    const ScaledGrammar& g = table->grammar();
    for (int n = 0; n <= 10; ++n) {
      BigInt next(0);
      for (const auto& w : enumerate_words(g.grammar(), n)) {
        const RankInterval r = rank(*table, w.word);
        CHECK(r.low == next);
        CHECK(r.width() == word_weight(g, w.word));
        CHECK(unrank(*table, g.axiom(), n, r.low).word == w.word);
        CHECK(unrank(*table, g.axiom(), n, BigInt(r.high - 1)).word == w.word);
        CHECK(unrank(*table, g.axiom(), n, r.low).interval == r);
        next = r.high;
      }
      CHECK(next == table->total(n));
    }
  }
}

TEST_CASE("mod_random examples") {
  IntervalTree empty;
  CHECK(mod_random(BigInt(5), empty.root()) == 5);

  IntervalTree right;
  right.insert("aabbb", iv(1, 2));
  CHECK(mod_random(BigInt(0), right.root()) == 0);

  IntervalTree left;
  left.insert("ababb", iv(0, 1));
  CHECK(mod_random(BigInt(0), left.root()) == 1);
}

TEST_CASE("interval tree insert examples") {
  IntervalTree t;
  t.insert("bb", iv(3, 7));
  t.insert("aa", iv(0, 1));
  REQUIRE(t.root() != nullptr);
  CHECK(t.root()->interval == iv(3, 7));
  CHECK(t.root()->delta == 1);
  t.insert("ab", iv(1, 3));
  CHECK(check_interval_tree(t).empty());
  // The third insert triggers a double rotation that lifts [1,3) to the root.
  const IntervalTree::Node* n = t.root();
  while (n != nullptr && n->interval != iv(3, 7)) n = n->interval.low < 3 ? n->right.get() : n->left.get();
  REQUIRE(n != nullptr);
  CHECK(n->delta == 0);
  CHECK(t.root()->interval == iv(1, 3));
  CHECK(t.root()->delta == 1);
  CHECK(t.forbidden_mass() == 7);

  IntervalTree chain;
  chain.insert("bb", iv(3, 7));
  chain.insert("aa", iv(0, 1));
  chain.insert("ab", iv(1, 3));
  // Forbidden mass below [3,7), accumulated along the search path.
  BigInt left_of_bb(0);
  for (const IntervalTree::Node* m = chain.root(); m != nullptr;) {
    if (m->interval.high <= 3) {
      left_of_bb += m->delta + m->interval.width();
      m = m->right.get();
    } else {
      left_of_bb += m->delta;
      break;
    }
  }
  CHECK(left_of_bb == 3);

  IntervalTree twice;
  twice.insert("ab", iv(1, 3));
  CHECK_THROWS_AS(twice.insert("ab", iv(1, 3)), InvariantError);
  CHECK_THROWS_AS(twice.insert("x", iv(2, 4)), InvariantError);
  CHECK_THROWS_AS(twice.insert("x", iv(5, 5)), InvariantError);
  CHECK(twice.size() == 1);
  CHECK(check_interval_tree(twice).empty());
}

TEST_CASE("delta and balance hold under random insertions") {
  std::mt19937_64 gen(11);
  for (int round = 0; round < 200; ++round) {
    std::vector<RankInterval> slots;
    for (long low = 0; low < 400; low += 4) slots.push_back(iv(low, low + 1 + static_cast<long>(gen() % 4)));
    std::shuffle(slots.begin(), slots.end(), gen);
    IntervalTree t;
    for (std::size_t i = 0; i < 60; ++i) {
      t.insert("w", slots[i]);
      const std::string err = check_interval_tree(t);
      CHECK_MESSAGE(err.empty(), err);
    }
  }
}

TEST_CASE("mod_random is the order-preserving bijection onto the gaps") {
  std::mt19937_64 gen(5);
  for (int round = 0; round < 200; ++round) {
    const long total = 50 + static_cast<long>(gen() % 500);
    IntervalTree t;
    std::vector<char> forbidden(static_cast<std::size_t>(total), 0);
    long mass = 0;
    for (int i = 0; i < 15; ++i) {
      const long low = static_cast<long>(gen() % static_cast<std::uint64_t>(total));
      const long high = std::min(total, low + 1 + static_cast<long>(gen() % 5));
      bool clash = false;
      for (long x = low; x < high; ++x) clash |= forbidden[static_cast<std::size_t>(x)] != 0;
      if (clash) continue;
      t.insert("w", iv(low, high));
      for (long x = low; x < high; ++x) forbidden[static_cast<std::size_t>(x)] = 1;
      mass += high - low;
    }
    std::vector<long> image;
    for (long r = 0; r < total - mass; ++r) image.push_back(mod_random(BigInt(r), t.root()).convert_to<long>());
    std::vector<long> gaps;
    for (long x = 0; x < total; ++x)
      if (!forbidden[static_cast<std::size_t>(x)]) gaps.push_back(x);
    CHECK(image == gaps);
  }
}

TEST_CASE("unranking session: shift past a drawn word") {
  const auto ab = table_for(kAStarBStar, 2);
  IntervalTree t;
  t.insert("ab", rank(*ab, "ab"));
  const BigInt shifted = mod_random(BigInt(3), t.root());
  CHECK(shifted == 5);
  CHECK(unrank(*ab, ab->grammar().axiom(), 2, shifted).word == "bb");
}

TEST_CASE("unranking session: two-word language and exhaustion") {
  const auto table = table_for(kBinaryTrees, 5);
  int first_ababb = 0;
  const int sessions = 4000;
  for (int seed = 0; seed < sessions; ++seed) {
    UnrankingSession s(table, 5, static_cast<std::uint64_t>(seed));
    const std::string a = s.sample().word;
    const std::string b = s.sample().word;
    CHECK(std::set<std::string>{a, b} == std::set<std::string>{"ababb", "aabbb"});
    CHECK_THROWS_AS(s.sample(), ExhaustedError);
    first_ababb += a == "ababb";
  }
  CHECK(std::abs(first_ababb / double(sessions) - 0.5) <= three_sigma(0.5, sessions));
}

TEST_CASE("unranking session collects every word exactly once") {
  for (const auto& text : cnf_corpus()) {
    CAPTURE(text);
    const auto table = table_for(text, 7);
    for (int n = 1; n <= 7; ++n) {
      std::vector<std::string> oracle;
      for (auto& w : enumerate_words(table->grammar().grammar(), n)) oracle.push_back(w.word);
      if (oracle.empty()) continue;
      UnrankingSession s(table, n, 23);
      std::vector<std::string> drawn;
      for (std::size_t i = 0; i < oracle.size(); ++i) drawn.push_back(s.sample().word);
      CHECK_THROWS_AS(s.sample(), ExhaustedError);
      CHECK(check_interval_tree(s.tree()).empty());
      std::sort(drawn.begin(), drawn.end());
      std::sort(oracle.begin(), oracle.end());
      CHECK(drawn == oracle);
    }
  }
}

TEST_CASE("both engines give the same next-word law after a common history") {
  // After drawing `ab`, the next word of a*b* at n = 3 (weights 1,2,4,8) has
  // law proportional to the remaining weights.
  const auto table = table_for(kAStarBStar, 3);
  const std::vector<std::string> words{"aaa", "aab", "abb", "bbb"};
  const int sessions = 30000;
  std::map<std::string, int> rec, unr;
  for (int seed = 0; seed < sessions; ++seed) {
    RecursiveSession r(table, 3, static_cast<std::uint64_t>(seed));
    UnrankingSession u(table, 3, static_cast<std::uint64_t>(seed));
    // Condition on a first draw of "abb" by discarding other histories.
    if (r.sample().word == "abb") ++rec[r.sample().word];
    if (u.sample().word == "abb") ++unr[u.sample().word];
  }
  int rec_total = 0, unr_total = 0;
  for (const auto& w : words) {
    rec_total += rec[w];
    unr_total += unr[w];
  }
  CHECK(rec["abb"] == 0);
  CHECK(unr["abb"] == 0);
  const std::map<std::string, double> p{{"aaa", 1.0 / 11}, {"aab", 2.0 / 11}, {"bbb", 8.0 / 11}};
  for (const auto& [w, q] : p) {
    CAPTURE(w);
    CHECK(std::abs(rec[w] / double(rec_total) - q) <= three_sigma(q, rec_total));
    CHECK(std::abs(unr[w] / double(unr_total) - q) <= three_sigma(q, unr_total));
  }
}
