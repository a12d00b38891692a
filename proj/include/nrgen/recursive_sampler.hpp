#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nrgen/random.hpp"
#include "nrgen/weights.hpp"

namespace nrgen {

/// One symbol occurrence of an immature word with its prescribed length.
/// Terminal items always have length 1.
struct ImmatureItem {
  bool is_terminal = false;
  char letter = 0;
  NtId nt = 0;
  int length = 0;

  static ImmatureItem terminal(char c) { return {true, c, 0, 1}; }
  static ImmatureItem nonterminal(NtId id, int m) { return {false, 0, id, m}; }
  friend bool operator==(const ImmatureItem&, const ImmatureItem&) = default;
};

using ImmatureWord = std::vector<ImmatureItem>;

/// Leftmost-first derivation policy: index of the leftmost nonterminal
/// item, or nullopt when the word is mature.
std::optional<std::size_t> apply_policy(const ImmatureWord& word);

/// pi(w) of an immature word: product of its items' language weights.
BigInt immature_weight(const WeightTable& table, const ImmatureWord& word);

/// "a S1 S3" style rendering.
std::string to_string(const ScaledGrammar& g, const ImmatureWord& word);

/// One random choice along a parse walk: the Union branch (0 or 1) or the
/// Product split point taken when rewriting `nt` at prescribed `length`.
/// Terminal and ε rewrites involve no choice and are not recorded.
struct Derivation {
  NtId nt = 0;
  int length = 0;
  std::uint32_t choice = 0;

  /// Ordered key of the trie edge: rule id, then branch or split point.
  std::uint64_t key() const { return (std::uint64_t{nt} << 32) | choice; }
  friend bool operator==(const Derivation&, const Derivation&) = default;
};

/// The choice points of a leftmost parse walk, from the start word to the
/// mature word.
using ParseWalk = std::vector<Derivation>;

/// Rewrites the leftmost nonterminal of `word` by applying forced Terminal
/// and ε rewrites first, then `step`. Throws std::invalid_argument when the
/// step does not match the leftmost choice point or has zero weight.
ImmatureWord derive(const WeightTable& table, ImmatureWord word, const Derivation& step);

/// Applies every forced Terminal/ε rewrite at the leftmost position until a
/// choice point or a mature word is reached.
ImmatureWord settle(const WeightTable& table, ImmatureWord word);

/// Weighted tree of forbidden walks. Each node stands for the immature word
/// reached after a sequence of choices and carries the exact forbidden mass
/// F(w) = pi(L(w) ∩ F). Children are ordered by Derivation::key().
class ForbiddenTrie {
 public:
  struct Node {
    BigInt fmass;
    std::map<std::uint64_t, std::unique_ptr<Node>> children;
    bool word_end = false;

    const Node* child(const Derivation& d) const;
  };

  ForbiddenTrie() : root_(std::make_unique<Node>()) {}

  const Node& root() const { return *root_; }
  std::size_t words() const { return words_; }
  std::size_t node_count() const { return nodes_; }

  /// Adds the walk of a mature word: missing suffix nodes are created on
  /// the way down, then `weight` is added to every node on the path.
  /// Re-inserting a word already present throws InvariantError.
  void insert(const ParseWalk& walk, const BigInt& weight);

 private:
  std::unique_ptr<Node> root_;
  std::size_t words_ = 0;
  std::size_t nodes_ = 1;
};

/// F of the child reached through `step`, or 0 when absent (or node null).
BigInt trie_child_mass(const ForbiddenTrie::Node* node, const Derivation& step);

/// A drawn mature word with its walk and scaled weight.
struct Draw {
  std::string word;
  ParseWalk walk;
  BigInt weight;
};

/// One admissible rewrite at the leftmost choice point with its corrected
/// mass: the child's weight minus its forbidden mass.
struct Branch {
  Derivation step;
  BigInt admissible_mass;
};

/// Every candidate rewrite of the leftmost choice point of `word` (after
/// forced rewrites), in investigation order, with corrected masses. Used to
/// inspect the exact branching law; step_by_step follows the same order.
std::vector<Branch> branch_masses(const WeightTable& table, const ImmatureWord& word, const BigInt& mu,
                                  const ForbiddenTrie::Node* node);

/// Step-by-step generation from `word` with mu = pi(word), avoiding the
/// words recorded under `node` (null when none extend `word`). Returns a
/// word of L(word) \ F drawn with probability proportional to its weight.
/// Throws ExhaustedError when mu <= F(word).
Draw step_by_step(const WeightTable& table, ImmatureWord word, BigInt mu, const ForbiddenTrie::Node* node, Rng& rng);

/// Non-redundant sampler session over L_n: each call draws from the
/// weighted distribution on L_n minus everything drawn before.
class RecursiveSession {
 public:
  RecursiveSession(std::shared_ptr<const WeightTable> table, int n, std::uint64_t seed);

  /// Draws one new word and records its walk. Throws ExhaustedError once
  /// every word of L_n has been drawn.
  Draw sample();

  const ForbiddenTrie& trie() const { return trie_; }
  BigInt remaining_mass() const { return table_->total(n_) - trie_.root().fmass; }
  const WeightTable& table() const { return *table_; }
  int length() const { return n_; }

 private:
  std::shared_ptr<const WeightTable> table_;
  int n_;
  Rng rng_;
  ForbiddenTrie trie_;
};

}  // namespace nrgen
