#pragma once

// Brute-force references shared by the unit and acceptance tests. Nothing
// here reuses the weight table for the quantity it checks.

#include <cmath>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "nrgen/grammar.hpp"
#include "nrgen/recursive_sampler.hpp"
#include "nrgen/unranking_sampler.hpp"
#include "nrgen/weights.hpp"

namespace nrgen::testing {

// Prefix notation of binary trees, a = internal node, b = leaf.
inline constexpr std::string_view kBinaryTrees =
    "axiom S\n"
    "terminal a weight 1\n"
    "terminal b weight 1\n"
    "S -> T | b\n"
    "T -> a U\n"
    "U -> S S\n";

// a*b* with b of weight 2.
inline constexpr std::string_view kAStarBStar =
    "axiom S\n"
    "terminal a weight 1\n"
    "terminal b weight 2\n"
    "S -> A S | T\n"
    "T -> B T | _eps_\n"
    "A -> a\n"
    "B -> b\n";

// Two-letter words: a product of two a | b factors, unit weights.
inline constexpr std::string_view kTwoLetters =
    "axiom N\n"
    "N -> L R\n"
    "L -> a | b\n"
    "R -> a | b\n";

// Ambiguous: aaa has four parses.
inline constexpr std::string_view kAmbiguous =
    "axiom S\n"
    "S -> A S | S A | a\n"
    "A -> a\n";

/// a*b* with weight `alpha` on b (the rejection blow-up family).
std::string a_star_b_star(int alpha);

/// Ten CNF grammars (ε only on an axiom that never occurs on a right-hand
/// side) used by the normalization tests.
std::vector<std::string> cnf_corpus();

std::shared_ptr<const WeightTable> table_for(std::string_view text, int n);

/// Every mature word derivable from `word`, by concatenating the
/// enumerated languages of its items.
std::vector<std::string> language_of(const WeightTable& table, const ImmatureWord& word);

/// pi(L(word) ∩ F) by enumeration.
BigInt forbidden_mass(const WeightTable& table, const ImmatureWord& word, const std::set<std::string>& forbidden);

/// Parse walk of `word` from axiom_|word|, found by testing each candidate
/// rewrite against the enumerated language of its result.
ParseWalk walk_of(const WeightTable& table, const std::string& word);

/// Calls `visit(word, node)` for every trie node, rebuilding each node's
/// immature word by replaying edge keys from `start`.
void for_each_trie_node(const WeightTable& table, const ImmatureWord& start, const ForbiddenTrie::Node& root,
                        const std::function<void(const ImmatureWord&, const ForbiddenTrie::Node&)>& visit);

/// Empty string when every node's delta is its left-subtree width sum, the
/// tree is a BST on intervals, AVL-balanced with correct heights, and the
/// widths sum to forbidden_mass(). Otherwise a description of the first
/// violation.
std::string check_interval_tree(const IntervalTree& tree);

/// Half-width of a 3-sigma binomial band for `samples` draws at probability p.
inline double three_sigma(double p, double samples) { return 3.0 * std::sqrt(p * (1.0 - p) / samples); }

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

}  // namespace nrgen::testing
