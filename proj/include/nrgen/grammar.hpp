#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nrgen/numeric.hpp"

namespace nrgen {

enum class SymbolKind { terminal, nonterminal };

/// A grammar symbol. Terminal names are single characters so that mature
/// words are plain strings.
struct Symbol {
  SymbolKind kind = SymbolKind::nonterminal;
  std::string name;

  static Symbol terminal(char c) { return {SymbolKind::terminal, std::string(1, c)}; }
  static Symbol nonterminal(std::string n) { return {SymbolKind::nonterminal, std::move(n)}; }
  bool is_terminal() const { return kind == SymbolKind::terminal; }
  char letter() const { return name.front(); }
  friend bool operator==(const Symbol&, const Symbol&) = default;
};

/// One right-hand side: empty for ε, one symbol, or two symbols (product).
using Alternative = std::vector<Symbol>;

/// All alternatives of one nonterminal, in the order they were written.
/// A BCNF Union is two single-nonterminal alternatives.
struct Rule {
  std::string lhs;
  std::vector<Alternative> alternatives;
  friend bool operator==(const Rule&, const Rule&) = default;
};

/// Weighted grammar in CNF, BCNF, or the mixed shape allowed by the text
/// format (alternatives of at most two symbols). Immutable once built.
class WeightedGrammar {
 public:
  WeightedGrammar() = default;

  /// Checks the structural contract: axiom and every used nonterminal own
  /// exactly one Rule, alternatives have at most two symbols, terminal names
  /// are single characters, weights are strictly positive. Terminals used in
  /// rules but missing from `weights` get weight 1.
  /// Throws Error(validation) on violation.
  WeightedGrammar(std::string axiom, std::vector<Rule> rules, std::map<char, Rational> weights);

  const std::string& axiom() const { return axiom_; }
  const std::vector<Rule>& rules() const { return rules_; }
  const std::map<char, Rational>& weights() const { return weights_; }

  const Rule* find_rule(std::string_view lhs) const;
  std::vector<std::string> nonterminals() const;
  std::vector<char> terminals() const;
  const Rational& weight(char terminal) const;

  friend bool operator==(const WeightedGrammar& a, const WeightedGrammar& b) {
    return a.axiom_ == b.axiom_ && a.rules_ == b.rules_ && a.weights_ == b.weights_;
  }

 private:
  std::string axiom_;
  std::vector<Rule> rules_;
  std::map<char, Rational> weights_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

/// Parses the line-oriented grammar format:
///
///     # comment
///     axiom S
///     terminal a weight 1/2
///     S -> A S | a | _eps_
///
/// A symbol declared with `terminal` is a terminal; otherwise lowercase
/// letters and digits are terminals and identifiers starting with an
/// uppercase letter or `_` are nonterminals. Throws ParseError with a
/// line/column for syntax errors, unknown symbols, duplicate rules,
/// nonpositive weights, a missing axiom, or rules longer than two symbols.
WeightedGrammar parse_grammar(std::string_view text);

/// Canonical text form; parse_grammar(serialize(g)) == g.
std::string serialize(const WeightedGrammar& g);

/// True when every nonterminal has exactly one Product, Terminal or Epsilon
/// alternative, or exactly two single-nonterminal alternatives (Union).
bool is_bcnf(const WeightedGrammar& g);

struct ValidationReport {
  std::vector<std::string> unproductive;
  /// Strongly connected groups of nonterminals that can rewrite to
  /// themselves while consuming no letter.
  std::vector<std::vector<std::string>> nullable_cycles;
  std::vector<std::string> unreachable;  // warning only

  bool valid() const { return unproductive.empty() && nullable_cycles.empty(); }
  std::vector<std::string> errors() const;
  std::vector<std::string> warnings() const;
};

/// Never throws; lists every structural problem found.
ValidationReport validate(const WeightedGrammar& g);

/// CNF -> BCNF normalization. Terminals and ε inside
/// multi-alternative rules or products get dedicated `__t_<a>` / `__eps`
/// nonterminals, product alternatives of a multi-alternative rule become
/// `__p_<N>_<j>`, unions of k > 2 branches are chained through
/// `__u_<N>_<i>`, and unit nonterminals are substituted away. Output is
/// deterministic. A grammar that is already BCNF is returned unchanged.
/// Throws Error(validation) if the input fails validate().
WeightedGrammar to_bcnf(const WeightedGrammar& g);

/// Investigation order of split points for a product at length m:
/// 0, m, 1, m-1, 2, m-2, ... (each point once). Splits 0 and m only
/// contribute when the matching side derives ε.
std::vector<int> split_order(int m);

/// k-th entry of split_order(m) without materializing it (0 <= k <= m).
constexpr int split_at(int m, int k) { return (k % 2 == 0) ? k / 2 : m - k / 2; }

struct WeightedWord {
  std::string word;
  Rational weight;
  friend bool operator==(const WeightedWord&, const WeightedWord&) = default;
};

/// Brute-force oracle: every distinct word of length n derivable from
/// `start` (the axiom by default), in the derivation order used by
/// rank/unrank (first alternative first, product splits in split_order,
/// then left factor major). Weights are products of letter weights.
std::vector<WeightedWord> enumerate_words(const WeightedGrammar& g, int n,
                                          std::optional<std::string> start = std::nullopt);

/// Same traversal as enumerate_words but keeps one entry per derivation, so
/// an ambiguous grammar yields repeated words.
std::vector<std::string> enumerate_derivations(const WeightedGrammar& g, int n,
                                               std::optional<std::string> start = std::nullopt);

struct LengthVerdict {
  int length = 0;
  BigInt parse_count;
  std::size_t word_count = 0;
  bool ambiguous() const { return parse_count != word_count; }
};

struct AmbiguityReport {
  std::vector<LengthVerdict> lengths;  // m = 1..n_max
  std::optional<int> first_ambiguous_length() const;
  std::string summary() const;
};

/// Compares unit-weight parse counts from the weight table against distinct
/// enumerated words for m = 1..n_max. Agreement does not prove
/// unambiguity.
AmbiguityReport ambiguity_probe(const WeightedGrammar& g, int n_max);

}  // namespace nrgen
