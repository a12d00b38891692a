#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "nrgen/grammar.hpp"
#include "nrgen/numeric.hpp"

namespace nrgen {

using NtId = std::uint32_t;

enum class RuleKind { product, union_, terminal, epsilon };

/// A BCNF rule over dense nonterminal ids. `first`/`second` are the two
/// factors of a Product or the two branches of a Union.
struct CompiledRule {
  RuleKind kind = RuleKind::epsilon;
  NtId first = 0;
  NtId second = 0;
  char terminal = 0;
};

/// BCNF grammar with every terminal weight multiplied by the least common
/// denominator D. Every word of length n is scaled by D^n, so relative
/// probabilities at a fixed length are unchanged.
class ScaledGrammar {
 public:
  const WeightedGrammar& grammar() const { return grammar_; }
  const BigInt& scale() const { return scale_; }
  const std::map<char, BigInt>& int_weights() const { return int_weights_; }
  /// Throws Error(validation) for a letter that is not a terminal.
  const BigInt& int_weight(char terminal) const;

  std::size_t size() const { return rules_.size(); }
  NtId axiom() const { return axiom_; }
  const CompiledRule& rule(NtId nt) const { return rules_[nt]; }
  const std::string& name(NtId nt) const { return names_[nt]; }
  /// Throws Error(validation) for an unknown nonterminal.
  NtId id(std::string_view name) const;
  bool nullable(NtId nt) const { return nullable_[nt]; }

 private:
  friend ScaledGrammar scale_to_integer(const WeightedGrammar& g);

  WeightedGrammar grammar_;
  BigInt scale_{1};
  std::map<char, BigInt> int_weights_;
  std::vector<CompiledRule> rules_;
  std::vector<std::string> names_;
  std::map<std::string, NtId, std::less<>> ids_;
  std::vector<bool> nullable_;
  NtId axiom_ = 0;
};

/// Requires a valid BCNF grammar (run to_bcnf first); throws
/// Error(validation) otherwise.
ScaledGrammar scale_to_integer(const WeightedGrammar& g);

/// Table of language weights pi(N_m) for every nonterminal and every
/// m in [0, n_max], in the scaled integer domain.
class WeightTable {
 public:
  WeightTable(std::shared_ptr<const ScaledGrammar> grammar, int n_max);

  const ScaledGrammar& grammar() const { return *grammar_; }
  std::shared_ptr<const ScaledGrammar> grammar_ptr() const { return grammar_; }
  int n_max() const { return n_max_; }

  /// pi(N_m); zero for lengths where N derives nothing. Throws RangeError
  /// when m is outside [0, n_max].
  const BigInt& weight(NtId nt, int m) const;
  const BigInt& total(int m) const { return weight(grammar_->axiom(), m); }

  /// Product split investigation order, shared by both samplers and by
  /// rank/unrank.
  std::vector<int> split_order(int m) const { return nrgen::split_order(m); }

 private:
  std::shared_ptr<const ScaledGrammar> grammar_;
  int n_max_;
  std::vector<std::vector<BigInt>> table_;  // [nt][m]
};

std::shared_ptr<const WeightTable> build_weight_table(std::shared_ptr<const ScaledGrammar> grammar, int n);

/// Product of scaled letter weights; 1 for the empty word.
BigInt word_weight(const ScaledGrammar& g, std::string_view word);

/// word_weight(w) / pi(axiom_|w|). Membership of w is the caller's
/// responsibility. Throws RangeError when the language is empty at |w|.
Rational word_probability(const WeightTable& table, std::string_view word);

/// Convenience: validate, normalize to BCNF, scale, and tabulate up to n.
std::shared_ptr<const WeightTable> prepare(const WeightedGrammar& g, int n);

}  // namespace nrgen
