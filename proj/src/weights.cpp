#include "nrgen/weights.hpp"

#include <boost/integer/common_factor_rt.hpp>

#include "nrgen/errors.hpp"

namespace nrgen {

const BigInt& ScaledGrammar::int_weight(char terminal) const {
  auto it = int_weights_.find(terminal);
  if (it == int_weights_.end()) throw Error(ErrorClass::validation, std::string("unknown terminal ") + terminal);
  return it->second;
}

NtId ScaledGrammar::id(std::string_view name) const {
  auto it = ids_.find(name);
  if (it == ids_.end()) throw Error(ErrorClass::validation, "unknown nonterminal " + std::string(name));
  return it->second;
}

ScaledGrammar scale_to_integer(const WeightedGrammar& g) {
  if (!is_bcnf(g)) throw Error(ErrorClass::validation, "grammar is not in BCNF; run to_bcnf first");
  if (auto report = validate(g); !report.valid())
    throw Error(ErrorClass::validation, "invalid grammar: " + report.errors().front());

  ScaledGrammar s;
  s.grammar_ = g;
  BigInt lcd(1);
  for (const auto& [t, w] : g.weights()) lcd = boost::multiprecision::lcm(lcd, BigInt(boost::multiprecision::denominator(w)));
  s.scale_ = lcd;
  for (const auto& [t, w] : g.weights()) {
    Rational scaled = w * Rational(lcd);
    s.int_weights_.emplace(t, boost::multiprecision::numerator(scaled));
  }

  const auto& rules = g.rules();
  for (std::size_t i = 0; i < rules.size(); ++i) {
    s.names_.push_back(rules[i].lhs);
    s.ids_.emplace(rules[i].lhs, static_cast<NtId>(i));
  }
  for (const Rule& r : rules) {
    CompiledRule c;
    if (r.alternatives.size() == 2) {
      c.kind = RuleKind::union_;
      c.first = s.ids_.at(r.alternatives[0][0].name);
      c.second = s.ids_.at(r.alternatives[1][0].name);
    } else if (const Alternative& alt = r.alternatives.front(); alt.empty()) {
      c.kind = RuleKind::epsilon;
    } else if (alt.size() == 1) {
      c.kind = RuleKind::terminal;
      c.terminal = alt[0].letter();
    } else {
      c.kind = RuleKind::product;
      c.first = s.ids_.at(alt[0].name);
      c.second = s.ids_.at(alt[1].name);
    }
    s.rules_.push_back(c);
  }
  s.axiom_ = s.ids_.at(g.axiom());

  s.nullable_.assign(s.rules_.size(), false);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < s.rules_.size(); ++i) {
      if (s.nullable_[i]) continue;
      const CompiledRule& c = s.rules_[i];
      bool now = (c.kind == RuleKind::epsilon) ||
                 (c.kind == RuleKind::union_ && (s.nullable_[c.first] || s.nullable_[c.second])) ||
                 (c.kind == RuleKind::product && s.nullable_[c.first] && s.nullable_[c.second]);
      if (now) s.nullable_[i] = changed = true;
    }
  }
  return s;
}

namespace {

// Fills one column (fixed length m) of the table. Same-length dependencies
// (unions, and products whose other factor is ε-deriving) are resolved
// depth-first; they form a DAG because validation rules out nullable
// cycles.
class ColumnFiller {
 public:
  ColumnFiller(const ScaledGrammar& g, std::vector<std::vector<BigInt>>& table, int m)
      : g_(g), table_(table), m_(m), state_(g.size(), 0) {}

  void fill() {
    for (NtId nt = 0; nt < g_.size(); ++nt) visit(nt);
  }

 private:
  const BigInt& visit(NtId nt) {
    if (state_[nt] == 2) return table_[nt][m_];
    if (state_[nt] == 1) throw InvariantError("cyclic same-length dependency at " + g_.name(nt));
    state_[nt] = 1;
    BigInt value(0);
    const CompiledRule& r = g_.rule(nt);
    switch (r.kind) {
      case RuleKind::epsilon:
        value = m_ == 0 ? 1 : 0;
        break;
      case RuleKind::terminal:
        if (m_ == 1) value = g_.int_weight(r.terminal);
        break;
      case RuleKind::union_:
        value = visit(r.first);
        value += visit(r.second);
        break;
      case RuleKind::product:
        value = convolve(r);
        break;
    }
    table_[nt][m_] = std::move(value);
    state_[nt] = 2;
    return table_[nt][m_];
  }

  BigInt convolve(const CompiledRule& r) {
    BigInt acc(0);
    if (m_ == 0) {
      if (g_.nullable(r.first) && g_.nullable(r.second)) acc = visit(r.first) * visit(r.second);
      return acc;
    }
    // Ends of the range touch the same column only through ε-factors.
    if (g_.nullable(r.first)) acc += table_[r.first][0] * visit(r.second);
    if (g_.nullable(r.second)) acc += visit(r.first) * table_[r.second][0];
    for (int i = 1; i < m_; ++i) {
      const BigInt& a = table_[r.first][i];
      if (a.is_zero()) continue;
      const BigInt& b = table_[r.second][m_ - i];
      if (b.is_zero()) continue;
      mpz_addmul(acc.backend().data(), a.backend().data(), b.backend().data());
    }
    return acc;
  }

  const ScaledGrammar& g_;
  std::vector<std::vector<BigInt>>& table_;
  int m_;
  std::vector<int> state_;
};

}  // namespace

WeightTable::WeightTable(std::shared_ptr<const ScaledGrammar> grammar, int n_max)
    : grammar_(std::move(grammar)), n_max_(n_max) {
  if (n_max_ < 0) throw RangeError("negative length");
  table_.assign(grammar_->size(), std::vector<BigInt>(static_cast<std::size_t>(n_max_) + 1));
  for (int m = 0; m <= n_max_; ++m) ColumnFiller(*grammar_, table_, m).fill();
}

const BigInt& WeightTable::weight(NtId nt, int m) const {
  if (m < 0 || m > n_max_)
    throw RangeError("length " + std::to_string(m) + " outside the table range [0," + std::to_string(n_max_) + "]");
  return table_[nt][static_cast<std::size_t>(m)];
}

std::shared_ptr<const WeightTable> build_weight_table(std::shared_ptr<const ScaledGrammar> grammar, int n) {
  return std::make_shared<const WeightTable>(std::move(grammar), n);
}

BigInt word_weight(const ScaledGrammar& g, std::string_view word) {
  BigInt w(1);
  for (char c : word) w *= g.int_weight(c);
  return w;
}

Rational word_probability(const WeightTable& table, std::string_view word) {
  const int n = static_cast<int>(word.size());
  const BigInt& total = table.total(n);
  if (total.is_zero()) throw RangeError("empty language at length " + std::to_string(n));
  return Rational(word_weight(table.grammar(), word), total);
}

std::shared_ptr<const WeightTable> prepare(const WeightedGrammar& g, int n) {
  auto scaled = std::make_shared<const ScaledGrammar>(scale_to_integer(to_bcnf(g)));
  return build_weight_table(std::move(scaled), n);
}

}  // namespace nrgen
