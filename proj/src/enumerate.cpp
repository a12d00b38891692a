#include <map>
#include <set>
#include <sstream>

#include "nrgen/errors.hpp"
#include "nrgen/grammar.hpp"
#include "nrgen/weights.hpp"

namespace nrgen {
namespace {

// Exhaustive derivation of fixed-length sublanguages, memoized per
// (nonterminal, length). Deliberately independent of the weight table.
class Enumerator {
 public:
  explicit Enumerator(const WeightedGrammar& g) : g_(g) {
    const auto& rules = g.rules();
    for (std::size_t i = 0; i < rules.size(); ++i) id_.emplace(rules[i].lhs, i);
    nullable_.assign(rules.size(), false);
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t i = 0; i < rules.size(); ++i) {
        if (nullable_[i]) continue;
        for (const Alternative& alt : rules[i].alternatives) {
          bool all = true;
          for (const Symbol& s : alt)
            if (s.is_terminal() || !nullable_[id_.at(s.name)]) all = false;
          if (all) {
            nullable_[i] = changed = true;
            break;
          }
        }
      }
    }
  }

  const std::vector<std::string>& words(const std::string& nt, int m) { return nonterminal(id_.at(nt), m); }

 private:
  bool nullable(const Symbol& s) const { return !s.is_terminal() && nullable_[id_.at(s.name)]; }

  const std::vector<std::string>& nonterminal(std::size_t nt, int m) {
    auto key = std::make_pair(nt, m);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    if (!in_progress_.insert(key).second)
      throw Error(ErrorClass::validation, "zero-length self-derivation reached while enumerating " +
                                              g_.rules()[nt].lhs);
    std::vector<std::string> out;
    for (const Alternative& alt : g_.rules()[nt].alternatives) append_alternative(alt, m, out);
    in_progress_.erase(key);
    return memo_.emplace(key, std::move(out)).first->second;
  }

  std::vector<std::string> symbol(const Symbol& s, int m) {
    if (s.is_terminal()) return m == 1 ? std::vector<std::string>{s.name} : std::vector<std::string>{};
    return nonterminal(id_.at(s.name), m);
  }

  void append_alternative(const Alternative& alt, int m, std::vector<std::string>& out) {
    if (alt.empty()) {
      if (m == 0) out.emplace_back();
      return;
    }
    if (alt.size() == 1) {
      auto w = symbol(alt[0], m);
      out.insert(out.end(), w.begin(), w.end());
      return;
    }
    for (int i : split_order(m)) {
      if (i == 0 && !nullable(alt[0])) continue;
      if (i == m && !nullable(alt[1])) continue;
      auto left = symbol(alt[0], i);
      if (left.empty()) continue;
      auto right = symbol(alt[1], m - i);
      for (const auto& u : left)
        for (const auto& v : right) out.push_back(u + v);
    }
  }

  const WeightedGrammar& g_;
  std::map<std::string, std::size_t> id_;
  std::vector<bool> nullable_;
  std::map<std::pair<std::size_t, int>, std::vector<std::string>> memo_;
  std::set<std::pair<std::size_t, int>> in_progress_;
};

}  // namespace

std::vector<std::string> enumerate_derivations(const WeightedGrammar& g, int n, std::optional<std::string> start) {
  if (n < 0) return {};
  Enumerator e(g);
  return e.words(start.value_or(g.axiom()), n);
}

std::vector<WeightedWord> enumerate_words(const WeightedGrammar& g, int n, std::optional<std::string> start) {
  std::vector<WeightedWord> out;
  std::set<std::string> seen;
  for (const auto& w : enumerate_derivations(g, n, std::move(start))) {
    if (!seen.insert(w).second) continue;
    Rational weight(1);
    for (char c : w) weight *= g.weight(c);
    out.push_back({w, weight});
  }
  return out;
}

std::optional<int> AmbiguityReport::first_ambiguous_length() const {
  for (const auto& v : lengths)
    if (v.ambiguous()) return v.length;
  return std::nullopt;
}

std::string AmbiguityReport::summary() const {
  std::ostringstream out;
  if (auto m = first_ambiguous_length()) {
    const auto& v = lengths[static_cast<std::size_t>(*m - lengths.front().length)];
    out << "ambiguous at length " << *m << " (" << v.parse_count << " parses for " << v.word_count << " words)";
  } else {
    out << "no ambiguity detected up to length " << (lengths.empty() ? 0 : lengths.back().length);
  }
  return out.str();
}

AmbiguityReport ambiguity_probe(const WeightedGrammar& g, int n_max) {
  AmbiguityReport report;
  if (n_max < 1) return report;
  std::map<char, Rational> unit;
  for (char t : g.terminals()) unit.emplace(t, Rational(1));
  WeightedGrammar counting(g.axiom(), g.rules(), unit);
  auto scaled = std::make_shared<const ScaledGrammar>(scale_to_integer(to_bcnf(counting)));
  auto table = build_weight_table(scaled, n_max);
  for (int m = 1; m <= n_max; ++m) {
    LengthVerdict v;
    v.length = m;
    v.parse_count = table->total(m);
    v.word_count = enumerate_words(g, m).size();
    report.lengths.push_back(std::move(v));
  }
  return report;
}

}  // namespace nrgen
