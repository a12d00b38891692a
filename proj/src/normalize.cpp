#include <map>
#include <set>

#include "nrgen/errors.hpp"
#include "nrgen/grammar.hpp"

namespace nrgen {
namespace {

class BcnfBuilder {
 public:
  explicit BcnfBuilder(const WeightedGrammar& g) : source_(g) {
    for (const Rule& r : g.rules()) taken_.insert(r.lhs);
  }

  WeightedGrammar build() {
    for (const Rule& r : source_.rules()) rewrite(r);
    rules_.insert(rules_.end(), helpers_.begin(), helpers_.end());
    return remove_units();
  }

 private:
  std::string fresh(const std::string& base) {
    std::string name = base;
    for (int suffix = 2; taken_.contains(name); ++suffix) name = base + "_" + std::to_string(suffix);
    taken_.insert(name);
    return name;
  }

  // N_t -> t, shared by every occurrence of t.
  Symbol terminal_nt(char t) {
    auto it = terminal_nts_.find(t);
    if (it == terminal_nts_.end()) {
      std::string name = fresh(std::string("__t_") + t);
      helpers_.push_back({name, {{Symbol::terminal(t)}}});
      it = terminal_nts_.emplace(t, name).first;
    }
    return Symbol::nonterminal(it->second);
  }

  Symbol epsilon_nt() {
    if (epsilon_nt_.empty()) {
      epsilon_nt_ = fresh("__eps");
      helpers_.push_back({epsilon_nt_, {Alternative{}}});
    }
    return Symbol::nonterminal(epsilon_nt_);
  }

  Symbol wrap(const Symbol& s) { return s.is_terminal() ? terminal_nt(s.letter()) : s; }

  void rewrite(const Rule& r) {
    if (r.alternatives.size() == 1) {
      const Alternative& alt = r.alternatives.front();
      if (alt.size() == 2) {
        rules_.push_back({r.lhs, {{wrap(alt[0]), wrap(alt[1])}}});
      } else {
        // Terminal, ε, or a unit rule that remove_units() substitutes away.
        rules_.push_back(r);
      }
      return;
    }

    // One nonterminal per branch: terminals and ε get their dedicated
    // nonterminal, products get N• = __p_<N>_<j>.
    std::vector<Symbol> branches;
    for (std::size_t j = 0; j < r.alternatives.size(); ++j) {
      const Alternative& alt = r.alternatives[j];
      if (alt.empty()) {
        branches.push_back(epsilon_nt());
      } else if (alt.size() == 1) {
        branches.push_back(wrap(alt[0]));
      } else {
        std::string name = fresh("__p_" + r.lhs + "_" + std::to_string(j + 1));
        helpers_.push_back({name, {{wrap(alt[0]), wrap(alt[1])}}});
        branches.push_back(Symbol::nonterminal(name));
      }
    }

    // Chain N -> X1 | N_1, N_i -> X_{i+1} | N_{i+1}, N_{k-2} -> X_{k-1} | X_k.
    const std::size_t k = branches.size();
    std::string current = r.lhs;
    std::vector<Rule>* target = &rules_;
    for (std::size_t i = 0; i + 2 < k; ++i) {
      std::string next = fresh("__u_" + r.lhs + "_" + std::to_string(i + 1));
      target->push_back({current, {{branches[i]}, {Symbol::nonterminal(next)}}});
      current = next;
      target = &helpers_;
    }
    target->push_back({current, {{branches[k - 2]}, {branches[k - 1]}}});
  }

  WeightedGrammar remove_units() {
    std::map<std::string, std::string> unit;
    for (const Rule& r : rules_)
      if (r.alternatives.size() == 1 && r.alternatives[0].size() == 1 && !r.alternatives[0][0].is_terminal())
        unit.emplace(r.lhs, r.alternatives[0][0].name);

    // Unit chains are acyclic once validate() has passed.
    auto resolve = [&](std::string name) {
      for (auto it = unit.find(name); it != unit.end(); it = unit.find(name)) name = it->second;
      return name;
    };

    std::vector<Rule> kept;
    for (Rule& r : rules_) {
      if (unit.contains(r.lhs)) continue;
      for (Alternative& alt : r.alternatives)
        for (Symbol& s : alt)
          if (!s.is_terminal()) s.name = resolve(s.name);
      kept.push_back(std::move(r));
    }
    return WeightedGrammar(resolve(source_.axiom()), std::move(kept), source_.weights());
  }

  const WeightedGrammar& source_;
  std::set<std::string> taken_;
  std::vector<Rule> rules_;
  std::vector<Rule> helpers_;
  std::map<char, std::string> terminal_nts_;
  std::string epsilon_nt_;
};

}  // namespace

WeightedGrammar to_bcnf(const WeightedGrammar& g) {
  if (auto report = validate(g); !report.valid()) {
    std::string msg = "cannot normalize an invalid grammar:";
    for (const auto& e : report.errors()) msg += " " + e + ";";
    throw Error(ErrorClass::validation, msg);
  }
  if (is_bcnf(g)) return g;
  return BcnfBuilder(g).build();
}

}  // namespace nrgen
