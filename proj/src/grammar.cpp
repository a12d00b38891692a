#include "nrgen/grammar.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "nrgen/errors.hpp"

namespace nrgen {
namespace {

constexpr std::string_view kEpsilonToken = "_eps_";

bool is_nonterminal_name(std::string_view s) {
  if (s.empty()) return false;
  const auto head = static_cast<unsigned char>(s.front());
  if (!std::isupper(head) && s.front() != '_') return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  });
}

}  // namespace

WeightedGrammar::WeightedGrammar(std::string axiom, std::vector<Rule> rules,
                                 std::map<char, Rational> weights)
    : axiom_(std::move(axiom)), rules_(std::move(rules)), weights_(std::move(weights)) {
  auto fail = [](const std::string& msg) { throw Error(ErrorClass::validation, msg); };
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    const Rule& r = rules_[i];
    if (!index_.emplace(r.lhs, i).second) fail("duplicate rule for nonterminal " + r.lhs);
    if (r.alternatives.empty()) fail("nonterminal " + r.lhs + " has no alternatives");
  }
  if (axiom_.empty()) fail("missing axiom");
  if (!index_.contains(axiom_)) fail("axiom " + axiom_ + " has no rule");
  for (const Rule& r : rules_) {
    for (const Alternative& alt : r.alternatives) {
      if (alt.size() > 2)
        fail("rule for " + r.lhs + " has an alternative of " + std::to_string(alt.size()) +
             " symbols; only CNF/BCNF shapes (at most two) are accepted");
      for (const Symbol& s : alt) {
        if (s.is_terminal()) {
          if (s.name.size() != 1) fail("terminal '" + s.name + "' must be a single character");
          weights_.try_emplace(s.letter(), Rational(1));
        } else if (!index_.contains(s.name)) {
          fail("unknown symbol " + s.name + " in rule for " + r.lhs);
        }
      }
    }
  }
  for (const auto& [t, w] : weights_) {
    if (w <= 0) fail(std::string("nonpositive weight for terminal ") + t);
    if (index_.contains(std::string(1, t))) fail(std::string("symbol ") + t + " is both terminal and nonterminal");
  }
}

const Rule* WeightedGrammar::find_rule(std::string_view lhs) const {
  auto it = index_.find(lhs);
  return it == index_.end() ? nullptr : &rules_[it->second];
}

std::vector<std::string> WeightedGrammar::nonterminals() const {
  std::vector<std::string> out;
  out.reserve(rules_.size());
  for (const Rule& r : rules_) out.push_back(r.lhs);
  return out;
}

std::vector<char> WeightedGrammar::terminals() const {
  std::vector<char> out;
  for (const auto& [t, w] : weights_) out.push_back(t);
  return out;
}

const Rational& WeightedGrammar::weight(char terminal) const {
  auto it = weights_.find(terminal);
  if (it == weights_.end()) throw Error(ErrorClass::validation, std::string("unknown terminal ") + terminal);
  return it->second;
}

// ---------------------------------------------------------------------------
// Text format

namespace {

struct Token {
  std::string text;
  int column;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    if (line[i] == '#') break;
    if (line[i] == '|') {
      out.push_back({"|", static_cast<int>(i) + 1});
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) && line[j] != '|' &&
           line[j] != '#')
      ++j;
    out.push_back({std::string(line.substr(i, j - i)), static_cast<int>(i) + 1});
    i = j;
  }
  return out;
}

struct RawRule {
  Token lhs;
  std::vector<std::vector<Token>> alternatives;
  int line;
};

}  // namespace

WeightedGrammar parse_grammar(std::string_view text) {
  std::optional<std::pair<std::string, Token>> axiom;
  int axiom_line = 0;
  std::map<std::string, Rational> declared;  // terminal name -> weight
  std::vector<RawRule> raw;
  std::map<std::string, int> rule_lines;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    pos = end + 1;

    auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    const Token& head = tokens.front();

    if (head.text == "axiom") {
      if (tokens.size() != 2) throw ParseError(line_no, head.column, "expected 'axiom <Nonterminal>'");
      if (axiom) throw ParseError(line_no, head.column, "axiom declared twice");
      axiom = std::make_pair(tokens[1].text, tokens[1]);
      axiom_line = line_no;
      continue;
    }
    if (head.text == "terminal") {
      if (tokens.size() != 4 || tokens[2].text != "weight")
        throw ParseError(line_no, head.column, "expected 'terminal <t> weight <value>'");
      const Token& name = tokens[1];
      if (name.text.size() != 1)
        throw ParseError(line_no, name.column, "terminal '" + name.text + "' must be a single character");
      Rational w;
      try {
        w = parse_rational(tokens[3].text);
      } catch (const std::invalid_argument& e) {
        throw ParseError(line_no, tokens[3].column, e.what());
      }
      if (w <= 0) throw ParseError(line_no, tokens[3].column, "nonpositive weight for terminal " + name.text);
      if (!declared.emplace(name.text, w).second)
        throw ParseError(line_no, name.column, "terminal " + name.text + " declared twice");
      continue;
    }

    if (tokens.size() < 3 || tokens[1].text != "->")
      throw ParseError(line_no, head.column, "expected 'axiom', 'terminal' or '<N> -> <rhs>'");
    if (!is_nonterminal_name(head.text))
      throw ParseError(line_no, head.column, "'" + head.text + "' is not a nonterminal name");
    if (auto [it, fresh] = rule_lines.emplace(head.text, line_no); !fresh)
      throw ParseError(line_no, head.column,
                       "duplicate rule for " + head.text + " (first defined on line " +
                           std::to_string(it->second) + "); put all alternatives on one line");
    RawRule rule{head, {{}}, line_no};
    for (std::size_t i = 2; i < tokens.size(); ++i) {
      if (tokens[i].text == "|") {
        if (rule.alternatives.back().empty()) throw ParseError(line_no, tokens[i].column, "empty alternative");
        rule.alternatives.emplace_back();
      } else {
        rule.alternatives.back().push_back(tokens[i]);
      }
    }
    if (rule.alternatives.back().empty())
      throw ParseError(line_no, tokens.back().column, "empty alternative");
    raw.push_back(std::move(rule));
  }

  if (!axiom) throw ParseError(line_no, 1, "missing axiom declaration");

  std::map<char, Rational> weights;
  for (const auto& [name, w] : declared) weights.emplace(name.front(), w);

  std::vector<Rule> rules;
  rules.reserve(raw.size());
  for (const RawRule& r : raw) {
    Rule rule{r.lhs.text, {}};
    for (const auto& alt_tokens : r.alternatives) {
      Alternative alt;
      if (alt_tokens.size() == 1 && alt_tokens[0].text == kEpsilonToken) {
        rule.alternatives.push_back(alt);
        continue;
      }
      if (alt_tokens.size() > 2)
        throw ParseError(r.line, alt_tokens[2].column,
                         "alternative has " + std::to_string(alt_tokens.size()) +
                             " symbols; CNF/BCNF rules have at most two");
      for (const Token& t : alt_tokens) {
        if (t.text == kEpsilonToken) throw ParseError(r.line, t.column, "_eps_ must stand alone");
        if (declared.contains(t.text)) {
          alt.push_back(Symbol::terminal(t.text.front()));
        } else if (is_nonterminal_name(t.text)) {
          if (!rule_lines.contains(t.text)) throw ParseError(r.line, t.column, "unknown symbol " + t.text);
          alt.push_back(Symbol::nonterminal(t.text));
        } else {
          const auto c = static_cast<unsigned char>(t.text.front());
          if (t.text.size() != 1 || !(std::islower(c) || std::isdigit(c)))
            throw ParseError(r.line, t.column, "unknown symbol " + t.text);
          alt.push_back(Symbol::terminal(t.text.front()));
        }
      }
      rule.alternatives.push_back(std::move(alt));
    }
    rules.push_back(std::move(rule));
  }
  if (!rule_lines.contains(axiom->first))
    throw ParseError(axiom_line, axiom->second.column, "unknown symbol " + axiom->first + " as axiom");
  for (const auto& [name, w] : declared)
    if (rule_lines.contains(name))
      throw ParseError(rule_lines[name], 1, "symbol " + name + " is both a terminal and a nonterminal");

  try {
    return WeightedGrammar(axiom->first, std::move(rules), std::move(weights));
  } catch (const Error& e) {
    throw ParseError(line_no, 1, e.what());
  }
}

std::string serialize(const WeightedGrammar& g) {
  std::ostringstream out;
  out << "axiom " << g.axiom() << '\n';
  for (const auto& [t, w] : g.weights()) out << "terminal " << t << " weight " << to_string(w) << '\n';
  for (const Rule& r : g.rules()) {
    out << r.lhs << " ->";
    for (std::size_t i = 0; i < r.alternatives.size(); ++i) {
      if (i > 0) out << " |";
      const Alternative& alt = r.alternatives[i];
      if (alt.empty()) out << ' ' << kEpsilonToken;
      for (const Symbol& s : alt) out << ' ' << s.name;
    }
    out << '\n';
  }
  return out.str();
}

bool is_bcnf(const WeightedGrammar& g) {
  for (const Rule& r : g.rules()) {
    if (r.alternatives.size() == 1) {
      const Alternative& alt = r.alternatives.front();
      const bool product = alt.size() == 2 && !alt[0].is_terminal() && !alt[1].is_terminal();
      const bool terminal = alt.size() == 1 && alt[0].is_terminal();
      if (!(product || terminal || alt.empty())) return false;
    } else if (r.alternatives.size() == 2) {
      for (const Alternative& alt : r.alternatives)
        if (alt.size() != 1 || alt[0].is_terminal()) return false;
    } else {
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Validation

std::vector<std::string> ValidationReport::errors() const {
  std::vector<std::string> out;
  for (const auto& n : unproductive) out.push_back("unproductive nonterminal " + n);
  for (const auto& cycle : nullable_cycles) {
    std::string msg = "nullable cycle:";
    for (const auto& n : cycle) msg += " " + n;
    out.push_back(msg);
  }
  return out;
}

std::vector<std::string> ValidationReport::warnings() const {
  std::vector<std::string> out;
  for (const auto& n : unreachable) out.push_back("unreachable nonterminal " + n);
  return out;
}

ValidationReport validate(const WeightedGrammar& g) {
  ValidationReport report;
  const auto& rules = g.rules();
  const std::size_t count = rules.size();
  std::map<std::string, std::size_t, std::less<>> id;
  for (std::size_t i = 0; i < count; ++i) id.emplace(rules[i].lhs, i);

  auto fixpoint = [&](auto&& accepts) {
    std::vector<bool> flag(count, false);
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t i = 0; i < count; ++i) {
        if (flag[i]) continue;
        for (const Alternative& alt : rules[i].alternatives) {
          if (std::all_of(alt.begin(), alt.end(), [&](const Symbol& s) { return accepts(s, flag); })) {
            flag[i] = changed = true;
            break;
          }
        }
      }
    }
    return flag;
  };

  const auto productive = fixpoint([&](const Symbol& s, const std::vector<bool>& flag) {
    return s.is_terminal() || flag[id.at(s.name)];
  });
  const auto nullable = fixpoint([&](const Symbol& s, const std::vector<bool>& flag) {
    return !s.is_terminal() && flag[id.at(s.name)];
  });
  for (std::size_t i = 0; i < count; ++i)
    if (!productive[i]) report.unproductive.push_back(rules[i].lhs);

  // N -> M whenever N rewrites to something containing M with every other
  // symbol nullable; a cycle here is a zero-length self-derivation.
  std::vector<std::vector<std::size_t>> edges(count);
  for (std::size_t i = 0; i < count; ++i) {
    for (const Alternative& alt : rules[i].alternatives) {
      for (std::size_t p = 0; p < alt.size(); ++p) {
        if (alt[p].is_terminal()) continue;
        bool others_nullable = true;
        for (std::size_t q = 0; q < alt.size(); ++q)
          if (q != p && (alt[q].is_terminal() || !nullable[id.at(alt[q].name)])) others_nullable = false;
        if (others_nullable) edges[i].push_back(id.at(alt[p].name));
      }
    }
  }
  // Tarjan's strongly connected components.
  std::vector<int> order(count, -1), low(count, 0);
  std::vector<bool> on_stack(count, false);
  std::vector<std::size_t> stack;
  int counter = 0;
  std::function<void(std::size_t)> strongconnect = [&](std::size_t v) {
    order[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (std::size_t w : edges[v]) {
      if (order[w] < 0) {
        strongconnect(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], order[w]);
      }
    }
    if (low[v] == order[v]) {
      std::vector<std::size_t> component;
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        component.push_back(w);
      } while (w != v);
      const bool self_loop = std::find(edges[v].begin(), edges[v].end(), v) != edges[v].end();
      if (component.size() > 1 || self_loop) {
        std::sort(component.begin(), component.end());
        std::vector<std::string> names;
        for (std::size_t c : component) names.push_back(rules[c].lhs);
        report.nullable_cycles.push_back(std::move(names));
      }
    }
  };
  for (std::size_t v = 0; v < count; ++v)
    if (order[v] < 0) strongconnect(v);

  std::vector<bool> reached(count, false);
  std::vector<std::size_t> todo{id.at(g.axiom())};
  reached[todo.front()] = true;
  while (!todo.empty()) {
    std::size_t v = todo.back();
    todo.pop_back();
    for (const Alternative& alt : rules[v].alternatives)
      for (const Symbol& s : alt) {
        if (s.is_terminal()) continue;
        std::size_t w = id.at(s.name);
        if (!reached[w]) {
          reached[w] = true;
          todo.push_back(w);
        }
      }
  }
  for (std::size_t i = 0; i < count; ++i)
    if (!reached[i]) report.unreachable.push_back(rules[i].lhs);
  return report;
}

std::vector<int> split_order(int m) {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(m) + 1);
  for (int k = 0; k <= m; ++k) out.push_back(split_at(m, k));
  return out;
}

}  // namespace nrgen
