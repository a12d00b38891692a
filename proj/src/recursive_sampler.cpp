#include "nrgen/recursive_sampler.hpp"

#include <cassert>
#include <sstream>
#include <stdexcept>

#include "nrgen/errors.hpp"

namespace nrgen {

std::optional<std::size_t> apply_policy(const ImmatureWord& word) {
  for (std::size_t i = 0; i < word.size(); ++i)
    if (!word[i].is_terminal) return i;
  return std::nullopt;
}

BigInt immature_weight(const WeightTable& table, const ImmatureWord& word) {
  BigInt w(1);
  for (const ImmatureItem& item : word) {
    if (item.is_terminal)
      w *= table.grammar().int_weight(item.letter);
    else
      w *= table.weight(item.nt, item.length);
  }
  return w;
}

std::string to_string(const ScaledGrammar& g, const ImmatureWord& word) {
  std::ostringstream out;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (i > 0) out << ' ';
    if (word[i].is_terminal)
      out << word[i].letter;
    else
      out << g.name(word[i].nt) << word[i].length;
  }
  return out.str();
}

namespace {

// Local (context-free) weight of each candidate rewrite of N_m, in
// investigation order. `visit` returns true to stop.
template <typename Visit>
void for_each_candidate(const WeightTable& table, NtId nt, int m, Visit&& visit) {
  const CompiledRule& r = table.grammar().rule(nt);
  if (r.kind == RuleKind::union_) {
    const NtId branches[2] = {r.first, r.second};
    for (std::uint32_t b = 0; b < 2; ++b) {
      const BigInt& w = table.weight(branches[b], m);
      if (w.is_zero()) continue;
      if (visit(Derivation{nt, m, b}, w)) return;
    }
    return;
  }
  assert(r.kind == RuleKind::product);
  BigInt local;
  for (int k = 0; k <= m; ++k) {
    const int i = split_at(m, k);
    const BigInt& a = table.weight(r.first, i);
    if (a.is_zero()) continue;
    const BigInt& b = table.weight(r.second, m - i);
    if (b.is_zero()) continue;
    local = a * b;
    if (visit(Derivation{nt, m, static_cast<std::uint32_t>(i)}, local)) return;
  }
}

[[maybe_unused]] bool is_choice_point(const ScaledGrammar& g, NtId nt) {
  const RuleKind k = g.rule(nt).kind;
  return k == RuleKind::union_ || k == RuleKind::product;
}

// Rewrites the leftmost nonterminal by a recorded choice. `pending` is the
// unexpanded suffix stored right-to-left (back() is leftmost).
void expand(const ScaledGrammar& g, std::vector<ImmatureItem>& pending, const Derivation& d) {
  const CompiledRule& r = g.rule(d.nt);
  pending.pop_back();
  if (r.kind == RuleKind::union_) {
    pending.push_back(ImmatureItem::nonterminal(d.choice == 0 ? r.first : r.second, d.length));
  } else {
    const int i = static_cast<int>(d.choice);
    pending.push_back(ImmatureItem::nonterminal(r.second, d.length - i));
    pending.push_back(ImmatureItem::nonterminal(r.first, i));
  }
}

// Emits forced letters and drops ε items until the leftmost pending item is
// a choice point.
void advance(const ScaledGrammar& g, std::vector<ImmatureItem>& pending, std::string& out) {
  while (!pending.empty()) {
    const ImmatureItem& top = pending.back();
    if (top.is_terminal) {
      out.push_back(top.letter);
    } else {
      const CompiledRule& r = g.rule(top.nt);
      if (r.kind == RuleKind::terminal)
        out.push_back(r.terminal);
      else if (r.kind != RuleKind::epsilon)
        return;
    }
    pending.pop_back();
  }
}

ImmatureWord current_word(const std::string& out, const std::vector<ImmatureItem>& pending) {
  ImmatureWord w;
  for (char c : out) w.push_back(ImmatureItem::terminal(c));
  w.insert(w.end(), pending.rbegin(), pending.rend());
  return w;
}

std::vector<ImmatureItem> to_pending(const ImmatureWord& word, std::string& prefix) {
  std::size_t i = 0;
  while (i < word.size() && word[i].is_terminal) prefix.push_back(word[i++].letter);
  return std::vector<ImmatureItem>(word.rbegin(), word.rend() - static_cast<std::ptrdiff_t>(i));
}

}  // namespace

ImmatureWord settle(const WeightTable& table, ImmatureWord word) {
  std::string prefix;
  auto pending = to_pending(word, prefix);
  advance(table.grammar(), pending, prefix);
  return current_word(prefix, pending);
}

ImmatureWord derive(const WeightTable& table, ImmatureWord word, const Derivation& step) {
  std::string prefix;
  auto pending = to_pending(word, prefix);
  advance(table.grammar(), pending, prefix);
  if (pending.empty()) throw std::invalid_argument("derive: word is already mature");
  const ImmatureItem& top = pending.back();
  if (top.nt != step.nt || top.length != step.length)
    throw std::invalid_argument("derive: step does not rewrite the leftmost choice point");
  bool found = false;
  for_each_candidate(table, step.nt, step.length, [&](const Derivation& d, const BigInt&) {
    found = d.choice == step.choice;
    return found;
  });
  if (!found) throw std::invalid_argument("derive: step has zero weight");
  expand(table.grammar(), pending, step);
  return current_word(prefix, pending);
}

const ForbiddenTrie::Node* ForbiddenTrie::Node::child(const Derivation& d) const {
  auto it = children.find(d.key());
  return it == children.end() ? nullptr : it->second.get();
}

void ForbiddenTrie::insert(const ParseWalk& walk, const BigInt& weight) {
  std::vector<Node*> path{root_.get()};
  for (const Derivation& d : walk) {
    auto& slot = path.back()->children[d.key()];
    if (!slot) {
      slot = std::make_unique<Node>();
      ++nodes_;
    }
    path.push_back(slot.get());
  }
  if (path.back()->word_end) throw InvariantError("forbidden trie: word inserted twice");
  path.back()->word_end = true;
  for (Node* node : path) node->fmass += weight;
  ++words_;
}

BigInt trie_child_mass(const ForbiddenTrie::Node* node, const Derivation& step) {
  if (node == nullptr) return BigInt(0);
  const ForbiddenTrie::Node* c = node->child(step);
  return c == nullptr ? BigInt(0) : c->fmass;
}

std::vector<Branch> branch_masses(const WeightTable& table, const ImmatureWord& word, const BigInt& mu,
                                  const ForbiddenTrie::Node* node) {
  std::string prefix;
  auto pending = to_pending(word, prefix);
  advance(table.grammar(), pending, prefix);
  std::vector<Branch> out;
  if (pending.empty()) return out;
  const ImmatureItem& top = pending.back();
  const BigInt context = mu / table.weight(top.nt, top.length);
  for_each_candidate(table, top.nt, top.length, [&](const Derivation& d, const BigInt& local) {
    BigInt mass = context * local;
    mass -= trie_child_mass(node, d);
    out.push_back({d, std::move(mass)});
    return false;
  });
  return out;
}

Draw step_by_step(const WeightTable& table, ImmatureWord word, BigInt mu, const ForbiddenTrie::Node* node, Rng& rng) {
  const ScaledGrammar& g = table.grammar();
  if (node != nullptr && node->fmass.is_zero()) node = nullptr;
  if (mu <= (node ? node->fmass : BigInt(0))) throw ExhaustedError("every word of the language is forbidden");

  Draw draw;
  std::string& out = draw.word;
  auto pending = to_pending(word, out);
  BigInt r;
  BigInt context;

  // Constrained phase: forbidden words still extend the current word, so
  // every branch mass is corrected by the trie.
  for (advance(g, pending, out); node != nullptr && !pending.empty(); advance(g, pending, out)) {
    assert(mu == immature_weight(table, current_word(out, pending)));
    const ImmatureItem top = pending.back();
    assert(is_choice_point(g, top.nt));
    const BigInt& local_total = table.weight(top.nt, top.length);
    context = mu / local_total;
    r = rng.below(BigInt(mu - node->fmass));

    std::optional<Derivation> chosen;
    const ForbiddenTrie::Node* next = nullptr;
    BigInt chosen_mass;
    for_each_candidate(table, top.nt, top.length, [&](const Derivation& d, const BigInt& local) {
      BigInt mass = context * local;
      const ForbiddenTrie::Node* c = node->child(d);
      if (c != nullptr) {
        r -= mass - c->fmass;
      } else {
        r -= mass;
      }
      if (r < 0) {
        chosen = d;
        next = c;
        chosen_mass = std::move(mass);
        return true;
      }
      return false;
    });
    if (!chosen) throw InvariantError("step_by_step: branch masses do not cover mu - F");
    draw.walk.push_back(*chosen);
    expand(g, pending, *chosen);
    mu = std::move(chosen_mass);
    node = (next != nullptr && !next->fmass.is_zero()) ? next : nullptr;
  }

  // Unconstrained phase: no forbidden word below, so choices are the plain
  // recursive method on local weights (the common factor mu / pi(N_m)
  // cancels from every branch).
  for (; !pending.empty(); advance(g, pending, out)) {
    const ImmatureItem top = pending.back();
    r = rng.below(table.weight(top.nt, top.length));
    std::optional<Derivation> chosen;
    for_each_candidate(table, top.nt, top.length, [&](const Derivation& d, const BigInt& local) {
      r -= local;
      if (r < 0) {
        chosen = d;
        return true;
      }
      return false;
    });
    if (!chosen) throw InvariantError("step_by_step: local weights do not sum to pi(N_m)");
    draw.walk.push_back(*chosen);
    expand(g, pending, *chosen);
  }

  draw.weight = word_weight(g, out);
  return draw;
}

RecursiveSession::RecursiveSession(std::shared_ptr<const WeightTable> table, int n, std::uint64_t seed)
    : table_(std::move(table)), n_(n), rng_(seed) {
  if (n_ < 0 || n_ > table_->n_max()) throw RangeError("length outside the weight table");
}

Draw RecursiveSession::sample() {
  const BigInt& total = table_->total(n_);
  ImmatureWord start{ImmatureItem::nonterminal(table_->grammar().axiom(), n_)};
  Draw d = step_by_step(*table_, std::move(start), total, &trie_.root(), rng_);
  trie_.insert(d.walk, d.weight);
  return d;
}

}  // namespace nrgen
