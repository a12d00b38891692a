#include "nrgen/unranking_sampler.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <tuple>

#include "nrgen/errors.hpp"

namespace nrgen {

std::string to_string(const RankInterval& interval) {
  return "[" + interval.low.str() + "," + interval.high.str() + ")";
}

namespace {

// Parses a word against the grammar and composes its interval bottom-up.
// Memoized on (nonterminal, start, length).
class Ranker {
 public:
  Ranker(const WeightTable& table, std::string_view word) : table_(table), g_(table.grammar()), word_(word) {}

  std::optional<RankInterval> rank(NtId nt, std::size_t start, int len) {
    if (table_.weight(nt, len).is_zero()) return std::nullopt;
    auto key = std::make_tuple(nt, start, len);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    auto result = compute(nt, start, len);
    memo_.emplace(key, result);
    return result;
  }

 private:
  std::optional<RankInterval> compute(NtId nt, std::size_t start, int len) {
    const CompiledRule& r = g_.rule(nt);
    switch (r.kind) {
      case RuleKind::terminal:
        if (len == 1 && word_[start] == r.terminal) return RankInterval{0, g_.int_weight(r.terminal)};
        return std::nullopt;
      case RuleKind::epsilon:
        if (len == 0) return RankInterval{0, 1};
        return std::nullopt;
      case RuleKind::union_: {
        if (auto first = rank(r.first, start, len)) return first;
        if (auto second = rank(r.second, start, len)) {
          const BigInt& offset = table_.weight(r.first, len);
          return RankInterval{second->low + offset, second->high + offset};
        }
        return std::nullopt;
      }
      case RuleKind::product: {
        BigInt before(0);
        for (int k = 0; k <= len; ++k) {
          const int i = split_at(len, k);
          const BigInt& a = table_.weight(r.first, i);
          if (a.is_zero()) continue;
          const BigInt& b = table_.weight(r.second, len - i);
          if (b.is_zero()) continue;
          if (auto left = rank(r.first, start, i)) {
            if (auto right = rank(r.second, start + static_cast<std::size_t>(i), len - i)) {
              const BigInt left_width = left->width();
              BigInt low = before + left->low * b + right->low * left_width;
              BigInt high = low + left_width * right->width();
              return RankInterval{std::move(low), std::move(high)};
            }
          }
          before += a * b;
        }
        return std::nullopt;
      }
    }
    return std::nullopt;
  }

  const WeightTable& table_;
  const ScaledGrammar& g_;
  std::string_view word_;
  std::map<std::tuple<NtId, std::size_t, int>, std::optional<RankInterval>> memo_;
};

// Inverse of Ranker: appends the word to `out` and returns its interval.
RankInterval unrank_into(const WeightTable& table, NtId nt, int m, const BigInt& r, std::string& out) {
  const ScaledGrammar& g = table.grammar();
  const CompiledRule& rule = g.rule(nt);
  switch (rule.kind) {
    case RuleKind::terminal:
      out.push_back(rule.terminal);
      return {0, g.int_weight(rule.terminal)};
    case RuleKind::epsilon:
      return {0, 1};
    case RuleKind::union_: {
      const BigInt& first = table.weight(rule.first, m);
      if (r < first) return unrank_into(table, rule.first, m, r, out);
      RankInterval inner = unrank_into(table, rule.second, m, BigInt(r - first), out);
      inner.low += first;
      inner.high += first;
      return inner;
    }
    case RuleKind::product: {
      BigInt rest = r;
      BigInt before(0);
      BigInt block;
      for (int k = 0; k <= m; ++k) {
        const int i = split_at(m, k);
        const BigInt& a = table.weight(rule.first, i);
        if (a.is_zero()) continue;
        const BigInt& b = table.weight(rule.second, m - i);
        if (b.is_zero()) continue;
        block = a * b;
        if (rest >= block) {
          rest -= block;
          before += block;
          continue;
        }
        // Left factor is major: rest divided by the right factor's total
        // lands in the left word's interval; what is left, divided by the
        // left word's width, lands in the right word's interval.
        const RankInterval left = unrank_into(table, rule.first, i, BigInt(rest / b), out);
        const BigInt left_width = left.width();
        const RankInterval right =
            unrank_into(table, rule.second, m - i, BigInt((rest - left.low * b) / left_width), out);
        BigInt low = before + left.low * b + right.low * left_width;
        BigInt high = low + left_width * right.width();
        return {std::move(low), std::move(high)};
      }
      throw InvariantError("unrank: rank exceeds the product blocks of " + g.name(nt));
    }
  }
  throw InvariantError("unrank: unknown rule kind");
}

using NodePtr = std::unique_ptr<IntervalTree::Node>;

int height(const NodePtr& n) { return n ? n->height : 0; }

void update_height(IntervalTree::Node& n) { n.height = 1 + std::max(height(n.left), height(n.right)); }

// Right rotation of y around its left child x:
//   y(x(A, B), C) -> x(A, y(B, C)).
// x keeps A on its left, so x->delta is unchanged; y loses A and x from its
// left subtree: y->delta -= x->delta + width(x).
NodePtr rotate_right(NodePtr y) {
  NodePtr x = std::move(y->left);
  y->delta -= x->delta + x->interval.width();
  y->left = std::move(x->right);
  update_height(*y);
  x->right = std::move(y);
  update_height(*x);
  return x;
}

// Left rotation of x around its right child y:
//   x(A, y(B, C)) -> y(x(A, B), C).
// x keeps A on its left (delta unchanged); y gains A and x on its left:
// y->delta += x->delta + width(x).
NodePtr rotate_left(NodePtr x) {
  NodePtr y = std::move(x->right);
  y->delta += x->delta + x->interval.width();
  x->right = std::move(y->left);
  update_height(*x);
  y->left = std::move(x);
  update_height(*y);
  return y;
}

NodePtr rebalance(NodePtr n) {
  update_height(*n);
  const int balance = height(n->left) - height(n->right);
  if (balance > 1) {
    if (height(n->left->left) < height(n->left->right)) n->left = rotate_left(std::move(n->left));
    return rotate_right(std::move(n));
  }
  if (balance < -1) {
    if (height(n->right->right) < height(n->right->left)) n->right = rotate_right(std::move(n->right));
    return rotate_left(std::move(n));
  }
  return n;
}

// Descent for a validated (non-overlapping) interval. Every node whose left
// subtree receives the new interval gains its width in delta.
NodePtr insert_node(NodePtr node, NodePtr fresh) {
  if (!node) return fresh;
  if (fresh->interval.high <= node->interval.low) {
    node->delta += fresh->interval.width();
    node->left = insert_node(std::move(node->left), std::move(fresh));
  } else {
    node->right = insert_node(std::move(node->right), std::move(fresh));
  }
  return rebalance(std::move(node));
}

}  // namespace

RankInterval rank(const WeightTable& table, NtId nt, std::string_view word) {
  const int n = static_cast<int>(word.size());
  if (n > table.n_max()) throw RangeError("word longer than the weight table");
  Ranker ranker(table, word);
  auto result = ranker.rank(nt, 0, n);
  if (!result) throw RangeError("word '" + std::string(word) + "' is not in the language");
  return *result;
}

RankInterval rank(const WeightTable& table, std::string_view word) {
  return rank(table, table.grammar().axiom(), word);
}

Unranked unrank(const WeightTable& table, NtId nt, int m, const BigInt& r) {
  const BigInt& total = table.weight(nt, m);
  if (r < 0 || r >= total)
    throw RangeError("rank " + r.str() + " outside [0," + total.str() + ")");
  Unranked u;
  u.word.reserve(static_cast<std::size_t>(m));
  u.interval = unrank_into(table, nt, m, r, u.word);
  return u;
}

void IntervalTree::insert(std::string word, RankInterval interval) {
  if (interval.low >= interval.high) throw InvariantError("interval tree: empty interval " + to_string(interval));
  for (const Node* n = root_.get(); n != nullptr;) {
    if (interval.high <= n->interval.low)
      n = n->left.get();
    else if (interval.low >= n->interval.high)
      n = n->right.get();
    else
      throw InvariantError("interval tree: " + to_string(interval) + " overlaps " + to_string(n->interval) +
                           " (word '" + n->word + "')");
  }
  auto fresh = std::make_unique<Node>();
  mass_ += interval.width();
  fresh->word = std::move(word);
  fresh->interval = std::move(interval);
  root_ = insert_node(std::move(root_), std::move(fresh));
  ++size_;
}

BigInt mod_random(BigInt r, const IntervalTree::Node* node) {
  while (node != nullptr) {
    if (r < node->interval.low - node->delta) {
      node = node->left.get();
    } else {
      r += node->delta + node->interval.width();
      node = node->right.get();
    }
  }
  return r;
}

UnrankingSession::UnrankingSession(std::shared_ptr<const WeightTable> table, int n, std::uint64_t seed)
    : table_(std::move(table)), n_(n), rng_(seed) {
  if (n_ < 0 || n_ > table_->n_max()) throw RangeError("length outside the weight table");
}

Unranked UnrankingSession::sample() {
  const BigInt admissible = remaining_mass();
  if (admissible <= 0) throw ExhaustedError("every word of the language is forbidden");
  BigInt r = mod_random(rng_.below(admissible), tree_.root());
  Unranked u = unrank(*table_, table_->grammar().axiom(), n_, r);
  tree_.insert(u.word, u.interval);
  return u;
}

}  // namespace nrgen
