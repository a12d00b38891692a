#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include "nrgen/random.hpp"
#include "nrgen/weights.hpp"

namespace nrgen {

/// Half-open rank interval [low, high) of one word; its width is the
/// word's scaled weight.
struct RankInterval {
  BigInt low;
  BigInt high;

  BigInt width() const { return high - low; }
  bool contains(const BigInt& r) const { return low <= r && r < high; }
  friend bool operator==(const RankInterval&, const RankInterval&) = default;
};

std::string to_string(const RankInterval& interval);

/// Interval of `word` in L(axiom)_|word| under the shared total order.
/// Throws RangeError when the word is not in the language.
RankInterval rank(const WeightTable& table, std::string_view word);
RankInterval rank(const WeightTable& table, NtId nt, std::string_view word);

struct Unranked {
  std::string word;
  RankInterval interval;
};

/// The unique word of L(N)_m whose interval contains r. Uses integer
/// division throughout; exact because interval endpoints are integers.
/// Throws RangeError unless 0 <= r < pi(N_m).
Unranked unrank(const WeightTable& table, NtId nt, int m, const BigInt& r);

/// AVL tree of disjoint forbidden rank intervals. Each node keeps `delta`,
/// the total width of the intervals in its left subtree.
class IntervalTree {
 public:
  struct Node {
    std::string word;
    RankInterval interval;
    BigInt delta;
    int height = 1;
    std::unique_ptr<Node> left;
    std::unique_ptr<Node> right;
  };

  const Node* root() const { return root_.get(); }
  std::size_t size() const { return size_; }
  const BigInt& forbidden_mass() const { return mass_; }

  /// Throws InvariantError when `interval` overlaps a stored interval or is
  /// empty.
  void insert(std::string word, RankInterval interval);

 private:
  std::unique_ptr<Node> root_;
  std::size_t size_ = 0;
  BigInt mass_;
};

/// Maps r in [0, pi - pi(F)) to r + Shift(r, F): the order-preserving
/// bijection onto [0, pi) minus the stored intervals.
BigInt mod_random(BigInt r, const IntervalTree::Node* node);

/// Non-redundant sampler: uniform r over the admissible mass, shifted past
/// the forbidden intervals, then unranked.
class UnrankingSession {
 public:
  UnrankingSession(std::shared_ptr<const WeightTable> table, int n, std::uint64_t seed);

  /// Throws ExhaustedError once the whole of L_n has been drawn.
  Unranked sample();

  const IntervalTree& tree() const { return tree_; }
  BigInt remaining_mass() const { return table_->total(n_) - tree_.forbidden_mass(); }

 private:
  std::shared_ptr<const WeightTable> table_;
  int n_;
  Rng rng_;
  IntervalTree tree_;
};

}  // namespace nrgen
