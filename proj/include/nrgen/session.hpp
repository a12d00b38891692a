#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "nrgen/random.hpp"
#include "nrgen/weights.hpp"

namespace nrgen {

enum class Engine { rejection, recursive, unranking };

std::string_view to_string(Engine e);
/// Throws Error(usage) for an unknown engine name.
Engine parse_engine(std::string_view name);

struct SessionConfig {
  std::shared_ptr<const WeightTable> table;
  int n = 0;
  std::size_t k = 1;
  Engine engine = Engine::recursive;
  std::uint64_t seed = 0;
  std::vector<std::string> external_forbidden;
  /// Rejection engine only: give up after this many draws in total.
  std::optional<std::uint64_t> attempt_cap;
};

struct GeneratedSet {
  std::vector<std::string> words;           // distinct, in generation order
  std::vector<Rational> probabilities;      // unconstrained probability of each word at length n
  std::uint64_t attempts = 0;               // total draws, rejected ones included
  std::uint64_t external_rejections = 0;    // draws that hit an external forbidden word
  bool exhausted = false;                   // fewer than k admissible words exist
  bool cap_reached = false;
};

struct RejectionDraw {
  std::optional<std::string> word;  // empty when the attempt cap was hit
  std::uint64_t attempts = 0;
};

/// Draws from the unconstrained weighted distribution on L_n (uniform rank
/// then unrank) until the word is outside `forbidden`.
RejectionDraw naive_rejection(const WeightTable& table, int n, const std::unordered_set<std::string>& forbidden,
                              Rng& rng, std::optional<std::uint64_t> cap = std::nullopt);

/// Expected number of uniform draws to collect k distinct words out of l:
/// l * (H_l - H_{l-k}). Throws RangeError unless 1 <= k <= l.
Rational expected_attempts_uniform(std::uint64_t l, std::uint64_t k);

/// Probability that sequential non-redundant sampling of |R| words yields
/// exactly the set R, summed over all |R|! orders. Oracle use (|R| <= 8).
/// Throws RangeError for a word outside L_n.
Rational set_probability(const WeightTable& table, std::span<const std::string> words, int n);

/// Generates k distinct words of length n. External forbidden words are
/// handled lazily: a draw that hits one is recorded and retried. Fully
/// determined by the config (seed included).
GeneratedSet generate_distinct(const SessionConfig& config);

struct BlowupStats {
  std::vector<double> mean_attempts;  // index k-1: mean draws to hold k distinct words
  std::size_t trials = 0;
};

/// Monte-Carlo mean of naive-rejection draws needed to reach k distinct
/// words, for every k <= k_max. Trial t uses seed + t; trials are split
/// across `threads` workers and merged in trial order.
BlowupStats rejection_blowup_stats(const WeightTable& table, int n, std::size_t k_max, std::size_t trials,
                                   std::uint64_t seed, unsigned threads = 1);

}  // namespace nrgen
