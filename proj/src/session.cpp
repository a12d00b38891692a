#include "nrgen/session.hpp"

#include <algorithm>
#include <numeric>
#include <thread>

#include "nrgen/errors.hpp"
#include "nrgen/recursive_sampler.hpp"
#include "nrgen/unranking_sampler.hpp"

namespace nrgen {

std::string_view to_string(Engine e) {
  switch (e) {
    case Engine::rejection: return "rejection";
    case Engine::recursive: return "recursive";
    case Engine::unranking: return "unranking";
  }
  return "recursive";
}

Engine parse_engine(std::string_view name) {
  if (name == "rejection") return Engine::rejection;
  if (name == "recursive") return Engine::recursive;
  if (name == "unranking") return Engine::unranking;
  throw Error(ErrorClass::usage, "unknown engine '" + std::string(name) + "'");
}

RejectionDraw naive_rejection(const WeightTable& table, int n, const std::unordered_set<std::string>& forbidden,
                              Rng& rng, std::optional<std::uint64_t> cap) {
  const BigInt& total = table.total(n);
  if (total.is_zero()) throw ExhaustedError("empty language at length " + std::to_string(n));
  const NtId axiom = table.grammar().axiom();
  RejectionDraw result;
  while (!cap || result.attempts < *cap) {
    ++result.attempts;
    Unranked u = unrank(table, axiom, n, rng.below(total));
    if (!forbidden.contains(u.word)) {
      result.word = std::move(u.word);
      return result;
    }
  }
  return result;
}

Rational expected_attempts_uniform(std::uint64_t l, std::uint64_t k) {
  if (k < 1 || k > l) throw RangeError("expected_attempts_uniform requires 1 <= k <= l");
  Rational sum(0);
  for (std::uint64_t i = 0; i < k; ++i) sum += Rational(BigInt(l), BigInt(l - i));
  return sum;
}

Rational set_probability(const WeightTable& table, std::span<const std::string> words, int n) {
  if (words.empty()) throw RangeError("set_probability needs at least one word");
  const BigInt& total = table.total(n);
  std::vector<BigInt> weights;
  for (const auto& w : words) {
    if (static_cast<int>(w.size()) != n) throw RangeError("word '" + w + "' does not have length " + std::to_string(n));
    weights.push_back(rank(table, w).width());
  }
  std::vector<std::size_t> order(words.size());
  std::iota(order.begin(), order.end(), 0);
  Rational sum(0);
  do {
    Rational p(1);
    BigInt used(0);
    for (std::size_t idx : order) {
      p *= Rational(weights[idx], BigInt(total - used));
      used += weights[idx];
    }
    sum += p;
  } while (std::next_permutation(order.begin(), order.end()));
  return sum;
}

namespace {

GeneratedSet generate_by_rejection(const SessionConfig& cfg, const std::unordered_set<std::string>& external) {
  const WeightTable& table = *cfg.table;
  GeneratedSet out;
  Rng rng(cfg.seed);
  // Admissible mass is tracked to detect exhaustion; external words are
  // parsed once up front, which rejection can afford.
  BigInt admissible = table.total(cfg.n);
  for (const auto& w : external) {
    if (static_cast<int>(w.size()) != cfg.n) continue;
    try {
      admissible -= rank(table, w).width();
    } catch (const RangeError&) {
      // Not in L_n: cannot be drawn, nothing to subtract.
    }
  }
  std::unordered_set<std::string> forbidden = external;
  while (out.words.size() < cfg.k) {
    if (admissible <= 0) {
      out.exhausted = true;
      break;
    }
    std::optional<std::uint64_t> remaining;
    if (cfg.attempt_cap) remaining = *cfg.attempt_cap > out.attempts ? *cfg.attempt_cap - out.attempts : 0;
    RejectionDraw d = naive_rejection(table, cfg.n, forbidden, rng, remaining);
    out.attempts += d.attempts;
    if (!d.word) {
      out.cap_reached = true;
      break;
    }
    admissible -= word_weight(table.grammar(), *d.word);
    forbidden.insert(*d.word);
    out.words.push_back(std::move(*d.word));
  }
  return out;
}

template <typename Session, typename WordOf>
GeneratedSet generate_lazily(const SessionConfig& cfg, const std::unordered_set<std::string>& external,
                             WordOf&& word_of) {
  GeneratedSet out;
  Session session(cfg.table, cfg.n, cfg.seed);
  while (out.words.size() < cfg.k) {
    std::string word;
    try {
      word = word_of(session.sample());
    } catch (const ExhaustedError&) {
      out.exhausted = true;
      break;
    }
    ++out.attempts;
    // The draw is already excluded from future draws; an external hit only
    // costs this one attempt.
    if (external.contains(word)) {
      ++out.external_rejections;
      continue;
    }
    out.words.push_back(std::move(word));
  }
  return out;
}

}  // namespace

GeneratedSet generate_distinct(const SessionConfig& cfg) {
  if (!cfg.table) throw Error(ErrorClass::usage, "session has no weight table");
  if (cfg.k < 1) throw Error(ErrorClass::usage, "k must be at least 1");
  if (cfg.n < 0 || cfg.n > cfg.table->n_max()) throw RangeError("length outside the weight table");
  if (cfg.table->total(cfg.n).is_zero()) throw ExhaustedError("empty language at length " + std::to_string(cfg.n));

  const std::unordered_set<std::string> external(cfg.external_forbidden.begin(), cfg.external_forbidden.end());
  GeneratedSet out;
  switch (cfg.engine) {
    case Engine::rejection:
      out = generate_by_rejection(cfg, external);
      break;
    case Engine::recursive:
      out = generate_lazily<RecursiveSession>(cfg, external, [](Draw d) { return std::move(d.word); });
      break;
    case Engine::unranking:
      out = generate_lazily<UnrankingSession>(cfg, external, [](Unranked u) { return std::move(u.word); });
      break;
  }
  for (const auto& w : out.words) out.probabilities.push_back(word_probability(*cfg.table, w));
  return out;
}

BlowupStats rejection_blowup_stats(const WeightTable& table, int n, std::size_t k_max, std::size_t trials,
                                   std::uint64_t seed, unsigned threads) {
  BlowupStats stats;
  stats.trials = trials;
  stats.mean_attempts.assign(k_max, 0.0);
  if (trials == 0 || k_max == 0) return stats;

  // attempts[t][k-1]: cumulative draws when trial t first held k words.
  std::vector<std::vector<std::uint64_t>> attempts(trials, std::vector<std::uint64_t>(k_max, 0));
  auto run_trial = [&](std::size_t t) {
    Rng rng(seed + t);
    std::unordered_set<std::string> seen;
    std::uint64_t draws = 0;
    for (std::size_t k = 0; k < k_max; ++k) {
      RejectionDraw d = naive_rejection(table, n, seen, rng);
      draws += d.attempts;
      seen.insert(*d.word);
      attempts[t][k] = draws;
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(trials)));
  if (threads == 1) {
    for (std::size_t t = 0; t < trials; ++t) run_trial(t);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t t = w; t < trials; t += threads) run_trial(t);
      });
  }
  for (std::size_t k = 0; k < k_max; ++k) {
    long double sum = 0;
    for (std::size_t t = 0; t < trials; ++t) sum += static_cast<long double>(attempts[t][k]);
    stats.mean_attempts[k] = static_cast<double>(sum / static_cast<long double>(trials));
  }
  return stats;
}

}  // namespace nrgen
