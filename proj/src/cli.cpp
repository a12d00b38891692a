#include "nrgen/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "nrgen/grammar.hpp"
#include "nrgen/session.hpp"
#include "nrgen/unranking_sampler.hpp"
#include "nrgen/weights.hpp"

namespace nrgen::cli {

using json = nlohmann::ordered_json;

int exit_code(ErrorClass cls) {
  switch (cls) {
    case ErrorClass::usage:
    case ErrorClass::range: return usage;
    case ErrorClass::parse:
    case ErrorClass::validation: return validation;
    case ErrorClass::exhausted: return exhausted;
    case ErrorClass::internal: return internal;
  }
  return internal;
}

namespace {

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorClass::usage, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

WeightedGrammar load_grammar(const std::string& path) { return parse_grammar(read_file(path)); }

std::vector<std::string> read_words(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<std::string> words;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t");
    words.push_back(line.substr(first, last - first + 1));
  }
  return words;
}

BigInt parse_rank(const std::string& text) {
  try {
    return parse_natural(text);
  } catch (const std::invalid_argument&) {
    throw Error(ErrorClass::usage, "rank must be a nonnegative decimal integer, got '" + text + "'");
  }
}

// pi / D^n: the unscaled total weight of L_n.
Rational unscaled(const BigInt& scaled, const ScaledGrammar& g, int n) {
  BigInt denom = pow(g.scale(), static_cast<unsigned>(n));
  return Rational(scaled, denom);
}

struct Options {
  std::string grammar;
  int n = -1;
  std::size_t k = 1;
  std::string engine = "recursive";
  std::uint64_t seed = 0;
  std::string forbid;
  std::string word;
  std::string rank;
  int probe = 0;
  std::size_t k_max = 10;
  std::size_t trials = 1000;
  unsigned threads = 1;
  std::uint64_t cap = 0;
  bool json = false;
};

int cmd_normalize(const Options& o, std::ostream& out) {
  const WeightedGrammar bcnf = to_bcnf(load_grammar(o.grammar));
  if (o.json)
    out << json{{"grammar", serialize(bcnf)}}.dump() << '\n';
  else
    out << serialize(bcnf);
  return ok;
}

int cmd_validate(const Options& o, std::ostream& out) {
  const WeightedGrammar g = load_grammar(o.grammar);
  const ValidationReport report = validate(g);
  std::optional<AmbiguityReport> probe;
  if (report.valid() && o.probe > 0) probe = ambiguity_probe(g, o.probe);
  if (o.json) {
    json j{{"valid", report.valid()}, {"bcnf", is_bcnf(g)}, {"errors", report.errors()}, {"warnings", report.warnings()}};
    if (probe) {
      j["ambiguity"] = probe->summary();
      if (auto m = probe->first_ambiguous_length()) j["first_ambiguous_length"] = *m;
    }
    out << j.dump() << '\n';
  } else {
    out << (report.valid() ? "valid" : "invalid") << (is_bcnf(g) ? " (BCNF)" : "") << '\n';
    for (const auto& e : report.errors()) out << "error: " << e << '\n';
    for (const auto& w : report.warnings()) out << "warning: " << w << '\n';
    if (probe) out << probe->summary() << '\n';
  }
  return report.valid() ? ok : validation;
}

int cmd_count(const Options& o, std::ostream& out) {
  const auto table = prepare(load_grammar(o.grammar), o.n);
  const ScaledGrammar& g = table->grammar();
  const BigInt& total = table->total(o.n);
  if (o.json) {
    out << json{{"n", o.n},
                {"count", total.str()},
                {"scale", g.scale().str()},
                {"total_weight", to_string(unscaled(total, g, o.n))}}
               .dump()
        << '\n';
  } else {
    out << total << '\n';
    if (g.scale() > 1) out << "D=" << g.scale() << " total=" << to_string(unscaled(total, g, o.n)) << '\n';
  }
  return ok;
}

int cmd_enumerate(const Options& o, std::ostream& out) {
  const WeightedGrammar bcnf = to_bcnf(load_grammar(o.grammar));
  const auto words = enumerate_words(bcnf, o.n);
  if (o.json) {
    json arr = json::array();
    for (const auto& w : words) arr.push_back({{"word", w.word}, {"weight", to_string(w.weight)}});
    out << json{{"n", o.n}, {"words", arr}}.dump() << '\n';
  } else {
    for (const auto& w : words) out << w.word << ' ' << to_string(w.weight) << '\n';
  }
  return ok;
}

int cmd_sample(const Options& o, std::ostream& out, std::ostream& err) {
  SessionConfig cfg;
  cfg.engine = parse_engine(o.engine);
  cfg.table = prepare(load_grammar(o.grammar), o.n);
  cfg.n = o.n;
  cfg.k = o.k;
  cfg.seed = o.seed;
  if (!o.forbid.empty()) cfg.external_forbidden = read_words(o.forbid);
  if (o.cap > 0) cfg.attempt_cap = o.cap;
  const GeneratedSet set = generate_distinct(cfg);

  if (o.json) {
    json arr = json::array();
    for (std::size_t i = 0; i < set.words.size(); ++i)
      arr.push_back({{"word", set.words[i]},
                     {"weight", word_weight(cfg.table->grammar(), set.words[i]).str()},
                     {"probability", to_string(set.probabilities[i])}});
    out << json{{"engine", o.engine},
                {"n", o.n},
                {"k", o.k},
                {"seed", o.seed},
                {"words", arr},
                {"attempts", set.attempts},
                {"external_rejections", set.external_rejections},
                {"exhausted", set.exhausted},
                {"cap_reached", set.cap_reached}}
               .dump()
        << '\n';
  } else {
    for (const auto& w : set.words) out << w << '\n';
  }
  if (set.exhausted) {
    if (!o.json)
      err << "error[exhausted]: only " << set.words.size() << " admissible words of length " << o.n << '\n';
    return exhausted;
  }
  if (set.cap_reached) {
    if (!o.json) err << "error[exhausted]: attempt cap reached after " << set.words.size() << " words\n";
    return exhausted;
  }
  return ok;
}

int cmd_rank(const Options& o, std::ostream& out) {
  const int n = static_cast<int>(o.word.size());
  if (o.n >= 0 && o.n != n) throw RangeError("word has length " + std::to_string(n) + ", not " + std::to_string(o.n));
  const auto table = prepare(load_grammar(o.grammar), n);
  const RankInterval iv = rank(*table, o.word);
  if (o.json)
    out << json{{"word", o.word}, {"low", iv.low.str()}, {"high", iv.high.str()}}.dump() << '\n';
  else
    out << to_string(iv) << '\n';
  return ok;
}

int cmd_unrank(const Options& o, std::ostream& out) {
  const auto table = prepare(load_grammar(o.grammar), o.n);
  const Unranked u = unrank(*table, table->grammar().axiom(), o.n, parse_rank(o.rank));
  if (o.json)
    out << json{{"word", u.word}, {"low", u.interval.low.str()}, {"high", u.interval.high.str()}}.dump() << '\n';
  else
    out << u.word << ' ' << to_string(u.interval) << '\n';
  return ok;
}

int cmd_bench(const Options& o, std::ostream& out) {
  const auto table = prepare(load_grammar(o.grammar), o.n);
  const BigInt& total = table->total(o.n);
  if (total.is_zero()) throw ExhaustedError("empty language at length " + std::to_string(o.n));
  std::size_t k_max = o.k_max;
  // Rejection can only collect as many words as the language holds.
  if (total < BigInt(k_max)) {
    const auto words = enumerate_words(table->grammar().grammar(), o.n);
    k_max = std::min(k_max, words.size());
  }
  const BlowupStats stats = rejection_blowup_stats(*table, o.n, k_max, o.trials, o.seed, o.threads);
  if (o.json) {
    json rows = json::array();
    for (std::size_t k = 1; k <= stats.mean_attempts.size(); ++k)
      rows.push_back({{"k", k}, {"mean_attempts", stats.mean_attempts[k - 1]}});
    out << json{{"n", o.n}, {"trials", stats.trials}, {"rows", rows}}.dump() << '\n';
  } else {
    out << "k\tmean_attempts\n";
    for (std::size_t k = 1; k <= stats.mean_attempts.size(); ++k)
      out << k << '\t' << stats.mean_attempts[k - 1] << '\n';
  }
  return ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Non-redundant random generation of words from weighted context-free grammars", "nrgen"};
  app.require_subcommand(1);
  app.add_flag("--json", o.json, "Structured JSON output; big numbers as decimal strings");

  auto grammar_arg = [&](CLI::App* sub) {
    sub->add_option("grammar", o.grammar, "Grammar file (- for stdin)")->required();
  };
  auto length_arg = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("-n,--length", o.n, "Word length")->check(CLI::NonNegativeNumber);
    if (required) opt->required();
  };

  auto* normalize = app.add_subcommand("normalize", "Print the BCNF form of a CNF grammar");
  grammar_arg(normalize);

  auto* validate_cmd = app.add_subcommand("validate", "Report unproductive symbols, nullable cycles, unreachable symbols");
  grammar_arg(validate_cmd);
  validate_cmd->add_option("--probe", o.probe, "Also compare parse and word counts up to this length")
      ->check(CLI::NonNegativeNumber);

  auto* count = app.add_subcommand("count", "Scaled total weight pi(axiom_n); also pi/D^n when D > 1");
  grammar_arg(count);
  length_arg(count, true);

  auto* enumerate = app.add_subcommand("enumerate", "List every word of length n with its weight, in rank order");
  grammar_arg(enumerate);
  length_arg(enumerate, true);

  auto* sample = app.add_subcommand("sample", "Draw k distinct words of length n");
  grammar_arg(sample);
  length_arg(sample, true);
  sample->add_option("-k,--count", o.k, "Number of distinct words")->check(CLI::PositiveNumber);
  sample->add_option("--engine", o.engine, "rejection | recursive | unranking")
      ->check(CLI::IsMember({"rejection", "recursive", "unranking"}));
  sample->add_option("--seed", o.seed, "RNG seed");
  sample->add_option("--forbid", o.forbid, "File of forbidden words, one per line");
  sample->add_option("--cap", o.cap, "Rejection engine: maximum total draws (0 = none)");

  auto* rank_cmd = app.add_subcommand("rank", "Rank interval [low,high) of a word, in the scaled domain (weights times D)");
  grammar_arg(rank_cmd);
  length_arg(rank_cmd, false);
  rank_cmd->add_option("--word", o.word, "Word to rank")->required();

  auto* unrank_cmd =
      app.add_subcommand("unrank", "Word whose interval contains a scaled-domain rank in [0, pi(axiom_n))");
  grammar_arg(unrank_cmd);
  length_arg(unrank_cmd, true);
  unrank_cmd->add_option("--rank", o.rank, "Decimal rank")->required();

  auto* bench = app.add_subcommand("bench", "Mean naive-rejection draws to collect k distinct words");
  grammar_arg(bench);
  length_arg(bench, true);
  bench->add_option("--k-max", o.k_max, "Largest k")->check(CLI::PositiveNumber);
  bench->add_option("--trials", o.trials, "Runs per k")->check(CLI::PositiveNumber);
  bench->add_option("--seed", o.seed, "Seed of trial 0; trial t uses seed + t");
  bench->add_option("--threads", o.threads, "Worker threads (0 = hardware)");

  auto report = [&](ErrorClass cls, const std::string& msg) {
    if (o.json)
      err << json{{"error", std::string(to_string(cls))}, {"message", msg}}.dump() << '\n';
    else
      err << "error[" << to_string(cls) << "]: " << msg << '\n';
    return exit_code(cls);
  };

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    return report(ErrorClass::usage, e.what());
  }

  if (o.threads == 0) o.threads = std::max(1u, std::thread::hardware_concurrency());

  try {
    if (*normalize) return cmd_normalize(o, out);
    if (*validate_cmd) return cmd_validate(o, out);
    if (*count) return cmd_count(o, out);
    if (*enumerate) return cmd_enumerate(o, out);
    if (*sample) return cmd_sample(o, out, err);
    if (*rank_cmd) return cmd_rank(o, out);
    if (*unrank_cmd) return cmd_unrank(o, out);
    if (*bench) return cmd_bench(o, out);
  } catch (const ParseError& e) {
    return report(ErrorClass::parse, e.what());
  } catch (const Error& e) {
    return report(e.error_class(), e.what());
  } catch (const std::invalid_argument& e) {
    return report(ErrorClass::usage, e.what());
  } catch (const std::exception& e) {
    return report(ErrorClass::internal, e.what());
  }
  return report(ErrorClass::usage, "no command given");
}

}  // namespace nrgen::cli
