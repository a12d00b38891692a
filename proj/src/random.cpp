#include "nrgen/random.hpp"

#include <stdexcept>

#include "nrgen/errors.hpp"

namespace nrgen {

std::string_view to_string(ErrorClass cls) {
  switch (cls) {
    case ErrorClass::usage: return "usage";
    case ErrorClass::parse: return "parse";
    case ErrorClass::validation: return "validation";
    case ErrorClass::range: return "range";
    case ErrorClass::exhausted: return "exhausted";
    case ErrorClass::internal: return "internal";
  }
  return "internal";
}

ParseError::ParseError(int line, int column, const std::string& message)
    : Error(ErrorClass::parse,
            std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::below: empty range");
  if ((bound & (bound - 1)) == 0) return engine_() & (bound - 1);
  // Largest multiple of bound representable; reject the tail.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  for (;;) {
    std::uint64_t x = engine_();
    if (x < limit) return x % bound;
  }
}

BigInt Rng::below(const BigInt& bound) {
  if (bound <= 0) throw std::invalid_argument("Rng::below: empty range");
  if (bound <= std::numeric_limits<std::uint64_t>::max()) {
    return BigInt(below(bound.convert_to<std::uint64_t>()));
  }
  const unsigned bits = boost::multiprecision::msb(bound) + 1;
  const unsigned blocks = (bits + 63) / 64;
  const unsigned top_bits = bits - 64 * (blocks - 1);
  const std::uint64_t top_mask = top_bits == 64 ? ~std::uint64_t{0}
                                                 : (std::uint64_t{1} << top_bits) - 1;
  for (;;) {
    BigInt x = engine_() & top_mask;
    for (unsigned i = 1; i < blocks; ++i) {
      x <<= 64;
      x |= BigInt(engine_());
    }
    if (x < bound) return x;
  }
}

}  // namespace nrgen
