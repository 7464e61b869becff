#ifndef LOOPCAS_RNG_HPP
#define LOOPCAS_RNG_HPP

#include <cstdint>

#include "loopcas/rational.hpp"

namespace loopcas {

// splitmix64: deterministic across platforms and standard libraries, so
// seeded reports are byte-identical everywhere.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  std::uint64_t below(std::uint64_t n) { return next() % n; }
  long range(long lo, long hi) {
    return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }
  Rational small_rational() { return Rational(range(-6, 6), range(1, 4)); }
  Rational nonzero_rational() {
    Rational r = small_rational();
    return r == 0 ? Rational(1) : r;
  }

 private:
  std::uint64_t state_;
};

}  // namespace loopcas

#endif
