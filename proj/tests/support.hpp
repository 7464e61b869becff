#ifndef LOOPCAS_TESTS_SUPPORT_HPP
#define LOOPCAS_TESTS_SUPPORT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "loopcas/derham.hpp"
#include "loopcas/polynomial.hpp"
#include "loopcas/transgression.hpp"

namespace loopcas {

// Deterministic splitmix64 stream; avoids distribution objects so sequences
// are identical across standard libraries.
class TestRng {
 public:
  explicit TestRng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  // uniform in [0, n)
  std::uint64_t below(std::uint64_t n) { return next() % n; }
  long range(long lo, long hi) { return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1))); }
  Rational small_rational() {
    long num = range(-6, 6);
    long den = range(1, 4);
    return Rational(num, den);
  }
  Rational nonzero_rational() {
    Rational r = small_rational();
    return r == 0 ? Rational(1) : r;
  }

 private:
  std::uint64_t state_;
};

inline TestRng rng_for(const std::string& label) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : label) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return TestRng(h);
}

inline Variable random_b_variable(TestRng& rng, const TruncationContext& ctx, bool allow_wild_modes = false) {
  int chart = static_cast<int>(rng.range(1, ctx.charts));
  int lo = -ctx.neg_window - (allow_wild_modes ? 2 : 0);
  int hi = ctx.pos_window + (allow_wild_modes ? 2 : 0);
  return Variable::b(chart, static_cast<int>(rng.range(lo, hi)));
}

inline Polynomial random_polynomial(TestRng& rng, const TruncationContext& ctx, int max_terms,
                                    int max_degree, bool allow_wild_modes = false) {
  Polynomial p;
  int terms = static_cast<int>(rng.range(1, max_terms));
  for (int t = 0; t < terms; ++t) {
    Monomial m;
    int deg = static_cast<int>(rng.range(0, max_degree));
    for (int d = 0; d < deg; ++d) m = m.times(Monomial(random_b_variable(rng, ctx, allow_wild_modes)));
    p.add_term(m, rng.small_rational());
  }
  return p;
}

// Random polynomial whose monomials keep negative degree < epsilon and modes
// in the window (a genuine quotient representative).
inline Polynomial random_reduced_polynomial(TestRng& rng, const TruncationContext& ctx, int max_terms,
                                            int max_degree) {
  return poly_reduce(random_polynomial(rng, ctx, max_terms, max_degree), ctx);
}

// Random relative loop function: every monomial carries >= 1 negative mode.
inline Polynomial random_relative_function(TestRng& rng, const TruncationContext& ctx, int max_terms,
                                           int max_degree) {
  Polynomial p;
  int terms = static_cast<int>(rng.range(1, max_terms));
  for (int t = 0; t < terms; ++t) {
    int chart = static_cast<int>(rng.range(1, ctx.charts));
    Monomial m(Variable::b(chart, static_cast<int>(rng.range(-ctx.neg_window, -1))));
    int deg = static_cast<int>(rng.range(0, max_degree - 1));
    for (int d = 0; d < deg; ++d) m = m.times(Monomial(random_b_variable(rng, ctx)));
    p.add_term(m, rng.small_rational());
  }
  return poly_reduce(p, ctx);
}

// Random polynomial in chart variables b[1..N] of bounded degree.
inline Polynomial random_chart_polynomial(TestRng& rng, const TruncationContext& ctx, int max_terms,
                                          int max_degree) {
  Polynomial p;
  int terms = static_cast<int>(rng.range(1, max_terms));
  for (int t = 0; t < terms; ++t) {
    Monomial m;
    int deg = static_cast<int>(rng.range(0, max_degree));
    for (int d = 0; d < deg; ++d)
      m = m.times(Monomial(Variable::chart_coord(static_cast<int>(rng.range(1, ctx.charts)))));
    p.add_term(m, rng.small_rational());
  }
  return p;
}

// Random 1-form on the base with polynomial coefficients of bounded degree.
inline XForm random_chart_1form(TestRng& rng, const TruncationContext& ctx, int max_degree) {
  DifferentialForm f(1, Universe::X);
  for (int i = 1; i <= ctx.charts; ++i) {
    if (rng.below(4) == 0) continue;
    f.add_term({Variable::chart_coord(i)}, random_chart_polynomial(rng, ctx, 3, max_degree));
  }
  if (f.is_zero()) f.add_term({Variable::chart_coord(1)}, random_chart_polynomial(rng, ctx, 2, max_degree));
  return XForm(f);
}

inline LaurentSeries random_series(TestRng& rng, const TruncationContext& ctx, int lo, int hi,
                                   int max_degree, bool exact_tail = true) {
  LaurentSeries s;
  s.lo = lo;
  s.hi = hi;
  s.exact_tail = exact_tail;
  for (int k = lo; k <= hi; ++k) {
    if (rng.below(3) == 0) continue;
    Polynomial c = random_reduced_polynomial(rng, ctx, 2, max_degree);
    if (!c.is_zero()) s.coeff.emplace(k, std::move(c));
  }
  return s;
}

inline CoordChange random_coord_change(TestRng& rng, int jet) {
  CoordChange cc;
  cc.a.push_back(rng.nonzero_rational());
  for (int d = 1; d < jet; ++d) cc.a.push_back(rng.small_rational());
  return cc;
}

}  // namespace loopcas

#endif
