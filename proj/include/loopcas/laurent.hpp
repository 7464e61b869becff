#ifndef LOOPCAS_LAURENT_HPP
#define LOOPCAS_LAURENT_HPP

#include <map>
#include <string>
#include <vector>

#include "loopcas/context.hpp"
#include "loopcas/errors.hpp"
#include "loopcas/polynomial.hpp"

namespace loopcas {

// Finite-window Laurent object with coefficients in C. Semantics of the
// window: coefficients below `lo` are exactly zero; coefficients in
// [lo, hi] are stored (zeros omitted); above `hi` they are exactly zero
// when `exact_tail` is set and unknown otherwise. Arithmetic propagates
// the exactness horizon so that unsound coefficient reads are hard errors
// instead of silent zeros.
template <class C>
struct Laurent {
  std::map<int, C> coeff;
  int lo = 0;
  int hi = 0;
  bool exact_tail = true;

  bool is_zero() const { return coeff.empty(); }

  void set(int k, C c) {
    if (c.is_zero())
      coeff.erase(k);
    else
      coeff[k] = std::move(c);
  }

  // Highest exponent whose coefficient is known exactly (saturating).
  long sound_top() const { return exact_tail ? kEverywhere : hi; }

  static constexpr long kEverywhere = 1L << 40;
};

using LaurentSeries = Laurent<Polynomial>;

template <class A, class B, class R, class Mul>
Laurent<R> laurent_mul(const Laurent<A>& a, const Laurent<B>& b, Mul&& mul) {
  Laurent<R> out;
  out.lo = a.lo + b.lo;
  out.hi = a.hi + b.hi;
  out.exact_tail = a.exact_tail && b.exact_tail;
  if (!out.exact_tail) {
    long top = Laurent<R>::kEverywhere;
    if (!a.exact_tail) top = std::min(top, static_cast<long>(a.hi) + b.lo);
    if (!b.exact_tail) top = std::min(top, static_cast<long>(b.hi) + a.lo);
    out.hi = static_cast<int>(std::min<long>(out.hi, top));
  }
  for (auto& [ka, ca] : a.coeff)
    for (auto& [kb, cb] : b.coeff) {
      if (ka + kb > out.hi) continue;
      R prod = mul(ca, cb);
      if (prod.is_zero()) continue;
      auto [it, inserted] = out.coeff.try_emplace(ka + kb, prod);
      if (!inserted) {
        it->second = it->second + prod;
        if (it->second.is_zero()) out.coeff.erase(it);
      }
    }
  return out;
}

template <class C>
Laurent<C> laurent_add(const Laurent<C>& a, const Laurent<C>& b) {
  Laurent<C> out = a;
  out.lo = std::min(a.lo, b.lo);
  out.exact_tail = a.exact_tail && b.exact_tail;
  if (out.exact_tail)
    out.hi = std::max(a.hi, b.hi);
  else if (a.exact_tail)
    out.hi = b.hi;
  else if (b.exact_tail)
    out.hi = a.hi;
  else
    out.hi = std::min(a.hi, b.hi);
  for (auto& [k, c] : b.coeff) {
    auto [it, inserted] = out.coeff.try_emplace(k, c);
    if (!inserted) {
      it->second = it->second + c;
      if (it->second.is_zero()) out.coeff.erase(it);
    }
  }
  for (auto it = out.coeff.begin(); it != out.coeff.end();)
    it = (it->first > out.hi) ? out.coeff.erase(it) : std::next(it);
  return out;
}

// Termwise n*c_n at exponent n-1; window shifts down by one.
template <class C>
Laurent<C> laurent_derive_t(const Laurent<C>& s) {
  Laurent<C> out;
  out.lo = s.lo - 1;
  out.hi = s.hi - 1;
  out.exact_tail = s.exact_tail;
  for (auto& [k, c] : s.coeff) {
    if (k == 0) continue;
    out.coeff.emplace(k - 1, c.scaled(Rational(k)));
  }
  return out;
}

// Exact coefficient read used by residue extraction: zero below lo, error
// above the exactness horizon.
template <class C>
C laurent_coeff_sound(const Laurent<C>& s, int k) {
  if (k > s.sound_top())
    raise(Errc::WindowUnderflow,
          "coefficient at t^" + std::to_string(k) + " is beyond the exact window");
  auto it = s.coeff.find(k);
  return it == s.coeff.end() ? C{} : it->second;
}

// --- module operations on scalar series ---

// ev(b^i): sum of b^i_n t^n over the context window.
LaurentSeries ev_series(int chart, const TruncationContext& ctx);

LaurentSeries series_mul(const LaurentSeries& a, const LaurentSeries& b, const TruncationContext& ctx);
LaurentSeries series_scale(const LaurentSeries& s, const Polynomial& c, const TruncationContext& ctx);
inline LaurentSeries series_add(const LaurentSeries& a, const LaurentSeries& b) {
  return laurent_add(a, b);
}
inline LaurentSeries series_derive_t(const LaurentSeries& s) { return laurent_derive_t(s); }

// Declared-window coefficient access; OutsideWindow when k is not in [lo, hi].
Polynomial series_coeff(const LaurentSeries& s, int k);

// Evaluates a polynomial in chart variables on loop series (loops[i-1] is
// substituted for b^i). Also accepts single-point B variables b^i_0 as chart
// coordinates when `loops` is indexed by chart.
LaurentSeries series_compose(const Polynomial& f, const std::vector<LaurentSeries>& loops,
                             const TruncationContext& ctx);

std::string series_render(const LaurentSeries& s);

}  // namespace loopcas

#endif
