#include "loopcas/laurent.hpp"

#include <algorithm>

namespace loopcas {

LaurentSeries ev_series(int chart, const TruncationContext& ctx) {
  if (chart < 1 || chart > ctx.charts)
    raise(Errc::ChartOutOfRange, "chart " + std::to_string(chart) + " not in 1.." +
                                     std::to_string(ctx.charts));
  LaurentSeries s;
  s.lo = -ctx.neg_window;
  s.hi = ctx.pos_window;
  s.exact_tail = true;
  for (int n = -ctx.neg_window; n <= ctx.pos_window; ++n) {
    Polynomial c = Polynomial::var(Variable::b(chart, n));
    c = poly_reduce(c, ctx);  // epsilon = 1 kills negative modes outright
    if (!c.is_zero()) s.coeff.emplace(n, std::move(c));
  }
  return s;
}

LaurentSeries series_mul(const LaurentSeries& a, const LaurentSeries& b, const TruncationContext& ctx) {
  return laurent_mul<Polynomial, Polynomial, Polynomial>(
      a, b, [&](const Polynomial& x, const Polynomial& y) { return poly_mul(x, y, ctx); });
}

LaurentSeries series_scale(const LaurentSeries& s, const Polynomial& c, const TruncationContext& ctx) {
  LaurentSeries out;
  out.lo = s.lo;
  out.hi = s.hi;
  out.exact_tail = s.exact_tail;
  for (auto& [k, p] : s.coeff) {
    Polynomial q = poly_mul(p, c, ctx);
    if (!q.is_zero()) out.coeff.emplace(k, std::move(q));
  }
  return out;
}

Polynomial series_coeff(const LaurentSeries& s, int k) {
  if (k < s.lo || k > s.hi)
    raise(Errc::OutsideWindow, "exponent " + std::to_string(k) + " outside window [" +
                                   std::to_string(s.lo) + "," + std::to_string(s.hi) + "]");
  auto it = s.coeff.find(k);
  return it == s.coeff.end() ? Polynomial{} : it->second;
}

LaurentSeries series_compose(const Polynomial& f, const std::vector<LaurentSeries>& loops,
                             const TruncationContext& ctx) {
  LaurentSeries out;
  out.lo = 0;
  out.hi = 0;
  out.exact_tail = true;

  // Memoized powers of each loop series.
  std::map<std::pair<int, int>, LaurentSeries> powers;
  auto loop_pow = [&](int chart, int e) -> const LaurentSeries& {
    auto key = std::make_pair(chart, e);
    auto it = powers.find(key);
    if (it != powers.end()) return it->second;
    LaurentSeries acc;
    acc.set(0, Polynomial::constant(1));
    for (int i = 0; i < e; ++i) acc = series_mul(acc, loops[static_cast<std::size_t>(chart - 1)], ctx);
    return powers.emplace(key, std::move(acc)).first->second;
  };

  for (auto& [m, c] : f.terms()) {
    LaurentSeries acc;
    acc.set(0, Polynomial::constant(c));
    for (auto& [v, e] : m.factors()) {
      int chart = 0;
      if (v.family == Family::Chart)
        chart = v.chart;
      else if (v.family == Family::B && v.mode == 0 && v.point == 0)
        chart = v.chart;
      else
        raise(Errc::BadArgument, "series_compose input must involve chart variables only, got " +
                                     var_render(v));
      if (chart < 1 || chart > static_cast<int>(loops.size()))
        raise(Errc::ChartOutOfRange, "no loop series for chart " + std::to_string(chart));
      acc = series_mul(acc, loop_pow(chart, e), ctx);
      if (acc.is_zero() && acc.exact_tail) break;
    }
    out = series_add(out, acc);
  }
  return out;
}

std::string series_render(const LaurentSeries& s) {
  if (s.coeff.empty()) return "0";
  std::string r;
  for (auto& [k, c] : s.coeff) {
    if (!r.empty()) r += " + ";
    std::string body = c.terms().size() > 1 ? "(" + c.render() + ")" : c.render();
    if (k == 0)
      r += body;
    else
      r += body + "*t^" + std::to_string(k);
  }
  return r;
}

}  // namespace loopcas
