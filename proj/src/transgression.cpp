#include "loopcas/transgression.hpp"

#include <algorithm>

namespace loopcas {

XForm::XForm(DifferentialForm f) : form_(std::move(f)) {
  if (form_.degree() < 0 || form_.degree() > 2)
    raise(Errc::BadArgument, "base forms of degree 0..2 only");
  for (auto& [key, p] : form_.terms()) {
    for (auto& v : key)
      if (v.family != Family::Chart) raise(Errc::BadArgument, "base form differentials must be chart variables");
    for (auto& [m, c] : p.terms())
      for (auto& [v, e] : m.factors())
        if (v.family != Family::Chart)
          raise(Errc::BadArgument, "base form coefficients must be chart polynomials");
  }
}

bool XForm::is_closed(const TruncationContext& ctx) const {
  return derham_d(form_, ctx).is_zero();
}

Polynomial XForm::h(int i, int j) const {
  if (degree() != 2) raise(Errc::BadArgument, "h accessor needs a degree-2 form");
  if (i == j) return Polynomial{};
  DifferentialForm::Key key{Variable::chart_coord(std::min(i, j)), Variable::chart_coord(std::max(i, j))};
  auto it = form_.terms().find(key);
  if (it == form_.terms().end()) return Polynomial{};
  return i < j ? it->second : -it->second;
}

Polynomial XForm::coefficient_1(int i) const {
  if (degree() != 1) raise(Errc::BadArgument, "coefficient_1 needs a degree-1 form");
  auto it = form_.terms().find(DifferentialForm::Key{Variable::chart_coord(i)});
  return it == form_.terms().end() ? Polynomial{} : it->second;
}

XForm XForm::d_of(const XForm& f, const TruncationContext& ctx) {
  return XForm(derham_d(f.form(), ctx));
}

LoopFunction LoopFunction::of(Polynomial p, const TruncationContext& ctx) {
  LoopFunction lf;
  lf.value = poly_reduce(p, ctx);
  lf.relative = !lf.value.is_zero();
  for (auto& [m, c] : lf.value.terms())
    if (m.neg_b_degree() == 0) lf.relative = false;
  return lf;
}

namespace {

// dR(s): the Laurent series of total differentials of the coefficients.
FormSeries series_dR(const LaurentSeries& s, const TruncationContext& ctx) {
  FormSeries out;
  out.lo = s.lo;
  out.hi = s.hi;
  out.exact_tail = s.exact_tail;
  for (auto& [k, p] : s.coeff) {
    DifferentialForm df(1, Universe::Loop);
    for (auto& v : p.support()) {
      if (!differentiable_in(v, Universe::Loop)) continue;
      Polynomial dp = poly_derive(p, v);
      df.add_term({v}, dp);
    }
    if (!df.is_zero()) out.coeff.emplace(k, std::move(df));
  }
  return out;
}

FormSeries to_form_series(const LaurentSeries& s) {
  FormSeries out;
  out.lo = s.lo;
  out.hi = s.hi;
  out.exact_tail = s.exact_tail;
  for (auto& [k, p] : s.coeff) out.coeff.emplace(k, DifferentialForm::scalar(p, Universe::Loop));
  return out;
}

FormSeries fs_scale(const FormSeries& a, const LaurentSeries& b, const TruncationContext& ctx) {
  return laurent_mul<DifferentialForm, Polynomial, DifferentialForm>(
      a, b, [&](const DifferentialForm& f, const Polynomial& p) { return form_scale(f, p, ctx); });
}

FormSeries fs_wedge(const FormSeries& a, const FormSeries& b, const TruncationContext& ctx) {
  return laurent_mul<DifferentialForm, DifferentialForm, DifferentialForm>(
      a, b, [&](const DifferentialForm& x, const DifferentialForm& y) { return wedge(x, y, ctx); });
}

}  // namespace

DifferentialForm residue_p(const std::vector<ResidueTerm>& terms, const TruncationContext& ctx) {
  if (terms.empty()) return DifferentialForm(0, Universe::Loop);
  std::size_t p = terms.front().da.size();
  if (p < 1) raise(Errc::BadArgument, "residue needs at least one differential slot");
  DifferentialForm total(static_cast<int>(p) - 1, Universe::Loop);
  for (auto& term : terms) {
    if (term.da.size() != p) raise(Errc::BadArgument, "mixed residue degrees in one sum");
    for (std::size_t i = 1; i <= p; ++i) {
      FormSeries acc = to_form_series(term.a0);
      for (std::size_t j = 1; j <= p; ++j) {
        if (j == i)
          acc = fs_scale(acc, series_derive_t(term.da[j - 1]), ctx);
        else
          acc = fs_wedge(acc, series_dR(term.da[j - 1], ctx), ctx);
        if (acc.coeff.empty() && acc.exact_tail) break;
      }
      DifferentialForm c = laurent_coeff_sound(acc, -1);
      if ((p - i) % 2 == 1) c = c.scaled(Rational(-1));
      total = total + c;
    }
  }
  return form_reduce(total, ctx);
}

std::vector<ResidueTerm> residue_d(const std::vector<ResidueTerm>& terms) {
  std::vector<ResidueTerm> out;
  for (auto& t : terms) {
    ResidueTerm d;
    d.a0.set(0, Polynomial::constant(1));
    d.a0.lo = 0;
    d.a0.hi = 0;
    d.da.reserve(t.da.size() + 1);
    d.da.push_back(t.a0);
    d.da.insert(d.da.end(), t.da.begin(), t.da.end());
    out.push_back(std::move(d));
  }
  return out;
}

LaurentSeries series_shift(const LaurentSeries& s, int m) {
  LaurentSeries out;
  out.lo = s.lo + m;
  out.hi = s.hi + m;
  out.exact_tail = s.exact_tail;
  for (auto& [k, c] : s.coeff) out.coeff.emplace(k + m, c);
  return out;
}

std::vector<ResidueTerm> residue_lie(const std::vector<ResidueTerm>& terms, int m,
                                     const TruncationContext& ctx) {
  auto xi = [&](const LaurentSeries& s) { return series_shift(series_derive_t(s), m); };
  std::vector<ResidueTerm> out;
  for (auto& t : terms) {
    ResidueTerm lead = t;
    lead.a0 = xi(t.a0);
    out.push_back(std::move(lead));
    for (std::size_t i = 0; i < t.da.size(); ++i) {
      ResidueTerm slot = t;
      slot.da[i] = xi(t.da[i]);
      out.push_back(std::move(slot));
    }
  }
  return out;
}

DifferentialForm transgress(const XForm& w, const TruncationContext& ctx) {
  if (w.degree() != 1 && w.degree() != 2)
    raise(Errc::BadArgument, "transgression is defined for degrees 1 and 2");
  std::vector<LaurentSeries> loops;
  loops.reserve(static_cast<std::size_t>(ctx.charts));
  for (int i = 1; i <= ctx.charts; ++i) loops.push_back(ev_series(i, ctx));

  std::vector<ResidueTerm> terms;
  if (w.degree() == 1) {
    for (int i = 1; i <= ctx.charts; ++i) {
      Polynomial f = w.coefficient_1(i);
      if (f.is_zero()) continue;
      ResidueTerm t;
      t.a0 = series_compose(f, loops, ctx);
      t.da = {loops[static_cast<std::size_t>(i - 1)]};
      terms.push_back(std::move(t));
    }
    if (terms.empty()) return DifferentialForm(0, Universe::Loop);
  } else {
    for (auto& [key, p] : w.form().terms()) {
      int i = key[0].chart, j = key[1].chart;
      ResidueTerm t;
      t.a0 = series_compose(p, loops, ctx);
      t.da = {loops[static_cast<std::size_t>(i - 1)], loops[static_cast<std::size_t>(j - 1)]};
      terms.push_back(std::move(t));
    }
    if (terms.empty()) return DifferentialForm(1, Universe::Loop);
  }
  return residue_p(terms, ctx);
}

LoopFunction transgress_function(const XForm& eta, const TruncationContext& ctx) {
  if (eta.degree() != 1) raise(Errc::BadArgument, "loop functions come from 1-forms");
  return LoopFunction::of(transgress(eta, ctx).scalar_part(), ctx);
}

LoopFunction symplectic_action(const XForm& omega, const TruncationContext& ctx) {
  if (omega.degree() != 2) raise(Errc::BadArgument, "the action functional needs a 2-form");
  if (!omega.is_closed(ctx)) raise(Errc::NotClosed, "the action functional needs a closed form");
  DifferentialForm tau2 = transgress(omega, ctx);
  if (tau2.is_zero()) return LoopFunction{};
  DifferentialForm beta = poincare_inverse(tau2, ctx);
  return LoopFunction::of(beta.scalar_part(), ctx);
}

Polynomial exp_relative(const Polynomial& f, const TruncationContext& ctx) {
  Polynomial acc = Polynomial::constant(1);
  Polynomial power = Polynomial::constant(1);
  Rational fact = 1;
  for (int k = 1; k < ctx.nilpotency; ++k) {
    power = poly_mul(power, f, ctx);
    if (power.is_zero()) break;
    fact *= k;
    acc = acc + power.scaled(1 / fact);
  }
  return acc;
}

LoopFunction exp_action(const XForm& omega, const TruncationContext& ctx) {
  LoopFunction f = symplectic_action(omega, ctx);
  LoopFunction out;
  out.value = exp_relative(f.value, ctx);
  out.relative = false;
  return out;
}

void CoordChange::validate() const {
  if (a.empty() || a[0] == 0) raise(Errc::BadArgument, "leading reparametrization coefficient must be invertible");
}

namespace {

using TPoly = std::map<int, Rational>;  // Laurent polynomial in t, exact up to `top`

TPoly tpoly_mul(const TPoly& x, const TPoly& y, int top) {
  TPoly out;
  for (auto& [i, a] : x)
    for (auto& [j, b] : y) {
      if (i + j > top) continue;
      Rational v = a * b;
      auto [it, ins] = out.try_emplace(i + j, v);
      if (!ins) {
        it->second += v;
        if (it->second == 0) out.erase(it);
      }
    }
  return out;
}

}  // namespace

std::map<Variable, Polynomial> coord_change_substitution(const CoordChange& cc, int chart,
                                                         const TruncationContext& ctx) {
  cc.validate();
  int top = ctx.pos_window;
  // phi and its inverse-power seed 1/phi, truncated at t^top.
  TPoly phi;
  for (std::size_t d = 0; d < cc.a.size(); ++d)
    if (cc.a[d] != 0) phi.emplace(static_cast<int>(d) + 1, cc.a[d]);
  // 1/phi = a1^{-1} t^{-1} * sum_j (-u)^j with u = (phi - a1 t)/(a1 t).
  TPoly u;
  for (auto& [e, c] : phi)
    if (e != 1) u.emplace(e - 1, c / cc.a[0]);
  TPoly inv{{-1, 1 / cc.a[0]}};
  TPoly acc{{0, Rational(1)}};
  TPoly geom{{0, Rational(1)}};
  int order = top + ctx.neg_window + 2;
  for (int j = 1; j <= order; ++j) {
    acc = tpoly_mul(acc, u, order);
    if (acc.empty()) break;
    for (auto& [e, c] : acc) {
      Rational v = (j % 2 == 1 ? -c : c);
      auto [it, ins] = geom.try_emplace(e, v);
      if (!ins) {
        it->second += v;
        if (it->second == 0) geom.erase(it);
      }
    }
  }
  inv = tpoly_mul(inv, geom, top + ctx.neg_window + 1);

  // Later factors of 1/phi can lower the exponent by one each, so negative
  // powers keep intermediate terms above the final window.
  auto power = [&](int k) {
    TPoly acc2{{0, Rational(1)}};
    const TPoly& base = k >= 0 ? phi : inv;
    int slack = k < 0 ? -k : 0;
    for (int i = 0; i < std::abs(k); ++i) acc2 = tpoly_mul(acc2, base, top + slack);
    return acc2;
  };

  std::map<Variable, Polynomial> subst;
  for (int n = -ctx.neg_window; n <= ctx.pos_window; ++n) subst.emplace(Variable::b(chart, n), Polynomial{});
  for (int k = -ctx.neg_window; k <= ctx.pos_window; ++k) {
    TPoly pk = power(k);
    for (auto& [n, c] : pk) {
      if (n < -ctx.neg_window || n > ctx.pos_window) continue;
      auto it = subst.find(Variable::b(chart, n));
      if (it != subst.end())
        it->second = it->second + Polynomial::term(c, Monomial(Variable::b(chart, k)));
    }
  }
  return subst;
}

namespace {

// An output monomial of D_m(f) is sound when every contribution it could
// receive comes from inside the window: each variable's preimage mode
// k + m - 1 must lie in the window, and for m = 0 a b_0 factor pulls in a
// mode -1 preimage whose nilpotency degree must still be representable.
bool dm_sound(const Monomial& mono, int m, const TruncationContext& ctx) {
  for (auto& [v, e] : mono.factors()) {
    if (v.family != Family::B) continue;
    int pre = v.mode + m - 1;
    if (pre < -ctx.neg_window || pre > ctx.pos_window) return false;
    if (m == 0 && v.mode == 0 && mono.neg_b_degree() + 1 >= ctx.nilpotency) return false;
  }
  return true;
}

}  // namespace

Report check_reparam_invariance(const Polynomial& f, int m_max,
                                const std::vector<CoordChange>& samples,
                                const TruncationContext& ctx) {
  Report rep;
  rep.job = "verify-invariance";
  for (int m = 0; m <= m_max; ++m) {
    auto rd = reparam_derive(f, m, ctx);
    std::string witness;
    bool pass = true;
    for (auto& [mono, c] : rd.value.terms()) {
      if (!dm_sound(mono, m, ctx)) continue;
      pass = false;
      witness = rat_render(c) + "*" + mono.render();
      break;
    }
    rep.add("infinitesimal.m" + std::to_string(m), "loop-derivation-invariance", pass, witness);
  }

  int sample_id = 0;
  for (auto& cc : samples) {
    std::map<Variable, Polynomial> subst;
    for (int i = 1; i <= ctx.charts; ++i) {
      auto per_chart = coord_change_substitution(cc, i, ctx);
      subst.insert(per_chart.begin(), per_chart.end());
    }
    Polynomial g = poly_subst_partial(f, subst, ctx);
    Polynomial diff = g - f;
    bool pass = true;
    std::string witness;
    long boundary = 0;
    for (auto& [mono, c] : diff.terms()) {
      long s = mono.mode_sum();
      // Residuals are attributable to the window boundary only if a raise
      // escaping the window could have produced them.
      bool junk = s < 0 && mono.max_b_mode() - s > ctx.pos_window;
      if (junk) {
        ++boundary;
        continue;
      }
      pass = false;
      witness = rat_render(c) + "*" + mono.render();
      break;
    }
    rep.add("finite.sample" + std::to_string(sample_id++), "finite-reparametrization-invariance", pass,
            witness);
    (void)boundary;
  }
  return rep;
}

}  // namespace loopcas
