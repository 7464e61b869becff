#include "loopcas/factorization.hpp"

#include <algorithm>

#include "loopcas/rng.hpp"

namespace loopcas {

int PointConfig::degree() const {
  int d = 0;
  for (int m : mults) d += m;
  return d;
}

PointConfig PointConfig::distinct_symbolic(int k) {
  PointConfig cfg;
  cfg.mults.assign(static_cast<std::size_t>(k), 1);
  return cfg;
}

PointConfig PointConfig::at_values(std::vector<Rational> vals) {
  PointConfig cfg;
  cfg.mults.assign(vals.size(), 1);
  cfg.values = std::move(vals);
  cfg.validate();
  return cfg;
}

Polynomial PointConfig::root(int i) const {
  if (symbolic()) return Polynomial::var(Variable::lambda(i));
  return Polynomial::constant(values[static_cast<std::size_t>(i - 1)]);
}

void PointConfig::validate() const {
  if (mults.empty()) raise(Errc::BadArgument, "a point configuration needs at least one point");
  for (int m : mults)
    if (m < 1) raise(Errc::BadArgument, "multiplicities must be >= 1");
  if (!symbolic()) {
    if (values.size() != mults.size()) raise(Errc::BadArgument, "one value per configured point");
    for (std::size_t i = 0; i < values.size(); ++i)
      for (std::size_t j = i + 1; j < values.size(); ++j)
        if (values[i] == values[j])
          raise(Errc::PointsNotDistinct, "repeated point " + rat_render(values[i]));
  }
}

namespace {

TPoly tpoly_mul(const TPoly& a, const TPoly& b, const TruncationContext& ctx) {
  TPoly out;
  for (auto& [i, p] : a)
    for (auto& [j, q] : b) {
      Polynomial c = poly_mul(p, q, ctx);
      if (c.is_zero()) continue;
      auto [it, ins] = out.try_emplace(i + j, c);
      if (!ins) {
        it->second = it->second + c;
        if (it->second.is_zero()) out.erase(it);
      }
    }
  return out;
}

TPoly tpoly_linear(const Polynomial& root) {
  TPoly out;
  out.emplace(1, Polynomial::constant(1));
  Polynomial neg = -root;
  if (!neg.is_zero()) out.emplace(0, neg);
  return out;
}

TPoly tpoly_pow(const TPoly& base, int e, const TruncationContext& ctx) {
  TPoly acc{{0, Polynomial::constant(1)}};
  for (int i = 0; i < e; ++i) acc = tpoly_mul(acc, base, ctx);
  return acc;
}

int tpoly_degree(const TPoly& p) { return p.empty() ? -1 : p.rbegin()->first; }

}  // namespace

TPoly config_poly(const PointConfig& cfg, const TruncationContext& ctx) {
  TPoly acc{{0, Polynomial::constant(1)}};
  for (int i = 1; i <= cfg.roots(); ++i)
    acc = tpoly_mul(
        acc, tpoly_pow(tpoly_linear(cfg.root(i)), cfg.mults[static_cast<std::size_t>(i - 1)], ctx), ctx);
  return acc;
}

void PExpr::add(int t_exp, int p_exp, const Polynomial& c) {
  if (c.is_zero()) return;
  auto [it, ins] = terms.try_emplace(std::make_pair(t_exp, p_exp), c);
  if (!ins) {
    it->second = it->second + c;
    if (it->second.is_zero()) terms.erase(it);
  }
}

PExpr PExpr::operator+(const PExpr& o) const {
  PExpr out = *this;
  for (auto& [k, c] : o.terms) out.add(k.first, k.second, c);
  return out;
}

PExpr pexpr_mul(const PExpr& a, const PExpr& b, const TruncationContext& ctx) {
  PExpr out;
  for (auto& [ka, ca] : a.terms)
    for (auto& [kb, cb] : b.terms) {
      Polynomial c = poly_mul(ca, cb, ctx);
      if (!c.is_zero()) out.add(ka.first + kb.first, ka.second + kb.second, c);
    }
  return out;
}

PExpr pexpr_derive_t(const PExpr& a, const PointConfig& cfg, const TruncationContext& ctx) {
  TPoly p = config_poly(cfg, ctx);
  TPoly dp;
  for (auto& [j, c] : p)
    if (j != 0) dp[j - 1] = c.scaled(Rational(j));
  PExpr out;
  for (auto& [k, c] : a.terms) {
    auto [t_exp, p_exp] = k;
    if (t_exp != 0) out.add(t_exp - 1, p_exp, c.scaled(Rational(t_exp)));
    if (p_exp != 0)
      for (auto& [j, pc] : dp) out.add(t_exp + j, p_exp - 1, poly_mul(c, pc, ctx).scaled(Rational(p_exp)));
  }
  return out;
}

PExpr global_loop_series(int chart, const PointConfig& cfg, const TruncationContext& ctx,
                         const VarKeep* keep) {
  PExpr out;
  int q = cfg.degree();
  for (int n = -ctx.neg_window; n <= ctx.pos_window; ++n)
    for (int nu = 1; nu <= q; ++nu) {
      if (keep && std::find(keep->begin(), keep->end(), std::make_pair(n, nu)) == keep->end()) continue;
      Polynomial v = poly_reduce(Polynomial::var(Variable::b(chart, n, nu)), ctx);
      if (!v.is_zero()) out.add(nu - 1, n, v);
    }
  return out;
}

PExpr global_pullback(const XForm& eta, const PointConfig& cfg, const TruncationContext& ctx,
                      const VarKeep* keep) {
  if (eta.degree() != 1) raise(Errc::BadArgument, "the pullback takes a 1-form");
  std::vector<PExpr> loops;
  for (int j = 1; j <= ctx.charts; ++j) loops.push_back(global_loop_series(j, cfg, ctx, keep));

  std::map<std::pair<int, int>, PExpr> powers;
  auto loop_pow = [&](int chart, int e) -> const PExpr& {
    auto key = std::make_pair(chart, e);
    auto it = powers.find(key);
    if (it != powers.end()) return it->second;
    PExpr acc;
    acc.add(0, 0, Polynomial::constant(1));
    for (int i = 0; i < e; ++i) acc = pexpr_mul(acc, loops[static_cast<std::size_t>(chart - 1)], ctx);
    return powers.emplace(key, std::move(acc)).first->second;
  };

  PExpr out;
  for (int i = 1; i <= ctx.charts; ++i) {
    Polynomial fi = eta.coefficient_1(i);
    if (fi.is_zero()) continue;
    PExpr fi_of_b;
    for (auto& [m, c] : fi.terms()) {
      PExpr acc;
      acc.add(0, 0, Polynomial::constant(c));
      for (auto& [v, e] : m.factors()) {
        if (v.family != Family::Chart)
          raise(Errc::BadArgument, "pullback coefficients must be chart polynomials");
        acc = pexpr_mul(acc, loop_pow(v.chart, e), ctx);
      }
      fi_of_b = fi_of_b + acc;
    }
    out = out + pexpr_mul(fi_of_b, pexpr_derive_t(loops[static_cast<std::size_t>(i - 1)], cfg, ctx), ctx);
  }
  return out;
}

namespace {

// Power-series coefficients of prod_i (1 - root_i u)^{-d k_i} up to `order`.
std::vector<Polynomial> infinity_series(const PointConfig& cfg, int d, int order,
                                        const TruncationContext& ctx) {
  std::vector<Polynomial> acc(static_cast<std::size_t>(order + 1));
  acc[0] = Polynomial::constant(1);
  for (int i = 1; i <= cfg.roots(); ++i) {
    int e = d * cfg.mults[static_cast<std::size_t>(i - 1)];
    std::vector<Polynomial> factor(static_cast<std::size_t>(order + 1));
    Polynomial r = cfg.root(i);
    Polynomial rp = Polynomial::constant(1);
    for (int k = 0; k <= order; ++k) {
      factor[static_cast<std::size_t>(k)] = rp.scaled(rat_binomial(e - 1 + k, k));
      if (k < order) rp = poly_mul(rp, r, ctx);
    }
    std::vector<Polynomial> next(static_cast<std::size_t>(order + 1));
    for (int x = 0; x <= order; ++x) {
      if (acc[static_cast<std::size_t>(x)].is_zero()) continue;
      for (int y = 0; x + y <= order; ++y) {
        if (factor[static_cast<std::size_t>(y)].is_zero()) continue;
        next[static_cast<std::size_t>(x + y)] =
            next[static_cast<std::size_t>(x + y)] +
            poly_mul(acc[static_cast<std::size_t>(x)], factor[static_cast<std::size_t>(y)], ctx);
      }
    }
    acc = std::move(next);
  }
  return acc;
}

}  // namespace

Polynomial total_residue(const PExpr& g, const PointConfig& cfg, const TruncationContext& ctx) {
  int D = cfg.degree();
  std::map<int, int> order_by_d;
  for (auto& [k, c] : g.terms) {
    auto [a, e] = k;
    if (e >= 0) {
      if (a < 0)
        raise(Errc::ExpansionOrderExceeded,
              "unexpected pole away from the configured points (t^" + std::to_string(a) + ")");
      continue;
    }
    int r = a + D * e + 1;
    if (r >= 0) {
      auto [it, ins] = order_by_d.try_emplace(-e, r);
      if (!ins) it->second = std::max(it->second, r);
    }
  }
  Polynomial out;
  for (auto& [d, order] : order_by_d) {
    std::vector<Polynomial> series = infinity_series(cfg, d, order, ctx);
    for (auto& [k, c] : g.terms) {
      auto [a, e] = k;
      if (e != -d) continue;
      int r = a + D * e + 1;
      if (r < 0) continue;
      if (r > order) raise(Errc::ExpansionOrderExceeded, "expansion order bound miscomputed");
      out = out + poly_mul(c, series[static_cast<std::size_t>(r)], ctx);
    }
  }
  return poly_reduce(out, ctx);
}

namespace {

// (base + s)^e as a power series in s up to `order`; for e < 0 the base must
// be a nonzero rational (exact geometric expansion).
std::vector<Rational> shifted_power_series(const Rational& base, int e, int order) {
  std::vector<Rational> out(static_cast<std::size_t>(order + 1), Rational(0));
  if (e >= 0) {
    for (int k = 0; k <= std::min(e, order); ++k) {
      Rational bpow = 1;
      for (int j = 0; j < e - k; ++j) bpow *= base;
      out[static_cast<std::size_t>(k)] = rat_binomial(e, k) * bpow;
    }
    return out;
  }
  if (base == 0) raise(Errc::BadArgument, "cannot invert a zero base");
  Rational base_pow = 1;
  for (int j = 0; j < -e; ++j) base_pow /= base;
  Rational inv_base = Rational(1) / base;
  Rational s_pow = 1;
  for (int k = 0; k <= order; ++k) {
    out[static_cast<std::size_t>(k)] = base_pow * rat_binomial(e, k) * s_pow;
    s_pow *= inv_base;
  }
  return out;
}

std::vector<Rational> series_mul_trunc(const std::vector<Rational>& a, const std::vector<Rational>& b,
                                       int order) {
  std::vector<Rational> out(static_cast<std::size_t>(order + 1), Rational(0));
  for (int i = 0; i <= order; ++i) {
    if (a[static_cast<std::size_t>(i)] == 0) continue;
    for (int j = 0; i + j <= order; ++j)
      out[static_cast<std::size_t>(i + j)] += a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)];
  }
  return out;
}

}  // namespace

Polynomial local_residue(const PExpr& g, const PointConfig& cfg, int point,
                         const TruncationContext& ctx) {
  cfg.validate();
  if (cfg.symbolic()) raise(Errc::BadArgument, "local residues need rational points");
  for (int m : cfg.mults)
    if (m != 1) raise(Errc::BadArgument, "local residues need simple points");
  Rational here = cfg.values[static_cast<std::size_t>(point - 1)];

  Polynomial out;
  for (auto& [k, c] : g.terms) {
    auto [a, e] = k;
    if (e >= 0) continue;
    int order = -e - 1;
    std::vector<Rational> acc(static_cast<std::size_t>(order + 1), Rational(0));
    acc[0] = Rational(1);
    for (int j = 1; j <= cfg.roots(); ++j) {
      if (j == point) continue;
      acc = series_mul_trunc(
          acc, shifted_power_series(here - cfg.values[static_cast<std::size_t>(j - 1)], e, order), order);
    }
    acc = series_mul_trunc(acc, shifted_power_series(here, a, order), order);
    Rational coeff = acc[static_cast<std::size_t>(order)];
    if (coeff != 0) out = out + c.scaled(coeff);
  }
  return poly_reduce(out, ctx);
}

std::map<Variable, Polynomial> expand_at_point(const PointConfig& cfg, int point, int local_hi,
                                               const TruncationContext& ctx) {
  cfg.validate();
  if (cfg.symbolic()) raise(Errc::BadArgument, "re-expansion needs rational points");
  for (int m : cfg.mults)
    if (m != 1) raise(Errc::BadArgument, "re-expansion needs simple points");
  Rational here = cfg.values[static_cast<std::size_t>(point - 1)];
  int q = cfg.degree();

  std::map<Variable, Polynomial> out;
  for (int j = 1; j <= ctx.charts; ++j)
    for (int m = -ctx.neg_window; m <= local_hi; ++m) out.emplace(Variable::b(j, m), Polynomial{});

  for (int n = -ctx.neg_window; n <= ctx.pos_window; ++n) {
    int order = local_hi - n;
    if (order < 0) continue;
    std::vector<Rational> qpow(static_cast<std::size_t>(order + 1), Rational(0));
    qpow[0] = Rational(1);
    for (int i = 1; i <= cfg.roots(); ++i) {
      if (i == point) continue;
      qpow = series_mul_trunc(
          qpow, shifted_power_series(here - cfg.values[static_cast<std::size_t>(i - 1)], n, order), order);
    }
    for (int nu = 1; nu <= q; ++nu) {
      std::vector<Rational> total =
          series_mul_trunc(qpow, shifted_power_series(here, nu - 1, order), order);
      for (int r = 0; r <= order; ++r) {
        Rational c = total[static_cast<std::size_t>(r)];
        if (c == 0) continue;
        int m = n + r;
        for (int j = 1; j <= ctx.charts; ++j) {
          Polynomial var = poly_reduce(Polynomial::var(Variable::b(j, n, nu)), ctx);
          if (var.is_zero()) continue;
          auto it = out.find(Variable::b(j, m));
          if (it != out.end()) it->second = it->second + var.scaled(c);
        }
      }
    }
  }
  return out;
}

int Merge::target_count() const {
  int r = 0;
  for (int i : image) r = std::max(r, i);
  return r;
}

std::vector<int> Merge::target_mults() const {
  std::vector<int> mults(static_cast<std::size_t>(target_count()), 0);
  for (int i : image) mults[static_cast<std::size_t>(i - 1)] += 1;
  return mults;
}

Polynomial restrict_diagonal(const Polynomial& f, const Merge& merge, const TruncationContext& ctx) {
  std::map<Variable, Polynomial> subst;
  for (std::size_t j = 0; j < merge.image.size(); ++j)
    subst.emplace(Variable::lambda(static_cast<int>(j + 1)),
                  Polynomial::var(Variable::lambda(merge.image[j])));
  return poly_subst_partial(f, subst, ctx);
}

namespace {

// q(t) = sum_m r_m(t) P^m with deg r_m < deg P; P is monic.
std::map<int, TPoly> divide_by_config(TPoly q, const TPoly& P, const TruncationContext& ctx) {
  std::map<int, TPoly> out;
  int degP = tpoly_degree(P);
  int m = 0;
  while (!q.empty()) {
    TPoly quot;
    TPoly cur = std::move(q);
    while (tpoly_degree(cur) >= degP) {
      int lead = tpoly_degree(cur);
      Polynomial lc = cur.rbegin()->second;
      auto [qit, qins] = quot.try_emplace(lead - degP, lc);
      if (!qins) qit->second = qit->second + lc;
      for (auto& [j, pc] : P) {
        Polynomial sub = poly_mul(lc, pc, ctx);
        if (sub.is_zero()) continue;
        auto [it, ins] = cur.try_emplace(lead - degP + j, -sub);
        if (!ins) {
          it->second = it->second - sub;
          if (it->second.is_zero()) cur.erase(it);
        }
      }
    }
    if (!cur.empty()) out.emplace(m, std::move(cur));
    q = std::move(quot);
    ++m;
  }
  return out;
}

}  // namespace

DiagonalReindex diagonal_reindex(const Merge& merge, int target_neg, int target_pos,
                                 const TruncationContext& ctx) {
  DiagonalReindex out;
  out.target_neg = target_neg;
  out.target_pos = target_pos;

  std::vector<int> kmults = merge.target_mults();
  int r = merge.target_count();
  int q = static_cast<int>(merge.image.size());

  PointConfig target = PointConfig::distinct_symbolic(r);
  TPoly PI = config_poly(target, ctx);

  int w = 0;
  for (int k : kmults) w = std::max(w, k - 1);
  TPoly Q{{0, Polynomial::constant(1)}}, R{{0, Polynomial::constant(1)}};
  for (int i = 1; i <= r; ++i) {
    TPoly lin = tpoly_linear(Polynomial::var(Variable::lambda(i)));
    Q = tpoly_mul(Q, tpoly_pow(lin, kmults[static_cast<std::size_t>(i - 1)] - 1, ctx), ctx);
    R = tpoly_mul(R, tpoly_pow(lin, w - (kmults[static_cast<std::size_t>(i - 1)] - 1), ctx), ctx);
  }

  for (int n = -ctx.neg_window; n <= ctx.pos_window; ++n) {
    for (int nu = 1; nu <= q; ++nu) {
      TPoly prefactor{{nu - 1, Polynomial::constant(1)}};
      int base;
      if (n >= 0) {
        prefactor = tpoly_mul(prefactor, tpoly_pow(Q, n, ctx), ctx);
        base = n;
      } else {
        prefactor = tpoly_mul(prefactor, tpoly_pow(R, -n, ctx), ctx);
        base = n * (1 + w);
      }
      auto pieces = divide_by_config(std::move(prefactor), PI, ctx);
      bool sound = true;
      for (auto& [j, rem] : pieces) {
        int m = base + j;
        if (m < -target_neg || m > target_pos) sound = false;
      }
      if (!sound) continue;
      out.sound_sources.emplace_back(n, nu);
      for (auto& [j, rem] : pieces) {
        int m = base + j;
        for (auto& [texp, coeff] : rem) out.image[{m, texp + 1}].emplace_back(n, nu, coeff);
      }
    }
  }
  return out;
}

namespace {

std::string first_term(const Polynomial& p) {
  if (p.is_zero()) return "0";
  auto it = p.terms().begin();
  return rat_render(it->second) + "*" + it->first.render();
}

std::map<Variable, Polynomial> lambda_values_subst(const std::vector<Rational>& vals) {
  std::map<Variable, Polynomial> subst;
  for (std::size_t i = 0; i < vals.size(); ++i)
    subst.emplace(Variable::lambda(static_cast<int>(i + 1)), Polynomial::constant(vals[i]));
  return subst;
}

// Map b[j,m] (single-point) onto b[j,m,1] so one-point global functions can
// be compared against transgressions.
Polynomial rename_to_point1(const Polynomial& f, const TruncationContext& ctx) {
  std::map<Variable, Polynomial> subst;
  for (auto& v : f.support())
    if (v.family == Family::B && v.point == 0)
      subst.emplace(v, Polynomial::var(Variable::b(v.chart, v.mode, 1)));
  return poly_subst_partial(f, subst, ctx);
}

Polynomial zero_negative_modes(const Polynomial& f, const TruncationContext& ctx) {
  std::map<Variable, Polynomial> subst;
  for (auto& v : f.support())
    if (v.is_neg_b()) subst.emplace(v, Polynomial{});
  return poly_subst_partial(f, subst, ctx);
}

// Evaluates the single-point function on the local coordinates of every
// point and sums; this is the splitting side of the off-diagonal identity.
Polynomial sum_over_points(const Polynomial& f, const PointConfig& cfg, int local_hi,
                           const TruncationContext& ctx) {
  Polynomial total;
  for (int i = 1; i <= cfg.roots(); ++i) {
    auto coords = expand_at_point(cfg, i, local_hi, ctx);
    // f may legitimately involve modes outside [-M, local_hi]; those local
    // coordinates are zero in the window quotient.
    std::map<Variable, Polynomial> assign = coords;
    for (auto& v : f.support())
      if (!assign.count(v)) assign.emplace(v, Polynomial{});
    total = total + poly_subst(f, assign, ctx);
  }
  return total;
}

// The pullback coefficient degree (factors per residue tuple) drives the
// sound local window and the lambda-degree bounds.
int coefficient_factor_count(const XForm& eta) {
  int deg = 0;
  for (auto& [key, p] : eta.form().terms()) deg = std::max(deg, p.degree());
  return deg + 1;
}

// Distinct small rationals for sample configurations.
std::vector<Rational> distinct_values(SeededRng& rng, int k) {
  std::vector<Rational> vals;
  while (static_cast<int>(vals.size()) < k) {
    Rational v(rng.range(-8, 8), rng.range(1, 3));
    bool fresh = true;
    for (auto& u : vals) fresh = fresh && !(u == v);
    if (fresh) vals.push_back(v);
  }
  return vals;
}

TruncationContext with_pos_window(const TruncationContext& ctx, int pos) {
  TruncationContext out = ctx;
  out.pos_window = pos;
  return out;
}

}  // namespace

Report verify_factorizing(const XForm& eta, const TruncationContext& ctx, int sample_count,
                          int j_max, std::uint64_t seed) {
  Report rep;
  rep.job = "verify-factorization";
  if (eta.degree() != 1) raise(Errc::BadArgument, "factorization checks take a 1-form");
  if (j_max < 2 || j_max > 3) raise(Errc::BadArgument, "j_max must be 2 or 3");
  SeededRng rng(seed);

  int d = coefficient_factor_count(eta);
  // single-point function, on a window wide enough that evaluation on local
  // coordinates reproduces local residues exactly
  int local_hi = std::max(ctx.pos_window, (d - 1) * ctx.neg_window);
  TruncationContext ctx1 = with_pos_window(ctx, local_hi);
  Polynomial f = transgress_function(eta, ctx1).value;

  // K-invariance of the single-point function
  {
    std::vector<CoordChange> changes;
    for (int s = 0; s < 3; ++s) {
      CoordChange cc;
      cc.a.push_back(rng.nonzero_rational());
      cc.a.push_back(rng.small_rational());
      cc.a.push_back(rng.small_rational());
      changes.push_back(std::move(cc));
    }
    Report inv = check_reparam_invariance(f, 2, changes, ctx1);
    rep.absorb(inv, "invariance.");
  }

  // one-point global function: no lambda dependence, and it reduces to the
  // transgression under renaming
  {
    PointConfig one = PointConfig::distinct_symbolic(1);
    Polynomial F1 = total_residue(global_pullback(eta, one, ctx), one, ctx);
    bool lam_free = F1.max_lambda_degree() == 0;
    rep.add("translation.k1.lambda-free", "one-point-translation-equivariance", lam_free,
            lam_free ? "" : first_term(F1));
    Polynomial tau = rename_to_point1(transgress_function(eta, ctx).value, ctx);
    rep.add("reduction.k1", "one-point-reduces-to-transgression", F1 == tau,
            F1 == tau ? "" : first_term(F1 - tau));
    PointConfig at0 = PointConfig::at_values({Rational(0)});
    Polynomial F1_at0 = total_residue(global_pullback(eta, at0, ctx), at0, ctx);
    rep.add("reduction.k1.lam0", "one-point-at-zero", F1_at0 == tau,
            F1_at0 == tau ? "" : first_term(F1_at0 - tau));
  }

  // multi-point functions with symbolic points
  std::map<int, Polynomial> FJ;
  for (int q = 2; q <= j_max; ++q) {
    PointConfig cfg = PointConfig::distinct_symbolic(q);
    FJ[q] = total_residue(global_pullback(eta, cfg, ctx), cfg, ctx);
  }

  // arcs-vanishing sanity of every computed global function
  for (auto& [q, F] : FJ) {
    bool zero_const = F.constant_term() == 0;
    Polynomial on_arcs = zero_negative_modes(F, ctx);
    bool vanishes = zero_const && on_arcs.is_zero();
    rep.add("vanishing.J" + std::to_string(q), "vanishes-on-arcs", vanishes,
            vanishes ? "" : first_term(on_arcs));
  }

  // diagonal restrictions
  auto diagonal_check = [&](const Merge& merge, const std::string& id) {
    int q = static_cast<int>(merge.image.size());
    int r = merge.target_count();
    DiagonalReindex re;
    PointConfig target_cfg;
    TruncationContext tctx = ctx;
    if (r == 1) {
      // total merges map the window bijectively
      re = diagonal_reindex(merge, q * ctx.neg_window, q * ctx.pos_window + q - 1, ctx);
      tctx.neg_window = q * ctx.neg_window;
      tctx.pos_window = q * ctx.pos_window + q - 1;
    } else {
      re = diagonal_reindex(merge, ctx.neg_window, ctx.pos_window, ctx);
    }
    target_cfg = PointConfig::distinct_symbolic(r);
    Polynomial F_target = total_residue(global_pullback(eta, target_cfg, tctx), target_cfg, tctx);

    // substitute the reindexing into the target function
    std::map<Variable, Polynomial> phi;
    for (int j = 1; j <= ctx.charts; ++j) {
      for (auto& [key, combo] : re.image) {
        auto [m, mu] = key;
        Polynomial img;
        for (auto& [n, nu, coeff] : combo)
          img = img + poly_mul(coeff, Polynomial::var(Variable::b(j, n, nu)), ctx);
        phi.emplace(Variable::b(j, m, mu), img);
      }
    }
    std::map<Variable, Polynomial> assign = phi;
    for (auto& v : F_target.support())
      if (!assign.count(v)) {
        if (v.family == Family::Lambda)
          assign.emplace(v, Polynomial::var(v));
        else
          assign.emplace(v, Polynomial{});  // outside the sound image: zero
      }
    Polynomial lhs = poly_subst(F_target, assign, ctx);

    // degenerate source pullback restricted to the sound variables
    PointConfig degenerate;
    degenerate.mults = merge.target_mults();
    Polynomial rhs =
        total_residue(global_pullback(eta, degenerate, ctx, &re.sound_sources), degenerate, ctx);

    bool pass = lhs == rhs;
    rep.add(id, "diagonal-restriction", pass, pass ? "" : first_term(lhs - rhs));
  };

  diagonal_check(Merge{{1, 1}}, "diagonal.2to1");
  if (j_max >= 3) {
    diagonal_check(Merge{{1, 1, 1}}, "diagonal.3to1");
    diagonal_check(Merge{{1, 1, 2}}, "diagonal.3to2.m12");
    diagonal_check(Merge{{1, 2, 1}}, "diagonal.3to2.m13");
    diagonal_check(Merge{{1, 2, 2}}, "diagonal.3to2.m23");

    // merge compatibility: 3 -> 2 -> 1 agrees with the direct 3 -> 1 merge
    std::map<Variable, Polynomial> lam21{{Variable::lambda(2), Polynomial::var(Variable::lambda(1))}};
    Polynomial via321 = poly_subst_partial(restrict_diagonal(FJ[3], Merge{{1, 1, 2}}, ctx), lam21, ctx);
    Polynomial direct = restrict_diagonal(FJ[3], Merge{{1, 1, 1}}, ctx);
    bool compat = via321 == direct;
    rep.add("merge-compat.3to2to1", "merge-compatibility", compat,
            compat ? "" : first_term(via321 - direct));
  }

  // off-diagonal splitting with grid certification at |J| = 2
  {
    const Polynomial& F2 = FJ[2];
    long lhs_deg = F2.max_lambda_degree();
    long s_bound = static_cast<long>(d) * (local_hi + 2L * ctx.neg_window);
    long numer = static_cast<long>(d) * (local_hi + 2L * ctx.neg_window + 2);
    int D = static_cast<int>(std::max(lhs_deg + s_bound, numer));
    bool pass = true;
    std::string witness;
    long checked = 0;
    for (int row = 0; row <= D && pass; ++row) {
      int taken = 0;
      for (int col = 0; taken <= D && pass; ++col) {
        if (col == row) continue;
        ++taken;
        PointConfig cfg = PointConfig::at_values({Rational(row), Rational(col)});
        Polynomial lhs = poly_subst_partial(F2, lambda_values_subst(cfg.values), ctx);
        Polynomial rhs = sum_over_points(f, cfg, local_hi, ctx);
        ++checked;
        if (!(lhs == rhs)) {
          pass = false;
          witness = "lam=(" + std::to_string(row) + "," + std::to_string(col) + "): " +
                    first_term(lhs - rhs);
        }
      }
    }
    rep.add("offdiagonal.2.grid", "splitting-identity-certified", pass, witness);
    rep.add("offdiagonal.2.grid-size", "degree-counting-sample-bound", checked >= (D + 1) * (D + 1),
            "");
  }

  // sampled off-diagonal splitting and pipeline agreement
  for (int q = 2; q <= j_max; ++q) {
    for (int s = 0; s < sample_count; ++s) {
      PointConfig cfg = PointConfig::at_values(distinct_values(rng, q));
      std::string where;
      for (auto& v : cfg.values) where += (where.empty() ? "" : ",") + rat_render(v);
      Polynomial lhs = poly_subst_partial(FJ[q], lambda_values_subst(cfg.values), ctx);

      Polynomial rhs = sum_over_points(f, cfg, local_hi, ctx);
      bool pass = lhs == rhs;
      rep.add("offdiagonal." + std::to_string(q) + ".sample" + std::to_string(s),
              "splitting-identity", pass, pass ? "" : "lam=(" + where + "): " + first_term(lhs - rhs));

      PExpr g = global_pullback(eta, cfg, ctx);
      Polynomial local_sum;
      for (int i = 1; i <= q; ++i) local_sum = local_sum + local_residue(g, cfg, i, ctx);
      Polynomial total = total_residue(g, cfg, ctx);
      bool pipe = local_sum == total;
      rep.add("pipeline." + std::to_string(q) + ".sample" + std::to_string(s),
              "residue-sum-equals-infinity-expansion", pipe,
              pipe ? "" : "lam=(" + where + "): " + first_term(local_sum - total));
    }
  }

  return rep;
}

Report verify_factorizing_candidate(const Polynomial& candidate, const TruncationContext& ctx,
                                    int sample_count, std::uint64_t seed) {
  Report rep;
  rep.job = "verify-factorization";
  SeededRng rng(seed);

  std::vector<CoordChange> changes;
  for (int s = 0; s < 3; ++s) {
    CoordChange cc;
    cc.a.push_back(rng.nonzero_rational());
    cc.a.push_back(rng.small_rational());
    changes.push_back(std::move(cc));
  }
  Report inv = check_reparam_invariance(candidate, 2, changes, ctx);
  rep.absorb(inv, "invariance.");

  // Splitting-extension test at |J| = 2: the sum of local evaluations must
  // be a polynomial in lam2 of bounded degree (the degree any global
  // two-point function produced by the residue pipeline can have).
  int d = candidate.degree();
  int local_hi = std::max(ctx.pos_window, std::max(1, d - 1) * ctx.neg_window);
  long D = static_cast<long>(std::max(1, d)) * (local_hi + 2L * ctx.neg_window + 2);

  auto value_at = [&](const Rational& x) {
    PointConfig cfg = PointConfig::at_values({Rational(0), x});
    Polynomial total;
    for (int i = 1; i <= 2; ++i) {
      auto coords = expand_at_point(cfg, i, local_hi, ctx);
      std::map<Variable, Polynomial> assign = coords;
      for (auto& v : candidate.support())
        if (!assign.count(v)) assign.emplace(v, Polynomial{});
      total = total + poly_subst(candidate, assign, ctx);
    }
    return total;
  };

  // interpolation nodes 1..D+1, validation nodes beyond
  std::vector<Rational> nodes;
  std::vector<Polynomial> values;
  for (long x = 1; x <= D + 1; ++x) {
    nodes.emplace_back(x);
    values.push_back(value_at(Rational(x)));
  }
  int validations = std::max(2, sample_count);
  bool pass = true;
  std::string witness;
  for (int v = 0; v < validations && pass; ++v) {
    Rational x(D + 2 + v);
    // Lagrange evaluation of the degree-D interpolant at x
    Polynomial predicted;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      Rational weight = 1;
      for (std::size_t j = 0; j < nodes.size(); ++j) {
        if (i == j) continue;
        weight *= (x - nodes[j]) / (nodes[i] - nodes[j]);
      }
      predicted = predicted + values[i].scaled(weight);
    }
    Polynomial actual = value_at(x);
    if (!(predicted == actual)) {
      pass = false;
      witness = "lam2=" + rat_render(x) + ": " + first_term(predicted - actual);
    }
  }
  rep.add("extension.2", "two-point-polynomial-extension", pass, witness);

  return rep;
}

}  // namespace loopcas
