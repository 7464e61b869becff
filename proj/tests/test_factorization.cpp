#include <doctest.h>

#include "loopcas/factorization.hpp"
#include "support.hpp"

using namespace loopcas;

namespace {

TruncationContext fctx(int charts, int M, int L, int eps) {
  TruncationContext ctx;
  ctx.charts = charts;
  ctx.neg_window = M;
  ctx.pos_window = L;
  ctx.nilpotency = eps;
  return ctx;
}

XForm eta_b1_db2() {
  DifferentialForm f(1, Universe::X);
  f.add_term({Variable::chart_coord(2)}, Polynomial::var(Variable::chart_coord(1)));
  return XForm(f);
}

XForm eta_db1() {
  DifferentialForm f(1, Universe::X);
  f.add_term({Variable::chart_coord(1)}, Polynomial::constant(1));
  return XForm(f);
}

Polynomial pairing_sum_point1(int i, int j, const TruncationContext& ctx) {
  Polynomial p;
  int reach = std::min(ctx.neg_window, ctx.pos_window);
  for (int n = -reach; n <= reach; ++n) {
    if (n == 0) continue;
    p.add_term(Monomial(Variable::b(i, -n, 1)).times(Monomial(Variable::b(j, n, 1))), Rational(n));
  }
  return poly_reduce(p, ctx);
}

}  // namespace

TEST_CASE("configurations validate their points") {
  CHECK_THROWS_AS(PointConfig::at_values({Rational(1), Rational(1)}), Error);
  PointConfig ok = PointConfig::at_values({Rational(0), Rational(1)});
  CHECK(ok.degree() == 2);
  PointConfig sym = PointConfig::distinct_symbolic(3);
  CHECK(sym.symbolic());
  CHECK(sym.root(2) == Polynomial::var(Variable::lambda(2)));
}

TEST_CASE("derivatives of structured expressions") {
  auto ctx = fctx(1, 1, 1, 2);
  PointConfig cfg = PointConfig::distinct_symbolic(1);  // P = t - lam1
  PExpr e;
  e.add(0, 1, Polynomial::constant(1));
  PExpr de = pexpr_derive_t(e, cfg, ctx);
  REQUIRE(de.terms.size() == 1);
  CHECK(de.terms.begin()->first == std::make_pair(0, 0));
  CHECK(de.terms.begin()->second == Polynomial::constant(1));

  // d/dt (t P^{-1}) = P^{-1} - t P^{-2}
  PExpr e2;
  e2.add(1, -1, Polynomial::constant(1));
  PExpr de2 = pexpr_derive_t(e2, cfg, ctx);
  Polynomial at_0m1, at_1m2;
  for (auto& [k, c] : de2.terms) {
    if (k == std::make_pair(0, -1)) at_0m1 = c;
    if (k == std::make_pair(1, -2)) at_1m2 = c;
  }
  CHECK(at_0m1 == Polynomial::constant(1));
  CHECK(at_1m2 == Polynomial::constant(-1));
}

TEST_CASE("total residue: exact forms have residue zero") {
  auto ctx = fctx(2, 2, 2, 3);
  for (int k = 1; k <= 3; ++k) {
    PointConfig cfg = PointConfig::distinct_symbolic(k);
    PExpr g = global_pullback(eta_db1(), cfg, ctx);
    CHECK(total_residue(g, cfg, ctx).is_zero());
  }
}

TEST_CASE("one-point total residue reproduces the transgression") {
  auto ctx = fctx(2, 2, 2, 3);
  PointConfig cfg = PointConfig::distinct_symbolic(1);
  Polynomial F1 = total_residue(global_pullback(eta_b1_db2(), cfg, ctx), cfg, ctx);
  CHECK(F1.max_lambda_degree() == 0);
  CHECK(F1 == pairing_sum_point1(1, 2, ctx));

  PointConfig at_half = PointConfig::at_values({Rational(1, 2)});
  Polynomial F1h = total_residue(global_pullback(eta_b1_db2(), at_half, ctx), at_half, ctx);
  CHECK(F1h == F1);
}

TEST_CASE("local residue of a simple pole") {
  auto ctx = fctx(1, 1, 1, 3);
  PointConfig cfg = PointConfig::at_values({Rational(0), Rational(1)});
  PExpr g;
  g.add(0, -1, Polynomial::constant(1));
  CHECK(local_residue(g, cfg, 1, ctx) == Polynomial::constant(-1));
  CHECK(local_residue(g, cfg, 2, ctx) == Polynomial::constant(1));
  CHECK(total_residue(g, cfg, ctx).is_zero());
}

TEST_CASE("re-expansion at a point: geometric series example") {
  auto ctx = fctx(1, 1, 1, 3);
  PointConfig cfg = PointConfig::at_values({Rational(0), Rational(1)});
  auto coords = expand_at_point(cfg, 1, 2, ctx);
  Polynomial c_m1 = coords.at(Variable::b(1, -1));
  CHECK(c_m1.terms().count(Monomial(Variable::b(1, -1, 1))) == 1);
  CHECK(c_m1.terms().at(Monomial(Variable::b(1, -1, 1))) == Rational(-1));
}

TEST_CASE("total residue equals the sum of local residues") {
  auto ctx = fctx(2, 2, 2, 3);
  auto rng = rng_for("pipeline");
  for (int trial = 0; trial < 8; ++trial) {
    XForm eta = random_chart_1form(rng, ctx, 2);
    for (int k = 2; k <= 3; ++k) {
      std::vector<Rational> vals;
      while (static_cast<int>(vals.size()) < k) {
        Rational v(rng.range(-6, 6), rng.range(1, 2));
        bool fresh = true;
        for (auto& u : vals) fresh = fresh && !(u == v);
        if (fresh) vals.push_back(v);
      }
      PointConfig cfg = PointConfig::at_values(vals);
      PExpr g = global_pullback(eta, cfg, ctx);
      Polynomial total = total_residue(g, cfg, ctx);
      Polynomial local;
      for (int i = 1; i <= k; ++i) local = local + local_residue(g, cfg, i, ctx);
      CHECK(total == local);
    }
  }
}

TEST_CASE("diagonal restriction substitutes points") {
  auto ctx = fctx(1, 1, 1, 2);
  Polynomial f = Polynomial::var(Variable::lambda(2)) - Polynomial::var(Variable::lambda(1));
  CHECK(restrict_diagonal(f, Merge{{1, 1}}, ctx).is_zero());
  Polynomial g = Polynomial::var(Variable::lambda(1));
  CHECK(restrict_diagonal(g, Merge{{1}}, ctx) == g);
}

TEST_CASE("diagonal reindexing of a total merge is a bijection") {
  auto ctx = fctx(1, 2, 2, 3);
  Merge merge{{1, 1}};
  DiagonalReindex re = diagonal_reindex(merge, 2 * ctx.neg_window, 2 * ctx.pos_window + 1, ctx);
  CHECK(re.sound_sources.size() == static_cast<std::size_t>((2 * 2 + 1) * 2));
  // t^1 P_J^n = (t - lam) P_I^{2n} + lam P_I^{2n}: target 2n+1 sees b_{n,2}
  auto hit = re.image.find({1, 1});
  REQUIRE(hit != re.image.end());
  bool found = false;
  for (auto& [n, nu, c] : hit->second)
    if (n == 0 && nu == 2) {
      found = true;
      CHECK(c == Polynomial::constant(1));
    }
  CHECK(found);
}

TEST_CASE("full factorization verdict for a transgression") {
  auto ctx = fctx(2, 1, 2, 3);
  Report rep = verify_factorizing(eta_b1_db2(), ctx, 5, 3, 20250810);
  for (auto& rec : rep.records) {
    INFO(rec.id, " witness: ", rec.witness);
    CHECK(rec.pass);
  }
  CHECK(rep.all_pass());
}

TEST_CASE("exact forms: everything vanishes and passes") {
  auto ctx = fctx(2, 1, 2, 3);
  Report rep = verify_factorizing(eta_db1(), ctx, 5, 2, 7);
  CHECK(rep.all_pass());
}

TEST_CASE("non-invariant candidate fails with witnesses") {
  auto ctx = fctx(2, 2, 2, 3);
  Polynomial bad;
  bad.add_term(Monomial(Variable::b(1, -1)).times(Monomial(Variable::b(2, 1))), Rational(1));
  bad.add_term(Monomial(Variable::b(1, -2)).times(Monomial(Variable::b(2, 2))), Rational(1));
  Report rep = verify_factorizing_candidate(bad, ctx, 3, 99);
  CHECK_FALSE(rep.all_pass());
  bool witnessed = false;
  for (auto& rec : rep.records)
    if (!rec.pass && !rec.witness.empty()) witnessed = true;
  CHECK(witnessed);
}

TEST_CASE("genuine transgression passes the candidate checks") {
  auto ctx = fctx(2, 1, 2, 3);
  int local_hi = 2 * ctx.neg_window;
  TruncationContext ctx1 = ctx;
  ctx1.pos_window = std::max(ctx.pos_window, local_hi);
  Polynomial f = transgress_function(eta_b1_db2(), ctx1).value;
  Report rep = verify_factorizing_candidate(f, ctx, 3, 99);
  for (auto& rec : rep.records) {
    INFO(rec.id, " witness: ", rec.witness);
    CHECK(rec.pass);
  }
}
