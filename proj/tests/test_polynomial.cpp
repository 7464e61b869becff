#include <doctest.h>

#include "loopcas/polynomial.hpp"
#include "support.hpp"

using namespace loopcas;

namespace {

TruncationContext small_ctx() {
  TruncationContext ctx;
  ctx.charts = 2;
  ctx.neg_window = 4;
  ctx.pos_window = 4;
  ctx.nilpotency = 2;
  return ctx;
}

}  // namespace

TEST_CASE("rational parsing and rendering") {
  CHECK(rat_render(rat_parse("3/6")) == "1/2");
  CHECK(rat_render(rat_parse("-4/2")) == "-2");
  CHECK(rat_render(rat_parse("7")) == "7");
  CHECK_THROWS_AS(rat_parse("1/0"), Error);
  CHECK_THROWS_AS(rat_parse("a/b"), Error);
  CHECK_THROWS_AS(rat_parse(""), Error);
}

TEST_CASE("variable tokens round-trip and order") {
  CHECK(var_render(var_parse("b[1,-2]")) == "b[1,-2]");
  CHECK(var_render(var_parse("b[2,0,3]")) == "b[2,0,3]");
  CHECK(var_render(var_parse("a[1,5]")) == "a[1,5]");
  CHECK(var_render(var_parse("lam[2]")) == "lam[2]");
  CHECK(var_render(var_parse("aux[7]")) == "aux[7]");
  CHECK(var_render(var_parse("b[3]")) == "b[3]");
  CHECK_THROWS_AS(var_parse("b[1,0,0,0]"), Error);
  CHECK_THROWS_AS(var_parse("c[1]"), Error);
  CHECK_THROWS_AS(var_parse("b[1,"), Error);
  CHECK_THROWS_AS(var_parse("lam[0]"), Error);

  CHECK(Variable::chart_coord(1) < Variable::b(1, -1));
  CHECK(Variable::b(1, -1) < Variable::b(1, 0));
  CHECK(Variable::b(1, 3) < Variable::b(2, -4));
  CHECK(Variable::b(2, 3) < Variable::a(1, 1));
  CHECK(Variable::a(2, 2) < Variable::lambda(1));
  CHECK(Variable::lambda(2) < Variable::aux(0));
}

TEST_CASE("reduction kills the stated monomials") {
  auto ctx = small_ctx();
  Variable bm11 = Variable::b(1, -1), bm21 = Variable::b(2, -1);
  Polynomial p = Polynomial::term(Rational(1), Monomial(bm11).times(Monomial(bm21)));
  CHECK(poly_reduce(p, ctx).is_zero());
  Polynomial q = Polynomial::term(Rational(1), Monomial(bm11).times(Monomial(Variable::b(2, 0))));
  CHECK(poly_reduce(q, ctx) == q);
  Polynomial r = Polynomial::term(Rational(3), Monomial(Variable::b(1, -5)));
  CHECK(poly_reduce(r, ctx).is_zero());
  auto rng = rng_for("reduce");
  Polynomial big = random_polynomial(rng, ctx, 3, 4, true);
  CHECK(poly_reduce(poly_reduce(big, ctx), ctx) == poly_reduce(big, ctx));
}

TEST_CASE("products follow the quotient ring") {
  auto ctx = small_ctx();
  Polynomial b10 = Polynomial::var(Variable::b(1, 0));
  Polynomial one = Polynomial::constant(1);
  Polynomial lhs = poly_mul(b10 + one, b10 - one, ctx);
  Polynomial rhs = poly_mul(b10, b10, ctx) - one;
  CHECK(lhs == rhs);
  Polynomial bm = Polynomial::var(Variable::b(1, -1));
  CHECK(poly_mul(bm, bm, ctx).is_zero());
  Polynomial half_b21 = Polynomial::var(Variable::b(2, 1)).scaled(Rational(1, 2));
  Polynomial third_b10 = b10.scaled(Rational(1, 3));
  Polynomial prod = poly_mul(half_b21, third_b10, ctx);
  REQUIRE(prod.terms().size() == 1);
  CHECK(prod.terms().begin()->second == Rational(1, 6));
}

TEST_CASE("ring axioms hold exactly in the quotient") {
  auto ctx = small_ctx();
  auto rng = rng_for("ring-axioms");
  for (int trial = 0; trial < 200; ++trial) {
    Polynomial a = random_polynomial(rng, ctx, 2, 3);
    Polynomial b = random_polynomial(rng, ctx, 2, 3);
    Polynomial c = random_polynomial(rng, ctx, 2, 3);
    CHECK(poly_mul(poly_mul(a, b, ctx), c, ctx) == poly_mul(a, poly_mul(b, c, ctx), ctx));
    CHECK(poly_mul(a, b + c, ctx) == poly_mul(a, b, ctx) + poly_mul(a, c, ctx));
    CHECK(poly_mul(a, b, ctx) == poly_mul(b, a, ctx));
  }
}

TEST_CASE("derivative: Leibniz and commuting partials") {
  auto ctx = small_ctx();
  Variable v = Variable::b(1, -1), w = Variable::b(2, 1);
  Polynomial p = Polynomial::term(Rational(1), Monomial(v).times(Monomial(w)));
  CHECK(poly_derive(p, v) == Polynomial::var(w));
  CHECK(poly_derive(Polynomial::constant(5), Variable::b(1, 0)).is_zero());
  Polynomial sq = Polynomial::term(Rational(1), Monomial(Variable::b(2, 3)).pow(2));
  CHECK(poly_derive(sq, Variable::b(2, 3)) == Polynomial::var(Variable::b(2, 3)).scaled(2));

  auto rng = rng_for("leibniz");
  TruncationContext wide = ctx;
  wide.nilpotency = 99;
  for (int trial = 0; trial < 50; ++trial) {
    Polynomial a = random_polynomial(rng, ctx, 2, 3);
    Polynomial b = random_polynomial(rng, ctx, 2, 3);
    CHECK(poly_derive(poly_mul(a, b, wide), v) ==
          poly_mul(poly_derive(a, v), b, wide) + poly_mul(a, poly_derive(b, v), wide));
    CHECK(poly_derive(poly_derive(a, v), w) == poly_derive(poly_derive(a, w), v));
  }
}

TEST_CASE("substitution: strictness, worked example, composition") {
  auto ctx = small_ctx();
  Variable l1 = Variable::lambda(1), l2 = Variable::lambda(2);
  Polynomial p = Polynomial::var(l2) - Polynomial::var(l1);
  std::map<Variable, Polynomial> assign{{l1, Polynomial::constant(0)}, {l2, Polynomial::constant(1)}};
  CHECK(poly_subst(p, assign, ctx) == Polynomial::constant(1));

  Polynomial b10 = Polynomial::var(Variable::b(1, 0));
  std::map<Variable, Polynomial> ident{{Variable::b(1, 0), b10}};
  CHECK(poly_subst(b10, ident, ctx) == b10);

  CHECK_THROWS_AS(poly_subst(p, {{l1, Polynomial::constant(0)}}, ctx), Error);

  Polynomial q =
      Polynomial::term(Rational(1), Monomial(Variable::b(1, -1)).times(Monomial(Variable::b(2, 1))));
  std::map<Variable, Polynomial> shear{
      {Variable::b(1, -1), Polynomial::var(Variable::b(1, -1)) + Polynomial::var(Variable::b(2, -1))},
      {Variable::b(2, 1), Polynomial::var(Variable::b(2, 1))}};
  Polynomial expect =
      q + Polynomial::term(Rational(1), Monomial(Variable::b(2, -1)).times(Monomial(Variable::b(2, 1))));
  CHECK(poly_subst(q, shear, ctx) == expect);

  // Composition agrees with substitution of the composition whenever the
  // substitutions preserve the nilpotency ideal (negative modes map to
  // relative elements), which all substitutions in this project do.
  auto rng = rng_for("subst-compose");
  for (int trial = 0; trial < 30; ++trial) {
    Polynomial f = random_polynomial(rng, ctx, 2, 2);
    std::map<Variable, Polynomial> s1;
    for (auto& v : f.support()) {
      if (v.is_neg_b())
        s1[v] = Polynomial::var(v).scaled(rng.nonzero_rational());
      else
        s1[v] = random_polynomial(rng, ctx, 1, 2);
    }
    std::map<Variable, Polynomial> shift;
    for (auto& [v, img] : s1)
      for (auto& w : img.support())
        if (w.is_neg_b())
          shift.try_emplace(w, Polynomial::var(w).scaled(Rational(2)));
        else
          shift.try_emplace(w, Polynomial::var(w) + Polynomial::constant(Rational(1, 3)));
    std::map<Variable, Polynomial> composed;
    for (auto& [v, img] : s1) composed[v] = poly_subst_partial(img, shift, ctx);
    Polynomial route_a = poly_subst_partial(poly_subst_partial(f, s1, ctx), shift, ctx);
    Polynomial route_b = poly_subst_partial(f, composed, ctx);
    CHECK(route_a == route_b);
  }
}

TEST_CASE("reduction residue stays in the excluded span") {
  auto ctx = small_ctx();
  auto rng = rng_for("excluded-span");
  for (int trial = 0; trial < 40; ++trial) {
    Polynomial p = random_polynomial(rng, ctx, 3, 4, true);
    Polynomial kept = poly_reduce(p, ctx);
    Polynomial dropped = p - kept;
    for (auto& [m, c] : dropped.terms()) {
      bool excluded =
          m.neg_b_degree() >= ctx.nilpotency || m.any_b_mode_outside(ctx.neg_window, ctx.pos_window);
      CHECK(excluded);
    }
    CHECK(kept + dropped == p);
  }
}

TEST_CASE("rendering is canonical") {
  Polynomial p;
  p.add_term(Monomial(Variable::b(1, 0)), Rational(1));
  p.add_term(Monomial(Variable::b(1, -1)).pow(2), Rational(-1, 2));
  CHECK(p.render() == "-1/2*b[1,-1]^2 + b[1,0]");
  CHECK(Polynomial{}.render() == "0");
  CHECK(Polynomial::constant(Rational(-5, 3)).render() == "-5/3");
}
