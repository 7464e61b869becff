#include <doctest.h>

#include "loopcas/heisenberg.hpp"
#include "support.hpp"

using namespace loopcas;

namespace {

TruncationContext hctx(int charts, int window, int eps, int wbound = 0, int b0cap = 2) {
  TruncationContext ctx;
  ctx.charts = charts;
  ctx.neg_window = window;
  ctx.pos_window = window;
  ctx.nilpotency = eps;
  ctx.weight_bound = wbound;
  ctx.b0_cap = b0cap;
  return ctx;
}

HeisenbergState word_state(std::vector<std::pair<ModeKey, int>> a, std::vector<std::pair<ModeKey, int>> b,
                           Rational c = Rational(1)) {
  NormalWord w;
  w.a_part = std::move(a);
  w.b_part = std::move(b);
  std::sort(w.a_part.begin(), w.a_part.end());
  std::sort(w.b_part.begin(), w.b_part.end());
  HeisenbergState s;
  s.add(w, c);
  return s;
}

XForm xform_db12() {
  DifferentialForm f(2, Universe::X);
  f.add_term({Variable::chart_coord(1), Variable::chart_coord(2)}, Polynomial::constant(1));
  return XForm(f);
}

std::vector<OpSym> random_word(TestRng& rng, const TruncationContext& ctx, int len) {
  std::vector<OpSym> w;
  for (int i = 0; i < len; ++i) {
    OpSym op;
    op.is_a = rng.below(2) == 0;
    op.chart = static_cast<int>(rng.range(1, ctx.charts));
    op.mode = static_cast<int>(rng.range(-3, 3));
    w.push_back(op);
  }
  return w;
}

Polynomial pairing_sum(int i, int j, const TruncationContext& ctx) {
  Polynomial p;
  int reach = std::min(ctx.neg_window, ctx.pos_window);
  for (int n = -reach; n <= reach; ++n) {
    if (n == 0) continue;
    p.add_term(Monomial(Variable::b(i, -n)).times(Monomial(Variable::b(j, n))), Rational(n));
  }
  return poly_reduce(p, ctx);
}

}  // namespace

TEST_CASE("normal ordering of the worked examples") {
  // b^1_{-1} a^1_1 |0> = -|0>
  std::vector<OpSym> w1{{false, 1, -1}, {true, 1, 1}};
  CHECK(normal_order(w1) == HeisenbergState::vacuum(Rational(-1)));

  // a^1_1 b^1_{-1} |0> = 0
  std::vector<OpSym> w2{{true, 1, 1}, {false, 1, -1}};
  CHECK(normal_order(w2).is_zero());

  // b^2_1 a^1_1 |0> is already a basis word (commuting families)
  std::vector<OpSym> w3{{false, 2, 1}, {true, 1, 1}};
  CHECK(normal_order(w3) == word_state({{{1, 1}, 1}}, {{{2, 1}, 1}}));
}

TEST_CASE("normal ordering is confluent across strategies") {
  auto ctx = hctx(2, 3, 4);
  auto rng = rng_for("confluence");
  for (int trial = 0; trial < 500; ++trial) {
    auto w = random_word(rng, ctx, static_cast<int>(rng.range(0, 6)));
    HeisenbergState a = normal_order(w, RewriteStrategy::ApplyRightToLeft);
    HeisenbergState b = normal_order(w, RewriteStrategy::AdjacentSwaps);
    CHECK(a == b);
  }
}

TEST_CASE("module action agrees with operator application") {
  auto ctx = hctx(2, 3, 4);
  auto rng = rng_for("act-vs-apply");
  for (int trial = 0; trial < 100; ++trial) {
    // random monomial of b modes as a polynomial and as an operator word
    Monomial m;
    int deg = static_cast<int>(rng.range(1, 3));
    std::vector<OpSym> word;
    for (int d = 0; d < deg; ++d) {
      Variable v = random_b_variable(rng, ctx);
      m = m.times(Monomial(v));
      word.push_back({false, v.chart, v.mode});
    }
    // random target basis word
    HeisenbergState v = word_state({{{1, static_cast<int>(rng.range(1, 3))}, static_cast<int>(rng.range(1, 2))}},
                                   {{{2, static_cast<int>(rng.range(0, 2))}, 1}});
    HeisenbergState lhs = mult_function(Polynomial::term(Rational(1), m), v, ctx);
    HeisenbergState rhs = v;
    for (auto it = word.rbegin(); it != word.rend(); ++it) rhs = apply_op(*it, rhs);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("module action worked examples") {
  auto ctx = hctx(2, 3, 4);
  // functions congruent to 1 modulo the relative ideal fix b-words
  Polynomial phi = Polynomial::constant(1) + pairing_sum(1, 2, ctx);
  HeisenbergState bw = word_state({}, {{{1, 2}, 1}});
  CHECK(mult_function(phi, bw, ctx) == bw);

  // the pairing sum annihilates one a and creates the matched b
  HeisenbergState a11 = word_state({{{1, 1}, 1}}, {});
  HeisenbergState expect = word_state({}, {{{2, 1}, 1}}, Rational(-1));
  CHECK(mult_function(pairing_sum(1, 2, ctx), a11, ctx) == expect);

  // plain creation
  CHECK(mult_function(Polynomial::var(Variable::b(1, 0)), HeisenbergState::vacuum(), ctx) ==
        word_state({}, {{{1, 0}, 1}}));
}

TEST_CASE("module associativity below the nilpotency weight") {
  auto ctx = hctx(2, 4, 4);
  auto rng = rng_for("associativity");
  auto basis = basis_upto(3, ctx);  // weight < epsilon keeps the cut invisible
  for (int trial = 0; trial < 200; ++trial) {
    Polynomial phi = random_reduced_polynomial(rng, ctx, 2, 2);
    Polynomial psi = random_reduced_polynomial(rng, ctx, 2, 2);
    HeisenbergState v;
    v.add(basis[rng.below(basis.size())], rng.nonzero_rational());
    HeisenbergState lhs = mult_function(phi, mult_function(psi, v, ctx), ctx);
    HeisenbergState rhs = mult_function(poly_mul(phi, psi, ctx), v, ctx);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("field shift of the standard symplectic form") {
  auto ctx = hctx(2, 4, 3);
  XForm omega = xform_db12();
  // T(a^1_1 |0>) = a^1_1 |0> - b^2_1 |0>
  HeisenbergState a11 = word_state({{{1, 1}, 1}}, {});
  HeisenbergState got = shift_automorphism(omega, a11, ctx);
  HeisenbergState expect = a11 + word_state({}, {{{2, 1}, 1}}, Rational(-1));
  CHECK(got == expect);

  // T(a^2_1 |0>) = a^2_1 |0> + b^1_1 |0>
  HeisenbergState a21 = word_state({{{2, 1}, 1}}, {});
  CHECK(shift_automorphism(omega, a21, ctx) == a21 + word_state({}, {{{1, 1}, 1}}));

  // b-words are fixed
  HeisenbergState bw = word_state({}, {{{1, 0}, 1}, {{2, 2}, 1}});
  CHECK(shift_automorphism(omega, bw, ctx) == bw);

  // matches multiplication by the exponentiated action
  Polynomial s = exp_action(omega, ctx).value;
  CHECK(mult_function(s, a11, ctx) == expect);
}

TEST_CASE("automorphism preserves the a-filtration") {
  auto ctx = hctx(2, 6, 4);
  auto rng = rng_for("filtration");
  XForm omega = xform_db12();
  auto basis = basis_upto(3, ctx);
  for (auto& w : basis) {
    HeisenbergState v;
    v.add(w, Rational(1));
    HeisenbergState out = shift_automorphism(omega, v, ctx);
    for (auto& [ow, c] : out.terms) {
      CHECK(ow.a_count() <= w.a_count());
      CHECK(multiset_contains(w.a_part, ow.a_part));
      // the top piece is the identity: the full-a-part component is the word itself
      if (ow.a_part == w.a_part) {
        CHECK(ow == w);
        CHECK(c == Rational(1));
      }
    }
  }
  (void)rng;
}

TEST_CASE("translation operator") {
  auto ctx = hctx(1, 3, 3, /*wbound=*/6);
  // T(b_0 |0>) = b_1 |0>, T(a_1 |0>) = a_2 |0>, T |0> = 0
  CHECK(translate(word_state({}, {{{1, 0}, 1}}), ctx) == word_state({}, {{{1, 1}, 1}}));
  CHECK(translate(word_state({{{1, 1}, 1}}, {}), ctx) == word_state({{{1, 2}, 1}}, {}));
  CHECK(translate(HeisenbergState::vacuum(), ctx).is_zero());

  // weight bound overflow
  auto tight = hctx(1, 3, 3, /*wbound=*/1);
  CHECK_THROWS_AS(translate(word_state({{{1, 1}, 1}}, {}), tight), Error);
}

TEST_CASE("field modes on the generating class") {
  auto ctx = hctx(2, 4, 3);
  HeisenbergState vac = HeisenbergState::vacuum();
  HeisenbergState a11 = word_state({{{1, 1}, 1}}, {});
  HeisenbergState b10 = word_state({}, {{{1, 0}, 1}});

  CHECK(field_mode(a11, -1, vac, ctx) == a11);
  CHECK(field_mode(b10, -1, vac, ctx) == b10);
  CHECK(field_mode(vac, 0, a11, ctx).is_zero());
  CHECK(field_mode(vac, -1, a11, ctx) == a11);

  // annihilating direction: (a^1_1|0>) o_1 (b^1_1|0>) = a^1_{-1} b^1_1 |0> = b-contraction
  HeisenbergState b11 = word_state({}, {{{1, 1}, 1}});
  CHECK(field_mode(a11, 1, b11, ctx) == HeisenbergState::vacuum());

  // outside the class
  HeisenbergState deep = word_state({{{1, 2}, 1}}, {});
  CHECK_THROWS_AS(field_mode(deep, 0, vac, ctx), Error);

  // unit and derivative-of-field properties, randomized
  auto rng = rng_for("field-modes");
  auto ys = basis_upto(3, hctx(2, 4, 3, 0, 2));
  for (int trial = 0; trial < 60; ++trial) {
    HeisenbergState y;
    y.add(ys[rng.below(ys.size())], rng.nonzero_rational());
    CHECK(field_mode(vac, -1, y, ctx) == y);
    for (int k = -3; k <= 3; ++k) {
      // x in the commutative class
      HeisenbergState x = word_state({}, {{{static_cast<int>(rng.range(1, 2)), static_cast<int>(rng.range(0, 3))}, 1}});
      TruncationContext unbounded = ctx;
      unbounded.weight_bound = 0;
      HeisenbergState lhs = field_mode(translate(x, unbounded), k, y, ctx);
      HeisenbergState rhs = field_mode(x, k - 1, y, ctx).scaled(Rational(-k));
      CHECK(lhs == rhs);
      // x = a_1: translate gives a_2, outside the class; skip
    }
  }
}

TEST_CASE("basis enumeration matches the generating function") {
  auto ctx = hctx(2, 6, 4, 0, 2);
  CHECK(basis_upto(-1, ctx).empty());

  for (int W = 0; W <= 4; ++W) {
    auto basis = basis_upto(W, ctx);
    // independent count: unbounded knapsack for the a-side and positive
    // b-side, times the number of b_0 multisets of size <= cap
    std::vector<long> dpa(W + 1, 0), dpb(W + 1, 0);
    dpa[0] = dpb[0] = 1;
    for (int chart = 0; chart < ctx.charts; ++chart)
      for (int m = 1; m <= W; ++m)
        for (int w = m; w <= W; ++w) {
          dpa[w] += dpa[w - m];
          dpb[w] += dpb[w - m];
        }
    long b0_count = 0;
    for (int s = 0; s <= ctx.b0_cap; ++s) {
      // multisets of size s over N charts: C(N + s - 1, s)
      long c = 1;
      for (int j = 0; j < s; ++j) c = c * (ctx.charts + j) / (j + 1);
      b0_count += c;
    }
    long expect = 0;
    for (int wa = 0; wa <= W; ++wa)
      for (int wb = 0; wa + wb <= W; ++wb) expect += dpa[wa] * dpb[wb] * b0_count;
    CHECK(static_cast<long>(basis.size()) == expect);
    // deterministic order
    auto again = basis_upto(W, ctx);
    CHECK(basis == again);
  }
}

TEST_CASE("action-relevant reduction is invisible on bounded states") {
  auto ctx = hctx(2, 4, 5);
  auto rng = rng_for("action-bound");
  int W = 3;
  auto basis = basis_upto(W, ctx);
  for (int trial = 0; trial < 80; ++trial) {
    Polynomial phi = random_reduced_polynomial(rng, ctx, 3, 3);
    Polynomial phi_red = poly_reduce(phi, ctx, action_bound(W));
    HeisenbergState v;
    v.add(basis[rng.below(basis.size())], Rational(1));
    CHECK(mult_function(phi, v, ctx) == mult_function(phi_red, v, ctx));
  }
}

TEST_CASE("indexed action table equals the direct action") {
  auto ctx = hctx(2, 4, 4);
  auto rng = rng_for("action-table");
  auto basis = basis_upto(3, ctx);
  for (int trial = 0; trial < 60; ++trial) {
    Polynomial phi = random_reduced_polynomial(rng, ctx, 3, 3);
    ActionTable table(phi, ctx);
    HeisenbergState v;
    v.add(basis[rng.below(basis.size())], rng.nonzero_rational());
    CHECK(table.act(v) == mult_function(phi, v, ctx));
  }
}

TEST_CASE("multiplication by the exponentiated action equals the automorphism") {
  auto ctx = hctx(2, 4, 3, /*wbound=*/2, /*b0cap=*/1);
  int W = 2;
  XForm omega = xform_db12();
  Report rep = verify_automorphism(omega, W, ctx);
  CHECK(rep.all_pass());
  CHECK(rep.records.size() == basis_upto(W, ctx).size());

  // window precondition is enforced
  auto narrow = hctx(2, 3, 3, 2, 1);
  CHECK_THROWS_AS(verify_automorphism(omega, W, narrow), Error);
  auto shallow = hctx(2, 4, 2, 2, 1);
  CHECK_THROWS_AS(verify_automorphism(omega, W, shallow), Error);

  // nonlinear coefficients: omega = d((b^1)^2 db^2)
  DifferentialForm eta(1, Universe::X);
  eta.add_term({Variable::chart_coord(2)},
               Polynomial::term(Rational(1), Monomial(Variable::chart_coord(1)).pow(2)));
  XForm omega2 = XForm::d_of(XForm(eta), ctx);
  Report rep2 = verify_automorphism(omega2, W, ctx);
  CHECK(rep2.all_pass());
}

TEST_CASE("parallel verification is deterministic") {
  auto ctx = hctx(2, 4, 3, 2, 1);
  XForm omega = xform_db12();
  Report seq = verify_automorphism(omega, 2, ctx, 1);
  Report par = verify_automorphism(omega, 2, ctx, 4);
  REQUIRE(seq.records.size() == par.records.size());
  for (std::size_t i = 0; i < seq.records.size(); ++i) {
    CHECK(seq.records[i].id == par.records[i].id);
    CHECK(seq.records[i].pass == par.records[i].pass);
  }
}

TEST_CASE("coefficient recovery from the module action") {
  auto ctx = hctx(2, 4, 4);
  auto rng = rng_for("faithfulness");
  int W = 4;
  for (int trial = 0; trial < 50; ++trial) {
    // g bounded for recovery: modes in [-W, W], annihilation weight <= W
    Polynomial g = poly_reduce(random_polynomial(rng, ctx, 4, 3), ctx, action_bound(W));
    Polynomial recovered = recover_from_action(g, W, ctx);
    CHECK(recovered == g);
  }
  // a function acting as zero on every matched state is zero
  Polynomial zero = recover_from_action(Polynomial{}, W, ctx);
  CHECK(zero.is_zero());
}

TEST_CASE("vertex automorphism spot check for constant forms") {
  // constant-coefficient 2-form; weights reach 8, so the action must be
  // exact out to W_eff = 8
  TruncationContext ctx = hctx(2, 16, 9, 0, 2);
  XForm omega = xform_db12();
  int W_eff = 8;
  Polynomial f = symplectic_action(omega, ctx).value;
  Polynomial s_eff = exp_action_bounded(f, W_eff, ctx);
  ActionTable M(s_eff, ctx);

  auto ys = basis_upto(3, hctx(2, 16, 9, 0, 2));
  std::vector<HeisenbergState> xs;
  xs.push_back(HeisenbergState::vacuum());
  for (int i = 1; i <= 2; ++i) xs.push_back(word_state({{{i, 1}, 1}}, {}));
  for (int i = 1; i <= 2; ++i)
    for (int m = 0; m <= 3; ++m) xs.push_back(word_state({}, {{{i, m}, 1}}));

  auto rng = rng_for("vertex-spot");
  int checked = 0;
  for (auto& x : xs) {
    for (int k = -3; k <= 3; ++k) {
      for (int pick = 0; pick < 3; ++pick) {
        HeisenbergState y;
        y.add(ys[rng.below(ys.size())], Rational(1));
        HeisenbergState lhs = M.act(field_mode(x, k, y, ctx));
        HeisenbergState rhs = field_mode(M.act(x), k, M.act(y), ctx);
        CHECK(lhs == rhs);
        ++checked;
      }
    }
  }
  CHECK(checked > 100);
}
