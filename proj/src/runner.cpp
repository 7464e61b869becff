#include "loopcas/runner.hpp"

#include "loopcas/factorization.hpp"
#include "loopcas/heisenberg.hpp"
#include "loopcas/rng.hpp"

namespace loopcas {

namespace {

std::vector<CoordChange> seeded_coord_changes(SeededRng& rng, int count, int jet) {
  std::vector<CoordChange> out;
  for (int s = 0; s < count; ++s) {
    CoordChange cc;
    cc.a.push_back(rng.nonzero_rational());
    for (int d = 1; d < jet; ++d) cc.a.push_back(rng.small_rational());
    out.push_back(std::move(cc));
  }
  return out;
}

const XForm& need_eta(const Manifest& m) {
  if (!m.eta) raise(Errc::BadArgument, "this job needs inputs.eta");
  return *m.eta;
}

std::string first_witness(const Polynomial& p) {
  if (p.is_zero()) return "";
  auto it = p.terms().begin();
  return rat_render(it->second) + "*" + it->first.render();
}

XForm need_omega(const Manifest& m) {
  if (m.omega) return *m.omega;
  if (m.eta) return XForm::d_of(*m.eta, m.truncation);
  raise(Errc::BadArgument, "this job needs inputs.omega (or inputs.eta to differentiate)");
}

}  // namespace

Report run_job(const Manifest& m, int jobs) {
  const TruncationContext& ctx = m.truncation;
  switch (m.job) {
    case Job::Selftest:
      return run_selftest();
    case Job::Transgress: {
      Report rep;
      rep.job = job_name(m.job);
      DifferentialForm tau = m.eta ? transgress(*m.eta, ctx) : transgress(need_omega(m), ctx);
      rep.add("result", "transgression", true, tau.is_zero() ? "0" : tau.render());
      rep.add("relative", "transgression-is-relative", is_relative(tau), "");
      return rep;
    }
    case Job::Dinv: {
      Report rep;
      rep.job = job_name(m.job);
      LoopFunction f = symplectic_action(need_omega(m), ctx);
      rep.add("result", "symplectic-action", true, f.value.render());
      rep.add("relative", "action-is-relative", f.relative || f.value.is_zero(), "");
      DifferentialForm check =
          derham_d(DifferentialForm::scalar(f.value, Universe::Loop), ctx) - transgress(need_omega(m), ctx);
      rep.add("primitive", "d-of-action-is-transgression", check.is_zero(), "");
      return rep;
    }
    case Job::Action: {
      Report rep;
      rep.job = job_name(m.job);
      LoopFunction s = exp_action(need_omega(m), ctx);
      rep.add("result", "exponentiated-action", true, s.value.render());
      XForm minus(need_omega(m).form().scaled(Rational(-1)));
      Polynomial inv = poly_mul(s.value, exp_action(minus, ctx).value, ctx);
      rep.add("inverse", "exp-additivity", inv == Polynomial::constant(1), first_witness(inv));
      return rep;
    }
    case Job::Residue: {
      Report rep;
      rep.job = job_name(m.job);
      if (m.residue_slots.size() < 2)
        raise(Errc::BadArgument, "the residue job needs inputs.series with a_0 and at least a_1");
      ResidueTerm term;
      term.a0 = m.residue_slots.front();
      term.da.assign(m.residue_slots.begin() + 1, m.residue_slots.end());
      DifferentialForm res = residue_p({term}, ctx);
      rep.add("result", "residue", true, res.degree() == 0 ? res.scalar_part().render() : res.render());
      return rep;
    }
    case Job::VerifyInvariance: {
      SeededRng rng(m.seed);
      Polynomial f = m.candidate ? poly_reduce(*m.candidate, ctx)
                                 : transgress_function(need_eta(m), ctx).value;
      Report rep = check_reparam_invariance(f, m.m_max, seeded_coord_changes(rng, m.samples, 3), ctx);
      return rep;
    }
    case Job::VerifyAutomorphism:
      return verify_automorphism(need_omega(m), m.weight, ctx, jobs);
    case Job::VerifyFactorization: {
      if (m.candidate) return verify_factorizing_candidate(*m.candidate, ctx, m.samples, m.seed);
      return verify_factorizing(need_eta(m), ctx, m.samples, m.j_max, m.seed);
    }
  }
  raise(Errc::BadArgument, "unhandled job");
}

namespace {

XForm standard_eta() {
  DifferentialForm f(1, Universe::X);
  f.add_term({Variable::chart_coord(2)}, Polynomial::var(Variable::chart_coord(1)));
  return XForm(f);
}

}  // namespace

Report run_selftest() {
  Report rep;
  rep.job = "selftest";

  TruncationContext ctx;
  ctx.charts = 2;
  ctx.neg_window = 3;
  ctx.pos_window = 3;
  ctx.nilpotency = 3;
  ctx.weight_bound = 0;
  ctx.b0_cap = 2;

  // residue of dt/t
  {
    LaurentSeries a0, a1;
    a0.lo = a0.hi = -1;
    a0.set(-1, Polynomial::constant(1));
    a1.lo = a1.hi = 1;
    a1.set(1, Polynomial::constant(1));
    DifferentialForm r = residue_p({{a0, {a1}}}, ctx);
    rep.add("residue.dt-over-t", "residue", r.scalar_part() == Polynomial::constant(1),
            r.scalar_part().render());
  }

  // transgression pairing and exactness
  {
    XForm eta = standard_eta();
    LoopFunction f = transgress_function(eta, ctx);
    Polynomial expect;
    for (int n = -3; n <= 3; ++n) {
      if (n == 0) continue;
      expect.add_term(Monomial(Variable::b(1, -n)).times(Monomial(Variable::b(2, n))), Rational(n));
    }
    expect = poly_reduce(expect, ctx);
    rep.add("transgress.pairing", "transgression", f.value == expect, f.value.render());
    rep.add("transgress.relative", "transgression-is-relative", f.relative, "");

    XForm omega = XForm::d_of(eta, ctx);
    LoopFunction g = symplectic_action(omega, ctx);
    rep.add("dinv.exact-route", "action-equals-transgression-of-primitive", g.value == f.value, "");

    Polynomial s = exp_action(omega, ctx).value;
    Polynomial expect_s = Polynomial::constant(1) + f.value +
                          poly_mul(f.value, f.value, ctx).scaled(Rational(1, 2));
    rep.add("action.expansion", "exponentiated-action", s == expect_s, "");
  }

  // Heisenberg: the worked automorphism values
  {
    TruncationContext hctx = ctx;
    hctx.neg_window = 4;
    hctx.pos_window = 4;
    hctx.weight_bound = 2;
    hctx.b0_cap = 1;
    DifferentialForm w(2, Universe::X);
    w.add_term({Variable::chart_coord(1), Variable::chart_coord(2)}, Polynomial::constant(1));
    XForm omega(w);
    NormalWord a11;
    a11.a_part = {{{1, 1}, 1}};
    HeisenbergState v;
    v.add(a11, Rational(1));
    HeisenbergState got = shift_automorphism(omega, v, hctx);
    NormalWord b21;
    b21.b_part = {{{2, 1}, 1}};
    HeisenbergState expect = v;
    expect.add(b21, Rational(-1));
    rep.add("heisenberg.shift", "field-shift-on-generator", got == expect, got.render());

    Report auto_rep = verify_automorphism(omega, 2, hctx);
    rep.add("heisenberg.verify-automorphism", "multiplication-equals-automorphism",
            auto_rep.all_pass(), std::to_string(auto_rep.records.size()) + " states");
  }

  // factorization spot checks
  {
    TruncationContext fc = ctx;
    fc.neg_window = 1;
    fc.pos_window = 2;
    Report frep = verify_factorizing(standard_eta(), fc, 3, 2, 11);
    rep.add("factorization.b1db2", "factorizing-function", frep.all_pass(),
            std::to_string(frep.records.size()) + " checks");
  }

  return rep;
}

}  // namespace loopcas
