#ifndef LOOPCAS_TRANSGRESSION_HPP
#define LOOPCAS_TRANSGRESSION_HPP

#include <vector>

#include "loopcas/derham.hpp"
#include "loopcas/laurent.hpp"
#include "loopcas/report.hpp"

namespace loopcas {

// Polynomial form on the base space, degree 0..2. Degree-2 forms are stored
// as sum over i<j of w_ij db^i db^j; h(i,j) exposes the antisymmetric
// extension h_ij = w_ij, h_ji = -w_ij used by the Heisenberg field shift.
class XForm {
 public:
  XForm() : form_(0, Universe::X) {}
  explicit XForm(DifferentialForm f);

  const DifferentialForm& form() const { return form_; }
  int degree() const { return form_.degree(); }
  bool is_closed(const TruncationContext& ctx) const;

  Polynomial h(int i, int j) const;       // degree 2 accessor
  Polynomial coefficient_1(int i) const;  // degree 1: coefficient of db^i

  static XForm d_of(const XForm& f, const TruncationContext& ctx);

 private:
  DifferentialForm form_;
};

// Function on the loop space, reduced in its context; `relative` marks
// membership in the ideal of functions vanishing on arcs.
struct LoopFunction {
  Polynomial value;
  bool relative = false;

  static LoopFunction of(Polynomial p, const TruncationContext& ctx);
};

// One summand a_0 da_1 ... da_p of a p-form over the Laurent ring.
struct ResidueTerm {
  LaurentSeries a0;
  std::vector<LaurentSeries> da;
};

// Res^p with the Koszul signs: the t^{-1} coefficient of
//   a_0 * sum_i (-1)^{p-i} dR(a_1)...dR(a_{i-1}) a_i' dR(a_{i+1})...dR(a_p).
// For p = 1 this is (a_0 a_1')_{-1}. The sign is pinned by Res(d w) = d Res(w)
// and by alternation in the slots.
DifferentialForm residue_p(const std::vector<ResidueTerm>& terms, const TruncationContext& ctx);

// d(a_0 da_1 ... da_p) = 1 * da_0 da_1 ... da_p.
std::vector<ResidueTerm> residue_d(const std::vector<ResidueTerm>& terms);

// Lie derivative along t^m d/dt applied slotwise to the presentation.
std::vector<ResidueTerm> residue_lie(const std::vector<ResidueTerm>& terms, int m,
                                     const TruncationContext& ctx);

// t^m * s.
LaurentSeries series_shift(const LaurentSeries& s, int m);

// Transgression (Radon transform) of a degree 1 or 2 form: the residue of the
// pullback along the evaluation series. Returns a (p-1)-form on the loop
// space; it is relative, and reparametrization-invariant inside the sound
// window.
DifferentialForm transgress(const XForm& w, const TruncationContext& ctx);

LoopFunction transgress_function(const XForm& eta, const TruncationContext& ctx);

// Unique relative primitive of transgress(omega) for closed degree-2 omega.
LoopFunction symplectic_action(const XForm& omega, const TruncationContext& ctx);

// exp of the symplectic action; finite sum by nilpotency.
LoopFunction exp_action(const XForm& omega, const TruncationContext& ctx);
Polynomial exp_relative(const Polynomial& f, const TruncationContext& ctx);

// Finite jet of a reparametrization t -> a_1 t + a_2 t^2 + ...; a_1 invertible.
struct CoordChange {
  std::vector<Rational> a;  // a[0] is a_1

  void validate() const;
};

// Mode-variable substitution induced by the reparametrization, exact within
// the window.
std::map<Variable, Polynomial> coord_change_substitution(const CoordChange& cc, int chart,
                                                         const TruncationContext& ctx);

// Reparametrization-invariance report for a loop function: infinitesimal
// checks D_m f = 0 for m <= m_max restricted to the sound sub-window, and
// finite checks f(reparametrized modes) = f at sampled coordinate changes,
// with boundary-attributable residuals identified and excluded.
Report check_reparam_invariance(const Polynomial& f, int m_max,
                                const std::vector<CoordChange>& samples,
                                const TruncationContext& ctx);

}  // namespace loopcas

#endif
