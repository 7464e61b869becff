#ifndef LOOPCAS_DERHAM_HPP
#define LOOPCAS_DERHAM_HPP

#include <map>
#include <string>
#include <vector>

#include "loopcas/laurent.hpp"
#include "loopcas/polynomial.hpp"

namespace loopcas {

// Which variables count as coordinates for the exterior differential.
//   X    -- the base affine space, coordinates b[i]
//   Loop -- the loop space, coordinates b[i,n] (and aux scalars)
enum class Universe { X, Loop };

bool differentiable_in(const Variable& v, Universe u);

// Alternating p-form with polynomial coefficients. Keys are strictly
// increasing variable tuples; insertion sign-normalizes, so two forms are
// equal iff their term maps are equal.
class DifferentialForm {
 public:
  using Key = std::vector<Variable>;
  using TermMap = std::map<Key, Polynomial>;

  DifferentialForm() = default;
  DifferentialForm(int degree, Universe u) : degree_(degree), universe_(u) {}
  static DifferentialForm scalar(Polynomial p, Universe u);

  int degree() const { return degree_; }
  Universe universe() const { return universe_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  // All zero forms are equal, whatever degree tag they carry.
  bool operator==(const DifferentialForm& o) const {
    if (terms_.empty() && o.terms_.empty()) return true;
    return degree_ == o.degree_ && terms_ == o.terms_;
  }

  // dvars need not be sorted; repeated differentials annihilate the term.
  void add_term(Key dvars, const Polynomial& coeff);
  void add_term(Key dvars, const Monomial& m, const Rational& c);

  DifferentialForm operator+(const DifferentialForm& o) const;
  DifferentialForm operator-(const DifferentialForm& o) const;
  DifferentialForm scaled(const Rational& c) const;

  // Degree-0 content as a polynomial (empty when degree > 0).
  Polynomial scalar_part() const;

  std::string render() const;

 private:
  int degree_ = 0;
  Universe universe_ = Universe::Loop;
  TermMap terms_;
};

using FormSeries = Laurent<DifferentialForm>;

// Exterior derivative; d(d(w)) = 0.
DifferentialForm derham_d(const DifferentialForm& w, const TruncationContext& ctx);

DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b,
                       const TruncationContext& ctx);

struct VectorField {
  std::map<Variable, Polynomial> components;
};

// Interior product with Koszul signs; DegreeZero on functions.
DifferentialForm contract(const DifferentialForm& w, const VectorField& xi,
                          const TruncationContext& ctx);

// Result of a reparametrization derivation together with the number of mode
// images that escaped the window (invariance claims must exclude them).
template <class T>
struct Reparam {
  T value;
  long dropped = 0;
};

// D_m = t^m d/dt acting on loop-space objects: D_m(b^i_n) = (n-m+1) b^i_{n-m+1}.
Reparam<Polynomial> reparam_derive(const Polynomial& p, int m, const TruncationContext& ctx);
Reparam<DifferentialForm> reparam_derive(const DifferentialForm& w, int m,
                                         const TruncationContext& ctx);

// y-weight of a single term: polynomial degree in negative modes plus the
// number of negative-mode differentials. The relative complex is spanned by
// terms of positive y-weight.
int y_weight(const Monomial& m, const DifferentialForm::Key& dvars);

int neg_dvar_count(const DifferentialForm::Key& dvars);

// The nilpotency quotient on forms cuts by total y-weight, not by the
// coefficient degree alone; otherwise the cut would not commute with moving
// factors between coefficients and differentials (d, contraction).
DifferentialForm form_reduce(const DifferentialForm& w, const TruncationContext& ctx);

// Coefficient multiplication under the term's differentials, with the
// y-weight-aware cut.
DifferentialForm form_scale(const DifferentialForm& w, const Polynomial& p,
                            const TruncationContext& ctx);

bool is_relative(const DifferentialForm& w);

// The Euler homotopy H = (1/k) i_E on each y-weight-k piece, where E scales
// the negative-mode directions. Satisfies dH + Hd = id on relative forms.
// NotRelative when a term has y-weight 0.
DifferentialForm euler_homotopy(const DifferentialForm& w, const TruncationContext& ctx);

// Fiberwise Poincare inverse: for closed relative alpha returns the unique
// relative beta with d(beta) = alpha; this is euler_homotopy restricted to
// closed forms.
DifferentialForm poincare_inverse(const DifferentialForm& alpha, const TruncationContext& ctx);

}  // namespace loopcas

#endif
