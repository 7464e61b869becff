#ifndef LOOPCAS_POLYNOMIAL_HPP
#define LOOPCAS_POLYNOMIAL_HPP

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "loopcas/context.hpp"
#include "loopcas/rational.hpp"
#include "loopcas/variable.hpp"

namespace loopcas {

// Product of variables with positive exponents, kept strictly sorted in the
// canonical variable order. The empty product is the unit.
class Monomial {
 public:
  using Factor = std::pair<Variable, int>;

  Monomial() = default;
  explicit Monomial(Variable v) : factors_{{v, 1}} {}
  static Monomial from_sorted(std::vector<Factor> f) {
    Monomial m;
    m.factors_ = std::move(f);
    return m;
  }

  const std::vector<Factor>& factors() const { return factors_; }
  bool is_unit() const { return factors_.empty(); }
  auto operator<=>(const Monomial&) const = default;

  Monomial times(const Monomial& other) const;
  Monomial pow(int e) const;

  int degree() const;
  // Total degree in negative-mode B variables; generates the nilpotency ideal.
  int neg_b_degree() const;
  // Sum of -mode over negative-mode B factors (counted with exponent):
  // the total creation weight an annihilating monomial must be matched by.
  long annihilation_weight() const;
  // Sum of mode over all B factors (counted with exponent).
  long mode_sum() const;
  int max_b_mode() const;  // INT_MIN when no B factor
  bool any_b_mode_outside(int neg_window, int pos_window) const;
  bool any_b_mode_below(int floor) const;
  bool has_family(Family f) const;
  int exponent_of(const Variable& v) const;

  std::string render() const;  // "b[1,-1]^2*b[2,0]", unit renders "1"

 private:
  std::vector<Factor> factors_;
};

// Extra quotient applied on top of the context truncation by callers that
// know a deeper cut is sound. Two users: the heisenberg action-relevant
// reduction (annihilation-weight / mode-floor bounds), and differential-form
// arithmetic, where coefficients sitting under q negative-mode differentials
// must be cut at nilpotency - q so that the total y-weight cut is uniform.
struct ExtraTruncation {
  long max_annihilation_weight = -1;  // <0: unbounded
  int min_b_mode_kept = 0;            // only used when weight bound is set
  bool bounded = false;
  bool has_neg_cap = false;
  int max_neg_b_degree = 0;  // active when has_neg_cap; may be negative (kills all)

  bool keeps(const Monomial& m) const {
    if (has_neg_cap && m.neg_b_degree() > max_neg_b_degree) return false;
    if (!bounded) return true;
    if (m.annihilation_weight() > max_annihilation_weight) return false;
    if (m.any_b_mode_below(min_b_mode_kept)) return false;
    return true;
  }

  static ExtraTruncation neg_degree_cap(int cap) {
    ExtraTruncation e;
    e.has_neg_cap = true;
    e.max_neg_b_degree = cap;
    return e;
  }
};

// Sparse exact-rational multivariate polynomial in canonical form: no zero
// coefficients, terms ordered by the monomial order. Equality is term-map
// equality.
class Polynomial {
 public:
  using TermMap = std::map<Monomial, Rational>;

  Polynomial() = default;
  static Polynomial constant(Rational c);
  static Polynomial var(Variable v) { return term(Rational(1), Monomial(v)); }
  static Polynomial term(Rational c, Monomial m);

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool operator==(const Polynomial&) const = default;

  void add_term(const Monomial& m, const Rational& c);

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator-() const;
  Polynomial scaled(const Rational& c) const;

  // Constant term / degree helpers.
  Rational constant_term() const;
  int degree() const;
  long max_lambda_degree() const;  // max total degree in Lambda variables

  std::vector<Variable> support() const;

  std::string render() const;

 private:
  TermMap terms_;
};

// Deletes monomials with negative-B degree >= ctx.nilpotency or any B mode
// outside [-neg_window, pos_window]; idempotent. `extra` refines the cut.
Polynomial poly_reduce(const Polynomial& p, const TruncationContext& ctx,
                       const ExtraTruncation& extra = {});

// Exact product followed by poly_reduce. Dead products are skipped as they
// are formed rather than after the fact.
Polynomial poly_mul(const Polynomial& a, const Polynomial& b, const TruncationContext& ctx,
                    const ExtraTruncation& extra = {});

Polynomial poly_pow(const Polynomial& p, int e, const TruncationContext& ctx,
                    const ExtraTruncation& extra = {});

// Formal partial derivative.
Polynomial poly_derive(const Polynomial& p, const Variable& v);

// Simultaneous substitution followed by poly_reduce. Every variable occurring
// in p must have an image; otherwise MissingAssignment.
Polynomial poly_subst(const Polynomial& p, const std::map<Variable, Polynomial>& assignment,
                      const TruncationContext& ctx);

// Substitution that leaves unassigned variables in place.
Polynomial poly_subst_partial(const Polynomial& p, const std::map<Variable, Polynomial>& assignment,
                              const TruncationContext& ctx);

}  // namespace loopcas

#endif
