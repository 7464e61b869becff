#ifndef LOOPCAS_FACTORIZATION_HPP
#define LOOPCAS_FACTORIZATION_HPP

#include <optional>
#include <vector>

#include "loopcas/heisenberg.hpp"
#include "loopcas/transgression.hpp"

namespace loopcas {

// Point configuration on the affine line: distinct roots with multiplicities.
// Symbolic mode uses lam[1..r]; rational mode pins exact values.
struct PointConfig {
  std::vector<int> mults;           // per root, >= 1
  std::vector<Rational> values;     // empty: symbolic
  bool symbolic() const { return values.empty(); }
  int roots() const { return static_cast<int>(mults.size()); }
  int degree() const;  // sum of multiplicities = deg P

  static PointConfig distinct_symbolic(int k);
  static PointConfig at_values(std::vector<Rational> vals);

  // lam[i] or the pinned value, as a polynomial
  Polynomial root(int i) const;
  void validate() const;  // PointsNotDistinct on repeated rational values
};

// Laurent polynomial in t with polynomial coefficients.
using TPoly = std::map<int, Polynomial>;

TPoly config_poly(const PointConfig& cfg, const TruncationContext& ctx);  // P(t)

// Structured rational function: finite sum of coeff * t^a * P(t)^e.
struct PExpr {
  std::map<std::pair<int, int>, Polynomial> terms;  // (t_exp, p_exp) -> coeff

  bool is_zero() const { return terms.empty(); }
  void add(int t_exp, int p_exp, const Polynomial& c);
  PExpr operator+(const PExpr& o) const;
};

PExpr pexpr_mul(const PExpr& a, const PExpr& b, const TruncationContext& ctx);
PExpr pexpr_derive_t(const PExpr& a, const PointConfig& cfg, const TruncationContext& ctx);

// The generic multi-point loop coordinates: chart j carries
// sum_{n, nu} b^j_{n, nu} t^{nu-1} P(t)^n over the context window.
// An optional keep-filter restricts which (n, nu) participate.
using VarKeep = std::vector<std::pair<int, int>>;  // kept (n, nu); empty = all

PExpr global_loop_series(int chart, const PointConfig& cfg, const TruncationContext& ctx,
                         const VarKeep* keep = nullptr);

// Pullback of a polynomial 1-form along the multi-point coordinates:
// sum_i f_i(B(t)) * dB^i/dt as a structured expression.
PExpr global_pullback(const XForm& eta, const PointConfig& cfg, const TruncationContext& ctx,
                      const VarKeep* keep = nullptr);

// Sum of the residues at the roots of P, computed as the t^{-1} coefficient
// of the expansion at infinity. Exact; the expansion order is derived from
// the term structure up front.
Polynomial total_residue(const PExpr& g, const PointConfig& cfg, const TruncationContext& ctx);

// Residue at one root of a rational-value configuration (independent route).
Polynomial local_residue(const PExpr& g, const PointConfig& cfg, int point,
                         const TruncationContext& ctx);

// Re-expansion of the multi-point coordinates around one rational point:
// returns, for each chart j and local mode m in [-M, local_hi], the linear
// polynomial in b_{n,nu} giving the single-point coordinate.
std::map<Variable, Polynomial> expand_at_point(const PointConfig& cfg, int point, int local_hi,
                                               const TruncationContext& ctx);

// Substitutes lam[j] -> lam[image[j-1]] per the merge surjection.
struct Merge {
  std::vector<int> image;  // 1-based target for each source point
  int target_count() const;
  std::vector<int> target_mults() const;
};

Polynomial restrict_diagonal(const Polynomial& f, const Merge& merge, const TruncationContext& ctx);

// Exact expansion of each degenerate source basis element t^{nu-1} P_J(t)^n
// in the target basis t^{mu-1} P_I(t)^m, together with the set of source
// elements whose expansion stays inside the target window.
struct DiagonalReindex {
  // target variable (m, mu) -> linear combination of source b_{n,nu}
  std::map<std::pair<int, int>, std::vector<std::tuple<int, int, Polynomial>>> image;
  VarKeep sound_sources;
  int target_neg = 0, target_pos = 0;  // target window actually used
};

DiagonalReindex diagonal_reindex(const Merge& merge, int target_neg, int target_pos,
                                 const TruncationContext& ctx);

// The factorization verdict for a 1-form (full pipeline) or a bare candidate
// loop function (invariance + extension tests).
Report verify_factorizing(const XForm& eta, const TruncationContext& ctx, int sample_count,
                          int j_max, std::uint64_t seed);
Report verify_factorizing_candidate(const Polynomial& candidate, const TruncationContext& ctx,
                                    int sample_count, std::uint64_t seed);

}  // namespace loopcas

#endif
