#ifndef LOOPCAS_HEISENBERG_HPP
#define LOOPCAS_HEISENBERG_HPP

#include <map>
#include <string>
#include <vector>

#include "loopcas/report.hpp"
#include "loopcas/transgression.hpp"

namespace loopcas {

struct ModeKey {
  int chart = 0;
  int mode = 0;
  auto operator<=>(const ModeKey&) const = default;
};

// Sorted multiset of modes with positive multiplicities.
using ModeMultiset = std::vector<std::pair<ModeKey, int>>;

ModeMultiset multiset_add(const ModeMultiset& m, ModeKey k, int count = 1);
bool multiset_contains(const ModeMultiset& big, const ModeMultiset& small);
ModeMultiset multiset_subtract(const ModeMultiset& big, const ModeMultiset& small);
ModeMultiset multiset_union(const ModeMultiset& a, const ModeMultiset& b);
// All sub-multisets, deterministic order.
std::vector<ModeMultiset> multiset_subsets(const ModeMultiset& m);

// Canonical basis word a^{i_1}_{m_1}...b^{j_1}_{n_1}...|0> with creation
// modes m >= 1 on the a side and n >= 0 on the b side.
struct NormalWord {
  ModeMultiset a_part;
  ModeMultiset b_part;

  auto operator<=>(const NormalWord&) const = default;
  long weight() const;
  int a_count() const;
  int b0_degree() const;
  std::string render() const;
};

struct HeisenbergState {
  std::map<NormalWord, Rational> terms;

  bool is_zero() const { return terms.empty(); }
  bool operator==(const HeisenbergState&) const = default;
  void add(const NormalWord& w, const Rational& c);
  HeisenbergState operator+(const HeisenbergState& o) const;
  HeisenbergState operator-(const HeisenbergState& o) const;
  HeisenbergState scaled(const Rational& c) const;
  long max_weight() const;
  std::string render() const;

  static HeisenbergState vacuum(Rational c = Rational(1));
};

// One generator in a free operator word.
struct OpSym {
  bool is_a = false;
  int chart = 1;
  int mode = 0;
};

enum class RewriteStrategy {
  ApplyRightToLeft,  // evaluate the word as operators acting on the vacuum
  AdjacentSwaps,     // move annihilators right by adjacent commutator swaps
};

// Rewrites a free word applied to the vacuum into the canonical basis.
// Both strategies produce the same state (confluence).
HeisenbergState normal_order(const std::vector<OpSym>& word,
                             RewriteStrategy strategy = RewriteStrategy::ApplyRightToLeft);

// Single-generator application to a normal state (any mode).
HeisenbergState apply_op(const OpSym& op, const HeisenbergState& v);

// Module action of a loop function: expands phi into monomials and contracts
// annihilating modes against the a side in closed form.
HeisenbergState mult_function(const Polynomial& phi, const HeisenbergState& v,
                              const TruncationContext& ctx);

// Mode polynomials of the field shift attached to a closed 2-form:
// shift(i, m) multiplies by the t^{m-1} coefficient of
// sum_k (b^k)'(t) h_{ki}(b(t)).
class FieldShift {
 public:
  FieldShift() = default;
  FieldShift(const XForm& omega, int max_mode, const TruncationContext& ctx);
  const Polynomial& mode(int chart, int m) const;
  int max_mode() const { return max_mode_; }
  FieldShift reduced(const ExtraTruncation& extra, const TruncationContext& ctx) const;

 private:
  std::map<std::pair<int, int>, Polynomial> modes_;
  int max_mode_ = 0;
};

// The filtered vertex-algebra automorphism attached to a closed 2-form:
// fixes b modes, sends a^i_m to a^i_m + (shift mode operator).
HeisenbergState shift_automorphism(const FieldShift& shift, const HeisenbergState& v,
                                   const TruncationContext& ctx);
HeisenbergState shift_automorphism(const XForm& omega, const HeisenbergState& v,
                                   const TruncationContext& ctx);

// Translation operator: derivation with [T, a^i_m] = m a^i_{m+1},
// [T, b^j_n] = (n+1) b^j_{n+1}, T|0> = 0. Raises weight by one;
// WeightOverflow past ctx.weight_bound.
HeisenbergState translate(const HeisenbergState& v, const TruncationContext& ctx);

// x o_k y for x in the generating class W1 = span{|0>, a^i_1|0>, b-words|0>}.
// OutsideClass otherwise.
HeisenbergState field_mode(const HeisenbergState& x, int k, const HeisenbergState& y,
                           const TruncationContext& ctx);

// All normal words of weight <= W with b_0-degree <= ctx.b0_cap,
// deterministic order.
std::vector<NormalWord> basis_upto(int W, const TruncationContext& ctx);

// Per-monomial footprint index of a loop function for fast repeated action.
class ActionTable {
 public:
  ActionTable(const Polynomial& phi, const TruncationContext& ctx);
  HeisenbergState act(const HeisenbergState& v) const;

 private:
  std::map<ModeMultiset, std::vector<std::pair<Monomial, Rational>>> by_footprint_;
};

// Action-relevant reduction: on states of weight <= W, monomials with
// annihilation weight > W or any mode below -W act as zero, so they can be
// dropped before exponentiating. verify_automorphism relies on this.
ExtraTruncation action_bound(int W);

// exp(f) truncated to the terms that can act on weight <= W states,
// computed with annihilation-weight bucketing.
Polynomial exp_action_bounded(const Polynomial& f, int W, const TruncationContext& ctx);

// State-by-state equality of multiplication by exp(symplectic action) and the
// shift automorphism over the full weight-bounded basis. InsufficientWindow
// unless min(M, L) >= 2W and epsilon > W (the bound making the truncated
// equality exact).
Report verify_automorphism(const XForm& omega, int W, const TruncationContext& ctx, int jobs = 1);

// Constructive faithfulness: recovers every coefficient of g from its action
// on matched creation states; exact for g with annihilation weight <= W.
Polynomial recover_from_action(const Polynomial& g, int W, const TruncationContext& ctx);

}  // namespace loopcas

#endif
