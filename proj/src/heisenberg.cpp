#include "loopcas/heisenberg.hpp"

#include <algorithm>
#include <thread>

namespace loopcas {

ModeMultiset multiset_add(const ModeMultiset& m, ModeKey k, int count) {
  ModeMultiset out;
  out.reserve(m.size() + 1);
  bool placed = false;
  for (auto& [key, c] : m) {
    if (key == k) {
      out.emplace_back(key, c + count);
      placed = true;
    } else {
      if (!placed && k < key) {
        out.emplace_back(k, count);
        placed = true;
      }
      out.emplace_back(key, c);
    }
  }
  if (!placed) out.emplace_back(k, count);
  return out;
}

bool multiset_contains(const ModeMultiset& big, const ModeMultiset& small) {
  auto it = big.begin();
  for (auto& [k, c] : small) {
    while (it != big.end() && it->first < k) ++it;
    if (it == big.end() || !(it->first == k) || it->second < c) return false;
  }
  return true;
}

ModeMultiset multiset_subtract(const ModeMultiset& big, const ModeMultiset& small) {
  ModeMultiset out;
  auto it = small.begin();
  for (auto& [k, c] : big) {
    int take = 0;
    if (it != small.end() && it->first == k) {
      take = it->second;
      ++it;
    }
    if (c - take > 0) out.emplace_back(k, c - take);
  }
  return out;
}

ModeMultiset multiset_union(const ModeMultiset& a, const ModeMultiset& b) {
  ModeMultiset out;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (i->first < j->first)
      out.push_back(*i++);
    else if (j->first < i->first)
      out.push_back(*j++);
    else {
      out.emplace_back(i->first, i->second + j->second);
      ++i, ++j;
    }
  }
  out.insert(out.end(), i, a.end());
  out.insert(out.end(), j, b.end());
  return out;
}

std::vector<ModeMultiset> multiset_subsets(const ModeMultiset& m) {
  std::vector<ModeMultiset> out{{}};
  for (auto& [k, c] : m) {
    std::vector<ModeMultiset> next;
    next.reserve(out.size() * static_cast<std::size_t>(c + 1));
    for (auto& base : out)
      for (int take = 0; take <= c; ++take) {
        ModeMultiset s = base;
        if (take > 0) s.emplace_back(k, take);
        next.push_back(std::move(s));
      }
    out = std::move(next);
  }
  return out;
}

long NormalWord::weight() const {
  long w = 0;
  for (auto& [k, c] : a_part) w += static_cast<long>(k.mode) * c;
  for (auto& [k, c] : b_part) w += static_cast<long>(k.mode) * c;
  return w;
}

int NormalWord::a_count() const {
  int n = 0;
  for (auto& [k, c] : a_part) n += c;
  return n;
}

int NormalWord::b0_degree() const {
  int n = 0;
  for (auto& [k, c] : b_part)
    if (k.mode == 0) n += c;
  return n;
}

std::string NormalWord::render() const {
  std::string s;
  for (auto& [k, c] : a_part) {
    if (!s.empty()) s += "*";
    s += var_render(Variable::a(k.chart, k.mode));
    if (c != 1) s += "^" + std::to_string(c);
  }
  for (auto& [k, c] : b_part) {
    if (!s.empty()) s += "*";
    s += var_render(Variable::b(k.chart, k.mode));
    if (c != 1) s += "^" + std::to_string(c);
  }
  if (s.empty()) return "1";
  return s + "*1";
}

void HeisenbergState::add(const NormalWord& w, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms.try_emplace(w, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms.erase(it);
  }
}

HeisenbergState HeisenbergState::operator+(const HeisenbergState& o) const {
  HeisenbergState out = *this;
  for (auto& [w, c] : o.terms) out.add(w, c);
  return out;
}

HeisenbergState HeisenbergState::operator-(const HeisenbergState& o) const {
  HeisenbergState out = *this;
  for (auto& [w, c] : o.terms) out.add(w, -c);
  return out;
}

HeisenbergState HeisenbergState::scaled(const Rational& c) const {
  HeisenbergState out;
  if (c == 0) return out;
  for (auto& [w, k] : terms) out.terms.emplace(w, k * c);
  return out;
}

long HeisenbergState::max_weight() const {
  long w = 0;
  for (auto& [word, c] : terms) w = std::max(w, word.weight());
  return w;
}

std::string HeisenbergState::render() const {
  if (terms.empty()) return "0";
  std::string s;
  for (auto& [w, c] : terms) {
    Rational a = c;
    if (s.empty()) {
      if (a < 0) {
        s += "-";
        a = -a;
      }
    } else {
      s += a < 0 ? " - " : " + ";
      if (a < 0) a = -a;
    }
    if (a == 1)
      s += w.render();
    else
      s += rat_render(a) + "*" + w.render();
  }
  return s;
}

HeisenbergState HeisenbergState::vacuum(Rational c) {
  HeisenbergState v;
  v.add(NormalWord{}, c);
  return v;
}

namespace {

bool kills_vacuum(const OpSym& op) { return op.is_a ? op.mode <= 0 : op.mode < 0; }

int multiplicity(const ModeMultiset& m, ModeKey k) {
  for (auto& [key, c] : m)
    if (key == k) return c;
  return 0;
}

}  // namespace

HeisenbergState apply_op(const OpSym& op, const HeisenbergState& v) {
  HeisenbergState out;
  for (auto& [word, c] : v.terms) {
    if (op.is_a) {
      if (op.mode >= 1) {
        NormalWord w = word;
        w.a_part = multiset_add(w.a_part, {op.chart, op.mode});
        out.add(w, c);
      } else {
        // a annihilator contracts with b_{-mode}: [a_m, b_n] = delta_{m,-n}
        int k = multiplicity(word.b_part, {op.chart, -op.mode});
        if (k == 0) continue;
        NormalWord w = word;
        w.b_part = multiset_subtract(w.b_part, {{{op.chart, -op.mode}, 1}});
        out.add(w, c * k);
      }
    } else {
      if (op.mode >= 0) {
        NormalWord w = word;
        w.b_part = multiset_add(w.b_part, {op.chart, op.mode});
        out.add(w, c);
      } else {
        // b annihilator contracts with a_{-mode}, with a sign:
        // b_n a_m = a_m b_n - delta_{m,-n}
        int k = multiplicity(word.a_part, {op.chart, -op.mode});
        if (k == 0) continue;
        NormalWord w = word;
        w.a_part = multiset_subtract(w.a_part, {{{op.chart, -op.mode}, 1}});
        out.add(w, c * Rational(-k));
      }
    }
  }
  return out;
}

namespace {

HeisenbergState normal_order_adjacent(const std::vector<OpSym>& word) {
  std::vector<std::pair<std::vector<OpSym>, Rational>> work{{word, Rational(1)}};
  HeisenbergState out;
  while (!work.empty()) {
    auto [w, c] = std::move(work.back());
    work.pop_back();
    if (!w.empty() && kills_vacuum(w.back())) continue;
    // leftmost annihilator standing left of a creator
    std::size_t swap_at = w.size();
    for (std::size_t i = 0; i + 1 < w.size(); ++i)
      if (kills_vacuum(w[i]) && !kills_vacuum(w[i + 1])) {
        swap_at = i;
        break;
      }
    if (swap_at == w.size()) {
      NormalWord nw;
      bool dead = false;
      for (auto& op : w) {
        if (kills_vacuum(op)) {
          dead = true;
          break;
        }
        if (op.is_a)
          nw.a_part = multiset_add(nw.a_part, {op.chart, op.mode});
        else
          nw.b_part = multiset_add(nw.b_part, {op.chart, op.mode});
      }
      if (!dead) out.add(nw, c);
      continue;
    }
    OpSym x = w[swap_at], y = w[swap_at + 1];
    std::vector<OpSym> swapped = w;
    std::swap(swapped[swap_at], swapped[swap_at + 1]);
    work.emplace_back(std::move(swapped), c);
    // scalar commutator [x, y] removes both operators
    Rational comm = 0;
    if (x.is_a != y.is_a && x.chart == y.chart) {
      const OpSym& a_op = x.is_a ? x : y;
      const OpSym& b_op = x.is_a ? y : x;
      if (a_op.mode == -b_op.mode) comm = x.is_a ? Rational(1) : Rational(-1);
    }
    if (comm != 0) {
      std::vector<OpSym> shorter;
      shorter.reserve(w.size() - 2);
      for (std::size_t i = 0; i < w.size(); ++i)
        if (i != swap_at && i != swap_at + 1) shorter.push_back(w[i]);
      work.emplace_back(std::move(shorter), c * comm);
    }
  }
  return out;
}

}  // namespace

HeisenbergState normal_order(const std::vector<OpSym>& word, RewriteStrategy strategy) {
  if (strategy == RewriteStrategy::AdjacentSwaps) return normal_order_adjacent(word);
  HeisenbergState v = HeisenbergState::vacuum();
  for (auto it = word.rbegin(); it != word.rend(); ++it) v = apply_op(*it, v);
  return v;
}

namespace {

// Splits a loop-function monomial into the annihilating footprint (negative
// modes, recorded as the a-modes they contract against) and the creators.
void split_monomial(const Monomial& m, ModeMultiset& footprint, ModeMultiset& creators) {
  for (auto& [v, e] : m.factors()) {
    if (v.family != Family::B || v.point != 0)
      raise(Errc::BadArgument, "loop functions act through single-point b modes, got " + var_render(v));
    if (v.mode < 0)
      footprint.emplace_back(ModeKey{v.chart, -v.mode}, e);
    else
      creators.emplace_back(ModeKey{v.chart, v.mode}, e);
  }
  std::sort(footprint.begin(), footprint.end());
  std::sort(creators.begin(), creators.end());
}

// Contraction of footprint D against the a-part: product over modes of
// (-1)^d k(k-1)...(k-d+1), k the available multiplicity.
Rational contraction_coefficient(const ModeMultiset& A, const ModeMultiset& D) {
  Rational coeff = 1;
  for (auto& [k, d] : D) {
    int avail = multiplicity(A, k);
    if (avail < d) return 0;
    long falling = 1;
    for (int j = 0; j < d; ++j) falling *= (avail - j);
    coeff *= Rational(d % 2 == 1 ? -falling : falling);
  }
  return coeff;
}

HeisenbergState act_monomial(const ModeMultiset& footprint, const ModeMultiset& creators,
                             const Rational& c, const HeisenbergState& v) {
  HeisenbergState out;
  for (auto& [word, wc] : v.terms) {
    Rational k = contraction_coefficient(word.a_part, footprint);
    if (k == 0) continue;
    NormalWord w;
    w.a_part = multiset_subtract(word.a_part, footprint);
    w.b_part = multiset_union(word.b_part, creators);
    out.add(w, wc * c * k);
  }
  return out;
}

}  // namespace

HeisenbergState mult_function(const Polynomial& phi, const HeisenbergState& v,
                              const TruncationContext& ctx) {
  (void)ctx;
  HeisenbergState out;
  for (auto& [m, c] : phi.terms()) {
    ModeMultiset footprint, creators;
    split_monomial(m, footprint, creators);
    out = out + act_monomial(footprint, creators, c, v);
  }
  return out;
}

FieldShift::FieldShift(const XForm& omega, int max_mode, const TruncationContext& ctx)
    : max_mode_(max_mode) {
  if (omega.degree() != 2) raise(Errc::BadArgument, "field shifts come from 2-forms");
  if (!omega.is_closed(ctx)) raise(Errc::NotClosed, "field shifts need a closed form");
  std::vector<LaurentSeries> loops;
  for (int i = 1; i <= ctx.charts; ++i) loops.push_back(ev_series(i, ctx));
  for (int i = 1; i <= ctx.charts; ++i) {
    LaurentSeries c_i;
    for (int k = 1; k <= ctx.charts; ++k) {
      Polynomial h = omega.h(k, i);
      if (h.is_zero()) continue;
      LaurentSeries term = series_mul(series_derive_t(loops[static_cast<std::size_t>(k - 1)]),
                                      series_compose(h, loops, ctx), ctx);
      c_i = series_add(c_i, term);
    }
    for (int m = 1; m <= max_mode; ++m) modes_[{i, m}] = laurent_coeff_sound(c_i, m - 1);
  }
}

const Polynomial& FieldShift::mode(int chart, int m) const {
  auto it = modes_.find({chart, m});
  if (it == modes_.end())
    raise(Errc::BadArgument, "field shift mode " + std::to_string(m) + " not computed");
  return it->second;
}

FieldShift FieldShift::reduced(const ExtraTruncation& extra, const TruncationContext& ctx) const {
  FieldShift out;
  out.max_mode_ = max_mode_;
  for (auto& [key, p] : modes_) out.modes_[key] = poly_reduce(p, ctx, extra);
  return out;
}

HeisenbergState shift_automorphism(const FieldShift& shift, const HeisenbergState& v,
                                   const TruncationContext& ctx) {
  HeisenbergState out;
  for (auto& [word, c] : v.terms) {
    HeisenbergState s;
    NormalWord base;
    base.b_part = word.b_part;
    s.add(base, c);
    std::vector<ModeKey> slots;
    for (auto& [k, cnt] : word.a_part)
      for (int i = 0; i < cnt; ++i) slots.push_back(k);
    for (auto it = slots.rbegin(); it != slots.rend(); ++it) {
      HeisenbergState created = apply_op(OpSym{true, it->chart, it->mode}, s);
      HeisenbergState shifted = mult_function(shift.mode(it->chart, it->mode), s, ctx);
      s = created + shifted;
    }
    out = out + s;
  }
  return out;
}

HeisenbergState shift_automorphism(const XForm& omega, const HeisenbergState& v,
                                   const TruncationContext& ctx) {
  int max_mode = 1;
  for (auto& [word, c] : v.terms)
    for (auto& [k, cnt] : word.a_part) max_mode = std::max(max_mode, k.mode);
  FieldShift shift(omega, max_mode, ctx);
  return shift_automorphism(shift, v, ctx);
}

HeisenbergState translate(const HeisenbergState& v, const TruncationContext& ctx) {
  HeisenbergState out;
  for (auto& [word, c] : v.terms) {
    for (auto& [k, cnt] : word.a_part) {
      NormalWord w = word;
      w.a_part = multiset_subtract(w.a_part, {{k, 1}});
      w.a_part = multiset_add(w.a_part, {k.chart, k.mode + 1});
      out.add(w, c * Rational(static_cast<long>(k.mode) * cnt));
    }
    for (auto& [k, cnt] : word.b_part) {
      NormalWord w = word;
      w.b_part = multiset_subtract(w.b_part, {{k, 1}});
      w.b_part = multiset_add(w.b_part, {k.chart, k.mode + 1});
      out.add(w, c * Rational(static_cast<long>(k.mode + 1) * cnt));
    }
  }
  if (ctx.weight_bound > 0 && out.max_weight() > ctx.weight_bound)
    raise(Errc::WeightOverflow,
          "translation exceeded the weight bound " + std::to_string(ctx.weight_bound));
  return out;
}

namespace {

// The field of a b-word is the plain product of the derived b-fields (the
// modes commute, so the normal ordering is vacuous):
//   Y(b_{m_1}...b_{m_d}|0>, t) = prod_j sum_n binom(n, m_j) b_n t^{n - m_j}.
// The k-th mode enumerates integer tuples with sum_j (n_j - m_j) = -k-1;
// annihilating modes deeper than the a-content of y act as zero, which makes
// the enumeration finite.
void bword_mode_rec(const std::vector<std::pair<int, int>>& factors, std::size_t idx, int remaining,
                    int floor_n, const Rational& coeff, const HeisenbergState& y,
                    HeisenbergState& out) {
  if (idx == factors.size()) {
    if (remaining == 0) out = out + y.scaled(coeff);
    return;
  }
  auto [chart, m] = factors[idx];
  // later factors can lower the running sum to floor_n each
  int slots_left = static_cast<int>(factors.size() - idx - 1);
  int hi = remaining - slots_left * floor_n;
  for (int n = floor_n; n <= hi; ++n) {
    Rational b = rat_binomial(n, m);
    if (b == 0) continue;
    HeisenbergState applied = apply_op(OpSym{false, chart, n}, y);
    if (applied.is_zero()) continue;
    bword_mode_rec(factors, idx + 1, remaining - n, floor_n, coeff * b, applied, out);
  }
}

}  // namespace

HeisenbergState field_mode(const HeisenbergState& x, int k, const HeisenbergState& y,
                           const TruncationContext& ctx) {
  (void)ctx;
  HeisenbergState out;
  int y_floor = 0;
  for (auto& [word, c] : y.terms)
    for (auto& [key, cnt] : word.a_part) y_floor = std::min(y_floor, -key.mode);

  for (auto& [word, c] : x.terms) {
    if (word.a_count() == 0) {
      if (word.b_part.empty()) {
        // vertex unit
        if (k == -1) out = out + y.scaled(c);
        continue;
      }
      std::vector<std::pair<int, int>> factors;
      int msum = 0;
      for (auto& [key, cnt] : word.b_part)
        for (int i = 0; i < cnt; ++i) {
          factors.emplace_back(key.chart, key.mode);
          msum += key.mode;
        }
      int target = msum - k - 1;
      bword_mode_rec(factors, 0, target, y_floor, c, y, out);
      continue;
    }
    if (word.a_count() == 1 && word.b_part.empty() && word.a_part.front().first.mode == 1) {
      int chart = word.a_part.front().first.chart;
      out = out + apply_op(OpSym{true, chart, -k}, y).scaled(c);
      continue;
    }
    raise(Errc::OutsideClass, "field modes are defined on the generating class, got " + word.render());
  }
  return out;
}

namespace {

void enumerate_parts(const std::vector<ModeKey>& keys, std::size_t idx, long budget_weight,
                     int budget_b0, ModeMultiset& acc, std::vector<ModeMultiset>& out) {
  if (idx == keys.size()) {
    out.push_back(acc);
    return;
  }
  const ModeKey& k = keys[idx];
  long unit = std::max(k.mode, 0);
  int max_count;
  if (k.mode == 0)
    max_count = budget_b0;
  else
    max_count = unit > 0 ? static_cast<int>(budget_weight / unit) : 0;
  for (int c = 0; c <= max_count; ++c) {
    if (c > 0) acc.emplace_back(k, c);
    enumerate_parts(keys, idx + 1, budget_weight - unit * c, k.mode == 0 ? budget_b0 - c : budget_b0,
                    acc, out);
    if (c > 0) acc.pop_back();
  }
}

}  // namespace

std::vector<NormalWord> basis_upto(int W, const TruncationContext& ctx) {
  if (W < 0) return {};
  if (ctx.weight_bound > 0 && W > ctx.weight_bound)
    raise(Errc::BadArgument, "basis weight exceeds the context weight bound");
  std::vector<ModeKey> a_keys, b_keys;
  for (int i = 1; i <= ctx.charts; ++i)
    for (int m = 1; m <= W; ++m) a_keys.push_back({i, m});
  for (int i = 1; i <= ctx.charts; ++i)
    for (int m = 0; m <= W; ++m) b_keys.push_back({i, m});
  std::sort(a_keys.begin(), a_keys.end());
  std::sort(b_keys.begin(), b_keys.end());

  std::vector<ModeMultiset> a_parts, b_parts;
  ModeMultiset acc;
  enumerate_parts(a_keys, 0, W, 0, acc, a_parts);
  enumerate_parts(b_keys, 0, W, ctx.b0_cap, acc, b_parts);

  std::vector<NormalWord> words;
  for (auto& a : a_parts) {
    long wa = 0;
    for (auto& [k, c] : a) wa += static_cast<long>(k.mode) * c;
    for (auto& b : b_parts) {
      long wb = 0;
      for (auto& [k, c] : b) wb += static_cast<long>(k.mode) * c;
      if (wa + wb > W) continue;
      NormalWord w;
      w.a_part = a;
      w.b_part = b;
      words.push_back(std::move(w));
    }
  }
  std::sort(words.begin(), words.end());
  return words;
}

ActionTable::ActionTable(const Polynomial& phi, const TruncationContext& ctx) {
  (void)ctx;
  for (auto& [m, c] : phi.terms()) {
    ModeMultiset footprint;
    Monomial pos;
    for (auto& [v, e] : m.factors()) {
      if (v.family != Family::B || v.point != 0)
        raise(Errc::BadArgument, "loop functions act through single-point b modes");
      if (v.mode < 0)
        footprint.emplace_back(ModeKey{v.chart, -v.mode}, e);
      else
        pos = pos.times(Monomial(v).pow(e));
    }
    std::sort(footprint.begin(), footprint.end());
    by_footprint_[footprint].emplace_back(pos, c);
  }
}

HeisenbergState ActionTable::act(const HeisenbergState& v) const {
  HeisenbergState out;
  for (auto& [word, wc] : v.terms) {
    for (auto& D : multiset_subsets(word.a_part)) {
      auto it = by_footprint_.find(D);
      if (it == by_footprint_.end()) continue;
      Rational k = contraction_coefficient(word.a_part, D);
      if (k == 0) continue;
      ModeMultiset rest = multiset_subtract(word.a_part, D);
      for (auto& [pos, c] : it->second) {
        NormalWord w;
        w.a_part = rest;
        w.b_part = word.b_part;
        for (auto& [v2, e] : pos.factors()) w.b_part = multiset_add(w.b_part, {v2.chart, v2.mode}, e);
        out.add(w, wc * c * k);
      }
    }
  }
  return out;
}

ExtraTruncation action_bound(int W) {
  ExtraTruncation extra;
  extra.bounded = true;
  extra.max_annihilation_weight = W;
  extra.min_b_mode_kept = -W;
  return extra;
}

Polynomial exp_action_bounded(const Polynomial& f, int W, const TruncationContext& ctx) {
  ExtraTruncation extra = action_bound(W);
  Polynomial f_red = poly_reduce(f, ctx, extra);

  // bucket by annihilation weight so high powers skip dead pairings early
  auto split = [](const Polynomial& p) {
    std::map<long, Polynomial> parts;
    for (auto& [m, c] : p.terms()) parts[m.annihilation_weight()].add_term(m, c);
    return parts;
  };
  auto f_parts = split(f_red);

  Polynomial acc = Polynomial::constant(1);
  Polynomial power = Polynomial::constant(1);
  Rational fact = 1;
  int kmax = std::min(ctx.nilpotency - 1, W);
  for (int k = 1; k <= kmax; ++k) {
    auto power_parts = split(power);
    Polynomial next;
    for (auto& [wp, pp] : power_parts)
      for (auto& [wf, pf] : f_parts) {
        if (wp + wf > W) continue;
        next = next + poly_mul(pp, pf, ctx, extra);
      }
    power = std::move(next);
    if (power.is_zero()) break;
    fact *= k;
    acc = acc + power.scaled(1 / fact);
  }
  return acc;
}

Report verify_automorphism(const XForm& omega, int W, const TruncationContext& ctx, int jobs) {
  Report rep;
  rep.job = "verify-automorphism";
  if (omega.degree() != 2) raise(Errc::BadArgument, "the verification needs a 2-form");
  if (!omega.is_closed(ctx)) raise(Errc::NotClosed, "the verification needs a closed form");
  // With min(M, L) >= 2W and epsilon > W, every monomial that can act on a
  // weight <= W state is present in the truncated action and shift.
  if (std::min(ctx.neg_window, ctx.pos_window) < 2 * W || ctx.nilpotency <= W)
    raise(Errc::InsufficientWindow, "need min(M, L) >= 2W and epsilon > W");

  Polynomial f = symplectic_action(omega, ctx).value;
  Polynomial s_eff = exp_action_bounded(f, W, ctx);
  ActionTable table(s_eff, ctx);
  FieldShift shift = FieldShift(omega, std::max(W, 1), ctx).reduced(action_bound(W), ctx);

  std::vector<NormalWord> basis = basis_upto(W, ctx);
  std::vector<Record> records(basis.size());

  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t idx = begin; idx < end; ++idx) {
      HeisenbergState v;
      v.add(basis[idx], Rational(1));
      HeisenbergState lhs = table.act(v);
      HeisenbergState rhs = shift_automorphism(shift, v, ctx);
      Record& r = records[idx];
      r.id = basis[idx].render();
      r.ref = "multiplication-equals-automorphism";
      r.pass = lhs == rhs;
      if (!r.pass) {
        HeisenbergState diff = lhs - rhs;
        r.witness =
            diff.terms.begin()->first.render() + " coeff " + rat_render(diff.terms.begin()->second);
      }
    }
  };

  int n_jobs = std::max(1, jobs);
  if (n_jobs == 1 || basis.size() < 32) {
    work(0, basis.size());
  } else {
    std::vector<std::thread> pool;
    std::size_t chunk = (basis.size() + n_jobs - 1) / n_jobs;
    for (int t = 0; t < n_jobs; ++t) {
      std::size_t b = t * chunk, e = std::min(basis.size(), b + chunk);
      if (b >= e) break;
      pool.emplace_back(work, b, e);
    }
    for (auto& th : pool) th.join();
  }
  rep.records = std::move(records);
  return rep;
}

Polynomial recover_from_action(const Polynomial& g, int W, const TruncationContext& ctx) {
  std::vector<ModeKey> a_keys;
  for (int i = 1; i <= ctx.charts; ++i)
    for (int m = 1; m <= W; ++m) a_keys.push_back({i, m});
  std::sort(a_keys.begin(), a_keys.end());
  std::vector<ModeMultiset> footprints;
  ModeMultiset acc;
  enumerate_parts(a_keys, 0, W, 0, acc, footprints);

  Polynomial recovered;
  for (auto& D : footprints) {
    HeisenbergState v;
    NormalWord w;
    w.a_part = D;
    v.add(w, Rational(1));
    HeisenbergState acted = mult_function(g, v, ctx);
    Rational norm = contraction_coefficient(D, D);
    for (auto& [word, c] : acted.terms) {
      if (!word.a_part.empty()) continue;
      Monomial m;
      for (auto& [k, cnt] : D) m = m.times(Monomial(Variable::b(k.chart, -k.mode)).pow(cnt));
      for (auto& [k, cnt] : word.b_part) m = m.times(Monomial(Variable::b(k.chart, k.mode)).pow(cnt));
      recovered.add_term(m, c / norm);
    }
  }
  return recovered;
}

}  // namespace loopcas
