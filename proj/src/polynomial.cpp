#include "loopcas/polynomial.hpp"

#include <algorithm>
#include <climits>

#include "loopcas/errors.hpp"

namespace loopcas {

Monomial Monomial::times(const Monomial& other) const {
  std::vector<Factor> out;
  out.reserve(factors_.size() + other.factors_.size());
  auto a = factors_.begin(), ae = factors_.end();
  auto b = other.factors_.begin(), be = other.factors_.end();
  while (a != ae && b != be) {
    if (a->first < b->first)
      out.push_back(*a++);
    else if (b->first < a->first)
      out.push_back(*b++);
    else {
      out.emplace_back(a->first, a->second + b->second);
      ++a, ++b;
    }
  }
  out.insert(out.end(), a, ae);
  out.insert(out.end(), b, be);
  return from_sorted(std::move(out));
}

Monomial Monomial::pow(int e) const {
  std::vector<Factor> out = factors_;
  for (auto& f : out) f.second *= e;
  return from_sorted(std::move(out));
}

int Monomial::degree() const {
  int d = 0;
  for (auto& [v, e] : factors_) d += e;
  return d;
}

int Monomial::neg_b_degree() const {
  int d = 0;
  for (auto& [v, e] : factors_)
    if (v.is_neg_b()) d += e;
  return d;
}

long Monomial::annihilation_weight() const {
  long w = 0;
  for (auto& [v, e] : factors_)
    if (v.is_neg_b()) w += static_cast<long>(-v.mode) * e;
  return w;
}

long Monomial::mode_sum() const {
  long s = 0;
  for (auto& [v, e] : factors_)
    if (v.family == Family::B) s += static_cast<long>(v.mode) * e;
  return s;
}

int Monomial::max_b_mode() const {
  int m = INT_MIN;
  for (auto& [v, e] : factors_)
    if (v.family == Family::B) m = std::max(m, v.mode);
  return m;
}

bool Monomial::any_b_mode_outside(int neg_window, int pos_window) const {
  for (auto& [v, e] : factors_)
    if (v.family == Family::B && (v.mode < -neg_window || v.mode > pos_window)) return true;
  return false;
}

bool Monomial::any_b_mode_below(int floor) const {
  for (auto& [v, e] : factors_)
    if (v.family == Family::B && v.mode < floor) return true;
  return false;
}

bool Monomial::has_family(Family f) const {
  for (auto& [v, e] : factors_)
    if (v.family == f) return true;
  return false;
}

int Monomial::exponent_of(const Variable& v) const {
  for (auto& [w, e] : factors_)
    if (w == v) return e;
  return 0;
}

std::string Monomial::render() const {
  if (factors_.empty()) return "1";
  std::string s;
  for (auto& [v, e] : factors_) {
    if (!s.empty()) s += "*";
    s += var_render(v);
    if (e != 1) s += "^" + std::to_string(e);
  }
  return s;
}

Polynomial Polynomial::constant(Rational c) { return term(std::move(c), Monomial()); }

Polynomial Polynomial::term(Rational c, Monomial m) {
  Polynomial p;
  if (c != 0) p.terms_.emplace(std::move(m), std::move(c));
  return p;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial out = *this;
  for (auto& [m, c] : o.terms_) out.add_term(m, c);
  return out;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  Polynomial out = *this;
  for (auto& [m, c] : o.terms_) out.add_term(m, -c);
  return out;
}

Polynomial Polynomial::operator-() const {
  Polynomial out;
  for (auto& [m, c] : terms_) out.terms_.emplace(m, -c);
  return out;
}

Polynomial Polynomial::scaled(const Rational& c) const {
  Polynomial out;
  if (c == 0) return out;
  for (auto& [m, k] : terms_) out.terms_.emplace(m, k * c);
  return out;
}

Rational Polynomial::constant_term() const {
  auto it = terms_.find(Monomial());
  return it == terms_.end() ? Rational(0) : it->second;
}

int Polynomial::degree() const {
  int d = 0;
  for (auto& [m, c] : terms_) d = std::max(d, m.degree());
  return d;
}

long Polynomial::max_lambda_degree() const {
  long d = 0;
  for (auto& [m, c] : terms_) {
    long t = 0;
    for (auto& [v, e] : m.factors())
      if (v.family == Family::Lambda) t += e;
    d = std::max(d, t);
  }
  return d;
}

std::vector<Variable> Polynomial::support() const {
  std::vector<Variable> vs;
  for (auto& [m, c] : terms_)
    for (auto& [v, e] : m.factors()) vs.push_back(v);
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  return vs;
}

std::string Polynomial::render() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (auto& [m, c] : terms_) {
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
    if (m.is_unit())
      s += rat_render(a);
    else if (a == 1)
      s += m.render();
    else
      s += rat_render(a) + "*" + m.render();
  }
  return s;
}

namespace {

bool kept_by(const Monomial& m, const TruncationContext& ctx, const ExtraTruncation& extra) {
  if (m.neg_b_degree() >= ctx.nilpotency) return false;
  if (m.any_b_mode_outside(ctx.neg_window, ctx.pos_window)) return false;
  return extra.keeps(m);
}

}  // namespace

Polynomial poly_reduce(const Polynomial& p, const TruncationContext& ctx, const ExtraTruncation& extra) {
  Polynomial out;
  for (auto& [m, c] : p.terms())
    if (kept_by(m, ctx, extra)) out.add_term(m, c);
  return out;
}

Polynomial poly_mul(const Polynomial& a, const Polynomial& b, const TruncationContext& ctx,
                    const ExtraTruncation& extra) {
  Polynomial out;
  for (auto& [ma, ca] : a.terms()) {
    if (!kept_by(ma, ctx, extra)) continue;
    for (auto& [mb, cb] : b.terms()) {
      Monomial m = ma.times(mb);
      if (!kept_by(m, ctx, extra)) continue;
      out.add_term(m, ca * cb);
    }
  }
  return out;
}

Polynomial poly_pow(const Polynomial& p, int e, const TruncationContext& ctx,
                    const ExtraTruncation& extra) {
  Polynomial acc = Polynomial::constant(1);
  for (int i = 0; i < e; ++i) {
    acc = poly_mul(acc, p, ctx, extra);
    if (acc.is_zero()) break;
  }
  return acc;
}

Polynomial poly_derive(const Polynomial& p, const Variable& v) {
  Polynomial out;
  for (auto& [m, c] : p.terms()) {
    int e = m.exponent_of(v);
    if (e == 0) continue;
    std::vector<Monomial::Factor> fs;
    for (auto& [w, k] : m.factors()) {
      if (w == v) {
        if (k > 1) fs.emplace_back(w, k - 1);
      } else {
        fs.emplace_back(w, k);
      }
    }
    out.add_term(Monomial::from_sorted(std::move(fs)), c * e);
  }
  return out;
}

namespace {

Polynomial subst_impl(const Polynomial& p, const std::map<Variable, Polynomial>& assignment,
                      const TruncationContext& ctx, bool strict) {
  // Memoize images of powers within one call.
  std::map<std::pair<Variable, int>, Polynomial> powers;
  auto image_pow = [&](const Variable& v, int e) -> const Polynomial& {
    auto key = std::make_pair(v, e);
    auto it = powers.find(key);
    if (it != powers.end()) return it->second;
    auto base = assignment.find(v);
    Polynomial img;
    if (base == assignment.end()) {
      if (strict) raise(Errc::MissingAssignment, "no image for " + var_render(v));
      img = Polynomial::term(Rational(1), Monomial(v).pow(e));
    } else {
      img = poly_pow(base->second, e, ctx);
    }
    return powers.emplace(key, std::move(img)).first->second;
  };

  Polynomial out;
  for (auto& [m, c] : p.terms()) {
    Polynomial acc = Polynomial::constant(c);
    for (auto& [v, e] : m.factors()) {
      acc = poly_mul(acc, image_pow(v, e), ctx);
      if (acc.is_zero()) break;
    }
    out = out + acc;
  }
  return poly_reduce(out, ctx);
}

}  // namespace

Polynomial poly_subst(const Polynomial& p, const std::map<Variable, Polynomial>& assignment,
                      const TruncationContext& ctx) {
  return subst_impl(p, assignment, ctx, /*strict=*/true);
}

Polynomial poly_subst_partial(const Polynomial& p, const std::map<Variable, Polynomial>& assignment,
                              const TruncationContext& ctx) {
  return subst_impl(p, assignment, ctx, /*strict=*/false);
}

}  // namespace loopcas
