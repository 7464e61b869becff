#include "loopcas/derham.hpp"

#include <algorithm>

#include "loopcas/errors.hpp"

namespace loopcas {

bool differentiable_in(const Variable& v, Universe u) {
  if (u == Universe::X) return v.family == Family::Chart;
  return v.family == Family::B || v.family == Family::Aux;
}

namespace {

// Sorts dvars in place; returns 0 if a variable repeats, else the sign of
// the sorting permutation.
int normalize_key(DifferentialForm::Key& k) {
  int sign = 1;
  for (std::size_t i = 1; i < k.size(); ++i)
    for (std::size_t j = i; j > 0 && k[j] < k[j - 1]; --j) {
      std::swap(k[j], k[j - 1]);
      sign = -sign;
    }
  for (std::size_t i = 1; i < k.size(); ++i)
    if (k[i] == k[i - 1]) return 0;
  return sign;
}

}  // namespace

DifferentialForm DifferentialForm::scalar(Polynomial p, Universe u) {
  DifferentialForm f(0, u);
  if (!p.is_zero()) f.terms_.emplace(Key{}, std::move(p));
  return f;
}

void DifferentialForm::add_term(Key dvars, const Polynomial& coeff) {
  if (coeff.is_zero()) return;
  int sign = normalize_key(dvars);
  if (sign == 0) return;
  Polynomial add = sign == 1 ? coeff : -coeff;
  auto [it, inserted] = terms_.try_emplace(std::move(dvars), add);
  if (!inserted) {
    it->second = it->second + add;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void DifferentialForm::add_term(Key dvars, const Monomial& m, const Rational& c) {
  add_term(std::move(dvars), Polynomial::term(c, m));
}

DifferentialForm DifferentialForm::operator+(const DifferentialForm& o) const {
  DifferentialForm out = *this;
  if (out.terms_.empty() && !o.terms_.empty()) {
    out.degree_ = o.degree_;
    out.universe_ = o.universe_;
  }
  for (auto& [k, p] : o.terms_) {
    auto [it, inserted] = out.terms_.try_emplace(k, p);
    if (!inserted) {
      it->second = it->second + p;
      if (it->second.is_zero()) out.terms_.erase(it);
    }
  }
  return out;
}

DifferentialForm DifferentialForm::operator-(const DifferentialForm& o) const {
  return *this + o.scaled(Rational(-1));
}

DifferentialForm DifferentialForm::scaled(const Rational& c) const {
  DifferentialForm out(degree_, universe_);
  if (c == 0) return out;
  for (auto& [k, p] : terms_) out.terms_.emplace(k, p.scaled(c));
  return out;
}

Polynomial DifferentialForm::scalar_part() const {
  auto it = terms_.find(Key{});
  return it == terms_.end() ? Polynomial{} : it->second;
}

std::string DifferentialForm::render() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (auto& [k, p] : terms_) {
    if (!s.empty()) s += " + ";
    std::string body = "(" + p.render() + ")";
    for (auto& v : k) body += " d" + var_render(v);
    s += body;
  }
  return s;
}

DifferentialForm derham_d(const DifferentialForm& w, const TruncationContext& ctx) {
  DifferentialForm out(w.degree() + 1, w.universe());
  for (auto& [key, p] : w.terms()) {
    for (auto& v : p.support()) {
      if (!differentiable_in(v, w.universe())) continue;
      Polynomial dp = poly_reduce(poly_derive(p, v), ctx);
      if (dp.is_zero()) continue;
      DifferentialForm::Key k2;
      k2.reserve(key.size() + 1);
      k2.push_back(v);
      k2.insert(k2.end(), key.begin(), key.end());
      out.add_term(std::move(k2), dp);
    }
  }
  return out;
}

DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b,
                       const TruncationContext& ctx) {
  if (a.universe() != b.universe() && !a.is_zero() && !b.is_zero())
    raise(Errc::BadArgument, "wedge of forms over different universes");
  DifferentialForm out(a.degree() + b.degree(), a.universe());
  for (auto& [ka, pa] : a.terms())
    for (auto& [kb, pb] : b.terms()) {
      int q = neg_dvar_count(ka) + neg_dvar_count(kb);
      Polynomial c = poly_mul(pa, pb, ctx, ExtraTruncation::neg_degree_cap(ctx.nilpotency - 1 - q));
      if (c.is_zero()) continue;
      DifferentialForm::Key k;
      k.reserve(ka.size() + kb.size());
      k.insert(k.end(), ka.begin(), ka.end());
      k.insert(k.end(), kb.begin(), kb.end());
      out.add_term(std::move(k), c);
    }
  return out;
}

DifferentialForm contract(const DifferentialForm& w, const VectorField& xi,
                          const TruncationContext& ctx) {
  if (w.degree() == 0) raise(Errc::DegreeZero, "cannot contract a 0-form");
  DifferentialForm out(w.degree() - 1, w.universe());
  for (auto& [key, p] : w.terms()) {
    for (std::size_t j = 0; j < key.size(); ++j) {
      auto comp = xi.components.find(key[j]);
      if (comp == xi.components.end() || comp->second.is_zero()) continue;
      Polynomial c = poly_mul(p, comp->second, ctx);
      if (j % 2 == 1) c = -c;
      DifferentialForm::Key k;
      k.reserve(key.size() - 1);
      for (std::size_t i = 0; i < key.size(); ++i)
        if (i != j) k.push_back(key[i]);
      out.add_term(std::move(k), c);
    }
  }
  return form_reduce(out, ctx);
}

namespace {

// One step of the derivation D_m on a single variable: (factor, image).
// Returns false when the variable is constant for D_m.
bool dm_image(const Variable& v, int m, int& factor, Variable& image) {
  if (v.family != Family::B) return false;
  factor = v.mode - m + 1;
  image = Variable::b(v.chart, v.mode - m + 1, v.point);
  return true;
}

}  // namespace

Reparam<Polynomial> reparam_derive(const Polynomial& p, int m, const TruncationContext& ctx) {
  if (m < 0) raise(Errc::BadArgument, "reparametrization index must be >= 0");
  Reparam<Polynomial> out;
  for (auto& [mono, c] : p.terms()) {
    for (std::size_t slot = 0; slot < mono.factors().size(); ++slot) {
      auto [v, e] = mono.factors()[slot];
      int factor = 0;
      Variable image;
      if (!dm_image(v, m, factor, image)) continue;
      if (factor == 0) continue;
      if (image.mode < -ctx.neg_window || image.mode > ctx.pos_window) {
        ++out.dropped;
        continue;
      }
      std::vector<Monomial::Factor> fs;
      for (std::size_t i = 0; i < mono.factors().size(); ++i) {
        auto [w, k] = mono.factors()[i];
        if (i == slot) {
          if (k > 1) fs.emplace_back(w, k - 1);
        } else {
          fs.emplace_back(w, k);
        }
      }
      Monomial base = Monomial::from_sorted(std::move(fs)).times(Monomial(image));
      if (base.neg_b_degree() >= ctx.nilpotency) continue;
      out.value.add_term(base, c * e * factor);
    }
  }
  return out;
}

Reparam<DifferentialForm> reparam_derive(const DifferentialForm& w, int m,
                                         const TruncationContext& ctx) {
  Reparam<DifferentialForm> out;
  out.value = DifferentialForm(w.degree(), w.universe());
  for (auto& [key, p] : w.terms()) {
    // Leibniz over the coefficient...
    auto dp = reparam_derive(p, m, ctx);
    out.dropped += dp.dropped;
    out.value.add_term(key, dp.value);
    // ...and over each differential slot.
    for (std::size_t j = 0; j < key.size(); ++j) {
      int factor = 0;
      Variable image;
      if (!dm_image(key[j], m, factor, image)) continue;
      if (factor == 0) continue;
      if (image.mode < -ctx.neg_window || image.mode > ctx.pos_window) {
        ++out.dropped;
        continue;
      }
      DifferentialForm::Key k = key;
      k[j] = image;
      out.value.add_term(std::move(k), p.scaled(Rational(factor)));
    }
  }
  out.value = form_reduce(out.value, ctx);
  return out;
}

int y_weight(const Monomial& m, const DifferentialForm::Key& dvars) {
  int w = m.neg_b_degree();
  for (auto& v : dvars)
    if (v.is_neg_b()) ++w;
  return w;
}

int neg_dvar_count(const DifferentialForm::Key& dvars) {
  int q = 0;
  for (auto& v : dvars)
    if (v.is_neg_b()) ++q;
  return q;
}

DifferentialForm form_reduce(const DifferentialForm& w, const TruncationContext& ctx) {
  DifferentialForm out(w.degree(), w.universe());
  for (auto& [key, p] : w.terms()) {
    bool key_ok = true;
    for (auto& v : key)
      if (v.family == Family::B && (v.mode < -ctx.neg_window || v.mode > ctx.pos_window))
        key_ok = false;
    if (!key_ok) continue;
    int q = neg_dvar_count(key);
    Polynomial r = poly_reduce(p, ctx, ExtraTruncation::neg_degree_cap(ctx.nilpotency - 1 - q));
    out.add_term(key, r);
  }
  return out;
}

DifferentialForm form_scale(const DifferentialForm& w, const Polynomial& p,
                            const TruncationContext& ctx) {
  DifferentialForm out(w.degree(), w.universe());
  for (auto& [key, q] : w.terms()) {
    int neg = neg_dvar_count(key);
    Polynomial c = poly_mul(q, p, ctx, ExtraTruncation::neg_degree_cap(ctx.nilpotency - 1 - neg));
    out.add_term(key, c);
  }
  return out;
}

bool is_relative(const DifferentialForm& w) {
  for (auto& [key, p] : w.terms())
    for (auto& [mono, c] : p.terms())
      if (y_weight(mono, key) == 0) return false;
  return true;
}

DifferentialForm euler_homotopy(const DifferentialForm& w, const TruncationContext& ctx) {
  if (w.degree() == 0) raise(Errc::DegreeZero, "no homotopy in degree -1");
  DifferentialForm out(w.degree() - 1, w.universe());
  for (auto& [key, p] : w.terms()) {
    for (auto& [mono, c] : p.terms()) {
      int k = y_weight(mono, key);
      if (k == 0) raise(Errc::NotRelative, "term " + mono.render() + " has y-weight 0");
      for (std::size_t j = 0; j < key.size(); ++j) {
        if (!key[j].is_neg_b()) continue;
        Rational coeff = c / k;
        if (j % 2 == 1) coeff = -coeff;
        DifferentialForm::Key rest;
        rest.reserve(key.size() - 1);
        for (std::size_t i = 0; i < key.size(); ++i)
          if (i != j) rest.push_back(key[i]);
        out.add_term(std::move(rest), mono.times(Monomial(key[j])), coeff);
      }
    }
  }
  return out;
}

DifferentialForm poincare_inverse(const DifferentialForm& alpha, const TruncationContext& ctx) {
  if (!derham_d(alpha, ctx).is_zero())
    raise(Errc::NotClosed, "input to the Poincare inverse must be closed");
  return euler_homotopy(alpha, ctx);
}

}  // namespace loopcas
