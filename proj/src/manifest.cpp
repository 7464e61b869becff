#include "loopcas/manifest.hpp"

#include <nlohmann/json.hpp>

namespace loopcas {

const char* job_name(Job j) {
  switch (j) {
    case Job::Transgress: return "transgress";
    case Job::Dinv: return "dinv";
    case Job::Action: return "action";
    case Job::Residue: return "residue";
    case Job::VerifyInvariance: return "verify-invariance";
    case Job::VerifyAutomorphism: return "verify-automorphism";
    case Job::VerifyFactorization: return "verify-factorization";
    case Job::Selftest: return "selftest";
  }
  return "?";
}

std::optional<Job> job_from_name(const std::string& s) {
  for (Job j : {Job::Transgress, Job::Dinv, Job::Action, Job::Residue, Job::VerifyInvariance,
                Job::VerifyAutomorphism, Job::VerifyFactorization, Job::Selftest})
    if (s == job_name(j)) return j;
  return std::nullopt;
}

namespace {

using Json = nlohmann::json;

void reject_unknown(const Json& obj, std::initializer_list<const char*> allowed,
                    const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (auto* name : allowed) ok = ok || it.key() == name;
    if (!ok) raise(Errc::UnknownField, "unknown field '" + it.key() + "' in " + where);
  }
}

long need_int(const Json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) raise(Errc::SyntaxError, "missing field '" + std::string(key) + "' in " + where);
  const Json& v = obj.at(key);
  if (!v.is_number_integer()) raise(Errc::SyntaxError, "field '" + std::string(key) + "' must be an integer");
  return v.get<long>();
}

long int_or(const Json& obj, const char* key, long fallback) {
  if (!obj.contains(key)) return fallback;
  const Json& v = obj.at(key);
  if (!v.is_number_integer()) raise(Errc::SyntaxError, "field '" + std::string(key) + "' must be an integer");
  return v.get<long>();
}

// "b[1,-2]^3" -> (variable, exponent)
std::pair<Variable, int> parse_power_token(const std::string& token) {
  auto caret = token.find('^');
  std::string head = caret == std::string::npos ? token : token.substr(0, caret);
  int exp = 1;
  if (caret != std::string::npos) {
    std::string e = token.substr(caret + 1);
    if (e.empty() || e.find_first_not_of("0123456789") != std::string::npos)
      raise(Errc::InvalidVariableToken, "bad exponent in '" + token + "'");
    exp = std::stoi(e);
    if (exp < 1) raise(Errc::InvalidVariableToken, "exponent must be >= 1 in '" + token + "'");
  }
  return {var_parse(head), exp};
}

Monomial parse_monomial(const Json& arr) {
  if (!arr.is_array()) raise(Errc::SyntaxError, "monomial must be an array of variable tokens");
  Monomial m;
  for (auto& tok : arr) {
    if (!tok.is_string()) raise(Errc::SyntaxError, "variable tokens must be strings");
    auto [v, e] = parse_power_token(tok.get<std::string>());
    m = m.times(Monomial(v).pow(e));
  }
  return m;
}

Polynomial parse_poly_terms(const Json& arr, bool allow_differentials) {
  if (!arr.is_array()) raise(Errc::SyntaxError, "expected an array of terms");
  Polynomial p;
  for (auto& term : arr) {
    if (!term.is_object()) raise(Errc::SyntaxError, "each term must be an object");
    reject_unknown(term, {"coefficient", "monomial", "differentials"}, "term");
    if (!allow_differentials && term.contains("differentials"))
      raise(Errc::UnknownField, "differentials are not allowed here");
    if (!term.contains("coefficient") || !term.at("coefficient").is_string())
      raise(Errc::SyntaxError, "terms need a string coefficient");
    Rational c = rat_parse(term.at("coefficient").get<std::string>());
    Monomial m = term.contains("monomial") ? parse_monomial(term.at("monomial")) : Monomial{};
    p.add_term(m, c);
  }
  return p;
}

XForm parse_form(const Json& arr, int degree) {
  if (!arr.is_array()) raise(Errc::SyntaxError, "expected an array of form terms");
  DifferentialForm f(degree, Universe::X);
  for (auto& term : arr) {
    if (!term.is_object()) raise(Errc::SyntaxError, "each term must be an object");
    reject_unknown(term, {"coefficient", "monomial", "differentials"}, "form term");
    if (!term.contains("coefficient") || !term.at("coefficient").is_string())
      raise(Errc::SyntaxError, "terms need a string coefficient");
    Rational c = rat_parse(term.at("coefficient").get<std::string>());
    Monomial m = term.contains("monomial") ? parse_monomial(term.at("monomial")) : Monomial{};
    DifferentialForm::Key key;
    if (term.contains("differentials")) {
      const Json& ds = term.at("differentials");
      if (!ds.is_array()) raise(Errc::SyntaxError, "differentials must be an array");
      for (auto& tok : ds) {
        if (!tok.is_string()) raise(Errc::SyntaxError, "variable tokens must be strings");
        key.push_back(var_parse(tok.get<std::string>()));
      }
    }
    if (static_cast<int>(key.size()) != degree)
      raise(Errc::SyntaxError, "expected " + std::to_string(degree) + " differentials per term");
    f.add_term(key, Polynomial::term(c, m));
  }
  return XForm(f);
}

LaurentSeries parse_series(const Json& arr) {
  if (!arr.is_array() || arr.empty()) raise(Errc::SyntaxError, "a series is a nonempty array of entries");
  LaurentSeries s;
  bool first = true;
  for (auto& entry : arr) {
    if (!entry.is_object()) raise(Errc::SyntaxError, "series entries must be objects");
    reject_unknown(entry, {"exp", "coefficient", "monomial"}, "series entry");
    int e = static_cast<int>(need_int(entry, "exp", "series entry"));
    if (!entry.contains("coefficient") || !entry.at("coefficient").is_string())
      raise(Errc::SyntaxError, "series entries need a string coefficient");
    Rational c = rat_parse(entry.at("coefficient").get<std::string>());
    Monomial m = entry.contains("monomial") ? parse_monomial(entry.at("monomial")) : Monomial{};
    Polynomial cur = Polynomial::term(c, m);
    auto it = s.coeff.find(e);
    if (it == s.coeff.end()) {
      if (!cur.is_zero()) s.coeff.emplace(e, cur);
    } else {
      it->second = it->second + cur;
      if (it->second.is_zero()) s.coeff.erase(it);
    }
    s.lo = first ? e : std::min(s.lo, e);
    s.hi = first ? e : std::max(s.hi, e);
    first = false;
  }
  s.exact_tail = true;
  return s;
}

}  // namespace

Manifest parse_manifest(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    raise(Errc::SyntaxError,
          "line " + std::to_string(line) + ", column " + std::to_string(col) + ": invalid JSON");
  }
  if (!j.is_object()) raise(Errc::SyntaxError, "manifest must be a JSON object");
  reject_unknown(j, {"dimension", "truncation", "job", "seed", "samples", "weight", "j_max", "m_max",
                     "inputs"},
                 "manifest");

  Manifest m;
  m.raw = text;
  m.dimension = static_cast<int>(need_int(j, "dimension", "manifest"));

  if (!j.contains("truncation") || !j.at("truncation").is_object())
    raise(Errc::SyntaxError, "manifest needs a truncation object");
  const Json& tr = j.at("truncation");
  reject_unknown(tr, {"M", "L", "epsilon", "weight_bound", "b0_cap"}, "truncation");
  m.truncation.charts = m.dimension;
  m.truncation.neg_window = static_cast<int>(need_int(tr, "M", "truncation"));
  m.truncation.pos_window = static_cast<int>(need_int(tr, "L", "truncation"));
  m.truncation.nilpotency = static_cast<int>(need_int(tr, "epsilon", "truncation"));
  m.truncation.weight_bound = static_cast<int>(int_or(tr, "weight_bound", 0));
  m.truncation.b0_cap = static_cast<int>(int_or(tr, "b0_cap", 0));
  m.truncation.validate();

  if (!j.contains("job") || !j.at("job").is_string())
    raise(Errc::SyntaxError, "manifest needs a job name");
  auto job = job_from_name(j.at("job").get<std::string>());
  if (!job) raise(Errc::SyntaxError, "unknown job '" + j.at("job").get<std::string>() + "'");
  m.job = *job;

  m.seed = static_cast<std::uint64_t>(int_or(j, "seed", 1));
  m.samples = static_cast<int>(int_or(j, "samples", 5));
  m.weight = static_cast<int>(int_or(j, "weight", m.truncation.weight_bound));
  m.j_max = static_cast<int>(int_or(j, "j_max", 2));
  m.m_max = static_cast<int>(int_or(j, "m_max", 3));

  if (j.contains("inputs")) {
    const Json& in = j.at("inputs");
    if (!in.is_object()) raise(Errc::SyntaxError, "inputs must be an object");
    reject_unknown(in, {"eta", "omega", "candidate", "series"}, "inputs");
    if (in.contains("eta")) m.eta = parse_form(in.at("eta"), 1);
    if (in.contains("omega")) m.omega = parse_form(in.at("omega"), 2);
    if (in.contains("candidate")) m.candidate = parse_poly_terms(in.at("candidate"), false);
    if (in.contains("series")) {
      const Json& ss = in.at("series");
      if (!ss.is_array()) raise(Errc::SyntaxError, "series input must be an array of series");
      for (auto& one : ss) m.residue_slots.push_back(parse_series(one));
    }
  }

  // chart sanity for parsed forms
  auto check_charts = [&](const Polynomial& p) {
    for (auto& v : p.support())
      if ((v.family == Family::Chart || v.family == Family::B || v.family == Family::A) &&
          (v.chart < 1 || v.chart > m.dimension))
        raise(Errc::ChartOutOfRange, var_render(v) + " exceeds dimension " + std::to_string(m.dimension));
  };
  if (m.eta)
    for (auto& [k, p] : m.eta->form().terms()) check_charts(p);
  if (m.omega)
    for (auto& [k, p] : m.omega->form().terms()) check_charts(p);
  if (m.candidate) check_charts(*m.candidate);

  return m;
}

}  // namespace loopcas
