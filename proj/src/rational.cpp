#include "loopcas/rational.hpp"

#include <cctype>

#include "loopcas/errors.hpp"

namespace loopcas {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::MissingAssignment: return "MissingAssignment";
    case Errc::ChartOutOfRange: return "ChartOutOfRange";
    case Errc::WindowUnderflow: return "WindowUnderflow";
    case Errc::OutsideWindow: return "OutsideWindow";
    case Errc::DegreeZero: return "DegreeZero";
    case Errc::NotClosed: return "NotClosed";
    case Errc::NotRelative: return "NotRelative";
    case Errc::WeightOverflow: return "WeightOverflow";
    case Errc::OutsideClass: return "OutsideClass";
    case Errc::InsufficientWindow: return "InsufficientWindow";
    case Errc::PointsNotDistinct: return "PointsNotDistinct";
    case Errc::ExpansionOrderExceeded: return "ExpansionOrderExceeded";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::UnknownField: return "UnknownField";
    case Errc::InvalidRational: return "InvalidRational";
    case Errc::InvalidVariableToken: return "InvalidVariableToken";
    case Errc::BadArgument: return "BadArgument";
  }
  return "Error";
}

namespace {

bool valid_int_token(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

}  // namespace

Rational rat_parse(const std::string& text) {
  auto slash = text.find('/');
  std::string num = text.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
  if (!valid_int_token(num) || !valid_int_token(den))
    raise(Errc::InvalidRational, "cannot parse rational '" + text + "'");
  Integer n(num), d(den);
  if (d == 0) raise(Errc::InvalidRational, "zero denominator in '" + text + "'");
  return Rational(n, d);
}

std::string rat_render(const Rational& r) {
  std::string s = numerator(r).str();
  if (denominator(r) != 1) s += "/" + denominator(r).str();
  return s;
}

Rational rat_binomial(long n, long k) {
  if (k < 0) return 0;
  Rational acc = 1;
  for (long j = 0; j < k; ++j) {
    acc *= Rational(n - j);
    acc /= Rational(j + 1);
  }
  return acc;
}

Rational rat_factorial(long n) {
  Rational acc = 1;
  for (long j = 2; j <= n; ++j) acc *= Rational(j);
  return acc;
}

}  // namespace loopcas
