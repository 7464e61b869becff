#include "loopcas/variable.hpp"

#include <cctype>

#include "loopcas/errors.hpp"

namespace loopcas {

std::string var_render(const Variable& v) {
  switch (v.family) {
    case Family::Chart:
      return "b[" + std::to_string(v.chart) + "]";
    case Family::B:
      if (v.point == 0)
        return "b[" + std::to_string(v.chart) + "," + std::to_string(v.mode) + "]";
      return "b[" + std::to_string(v.chart) + "," + std::to_string(v.mode) + "," +
             std::to_string(v.point) + "]";
    case Family::A:
      return "a[" + std::to_string(v.chart) + "," + std::to_string(v.mode) + "]";
    case Family::Lambda:
      return "lam[" + std::to_string(v.point) + "]";
    case Family::Aux:
      return "aux[" + std::to_string(v.aux_id) + "]";
  }
  return "?";
}

namespace {

[[noreturn]] void bad_token(const std::string& t) {
  raise(Errc::InvalidVariableToken, "cannot parse variable token '" + t + "'");
}

std::vector<long> parse_index_list(const std::string& tok, std::size_t open, const std::string& whole) {
  if (tok.back() != ']') bad_token(whole);
  std::vector<long> out;
  std::string body = tok.substr(open + 1, tok.size() - open - 2);
  std::size_t pos = 0;
  while (pos <= body.size()) {
    auto comma = body.find(',', pos);
    std::string piece = body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (piece.empty()) bad_token(whole);
    std::size_t i = piece[0] == '-' ? 1 : 0;
    if (i == piece.size()) bad_token(whole);
    for (std::size_t j = i; j < piece.size(); ++j)
      if (!std::isdigit(static_cast<unsigned char>(piece[j]))) bad_token(whole);
    out.push_back(std::stol(piece));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

Variable var_parse(const std::string& token) {
  auto open = token.find('[');
  if (open == std::string::npos || token.empty() || token.back() != ']') bad_token(token);
  std::string head = token.substr(0, open);
  std::vector<long> idx = parse_index_list(token, open, token);
  if (head == "b") {
    if (idx.size() == 1) return Variable::chart_coord(static_cast<int>(idx[0]));
    if (idx.size() == 2) return Variable::b(static_cast<int>(idx[0]), static_cast<int>(idx[1]));
    if (idx.size() == 3) {
      if (idx[2] < 1) bad_token(token);
      return Variable::b(static_cast<int>(idx[0]), static_cast<int>(idx[1]), static_cast<int>(idx[2]));
    }
    bad_token(token);
  }
  if (head == "a") {
    if (idx.size() != 2) bad_token(token);
    return Variable::a(static_cast<int>(idx[0]), static_cast<int>(idx[1]));
  }
  if (head == "lam") {
    if (idx.size() != 1 || idx[0] < 1) bad_token(token);
    return Variable::lambda(static_cast<int>(idx[0]));
  }
  if (head == "aux") {
    if (idx.size() != 1) bad_token(token);
    return Variable::aux(static_cast<int>(idx[0]));
  }
  bad_token(token);
}

}  // namespace loopcas
