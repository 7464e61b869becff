#ifndef LOOPCAS_VARIABLE_HPP
#define LOOPCAS_VARIABLE_HPP

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace loopcas {

// Variable families, in canonical order.
//   Chart  -- coordinate b^i on the base affine space, token b[i]
//   B      -- loop mode b^i_n (token b[i,n]) or multi-point b^i_{n,nu}
//             (token b[i,n,nu]); nu = 0 marks the single-point setting
//   A      -- Heisenberg bookkeeping mode a^i_n, token a[i,n]
//   Lambda -- base point coordinate lam[i]
//   Aux    -- auxiliary scalar aux[k]
enum class Family : std::uint8_t { Chart = 0, B = 1, A = 2, Lambda = 3, Aux = 4 };

// Total order is lexicographic on (family, chart, mode, point, aux_id);
// it is the order used everywhere (monomials, rendering, reports).
struct Variable {
  Family family = Family::Chart;
  std::int32_t chart = 0;
  std::int32_t mode = 0;
  std::int32_t point = 0;
  std::int32_t aux_id = 0;

  auto operator<=>(const Variable&) const = default;

  static Variable chart_coord(int i) { return {Family::Chart, i, 0, 0, 0}; }
  static Variable b(int i, int n) { return {Family::B, i, n, 0, 0}; }
  static Variable b(int i, int n, int nu) { return {Family::B, i, n, nu, 0}; }
  static Variable a(int i, int n) { return {Family::A, i, n, 0, 0}; }
  static Variable lambda(int i) { return {Family::Lambda, 0, 0, i, 0}; }
  static Variable aux(int k) { return {Family::Aux, 0, 0, 0, k}; }

  bool is_neg_b() const { return family == Family::B && mode < 0; }
};

std::string var_render(const Variable& v);

// Parses the documented token syntax: b[i], b[i,n], b[i,n,nu], a[i,n],
// lam[i], aux[k]. Throws InvalidVariableToken.
Variable var_parse(const std::string& token);

}  // namespace loopcas

#endif
