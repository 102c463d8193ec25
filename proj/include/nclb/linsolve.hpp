#pragma once

#include <optional>
#include <vector>

#include "nclb/scalar.hpp"

namespace nclb {

// Dense linear system over the scalar field; rows[r][c] multiplies
// unknown c, rhs[r] is the right side of row r.
struct LinearSystem {
  std::size_t ncols = 0;
  std::vector<std::vector<Scalar>> rows;
  std::vector<Scalar> rhs;

  void add_row(std::vector<Scalar> coeffs, Scalar b) {
    rows.push_back(std::move(coeffs));
    rhs.push_back(std::move(b));
  }
};

// Gauss-Jordan elimination with exact arithmetic.  Returns a particular
// solution with free unknowns set to zero, or nothing when inconsistent.
inline std::optional<std::vector<Scalar>> solve_linear(LinearSystem sys) {
  const std::size_t n = sys.ncols;
  std::vector<int> pivot_of_col(n, -1);
  std::size_t rank = 0;
  for (std::size_t col = 0; col < n && rank < sys.rows.size(); ++col) {
    std::size_t pr = rank;
    while (pr < sys.rows.size() && sys.rows[pr][col].is_zero()) ++pr;
    if (pr == sys.rows.size()) continue;
    std::swap(sys.rows[pr], sys.rows[rank]);
    std::swap(sys.rhs[pr], sys.rhs[rank]);
    Scalar inv = scalar_inv(sys.rows[rank][col]);
    for (std::size_t c = col; c < n; ++c) sys.rows[rank][c] = sys.rows[rank][c] * inv;
    sys.rhs[rank] = sys.rhs[rank] * inv;
    for (std::size_t r = 0; r < sys.rows.size(); ++r) {
      if (r == rank || sys.rows[r][col].is_zero()) continue;
      Scalar f = sys.rows[r][col];
      for (std::size_t c = col; c < n; ++c)
        sys.rows[r][c] = sys.rows[r][c] - f * sys.rows[rank][c];
      sys.rhs[r] = sys.rhs[r] - f * sys.rhs[rank];
    }
    pivot_of_col[col] = static_cast<int>(rank);
    ++rank;
  }
  for (std::size_t r = rank; r < sys.rows.size(); ++r)
    if (!sys.rhs[r].is_zero()) return std::nullopt;
  std::vector<Scalar> x(n, scalar_zero());
  for (std::size_t col = 0; col < n; ++col)
    if (pivot_of_col[col] >= 0) x[col] = sys.rhs[static_cast<std::size_t>(pivot_of_col[col])];
  return x;
}

}  // namespace nclb
