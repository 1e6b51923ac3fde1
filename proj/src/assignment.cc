#include "revdiff/assignment.h"

#include <limits>

#include "revdiff/error.h"

namespace revdiff {

namespace {

// Minimum-cost assignment of every row to a distinct column, rows <= cols.
// Returns col_to_row (1-based rows, 0 = free) over 1-based columns.
std::vector<std::size_t> solve_min_cost(const WeightMatrix& cost) {
  const std::size_t n = cost.rows();
  const std::size_t m = cost.cols();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, kInf);
    std::vector<bool> used(m + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  return p;
}

}  // namespace

Assignment max_weight_assignment(const WeightMatrix& weights) {
  Assignment result;
  result.row_to_col.assign(weights.rows(), std::nullopt);
  if (weights.rows() == 0 || weights.cols() == 0) return result;

  const bool transpose = weights.rows() > weights.cols();
  const std::size_t n = transpose ? weights.cols() : weights.rows();
  const std::size_t m = transpose ? weights.rows() : weights.cols();
  WeightMatrix cost(n, m);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < m; ++c) {
      const double w = transpose ? weights(c, r) : weights(r, c);
      if (w < 0.0) throw InvalidArgument("assignment weights must be >= 0");
      cost(r, c) = -w;
    }
  }

  const std::vector<std::size_t> col_to_row = solve_min_cost(cost);
  for (std::size_t j = 1; j <= m; ++j) {
    if (col_to_row[j] == 0) continue;
    const std::size_t r = transpose ? j - 1 : col_to_row[j] - 1;
    const std::size_t c = transpose ? col_to_row[j] - 1 : j - 1;
    result.row_to_col[r] = c;
    result.total += weights(r, c);
  }
  return result;
}

}  // namespace revdiff
