#ifndef REVDIFF_ASSIGNMENT_H_
#define REVDIFF_ASSIGNMENT_H_

#include <cstddef>
#include <optional>
#include <vector>

namespace revdiff {

// Dense row-major weight matrix.
class WeightMatrix {
 public:
  WeightMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

struct Assignment {
  double total = 0.0;
  // row -> assigned column, nullopt for rows left unassigned.
  std::vector<std::optional<std::size_t>> row_to_col;
};

// Exact maximum-weight one-to-one assignment (Hungarian method with
// potentials, O(n^2 m)). Weights must be non-negative; every row of the
// smaller side is assigned.
Assignment max_weight_assignment(const WeightMatrix& weights);

}  // namespace revdiff

#endif  // REVDIFF_ASSIGNMENT_H_
