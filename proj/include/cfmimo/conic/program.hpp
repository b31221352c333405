#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace cfmimo::conic {

struct Triplet {
  int row = 0;
  int col = 0;
  double val = 0.0;
};

/// Row-compressed sparse matrix, sufficient for the solver's needs:
/// matrix-vector products, row traversal, and row/column scaling.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(int rows, int cols, const std::vector<Triplet>& triplets);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t nnz() const { return col_.size(); }

  int row_size(int r) const { return row_ptr_[r + 1] - row_ptr_[r]; }
  const int* row_cols(int r) const { return col_.data() + row_ptr_[r]; }
  const double* row_vals(int r) const { return val_.data() + row_ptr_[r]; }
  double* row_vals(int r) { return val_.data() + row_ptr_[r]; }

  /// y += alpha * A x
  void multiply_add(const double* x, double* y, double alpha = 1.0) const;
  /// y += alpha * A' x
  void multiply_add_transpose(const double* x, double* y, double alpha = 1.0) const;

  void scale_row(int r, double factor);
  void scale_cols(const double* factor);  // per-column multiply

  double max_abs_in_row(int r) const;
  void max_abs_per_col(double* out) const;  // out[j] = max(out[j], |A_ij|)

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> col_;
  std::vector<double> val_;
};

/// Cone composition of the rows of G: the leading n_nonneg rows are
/// componentwise inequalities, followed by second-order cone blocks.
struct ConeLayout {
  int n_nonneg = 0;
  std::vector<int> soc_dims;

  int total_rows() const;
  /// Barrier degree: one per linear row plus one per SOC block.
  int degree() const { return n_nonneg + static_cast<int>(soc_dims.size()); }
};

/// Standard-form conic program:
///   minimize    c'x
///   subject to  A x = b,
///               G x + s = h,  s in K
/// with K the cone described by `cones`.
struct ConicProgram {
  int n = 0;  // variables
  std::vector<double> c;
  SparseMatrix A;
  std::vector<double> b;
  SparseMatrix G;
  std::vector<double> h;
  ConeLayout cones;
  std::string name;

  /// Throws std::invalid_argument when dimensions are inconsistent.
  void validate() const;

  /// Plain-text report: dimensions, cone list, nonzero counts.
  std::string dump() const;
};

}  // namespace cfmimo::conic
