#include "cfmimo/conic/program.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace cfmimo::conic {

SparseMatrix::SparseMatrix(int rows, int cols, const std::vector<Triplet>& triplets)
    : rows_(rows), cols_(cols) {
  row_ptr_.assign(rows + 1, 0);
  for (const auto& t : triplets) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
      throw std::invalid_argument("SparseMatrix: triplet out of range");
    }
    ++row_ptr_[t.row + 1];
  }
  std::partial_sum(row_ptr_.begin(), row_ptr_.end(), row_ptr_.begin());
  col_.resize(triplets.size());
  val_.resize(triplets.size());
  std::vector<int> fill(row_ptr_.begin(), row_ptr_.end() - 1);
  for (const auto& t : triplets) {
    const int k = fill[t.row]++;
    col_[k] = t.col;
    val_[k] = t.val;
  }
  // Sort each row by column and merge duplicates.
  std::vector<std::pair<int, double>> tmp;
  std::size_t write = 0;
  std::vector<int> new_ptr(rows + 1, 0);
  for (int r = 0; r < rows; ++r) {
    tmp.clear();
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) tmp.emplace_back(col_[k], val_[k]);
    std::sort(tmp.begin(), tmp.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    const std::size_t row_start = write;
    for (std::size_t k = 0; k < tmp.size(); ++k) {
      if (write > row_start && col_[write - 1] == tmp[k].first) {
        val_[write - 1] += tmp[k].second;
      } else {
        col_[write] = tmp[k].first;
        val_[write] = tmp[k].second;
        ++write;
      }
    }
    new_ptr[r + 1] = static_cast<int>(write);
  }
  col_.resize(write);
  val_.resize(write);
  row_ptr_ = std::move(new_ptr);
}

void SparseMatrix::multiply_add(const double* x, double* y, double alpha) const {
  for (int r = 0; r < rows_; ++r) {
    double acc = 0.0;
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) acc += val_[k] * x[col_[k]];
    y[r] += alpha * acc;
  }
}

void SparseMatrix::multiply_add_transpose(const double* x, double* y, double alpha) const {
  for (int r = 0; r < rows_; ++r) {
    const double xr = alpha * x[r];
    if (xr == 0.0) continue;
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) y[col_[k]] += xr * val_[k];
  }
}

void SparseMatrix::scale_row(int r, double factor) {
  for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) val_[k] *= factor;
}

void SparseMatrix::scale_cols(const double* factor) {
  for (std::size_t k = 0; k < col_.size(); ++k) val_[k] *= factor[col_[k]];
}

double SparseMatrix::max_abs_in_row(int r) const {
  double m = 0.0;
  for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) m = std::max(m, std::abs(val_[k]));
  return m;
}

void SparseMatrix::max_abs_per_col(double* out) const {
  for (std::size_t k = 0; k < col_.size(); ++k) {
    out[col_[k]] = std::max(out[col_[k]], std::abs(val_[k]));
  }
}

int ConeLayout::total_rows() const {
  int total = n_nonneg;
  for (int d : soc_dims) total += d;
  return total;
}

void ConicProgram::validate() const {
  if (n < 1) throw std::invalid_argument("ConicProgram: no variables");
  if (static_cast<int>(c.size()) != n) throw std::invalid_argument("ConicProgram: c size");
  if (A.rows() != static_cast<int>(b.size())) throw std::invalid_argument("ConicProgram: A/b mismatch");
  if (A.rows() > 0 && A.cols() != n) throw std::invalid_argument("ConicProgram: A cols");
  if (G.rows() != static_cast<int>(h.size())) throw std::invalid_argument("ConicProgram: G/h mismatch");
  if (G.cols() != n) throw std::invalid_argument("ConicProgram: G cols");
  if (cones.total_rows() != G.rows()) throw std::invalid_argument("ConicProgram: cone rows");
  for (int d : cones.soc_dims) {
    if (d < 1) throw std::invalid_argument("ConicProgram: SOC dimension must be >= 1");
  }
  for (double v : c) {
    if (!std::isfinite(v)) throw std::invalid_argument("ConicProgram: non-finite c");
  }
}

std::string ConicProgram::dump() const {
  std::ostringstream os;
  os << "conic program";
  if (!name.empty()) os << " '" << name << "'";
  os << "\n";
  os << "  variables:      " << n << "\n";
  os << "  equalities:     " << A.rows() << "  (nnz " << A.nnz() << ")\n";
  os << "  cone rows:      " << G.rows() << "  (nnz " << G.nnz() << ")\n";
  os << "  nonneg rows:    " << cones.n_nonneg << "\n";
  os << "  soc cones:      " << cones.soc_dims.size() << "\n";
  if (!cones.soc_dims.empty()) {
    if (cones.soc_dims.size() <= 32) {
      os << "  soc dims:       ";
      for (std::size_t i = 0; i < cones.soc_dims.size(); ++i) {
        os << (i ? " " : "") << cones.soc_dims[i];
      }
      os << "\n";
    } else {
      const auto [mn, mx] = std::minmax_element(cones.soc_dims.begin(), cones.soc_dims.end());
      os << "  soc dims:       min " << *mn << ", max " << *mx << "\n";
    }
  }
  return os.str();
}

}  // namespace cfmimo::conic
