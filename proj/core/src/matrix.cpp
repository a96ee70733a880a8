#include "sketchkrylov/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "sketchkrylov/error.hpp"

namespace sketchkrylov {

std::string to_string(PrecisionSpec p) { return p.is_coarse() ? "coarse" : "fine"; }

MatrixView MatrixView::sub(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows || c0 + nc > cols) {
    throw DimensionError("sub-view out of range");
  }
  return {data + r0 + c0 * ld, nr, nc, ld};
}

Matrix::Matrix(std::size_t rows, std::size_t cols, PrecisionSpec prec)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0), precision_(prec) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data, PrecisionSpec prec)
    : rows_(rows), cols_(cols), data_(std::move(data)), precision_(prec) {
  if (data_.size() != rows * cols) {
    throw DimensionError("matrix data has " + std::to_string(data_.size()) + " entries, expected " +
                         std::to_string(rows) + "x" + std::to_string(cols));
  }
  require_finite("matrix data");
}

Matrix::Matrix(MatrixView v, PrecisionSpec prec)
    : rows_(v.rows), cols_(v.cols), data_(v.rows * v.cols), precision_(prec) {
  for (std::size_t j = 0; j < cols_; ++j) {
    std::copy_n(v.col(j), rows_, col(j));
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix I(n, n);
  for (std::size_t i = 0; i < n; ++i) I(i, i) = 1.0;
  return I;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t nr = rows.size();
  const std::size_t nc = nr == 0 ? 0 : rows.begin()->size();
  Matrix M(nr, nc);
  std::size_t i = 0;
  for (const auto& r : rows) {
    if (r.size() != nc) throw DimensionError("ragged row list");
    std::size_t j = 0;
    for (double v : r) M(i, j++) = v;
    ++i;
  }
  M.require_finite("matrix data");
  return M;
}

MatrixView Matrix::view(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  return view().sub(r0, c0, nr, nc);
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  return Matrix(view(r0, c0, nr, nc), precision_);
}

void Matrix::set_block(std::size_t r0, std::size_t c0, MatrixView src) {
  if (r0 + src.rows > rows_ || c0 + src.cols > cols_) {
    throw DimensionError("set_block out of range");
  }
  for (std::size_t j = 0; j < src.cols; ++j) {
    std::copy_n(src.col(j), src.rows, col(c0 + j) + r0);
  }
}

Matrix Matrix::transpose() const {
  Matrix T(cols_, rows_, precision_);
  for (std::size_t j = 0; j < cols_; ++j)
    for (std::size_t i = 0; i < rows_; ++i) T(j, i) = (*this)(i, j);
  return T;
}

void Matrix::resize_cols(std::size_t cols) {
  data_.resize(rows_ * cols, 0.0);
  cols_ = cols;
}

bool Matrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

void Matrix::require_finite(const char* what) const {
  if (!all_finite()) throw InvalidArgument(std::string(what) + " contains non-finite entries");
}

BlockPartition BlockPartition::uniform(std::size_t total_cols, std::size_t block_width) {
  if (block_width == 0) throw InvalidArgument("block width must be positive");
  std::vector<std::size_t> widths;
  for (std::size_t c = 0; c < total_cols; c += block_width) {
    widths.push_back(std::min(block_width, total_cols - c));
  }
  return from_widths(std::move(widths));
}

BlockPartition BlockPartition::from_widths(std::vector<std::size_t> widths) {
  BlockPartition p;
  p.offsets_.reserve(widths.size() + 1);
  p.offsets_.push_back(0);
  for (std::size_t w : widths) {
    if (w == 0) throw InvalidArgument("block widths must be positive");
    p.offsets_.push_back(p.offsets_.back() + w);
  }
  p.widths_ = std::move(widths);
  return p;
}

std::size_t BlockPartition::max_width() const noexcept {
  return widths_.empty() ? 0 : *std::max_element(widths_.begin(), widths_.end());
}

std::size_t BlockPartition::block_of(std::size_t j) const {
  if (j >= total_cols()) throw DimensionError("column outside partition");
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), j);
  return static_cast<std::size_t>(it - offsets_.begin()) - 1;
}

}  // namespace sketchkrylov
