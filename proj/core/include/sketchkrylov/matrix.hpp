#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace sketchkrylov {

enum class Precision { coarse, fine };

// Floating-point format used by a kernel. coarse is IEEE binary32, fine is
// IEEE binary64. Storage is always binary64; coarse results are rounded
// binary32 values widened on store.
struct PrecisionSpec {
  Precision format = Precision::fine;

  constexpr double unit_roundoff() const noexcept {
    return format == Precision::coarse ? 0x1p-24 : 0x1p-53;
  }
  constexpr bool is_coarse() const noexcept { return format == Precision::coarse; }
  static constexpr PrecisionSpec coarse() noexcept { return {Precision::coarse}; }
  static constexpr PrecisionSpec fine() noexcept { return {Precision::fine}; }
  friend constexpr bool operator==(PrecisionSpec, PrecisionSpec) = default;
};

std::string to_string(PrecisionSpec p);

// Non-owning column-major view. ld >= rows.
struct MatrixView {
  const double* data = nullptr;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t ld = 0;

  double operator()(std::size_t i, std::size_t j) const { return data[i + j * ld]; }
  const double* col(std::size_t j) const { return data + j * ld; }
  MatrixView sub(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  MatrixView columns(std::size_t c0, std::size_t nc) const { return sub(0, c0, rows, nc); }
  bool empty() const noexcept { return rows == 0 || cols == 0; }
};

// Dense column-major matrix of binary64 values carrying the precision tag of
// the kernel that produced it.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, PrecisionSpec prec = PrecisionSpec::fine());
  // Takes column-major data; throws DimensionError on size mismatch and
  // InvalidArgument on non-finite entries.
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data,
         PrecisionSpec prec = PrecisionSpec::fine());
  explicit Matrix(MatrixView v, PrecisionSpec prec = PrecisionSpec::fine());

  static Matrix identity(std::size_t n);
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }
  PrecisionSpec precision() const noexcept { return precision_; }
  void set_precision(PrecisionSpec p) noexcept { precision_ = p; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i + j * rows_]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i + j * rows_]; }
  double* col(std::size_t j) { return data_.data() + j * rows_; }
  const double* col(std::size_t j) const { return data_.data() + j * rows_; }
  double* data() noexcept { return data_.data(); }
  const double* data() const noexcept { return data_.data(); }
  const std::vector<double>& values() const noexcept { return data_; }

  MatrixView view() const noexcept { return {data_.data(), rows_, cols_, rows_}; }
  MatrixView view(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  MatrixView columns(std::size_t c0, std::size_t nc) const { return view(0, c0, rows_, nc); }
  operator MatrixView() const noexcept { return view(); }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, MatrixView src);
  Matrix transpose() const;
  // Keeps the leading columns, reallocating if needed.
  void resize_cols(std::size_t cols);

  bool all_finite() const noexcept;
  void require_finite(const char* what) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
  PrecisionSpec precision_{};
};

// Column partition into consecutive blocks. uniform() gives width m_p with a
// narrower trailing block when m is not a multiple of m_p.
class BlockPartition {
 public:
  BlockPartition() = default;
  static BlockPartition uniform(std::size_t total_cols, std::size_t block_width);
  static BlockPartition from_widths(std::vector<std::size_t> widths);

  std::size_t num_blocks() const noexcept { return widths_.size(); }
  std::size_t total_cols() const noexcept { return offsets_.empty() ? 0 : offsets_.back(); }
  std::size_t width(std::size_t block) const { return widths_.at(block); }
  std::size_t offset(std::size_t block) const { return offsets_.at(block); }
  std::size_t max_width() const noexcept;
  const std::vector<std::size_t>& widths() const noexcept { return widths_; }
  // Block containing column j.
  std::size_t block_of(std::size_t j) const;

  friend bool operator==(const BlockPartition& a, const BlockPartition& b) {
    return a.widths_ == b.widths_;
  }

 private:
  std::vector<std::size_t> widths_;
  std::vector<std::size_t> offsets_;
};

}  // namespace sketchkrylov
