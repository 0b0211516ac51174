#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace seqtag {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Score assigned to masked transitions when the matrix feeds CRF-style
// normalization. Finite so log-sum-exp stays NaN-free; Viterbi-only
// decoding uses -inf instead.
inline constexpr double kDefaultIllegalScore = -1e4;

// Thrown when text input (labels, corpus files, lattice files) cannot be parsed.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown by Viterbi when every complete path scores -inf.
struct NoLegalPathError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  double& operator()(std::size_t row, std::size_t col) { return data_[row * cols_ + col]; }
  double operator()(std::size_t row, std::size_t col) const { return data_[row * cols_ + col]; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  bool all_finite() const {
    for (double v : data_) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// log(sum(exp(x))) with the usual max shift; -inf inputs carry zero weight.
inline double log_sum_exp(std::span<const double> values) {
  double max = kNegInf;
  for (double v : values) max = std::max(max, v);
  if (max == kNegInf) return kNegInf;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - max);
  return max + std::log(sum);
}

}  // namespace seqtag
