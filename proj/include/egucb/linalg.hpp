#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace egucb {

// Dense vector of fixed length d.
class Vec {
 public:
  Vec() = default;
  explicit Vec(std::size_t d, double fill = 0.0) : data_(d, fill) {}
  Vec(std::initializer_list<double> values) : data_(values) {}
  explicit Vec(std::vector<double> values) : data_(std::move(values)) {}

  std::size_t size() const noexcept { return data_.size(); }
  double& operator[](std::size_t i) noexcept { return data_[i]; }
  double operator[](std::size_t i) const noexcept { return data_[i]; }

  std::span<const double> values() const noexcept { return data_; }
  std::span<double> values() noexcept { return data_; }
  const std::vector<double>& raw() const noexcept { return data_; }

  bool all_finite() const noexcept;

  friend bool operator==(const Vec&, const Vec&) = default;

 private:
  std::vector<double> data_;
};

// Square d x d matrix stored row-major.
class Mat {
 public:
  Mat() = default;
  explicit Mat(std::size_t d, double fill = 0.0) : d_(d), data_(d * d, fill) {}
  Mat(std::initializer_list<std::initializer_list<double>> rows);

  static Mat identity(std::size_t d);

  std::size_t dim() const noexcept { return d_; }
  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * d_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * d_ + c]; }

  std::span<const double> row(std::size_t r) const noexcept {
    return std::span<const double>(data_).subspan(r * d_, d_);
  }
  std::span<const double> values() const noexcept { return data_; }

  bool all_finite() const noexcept;
  bool is_symmetric(double tol = 1e-12) const noexcept;

  friend bool operator==(const Mat&, const Mat&) = default;

 private:
  std::size_t d_ = 0;
  std::vector<double> data_;
};

double dot(const Vec& a, const Vec& b);
Vec matvec(const Mat& m, const Vec& x);
double max_abs_diff(const Mat& a, const Mat& b);
double max_abs_diff(const Vec& a, const Vec& b);
double norm(const Vec& x);

// a += x x^T
void add_outer(Mat& a, const Vec& x);

/// Returns (A + x x^T)^-1 given A^-1, using the Sherman-Morrison identity.
/// The result is explicitly symmetrized so repeated updates stay SPD.
Mat sherman_morrison_update(const Mat& a_inv, const Vec& x);

/// Solves a x = b for symmetric positive definite a via Cholesky.
/// Throws ErrorCode::kSingularMatrix if the factorization breaks down.
Vec spd_solve(const Mat& a, const Vec& b);

/// Inverse of an SPD matrix via Cholesky (column-by-column solves).
Mat spd_inverse(const Mat& a);

/// x^T m x
double quadratic_form(const Mat& m, const Vec& x);

}  // namespace egucb
