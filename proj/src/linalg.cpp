#include "egucb/linalg.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "egucb/error.hpp"

namespace egucb {

namespace {

void require_finite(const Vec& x, const char* what) {
  if (!x.all_finite()) throw Error(ErrorCode::kInvalidInput, std::string(what) + " has non-finite entries");
}

void require_finite(const Mat& m, const char* what) {
  if (!m.all_finite()) throw Error(ErrorCode::kInvalidInput, std::string(what) + " has non-finite entries");
}

void require_same_dim(const Mat& m, const Vec& x) {
  if (m.dim() != x.size()) {
    throw Error(ErrorCode::kInvalidInput, "dimension mismatch: matrix " + std::to_string(m.dim()) +
                                              " vs vector " + std::to_string(x.size()));
  }
}

// Lower-triangular Cholesky factor L with a = L L^T.
Mat cholesky(const Mat& a) {
  const std::size_t d = a.dim();
  Mat l(d);
  for (std::size_t j = 0; j < d; ++j) {
    double diag = a(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
    if (!(diag > 0.0) || !std::isfinite(diag)) {
      throw Error(ErrorCode::kSingularMatrix, "matrix is not positive definite (pivot " + std::to_string(j) + ")");
    }
    const double ljj = std::sqrt(diag);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < d; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return l;
}

Vec cholesky_solve(const Mat& l, const Vec& b) {
  const std::size_t d = l.dim();
  Vec y(d);
  for (std::size_t i = 0; i < d; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
    y[i] = s / l(i, i);
  }
  Vec x(d);
  for (std::size_t ii = d; ii-- > 0;) {
    double s = y[ii];
    for (std::size_t k = ii + 1; k < d; ++k) s -= l(k, ii) * x[k];
    x[ii] = s / l(ii, ii);
  }
  return x;
}

}  // namespace

bool Vec::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Mat::Mat(std::initializer_list<std::initializer_list<double>> rows) : d_(rows.size()) {
  data_.reserve(d_ * d_);
  for (const auto& r : rows) {
    assert(r.size() == d_);
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Mat Mat::identity(std::size_t d) {
  Mat m(d);
  for (std::size_t i = 0; i < d; ++i) m(i, i) = 1.0;
  return m;
}

bool Mat::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

bool Mat::is_symmetric(double tol) const noexcept {
  for (std::size_t i = 0; i < d_; ++i)
    for (std::size_t j = i + 1; j < d_; ++j)
      if (std::abs((*this)(i, j) - (*this)(j, i)) > tol) return false;
  return true;
}

double dot(const Vec& a, const Vec& b) {
  assert(a.size() == b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Vec matvec(const Mat& m, const Vec& x) {
  require_same_dim(m, x);
  const std::size_t d = m.dim();
  Vec y(d);
  for (std::size_t i = 0; i < d; ++i) {
    const auto r = m.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) s += r[j] * x[j];
    y[i] = s;
  }
  return y;
}

double max_abs_diff(const Mat& a, const Mat& b) {
  assert(a.dim() == b.dim());
  double m = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  return m;
}

double max_abs_diff(const Vec& a, const Vec& b) {
  assert(a.size() == b.size());
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double norm(const Vec& x) { return std::sqrt(dot(x, x)); }

void add_outer(Mat& a, const Vec& x) {
  require_same_dim(a, x);
  const std::size_t d = a.dim();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) a(i, j) += x[i] * x[j];
}

Mat sherman_morrison_update(const Mat& a_inv, const Vec& x) {
  require_same_dim(a_inv, x);
  require_finite(a_inv, "inverse matrix");
  require_finite(x, "update vector");

  const std::size_t d = a_inv.dim();
  const Vec u = matvec(a_inv, x);
  const double denom = 1.0 + dot(x, u);
  assert(denom > 0.0);

  Mat out(d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      const double sym = 0.5 * (a_inv(i, j) + a_inv(j, i));
      const double v = sym - u[i] * u[j] / denom;
      out(i, j) = v;
      out(j, i) = v;
    }
  }
  return out;
}

Vec spd_solve(const Mat& a, const Vec& b) {
  require_same_dim(a, b);
  require_finite(a, "matrix");
  require_finite(b, "right-hand side");
  return cholesky_solve(cholesky(a), b);
}

Mat spd_inverse(const Mat& a) {
  require_finite(a, "matrix");
  const std::size_t d = a.dim();
  const Mat l = cholesky(a);
  Mat inv(d);
  Vec e(d);
  for (std::size_t c = 0; c < d; ++c) {
    std::fill(e.values().begin(), e.values().end(), 0.0);
    e[c] = 1.0;
    const Vec col = cholesky_solve(l, e);
    for (std::size_t r = 0; r < d; ++r) inv(r, c) = col[r];
  }
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      const double v = 0.5 * (inv(i, j) + inv(j, i));
      inv(i, j) = v;
      inv(j, i) = v;
    }
  return inv;
}

double quadratic_form(const Mat& m, const Vec& x) {
  require_same_dim(m, x);
  require_finite(x, "vector");
  const std::size_t d = m.dim();
  double s = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const auto r = m.row(i);
    double ri = 0.0;
    for (std::size_t j = 0; j < d; ++j) ri += r[j] * x[j];
    s += x[i] * ri;
  }
  return s;
}

}  // namespace egucb
