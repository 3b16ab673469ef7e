#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "efpdet/errors.hpp"

namespace efpdet {

/// Dense square complex matrix, row-major.
template <typename Real>
class BasicComplexMatrix {
public:
  using value_type = std::complex<Real>;

  BasicComplexMatrix() = default;
  explicit BasicComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

  static BasicComplexMatrix identity(std::size_t dim) {
    BasicComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t dimension() const { return dim_; }
  value_type& operator()(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
  const value_type& operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }
  std::vector<value_type>& entries() { return data_; }
  const std::vector<value_type>& entries() const { return data_; }

  BasicComplexMatrix& operator+=(const BasicComplexMatrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  BasicComplexMatrix& operator-=(const BasicComplexMatrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  BasicComplexMatrix& operator*=(value_type s) {
    for (auto& v : data_) v *= s;
    return *this;
  }
  friend BasicComplexMatrix operator+(BasicComplexMatrix a, const BasicComplexMatrix& b) { return a += b; }
  friend BasicComplexMatrix operator-(BasicComplexMatrix a, const BasicComplexMatrix& b) { return a -= b; }
  friend BasicComplexMatrix operator*(value_type s, BasicComplexMatrix a) { return a *= s; }

  friend BasicComplexMatrix operator*(const BasicComplexMatrix& a, const BasicComplexMatrix& b) {
    a.check_same(b);
    const std::size_t n = a.dim_;
    BasicComplexMatrix c(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        const value_type aik = a(i, k);
        for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  BasicComplexMatrix adjoint() const {
    BasicComplexMatrix t(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) t(j, i) = std::conj((*this)(i, j));
    return t;
  }

  Real max_abs() const {
    Real m = 0;
    for (const auto& v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](const value_type& v) {
      return std::isfinite(v.real()) && std::isfinite(v.imag());
    });
  }

  template <typename Other>
  BasicComplexMatrix<Other> cast() const {
    BasicComplexMatrix<Other> out(dim_);
    for (std::size_t k = 0; k < data_.size(); ++k)
      out.entries()[k] = {Other(data_[k].real()), Other(data_[k].imag())};
    return out;
  }

private:
  void check_same(const BasicComplexMatrix& o) const {
    if (o.dim_ != dim_) throw DomainError("matrix dimensions do not match");
  }

  std::size_t dim_ = 0;
  std::vector<value_type> data_;
};

using ComplexMatrix = BasicComplexMatrix<double>;

template <typename Real>
Real max_abs_diff(const BasicComplexMatrix<Real>& a, const BasicComplexMatrix<Real>& b) {
  return (a - b).max_abs();
}

/// Smallest pivot magnitude for which a determinant is still trusted.
inline constexpr double kMinTrustedPivot = 1e-12;

/// log det of a complex matrix with elimination diagnostics.
struct LogDet {
  double log_abs = 0;     ///< log |det|
  double arg = 0;         ///< argument of det, wrapped to (-pi, pi]
  double min_pivot = 0;   ///< smallest |pivot| met during elimination
  bool converged = false; ///< set by the node-doubling driver
  std::string diagnostic;

  bool trusted() const { return min_pivot > kMinTrustedPivot; }
};

inline double wrap_angle(double a) {
  constexpr double two_pi = 2 * std::numbers::pi;
  a = std::fmod(a, two_pi);
  if (a <= -std::numbers::pi) a += two_pi;
  if (a > std::numbers::pi) a -= two_pi;
  return a;
}

/// In-place LU factorization with partial pivoting.
template <typename Real>
struct LuFactors {
  BasicComplexMatrix<Real> lu;
  std::vector<std::size_t> perm;
  std::size_t swaps = 0;
};

template <typename Real>
LuFactors<Real> lu_factor(BasicComplexMatrix<Real> a) {
  const std::size_t n = a.dimension();
  LuFactors<Real> f;
  f.perm.resize(n);
  for (std::size_t i = 0; i < n; ++i) f.perm[i] = i;
  auto& d = a.entries();

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    Real best = std::norm(d[k * n + k]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const Real v = std::norm(d[i * n + k]);
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (best == Real(0)) {
      std::ostringstream os;
      os << "singular matrix: zero pivot in column " << k;
      throw NumericalError(os.str());
    }
    if (p != k) {
      std::swap_ranges(d.begin() + k * n, d.begin() + (k + 1) * n, d.begin() + p * n);
      std::swap(f.perm[k], f.perm[p]);
      ++f.swaps;
    }
    const std::complex<Real> inv = Real(1) / d[k * n + k];
    for (std::size_t i = k + 1; i < n; ++i) {
      std::complex<Real>& lik = d[i * n + k];
      lik *= inv;
      const Real lr = lik.real(), li = lik.imag();
      std::complex<Real>* row = &d[i * n];
      const std::complex<Real>* prow = &d[k * n];
      for (std::size_t j = k + 1; j < n; ++j) {
        const Real ur = prow[j].real(), ui = prow[j].imag();
        row[j] = {row[j].real() - (lr * ur - li * ui), row[j].imag() - (lr * ui + li * ur)};
      }
    }
  }
  f.lu = std::move(a);
  return f;
}

template <typename Real>
LogDet logdet(const BasicComplexMatrix<Real>& m) {
  if (m.dimension() == 0) return LogDet{0, 0, 0, false, "empty matrix"};
  const auto f = lu_factor(m);
  const std::size_t n = m.dimension();
  Real log_abs = 0;
  Real arg = f.swaps % 2 == 1 ? std::numbers::pi_v<Real> : Real(0);
  Real min_pivot = std::numeric_limits<Real>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    const auto piv = f.lu(k, k);
    const Real mag = std::abs(piv);
    min_pivot = std::min(min_pivot, mag);
    log_abs += std::log(mag);
    arg += std::arg(piv);
    // keep the running argument bounded
    arg = std::remainder(arg, 2 * std::numbers::pi_v<Real>);
  }
  LogDet out;
  out.log_abs = double(log_abs);
  out.arg = wrap_angle(double(arg));
  out.min_pivot = double(min_pivot);
  if (!out.trusted()) out.diagnostic = "smallest pivot below trust threshold";
  return out;
}

template <typename Real>
BasicComplexMatrix<Real> inverse(const BasicComplexMatrix<Real>& m) {
  const std::size_t n = m.dimension();
  const auto f = lu_factor(m);
  BasicComplexMatrix<Real> inv(n);
  std::vector<std::complex<Real>> col(n);
  for (std::size_t c = 0; c < n; ++c) {
    // solve L U x = P e_c
    for (std::size_t i = 0; i < n; ++i) col[i] = f.perm[i] == c ? Real(1) : Real(0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) col[i] -= f.lu(i, j) * col[j];
    for (std::size_t i = n; i-- > 0;) {
      for (std::size_t j = i + 1; j < n; ++j) col[i] -= f.lu(i, j) * col[j];
      col[i] /= f.lu(i, i);
    }
    for (std::size_t i = 0; i < n; ++i) inv(i, c) = col[i];
  }
  return inv;
}

}  // namespace efpdet
