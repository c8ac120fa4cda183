#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tamerep/error.hpp"
#include "tamerep/field.hpp"

namespace tamerep {

using Vector = std::vector<Element>;

/// Dense matrix over a single field. Entries are stored row-major as one flat
/// coefficient buffer; that buffer is also the canonical byte encoding used
/// for ordering and hashing.
class Matrix {
 public:
  Matrix() = default;
  Matrix(Field f, std::size_t rows, std::size_t cols)
      : f_(std::move(f)), rows_(rows), cols_(cols), data_(rows * cols * f_.degree(), 0) {}

  static Matrix identity(const Field& f, std::size_t n) {
    Matrix m(f, n, n);
    for (std::size_t i = 0; i < n; ++i) m.entry(i, i)[0] = 1;
    return m;
  }

  static Matrix scalar(const Element& c, std::size_t n) {
    Matrix m(c.field(), n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, c);
    return m;
  }

  static Matrix from_ints(const Field& f, const std::vector<std::vector<long long>>& rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows[0].size();
    Matrix m(f, r, c);
    for (std::size_t i = 0; i < r; ++i) {
      if (rows[i].size() != c) raise(Errc::shape_mismatch, "ragged matrix literal");
      for (std::size_t j = 0; j < c; ++j) m.set(i, j, f.from_int(rows[i][j]));
    }
    return m;
  }

  const Field& field() const { return f_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }
  const Coeffs& data() const { return data_; }

  std::span<u64> entry(std::size_t i, std::size_t j) {
    const std::size_t k = f_.degree();
    return {data_.data() + (i * cols_ + j) * k, k};
  }
  std::span<const u64> entry(std::size_t i, std::size_t j) const {
    const std::size_t k = f_.degree();
    return {data_.data() + (i * cols_ + j) * k, k};
  }

  Element at(std::size_t i, std::size_t j) const {
    auto e = entry(i, j);
    return Element(f_, Coeffs(e.begin(), e.end()));
  }

  void set(std::size_t i, std::size_t j, const Element& v) {
    if (!(v.field() == f_)) raise(Errc::field_mismatch, "entry from a different field");
    std::copy(v.coeffs().begin(), v.coeffs().end(), entry(i, j).begin());
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](u64 v) { return v == 0; });
  }

  bool is_identity() const {
    if (!square()) return false;
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) {
        const bool ok = i == j ? f_.is_one(entry(i, j)) : f_.is_zero(entry(i, j));
        if (!ok) return false;
      }
    }
    return true;
  }

  Matrix operator*(const Matrix& o) const {
    check_field(o);
    if (cols_ != o.rows_) raise(Errc::shape_mismatch, "non-conformable product");
    Matrix out(f_, rows_, o.cols_);
    thread_local Coeffs tmp;
    tmp.resize(f_.degree());
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t l = 0; l < cols_; ++l) {
        const auto a = entry(i, l);
        if (f_.is_zero(a)) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) {
          const auto b = o.entry(l, j);
          if (f_.is_zero(b)) continue;
          f_.mul(a, b, tmp);
          f_.add_to(out.entry(i, j), tmp);
        }
      }
    }
    return out;
  }

  Matrix operator+(const Matrix& o) const {
    check_same_shape(o);
    Matrix out = *this;
    for (std::size_t i = 0; i < rows_ * cols_; ++i) {
      const std::size_t k = f_.degree();
      f_.add_to({out.data_.data() + i * k, k}, {o.data_.data() + i * k, k});
    }
    return out;
  }

  Matrix operator-(const Matrix& o) const {
    check_same_shape(o);
    Matrix out = *this;
    for (std::size_t i = 0; i < rows_ * cols_; ++i) {
      const std::size_t k = f_.degree();
      f_.sub_from({out.data_.data() + i * k, k}, {o.data_.data() + i * k, k});
    }
    return out;
  }

  Matrix scaled(const Element& c) const {
    Matrix out(f_, rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) {
        if (!f_.is_zero(entry(i, j))) f_.mul(c.coeffs(), entry(i, j), out.entry(i, j));
      }
    }
    return out;
  }

  Matrix operator-() const {
    Matrix out = *this;
    f_.negate(out.data_);
    return out;
  }

  Matrix transpose() const {
    Matrix out(f_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) {
        std::copy(entry(i, j).begin(), entry(i, j).end(), out.entry(j, i).begin());
      }
    }
    return out;
  }

  Matrix pow(u64 e) const {
    if (!square()) raise(Errc::shape_mismatch, "power of a non-square matrix");
    Matrix result = identity(f_, rows_), base = *this;
    while (e != 0) {
      if (e & 1U) result = result * base;
      e >>= 1U;
      if (e != 0) base = base * base;
    }
    return result;
  }

  Vector apply(const Vector& v) const {
    if (v.size() != cols_) raise(Errc::shape_mismatch, "vector length mismatch");
    Vector out(rows_, f_.zero());
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) {
        if (!f_.is_zero(entry(i, j))) out[i] = out[i] + at(i, j) * v[j];
      }
    }
    return out;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_ && a.f_ == b.f_;
  }
  friend bool operator<(const Matrix& a, const Matrix& b) { return a.data_ < b.data_; }

  std::string to_string() const {
    std::string s = "[";
    for (std::size_t i = 0; i < rows_; ++i) {
      s += i ? ", [" : "[";
      for (std::size_t j = 0; j < cols_; ++j) s += (j ? ", " : "") + at(i, j).to_string();
      s += "]";
    }
    return s + "]";
  }

 private:
  void check_field(const Matrix& o) const {
    if (!(f_ == o.f_)) raise(Errc::field_mismatch, "matrices over different fields");
  }
  void check_same_shape(const Matrix& o) const {
    check_field(o);
    if (rows_ != o.rows_ || cols_ != o.cols_) raise(Errc::shape_mismatch, "shape mismatch");
  }

  Field f_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Coeffs data_;
};

struct EchelonForm {
  Matrix reduced;
  std::vector<std::size_t> pivots;
};

/// Reduced row echelon form by Gauss-Jordan elimination. Row operations
/// touch only nonzero entries, which keeps the sparse invariance systems
/// cheap in large extension fields.
inline EchelonForm rref(Matrix a) {
  const Field& f = a.field();
  const std::size_t k = f.degree();
  const std::size_t rows = a.rows(), cols = a.cols();
  std::vector<std::size_t> pivots;
  Coeffs inv(k), factor(k);
  std::vector<std::size_t> support;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t pr = r;
    while (pr < rows && f.is_zero(a.entry(pr, c))) ++pr;
    if (pr == rows) continue;
    if (pr != r) {
      for (std::size_t j = 0; j < cols; ++j) std::swap_ranges(a.entry(pr, j).begin(), a.entry(pr, j).end(), a.entry(r, j).begin());
    }
    f.inverse(a.entry(r, c), inv);
    support.clear();
    for (std::size_t j = c; j < cols; ++j) {
      if (f.is_zero(a.entry(r, j))) continue;
      Coeffs tmp(k);
      f.mul(a.entry(r, j), inv, tmp);
      std::copy(tmp.begin(), tmp.end(), a.entry(r, j).begin());
      support.push_back(j);
    }
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || f.is_zero(a.entry(i, c))) continue;
      std::copy(a.entry(i, c).begin(), a.entry(i, c).end(), factor.begin());
      for (std::size_t j : support) f.sub_mul(a.entry(i, j), factor, a.entry(r, j));
    }
    pivots.push_back(c);
    ++r;
  }
  return {std::move(a), std::move(pivots)};
}

inline std::size_t rank(const Matrix& a) { return rref(a).pivots.size(); }

/// Basis of {v : A v = 0} as the rows of the returned matrix, read off the
/// reduced echelon form: one vector per free column, with a 1 there.
inline Matrix nullspace(const Matrix& a) {
  const Field& f = a.field();
  const auto [red, pivots] = rref(a);
  const std::size_t cols = a.cols();
  std::vector<bool> is_pivot(cols, false);
  for (std::size_t c : pivots) is_pivot[c] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < cols; ++c) {
    if (!is_pivot[c]) free_cols.push_back(c);
  }
  Matrix basis(f, free_cols.size(), cols);
  for (std::size_t b = 0; b < free_cols.size(); ++b) {
    const std::size_t fc = free_cols[b];
    basis.entry(b, fc)[0] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) {
      auto src = red.entry(r, fc);
      if (f.is_zero(src)) continue;
      auto dst = basis.entry(b, pivots[r]);
      std::copy(src.begin(), src.end(), dst.begin());
      f.negate(dst);
    }
  }
  return basis;
}

inline Element determinant(Matrix a) {
  if (!a.square()) raise(Errc::shape_mismatch, "determinant of a non-square matrix");
  const Field& f = a.field();
  const std::size_t n = a.rows();
  Element det = f.one();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pr = c;
    while (pr < n && f.is_zero(a.entry(pr, c))) ++pr;
    if (pr == n) return f.zero();
    if (pr != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap_ranges(a.entry(pr, j).begin(), a.entry(pr, j).end(), a.entry(c, j).begin());
      det = -det;
    }
    const Element piv = a.at(c, c);
    det = det * piv;
    const Element inv = piv.inverse();
    for (std::size_t i = c + 1; i < n; ++i) {
      if (f.is_zero(a.entry(i, c))) continue;
      const Element factor = a.at(i, c) * inv;
      for (std::size_t j = c; j < n; ++j) {
        if (!f.is_zero(a.entry(c, j))) f.sub_mul(a.entry(i, j), factor.coeffs(), a.entry(c, j));
      }
    }
  }
  return det;
}

inline Matrix inverse(const Matrix& a) {
  if (!a.square()) raise(Errc::shape_mismatch, "inverse of a non-square matrix");
  const std::size_t n = a.rows();
  const Field& f = a.field();
  Matrix aug(f, n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      std::copy(a.entry(i, j).begin(), a.entry(i, j).end(), aug.entry(i, j).begin());
    }
    aug.entry(i, n + i)[0] = 1;
  }
  const auto [red, pivots] = rref(std::move(aug));
  if (pivots.size() < n || pivots[n - 1] != n - 1) raise(Errc::singular_matrix, "matrix is not invertible");
  Matrix out(f, n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      std::copy(red.entry(i, n + j).begin(), red.entry(i, n + j).end(), out.entry(i, j).begin());
    }
  }
  return out;
}

inline Vector row_vector(const Matrix& m, std::size_t i) {
  Vector v;
  v.reserve(m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) v.push_back(m.at(i, j));
  return v;
}

/// Bilinear form x^T G y.
inline Element bilinear(const Matrix& gram, const Vector& x, const Vector& y) {
  const Vector gy = gram.apply(y);
  Element acc = gram.field().zero();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!x[i].is_zero()) acc = acc + x[i] * gy[i];
  }
  return acc;
}

}  // namespace tamerep
