#pragma once

#include <cstddef>
#include <vector>

#include "qqw/field.hpp"

namespace qqw {

/// Dense matrix over an exact field. Row-major; sizes are desk scale, so all
/// eliminations are plain fraction-free-less Gauss over the field.
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const FieldDesc& f);

  static Matrix identity(std::size_t n, const FieldDesc& f);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const FieldDesc& field() const { return field_; }

  FieldScalar& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const FieldScalar& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  bool is_zero() const;
  bool is_identity() const;

  Matrix transpose() const;
  Matrix operator*(const Matrix& b) const;
  Matrix operator+(const Matrix& b) const;
  Matrix operator-(const Matrix& b) const;
  Matrix scaled(const FieldScalar& c) const;
  Matrix pow(unsigned e) const;

  std::vector<FieldScalar> apply(const std::vector<FieldScalar>& v) const;

  std::size_t rank() const;
  /// errors: SingularMatrix
  Matrix inverse() const;
  /// Basis of the right kernel, returned as the columns of a cols x dim matrix.
  Matrix kernel() const;

  /// Characteristic polynomial coefficients c_0..c_n with
  /// p(t) = t^n + c_{n-1} t^{n-1} + ... + c_0 (rational backend only; uses
  /// the Faddeev-LeVerrier recurrence, whose divisions are by integers).
  std::vector<FieldScalar> charpoly_rational() const;

  friend bool operator==(const Matrix& a, const Matrix& b);

private:
  std::size_t rows_ = 0, cols_ = 0;
  FieldDesc field_{};
  std::vector<FieldScalar> data_;
};

/// All distinct eigenvalues of m that lie in the field, found by scanning
/// nonzero residues (F_p) or by the rational root theorem on the
/// characteristic polynomial (rationals). Zero eigenvalues are included.
std::vector<FieldScalar> eigenvalues_in_field(const Matrix& m);

/// Basis of the generalized lambda-eigenspace ker (m - lambda)^rows, as columns.
Matrix generalized_eigenspace(const Matrix& m, const FieldScalar& lambda);

/// Solves basis * X = images columnwise, where the columns of `basis` are
/// independent; fails with `code` when some image leaves the column span.
Matrix solve_in_span(const Matrix& basis, const Matrix& images, Errc code,
                     const std::string& what);

}  // namespace qqw
