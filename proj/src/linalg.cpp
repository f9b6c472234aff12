#include "qqw/linalg.hpp"

#include <algorithm>

namespace qqw {

Matrix::Matrix(std::size_t rows, std::size_t cols, const FieldDesc& f)
    : rows_(rows), cols_(cols), field_(f), data_(rows * cols, field_zero(f)) {}

Matrix Matrix::identity(std::size_t n, const FieldDesc& f) {
  Matrix m(n, n, f);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = field_one(f);
  return m;
}

bool Matrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const FieldScalar& x) { return x.is_zero(); });
}

bool Matrix::is_identity() const {
  if (rows_ != cols_) return false;
  return *this == identity(rows_, field_);
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_, field_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
  return t;
}

Matrix Matrix::operator*(const Matrix& b) const {
  check(cols_ == b.rows_ && field_ == b.field_, Errc::Internal, "matrix product shape");
  Matrix r(rows_, b.cols_, field_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      if (at(i, k).is_zero()) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) r.at(i, j) += at(i, k) * b.at(k, j);
    }
  return r;
}

Matrix Matrix::operator+(const Matrix& b) const {
  check(rows_ == b.rows_ && cols_ == b.cols_, Errc::Internal, "matrix sum shape");
  Matrix r = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] += b.data_[i];
  return r;
}

Matrix Matrix::operator-(const Matrix& b) const { return *this + b.scaled(-field_one(field_)); }

Matrix Matrix::scaled(const FieldScalar& c) const {
  Matrix r = *this;
  for (auto& x : r.data_) x *= c;
  return r;
}

Matrix Matrix::pow(unsigned e) const {
  check(rows_ == cols_, Errc::Internal, "pow of non-square matrix");
  Matrix acc = identity(rows_, field_);
  Matrix base = *this;
  while (e) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

std::vector<FieldScalar> Matrix::apply(const std::vector<FieldScalar>& v) const {
  check(v.size() == cols_, Errc::Internal, "matrix apply shape");
  std::vector<FieldScalar> r(rows_, field_zero(field_));
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (!at(i, j).is_zero() && !v[j].is_zero()) r[i] += at(i, j) * v[j];
  return r;
}

namespace {

// Reduced row echelon form in place; returns pivot columns. Pivots are only
// sought in the first `limit` columns (the rest ride along, as in an
// augmented solve).
std::vector<std::size_t> rref(Matrix& m, std::size_t limit) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < limit && row < m.rows(); ++col) {
    std::size_t pivot = row;
    while (pivot < m.rows() && m.at(pivot, col).is_zero()) ++pivot;
    if (pivot == m.rows()) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m.at(row, j), m.at(pivot, j));
    FieldScalar inv = m.at(row, col).inv();
    for (std::size_t j = col; j < m.cols(); ++j) m.at(row, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || m.at(i, col).is_zero()) continue;
      FieldScalar f = m.at(i, col);
      for (std::size_t j = col; j < m.cols(); ++j) m.at(i, j) -= f * m.at(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

std::size_t Matrix::rank() const {
  Matrix m = *this;
  return rref(m, m.cols()).size();
}

Matrix Matrix::inverse() const {
  check(rows_ == cols_, Errc::SingularMatrix, "inverse of non-square matrix");
  Matrix aug(rows_, 2 * cols_, field_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
    aug.at(i, cols_ + i) = field_one(field_);
  }
  auto pivots = rref(aug, cols_);
  check(pivots.size() == rows_, Errc::SingularMatrix, "matrix is singular");
  Matrix inv(rows_, cols_, field_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) inv.at(i, j) = aug.at(i, cols_ + j);
  return inv;
}

Matrix Matrix::kernel() const {
  Matrix m = *this;
  auto pivots = rref(m, m.cols());
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < cols_; ++c)
    if (std::find(pivots.begin(), pivots.end(), c) == pivots.end()) free_cols.push_back(c);
  Matrix k(cols_, free_cols.size(), field_);
  for (std::size_t fi = 0; fi < free_cols.size(); ++fi) {
    std::size_t fc = free_cols[fi];
    k.at(fc, fi) = field_one(field_);
    for (std::size_t r = 0; r < pivots.size(); ++r) k.at(pivots[r], fi) = -m.at(r, fc);
  }
  return k;
}

std::vector<FieldScalar> Matrix::charpoly_rational() const {
  check(rows_ == cols_ && field_.kind == FieldKind::Rational, Errc::Internal,
        "charpoly_rational needs a square rational matrix");
  std::size_t n = rows_;
  // Faddeev-LeVerrier: M_1 = A, c_{n-k} = -tr(A M_k)/k, M_{k+1} = A M_k + c_{n-k} I.
  std::vector<FieldScalar> coeffs(n + 1, field_zero(field_));
  coeffs[n] = field_one(field_);
  Matrix mk = identity(n, field_);
  for (std::size_t k = 1; k <= n; ++k) {
    mk = *this * mk;
    FieldScalar tr = field_zero(field_);
    for (std::size_t i = 0; i < n; ++i) tr += mk.at(i, i);
    FieldScalar c = -(tr / FieldScalar::integer(static_cast<long>(k)));
    coeffs[n - k] = c;
    for (std::size_t i = 0; i < n; ++i) mk.at(i, i) += c;
  }
  coeffs.pop_back();
  return coeffs;
}

bool operator==(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_ || !(a.field_ == b.field_)) return false;
  for (std::size_t i = 0; i < a.data_.size(); ++i)
    if (a.data_[i] != b.data_[i]) return false;
  return true;
}

namespace {

// Positive divisors of |z| for the rational root theorem, via factorization:
// trial division by small primes plus a primality test on the cofactor. The
// determinants met here factor over small primes; anything harder is a hard
// error rather than a silent miss.
std::vector<mpz_class> divisors(const mpz_class& z) {
  mpz_class a = abs(z);
  std::vector<std::pair<mpz_class, unsigned>> factors;
  for (unsigned long d = 2; d <= 100000ul && mpz_class(d) * d <= a; ++d) {
    if (a % d == 0) {
      unsigned e = 0;
      while (a % d == 0) {
        a /= d;
        ++e;
      }
      factors.emplace_back(d, e);
    }
  }
  if (a > 1) {
    check(mpz_probab_prime_p(a.get_mpz_t(), 40) != 0, Errc::Internal,
          "cannot factor " + a.get_str() + " for the rational root scan");
    factors.emplace_back(a, 1);
  }
  std::vector<mpz_class> divs{1};
  for (const auto& [prime, mult] : factors) {
    std::size_t base = divs.size();
    mpz_class pe = 1;
    for (unsigned e = 1; e <= mult; ++e) {
      pe *= prime;
      for (std::size_t i = 0; i < base; ++i) divs.push_back(divs[i] * pe);
    }
  }
  return divs;
}

}  // namespace

std::vector<FieldScalar> eigenvalues_in_field(const Matrix& m) {
  check(m.rows() == m.cols(), Errc::Internal, "eigenvalues of non-square matrix");
  std::vector<FieldScalar> found;
  auto consider = [&](const FieldScalar& lambda) {
    Matrix shifted = m - Matrix::identity(m.rows(), m.field()).scaled(lambda);
    if (shifted.rank() < m.rows()) found.push_back(lambda);
  };
  if (m.field().kind == FieldKind::Prime) {
    for (std::uint64_t r = 0; r < m.field().p; ++r) consider(FieldScalar::residue(r, m.field().p));
    return found;
  }
  if (m.rows() == 0) return found;
  // Rational roots of the characteristic polynomial: clear denominators to get
  // integer coefficients a_0..a_n, then candidates are +-(div a_0)/(div a_n).
  auto coeffs = m.charpoly_rational();
  coeffs.push_back(field_one(m.field()));
  mpz_class lcm_den(1);
  for (const auto& c : coeffs) mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(),
                                       c.rational_value().get_den().get_mpz_t());
  std::vector<mpz_class> ints;
  for (const auto& c : coeffs) {
    mpq_class v = c.rational_value() * mpq_class(lcm_den);
    ints.push_back(v.get_num());
  }
  std::size_t lo = 0;
  while (lo < ints.size() && ints[lo] == 0) ++lo;
  if (lo > 0) consider(FieldScalar::integer(0));
  if (lo == ints.size()) return found;
  for (const auto& num : divisors(ints[lo])) {
    for (const auto& den : divisors(ints.back())) {
      for (int sign : {1, -1}) {
        mpq_class cand(sign * num, den);
        cand.canonicalize();
        FieldScalar lambda = FieldScalar::rational(cand);
        // evaluate the polynomial before the rank test
        FieldScalar val = field_zero(m.field());
        for (std::size_t i = ints.size(); i-- > 0;)
          val = val * lambda + FieldScalar::rational(mpq_class(ints[i]));
        if (val.is_zero()) consider(lambda);
      }
    }
  }
  std::sort(found.begin(), found.end());
  found.erase(std::unique(found.begin(), found.end()), found.end());
  return found;
}

Matrix generalized_eigenspace(const Matrix& m, const FieldScalar& lambda) {
  Matrix shifted = m - Matrix::identity(m.rows(), m.field()).scaled(lambda);
  return shifted.pow(static_cast<unsigned>(m.rows())).kernel();
}

Matrix solve_in_span(const Matrix& basis, const Matrix& images, Errc code,
                     const std::string& what) {
  check(basis.rows() == images.rows(), Errc::Internal, "solve_in_span shape mismatch");
  Matrix aug(basis.rows(), basis.cols() + images.cols(), basis.field());
  for (std::size_t i = 0; i < basis.rows(); ++i) {
    for (std::size_t j = 0; j < basis.cols(); ++j) aug.at(i, j) = basis.at(i, j);
    for (std::size_t j = 0; j < images.cols(); ++j) aug.at(i, basis.cols() + j) = images.at(i, j);
  }
  Matrix reduced = aug;
  // rref via rank machinery: redo elimination locally
  std::size_t row = 0;
  std::vector<std::size_t> pivots;
  for (std::size_t col = 0; col < basis.cols() && row < reduced.rows(); ++col) {
    std::size_t pivot = row;
    while (pivot < reduced.rows() && reduced.at(pivot, col).is_zero()) ++pivot;
    if (pivot == reduced.rows()) continue;
    for (std::size_t j = 0; j < reduced.cols(); ++j) std::swap(reduced.at(row, j), reduced.at(pivot, j));
    FieldScalar inv = reduced.at(row, col).inv();
    for (std::size_t j = col; j < reduced.cols(); ++j) reduced.at(row, j) *= inv;
    for (std::size_t i = 0; i < reduced.rows(); ++i) {
      if (i == row || reduced.at(i, col).is_zero()) continue;
      FieldScalar f = reduced.at(i, col);
      for (std::size_t j = col; j < reduced.cols(); ++j) reduced.at(i, j) -= f * reduced.at(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  check(pivots.size() == basis.cols(), Errc::Internal, what + ": basis columns are dependent");
  // consistency: rows below the pivots must have zero image part
  for (std::size_t i = pivots.size(); i < reduced.rows(); ++i)
    for (std::size_t j = 0; j < images.cols(); ++j)
      check(reduced.at(i, basis.cols() + j).is_zero(), code,
            what + ": image leaves the target span");
  Matrix x(basis.cols(), images.cols(), basis.field());
  for (std::size_t r2 = 0; r2 < pivots.size(); ++r2)
    for (std::size_t j = 0; j < images.cols(); ++j)
      x.at(pivots[r2], j) = reduced.at(r2, basis.cols() + j);
  return x;
}

}  // namespace qqw
