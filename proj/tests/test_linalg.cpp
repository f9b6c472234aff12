#include <random>

#include "doctest.h"
#include "qqw/linalg.hpp"

using namespace qqw;

namespace {

Matrix from_rows(const std::vector<std::vector<long>>& rows, const FieldDesc& f) {
  Matrix m(rows.size(), rows.empty() ? 0 : rows[0].size(), f);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m.at(i, j) = f.kind == FieldKind::Rational
                       ? FieldScalar::integer(rows[i][j])
                       : FieldScalar::residue(static_cast<std::uint64_t>(
                                                  ((rows[i][j] % static_cast<long>(f.p)) +
                                                   static_cast<long>(f.p))) %
                                                  f.p,
                                              f.p);
  return m;
}

}  // namespace

TEST_CASE("inverse and rank over both backends") {
  std::mt19937_64 rng(7);
  for (int backend = 0; backend < 2; ++backend) {
    FieldDesc f = backend ? FieldDesc{FieldKind::Prime, 13} : FieldDesc{FieldKind::Rational, 0};
    for (int trial = 0; trial < 20; ++trial) {
      Matrix m(4, 4, f);
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
          m.at(i, j) = backend ? FieldScalar::residue(rng() % 13, 13)
                               : FieldScalar::integer(static_cast<long>(rng() % 9) - 4);
      if (m.rank() < 4) {
        CHECK_THROWS_AS(m.inverse(), Error);
        continue;
      }
      CHECK((m * m.inverse()).is_identity());
      CHECK((m.inverse() * m).is_identity());
    }
  }
}

TEST_CASE("kernel dimension matches rank-nullity and kernel vectors vanish") {
  FieldDesc f{FieldKind::Rational, 0};
  Matrix m = from_rows({{1, 2, 3}, {2, 4, 6}, {1, 1, 1}}, f);
  Matrix k = m.kernel();
  CHECK(m.rank() + k.cols() == 3);
  CHECK((m * k).is_zero());
}

TEST_CASE("rational characteristic polynomial via Faddeev-LeVerrier") {
  FieldDesc f{FieldKind::Rational, 0};
  Matrix m = from_rows({{2, 0}, {0, 3}}, f);
  auto c = m.charpoly_rational();  // t^2 - 5t + 6
  REQUIRE(c.size() == 2);
  CHECK(c[0] == FieldScalar::integer(6));
  CHECK(c[1] == FieldScalar::integer(-5));
}

TEST_CASE("eigenvalues in the field") {
  FieldDesc f{FieldKind::Rational, 0};
  auto eig = eigenvalues_in_field(from_rows({{2, 1}, {0, 3}}, f));
  REQUIRE(eig.size() == 2);
  CHECK(eig[0] == FieldScalar::integer(2));
  CHECK(eig[1] == FieldScalar::integer(3));

  // x^2 + 1 over Q has no rational roots; over F_5 it splits as (x-2)(x-3)
  Matrix comp = from_rows({{0, -1}, {1, 0}}, f);
  CHECK(eigenvalues_in_field(comp).empty());
  FieldDesc f5{FieldKind::Prime, 5};
  auto eig5 = eigenvalues_in_field(from_rows({{0, -1}, {1, 0}}, f5));
  CHECK(eig5.size() == 2);

  // rational eigenvalue with denominator: diag(1/2)
  Matrix half(1, 1, f);
  half.at(0, 0) = FieldScalar::rational(mpq_class(1, 2));
  auto eigh = eigenvalues_in_field(half);
  REQUIRE(eigh.size() == 1);
  CHECK(eigh[0] == FieldScalar::rational(mpq_class(1, 2)));
}

TEST_CASE("generalized eigenspace of a Jordan block is the full space") {
  FieldDesc f{FieldKind::Rational, 0};
  Matrix jordan = from_rows({{5, 1}, {0, 5}}, f);
  CHECK(generalized_eigenspace(jordan, FieldScalar::integer(5)).cols() == 2);
  CHECK(generalized_eigenspace(jordan, FieldScalar::integer(4)).cols() == 0);
}

TEST_CASE("solve_in_span recovers coordinates and rejects outside vectors") {
  FieldDesc f{FieldKind::Rational, 0};
  Matrix basis = from_rows({{1, 0}, {0, 1}, {0, 0}}, f);
  Matrix img = from_rows({{3}, {-2}, {0}}, f);
  Matrix x = solve_in_span(basis, img, Errc::Internal, "test");
  CHECK(x.at(0, 0) == FieldScalar::integer(3));
  CHECK(x.at(1, 0) == FieldScalar::integer(-2));
  Matrix bad = from_rows({{0}, {0}, {1}}, f);
  CHECK_THROWS_AS(solve_in_span(basis, bad, Errc::Internal, "test"), Error);
}
