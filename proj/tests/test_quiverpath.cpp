#include <random>

#include "doctest.h"
#include "qqw/quiverpath.hpp"

using namespace qqw;

namespace {

const FieldDesc kRat{FieldKind::Rational, 0};

Quiver two_arrow_quiver() {
  // arrows: a0: 0 -> 0 (loop), a1: 0 -> 1
  Quiver q;
  q.vertices = {0, 1};
  q.arrows = {{0, 0, 0}, {1, 0, 1}};
  return q;
}

}  // namespace

TEST_CASE("path algebra relations") {
  TruncatedPathAlgebra alg(two_arrow_quiver(), 3, kRat);
  PathVector e0 = alg.vertex(0), e1 = alg.vertex(1);
  PathVector a0 = alg.arrow(0), a1 = alg.arrow(1);

  CHECK(alg.multiply(e0, e1).is_zero());       // e_i e_j = 0 for i != j
  CHECK(alg.multiply(e0, e0) == e0);           // e_i^2 = e_i
  CHECK(alg.multiply(e0, a1) == a1);           // e_{sa} a = a
  CHECK(alg.multiply(a1, e1) == a1);           // a e_{ta} = a
  CHECK(alg.multiply(a1, e0).is_zero());
  CHECK(alg.multiply(e1, a1).is_zero());
  CHECK(!alg.multiply(a0, a1).is_zero());      // composable concatenation
  CHECK(alg.multiply(a1, a0).is_zero());       // non-composable product is 0
}

TEST_CASE("identity is the sum of the vertex idempotents") {
  TruncatedPathAlgebra alg(two_arrow_quiver(), 3, kRat);
  PathVector one = alg.identity();
  for (unsigned len = 0; len <= 3; ++len)
    for (std::size_t i = 0; i < alg.dim(len); ++i) {
      PathVector b = alg.basis_vector(PathRef{len, i});
      CHECK(alg.multiply(one, b) == b);
      CHECK(alg.multiply(b, one) == b);
    }
}

TEST_CASE("graded dimensions of the bouquet") {
  Quiver q;
  q.vertices = {0};
  q.arrows = {{0, 0, 0}, {1, 0, 0}};
  TruncatedPathAlgebra alg(q, 3, kRat);
  CHECK(alg.dim(0) == 1);
  CHECK(alg.dim(1) == 2);
  CHECK(alg.dim(2) == 4);
  CHECK(alg.dim(3) == 8);
  CHECK(alg.total_dim() == 15);
}

TEST_CASE("products beyond the bound raise TruncationOverflow") {
  Quiver q;
  q.vertices = {0};
  q.arrows = {{0, 0, 0}};
  TruncatedPathAlgebra alg(q, 2, kRat);
  PathVector a = alg.arrow(0);
  PathVector aa = alg.multiply(a, a);
  CHECK_THROWS_WITH_AS(alg.multiply(a, aa), doctest::Contains("TruncationOverflow"), Error);
}

TEST_CASE("associativity on random short products") {
  std::mt19937_64 rng(41);
  Quiver q;
  q.vertices = {0, 1, 2};
  q.arrows = {{0, 0, 1}, {1, 1, 2}, {2, 2, 0}, {3, 1, 1}};
  TruncatedPathAlgebra alg(q, 4, kRat);
  auto rand_vec = [&](unsigned maxlen) {
    PathVector v;
    for (int t = 0; t < 2; ++t) {
      unsigned len = rng() % (maxlen + 1);
      if (alg.dim(len) == 0) continue;
      PathRef r{len, rng() % alg.dim(len)};
      v = alg.add(v, alg.scale(FieldScalar::integer(1 + static_cast<long>(rng() % 5)),
                               alg.basis_vector(r)));
    }
    return v;
  };
  for (int trial = 0; trial < 50; ++trial) {
    PathVector a = rand_vec(1), b = rand_vec(1), c = rand_vec(2);
    CHECK(alg.multiply(alg.multiply(a, b), c) == alg.multiply(a, alg.multiply(b, c)));
  }
}

TEST_CASE("arrow space decomposition") {
  // one arrow 0 -> 1: single block of dimension 1
  {
    std::vector<BlockLabel> labels{{0, 1}};
    Matrix m(1, 1, kRat);
    auto dec = arrow_space_decomposition(labels, m);
    CHECK(dec.spaces.size() == 1);
    CHECK(dec.spaces.at(BlockLabel{0, 1}).size() == 1);
    CHECK(dec.map_blocks.empty());  // zero map: all-zero blocks omitted
    CHECK(reassemble_blocks(labels, dec, kRat) == m);
  }
  // two arrows 0->0 and 0->1: blocks (0,0) and (0,1) of dimension 1 each
  {
    std::vector<BlockLabel> labels{{0, 0}, {0, 1}};
    Matrix m(2, 2, kRat);
    m.at(1, 0) = FieldScalar::integer(5);  // maps block (0,0) into block (0,1)
    auto dec = arrow_space_decomposition(labels, m);
    CHECK(dec.spaces.size() == 2);
    REQUIRE(dec.map_blocks.size() == 1);
    CHECK(dec.map_blocks[0].from == BlockLabel{0, 0});
    CHECK(dec.map_blocks[0].to == BlockLabel{0, 1});
    CHECK(reassemble_blocks(labels, dec, kRat) == m);
  }
  // a map whose block image is not supported in a single block
  {
    std::vector<BlockLabel> labels{{0, 0}, {0, 1}};
    Matrix m(2, 2, kRat);
    m.at(0, 0) = FieldScalar::integer(1);
    m.at(1, 0) = FieldScalar::integer(1);
    CHECK_THROWS_WITH_AS(arrow_space_decomposition(labels, m),
                         doctest::Contains("NotBimoduleCompatible"), Error);
  }
}

TEST_CASE("quiver validation") {
  Quiver q;
  q.vertices = {0, 0};
  CHECK_THROWS_AS(q.validate(), Error);
  q.vertices = {0};
  q.arrows = {{0, 0, 5}};
  CHECK_THROWS_AS(q.validate(), Error);
}
