#include <random>

#include "doctest.h"
#include "qqw/fixtures.hpp"

using namespace qqw;

namespace {

QContext f7() { return make_prime_field_context(7, 2); }    // |q| = 3
QContext f13() { return make_prime_field_context(13, 3); }  // |q| = 3

}  // namespace

TEST_CASE("component shapes of Q(mu, N)") {
  CHECK(component_shape(FieldScalar::integer(2), 3).infinite);
  ComponentShape s = component_shape(FieldScalar::residue(2, 7), 2);  // |mu| = 3
  CHECK(!s.infinite);
  CHECK(s.p == 6);
  ComponentShape t = component_shape(FieldScalar::residue(1, 7), 1);
  CHECK(t.p == 1);
}

TEST_CASE("tau in generic and root-of-unity mode") {
  // generic: m = 2, m' = 4 over Q with q = 2: d = 2, mu = 2^4
  BimodContext bc(QContext::rational(2), 2, 4);
  CHECK(!bc.root_mode());
  CHECK(bc.tau(GammaVertex{FieldScalar::integer(3), 0, 0}) == 0);
  // minimal t >= 3 with t odd
  CHECK(bc.tau(GammaVertex{FieldScalar::integer(3), 3, 1}) == 3);
  CHECK(bc.tau(GammaVertex{FieldScalar::integer(3), 3, 0}) == 4);
  CHECK(bc.epsilon(GammaVertex{FieldScalar::integer(3), 3, 1}) == 0);

  // root mode with incompatible congruences: m = m' = 2 in F_7 (mu = q^2,
  // |mu| = 3, d = 2, gcd(3, 2) = 1 so always solvable); use m = m' = 6 for
  // gcd(e, d) > 1: ell = 6, mu = q^6 = 1, e = 1 -> tau = k, always solvable.
  QContext ctx = f7();
  BimodContext bc2(ctx, 2, 2);
  CHECK(bc2.root_mode());
  CHECK(bc2.mu_order() == std::optional<unsigned>(3));
  CHECK(bc2.period() == 6);
  // tau(s, k): unique 0 <= t < 6 with t = s mod 3, t = k mod 2
  CHECK(bc2.tau(GammaVertex{ctx.one(), 0, 0}) == 0);
  CHECK(bc2.tau(GammaVertex{ctx.one(), 2, 1}) == 5);
  CHECK(bc2.tau(GammaVertex{ctx.one(), 1, 0}) == 4);
}

TEST_CASE("tau returns none when the congruences are incompatible") {
  // need gcd(|q^ell|, d) > 1: take F_13 with q = 5 (order 4), m = m' = 2:
  // ell = 2, mu = 25 = 12 = -1, |mu| = 2, d = 2, gcd = 2
  QContext ctx = make_prime_field_context(13, 5);
  BimodContext bc(ctx, 2, 2);
  REQUIRE(bc.mu_order() == std::optional<unsigned>(2));
  CHECK(bc.tau(GammaVertex{ctx.one(), 0, 0}).has_value());
  CHECK(!bc.tau(GammaVertex{ctx.one(), 1, 0}).has_value());  // t = 1 mod 2 and 0 mod 2
  CHECK(bc.tau(GammaVertex{ctx.one(), 1, 1}).has_value());
}

TEST_CASE("epsilon: z1 m at the last vertex, 0 otherwise; canonical z choice") {
  QContext ctx = f7();
  BimodContext bc(ctx, 3, 3);  // ell = d = 3, mu = 1, e = 1, p = 3
  CHECK(bc.z1() == 1);
  CHECK(bc.z2() == 0);
  CHECK(bc.epsilon(GammaVertex{ctx.one(), 0, 2}) == 3);  // tau = 2 = p - 1
  CHECK(bc.epsilon(GammaVertex{ctx.one(), 0, 1}) == 0);
  // generic mode: always 0
  BimodContext bcq(QContext::rational(2), 3, 3);
  CHECK(bcq.epsilon(GammaVertex{FieldScalar::integer(5), 2, 2}) == 0);
}

TEST_CASE("phi and psi round trips on random fixtures (root and generic mode)") {
  struct Setup {
    QContext ctx;
    unsigned m, mprime;
  };
  std::vector<Setup> setups{{f7(), 3, 3},   {f7(), 2, 2},  {f13(), 3, 3},
                            {f13(), 3, 6},  {QContext::rational(2), 2, 4},
                            {QContext::rational(2), 3, 3}};
  for (const auto& su : setups) {
    BimodContext bc(su.ctx, su.m, su.mprime);
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
      GammaRep w = fixtures::random_gamma_rep(seed, bc);
      auto [g0, g0p] = fixtures::random_psi_scalars(seed * 33 + 1, bc);
      // dim psi(W) = ell * sum dim W
      BimoduleInC v = psi(w, bc, g0, g0p);
      CHECK(v.dim() == bc.ell() * w.total_dim());
      // phi(psi(W)) == W on the nose
      RoundTripReport rep = verify_round_trip_rep(w, bc, g0, g0p);
      INFO("m=", su.m, " m'=", su.mprime, " seed=", seed, ": ",
           (rep.failures.empty() ? std::string() : rep.failures.front()));
      CHECK(rep.pass);
      // xi_V: psi(phi(V)) ~ V for V = psi(W)
      RoundTripReport xi = verify_round_trip_bimodule(v, bc);
      INFO("xi: ", (xi.failures.empty() ? std::string() : xi.failures.front()));
      CHECK(xi.pass);
      // the bimodule is the degree-1 data of a verified path-algebra action
      UqbAction act = bimodule_to_uqb_action(v, bc);
      CHECK(verify_hopf_action(act).pass);
    }
  }
}

TEST_CASE("phi output satisfies the Gamma-relation B_target A = q^ell A B") {
  QContext ctx = f13();
  BimodContext bc(ctx, 3, 6);
  for (std::uint64_t seed = 40; seed < 46; ++seed) {
    GammaRep w = fixtures::random_gamma_rep(seed, bc);
    auto [g0, g0p] = fixtures::random_psi_scalars(seed, bc);
    GammaRep back = phi(psi(w, bc, g0, g0p), bc);
    // locate targets by value and check the relation matrixwise
    for (std::size_t i = 0; i < back.vertices.size(); ++i) {
      FieldScalar tv = bc.vertex_value(back.vertices[i]) * bc.mu();
      long tk = back.vertices[i].k + 1;
      for (std::size_t u = 0; u < back.vertices.size(); ++u) {
        if (!(bc.vertex_value(back.vertices[u]) == tv)) continue;
        if ((back.vertices[u].k - tk) % static_cast<long>(bc.d()) != 0) continue;
        if (back.A[i].rows() == 0) continue;
        CHECK(back.B[u] * back.A[i] == (back.A[i] * back.B[i]).scaled(bc.mu()));
      }
    }
  }
}

TEST_CASE("phi preserves the total dimension of the V^0_* column") {
  QContext ctx = f7();
  BimodContext bc(ctx, 3, 3);
  for (std::uint64_t seed = 50; seed < 56; ++seed) {
    GammaRep w = fixtures::random_gamma_rep(seed, bc);
    auto [g0, g0p] = fixtures::random_psi_scalars(seed, bc);
    BimoduleInC v = psi(w, bc, g0, g0p);
    GammaRep back = phi(v, bc);
    unsigned col = 0;
    for (unsigned j = 0; j < v.mprime; ++j) col += v.block_dims[0][j];
    CHECK(back.total_dim() == col);
  }
}

TEST_CASE("r = n Taft structure: a single component with min(m, m') vertices") {
  QContext ctx = f7();
  // m = 1, m' = n = 3: d = 1, ell = 3, one component of d vertices
  GammaTTable t = build_gamma_T(3, 3, 1, 3, ctx.zero(), ctx.parse("2"), ctx);
  REQUIRE(t.components.size() == 1);
  CHECK(t.components[0].size == 1);
  CHECK(t.case_id == 4);
}

TEST_CASE("zero objects round trip trivially") {
  BimodContext bc(f7(), 3, 3);
  GammaRep w;
  CHECK(verify_round_trip_rep(w, bc, bc.ctx().zero(), bc.ctx().zero()).pass);
  BimoduleInC v = psi(w, bc, bc.ctx().zero(), bc.ctx().zero());
  CHECK(v.dim() == 0);
  CHECK(phi(v, bc).support_size() == 0);
}

TEST_CASE("independence: different valid scalar sets give identical unravelings") {
  QContext ctx = f7();
  BimodContext bc(ctx, 3, 3);
  for (std::uint64_t seed = 7; seed < 12; ++seed) {
    GammaRep w = fixtures::random_gamma_rep(seed, bc);
    BimoduleInC v1 = psi(w, bc, ctx.parse("1"), ctx.parse("2"));
    BimoduleInC v2 = psi(w, bc, ctx.parse("3"), ctx.parse("5"));
    CHECK(gamma_reps_equal(phi(v1, bc), phi(v2, bc), bc));
    CHECK(gamma_reps_equal(phi(v1, bc), w, bc));
  }
}

TEST_CASE("Gamma_T relation tables across the four cases") {
  // case 2: m = m' = r = n = 3 in F_7, zeta = 1, z1 = 1, z2 = 0
  {
    QContext ctx = f7();
    FieldScalar g0 = ctx.parse("2"), g0p = ctx.parse("3");
    GammaTTable t = build_gamma_T(3, 3, 3, 3, g0, g0p, ctx);
    CHECK(t.case_id == 2);
    REQUIRE(t.components.size() == 1);
    CHECK(t.components[0].size == 3);
    // a^u = gamma_0^r - gamma_0'^r with the canonical z-choice
    CHECK(t.components[0].scalar == g0.pow(3) - g0p.pow(3));
  }
  // case 1: m, m' != r: scalar 0 on every component
  {
    QContext ctx = f7();
    GammaTTable t = build_gamma_T(3, 6, 2, 2, ctx.zero(), ctx.zero(), ctx);
    CHECK(t.case_id == 1);
    for (const auto& comp : t.components) CHECK(comp.scalar.is_zero());
    // gamma must vanish away from m = r
    CHECK_THROWS_WITH_AS(build_gamma_T(3, 6, 2, 2, ctx.one(), ctx.zero(), ctx),
                         doctest::Contains("GammaConstraintViolated"), Error);
  }
  // case 3: m = r, m' != r
  {
    QContext ctx = f7();
    FieldScalar g0 = ctx.parse("4");
    GammaTTable t = build_gamma_T(3, 6, 3, 6, g0, ctx.zero(), ctx);
    CHECK(t.case_id == 3);
    CHECK(t.d == 3);
    CHECK(t.ell == 6);
    // scalar = zeta^{z2} gamma_0^r per component
    BimodContext bc(ctx, 3, 6);
    for (const auto& comp : t.components)
      CHECK(comp.scalar == comp.zeta.pow(bc.z2()) * g0.pow(3));
  }
  // case 4: m != r, m' = r
  {
    QContext ctx = f7();
    FieldScalar g0p = ctx.parse("5");
    GammaTTable t = build_gamma_T(3, 6, 6, 3, ctx.zero(), g0p, ctx);
    CHECK(t.case_id == 4);
  }
  // wrong order
  CHECK_THROWS_WITH_AS(build_gamma_T(4, 8, 4, 4, f7().zero(), f7().zero(), f7()),
                       doctest::Contains("WrongOrderOfQ"), Error);
}

TEST_CASE("Gamma_T membership: scalar case fixtures and their psi images factor") {
  QContext ctx = f7();
  unsigned r = 3, n = 3, m = 3, mp = 3;
  BimodContext bc(ctx, m, mp);
  FieldScalar g0 = ctx.parse("2"), g0p = ctx.parse("3");
  GammaTTable table = build_gamma_T(r, n, m, mp, g0, g0p, ctx);
  FieldScalar c = table.components[0].scalar;

  // membership: build W with a-cycle product = c * id
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    GammaRep w;
    unsigned dim = 1 + rng() % 2;
    for (unsigned k = 0; k < 3; ++k) {
      w.vertices.push_back(GammaVertex{ctx.one(), 0, static_cast<long>(k)});
      w.dims.push_back(dim);
      w.B.push_back(Matrix(dim, dim, ctx.field()));
    }
    Matrix a0(dim, dim, ctx.field()), a1(dim, dim, ctx.field());
    do {
      for (unsigned i = 0; i < dim; ++i)
        for (unsigned j = 0; j < dim; ++j) {
          a0.at(i, j) = FieldScalar::residue(rng() % 7, 7);
          a1.at(i, j) = FieldScalar::residue(rng() % 7, 7);
        }
    } while (a0.rank() < dim || a1.rank() < dim);
    Matrix a2 = (a1 * a0).inverse().scaled(c);  // a2 a1 a0 = c id
    w.A = {a0, a1, a2};
    MembershipReport mem = check_gamma_T_membership(w, table, bc);
    INFO((mem.failures.empty() ? std::string() : mem.failures.front()));
    CHECK(mem.member);
    // psi(W) factors through T(r, n) as a path-algebra action
    BimoduleInC v = psi(w, bc, g0, g0p);
    UqbAction act = bimodule_to_uqb_action(v, bc, 4);
    auto fr = check_taft_factorization(act, r, n);
    CHECK(fr.factors);
    CHECK(fr.oracle);

    // break the cycle product: membership and factorization both fail
    w.A[2] = a2.scaled(ctx.parse("2"));
    if (!c.is_zero()) {
      MembershipReport bad = check_gamma_T_membership(w, table, bc);
      CHECK(!bad.member);
      BimoduleInC vb = psi(w, bc, g0, g0p);
      auto fb = check_taft_factorization(bimodule_to_uqb_action(vb, bc, 4), r, n);
      CHECK(!fb.factors);
    }
  }
}

TEST_CASE("Gamma_T membership case 1: a^r = 0 on radical fixtures") {
  QContext ctx = f7();
  unsigned r = 3, n = 6, m = 2, mp = 2;
  BimodContext bc(ctx, m, mp);  // mu = q^2 has order 3, d = 2, p = 6
  GammaTTable table = build_gamma_T(r, n, m, mp, ctx.zero(), ctx.zero(), ctx);
  // vertices on the Taft quiver carry (n/ell)-th roots of unity; with zero
  // a-maps the radical relation a^r = 0 holds trivially
  GammaRep w;
  for (unsigned j = 0; j < 4; ++j) {
    w.vertices.push_back(GammaVertex{ctx.one(), static_cast<long>(j % 3), static_cast<long>(j % 2)});
    w.dims.push_back(1 + j % 2);
    w.A.push_back(Matrix(0, w.dims.back(), ctx.field()));
    w.B.push_back(Matrix(w.dims.back(), w.dims.back(), ctx.field()));
  }
  MembershipReport mem = check_gamma_T_membership(w, table, bc);
  INFO((mem.failures.empty() ? std::string() : mem.failures.front()));
  CHECK(mem.member);
  // a rep living off the root-of-unity vertices is rejected
  GammaRep off;
  off.vertices.push_back(GammaVertex{ctx.parse("3"), 0, 0});  // 3^2 = 2 != 1
  off.dims.push_back(1);
  off.A.push_back(Matrix(0, 1, ctx.field()));
  off.B.push_back(Matrix(1, 1, ctx.field()));
  CHECK(!check_gamma_T_membership(off, table, bc).member);
}

TEST_CASE("primed functors: round trips and the glue relation at m = m' = n = 3") {
  QContext ctx = f7();
  unsigned n = 3;
  auto [gE, gF] = fixtures::gammaEF_pair(11, ctx);
  auto [gEp, gFp] = fixtures::gammaEF_pair(12, ctx);
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    GammaRep w = fixtures::random_gamma_rep_prime(seed, ctx, n);
    RoundTripReport rep = verify_round_trip_rep_prime(w, ctx, n, n, gE, gEp, gF, gFp);
    INFO("seed ", seed, ": ", (rep.failures.empty() ? std::string() : rep.failures.front()));
    CHECK(rep.pass);
    // psi' output carries a verified u_q(sl2)-compatible action and its
    // unraveling satisfies the C/A glue (checked inside phi_prime)
    BimoduleInC v = psi_prime(w, ctx, n, n, gE, gEp, gF, gFp);
    CHECK_NOTHROW(phi_prime(v, ctx));
    CHECK(v.dim() == 3 * w.total_dim());
  }
  // zero objects map to zero both ways
  GammaRep zero;
  zero.primed = true;
  BimoduleInC vz = psi_prime(zero, ctx, n, n, gE, gEp, gF, gFp);
  CHECK(vz.dim() == 0);
}

TEST_CASE("primed membership table") {
  QContext ctx = f7();
  unsigned n = 3;
  auto [gE, gF] = fixtures::gammaEF_pair(21, ctx);
  auto [gEp, gFp] = fixtures::gammaEF_pair(22, ctx);
  FieldScalar ca = gE.pow(3) - gEp.pow(3);
  FieldScalar cc = gF.pow(3) - gFp.pow(3);
  std::mt19937_64 rng(9);
  GammaRep w;
  w.primed = true;
  unsigned dim = 2;
  for (unsigned k = 0; k < 3; ++k) {
    w.vertices.push_back(GammaVertex{ctx.one(), 0, static_cast<long>(k)});
    w.dims.push_back(dim);
    w.B.push_back(Matrix(dim, dim, ctx.field()));
  }
  // a-maps with product ca, c-maps commuting via the q^2 glue and product cc
  Matrix a0(dim, dim, ctx.field());
  do {
    for (unsigned i = 0; i < dim; ++i)
      for (unsigned j = 0; j < dim; ++j) a0.at(i, j) = FieldScalar::residue(rng() % 7, 7);
  } while (a0.rank() < dim);
  Matrix a1 = a0;
  Matrix a2 = (a1 * a0).inverse().scaled(ca);
  w.A = {a0, a1, a2};
  // scalar c-maps: c_k = gamma_k id with the propagation gamma_{k+1} = q^2 alpha ratio
  // use C_0 = c id and C_{k+1} = q^2 A_{k+1} C_k A_k^{-1}
  FieldScalar c0 = ctx.parse("1");
  // choose c0 so that the product equals cc: product = prod(C_k) computed below
  std::vector<Matrix> c{Matrix::identity(dim, ctx.field()).scaled(c0)};
  for (unsigned k = 1; k < 3; ++k) c.push_back((w.A[k] * c[k - 1] * w.A[k - 1].inverse()).scaled(ctx.q_pow(2)));
  Matrix prod = c[2] * c[1] * c[0];
  // prod is a scalar matrix lambda id (A's conjugate scalars); rescale c0
  FieldScalar lam = prod.at(0, 0);
  if (!lam.is_zero() && !cc.is_zero()) {
    // scaling c0 by t scales the product by t^3; solve t^3 = cc/lam in F_7
    FieldScalar want = cc / lam;
    bool found = false;
    for (std::uint64_t t = 1; t < 7 && !found; ++t) {
      FieldScalar ts = FieldScalar::residue(t, 7);
      if (ts.pow(3) == want) {
        for (auto& m2 : c) m2 = m2.scaled(ts);
        found = true;
      }
    }
    if (found) {
      w.C = c;
      MembershipReport mem =
          check_gamma_T_prime_membership(w, ctx, n, gE, gEp, gF, gFp);
      INFO((mem.failures.empty() ? std::string() : mem.failures.front()));
      CHECK(mem.member);
    }
  }
}

TEST_CASE("Etingof-Ostrik classifier") {
  QContext ctx = f7();
  // t = n = 3, gamma = 0: A(1)
  UqbVertexData d;
  d.perm = {1, 2, 0};
  d.gamma = {ctx.zero(), ctx.zero(), ctx.zero()};
  CHECK(classify_etingof_ostrik(d, 3, ctx).to_string() == "A(1)");
  // t = 1: A(3)
  UqbVertexData d1;
  d1.perm = {0};
  d1.gamma = {ctx.zero()};
  CHECK(classify_etingof_ostrik(d1, 3, ctx).to_string() == "A(3)");
  // gamma nonzero: A(3, gamma^{-3} (1 - q^{-1})^{-3}); with gamma = (1,4,2),
  // (1 - 4)^{-3} = 4^{-3} = 1 in F_7 so the label is A(3, 1)
  UqbVertexData d2;
  d2.perm = {1, 2, 0};
  d2.gamma = {ctx.parse("1"), ctx.parse("4"), ctx.parse("2")};
  EOLabel label = classify_etingof_ostrik(d2, 3, ctx);
  CHECK(label.algebra_n == 3);
  REQUIRE(label.lambda.has_value());
  CHECK(*label.lambda == ctx.parse("1"));
  // the label is independent of the chosen vertex: checked internally; also
  // verify against a second valid gamma set
  UqbVertexData d3;
  d3.perm = {1, 2, 0};
  d3.gamma = {ctx.parse("2"), ctx.parse("1"), ctx.parse("4")};
  EOLabel l3 = classify_etingof_ostrik(d3, 3, ctx);
  CHECK(l3.lambda.has_value());
  // errors
  UqbVertexData bad;
  bad.perm = {0, 1};
  bad.gamma = {ctx.zero(), ctx.zero()};
  CHECK_THROWS_WITH_AS(classify_etingof_ostrik(bad, 3, ctx), doctest::Contains("NotTransitive"),
                       Error);
  UqbVertexData mixed;
  mixed.perm = {1, 2, 0};
  mixed.gamma = {ctx.zero(), ctx.parse("1"), ctx.zero()};
  CHECK_THROWS_WITH_AS(classify_etingof_ostrik(mixed, 3, ctx), doctest::Contains("MixedGamma"),
                       Error);
}

TEST_CASE("normalization canonicalizes labels and is idempotent") {
  QContext ctx = f13();
  BimodContext bc(ctx, 3, 3);  // mu = q^3 = 1
  GammaRep w;
  w.vertices.push_back(GammaVertex{ctx.parse("5"), 0, 4});  // k normalized mod 3
  w.dims.push_back(1);
  w.A.push_back(Matrix(0, 1, ctx.field()));
  w.B.push_back(Matrix(1, 1, ctx.field()));
  GammaRep n1 = normalize_gamma_rep(w, bc);
  CHECK(n1.vertices[0].k == 1);
  CHECK(gamma_reps_equal(w, n1, bc));
}
