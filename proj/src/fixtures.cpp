#include "qqw/fixtures.hpp"

#include <numeric>
#include <random>

namespace qqw::fixtures {

namespace {

FieldScalar random_scalar(std::mt19937_64& rng, const QContext& ctx, bool nonzero = false) {
  if (ctx.field().kind == FieldKind::Prime) {
    std::uint64_t lo = nonzero ? 1 : 0;
    return FieldScalar::residue(lo + rng() % (ctx.field().p - lo), ctx.field().p);
  }
  long v = static_cast<long>(rng() % 9) - 4;
  if (nonzero && v == 0) v = 1;
  return FieldScalar::integer(v);
}

std::vector<std::size_t> orbit_of(const std::vector<std::size_t>& perm, std::size_t start) {
  std::vector<std::size_t> orbit{start};
  for (std::size_t j = perm[start]; j != start; j = perm[j]) orbit.push_back(j);
  return orbit;
}

}  // namespace

UqbFixture random_uqb_fixture(std::uint64_t seed, const QContext& ctx, unsigned max_vertices,
                              unsigned max_arrows) {
  std::mt19937_64 rng(seed);
  UqbFixture f;
  const bool root = ctx.q_is_root_of_unity();
  const unsigned r = root ? *ctx.order_of_q() : 0;

  // vertex orbits: fixed points, r-cycles when they fit, other gamma-free sizes
  unsigned nv = 1 + static_cast<unsigned>(rng() % max_vertices);
  std::vector<std::size_t> perm(nv);
  std::vector<FieldScalar> gamma(nv, ctx.zero());
  {
    unsigned placed = 0;
    while (placed < nv) {
      unsigned remaining = nv - placed;
      unsigned size = 1;
      if (root && r <= remaining && rng() % 2)
        size = r;
      else if (remaining > 1 && rng() % 3 == 0)
        size = 2 + static_cast<unsigned>(rng() % (remaining - 1));
      for (unsigned i = 0; i < size; ++i)
        perm[placed + i] = placed + (i + 1) % size;
      if (root && size == r && rng() % 2) {
        // seed gamma on the orbit representative and propagate by (qgamma)
        FieldScalar g = random_scalar(rng, ctx, true);
        for (unsigned i = 0; i < size; ++i) {
          gamma[placed + i] = g;
          g *= ctx.q_pow(-1);
        }
      }
      placed += size;
    }
  }
  f.vertex.perm = perm;
  f.vertex.gamma = gamma;
  for (unsigned i = 0; i < nv; ++i) f.quiver.vertices.push_back(static_cast<int>(i));

  // arrow orbits compatible with the vertex permutation
  unsigned budget = static_cast<unsigned>(rng() % (max_arrows + 1));
  struct ArrowOrbit {
    std::size_t start;
    unsigned size;
    FieldScalar wrap;
  };
  std::vector<ArrowOrbit> orbits;
  std::vector<std::pair<std::size_t, std::size_t>> endpoints;  // (s, t) per arrow
  while (budget > 0) {
    std::size_t s = rng() % nv, t = rng() % nv;
    unsigned los = static_cast<unsigned>(orbit_of(perm, s).size());
    unsigned lot = static_cast<unsigned>(orbit_of(perm, t).size());
    unsigned base = static_cast<unsigned>(std::lcm(los, lot));
    unsigned size = base;
    if (2 * base <= budget && rng() % 2) size = 2 * base;  // doubled orbits (e.g. length 2r)
    if (size > budget) {
      if (base > budget) break;
      size = base;
    }
    ArrowOrbit orb{endpoints.size(), size, random_scalar(rng, ctx, true)};
    for (unsigned j = 0; j < size; ++j) {
      std::size_t sj = s, tj = t;
      for (unsigned step = 0; step < j; ++step) {
        sj = perm[sj];
        tj = perm[tj];
      }
      endpoints.emplace_back(sj, tj);
    }
    orbits.push_back(orb);
    budget -= size;
  }
  const std::size_t na = endpoints.size();
  for (std::size_t a = 0; a < na; ++a)
    f.quiver.arrows.push_back({static_cast<int>(a), static_cast<int>(endpoints[a].first),
                               static_cast<int>(endpoints[a].second)});

  // g on arrows: a_j -> a_{j+1} within each orbit, wrap scaled
  Matrix g1(na, na, ctx.field());
  for (const ArrowOrbit& orb : orbits) {
    for (unsigned j = 0; j + 1 < orb.size; ++j)
      g1.at(orb.start + j + 1, orb.start + j) = ctx.one();
    g1.at(orb.start, orb.start + orb.size - 1) = orb.wrap;
  }

  // sigma on orbit representatives: inside the block (sa, g.ta) intersected
  // with the eigencondition g^T sigma(a) = q^T wrap sigma(a), then propagated
  Matrix sigma(na, na, ctx.field());
  for (const ArrowOrbit& orb : orbits) {
    std::size_t a0 = orb.start;
    std::size_t sa = endpoints[a0].first, gta = perm[endpoints[a0].second];
    std::vector<std::size_t> block;
    for (std::size_t b = 0; b < na; ++b)
      if (endpoints[b].first == sa && endpoints[b].second == gta) block.push_back(b);
    if (block.empty()) continue;
    Matrix gT = g1.pow(orb.size);
    Matrix sub(block.size(), block.size(), ctx.field());
    for (std::size_t i = 0; i < block.size(); ++i)
      for (std::size_t j = 0; j < block.size(); ++j) sub.at(i, j) = gT.at(block[i], block[j]);
    FieldScalar target = ctx.q_pow(static_cast<long>(orb.size)) * orb.wrap;
    Matrix ker = (sub - Matrix::identity(block.size(), ctx.field()).scaled(target)).kernel();
    if (ker.cols() == 0 || rng() % 3 == 0) continue;  // sigma vanishes on this orbit
    std::vector<FieldScalar> pick(block.size(), ctx.zero());
    for (std::size_t c = 0; c < ker.cols(); ++c) {
      FieldScalar coeff = random_scalar(rng, ctx);
      for (std::size_t i = 0; i < block.size(); ++i) pick[i] += coeff * ker.at(i, c);
    }
    // sigma(a_0) = pick; sigma(a_j) = q^{-j} g^j sigma(a_0)
    std::vector<FieldScalar> cur(na, ctx.zero());
    for (std::size_t i = 0; i < block.size(); ++i) cur[block[i]] = pick[i];
    for (unsigned j = 0; j < orb.size; ++j) {
      for (std::size_t b = 0; b < na; ++b) sigma.at(b, orb.start + j) = cur[b];
      cur = g1.apply(cur);
      for (auto& c : cur) c *= ctx.q_pow(-1);
    }
  }
  f.arrow.g1 = std::move(g1);
  f.arrow.sigma = GradedLinearMap{1, 1, std::move(sigma)};
  return f;
}

UqbAction build_fixture_action(const UqbFixture& f, const QContext& ctx, unsigned bound) {
  auto alg = std::make_shared<TruncatedPathAlgebra>(f.quiver, bound, ctx.field());
  return build_uqb_action(f.vertex, f.arrow, std::move(alg), ctx);
}

UqbAction broken_uqb_action(std::uint64_t seed, const QContext& ctx, BreakKind kind,
                            unsigned bound) {
  std::mt19937_64 rng(seed);
  const bool root = ctx.q_is_root_of_unity();
  const unsigned r = root ? *ctx.order_of_q() : 3;

  if (kind == BreakKind::QGamma) {
    // r-cycle of vertices with a gamma that fails to propagate
    Quiver q;
    for (unsigned i = 0; i < r; ++i) q.vertices.push_back(static_cast<int>(i));
    auto alg = std::make_shared<TruncatedPathAlgebra>(q, bound, ctx.field());
    Matrix g0(r, r, ctx.field());
    for (unsigned i = 0; i < r; ++i) g0.at((i + 1) % r, i) = ctx.one();
    Matrix x0(r, r, ctx.field());
    FieldScalar g = random_scalar(rng, ctx, true);
    for (unsigned i = 0; i < r; ++i) {
      FieldScalar gi = i + 1 == r ? g + ctx.one() : g;  // wrong value on the last vertex
      x0.at(i, i) += gi;
      x0.at((i + 1) % r, i) -= gi * ctx.q_pow(-1);
      g *= ctx.q_pow(-1);
    }
    return UqbAction::from_matrices(std::move(alg), ctx, std::move(g0),
                                    Matrix(0, 0, ctx.field()), std::move(x0),
                                    Matrix(r, 0, ctx.field()));
  }

  if (kind == BreakKind::Sigma2) {
    // two vertices and an arrow 0 -> 1 whose sigma leaks outside e_{sa} . e_{g.ta}
    Quiver q2;
    q2.vertices = {0, 1};
    q2.arrows = {{0, 0, 0}, {1, 0, 1}};
    auto alg2 = std::make_shared<TruncatedPathAlgebra>(q2, bound, ctx.field());
    Matrix g0b = Matrix::identity(2, ctx.field());
    Matrix g1b = Matrix::identity(2, ctx.field());
    Matrix x0b(4, 2, ctx.field());
    Matrix x1b(4, 2, ctx.field());
    x1b.at(2 + 1, 0) = random_scalar(rng, ctx, true);  // sigma(a0) = c a1, block (0,0) vs (0,1)
    return UqbAction::from_matrices(std::move(alg2), ctx, std::move(g0b), std::move(g1b),
                                    std::move(x0b), std::move(x1b));
  }

  // base quiver: one fixed vertex with two loops a, b; g = diag(1, q) makes
  // sigma(a) = c b valid, which each break then perturbs
  Quiver q;
  q.vertices = {0};
  q.arrows = {{0, 0, 0}, {1, 0, 0}};
  auto alg = std::make_shared<TruncatedPathAlgebra>(q, bound, ctx.field());
  Matrix g0 = Matrix::identity(1, ctx.field());
  Matrix g1(2, 2, ctx.field());
  g1.at(0, 0) = ctx.one();
  g1.at(1, 1) = ctx.q();
  Matrix x0(3, 1, ctx.field());
  Matrix x1(3, 2, ctx.field());
  x1.at(1 + 1, 0) = random_scalar(rng, ctx, true);  // sigma(a) = c b, valid
  if (kind == BreakKind::Sigma1) {
    // x . e_0 picks up an arrow component, so sigma(kQ_0) != 0
    x0.at(1 + static_cast<std::size_t>(rng() % 2), 0) = random_scalar(rng, ctx, true);
  } else if (kind == BreakKind::Sigma3) {
    x1.at(1 + 0, 0) = random_scalar(rng, ctx, true);  // sigma(a) += c' a: wrong eigenshift
  }
  return UqbAction::from_matrices(std::move(alg), ctx, std::move(g0), std::move(g1), std::move(x0),
                                  std::move(x1));
}

UqslFixture random_uqsl_fixture(std::uint64_t seed, const QContext& ctx, unsigned n,
                                bool factoring) {
  std::mt19937_64 rng(seed);
  check(ctx.order_of_q() == std::optional<unsigned>(n), Errc::WrongOrderOfQ,
        "fixture needs |q| = n");
  UqslFixture f;
  auto [gE, gF] = gammaEF_pair(seed ^ 0x9e3779b97f4a7c15ull, ctx);

  // one n-cycle of vertices with the paired scalars, plus a fixed vertex
  unsigned nv = n + 1;
  f.data.perm.resize(nv);
  f.data.gammaE.assign(nv, ctx.zero());
  f.data.gammaF.assign(nv, ctx.zero());
  for (unsigned i = 0; i < n; ++i) {
    f.data.perm[i] = (i + 1) % n;
    f.data.gammaE[i] = ctx.q_pow(-2 * static_cast<long>(i)) * gE;
    f.data.gammaF[i] = ctx.q_pow(2 * static_cast<long>(i)) * gF;
  }
  f.data.perm[n] = n;
  for (unsigned i = 0; i < nv; ++i) f.quiver.vertices.push_back(static_cast<int>(i));

  // arrows: a cyclic orbit i -> i+1 around the n-cycle, and loops at the
  // fixed vertex with K acting by +-1
  unsigned na = 0;
  bool cycle_arrows = rng() % 2 == 0;
  unsigned loops = static_cast<unsigned>(rng() % 3);
  if (!cycle_arrows && loops == 0) cycle_arrows = true;
  if (cycle_arrows) {
    for (unsigned i = 0; i < n; ++i)
      f.quiver.arrows.push_back({static_cast<int>(na++), static_cast<int>(i),
                                 static_cast<int>((i + 1) % n)});
  }
  for (unsigned l = 0; l < loops; ++l)
    f.quiver.arrows.push_back({static_cast<int>(na++), static_cast<int>(n), static_cast<int>(n)});

  Matrix k1(na, na, ctx.field());
  std::size_t pos = 0;
  if (cycle_arrows) {
    for (unsigned i = 0; i + 1 < n; ++i) k1.at(pos + i + 1, pos + i) = ctx.one();
    k1.at(pos, pos + n - 1) = factoring ? ctx.one() : random_scalar(rng, ctx, true);
    pos += n;
  }
  for (unsigned l = 0; l < loops; ++l) {
    // K^2 = id is forced on loops at a fixed vertex when sigma = 0
    FieldScalar c = (rng() % 2) ? ctx.one() : -ctx.one();
    if (!factoring && rng() % 2) c = -ctx.one();
    k1.at(pos, pos) = c;
    ++pos;
  }
  f.data.k1 = std::move(k1);
  f.data.sigmaE = GradedLinearMap{1, 1, Matrix(na, na, ctx.field())};
  f.data.sigmaF = GradedLinearMap{1, 1, Matrix(na, na, ctx.field())};
  return f;
}

GammaRep random_gamma_rep(std::uint64_t seed, const BimodContext& bc, unsigned max_support,
                          unsigned max_dim) {
  std::mt19937_64 rng(seed);
  const QContext& ctx = bc.ctx();
  GammaRep w;

  auto add_vertex = [&](const FieldScalar& coset, long s, long k, unsigned dim) {
    w.vertices.push_back(GammaVertex{coset, s, k});
    w.dims.push_back(dim);
    return w.vertices.size() - 1;
  };

  if (bc.root_mode() && bc.period() <= max_support) {
    // one full a-cycle: vertices (mu^s lambda0, k) with tau solvable, walking
    // (lambda, k) -> (mu lambda, k+1) for period p steps
    FieldScalar lambda0 = random_scalar(rng, ctx, true);
    unsigned p = bc.period();
    unsigned dim0 = 1 + static_cast<unsigned>(rng() % max_dim);
    int family = static_cast<int>(rng() % 3);
    std::vector<unsigned> dims;
    for (unsigned j = 0; j < p; ++j)
      dims.push_back(family == 0 ? 1 + static_cast<unsigned>(rng() % max_dim) : dim0);
    long e = static_cast<long>(*bc.mu_order());
    for (unsigned j = 0; j < p; ++j)
      add_vertex(lambda0, static_cast<long>(j) % e, static_cast<long>(j) % bc.d(), dims[j]);
    const std::size_t nv = w.vertices.size();
    if (family == 0) {
      // zero loops, arbitrary a-maps around the cycle
      for (std::size_t i = 0; i < nv; ++i) {
        std::size_t u = (i + 1) % nv;
        Matrix a(w.dims[u], w.dims[i], ctx.field());
        for (std::size_t r2 = 0; r2 < a.rows(); ++r2)
          for (std::size_t c2 = 0; c2 < a.cols(); ++c2) a.at(r2, c2) = random_scalar(rng, ctx);
        w.A.push_back(std::move(a));
        w.B.push_back(Matrix(w.dims[i], w.dims[i], ctx.field()));
      }
    } else if (family == 1) {
      // scalar a-maps with shared nilpotent loops: B_{k+1} A = mu A B_k needs
      // the loop coefficient to pick up mu at each step
      Matrix nil(dim0, dim0, ctx.field());
      for (unsigned r2 = 0; r2 + 1 < dim0; ++r2) nil.at(r2, r2 + 1) = ctx.one();
      FieldScalar c = random_scalar(rng, ctx);
      for (std::size_t i = 0; i < nv; ++i) {
        FieldScalar alpha = random_scalar(rng, ctx);
        w.A.push_back(Matrix::identity(dim0, ctx.field()).scaled(alpha));
        w.B.push_back(nil.scaled(c));
        c *= bc.mu();
      }
    } else {
      // zero a-maps, arbitrary nilpotent loops
      for (std::size_t i = 0; i < nv; ++i) {
        std::size_t u = (i + 1) % nv;
        w.A.push_back(Matrix(w.dims[u], w.dims[i], ctx.field()));
        Matrix b(w.dims[i], w.dims[i], ctx.field());
        for (std::size_t r2 = 0; r2 < b.rows(); ++r2)
          for (std::size_t c2 = r2 + 1; c2 < b.cols(); ++c2)
            b.at(r2, c2) = random_scalar(rng, ctx);
        w.B.push_back(std::move(b));
      }
    }
  } else {
    // generic q (or a period too long for the support cap): a finite a-chain
    // whose last a-map is a 0-row matrix
    FieldScalar lambda0 = random_scalar(rng, ctx, true);
    unsigned len = 2 + static_cast<unsigned>(rng() % std::max(1u, max_support - 1));
    len = std::min(len, max_support);
    if (bc.root_mode()) len = std::min(len, bc.period() - 1);
    len = std::max(len, 1u);
    int family = static_cast<int>(rng() % 2);
    unsigned dim0 = 1 + static_cast<unsigned>(rng() % max_dim);
    long e_mod = bc.root_mode() ? static_cast<long>(*bc.mu_order()) : 0;
    for (unsigned j = 0; j < len; ++j) {
      unsigned dim = family == 0 ? 1 + static_cast<unsigned>(rng() % max_dim) : dim0;
      long s = bc.root_mode() ? static_cast<long>(j) % e_mod : static_cast<long>(j);
      add_vertex(lambda0, s, static_cast<long>(j) % bc.d(), dim);
    }
    Matrix nil(dim0, dim0, ctx.field());
    for (unsigned r2 = 0; r2 + 1 < dim0; ++r2) nil.at(r2, r2 + 1) = ctx.one();
    FieldScalar c = random_scalar(rng, ctx);
    for (std::size_t i = 0; i < w.vertices.size(); ++i) {
      bool last = i + 1 == w.vertices.size();
      if (family == 0) {
        Matrix a(last ? 0 : w.dims[i + 1], w.dims[i], ctx.field());
        for (std::size_t r2 = 0; r2 < a.rows(); ++r2)
          for (std::size_t c2 = 0; c2 < a.cols(); ++c2) a.at(r2, c2) = random_scalar(rng, ctx);
        w.A.push_back(std::move(a));
        w.B.push_back(Matrix(w.dims[i], w.dims[i], ctx.field()));
      } else {
        FieldScalar alpha = random_scalar(rng, ctx);
        w.A.push_back(last ? Matrix(0, dim0, ctx.field())
                           : Matrix::identity(dim0, ctx.field()).scaled(alpha));
        w.B.push_back(nil.scaled(c));
        c *= bc.mu();
      }
    }
  }
  return w;
}

GammaRep random_gamma_rep_prime(std::uint64_t seed, const QContext& ctx, unsigned n,
                                unsigned max_dim) {
  std::mt19937_64 rng(seed);
  GammaRep w;
  w.primed = true;
  const FieldScalar one = ctx.one();
  unsigned dim = 1 + static_cast<unsigned>(rng() % max_dim);
  int family = static_cast<int>(rng() % 3);
  for (unsigned k = 0; k < n; ++k) {
    w.vertices.push_back(GammaVertex{one, 0, static_cast<long>(k)});
    w.dims.push_back(dim);
  }
  const FieldScalar q2 = ctx.q_pow(2);
  if (family == 0) {
    // invertible a-maps; C_0 = A_0 (x + y Q) with Q the full a-cycle product
    // commutes around the wrap, and C_{k+1} = q^2 A_{k+1} C_k A_k^{-1} keeps
    // the glue relation along the way
    std::vector<Matrix> a;
    for (unsigned k = 0; k < n; ++k) {
      Matrix m(dim, dim, ctx.field());
      do {
        for (unsigned i = 0; i < dim; ++i)
          for (unsigned j = 0; j < dim; ++j) m.at(i, j) = random_scalar(rng, ctx);
      } while (m.rank() < dim);
      a.push_back(std::move(m));
    }
    Matrix cycle = Matrix::identity(dim, ctx.field());
    for (unsigned k = 0; k < n; ++k) cycle = a[k] * cycle;
    Matrix c0 = a[0] * (Matrix::identity(dim, ctx.field()).scaled(random_scalar(rng, ctx)) +
                        cycle.scaled(random_scalar(rng, ctx)));
    std::vector<Matrix> c{c0};
    for (unsigned k = 1; k < n; ++k)
      c.push_back((a[k] * c[k - 1] * a[k - 1].inverse()).scaled(q2));
    for (unsigned k = 0; k < n; ++k) {
      w.A.push_back(a[k]);
      w.C.push_back(c[k]);
      w.B.push_back(Matrix(dim, dim, ctx.field()));
    }
  } else if (family == 1) {
    // scalar a and c, optionally with a shared nilpotent loop part
    Matrix nil(dim, dim, ctx.field());
    for (unsigned r2 = 0; r2 + 1 < dim; ++r2) nil.at(r2, r2 + 1) = ctx.one();
    FieldScalar bcoef = (rng() % 2) ? random_scalar(rng, ctx) : ctx.zero();
    FieldScalar gammac = random_scalar(rng, ctx);
    std::vector<FieldScalar> alpha;
    for (unsigned k = 0; k < n; ++k) alpha.push_back(random_scalar(rng, ctx, true));
    for (unsigned k = 0; k < n; ++k) {
      w.A.push_back(Matrix::identity(dim, ctx.field()).scaled(alpha[k]));
      w.C.push_back(Matrix::identity(dim, ctx.field()).scaled(gammac));
      w.B.push_back(nil.scaled(bcoef));
      gammac = q2 * alpha[(k + 1) % n] * gammac / alpha[k];
    }
  } else {
    for (unsigned k = 0; k < n; ++k) {
      w.A.push_back(Matrix(dim, dim, ctx.field()));
      w.C.push_back(Matrix(dim, dim, ctx.field()));
      w.B.push_back(Matrix(dim, dim, ctx.field()));
    }
  }
  return w;
}

std::pair<FieldScalar, FieldScalar> random_psi_scalars(std::uint64_t seed, const BimodContext& bc) {
  std::mt19937_64 rng(seed);
  const QContext& ctx = bc.ctx();
  FieldScalar g0 = ctx.zero(), g0p = ctx.zero();
  if (ctx.q_pow(static_cast<long>(bc.m())).is_one() && rng() % 2)
    g0 = random_scalar(rng, ctx, true);
  if (ctx.q_pow(static_cast<long>(bc.mprime())).is_one() && rng() % 2)
    g0p = random_scalar(rng, ctx, true);
  return {g0, g0p};
}

std::pair<FieldScalar, FieldScalar> gammaEF_pair(std::uint64_t seed, const QContext& ctx) {
  std::mt19937_64 rng(seed);
  FieldScalar one_minus_q2 = ctx.one() - ctx.q_pow(2);
  FieldScalar prod = -(ctx.q() / (one_minus_q2 * one_minus_q2));
  FieldScalar gE = random_scalar(rng, ctx, true);
  return {gE, prod / gE};
}

}  // namespace qqw::fixtures
