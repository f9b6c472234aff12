#include "qqw/bimodfunctors.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace qqw {

namespace {

long lcm_u(long a, long b) { return a / std::gcd(a, b) * b; }

// extended Euclid: returns (g, x, y) with a x + b y = g
std::tuple<long, long, long> ext_gcd(long a, long b) {
  long old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    long quot = old_r / r;
    old_r -= quot * r;
    std::swap(old_r, r);
    old_s -= quot * s;
    std::swap(old_s, s);
    old_t -= quot * t;
    std::swap(old_t, t);
  }
  return {old_r, old_s, old_t};
}

long mod_pos(long a, long m) { return ((a % m) + m) % m; }

}  // namespace

unsigned GammaRep::total_dim() const {
  return std::accumulate(dims.begin(), dims.end(), 0u);
}

std::size_t BimoduleInC::dim() const {
  std::size_t n = 0;
  for (const auto& row : block_dims)
    for (unsigned dd : row) n += dd;
  return n;
}

std::size_t BimoduleInC::block_offset(unsigned i, unsigned j) const {
  std::size_t off = 0;
  for (unsigned a = 0; a < m; ++a)
    for (unsigned b = 0; b < mprime; ++b) {
      if (a == i && b == j) return off;
      off += block_dims[a][b];
    }
  fail(Errc::OutOfRange, "block index out of range");
}

std::pair<unsigned, unsigned> BimoduleInC::block_of(std::size_t basis_index) const {
  std::size_t off = 0;
  for (unsigned a = 0; a < m; ++a)
    for (unsigned b = 0; b < mprime; ++b) {
      off += block_dims[a][b];
      if (basis_index < off) return {a, b};
    }
  fail(Errc::OutOfRange, "basis index out of range");
}

std::vector<BlockLabel> BimoduleInC::labels() const {
  std::vector<BlockLabel> out;
  for (unsigned a = 0; a < m; ++a)
    for (unsigned b = 0; b < mprime; ++b)
      for (unsigned t = 0; t < block_dims[a][b]; ++t)
        out.push_back(BlockLabel{static_cast<int>(a), static_cast<int>(b)});
  return out;
}

ComponentShape component_shape(const FieldScalar& mu, unsigned N) {
  auto order = multiplicative_order(mu);
  if (!order) return ComponentShape{true, 0};
  return ComponentShape{false, static_cast<unsigned>(lcm_u(*order, N))};
}

BimodContext::BimodContext(QContext ctx, unsigned m, unsigned mprime)
    : ctx_(std::move(ctx)),
      m_(m),
      mprime_(mprime),
      ell_(static_cast<unsigned>(lcm_u(m, mprime))),
      d_(static_cast<unsigned>(std::gcd(m, mprime))),
      mu_(ctx_.q_pow(static_cast<long>(lcm_u(m, mprime)))) {
  check(m >= 1 && mprime >= 1, Errc::ConfigError, "m, m' must be positive");
  e_ = mu_.is_zero() ? std::nullopt : multiplicative_order(mu_);
  if (e_) {
    long p = lcm_u(static_cast<long>(*e_), static_cast<long>(d_));
    auto [g, a, b] = ext_gcd(static_cast<long>(m_), static_cast<long>(mprime_));
    // g = d; scale to p and pick the smallest positive z1 representative
    long scale = p / g;
    long z1raw = a * scale;
    long step = static_cast<long>(mprime_) / g;
    z1_ = mod_pos(z1raw - 1, step) + 1;
    z2_ = (p - z1_ * static_cast<long>(m_)) / static_cast<long>(mprime_);
  }
}

unsigned BimodContext::period() const {
  check(e_.has_value(), Errc::Internal, "period only exists in root-of-unity mode");
  return static_cast<unsigned>(lcm_u(static_cast<long>(*e_), static_cast<long>(d_)));
}

FieldScalar BimodContext::vertex_value(const GammaVertex& v) const {
  return v.coset * mu_.pow(v.s);
}

std::optional<long> BimodContext::tau(const GammaVertex& v) const {
  long k = mod_pos(v.k, static_cast<long>(d_));
  if (!e_) {
    // minimal t >= s with t = k mod d
    long s = v.s;
    return s + mod_pos(k - s, static_cast<long>(d_));
  }
  long e = static_cast<long>(*e_);
  long s = mod_pos(v.s, e);
  long g = std::gcd(e, static_cast<long>(d_));
  if (mod_pos(k - s, g) != 0) return std::nullopt;
  // CRT: t = s mod e, t = k mod d, unique in [0, lcm(e, d))
  long lcm = lcm_u(e, static_cast<long>(d_));
  auto [gg, u, vcoef] = ext_gcd(e, static_cast<long>(d_));
  (void)vcoef;
  long t = s + mod_pos((k - s) / g * u, static_cast<long>(d_) / g) * e;
  t = mod_pos(t, lcm);
  return t;
}

long BimodContext::epsilon(const GammaVertex& v) const {
  if (!e_) return 0;
  auto t = tau(v);
  if (t && *t == static_cast<long>(period()) - 1) return z1_ * static_cast<long>(m_);
  return 0;
}

std::optional<long> BimodContext::mu_log(const FieldScalar& ratio, long max_steps) const {
  if (e_) max_steps = static_cast<long>(*e_);
  FieldScalar y = field_one(ctx_.field());
  for (long t = 0; t <= max_steps; ++t) {
    if (y == ratio) return t;
    y *= mu_;
  }
  y = mu_.inv();
  for (long t = 1; t <= max_steps; ++t) {
    if (y == ratio) return -t;
    y = y * mu_.inv();
  }
  return std::nullopt;
}

namespace {

struct VertexKey {
  FieldScalar value;
  long k;

  bool operator<(const VertexKey& o) const {
    int c = value.cmp(o.value);
    if (c != 0) return c < 0;
    return k < o.k;
  }
};

}  // namespace

GammaRep normalize_gamma_rep(const GammaRep& w, const BimodContext& bc) {
  check(w.vertices.size() == w.dims.size() && w.vertices.size() == w.A.size() &&
            w.vertices.size() == w.B.size() && (!w.primed || w.vertices.size() == w.C.size()),
        Errc::ConfigError, "inconsistent GammaRep arrays");
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < w.vertices.size(); ++i)
    if (w.dims[i] > 0) keep.push_back(i);

  // group observed values into <mu>-orbits and pick canonical-minimum bases
  std::vector<FieldScalar> values;
  for (std::size_t i : keep) values.push_back(bc.vertex_value(w.vertices[i]));
  std::vector<long> orbit_of(keep.size(), -1);
  std::vector<FieldScalar> base;
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (orbit_of[i] >= 0) continue;
    long id = static_cast<long>(base.size());
    orbit_of[i] = id;
    FieldScalar mn = values[i];
    for (std::size_t j = i + 1; j < keep.size(); ++j) {
      if (orbit_of[j] >= 0) continue;
      if (bc.mu_log(values[j] / values[i])) {
        orbit_of[j] = id;
        if (values[j].cmp(mn) < 0) mn = values[j];
      }
    }
    base.push_back(mn);
  }

  GammaRep out;
  out.primed = w.primed;
  std::vector<std::size_t> order(keep.size());
  std::iota(order.begin(), order.end(), 0u);
  std::vector<GammaVertex> relabeled(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    const FieldScalar& b = base[static_cast<std::size_t>(orbit_of[i])];
    auto s = bc.mu_log(values[i] / b);
    check(s.has_value(), Errc::Internal, "mu_log failed inside an orbit");
    relabeled[i] = GammaVertex{b, *s, mod_pos(w.vertices[keep[i]].k, bc.d())};
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b2) {
    int c = relabeled[a].coset.cmp(relabeled[b2].coset);
    if (c != 0) return c < 0;
    if (relabeled[a].s != relabeled[b2].s) return relabeled[a].s < relabeled[b2].s;
    return relabeled[a].k < relabeled[b2].k;
  });
  for (std::size_t pos : order) {
    std::size_t i = keep[pos];
    out.vertices.push_back(relabeled[pos]);
    out.dims.push_back(w.dims[i]);
    out.A.push_back(w.A[i]);
    out.B.push_back(w.B[i]);
    if (w.primed) out.C.push_back(w.C[i]);
  }
  return out;
}

bool gamma_reps_equal(const GammaRep& a, const GammaRep& b, const BimodContext& bc) {
  GammaRep x = normalize_gamma_rep(a, bc), y = normalize_gamma_rep(b, bc);
  if (x.primed != y.primed || x.vertices.size() != y.vertices.size()) return false;
  for (std::size_t i = 0; i < x.vertices.size(); ++i) {
    if (!(bc.vertex_value(x.vertices[i]) == bc.vertex_value(y.vertices[i]))) return false;
    if (x.vertices[i].k != y.vertices[i].k || x.dims[i] != y.dims[i]) return false;
    if (!(x.A[i] == y.A[i]) || !(x.B[i] == y.B[i])) return false;
    if (x.primed && !(x.C[i] == y.C[i])) return false;
  }
  return true;
}

namespace {

void validate_borel_bimodule(const BimoduleInC& v, const BimodContext& bc) {
  check(!v.sl2, Errc::ConfigError, "expected a borel-mode bimodule");
  check(v.m == bc.m() && v.mprime == bc.mprime(), Errc::ConfigError,
        "bimodule (m, m') does not match the context");
  const std::size_t n = v.dim();
  check(v.g.rows() == n && v.g.cols() == n && v.sigma.rows() == n && v.sigma.cols() == n,
        Errc::ConfigError, "bimodule matrix shapes");
  const QContext& ctx = bc.ctx();
  // scalar admissibility: gamma_0 != 0 needs q^m = 1 (finite orbit wrap)
  if (!v.gamma0.is_zero())
    check(ctx.q_pow(static_cast<long>(v.m)).is_one(), Errc::ScalarConstraintViolated,
          "gamma_0 != 0 requires q^m = 1");
  if (!v.gamma0p.is_zero())
    check(ctx.q_pow(static_cast<long>(v.mprime)).is_one(), Errc::ScalarConstraintViolated,
          "gamma_0' != 0 requires q^{m'} = 1");
  // block moves: g: (i,j) -> (i+1, j+1); sigma: (i,j) -> (i, j+1)
  for (std::size_t col = 0; col < n; ++col) {
    auto [i, j] = v.block_of(col);
    for (std::size_t row = 0; row < n; ++row) {
      if (!v.g.at(row, col).is_zero()) {
        auto [i2, j2] = v.block_of(row);
        check(i2 == (i + 1) % v.m && j2 == (j + 1) % v.mprime, Errc::NotBimoduleCompatible,
              "g does not shift blocks by (+1, +1)");
      }
      if (!v.sigma.at(row, col).is_zero()) {
        auto [i2, j2] = v.block_of(row);
        check(i2 == i && j2 == (j + 1) % v.mprime, Errc::SigmaConstraintViolated,
              "(sigma2): sigma does not shift blocks by (0, +1)");
      }
    }
  }
  // (sigma3): sigma g = q^{-1} g sigma
  if (!(v.sigma * v.g == (v.g * v.sigma).scaled(ctx.q_pow(-1))))
    fail(Errc::SigmaConstraintViolated, "(sigma3): sigma(g.v) != q^{-1} g.sigma(v)");
}

struct PhiBuild {
  GammaRep rep;
  std::vector<Matrix> bases;  // full-coordinate eigenbasis per vertex
};

PhiBuild phi_build(const BimoduleInC& v, const BimodContext& bc) {
  validate_borel_bimodule(v, bc);
  const QContext& ctx = bc.ctx();
  const std::size_t n = v.dim();
  const Matrix gl = v.g.pow(bc.ell());

  // generalized eigenspaces of g^ell on each V^0_j, in full coordinates
  struct Eig {
    unsigned j;
    FieldScalar lambda;
    Matrix basis;  // n x dim
  };
  std::vector<Eig> eigs;
  for (unsigned j = 0; j < v.mprime; ++j) {
    unsigned bd = v.block_dims[0][j];
    if (bd == 0) continue;
    std::size_t off = v.block_offset(0, j);
    Matrix mj(bd, bd, ctx.field());
    for (unsigned a = 0; a < bd; ++a)
      for (unsigned b = 0; b < bd; ++b) mj.at(a, b) = gl.at(off + a, off + b);
    std::size_t found = 0;
    for (const FieldScalar& lambda : eigenvalues_in_field(mj)) {
      check(!lambda.is_zero(), Errc::EigenvaluesNotInField, "g^ell has eigenvalue 0");
      Matrix es = generalized_eigenspace(mj, lambda);
      if (es.cols() == 0) continue;
      Matrix full(n, es.cols(), ctx.field());
      for (std::size_t a = 0; a < bd; ++a)
        for (std::size_t c = 0; c < es.cols(); ++c) full.at(off + a, c) = es.at(a, c);
      found += es.cols();
      eigs.push_back({j, lambda, std::move(full)});
    }
    check(found == bd, Errc::EigenvaluesNotInField,
          "characteristic polynomial of g^ell does not split on V^0_" + std::to_string(j));
  }

  // orbit bases over the observed eigenvalues
  std::vector<FieldScalar> observed;
  for (const Eig& e : eigs) {
    bool seen = std::any_of(observed.begin(), observed.end(),
                            [&](const FieldScalar& x) { return x == e.lambda; });
    if (!seen) observed.push_back(e.lambda);
  }
  std::vector<long> orbit_of(observed.size(), -1);
  std::vector<FieldScalar> base;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (orbit_of[i] >= 0) continue;
    long id = static_cast<long>(base.size());
    orbit_of[i] = id;
    FieldScalar mn = observed[i];
    for (std::size_t j = i + 1; j < observed.size(); ++j) {
      if (orbit_of[j] >= 0) continue;
      if (bc.mu_log(observed[j] / observed[i])) {
        orbit_of[j] = id;
        if (observed[j].cmp(mn) < 0) mn = observed[j];
      }
    }
    base.push_back(mn);
  }
  auto label_of = [&](const FieldScalar& lambda) -> GammaVertex {
    for (std::size_t i = 0; i < observed.size(); ++i)
      if (observed[i] == lambda) {
        auto s = bc.mu_log(lambda / base[static_cast<std::size_t>(orbit_of[i])]);
        check(s.has_value(), Errc::Internal, "mu_log failed inside an orbit");
        return GammaVertex{base[static_cast<std::size_t>(orbit_of[i])], *s, 0};
      }
    fail(Errc::Internal, "unobserved eigenvalue");
  };

  // every observed eigenspace must belong to a tau-solvable vertex class
  for (const Eig& e : eigs) {
    GammaVertex probe = label_of(e.lambda);
    probe.k = static_cast<long>(e.j % bc.d());
    check(bc.tau(probe).has_value(), Errc::TauUnsolvable,
          "eigenspace at block j = " + std::to_string(e.j) +
              " lands on a vertex with unsolvable tau");
  }

  // support: for each observed eigenvalue and each k, the tau-claimed block
  PhiBuild out;
  struct Entry {
    GammaVertex v;
    FieldScalar lambda;
    unsigned dim;
    Matrix basis;
  };
  std::vector<Entry> entries;
  for (const FieldScalar& lambda : observed) {
    for (long k = 0; k < static_cast<long>(bc.d()); ++k) {
      GammaVertex vert = label_of(lambda);
      vert.k = k;
      auto t = bc.tau(vert);
      if (!t) continue;
      unsigned jclaim = static_cast<unsigned>(mod_pos(*t, static_cast<long>(v.mprime)));
      for (const Eig& e : eigs) {
        if (e.j == jclaim && e.lambda == lambda) {
          entries.push_back({vert, lambda, static_cast<unsigned>(e.basis.cols()), e.basis});
          break;
        }
      }
    }
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    int c = a.v.coset.cmp(b.v.coset);
    if (c != 0) return c < 0;
    if (a.v.s != b.v.s) return a.v.s < b.v.s;
    return a.v.k < b.v.k;
  });

  auto find_entry = [&](const FieldScalar& value, long k) -> long {
    for (std::size_t i = 0; i < entries.size(); ++i)
      if (bc.vertex_value(entries[i].v) == value && entries[i].v.k == mod_pos(k, bc.d()))
        return static_cast<long>(i);
    return -1;
  };

  const Matrix ginv = v.g.inverse();
  for (const Entry& e : entries) {
    out.rep.vertices.push_back(e.v);
    out.rep.dims.push_back(e.dim);
    out.bases.push_back(e.basis);
  }
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const Entry& e = entries[i];
    // B = (g^ell - lambda) restricted
    Matrix shifted = gl * e.basis - e.basis.scaled(e.lambda);
    out.rep.B.push_back(solve_in_span(e.basis, shifted, Errc::NotBimoduleCompatible,
                                      "(g^ell - lambda) leaves the eigenspace"));
    // A = sigma restricted, with g^{-epsilon} across the wrap-around arrow
    Matrix img = v.sigma * e.basis;
    long eps = bc.epsilon(e.v);
    if (eps != 0) img = ginv.pow(static_cast<unsigned>(eps)) * img;
    long target = find_entry(bc.vertex_value(e.v) * bc.mu(), e.v.k + 1);
    if (target < 0) {
      check(img.is_zero(), Errc::NotBimoduleCompatible,
            "sigma maps a vertex space onto an empty vertex");
      out.rep.A.push_back(Matrix(0, e.dim, ctx.field()));
    } else {
      out.rep.A.push_back(solve_in_span(entries[static_cast<std::size_t>(target)].basis, img,
                                        Errc::NotBimoduleCompatible,
                                        "sigma image leaves the target eigenspace"));
    }
  }
  return out;
}

}  // namespace

GammaRep phi(const BimoduleInC& v, const BimodContext& bc) { return phi_build(v, bc).rep; }

namespace {

struct PsiElement {
  long t;
  std::size_t vertex;
  unsigned b;
  unsigned block_i, block_j;
};

struct PsiBuild {
  BimoduleInC bim;
  std::vector<PsiElement> elements;           // in basis order
  std::vector<long> taus;                     // per vertex
  std::vector<FieldScalar> values;            // per vertex
};

void validate_gamma_rep(const GammaRep& w, const BimodContext& bc) {
  check(!w.primed, Errc::ConfigError, "expected a borel-mode representation");
  check(w.vertices.size() == w.dims.size() && w.vertices.size() == w.A.size() &&
            w.vertices.size() == w.B.size(),
        Errc::ConfigError, "inconsistent GammaRep arrays");
  for (std::size_t i = 0; i < w.vertices.size(); ++i) {
    check(w.dims[i] >= 1, Errc::ConfigError, "support vertices must have positive dimension");
    check(w.B[i].rows() == w.dims[i] && w.B[i].cols() == w.dims[i], Errc::ConfigError,
          "B shape mismatch");
    check(w.B[i].pow(w.dims[i]).is_zero(), Errc::ConfigError,
          "B maps must be nilpotent (nrep)");
  }
}

PsiBuild psi_build(const GammaRep& w_in, const BimodContext& bc, const FieldScalar& gamma0,
                   const FieldScalar& gamma0p) {
  const QContext& ctx = bc.ctx();
  GammaRep w = normalize_gamma_rep(w_in, bc);
  validate_gamma_rep(w, bc);
  if (!gamma0.is_zero())
    check(ctx.q_pow(static_cast<long>(bc.m())).is_one(), Errc::ScalarConstraintViolated,
          "gamma_0 != 0 requires q^m = 1");
  if (!gamma0p.is_zero())
    check(ctx.q_pow(static_cast<long>(bc.mprime())).is_one(), Errc::ScalarConstraintViolated,
          "gamma_0' != 0 requires q^{m'} = 1");

  const std::size_t nv = w.vertices.size();
  std::vector<long> taus(nv);
  std::vector<FieldScalar> values;
  for (std::size_t i = 0; i < nv; ++i) {
    auto t = bc.tau(w.vertices[i]);
    check(t.has_value(), Errc::TauUnsolvable,
          "support vertex " + std::to_string(i) + " has unsolvable tau");
    taus[i] = *t;
    values.push_back(bc.vertex_value(w.vertices[i]));
  }
  auto find_vertex = [&](const FieldScalar& value, long k) -> long {
    for (std::size_t i = 0; i < nv; ++i)
      if (values[i] == value && w.vertices[i].k == mod_pos(k, bc.d())) return static_cast<long>(i);
    return -1;
  };
  // A-target shapes and the Gamma-relation B_{target} A = mu A B
  std::vector<long> target(nv, -1);
  for (std::size_t i = 0; i < nv; ++i) {
    target[i] = find_vertex(values[i] * bc.mu(), w.vertices[i].k + 1);
    if (target[i] < 0) {
      check(w.A[i].rows() == 0 && w.A[i].cols() == w.dims[i], Errc::ConfigError,
            "A must be a 0-row matrix when the target vertex is absent");
    } else {
      std::size_t u = static_cast<std::size_t>(target[i]);
      check(w.A[i].rows() == w.dims[u] && w.A[i].cols() == w.dims[i], Errc::ConfigError,
            "A shape mismatch");
      if (!(w.B[u] * w.A[i] == (w.A[i] * w.B[i]).scaled(bc.mu())))
        fail(Errc::ConfigError, "not a Gamma-representation: ba != mu ab at vertex " +
                                    std::to_string(i));
    }
  }

  // basis {g^t (x) w}: elements grouped into blocks (t mod m, (tau + t) mod m')
  std::vector<PsiElement> elements;
  for (long t = 0; t < static_cast<long>(bc.ell()); ++t)
    for (std::size_t vtx = 0; vtx < nv; ++vtx)
      for (unsigned b = 0; b < w.dims[vtx]; ++b)
        elements.push_back(
            {t, vtx, b, static_cast<unsigned>(mod_pos(t, bc.m())),
             static_cast<unsigned>(mod_pos(taus[vtx] + t, bc.mprime()))});
  std::stable_sort(elements.begin(), elements.end(), [](const PsiElement& a, const PsiElement& b) {
    return std::tuple(a.block_i, a.block_j) < std::tuple(b.block_i, b.block_j);
  });
  std::map<std::tuple<long, std::size_t, unsigned>, std::size_t> pos;
  for (std::size_t i = 0; i < elements.size(); ++i)
    pos[{elements[i].t, elements[i].vertex, elements[i].b}] = i;

  PsiBuild out;
  out.taus = taus;
  out.values = values;
  out.elements = elements;
  BimoduleInC& bim = out.bim;
  bim.sl2 = false;
  bim.m = bc.m();
  bim.mprime = bc.mprime();
  bim.block_dims.assign(bim.m, std::vector<unsigned>(bim.mprime, 0));
  for (const PsiElement& e : elements) ++bim.block_dims[e.block_i][e.block_j];
  bim.gamma0 = gamma0;
  bim.gamma0p = gamma0p;

  const std::size_t n = elements.size();
  bim.g = Matrix(n, n, ctx.field());
  bim.sigma = Matrix(n, n, ctx.field());

  // normalizes g^t (x) vec at a vertex into the basis range 0 <= t < ell,
  // applying (lambda + B)^{+-1} per wrap
  auto normalized_insert = [&](Matrix& target_matrix, std::size_t col, long t, std::size_t vtx,
                               std::vector<FieldScalar> vec, const FieldScalar& coeff) {
    const Matrix& b = w.B[vtx];
    const FieldScalar& lambda = values[vtx];
    Matrix lb = b + Matrix::identity(b.rows(), ctx.field()).scaled(lambda);
    while (t >= static_cast<long>(bc.ell())) {
      t -= static_cast<long>(bc.ell());
      vec = lb.apply(vec);
    }
    if (t < 0) {
      Matrix lbinv = lb.inverse();
      while (t < 0) {
        t += static_cast<long>(bc.ell());
        vec = lbinv.apply(vec);
      }
    }
    for (unsigned bb = 0; bb < vec.size(); ++bb) {
      if (vec[bb].is_zero()) continue;
      target_matrix.at(pos.at({t, vtx, bb}), col) += coeff * vec[bb];
    }
  };

  for (std::size_t col = 0; col < n; ++col) {
    const PsiElement& e = elements[col];
    std::vector<FieldScalar> unit(w.dims[e.vertex], field_zero(ctx.field()));
    unit[e.b] = field_one(ctx.field());
    // g . (g^t (x) w) = g^{t+1} (x) w
    normalized_insert(bim.g, col, e.t + 1, e.vertex, unit, ctx.one());
    // sigma(g^t (x) w) = q^{-t} g^{t+eps} (x) A(w)
    if (target[e.vertex] >= 0) {
      std::vector<FieldScalar> av(w.dims[static_cast<std::size_t>(target[e.vertex])],
                                  field_zero(ctx.field()));
      for (std::size_t r2 = 0; r2 < av.size(); ++r2) av[r2] = w.A[e.vertex].at(r2, e.b);
      long eps = bc.epsilon(w.vertices[e.vertex]);
      normalized_insert(bim.sigma, col, e.t + eps, static_cast<std::size_t>(target[e.vertex]),
                        std::move(av), ctx.q_pow(-e.t));
    }
  }

  // well-definedness of the x-action: x.(g^ell (x) w) must equal
  // x.(1 (x) g^ell.w); both routes evaluated through the same normalizer
  auto x_formula = [&](long t, std::size_t vtx, const std::vector<FieldScalar>& vec) {
    std::vector<FieldScalar> out_vec(n, field_zero(ctx.field()));
    long j = mod_pos(out.taus[vtx], bc.mprime());
    FieldScalar gprime_j = ctx.q_pow(-j) * gamma0p;
    FieldScalar qmt = ctx.q_pow(-t);
    Matrix col(n, 1, ctx.field());
    auto add_into = [&](long tt, std::size_t vv, std::vector<FieldScalar> vec2,
                        const FieldScalar& c) {
      normalized_insert(col, 0, tt, vv, std::move(vec2), c);
    };
    add_into(t, vtx, vec, qmt * gprime_j);
    add_into(t + 1, vtx, vec, -(qmt * gamma0 * ctx.q_pow(-1)));
    if (target[vtx] >= 0) {
      std::vector<FieldScalar> av(w.dims[static_cast<std::size_t>(target[vtx])],
                                  field_zero(ctx.field()));
      for (std::size_t r2 = 0; r2 < av.size(); ++r2) {
        av[r2] = field_zero(ctx.field());
        for (std::size_t c2 = 0; c2 < vec.size(); ++c2)
          av[r2] += w.A[vtx].at(r2, c2) * vec[c2];
      }
      add_into(t + bc.epsilon(w.vertices[vtx]), static_cast<std::size_t>(target[vtx]),
               std::move(av), qmt);
    }
    for (std::size_t i = 0; i < n; ++i) out_vec[i] = col.at(i, 0);
    return out_vec;
  };
  for (std::size_t vtx = 0; vtx < nv; ++vtx) {
    Matrix lb = w.B[vtx] + Matrix::identity(w.dims[vtx], ctx.field()).scaled(values[vtx]);
    for (unsigned b = 0; b < w.dims[vtx]; ++b) {
      std::vector<FieldScalar> unit(w.dims[vtx], field_zero(ctx.field()));
      unit[b] = field_one(ctx.field());
      auto route1 = x_formula(static_cast<long>(bc.ell()), vtx, unit);
      auto route2 = x_formula(0, vtx, lb.apply(unit));
      check(route1 == route2, Errc::ScalarConstraintViolated,
            "x-action is not well defined on kG (x)_H W (well-definedness identity fails)");
    }
  }
  return out;
}

}  // namespace

BimoduleInC psi(const GammaRep& w, const BimodContext& bc, const FieldScalar& gamma0,
                const FieldScalar& gamma0p) {
  return psi_build(w, bc, gamma0, gamma0p).bim;
}

namespace {

// The matrix of x on a borel bimodule: x.a = gamma'_j a - gamma_i q^{-1} (g.a) + sigma(a)
// for a in block (i, j), with gamma_i = q^{-i} gamma_0 and gamma'_j = q^{-j} gamma_0'.
Matrix x_matrix(const BimoduleInC& v, const BimodContext& bc) {
  const QContext& ctx = bc.ctx();
  const std::size_t n = v.dim();
  Matrix x(n, n, ctx.field());
  for (std::size_t col = 0; col < n; ++col) {
    auto [i, j] = v.block_of(col);
    FieldScalar gi = ctx.q_pow(-static_cast<long>(i)) * v.gamma0;
    FieldScalar gj = ctx.q_pow(-static_cast<long>(j)) * v.gamma0p;
    x.at(col, col) += gj;
    for (std::size_t row = 0; row < n; ++row) {
      x.at(row, col) -= gi * ctx.q_pow(-1) * v.g.at(row, col);
      x.at(row, col) += v.sigma.at(row, col);
    }
  }
  return x;
}

std::string describe_vertex(const GammaVertex& v, const BimodContext& bc) {
  std::ostringstream os;
  os << "(" << bc.vertex_value(v).to_string() << ", " << mod_pos(v.k, bc.d()) << ")";
  return os.str();
}

}  // namespace

RoundTripReport verify_round_trip_rep(const GammaRep& w, const BimodContext& bc,
                                      const FieldScalar& gamma0, const FieldScalar& gamma0p) {
  RoundTripReport rep;
  GammaRep expected = normalize_gamma_rep(w, bc);
  GammaRep got = phi(psi(w, bc, gamma0, gamma0p), bc);
  if (got.vertices.size() != expected.vertices.size()) {
    rep.failures.push_back("support size " + std::to_string(got.vertices.size()) + " != " +
                           std::to_string(expected.vertices.size()));
  } else {
    for (std::size_t i = 0; i < got.vertices.size(); ++i) {
      if (!(bc.vertex_value(got.vertices[i]) == bc.vertex_value(expected.vertices[i])) ||
          got.vertices[i].k != expected.vertices[i].k)
        rep.failures.push_back("vertex " + std::to_string(i) + " label differs: " +
                               describe_vertex(got.vertices[i], bc) + " vs " +
                               describe_vertex(expected.vertices[i], bc));
      else if (got.dims[i] != expected.dims[i])
        rep.failures.push_back("vertex " + describe_vertex(got.vertices[i], bc) +
                               " dimension differs");
      else {
        if (!(got.A[i] == expected.A[i]))
          rep.failures.push_back("A differs at " + describe_vertex(got.vertices[i], bc));
        if (!(got.B[i] == expected.B[i]))
          rep.failures.push_back("B differs at " + describe_vertex(got.vertices[i], bc));
      }
    }
  }
  rep.pass = rep.failures.empty();
  return rep;
}

RoundTripReport verify_round_trip_bimodule(const BimoduleInC& v, const BimodContext& bc) {
  RoundTripReport rep;
  PhiBuild pb = phi_build(v, bc);
  PsiBuild sb = psi_build(pb.rep, bc, v.gamma0, v.gamma0p);
  const std::size_t n = v.dim();
  if (sb.bim.dim() != n) {
    rep.failures.push_back("psi(phi(V)) has dimension " + std::to_string(sb.bim.dim()) +
                           " != dim V = " + std::to_string(n));
    rep.pass = false;
    return rep;
  }
  // xi(g^t (x) w) = g^t . w
  std::vector<Matrix> gpow{Matrix::identity(n, bc.ctx().field())};
  for (unsigned t = 1; t < bc.ell(); ++t) gpow.push_back(v.g * gpow.back());
  Matrix xi(n, n, bc.ctx().field());
  for (std::size_t col = 0; col < sb.elements.size(); ++col) {
    const PsiElement& e = sb.elements[col];
    const Matrix& basis = pb.bases[e.vertex];
    std::vector<FieldScalar> wvec(n, field_zero(bc.ctx().field()));
    for (std::size_t r2 = 0; r2 < n; ++r2) wvec[r2] = basis.at(r2, e.b);
    auto img = gpow[static_cast<std::size_t>(e.t)].apply(wvec);
    for (std::size_t r2 = 0; r2 < n; ++r2) xi.at(r2, col) = img[r2];
  }
  if (xi.rank() != n) rep.failures.push_back("xi is not bijective");
  // block compatibility: xi maps block (i,j) into block (i,j)
  auto vlabels = v.labels();
  for (std::size_t col = 0; col < sb.elements.size(); ++col) {
    const PsiElement& e = sb.elements[col];
    for (std::size_t row = 0; row < n; ++row) {
      if (xi.at(row, col).is_zero()) continue;
      if (vlabels[row].left != static_cast<int>(e.block_i) ||
          vlabels[row].right != static_cast<int>(e.block_j)) {
        rep.failures.push_back("xi is not a bimodule morphism (block mismatch)");
        row = n;
        col = sb.elements.size() - 1;
      }
    }
  }
  if (!(v.g * xi == xi * sb.bim.g)) rep.failures.push_back("xi does not intertwine g");
  if (!(x_matrix(v, bc) * xi == xi * x_matrix(sb.bim, bc)))
    rep.failures.push_back("xi does not intertwine the x-action");
  rep.pass = rep.failures.empty();
  return rep;
}

namespace {

std::vector<FieldScalar> roots_of_unity(unsigned order, const QContext& ctx) {
  std::vector<FieldScalar> roots;
  if (ctx.field().kind == FieldKind::Prime) {
    for (std::uint64_t r2 = 1; r2 < ctx.field().p; ++r2) {
      FieldScalar z = FieldScalar::residue(r2, ctx.field().p);
      if (z.pow(static_cast<long>(order)).is_one()) roots.push_back(z);
    }
  } else {
    for (long cand : {1L, -1L}) {
      FieldScalar z = FieldScalar::integer(cand);
      if (z.pow(static_cast<long>(order)).is_one()) roots.push_back(z);
    }
  }
  return roots;
}

}  // namespace

GammaTTable build_gamma_T(unsigned r, unsigned n, unsigned m, unsigned mprime,
                          const FieldScalar& gamma0, const FieldScalar& gamma0p,
                          const QContext& ctx) {
  check(ctx.order_of_q() == std::optional<unsigned>(r), Errc::WrongOrderOfQ,
        "q must be a primitive r-th root of unity");
  check(r != 0 && n % r == 0, Errc::WrongOrderOfQ, "r must divide n");
  check(m != 0 && mprime != 0 && n % m == 0 && n % mprime == 0, Errc::CaseUnsupported,
        "Taft-case bimodules need m | n and m' | n");
  if (!gamma0.is_zero())
    check(m == r, Errc::GammaConstraintViolated, "gamma_0 != 0 forces m = r");
  if (!gamma0p.is_zero())
    check(mprime == r, Errc::GammaConstraintViolated, "gamma_0' != 0 forces m' = r");

  GammaTTable table;
  table.r = r;
  table.n = n;
  table.m = m;
  table.mprime = mprime;
  table.d = static_cast<unsigned>(std::gcd(m, mprime));
  table.ell = static_cast<unsigned>(lcm_u(m, mprime));
  if (m != r && mprime != r)
    table.case_id = 1;
  else if (m == r && mprime == r)
    table.case_id = 2;
  else if (m == r)
    table.case_id = 3;
  else
    table.case_id = 4;

  unsigned nl = n / table.ell;
  auto roots = roots_of_unity(nl, ctx);
  check(roots.size() == nl, Errc::CaseUnsupported,
        "the field does not contain the (n/ell)-th roots of unity");
  BimodContext bc(ctx, m, mprime);

  const FieldScalar mu = ctx.q_pow(static_cast<long>(table.ell));
  std::set<std::pair<std::string, long>> seen;
  for (const FieldScalar& zeta : roots) {
    for (long k = 0; k < static_cast<long>(table.d); ++k) {
      if (seen.count({zeta.to_string(), k})) continue;
      // walk the component of (zeta, k) under (z, i) -> (mu z, i+1)
      GammaTComponent comp;
      comp.zeta = zeta;
      comp.size = 0;
      FieldScalar z = zeta;
      long i = k;
      do {
        seen.insert({z.to_string(), mod_pos(i, table.d)});
        if (z.cmp(comp.zeta) < 0) comp.zeta = z;
        ++comp.size;
        z = z * mu;
        i = mod_pos(i + 1, table.d);
      } while (!(z == zeta && i == k));
      const FieldScalar& zl = comp.zeta;
      switch (table.case_id) {
        case 1: comp.scalar = field_zero(ctx.field()); break;
        case 2:
          comp.scalar = zl.pow(-bc.z1()) *
                        (gamma0.pow(static_cast<long>(r)) * zl - gamma0p.pow(static_cast<long>(r)));
          break;
        case 3: comp.scalar = zl.pow(bc.z2()) * gamma0.pow(static_cast<long>(r)); break;
        case 4: {
          FieldScalar sign = ((r - table.d + 1) % 2 == 0) ? ctx.one() : -ctx.one();
          comp.scalar = sign * zl.pow(-bc.z1()) * gamma0p.pow(static_cast<long>(r));
          break;
        }
      }
      table.components.push_back(std::move(comp));
    }
  }
  return table;
}

MembershipReport check_gamma_T_membership(const GammaRep& w_in, const GammaTTable& table,
                                          const BimodContext& bc) {
  MembershipReport rep;
  GammaRep w = normalize_gamma_rep(w_in, bc);
  const QContext& ctx = bc.ctx();
  const FieldScalar mu = bc.mu();
  for (std::size_t i = 0; i < w.vertices.size(); ++i)
    if (!w.B[i].is_zero()) {
      rep.failures.push_back("B map at vertex " + std::to_string(i) +
                             " is nonzero (must vanish in the Taft case)");
    }
  unsigned nl = table.n / table.ell;
  std::vector<FieldScalar> values;
  for (const auto& v : w.vertices) values.push_back(bc.vertex_value(v));
  auto find_vertex = [&](const FieldScalar& value, long k) -> long {
    for (std::size_t i = 0; i < w.vertices.size(); ++i)
      if (values[i] == value && w.vertices[i].k == mod_pos(k, bc.d())) return static_cast<long>(i);
    return -1;
  };
  auto scalar_for = [&](const FieldScalar& lambda, long k) -> FieldScalar {
    if (table.case_id == 1) return field_zero(ctx.field());
    // the component of (lambda, k); with q^ell = 1 in the scalar cases the
    // component is labeled by lambda itself
    for (const auto& comp : table.components)
      if (comp.zeta == lambda) return comp.scalar;
    fail(Errc::Internal, "vertex value " + lambda.to_string() + " is not on the Taft quiver");
  };
  for (std::size_t i = 0; i < w.vertices.size(); ++i) {
    if (!values[i].pow(static_cast<long>(nl)).is_one()) {
      rep.failures.push_back("vertex value " + values[i].to_string() +
                             " is not an (n/ell)-th root of unity");
      continue;
    }
    // compose r a-steps out of vertex i
    long cur = static_cast<long>(i);
    bool dead = false;
    Matrix comp = Matrix::identity(w.dims[i], ctx.field());
    FieldScalar val = values[i];
    long k = w.vertices[i].k;
    for (unsigned step = 0; step < table.r; ++step) {
      if (cur < 0) {
        dead = true;
        break;
      }
      const Matrix& a = w.A[static_cast<std::size_t>(cur)];
      if (a.rows() == 0) {
        dead = true;
        break;
      }
      comp = a * comp;
      val = val * mu;
      k += 1;
      cur = find_vertex(val, k);
    }
    FieldScalar c = scalar_for(values[i], w.vertices[i].k);
    if (dead || (cur < 0)) {
      // the composite factors through a zero space, so it is the zero map
      if (!c.is_zero())
        rep.failures.push_back("a^r vanishes at vertex " + describe_vertex(w.vertices[i], bc) +
                               " but the relation scalar is " + c.to_string());
      continue;
    }
    if (c.is_zero()) {
      if (!comp.is_zero())
        rep.failures.push_back("a^r != 0 at vertex " + describe_vertex(w.vertices[i], bc));
      continue;
    }
    Matrix expected = Matrix::identity(w.dims[static_cast<std::size_t>(cur)], ctx.field()).scaled(c);
    if (static_cast<std::size_t>(cur) != i || !(comp == expected))
      rep.failures.push_back("a^r != scalar at vertex " + describe_vertex(w.vertices[i], bc));
  }
  rep.member = rep.failures.empty();
  return rep;
}

MembershipReport check_gamma_T_prime_membership(const GammaRep& w_in, const QContext& ctx,
                                                unsigned n, const FieldScalar& gammaE0,
                                                const FieldScalar& gammaE0p,
                                                const FieldScalar& gammaF0,
                                                const FieldScalar& gammaF0p) {
  check(n > 2 && n % 2 == 1, Errc::WrongOrderOfQ, "u_q(sl2) needs n odd, n > 2");
  check(ctx.order_of_q() == std::optional<unsigned>(n), Errc::WrongOrderOfQ,
        "q must be a primitive n-th root of unity");
  MembershipReport rep;
  BimodContext bc(ctx.derived_power(2), n, n);
  GammaRep w = normalize_gamma_rep(w_in, bc);
  check(w.primed, Errc::ConfigError, "expected a primed representation");
  const FieldScalar q2 = ctx.q_pow(2);

  std::vector<FieldScalar> values;
  for (const auto& v : w.vertices) values.push_back(bc.vertex_value(v));
  auto find_vertex = [&](long k) -> long {
    for (std::size_t i = 0; i < w.vertices.size(); ++i)
      if (values[i].is_one() && w.vertices[i].k == mod_pos(k, bc.d())) return static_cast<long>(i);
    return -1;
  };
  for (std::size_t i = 0; i < w.vertices.size(); ++i) {
    if (!w.B[i].is_zero())
      rep.failures.push_back("B map at vertex " + std::to_string(i) + " is nonzero");
    if (!values[i].is_one())
      rep.failures.push_back("vertex value " + values[i].to_string() + " is not 1");
  }
  if (!rep.failures.empty()) {
    rep.member = false;
    return rep;
  }

  auto walk = [&](const std::vector<Matrix>& maps, std::size_t from, unsigned steps,
                  std::optional<Matrix>& out_comp) {
    long cur = static_cast<long>(from);
    Matrix comp = Matrix::identity(w.dims[from], ctx.field());
    for (unsigned s = 0; s < steps; ++s) {
      if (cur < 0 || maps[static_cast<std::size_t>(cur)].rows() == 0) {
        out_comp.reset();
        return;
      }
      comp = maps[static_cast<std::size_t>(cur)] * comp;
      cur = find_vertex(w.vertices[static_cast<std::size_t>(cur)].k + 1);
    }
    if (cur != static_cast<long>(from)) {
      out_comp.reset();
      return;
    }
    out_comp = comp;
  };

  FieldScalar ca = gammaE0.pow(static_cast<long>(n)) - gammaE0p.pow(static_cast<long>(n));
  FieldScalar cc = gammaF0.pow(static_cast<long>(n)) - gammaF0p.pow(static_cast<long>(n));
  for (std::size_t i = 0; i < w.vertices.size(); ++i) {
    std::optional<Matrix> compA, compC;
    walk(w.A, i, bc.d(), compA);
    walk(w.C, i, bc.d(), compC);
    auto check_cycle = [&](const std::optional<Matrix>& comp, const FieldScalar& c,
                           const char* name) {
      if (!comp) {
        if (!c.is_zero())
          rep.failures.push_back(std::string(name) + "^d vanishes at vertex " +
                                 std::to_string(i) + " but the scalar is " + c.to_string());
        return;
      }
      if (!(*comp == Matrix::identity(w.dims[i], ctx.field()).scaled(c)))
        rep.failures.push_back(std::string(name) + "^d != scalar at vertex " + std::to_string(i));
    };
    check_cycle(compA, ca, "a");
    check_cycle(compC, cc, "c");
    // glue: C_{k+1} A_k = q^2 A_{k+1} C_k (mu = q^{2 ell} = 1 here)
    long up = find_vertex(w.vertices[i].k + 1);
    if (up >= 0) {
      const Matrix& anext = w.A[static_cast<std::size_t>(up)];
      const Matrix& cnext = w.C[static_cast<std::size_t>(up)];
      bool a_then_c = w.A[i].rows() > 0 && cnext.rows() > 0;
      bool c_then_a = w.C[i].rows() > 0 && anext.rows() > 0;
      Matrix lhs = a_then_c ? cnext * w.A[i] : Matrix(0, 0, ctx.field());
      Matrix rhs = c_then_a ? (anext * w.C[i]).scaled(q2) : Matrix(0, 0, ctx.field());
      if (a_then_c != c_then_a) {
        if ((a_then_c && !lhs.is_zero()) || (c_then_a && !rhs.is_zero()))
          rep.failures.push_back("glue relation fails at vertex " + std::to_string(i));
      } else if (a_then_c && !(lhs == rhs)) {
        rep.failures.push_back("glue relation q^2 ac = ca fails at vertex " + std::to_string(i));
      }
    }
  }
  rep.member = rep.failures.empty();
  return rep;
}

namespace {

void require_sl2_regime(const QContext& ctx, unsigned m, unsigned mprime, unsigned& n_out) {
  check(ctx.q_is_root_of_unity(), Errc::WrongOrderOfQ,
        "the sl2 bimodule equivalence needs q a root of unity (m, m' > 2)");
  unsigned n = *ctx.order_of_q();
  check(n > 2 && n % 2 == 1, Errc::WrongOrderOfQ, "need q a primitive n-th root, n odd, n > 2");
  check(m > 2 && mprime > 2, Errc::CaseUnsupported, "the sl2 case assumes m, m' > 2");
  check(m % n == 0 && mprime % n == 0, Errc::CaseUnsupported,
        "valid sl2 vertex actions force n | m and n | m'");
  n_out = n;
}

void require_gammaEF_pairs(const QContext& ctx, const FieldScalar& gE, const FieldScalar& gF,
                           const FieldScalar& gEp, const FieldScalar& gFp) {
  FieldScalar one_minus_q2 = ctx.one() - ctx.q_pow(2);
  FieldScalar required = -(ctx.q() / (one_minus_q2 * one_minus_q2));
  check(gE * gF == required, Errc::GammaEFConditionViolated,
        "gamma^E_0 gamma^F_0 != -q/(1-q^2)^2 on S_m");
  check(gEp * gFp == required, Errc::GammaEFConditionViolated,
        "gamma^E_0 gamma^F_0 != -q/(1-q^2)^2 on S_{m'}");
}

}  // namespace

GammaRep phi_prime(const BimoduleInC& v, const QContext& ctx) {
  check(v.sl2, Errc::ConfigError, "expected an sl2-mode bimodule");
  unsigned n = 0;
  require_sl2_regime(ctx, v.m, v.mprime, n);
  require_gammaEF_pairs(ctx, v.gammaE0, v.gammaF0, v.gammaE0p, v.gammaF0p);
  // all orbits have > 2 vertices, so (sigma4) reduces to q^2 sE sF = sF sE
  if (!((v.sigmaE * v.sigmaF).scaled(ctx.q_pow(2)) == v.sigmaF * v.sigmaE))
    fail(Errc::SigmaFourViolated, "q^2 sigma^E sigma^F != sigma^F sigma^E");

  BimoduleInC ve;
  ve.m = v.m;
  ve.mprime = v.mprime;
  ve.block_dims = v.block_dims;
  ve.g = v.g;
  ve.gamma0 = v.gammaE0;
  ve.gamma0p = v.gammaE0p;
  ve.sigma = v.sigmaE;
  BimoduleInC vf = ve;
  vf.gamma0 = v.gammaF0;
  vf.gamma0p = v.gammaF0p;
  vf.sigma = v.sigmaF;

  BimodContext bcE(ctx.derived_power(2), v.m, v.mprime);
  BimodContext bcF(ctx.derived_power(-2), v.m, v.mprime);
  GammaRep we = phi(ve, bcE);
  GammaRep wf = phi(vf, bcF);

  check(we.vertices.size() == wf.vertices.size(), Errc::GlueMismatch,
        "the two Borel unravelings disagree on the support");
  GammaRep out;
  out.primed = true;
  out.vertices = we.vertices;
  out.dims = we.dims;
  out.A = we.A;
  out.B = we.B;
  out.C = wf.A;
  for (std::size_t i = 0; i < we.vertices.size(); ++i) {
    check(bcE.vertex_value(we.vertices[i]) == bcF.vertex_value(wf.vertices[i]) &&
              we.vertices[i].k == wf.vertices[i].k && we.dims[i] == wf.dims[i] &&
              we.B[i] == wf.B[i],
          Errc::GlueMismatch, "the two Borel unravelings disagree at vertex " + std::to_string(i));
  }
  // glue relation: with mu = q^{2 ell} = 1, C_{k+1} A_k = q^2 A_{k+1} C_k
  auto find_vertex = [&](const FieldScalar& value, long k) -> long {
    for (std::size_t i = 0; i < out.vertices.size(); ++i)
      if (bcE.vertex_value(out.vertices[i]) == value &&
          out.vertices[i].k == mod_pos(k, bcE.d()))
        return static_cast<long>(i);
    return -1;
  };
  for (std::size_t i = 0; i < out.vertices.size(); ++i) {
    long up = find_vertex(bcE.vertex_value(out.vertices[i]), out.vertices[i].k + 1);
    if (up < 0) continue;
    const Matrix& anext = out.A[static_cast<std::size_t>(up)];
    const Matrix& cnext = out.C[static_cast<std::size_t>(up)];
    if (out.A[i].rows() == 0 || cnext.rows() == 0 || out.C[i].rows() == 0 || anext.rows() == 0)
      continue;
    check(cnext * out.A[i] == (anext * out.C[i]).scaled(ctx.q_pow(2)), Errc::GlueMismatch,
          "C/A glue relation fails at vertex " + std::to_string(i));
  }
  return out;
}

BimoduleInC psi_prime(const GammaRep& w, const QContext& ctx, unsigned m, unsigned mprime,
                      const FieldScalar& gammaE0, const FieldScalar& gammaE0p,
                      const FieldScalar& gammaF0, const FieldScalar& gammaF0p) {
  check(w.primed, Errc::ConfigError, "expected a primed representation");
  unsigned n = 0;
  require_sl2_regime(ctx, m, mprime, n);
  require_gammaEF_pairs(ctx, gammaE0, gammaF0, gammaE0p, gammaF0p);

  GammaRep we;
  we.vertices = w.vertices;
  we.dims = w.dims;
  we.A = w.A;
  we.B = w.B;
  GammaRep wf = we;
  wf.A = w.C;

  BimodContext bcE(ctx.derived_power(2), m, mprime);
  BimodContext bcF(ctx.derived_power(-2), m, mprime);
  BimoduleInC ve = psi(we, bcE, gammaE0, gammaE0p);
  BimoduleInC vf = psi(wf, bcF, gammaF0, gammaF0p);
  check(ve.g == vf.g && ve.block_dims == vf.block_dims, Errc::GlueMismatch,
        "the two Borel inductions disagree");

  BimoduleInC out;
  out.sl2 = true;
  out.m = m;
  out.mprime = mprime;
  out.block_dims = ve.block_dims;
  out.g = ve.g;
  out.gammaE0 = gammaE0;
  out.gammaE0p = gammaE0p;
  out.gammaF0 = gammaF0;
  out.gammaF0p = gammaF0p;
  out.sigmaE = ve.sigma;
  out.sigmaF = vf.sigma;

  // assert the full U_q(sl2) relations through the action verifier
  UqslAction action = bimodule_to_uqsl_action(out, ctx, 2);
  VerifyReport vr = verify_uqsl_action(action);
  check(vr.pass, Errc::Internal, "psi' output fails the U_q(sl2) verifier: " + vr.summary());
  return out;
}

RoundTripReport verify_round_trip_rep_prime(const GammaRep& w, const QContext& ctx, unsigned m,
                                            unsigned mprime, const FieldScalar& gammaE0,
                                            const FieldScalar& gammaE0p,
                                            const FieldScalar& gammaF0,
                                            const FieldScalar& gammaF0p) {
  RoundTripReport rep;
  BimodContext bcE(ctx.derived_power(2), m, mprime);
  BimoduleInC v = psi_prime(w, ctx, m, mprime, gammaE0, gammaE0p, gammaF0, gammaF0p);
  GammaRep got = phi_prime(v, ctx);
  GammaRep expected = normalize_gamma_rep(w, bcE);
  got = normalize_gamma_rep(got, bcE);
  if (got.vertices.size() != expected.vertices.size()) {
    rep.failures.push_back("support size differs");
  } else {
    for (std::size_t i = 0; i < got.vertices.size(); ++i) {
      bool label_ok = bcE.vertex_value(got.vertices[i]) == bcE.vertex_value(expected.vertices[i]) &&
                      got.vertices[i].k == expected.vertices[i].k;
      if (!label_ok || got.dims[i] != expected.dims[i])
        rep.failures.push_back("vertex " + std::to_string(i) + " differs");
      else if (!(got.A[i] == expected.A[i]) || !(got.B[i] == expected.B[i]) ||
               !(got.C[i] == expected.C[i]))
        rep.failures.push_back("maps differ at vertex " + std::to_string(i));
    }
  }
  rep.pass = rep.failures.empty();
  return rep;
}

std::string EOLabel::to_string() const {
  std::string s = "A(" + std::to_string(algebra_n);
  if (lambda) s += ", " + lambda->to_string();
  return s + ")";
}

EOLabel classify_etingof_ostrik(const UqbVertexData& data, unsigned n, const QContext& ctx) {
  check(ctx.order_of_q() == std::optional<unsigned>(n), Errc::WrongOrderOfQ,
        "q must be a primitive n-th root of unity");
  const std::size_t t = data.perm.size();
  check(t >= 1 && data.gamma.size() == t, Errc::ConfigError, "vertex data shape");
  // transitivity: the orbit of 0 must cover Q_0
  std::size_t count = 1;
  for (std::size_t j = data.perm[0]; j != 0; j = data.perm[j]) ++count;
  check(count == t, Errc::NotTransitive, "G does not act transitively on Q_0");

  std::size_t zeros = 0;
  for (const auto& g : data.gamma) zeros += g.is_zero() ? 1 : 0;
  if (zeros == t) {
    check(n % t == 0, Errc::CaseUnsupported, "gamma = 0 needs #Q_0 | n for a T(n)-action");
    return EOLabel{static_cast<unsigned>(n / t), std::nullopt};
  }
  check(zeros == 0, Errc::MixedGamma, "some gamma_i vanish and others do not");
  check(t == n, Errc::CaseUnsupported, "nonzero gamma needs #Q_0 = n");
  // lambda = gamma^{-n} (1 - q^{-1})^{-n}, independent of the chosen vertex
  FieldScalar base = ctx.one() - ctx.q_pow(-1);
  FieldScalar lambda = data.gamma[0].pow(-static_cast<long>(n)) * base.pow(-static_cast<long>(n));
  for (std::size_t i = 1; i < t; ++i) {
    FieldScalar li = data.gamma[i].pow(-static_cast<long>(n)) * base.pow(-static_cast<long>(n));
    check(li == lambda, Errc::Internal, "gamma^{-n} is not constant along the orbit");
  }
  return EOLabel{n, lambda};
}

UqbAction bimodule_to_uqb_action(const BimoduleInC& v, const BimodContext& bc, unsigned bound) {
  check(!v.sl2, Errc::ConfigError, "expected a borel-mode bimodule");
  const QContext& ctx = bc.ctx();
  Quiver q;
  for (unsigned i = 0; i < v.m + v.mprime; ++i) q.vertices.push_back(static_cast<int>(i));
  const std::size_t n = v.dim();
  for (std::size_t a = 0; a < n; ++a) {
    auto [i, j] = v.block_of(a);
    q.arrows.push_back({static_cast<int>(a), static_cast<int>(i), static_cast<int>(v.m + j)});
  }
  auto alg = std::make_shared<TruncatedPathAlgebra>(q, bound, ctx.field());
  UqbVertexData vd;
  vd.perm.resize(v.m + v.mprime);
  vd.gamma.assign(v.m + v.mprime, ctx.zero());
  for (unsigned i = 0; i < v.m; ++i) {
    vd.perm[i] = (i + 1) % v.m;
    vd.gamma[i] = ctx.q_pow(-static_cast<long>(i)) * v.gamma0;
  }
  for (unsigned j = 0; j < v.mprime; ++j) {
    vd.perm[v.m + j] = v.m + (j + 1) % v.mprime;
    vd.gamma[v.m + j] = ctx.q_pow(-static_cast<long>(j)) * v.gamma0p;
  }
  UqbArrowData ad;
  ad.g1 = v.g;
  ad.sigma = GradedLinearMap{1, 1, v.sigma};
  return build_uqb_action(vd, ad, std::move(alg), ctx);
}

UqslAction bimodule_to_uqsl_action(const BimoduleInC& v, const QContext& ctx, unsigned bound) {
  check(v.sl2, Errc::ConfigError, "expected an sl2-mode bimodule");
  Quiver q;
  for (unsigned i = 0; i < v.m + v.mprime; ++i) q.vertices.push_back(static_cast<int>(i));
  const std::size_t n = v.dim();
  for (std::size_t a = 0; a < n; ++a) {
    auto [i, j] = v.block_of(a);
    q.arrows.push_back({static_cast<int>(a), static_cast<int>(i), static_cast<int>(v.m + j)});
  }
  auto alg = std::make_shared<TruncatedPathAlgebra>(q, bound, ctx.field());
  UqslActionData data;
  data.perm.resize(v.m + v.mprime);
  data.gammaE.assign(v.m + v.mprime, ctx.zero());
  data.gammaF.assign(v.m + v.mprime, ctx.zero());
  for (unsigned i = 0; i < v.m; ++i) {
    data.perm[i] = (i + 1) % v.m;
    data.gammaE[i] = ctx.q_pow(-2 * static_cast<long>(i)) * v.gammaE0;
    data.gammaF[i] = ctx.q_pow(2 * static_cast<long>(i)) * v.gammaF0;
  }
  for (unsigned j = 0; j < v.mprime; ++j) {
    data.perm[v.m + j] = v.m + (j + 1) % v.mprime;
    data.gammaE[v.m + j] = ctx.q_pow(-2 * static_cast<long>(j)) * v.gammaE0p;
    data.gammaF[v.m + j] = ctx.q_pow(2 * static_cast<long>(j)) * v.gammaF0p;
  }
  data.k1 = v.g;
  data.sigmaE = GradedLinearMap{1, 1, v.sigmaE};
  data.sigmaF = GradedLinearMap{1, 1, v.sigmaF};
  return build_uqsl_action(data, std::move(alg), ctx);
}

}  // namespace qqw
