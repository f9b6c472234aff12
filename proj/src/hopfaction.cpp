#include "qqw/hopfaction.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <functional>
#include <thread>

namespace qqw {

namespace {

std::vector<std::size_t> perm_from_matrix(const Matrix& g0) {
  std::vector<std::size_t> perm(g0.cols(), g0.cols());
  std::vector<bool> hit(g0.rows(), false);
  for (std::size_t j = 0; j < g0.cols(); ++j) {
    for (std::size_t i = 0; i < g0.rows(); ++i) {
      if (g0.at(i, j).is_zero()) continue;
      check(g0.at(i, j).is_one() && perm[j] == g0.cols() && !hit[i], Errc::Internal,
            "g does not permute the vertex idempotents");
      perm[j] = i;
      hit[i] = true;
    }
    check(perm[j] != g0.cols(), Errc::Internal, "g does not permute the vertex idempotents");
  }
  return perm;
}

Matrix perm_matrix(const std::vector<std::size_t>& perm, const FieldDesc& f) {
  Matrix m(perm.size(), perm.size(), f);
  for (std::size_t j = 0; j < perm.size(); ++j) m.at(perm[j], j) = field_one(f);
  return m;
}

std::vector<std::size_t> orbit_sizes_by_vertex(const std::vector<std::size_t>& perm) {
  std::vector<std::size_t> size(perm.size(), 0);
  std::vector<bool> seen(perm.size(), false);
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (seen[i]) continue;
    std::vector<std::size_t> orbit{i};
    seen[i] = true;
    for (std::size_t j = perm[i]; j != i; j = perm[j]) {
      orbit.push_back(j);
      seen[j] = true;
    }
    for (std::size_t j : orbit) size[j] = orbit.size();
  }
  return size;
}

void validate_perm(const std::vector<std::size_t>& perm, std::size_t n) {
  check(perm.size() == n, Errc::ConfigError, "permutation size mismatch");
  std::vector<bool> hit(n, false);
  for (std::size_t i : perm) {
    check(i < n && !hit[i], Errc::ConfigError, "not a permutation");
    hit[i] = true;
  }
}

// Columns of m, viewed as arrow-space elements, must respect the stated
// block movement: column a supported on arrows b with sb = row_perm(sa),
// tb = col_perm(ta).
void check_block_support(const Matrix& m, const TruncatedPathAlgebra& alg,
                         const std::vector<std::size_t>& source_image,
                         const std::vector<std::size_t>& target_image, Errc code,
                         const std::string& what) {
  const Quiver& q = alg.quiver();
  for (std::size_t a = 0; a < q.arrows.size(); ++a) {
    std::size_t sa = q.vertex_index(q.arrows[a].s), ta = q.vertex_index(q.arrows[a].t);
    for (std::size_t b = 0; b < q.arrows.size(); ++b) {
      if (m.at(b, a).is_zero()) continue;
      std::size_t sb = q.vertex_index(q.arrows[b].s), tb = q.vertex_index(q.arrows[b].t);
      check(sb == source_image[sa] && tb == target_image[ta], code,
            what + ": image of arrow " + std::to_string(q.arrows[a].id) +
                " leaves the allowed block");
    }
  }
}

}  // namespace

bool VerifyReport::has_check(const std::string& name) const {
  return std::any_of(failures.begin(), failures.end(),
                     [&](const VerifyFailure& f) { return f.check == name; });
}

std::string VerifyReport::summary() const {
  if (pass) return "pass";
  std::ostringstream os;
  os << failures.size() << " failure(s); first: " << failures.front().check << " "
     << failures.front().witness;
  return os.str();
}

UqbAction UqbAction::from_matrices(std::shared_ptr<const TruncatedPathAlgebra> alg,
                                   const QContext& ctx, Matrix g0, Matrix g1, Matrix x0,
                                   Matrix x1) {
  UqbAction act(std::move(alg), ctx);
  const std::size_t m0 = act.alg_->dim(0), m1 = act.alg_->dim(1);
  check(g0.rows() == m0 && g0.cols() == m0, Errc::ConfigError, "g0 shape mismatch");
  check(g1.rows() == m1 && g1.cols() == m1, Errc::ConfigError, "arrow matrix shape mismatch");
  check(x0.rows() == m0 + m1 && x0.cols() == m0, Errc::ConfigError,
        "x must map kQ_0 into kQ_0 + kQ_1");
  check(x1.rows() == m0 + m1 && x1.cols() == m1, Errc::ConfigError,
        "x must map kQ_1 into kQ_0 + kQ_1");
  act.g0_ = std::move(g0);
  act.g1_ = std::move(g1);
  act.x0_ = std::move(x0);
  act.x1_ = std::move(x1);
  act.build_tables();
  return act;
}

void UqbAction::build_tables() {
  const TruncatedPathAlgebra& alg = *alg_;
  const std::size_t m0 = alg.dim(0), m1 = alg.dim(1);
  Matrix g0inv = g0_.inverse(), g1inv = g1_.inverse();

  auto column0 = [&](const Matrix& m, std::size_t j) {
    std::vector<FieldScalar> c(m0, field_zero(alg.field()));
    for (std::size_t i = 0; i < m0; ++i) c[i] = m.at(i, j);
    return alg.from_coords(0, c);
  };
  auto column1 = [&](const Matrix& m, std::size_t j) {
    // full-height column: vertex block on top, arrow block below
    PathVector v;
    for (std::size_t i = 0; i < m0; ++i)
      if (!m.at(i, j).is_zero()) v.terms[PathRef{0, i}] = m.at(i, j);
    for (std::size_t i = 0; i < m1; ++i)
      if (!m.at(m0 + i, j).is_zero()) v.terms[PathRef{1, i}] = m.at(m0 + i, j);
    return v;
  };
  auto column_arrows = [&](const Matrix& m, std::size_t j) {
    // degree-preserving column of an m1 x m1 matrix
    PathVector v;
    for (std::size_t i = 0; i < m1; ++i)
      if (!m.at(i, j).is_zero()) v.terms[PathRef{1, i}] = m.at(i, j);
    return v;
  };

  g_table_.assign(alg.bound() + 1, {});
  ginv_table_.assign(alg.bound() + 1, {});
  x_table_.assign(alg.bound() + 1, {});
  for (std::size_t i = 0; i < m0; ++i) {
    g_table_[0].push_back(column0(g0_, i));
    ginv_table_[0].push_back(column0(g0inv, i));
    x_table_[0].push_back(column1(x0_, i));
  }
  if (alg.bound() >= 1) {
    for (std::size_t i = 0; i < m1; ++i) {
      g_table_[1].push_back(column_arrows(g1_, i));
      ginv_table_[1].push_back(column_arrows(g1inv, i));
      x_table_[1].push_back(column1(x1_, i));
    }
  }
  for (unsigned len = 2; len <= alg.bound(); ++len) {
    for (std::size_t i = 0; i < alg.dim(len); ++i) {
      const Path& p = alg.path(PathRef{len, i});
      PathRef head{1, p.arrows.front()};
      Path rest;
      rest.source = alg.quiver().vertex_index(alg.quiver().arrows[p.arrows.front()].t);
      rest.target = p.target;
      rest.arrows.assign(p.arrows.begin() + 1, p.arrows.end());
      PathRef rest_ref = alg.ref_of(rest);
      // g.(a w) = (g.a)(g.w), x.(a w) = a (x.w) + (x.a)(g.w)
      g_table_[len].push_back(
          alg.multiply(g_table_[1][head.idx], g_table_[len - 1][rest_ref.idx]));
      ginv_table_[len].push_back(
          alg.multiply(ginv_table_[1][head.idx], ginv_table_[len - 1][rest_ref.idx]));
      x_table_[len].push_back(
          alg.add(alg.multiply(alg.basis_vector(head), x_table_[len - 1][rest_ref.idx]),
                  alg.multiply(x_table_[1][head.idx], g_table_[len - 1][rest_ref.idx])));
    }
  }
}

namespace {

PathVector apply_table(const TruncatedPathAlgebra& alg,
                       const std::vector<std::vector<PathVector>>& table, const PathVector& v) {
  PathVector out;
  for (const auto& [r, c] : v.terms) out = alg.add(out, alg.scale(c, table[r.len][r.idx]));
  return out;
}

}  // namespace

PathVector UqbAction::act_g(const PathVector& v) const { return apply_table(*alg_, g_table_, v); }
PathVector UqbAction::act_g_inv(const PathVector& v) const {
  return apply_table(*alg_, ginv_table_, v);
}
PathVector UqbAction::act_x(const PathVector& v) const { return apply_table(*alg_, x_table_, v); }

UqbAction build_uqb_vertex_action(const UqbVertexData& data, const QContext& ctx,
                                  std::vector<int> vertex_ids) {
  Quiver q;
  q.vertices = std::move(vertex_ids);
  auto alg = std::make_shared<TruncatedPathAlgebra>(q, 0, ctx.field());
  UqbArrowData arrow;
  arrow.g1 = Matrix(0, 0, ctx.field());
  arrow.sigma = GradedLinearMap{1, 1, Matrix(0, 0, ctx.field())};
  return build_uqb_action(data, arrow, std::move(alg), ctx);
}

UqbAction build_uqb_action(const UqbVertexData& vertex, const UqbArrowData& arrow,
                           std::shared_ptr<const TruncatedPathAlgebra> alg, const QContext& ctx) {
  const Quiver& q = alg->quiver();
  const std::size_t m0 = q.vertices.size(), m1 = q.arrows.size();
  validate_perm(vertex.perm, m0);
  check(vertex.gamma.size() == m0, Errc::ConfigError, "gamma size mismatch");
  const FieldScalar qinv = ctx.q_pow(-1);
  for (std::size_t i = 0; i < m0; ++i) {
    if (vertex.perm[i] == i && !vertex.gamma[i].is_zero())
      fail(Errc::GammaConstraintViolated,
           "gamma must vanish at the fixed vertex " + std::to_string(q.vertices[i]));
    if (vertex.gamma[vertex.perm[i]] != qinv * vertex.gamma[i])
      fail(Errc::GammaConstraintViolated,
           "gamma_{g.i} != q^{-1} gamma_i at vertex " + std::to_string(q.vertices[i]));
  }
  check(arrow.g1.rows() == m1 && arrow.g1.cols() == m1, Errc::ConfigError, "g1 shape mismatch");
  check(arrow.sigma.m.rows() == m1 && arrow.sigma.m.cols() == m1 &&
            arrow.sigma.from_degree == 1 && arrow.sigma.to_degree == 1,
        Errc::ConfigError, "sigma shape mismatch");
  check_block_support(arrow.g1, *alg, vertex.perm, vertex.perm, Errc::NotBimoduleCompatible,
                      "g on arrows");
  // (sigma2): sigma(a) = e_{sa} sigma(a) e_{g.ta}
  std::vector<std::size_t> id(m0);
  for (std::size_t i = 0; i < m0; ++i) id[i] = i;
  check_block_support(arrow.sigma.m, *alg, id, vertex.perm, Errc::SigmaConstraintViolated,
                      "(sigma2)");
  // (sigma3): sigma(g.a) = q^{-1} g.sigma(a)
  if (!(arrow.sigma.m * arrow.g1 == (arrow.g1 * arrow.sigma.m).scaled(qinv)))
    fail(Errc::SigmaConstraintViolated, "(sigma3): sigma(g.a) != q^{-1} g.sigma(a)");

  Matrix g0 = perm_matrix(vertex.perm, ctx.field());
  Matrix x0(m0 + m1, m0, ctx.field());
  for (std::size_t i = 0; i < m0; ++i) {
    x0.at(i, i) += vertex.gamma[i];
    x0.at(vertex.perm[i], i) -= vertex.gamma[i] * qinv;
  }
  Matrix x1(m0 + m1, m1, ctx.field());
  for (std::size_t a = 0; a < m1; ++a) {
    std::size_t sa = q.vertex_index(q.arrows[a].s), ta = q.vertex_index(q.arrows[a].t);
    // x.a = gamma_{ta} a - gamma_{sa} q^{-1} (g.a) + sigma(a)
    x1.at(m0 + a, a) += vertex.gamma[ta];
    for (std::size_t b = 0; b < m1; ++b) {
      x1.at(m0 + b, a) -= vertex.gamma[sa] * qinv * arrow.g1.at(b, a);
      x1.at(m0 + b, a) += arrow.sigma.m.at(b, a);
    }
  }
  return UqbAction::from_matrices(std::move(alg), ctx, std::move(g0), arrow.g1, std::move(x0),
                                  std::move(x1));
}

namespace {

struct CheckJob {
  int rank;
  PathRef p;
  std::optional<PathRef> r;
};

// Deterministic parallel verification driver: runs `run` over all jobs and
// merges the failures in job order (lexicographically first witness first).
std::vector<VerifyFailure> run_jobs(const std::vector<CheckJob>& jobs, unsigned threads,
                                    const std::function<void(const CheckJob&,
                                                             std::vector<VerifyFailure>&)>& run) {
  threads = std::max(1u, threads);
  if (threads == 1) {
    std::vector<VerifyFailure> fails;
    for (const auto& j : jobs) run(j, fails);
    return fails;
  }
  std::vector<std::vector<VerifyFailure>> partial(threads);
  std::vector<std::thread> pool;
  std::size_t chunk = (jobs.size() + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      std::size_t lo = t * chunk, hi = std::min(jobs.size(), lo + chunk);
      for (std::size_t i = lo; i < hi; ++i) run(jobs[i], partial[t]);
    });
  }
  for (auto& th : pool) th.join();
  std::vector<VerifyFailure> fails;
  for (auto& part : partial) fails.insert(fails.end(), part.begin(), part.end());
  return fails;
}

std::vector<CheckJob> basis_jobs(const TruncatedPathAlgebra& alg, int rank) {
  std::vector<CheckJob> jobs;
  for (unsigned len = 0; len <= alg.bound(); ++len)
    for (std::size_t i = 0; i < alg.dim(len); ++i)
      jobs.push_back({rank, PathRef{len, i}, std::nullopt});
  return jobs;
}

std::vector<CheckJob> pair_jobs(const TruncatedPathAlgebra& alg, int rank) {
  std::vector<CheckJob> jobs;
  for (unsigned lp = 0; lp <= alg.bound(); ++lp)
    for (unsigned lr = 0; lp + lr <= alg.bound(); ++lr)
      for (std::size_t i = 0; i < alg.dim(lp); ++i)
        for (std::size_t j = 0; j < alg.dim(lr); ++j)
          jobs.push_back({rank, PathRef{lp, i}, PathRef{lr, j}});
  return jobs;
}

void sort_failures(std::vector<VerifyFailure>& fails,
                   const std::vector<std::string>& check_order) {
  auto rank_of = [&](const std::string& c) {
    return std::find(check_order.begin(), check_order.end(), c) - check_order.begin();
  };
  std::stable_sort(fails.begin(), fails.end(), [&](const VerifyFailure& a, const VerifyFailure& b) {
    auto ka = std::tuple(rank_of(a.check), a.p.value_or(PathRef{}), a.r.value_or(PathRef{}));
    auto kb = std::tuple(rank_of(b.check), b.p.value_or(PathRef{}), b.r.value_or(PathRef{}));
    return ka < kb;
  });
}

}  // namespace

VerifyReport verify_hopf_action(const UqbAction& action, unsigned threads) {
  const TruncatedPathAlgebra& alg = action.algebra();
  const QContext& ctx = action.ctx();
  VerifyReport rep;

  // (4) unit conditions: g.1 = 1, x.1 = 0
  PathVector one = alg.identity();
  if (!(action.act_g(one) == one))
    rep.failures.push_back({"unit", std::nullopt, std::nullopt, "g.1 != 1"});
  if (!action.act_x(one).is_zero())
    rep.failures.push_back({"unit", std::nullopt, std::nullopt, "x.1 != 0"});

  // (1) invertibility holds by construction (the tables need g^{-1}); rank is
  // re-confirmed cheaply for the report's sake.
  if (action.g0().rank() != alg.dim(0) || action.g1().rank() != alg.dim(1))
    rep.failures.push_back({"g_invertible", std::nullopt, std::nullopt, "g is singular"});

  auto jobs_pairs = pair_jobs(alg, 0);
  auto jobs_basis = basis_jobs(alg, 1);
  std::vector<CheckJob> jobs = jobs_pairs;
  jobs.insert(jobs.end(), jobs_basis.begin(), jobs_basis.end());

  auto fails = run_jobs(jobs, threads, [&](const CheckJob& job, std::vector<VerifyFailure>& out) {
    try {
    if (job.r) {
      PathVector p = alg.basis_vector(job.p), r = alg.basis_vector(*job.r);
      PathVector pr = alg.multiply(p, r);
      // (1) g is an algebra map
      PathVector lhs = action.act_g(pr);
      PathVector rhs = alg.multiply(action.act_g(p), action.act_g(r));
      if (!(lhs == rhs))
        out.push_back({"g_algebra_map", job.p, job.r,
                       "g.(pq) = " + alg.to_string(lhs) + " vs (g.p)(g.q) = " + alg.to_string(rhs)});
      // (2) skew-Leibniz for x
      PathVector xl = action.act_x(pr);
      PathVector xr = alg.add(alg.multiply(p, action.act_x(r)),
                              alg.multiply(action.act_x(p), action.act_g(r)));
      if (!(xl == xr))
        out.push_back({"x_leibniz", job.p, job.r,
                       "x.(pq) = " + alg.to_string(xl) + " vs p(x.q)+(x.p)(g.q) = " +
                           alg.to_string(xr)});
    } else {
      // (3) relation compatibility g.(x.v) = q x.(g.v)
      PathVector v = alg.basis_vector(job.p);
      PathVector lhs = action.act_g(action.act_x(v));
      PathVector rhs = alg.scale(ctx.q(), action.act_x(action.act_g(v)));
      if (!(lhs == rhs))
        out.push_back({"gx_relation", job.p, std::nullopt,
                       "g.(x.v) = " + alg.to_string(lhs) + " vs q x.(g.v) = " + alg.to_string(rhs)});
    }
    } catch (const Error& e) {
      // a filtered action never overflows the bound; treat it as a failure
      if (e.code() != Errc::TruncationOverflow) throw;
      out.push_back({job.r ? "x_leibniz" : "gx_relation", job.p, job.r,
                     "product escapes the truncation bound (the action is not filtered)"});
    }
  });
  rep.failures.insert(rep.failures.end(), fails.begin(), fails.end());
  sort_failures(rep.failures,
                {"unit", "g_invertible", "g_algebra_map", "gx_relation", "x_leibniz"});
  rep.pass = rep.failures.empty();

  // Non-root-of-unity rigidity (only meaningful for verified actions):
  // gamma == 0 and sigma nilpotent.
  if (rep.pass && !ctx.q_is_root_of_unity()) {
    if (!action.x0().is_zero())
      rep.failures.push_back(
          {"rigidity_gamma", std::nullopt, std::nullopt, "gamma != 0 over a non-root q"});
    const std::size_t m0 = alg.dim(0), m1 = alg.dim(1);
    Matrix sigma(m1, m1, ctx.field());
    for (std::size_t a = 0; a < m1; ++a)
      for (std::size_t b = 0; b < m1; ++b) sigma.at(b, a) = action.x1().at(m0 + b, a);
    if (m1 > 0 && !sigma.pow(static_cast<unsigned>(m1)).is_zero())
      rep.failures.push_back(
          {"rigidity_sigma", std::nullopt, std::nullopt, "sigma is not nilpotent"});
    rep.pass = rep.failures.empty();
  }
  return rep;
}

std::pair<UqbVertexData, UqbArrowData> extract_uqb_data(const UqbAction& action) {
  const TruncatedPathAlgebra& alg = action.algebra();
  const Quiver& q = alg.quiver();
  const QContext& ctx = action.ctx();
  const std::size_t m0 = alg.dim(0), m1 = alg.dim(1);

  UqbVertexData vertex;
  vertex.perm = perm_from_matrix(action.g0());
  vertex.gamma.assign(m0, ctx.zero());
  for (std::size_t i = 0; i < m0; ++i) vertex.gamma[i] = action.x0().at(i, i);

  // x must preserve the grading on arrows for the parametrized form to exist
  for (std::size_t a = 0; a < m1; ++a)
    for (std::size_t i = 0; i < m0; ++i)
      check(action.x1().at(i, a).is_zero(), Errc::NotFiltered,
            "x maps arrow " + std::to_string(q.arrows[a].id) + " into kQ_0");

  UqbArrowData arrow;
  arrow.g1 = action.g1();
  arrow.sigma = GradedLinearMap{1, 1, Matrix(m1, m1, ctx.field())};
  for (std::size_t a = 0; a < m1; ++a) {
    std::size_t sa = q.vertex_index(q.arrows[a].s), ta = q.vertex_index(q.arrows[a].t);
    PathVector av = alg.arrow(a);
    PathVector xa = action.act_x(av);
    // sigma(a) = e_{sa}(x.a) - a (x.e_{ta})
    PathVector sig = alg.add(alg.multiply(alg.vertex(sa), xa),
                             alg.scale(-ctx.one(), alg.multiply(av, action.act_x(alg.vertex(ta)))));
    // cross-formula: sigma(a) = (x.a)(g.e_{ta}) - (x.e_{sa})(g.a)
    PathVector sig2 = alg.add(
        alg.multiply(xa, action.act_g(alg.vertex(ta))),
        alg.scale(-ctx.one(), alg.multiply(action.act_x(alg.vertex(sa)), action.act_g(av))));
    check(sig == sig2, Errc::Internal,
          "the two sigma formulas disagree; action is not a verified Hopf action");
    auto coords = alg.coords(sig, 1);
    for (std::size_t b = 0; b < m1; ++b) arrow.sigma.m.at(b, a) = coords[b];
  }
  return {std::move(vertex), std::move(arrow)};
}

PathVector x_power_action(const UqbAction& action, unsigned k, const PathVector& v) {
  PathVector out = v;
  for (unsigned i = 0; i < k; ++i) out = action.act_x(out);
  return out;
}

FactorizationReport check_taft_vertex_factorization(const UqbVertexData& data, unsigned r,
                                                    unsigned n, const QContext& ctx) {
  check(ctx.order_of_q() == std::optional<unsigned>(r), Errc::WrongOrderOfQ,
        "q must be a primitive r-th root of unity");
  check(r != 0 && n % r == 0, Errc::WrongOrderOfQ, "r must divide n");
  FactorizationReport rep;
  rep.factors = true;
  auto orbit = orbit_sizes_by_vertex(data.perm);
  for (std::size_t i = 0; i < data.perm.size(); ++i) {
    bool ok = (n % orbit[i] == 0) && (orbit[i] == r || data.gamma[i].is_zero());
    rep.conditions.emplace_back("vertex " + std::to_string(i) + ": #(G.i) = " +
                                    std::to_string(orbit[i]) + ", gamma " +
                                    (data.gamma[i].is_zero() ? "zero" : "nonzero"),
                                ok);
    rep.factors = rep.factors && ok;
  }
  rep.oracle = rep.factors;  // vertex-level criterion is itself the closed form
  return rep;
}

FactorizationReport check_taft_factorization(const UqbAction& action, unsigned r, unsigned n) {
  const TruncatedPathAlgebra& alg = action.algebra();
  const QContext& ctx = action.ctx();
  check(ctx.order_of_q() == std::optional<unsigned>(r), Errc::WrongOrderOfQ,
        "q must be a primitive r-th root of unity");
  check(r != 0 && n % r == 0, Errc::WrongOrderOfQ, "r must divide n");
  auto [vertex, arrow] = extract_uqb_data(action);
  const Quiver& q = alg.quiver();
  const std::size_t m1 = alg.dim(1);

  FactorizationReport rep;
  // (1) the vertex action factors
  bool cond1 = check_taft_vertex_factorization(vertex, r, n, ctx).factors;
  rep.conditions.emplace_back("(1) vertex action factors through T(r,n)", cond1);

  // (2) gamma_{sa}^r g^r.a - gamma_{ta}^r a = sigma^r(a) for all arrows
  bool cond2 = true;
  Matrix gr = action.g1().pow(r);
  Matrix sigr = arrow.sigma.m.pow(r);
  for (std::size_t a = 0; a < m1; ++a) {
    std::size_t sa = q.vertex_index(q.arrows[a].s), ta = q.vertex_index(q.arrows[a].t);
    FieldScalar gs = vertex.gamma[sa].pow(static_cast<long>(r));
    FieldScalar gt = vertex.gamma[ta].pow(static_cast<long>(r));
    for (std::size_t b = 0; b < m1; ++b) {
      FieldScalar lhs = gs * gr.at(b, a) - (b == a ? gt : ctx.zero());
      if (lhs != sigr.at(b, a)) {
        cond2 = false;
        break;
      }
    }
    if (!cond2) break;
  }
  rep.conditions.emplace_back("(2) gamma_{sa}^r g^r.a - gamma_{ta}^r a = sigma^r(a)", cond2);

  // (3) g^n acts as the identity
  bool cond3 = action.g0().pow(n).is_identity() && (m1 == 0 || action.g1().pow(n).is_identity());
  rep.conditions.emplace_back("(3) g^n = id", cond3);

  rep.factors = cond1 && cond2 && cond3;

  // independent oracle: g^n = id and x^r.v = 0 on every basis path
  bool oracle = true;
  for (unsigned len = 0; len <= alg.bound() && oracle; ++len) {
    for (std::size_t i = 0; i < alg.dim(len) && oracle; ++i) {
      PathVector v = alg.basis_vector(PathRef{len, i});
      PathVector gnv = v;
      for (unsigned s = 0; s < n; ++s) gnv = action.act_g(gnv);
      if (!(gnv == v)) oracle = false;
      if (!x_power_action(action, r, v).is_zero()) oracle = false;
    }
  }
  rep.oracle = oracle;
  if (rep.factors != rep.oracle)
    fail(Errc::OracleMismatch, "T(r,n) criterion and direct oracle disagree");
  return rep;
}

UqslAction UqslAction::from_matrices(std::shared_ptr<const TruncatedPathAlgebra> alg,
                                     const QContext& ctx, Matrix k0, Matrix k1, Matrix e0,
                                     Matrix e1, Matrix f0, Matrix f1) {
  UqslAction act(std::move(alg), ctx);
  const std::size_t m0 = act.alg_->dim(0), m1 = act.alg_->dim(1);
  check(k0.rows() == m0 && e0.rows() == m0 + m1 && f0.rows() == m0 + m1, Errc::ConfigError,
        "vertex matrix shape mismatch");
  check(k1.rows() == m1 && e1.rows() == m0 + m1 && f1.rows() == m0 + m1, Errc::ConfigError,
        "arrow matrix shape mismatch");
  act.k0_ = std::move(k0);
  act.k1_ = std::move(k1);
  act.e0_ = std::move(e0);
  act.e1_ = std::move(e1);
  act.f0_ = std::move(f0);
  act.f1_ = std::move(f1);
  act.build_tables();
  return act;
}

void UqslAction::build_tables() {
  const TruncatedPathAlgebra& alg = *alg_;
  const std::size_t m0 = alg.dim(0), m1 = alg.dim(1);
  Matrix k0inv = k0_.inverse(), k1inv = k1_.inverse();

  auto column0 = [&](const Matrix& m, std::size_t j) {
    std::vector<FieldScalar> c(m0, field_zero(alg.field()));
    for (std::size_t i = 0; i < m0; ++i) c[i] = m.at(i, j);
    return alg.from_coords(0, c);
  };
  auto column1 = [&](const Matrix& m, std::size_t j) {
    // full-height column: vertex block on top, arrow block below
    PathVector v;
    for (std::size_t i = 0; i < m0; ++i)
      if (!m.at(i, j).is_zero()) v.terms[PathRef{0, i}] = m.at(i, j);
    for (std::size_t i = 0; i < m1; ++i)
      if (!m.at(m0 + i, j).is_zero()) v.terms[PathRef{1, i}] = m.at(m0 + i, j);
    return v;
  };
  auto column_arrows = [&](const Matrix& m, std::size_t j) {
    // degree-preserving column of an m1 x m1 matrix
    PathVector v;
    for (std::size_t i = 0; i < m1; ++i)
      if (!m.at(i, j).is_zero()) v.terms[PathRef{1, i}] = m.at(i, j);
    return v;
  };

  k_table_.assign(alg.bound() + 1, {});
  kinv_table_.assign(alg.bound() + 1, {});
  e_table_.assign(alg.bound() + 1, {});
  f_table_.assign(alg.bound() + 1, {});
  for (std::size_t i = 0; i < m0; ++i) {
    k_table_[0].push_back(column0(k0_, i));
    kinv_table_[0].push_back(column0(k0inv, i));
    e_table_[0].push_back(column1(e0_, i));
    f_table_[0].push_back(column1(f0_, i));
  }
  if (alg.bound() >= 1) {
    for (std::size_t i = 0; i < m1; ++i) {
      k_table_[1].push_back(column_arrows(k1_, i));
      kinv_table_[1].push_back(column_arrows(k1inv, i));
      e_table_[1].push_back(column1(e1_, i));
      f_table_[1].push_back(column1(f1_, i));
    }
  }
  for (unsigned len = 2; len <= alg.bound(); ++len) {
    for (std::size_t i = 0; i < alg.dim(len); ++i) {
      const Path& p = alg.path(PathRef{len, i});
      PathRef head{1, p.arrows.front()};
      Path rest;
      rest.source = alg.quiver().vertex_index(alg.quiver().arrows[p.arrows.front()].t);
      rest.target = p.target;
      rest.arrows.assign(p.arrows.begin() + 1, p.arrows.end());
      PathRef rest_ref = alg.ref_of(rest);
      // K.(a w) = (K.a)(K.w); E.(a w) = a (E.w) + (E.a)(K.w);
      // F.(a w) = (K^{-1}.a)(F.w) + (F.a) w
      k_table_[len].push_back(
          alg.multiply(k_table_[1][head.idx], k_table_[len - 1][rest_ref.idx]));
      kinv_table_[len].push_back(
          alg.multiply(kinv_table_[1][head.idx], kinv_table_[len - 1][rest_ref.idx]));
      e_table_[len].push_back(
          alg.add(alg.multiply(alg.basis_vector(head), e_table_[len - 1][rest_ref.idx]),
                  alg.multiply(e_table_[1][head.idx], k_table_[len - 1][rest_ref.idx])));
      f_table_[len].push_back(
          alg.add(alg.multiply(kinv_table_[1][head.idx], f_table_[len - 1][rest_ref.idx]),
                  alg.multiply(f_table_[1][head.idx],
                               alg.basis_vector(PathRef{len - 1, rest_ref.idx}))));
    }
  }
}

PathVector UqslAction::act_k(const PathVector& v) const { return apply_table(*alg_, k_table_, v); }
PathVector UqslAction::act_k_inv(const PathVector& v) const {
  return apply_table(*alg_, kinv_table_, v);
}
PathVector UqslAction::act_e(const PathVector& v) const { return apply_table(*alg_, e_table_, v); }
PathVector UqslAction::act_f(const PathVector& v) const { return apply_table(*alg_, f_table_, v); }

UqslAction build_uqsl_action(const UqslActionData& data,
                             std::shared_ptr<const TruncatedPathAlgebra> alg,
                             const QContext& ctx) {
  const Quiver& q = alg->quiver();
  const std::size_t m0 = q.vertices.size(), m1 = q.arrows.size();
  validate_perm(data.perm, m0);
  check(data.gammaE.size() == m0 && data.gammaF.size() == m0, Errc::ConfigError,
        "gamma size mismatch");
  const FieldScalar q2 = ctx.q_pow(2), qm2 = ctx.q_pow(-2);
  for (std::size_t i = 0; i < m0; ++i) {
    if (data.gammaE[data.perm[i]] != qm2 * data.gammaE[i] ||
        data.gammaF[data.perm[i]] != q2 * data.gammaF[i])
      fail(Errc::GammaConstraintViolated,
           "gamma^E/gamma^F propagation fails at vertex " + std::to_string(q.vertices[i]));
  }
  // gamma^E_i gamma^F_i = -q/(1-q^2)^2 whenever K^2.i != i
  FieldScalar one_minus_q2 = ctx.one() - q2;
  FieldScalar required = -(ctx.q() / (one_minus_q2 * one_minus_q2));
  for (std::size_t i = 0; i < m0; ++i) {
    if (data.perm[data.perm[i]] != i && data.gammaE[i] * data.gammaF[i] != required)
      fail(Errc::GammaEFConditionViolated,
           "gamma^E gamma^F != -q/(1-q^2)^2 at vertex " + std::to_string(q.vertices[i]) +
               " with K^2.i != i");
  }
  check(data.k1.rows() == m1 && data.k1.cols() == m1, Errc::ConfigError, "K1 shape mismatch");
  check(data.sigmaE.m.rows() == m1 && data.sigmaE.m.cols() == m1 && data.sigmaF.m.rows() == m1 &&
            data.sigmaF.m.cols() == m1,
        Errc::ConfigError, "sigma shape mismatch");
  check_block_support(data.k1, *alg, data.perm, data.perm, Errc::NotBimoduleCompatible,
                      "K on arrows");
  std::vector<std::size_t> id(m0);
  for (std::size_t i = 0; i < m0; ++i) id[i] = i;
  check_block_support(data.sigmaE.m, *alg, id, data.perm, Errc::SigmaConstraintViolated,
                      "(sigma2) for sigma^E");
  check_block_support(data.sigmaF.m, *alg, id, data.perm, Errc::SigmaConstraintViolated,
                      "(sigma2) for sigma^F");
  if (!(data.sigmaE.m * data.k1 == (data.k1 * data.sigmaE.m).scaled(qm2)))
    fail(Errc::SigmaConstraintViolated, "(sigma3): sigma^E(K.a) != q^{-2} K.sigma^E(a)");
  if (!(data.sigmaF.m * data.k1 == (data.k1 * data.sigmaF.m).scaled(q2)))
    fail(Errc::SigmaConstraintViolated, "(sigma3): sigma^F(K.a) != q^{2} K.sigma^F(a)");

  // (sigma4)
  if (m1 > 0) {
    Matrix k2 = data.k1 * data.k1;
    Matrix comm = (data.sigmaE.m * data.sigmaF.m).scaled(q2) - data.sigmaF.m * data.sigmaE.m;
    FieldScalar brk = (ctx.q() - ctx.q_pow(-1)).inv();
    for (std::size_t a = 0; a < m1; ++a) {
      std::size_t sa = q.vertex_index(q.arrows[a].s), ta = q.vertex_index(q.arrows[a].t);
      FieldScalar cs = data.gammaE[sa] * data.gammaF[sa] * one_minus_q2;
      FieldScalar ct = data.gammaE[ta] * data.gammaF[ta] * one_minus_q2;
      for (std::size_t b = 0; b < m1; ++b) {
        FieldScalar lhs = cs * k2.at(b, a) + comm.at(b, a) - (b == a ? ct : ctx.zero());
        FieldScalar rhs = brk * (k2.at(b, a) - (b == a ? ctx.one() : ctx.zero()));
        if (lhs != rhs)
          fail(Errc::SigmaFourViolated,
               "(sigma4) fails at arrow " + std::to_string(q.arrows[a].id));
      }
    }
  }

  Matrix k0 = perm_matrix(data.perm, ctx.field());
  std::vector<std::size_t> inv_perm(m0);
  for (std::size_t i = 0; i < m0; ++i) inv_perm[data.perm[i]] = i;
  Matrix e0(m0 + m1, m0, ctx.field()), f0(m0 + m1, m0, ctx.field());
  for (std::size_t i = 0; i < m0; ++i) {
    // E.e_i = gammaE_i e_i - gammaE_i q^{-2} e_{K.i}
    e0.at(i, i) += data.gammaE[i];
    e0.at(data.perm[i], i) -= data.gammaE[i] * qm2;
    // F.e_i = gammaF_i e_{K^{-1}.i} - gammaF_i q^2 e_i
    f0.at(inv_perm[i], i) += data.gammaF[i];
    f0.at(i, i) -= data.gammaF[i] * q2;
  }
  Matrix k1inv = m1 ? data.k1.inverse() : Matrix(0, 0, ctx.field());
  Matrix e1(m0 + m1, m1, ctx.field()), f1(m0 + m1, m1, ctx.field());
  for (std::size_t a = 0; a < m1; ++a) {
    std::size_t sa = q.vertex_index(q.arrows[a].s), ta = q.vertex_index(q.arrows[a].t);
    // E.a = gammaE_{ta} a - gammaE_{sa} q^{-2} (K.a) + sigmaE(a)
    e1.at(m0 + a, a) += data.gammaE[ta];
    for (std::size_t b = 0; b < m1; ++b) {
      e1.at(m0 + b, a) -= data.gammaE[sa] * qm2 * data.k1.at(b, a);
      e1.at(m0 + b, a) += data.sigmaE.m.at(b, a);
    }
    // F.a = gammaF_{ta} (K^{-1}.a) - gammaF_{sa} q^2 a + K^{-1}.sigmaF(a)
    f1.at(m0 + a, a) -= data.gammaF[sa] * q2;
    Matrix kinv_sigF = k1inv * data.sigmaF.m;
    for (std::size_t b = 0; b < m1; ++b) {
      f1.at(m0 + b, a) += data.gammaF[ta] * k1inv.at(b, a);
      f1.at(m0 + b, a) += kinv_sigF.at(b, a);
    }
  }
  return UqslAction::from_matrices(std::move(alg), ctx, std::move(k0), data.k1, std::move(e0),
                                   std::move(e1), std::move(f0), std::move(f1));
}

VerifyReport verify_uqsl_action(const UqslAction& action, unsigned threads) {
  const TruncatedPathAlgebra& alg = action.algebra();
  const QContext& ctx = action.ctx();
  VerifyReport rep;

  PathVector one = alg.identity();
  if (!(action.act_k(one) == one))
    rep.failures.push_back({"unit", std::nullopt, std::nullopt, "K.1 != 1"});
  if (!action.act_e(one).is_zero())
    rep.failures.push_back({"unit", std::nullopt, std::nullopt, "E.1 != 0"});
  if (!action.act_f(one).is_zero())
    rep.failures.push_back({"unit", std::nullopt, std::nullopt, "F.1 != 0"});

  const FieldScalar q2 = ctx.q_pow(2), qm2 = ctx.q_pow(-2);
  const FieldScalar brk = (ctx.q() - ctx.q_pow(-1)).inv();

  auto jobs_pairs = pair_jobs(alg, 0);
  auto jobs_basis = basis_jobs(alg, 1);
  std::vector<CheckJob> jobs = jobs_pairs;
  jobs.insert(jobs.end(), jobs_basis.begin(), jobs_basis.end());

  auto fails = run_jobs(jobs, threads, [&](const CheckJob& job, std::vector<VerifyFailure>& out) {
    try {
    if (job.r) {
      PathVector p = alg.basis_vector(job.p), r = alg.basis_vector(*job.r);
      PathVector pr = alg.multiply(p, r);
      PathVector lhs = action.act_k(pr);
      PathVector rhs = alg.multiply(action.act_k(p), action.act_k(r));
      if (!(lhs == rhs)) out.push_back({"k_algebra_map", job.p, job.r, alg.to_string(lhs)});
      PathVector el = action.act_e(pr);
      PathVector er = alg.add(alg.multiply(p, action.act_e(r)),
                              alg.multiply(action.act_e(p), action.act_k(r)));
      if (!(el == er)) out.push_back({"e_leibniz", job.p, job.r, alg.to_string(el)});
      PathVector fl = action.act_f(pr);
      PathVector fr = alg.add(alg.multiply(action.act_k_inv(p), action.act_f(r)),
                              alg.multiply(action.act_f(p), r));
      if (!(fl == fr)) out.push_back({"f_leibniz", job.p, job.r, alg.to_string(fl)});
    } else {
      PathVector v = alg.basis_vector(job.p);
      // K E = q^2 E K and K F = q^{-2} F K
      if (!(action.act_k(action.act_e(v)) == alg.scale(q2, action.act_e(action.act_k(v)))))
        out.push_back({"ke_relation", job.p, std::nullopt, alg.to_string(v)});
      if (!(action.act_k(action.act_f(v)) == alg.scale(qm2, action.act_f(action.act_k(v)))))
        out.push_back({"kf_relation", job.p, std::nullopt, alg.to_string(v)});
      // [E,F] = (K - K^{-1})/(q - q^{-1})
      PathVector lhs = alg.add(action.act_e(action.act_f(v)),
                               alg.scale(-ctx.one(), action.act_f(action.act_e(v))));
      PathVector rhs = alg.scale(
          brk, alg.add(action.act_k(v), alg.scale(-ctx.one(), action.act_k_inv(v))));
      if (!(lhs == rhs))
        out.push_back({"ef_bracket", job.p, std::nullopt,
                       "[E,F].v = " + alg.to_string(lhs) + " vs " + alg.to_string(rhs)});
    }
    } catch (const Error& e) {
      if (e.code() != Errc::TruncationOverflow) throw;
      out.push_back({job.r ? "e_leibniz" : "ef_bracket", job.p, job.r,
                     "product escapes the truncation bound (the action is not filtered)"});
    }
  });
  rep.failures.insert(rep.failures.end(), fails.begin(), fails.end());

  // vertex identity (EF - FE).e_i = gammaE_i gammaF_i (1-q^2)(e_{K.i} - e_{K^{-1}.i})
  const std::size_t m0 = alg.dim(0);
  auto perm = perm_from_matrix(action.k0());
  std::vector<std::size_t> inv_perm(m0);
  for (std::size_t i = 0; i < m0; ++i) inv_perm[perm[i]] = i;
  for (std::size_t i = 0; i < m0; ++i) {
    FieldScalar gE = action.e0().at(i, i);
    FieldScalar gF = -(qm2 * action.f0().at(i, i));
    PathVector v = alg.vertex(i);
    PathVector lhs = alg.add(action.act_e(action.act_f(v)),
                             alg.scale(-ctx.one(), action.act_f(action.act_e(v))));
    PathVector rhs = alg.scale(gE * gF * (ctx.one() - q2),
                               alg.add(alg.vertex(perm[i]),
                                       alg.scale(-ctx.one(), alg.vertex(inv_perm[i]))));
    if (!(lhs == rhs))
      rep.failures.push_back({"vertex_bracket", PathRef{0, i}, std::nullopt, alg.to_string(lhs)});
  }

  sort_failures(rep.failures, {"unit", "k_algebra_map", "ke_relation", "kf_relation", "ef_bracket",
                               "e_leibniz", "f_leibniz", "vertex_bracket"});
  rep.pass = rep.failures.empty();

  // rigidity over a non-root q: gammas vanish, K^2 = id on vertices, sigmas
  // nilpotent, and q^2 sE sF - sF sE = (K^2.a - a)/(q - q^{-1})
  if (rep.pass && !ctx.q_is_root_of_unity()) {
    for (std::size_t i = 0; i < m0 && rep.pass; ++i)
      if (!action.e0().at(i, i).is_zero() || !action.f0().at(i, i).is_zero() ||
          perm[perm[i]] != i) {
        rep.failures.push_back({"rigidity_gamma", PathRef{0, i}, std::nullopt,
                                "gamma^E/gamma^F nonzero or K^2.i != i over non-root q"});
        rep.pass = false;
      }
  }
  return rep;
}

FactorizationReport check_uqsl_factorization(const UqslAction& action, unsigned n) {
  const TruncatedPathAlgebra& alg = action.algebra();
  const QContext& ctx = action.ctx();
  check(n > 2 && n % 2 == 1, Errc::WrongOrderOfQ, "u_q(sl2) needs n odd, n > 2");
  check(ctx.order_of_q() == std::optional<unsigned>(n), Errc::WrongOrderOfQ,
        "q must be a primitive n-th root of unity");
  const Quiver& q = alg.quiver();
  const std::size_t m0 = alg.dim(0), m1 = alg.dim(1);
  const FieldScalar q2 = ctx.q_pow(2), qm2 = ctx.q_pow(-2);

  auto perm = perm_from_matrix(action.k0());
  std::vector<FieldScalar> gammaE(m0, ctx.zero()), gammaF(m0, ctx.zero());
  for (std::size_t i = 0; i < m0; ++i) {
    gammaE[i] = action.e0().at(i, i);
    gammaF[i] = -(qm2 * action.f0().at(i, i));
  }
  // recover sigma^E(a) = E.a - gammaE_{ta} a + gammaE_{sa} q^{-2} K.a and
  // sigma^F(a) = K.(F.a) - gammaF_{ta} a + gammaF_{sa} q^2 K.a
  Matrix sigE(m1, m1, ctx.field()), sigF(m1, m1, ctx.field());
  for (std::size_t a = 0; a < m1; ++a) {
    std::size_t sa = q.vertex_index(q.arrows[a].s), ta = q.vertex_index(q.arrows[a].t);
    PathVector av = alg.arrow(a);
    PathVector se = alg.add(action.act_e(av),
                            alg.add(alg.scale(-gammaE[ta], av),
                                    alg.scale(gammaE[sa] * qm2, action.act_k(av))));
    PathVector sf = alg.add(action.act_k(action.act_f(av)),
                            alg.add(alg.scale(-gammaF[ta], av),
                                    alg.scale(gammaF[sa] * q2, action.act_k(av))));
    auto ce = alg.coords(se, 1);
    auto cf = alg.coords(sf, 1);
    for (std::size_t b = 0; b < m1; ++b) {
      sigE.at(b, a) = ce[b];
      sigF.at(b, a) = cf[b];
    }
  }

  FactorizationReport rep;
  bool cond1 = action.k0().pow(n).is_identity() && (m1 == 0 || action.k1().pow(n).is_identity());
  rep.conditions.emplace_back("(1) K^n = id", cond1);

  auto orbit = orbit_sizes_by_vertex(perm);
  bool cond2 = std::all_of(orbit.begin(), orbit.end(),
                           [&](std::size_t s) { return s == 1 || s == n; });
  rep.conditions.emplace_back("(2) every G-orbit on Q_0 has 1 or n vertices", cond2);

  bool cond3 = true;
  Matrix sigEn = sigE.pow(n), sigFn = sigF.pow(n);
  for (std::size_t a = 0; a < m1 && cond3; ++a) {
    std::size_t sa = q.vertex_index(q.arrows[a].s), ta = q.vertex_index(q.arrows[a].t);
    for (auto [gamma, sign] : {std::pair(&gammaE, &sigEn), std::pair(&gammaF, &sigFn)}) {
      FieldScalar coeff = (*gamma)[sa].pow(static_cast<long>(n)) -
                          (*gamma)[ta].pow(static_cast<long>(n));
      for (std::size_t b = 0; b < m1; ++b) {
        FieldScalar lhs = b == a ? coeff : ctx.zero();
        if (lhs != sign->at(b, a)) {
          cond3 = false;
          break;
        }
      }
      if (!cond3) break;
    }
  }
  rep.conditions.emplace_back("(3) ((gamma_sa)^n - (gamma_ta)^n) a = sigma^n(a) for E and F",
                              cond3);
  rep.factors = cond1 && cond2 && cond3;

  bool oracle = true;
  for (unsigned len = 0; len <= alg.bound() && oracle; ++len) {
    for (std::size_t i = 0; i < alg.dim(len) && oracle; ++i) {
      PathVector v = alg.basis_vector(PathRef{len, i});
      PathVector kn = v, en = v, fn = v;
      for (unsigned s = 0; s < n; ++s) {
        kn = action.act_k(kn);
        en = action.act_e(en);
        fn = action.act_f(fn);
      }
      if (!(kn == v) || !en.is_zero() || !fn.is_zero()) oracle = false;
    }
  }
  rep.oracle = oracle;
  if (rep.factors != rep.oracle)
    fail(Errc::OracleMismatch, "u_q(sl2) criterion and direct oracle disagree");
  return rep;
}

}  // namespace qqw
