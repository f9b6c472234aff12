#pragma once

#include <memory>
#include <optional>
#include <string>

#include "qqw/quiverpath.hpp"

namespace qqw {

/// Vertex-level data for a U_q(b)-action: the g-permutation of Q_0 and the
/// gamma scalars, subject to gamma_{g.i} = q^{-1} gamma_i.
struct UqbVertexData {
  std::vector<std::size_t> perm;    // g . i = perm[i], by vertex index
  std::vector<FieldScalar> gamma;   // gamma_i, by vertex index
};

/// Arrow-level data: an invertible g-matrix on kQ_1 whose blocks follow the
/// vertex permutation, and the sigma map subject to (sigma1)-(sigma3).
struct UqbArrowData {
  Matrix g1;                // g on kQ_1, columns indexed by arrows
  GradedLinearMap sigma;    // degree 1 -> 1; sigma(kQ_0) = 0 implicitly
};

/// U_q(sl2) action data per Thm. parametrization: K-permutation, the two
/// gamma families, K on kQ_1 and the sigma^E / sigma^F maps.
struct UqslActionData {
  std::vector<std::size_t> perm;
  std::vector<FieldScalar> gammaE;
  std::vector<FieldScalar> gammaF;
  Matrix k1;
  GradedLinearMap sigmaE;
  GradedLinearMap sigmaF;
};

/// A single verification failure; `witness` renders the offending vectors.
struct VerifyFailure {
  std::string check;
  std::optional<PathRef> p;
  std::optional<PathRef> r;
  std::string witness;
};

struct VerifyReport {
  bool pass = true;
  std::vector<VerifyFailure> failures;

  bool has_check(const std::string& name) const;
  std::string summary() const;
};

/// A filtered U_q(b)-action on a truncated path algebra. Generator action is
/// stored on kQ_0 and kQ_1 and extended to longer paths multiplicatively (g)
/// and by the skew-Leibniz rule x.(pq) = p(x.q) + (x.p)(g.q); tables for all
/// basis paths are precomputed, so actions are immutable and thread-safe.
class UqbAction {
public:
  /// Raw entry point: x0 and x1 have m0+m1 rows (vertex block on top) and
  /// m0 resp. m1 columns, so raw data may break the grading.
  /// errors: SingularMatrix when g is not invertible
  static UqbAction from_matrices(std::shared_ptr<const TruncatedPathAlgebra> alg,
                                 const QContext& ctx, Matrix g0, Matrix g1, Matrix x0, Matrix x1);

  const TruncatedPathAlgebra& algebra() const { return *alg_; }
  std::shared_ptr<const TruncatedPathAlgebra> algebra_ptr() const { return alg_; }
  const QContext& ctx() const { return ctx_; }

  PathVector act_g(const PathVector& v) const;
  PathVector act_g_inv(const PathVector& v) const;
  PathVector act_x(const PathVector& v) const;

  const Matrix& g0() const { return g0_; }
  const Matrix& g1() const { return g1_; }
  const Matrix& x0() const { return x0_; }
  const Matrix& x1() const { return x1_; }  // m0+m1 rows

private:
  UqbAction(std::shared_ptr<const TruncatedPathAlgebra> alg, QContext ctx)
      : alg_(std::move(alg)), ctx_(std::move(ctx)) {}
  void build_tables();
  friend class UqslAction;

  std::shared_ptr<const TruncatedPathAlgebra> alg_;
  QContext ctx_;
  Matrix g0_, g1_, x0_, x1_;
  std::vector<std::vector<PathVector>> g_table_, ginv_table_, x_table_;
};

/// Builds the vertex action of Prop. parametrization on an arrowless algebra:
/// x . e_i = gamma_i e_i - gamma_i q^{-1} e_{g.i}.
/// errors: GammaConstraintViolated
UqbAction build_uqb_vertex_action(const UqbVertexData& data, const QContext& ctx,
                                  std::vector<int> vertex_ids);

/// Full arrow-level construction; validates the data invariants first.
/// errors: GammaConstraintViolated, SigmaConstraintViolated, SingularMatrix
UqbAction build_uqb_action(const UqbVertexData& vertex, const UqbArrowData& arrow,
                           std::shared_ptr<const TruncatedPathAlgebra> alg, const QContext& ctx);

/// Checks, exactly: (1) g invertible and an algebra map on all basis-path
/// products within the bound; (2) the skew-Leibniz identity for x on all such
/// products; (3) g(x.v) = q x(g.v) on all basis vectors; (4) x.1 = 0, g.1 = 1.
/// In rational (non-root-of-unity) mode additionally asserts gamma == 0 and
/// sigma nilpotent once (1)-(4) pass.
VerifyReport verify_hopf_action(const UqbAction& action, unsigned threads = 1);

/// Recovers (vertex, arrow) data from a verified action via
/// sigma(a) = e_{sa}(x.a) - a(x.e_{ta}); cross-checks the alternate formula
/// sigma(a) = (x.a)(g.e_{ta}) - (x.e_{sa})(g.a).
/// errors: NotFiltered when x does not preserve the grading on arrows
std::pair<UqbVertexData, UqbArrowData> extract_uqb_data(const UqbAction& action);

/// x^k . v by k-fold application.
PathVector x_power_action(const UqbAction& action, unsigned k, const PathVector& v);

struct FactorizationReport {
  bool factors = false;
  bool oracle = false;
  std::vector<std::pair<std::string, bool>> conditions;
  std::string detail;
};

/// Orbit/gamma criterion for the vertex action to factor through T(r,n).
/// errors: WrongOrderOfQ
FactorizationReport check_taft_vertex_factorization(const UqbVertexData& data, unsigned r,
                                                    unsigned n, const QContext& ctx);

/// Full T(r,n) criterion plus the independent oracle (g^n = id and
/// x^r . v = 0 on every basis path); the two must agree.
/// errors: WrongOrderOfQ, OracleMismatch
FactorizationReport check_taft_factorization(const UqbAction& action, unsigned r, unsigned n);

/// A filtered U_q(sl2)-action; E extends by Delta(E) = 1 (x) E + E (x) K and
/// F by Delta(F) = K^{-1} (x) F + F (x) 1.
class UqslAction {
public:
  static UqslAction from_matrices(std::shared_ptr<const TruncatedPathAlgebra> alg,
                                  const QContext& ctx, Matrix k0, Matrix k1, Matrix e0, Matrix e1,
                                  Matrix f0, Matrix f1);

  const TruncatedPathAlgebra& algebra() const { return *alg_; }
  std::shared_ptr<const TruncatedPathAlgebra> algebra_ptr() const { return alg_; }
  const QContext& ctx() const { return ctx_; }

  PathVector act_k(const PathVector& v) const;
  PathVector act_k_inv(const PathVector& v) const;
  PathVector act_e(const PathVector& v) const;
  PathVector act_f(const PathVector& v) const;

  const Matrix& k0() const { return k0_; }
  const Matrix& k1() const { return k1_; }
  const Matrix& e0() const { return e0_; }
  const Matrix& e1() const { return e1_; }
  const Matrix& f0() const { return f0_; }
  const Matrix& f1() const { return f1_; }

private:
  UqslAction(std::shared_ptr<const TruncatedPathAlgebra> alg, QContext ctx)
      : alg_(std::move(alg)), ctx_(std::move(ctx)) {}
  void build_tables();

  std::shared_ptr<const TruncatedPathAlgebra> alg_;
  QContext ctx_;
  Matrix k0_, k1_, e0_, e1_, f0_, f1_;
  std::vector<std::vector<PathVector>> k_table_, kinv_table_, e_table_, f_table_;
};

/// errors: GammaConstraintViolated, GammaEFConditionViolated,
/// SigmaConstraintViolated, SigmaFourViolated, SingularMatrix
UqslAction build_uqsl_action(const UqslActionData& data,
                             std::shared_ptr<const TruncatedPathAlgebra> alg, const QContext& ctx);

/// Checks the K/E/F module-algebra axioms, the defining relations on all
/// basis vectors ([E,F] included), and the vertex bracket identity
/// (EF - FE) e_i = gammaE_i gammaF_i (1 - q^2)(e_{K.i} - e_{K^{-1}.i}).
VerifyReport verify_uqsl_action(const UqslAction& action, unsigned threads = 1);

/// u_q(sl2) criterion (K^n = id, orbit sizes, (sigma^.)^n condition), with
/// the independent oracle on E^n, F^n, K^n over every basis path.
/// errors: WrongOrderOfQ, OracleMismatch
FactorizationReport check_uqsl_factorization(const UqslAction& action, unsigned n);

}  // namespace qqw
