#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qqw/hopfaction.hpp"

namespace qqw {

/// Vertex (lambda, k) of the quiver Q(mu, N), with lambda = coset * mu^s kept
/// symbolically: a coset representative value plus the exponent s.
struct GammaVertex {
  FieldScalar coset;
  long s = 0;  // normalized to [0, |mu|) in root-of-unity mode
  long k = 0;  // residue mod d
};

/// Finite-support representation of Gamma(mu, d) (and Gamma' when primed):
/// per vertex a dimension, the a-map A (out of the vertex, contravariantly
/// W_v -> W_{mu lambda, k+1}), the nilpotent loop map B, and for the primed
/// case the c-map C (W_v -> W_{mu^{-1} lambda, k+1}).
struct GammaRep {
  bool primed = false;
  std::vector<GammaVertex> vertices;
  std::vector<unsigned> dims;
  std::vector<Matrix> A;  // A[v]: dims[target] x dims[v]; 0 x dims[v] if target absent
  std::vector<Matrix> B;  // B[v]: dims[v] x dims[v]
  std::vector<Matrix> C;  // primed only

  std::size_t support_size() const { return vertices.size(); }
  unsigned total_dim() const;
};

/// An S_m - S_{m'} bimodule in rep(H), presented by block dimensions (basis
/// ordered lexicographically by (i, j, index)), the matrix of g (or K), the
/// scalars of the fixed vertex actions, and the sigma map(s).
struct BimoduleInC {
  bool sl2 = false;
  unsigned m = 1, mprime = 1;
  std::vector<std::vector<unsigned>> block_dims;  // m x mprime

  Matrix g;  // action of g (borel) or K (sl2) on the bimodule space

  // borel scalars and map
  FieldScalar gamma0, gamma0p;
  Matrix sigma;

  // sl2 scalars and maps
  FieldScalar gammaE0, gammaE0p, gammaF0, gammaF0p;
  Matrix sigmaE, sigmaF;

  std::size_t dim() const;
  std::size_t block_offset(unsigned i, unsigned j) const;
  std::pair<unsigned, unsigned> block_of(std::size_t basis_index) const;
  std::vector<BlockLabel> labels() const;
};

/// Shape of a connected component of Q(mu, N): the infinite strip, or a
/// cycle with p = lcm(|mu|, N) vertices.
struct ComponentShape {
  bool infinite = false;
  unsigned p = 0;
};

/// errors: ZeroInput
ComponentShape component_shape(const FieldScalar& mu, unsigned N);

/// Numerology shared by Phi and Psi for a fixed (q, m, m'): ell, d, mu = q^ell,
/// the tau vertex function and the epsilon correction factor with its
/// canonical (z1, z2) pair.
class BimodContext {
public:
  BimodContext(QContext ctx, unsigned m, unsigned mprime);

  const QContext& ctx() const { return ctx_; }
  unsigned m() const { return m_; }
  unsigned mprime() const { return mprime_; }
  unsigned ell() const { return ell_; }
  unsigned d() const { return d_; }
  const FieldScalar& mu() const { return mu_; }                      // q^ell
  const std::optional<unsigned>& mu_order() const { return e_; }     // |q^ell|
  bool root_mode() const { return e_.has_value(); }
  unsigned period() const;  // p = lcm(|q^ell|, d), root mode only
  long z1() const { return z1_; }
  long z2() const { return z2_; }

  FieldScalar vertex_value(const GammaVertex& v) const;  // coset * mu^s

  /// tau: minimal t >= s with t = k mod d (generic q), or the unique
  /// 0 <= t < lcm(|mu|, d) with t = s mod |mu| and t = k mod d (root mode;
  /// none when the congruences are incompatible).
  std::optional<long> tau(const GammaVertex& v) const;

  /// z1*m when tau(v) = lcm(|mu|,d) - 1 in root mode, else 0.
  long epsilon(const GammaVertex& v) const;

  /// Solves value = mu^t within +-max_steps; nullopt if no power matches.
  std::optional<long> mu_log(const FieldScalar& ratio, long max_steps = 64) const;

private:
  QContext ctx_;
  unsigned m_, mprime_, ell_, d_;
  FieldScalar mu_;
  std::optional<unsigned> e_;
  long z1_ = 0, z2_ = 0;
};

/// Canonical relabeling: per <mu>-orbit of the support, the base point is the
/// canonical-order minimum of the observed vertex values; vertices sorted.
GammaRep normalize_gamma_rep(const GammaRep& w, const BimodContext& bc);

bool gamma_reps_equal(const GammaRep& a, const GammaRep& b, const BimodContext& bc);

/// The unraveling functor Phi: eigenspace-decomposes the V^0_j column of the
/// bimodule under g^ell, assigns spaces to vertices via tau, restricts sigma
/// (composed with g^{-epsilon} over the wrap-around arrow) to get the a-maps,
/// and takes B = (g^ell - lambda).
/// errors: EigenvaluesNotInField, TauUnsolvable, NotBimoduleCompatible
GammaRep phi(const BimoduleInC& v, const BimodContext& bc);

/// The induction functor Psi: builds kG (x)_H W~ with basis {g^t (x) w},
/// 0 <= t < ell. Asserts the well-definedness identity at build time.
/// errors: ScalarConstraintViolated, TauUnsolvable, ConfigError
BimoduleInC psi(const GammaRep& w, const BimodContext& bc, const FieldScalar& gamma0,
                const FieldScalar& gamma0p);

struct RoundTripReport {
  bool pass = true;
  std::vector<std::string> failures;
};

/// For W: checks phi(psi(W)) equals the normalized W vertexwise and mapwise.
RoundTripReport verify_round_trip_rep(const GammaRep& w, const BimodContext& bc,
                                      const FieldScalar& gamma0, const FieldScalar& gamma0p);

/// For V: builds the explicit xi_V(g^t (x) w) = g^t . w, then checks it is
/// bijective, block-compatible, and intertwines both g and the x-data.
RoundTripReport verify_round_trip_bimodule(const BimoduleInC& v, const BimodContext& bc);

/// Relation table for Gamma_T: per component (indexed by the (n/ell)-th root
/// of unity zeta) the scalar c with (r-step a-composite) = c * id; c = 0 in
/// the radical case.
struct GammaTComponent {
  FieldScalar zeta;    // canonical-minimum root of unity labeling the component
  FieldScalar scalar;  // c with (r-step a-composite) = c * id; 0 in the radical case
  unsigned size = 0;   // number of vertices
};

struct GammaTTable {
  unsigned r = 0, n = 0, m = 0, mprime = 0, d = 0, ell = 0;
  int case_id = 0;  // 1: m,m' != r; 2: m = m' = r; 3: m = r only; 4: m' = r only
  std::vector<GammaTComponent> components;
};

/// errors: WrongOrderOfQ, CaseUnsupported, GammaConstraintViolated
GammaTTable build_gamma_T(unsigned r, unsigned n, unsigned m, unsigned mprime,
                          const FieldScalar& gamma0, const FieldScalar& gamma0p,
                          const QContext& ctx);

struct MembershipReport {
  bool member = true;
  std::vector<std::string> failures;
};

/// Evaluates the Gamma_T relation as a matrix identity around every cycle of
/// the support. Pre: all B maps zero.
MembershipReport check_gamma_T_membership(const GammaRep& w, const GammaTTable& table,
                                          const BimodContext& bc);

/// The primed analogue: q^2 ac = ca as the glue identity plus the d-step
/// cycle scalars for both the a- and c-families.
MembershipReport check_gamma_T_prime_membership(const GammaRep& w, const QContext& ctx, unsigned n,
                                                const FieldScalar& gammaE0,
                                                const FieldScalar& gammaE0p,
                                                const FieldScalar& gammaF0,
                                                const FieldScalar& gammaF0p);

/// Phi' = the two Borel Phi's glued on shared spaces, with the C/A relation
/// checked. Requires root mode with n | m, n | m'.
/// errors: GlueMismatch, WrongOrderOfQ + phi's error set
GammaRep phi_prime(const BimoduleInC& v, const QContext& ctx);

/// Psi' = one induced space carrying both Borel x-actions; the U_q(sl2)
/// relations are asserted via the hopfaction verifier.
/// errors: WrongOrderOfQ + psi's error set + build_uqsl_action's error set
BimoduleInC psi_prime(const GammaRep& w, const QContext& ctx, unsigned m, unsigned mprime,
                      const FieldScalar& gammaE0, const FieldScalar& gammaE0p,
                      const FieldScalar& gammaF0, const FieldScalar& gammaF0p);

RoundTripReport verify_round_trip_rep_prime(const GammaRep& w, const QContext& ctx, unsigned m,
                                            unsigned mprime, const FieldScalar& gammaE0,
                                            const FieldScalar& gammaE0p,
                                            const FieldScalar& gammaF0,
                                            const FieldScalar& gammaF0p);

/// The Etingof-Ostrik dictionary label: A(n/t) or A(n, lambda).
struct EOLabel {
  unsigned algebra_n = 0;
  std::optional<FieldScalar> lambda;

  std::string to_string() const;
};

/// errors: WrongOrderOfQ, NotTransitive, MixedGamma, CaseUnsupported
EOLabel classify_etingof_ostrik(const UqbVertexData& data, unsigned n, const QContext& ctx);

/// Views a bimodule as the degree-1 data of a path-algebra action on the
/// bipartite quiver with m + m' vertices; the builders validate the data.
UqbAction bimodule_to_uqb_action(const BimoduleInC& v, const BimodContext& bc, unsigned bound = 2);
UqslAction bimodule_to_uqsl_action(const BimoduleInC& v, const QContext& ctx, unsigned bound = 2);

}  // namespace qqw
