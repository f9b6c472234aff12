#pragma once

#include <cstdint>

#include "qqw/bimodfunctors.hpp"

namespace qqw::fixtures {

/// Valid U_q(b)-action data generated by construction: vertex orbits sized to
/// the order of q (gamma seeded on orbit representatives and propagated),
/// arrow orbits following the vertex permutation with wrap scalars, and sigma
/// seeded inside the (sigma2) block intersected with the eigenvalue-shift
/// condition that makes (sigma3) close up around each orbit.
struct UqbFixture {
  Quiver quiver;
  UqbVertexData vertex;
  UqbArrowData arrow;
};

UqbFixture random_uqb_fixture(std::uint64_t seed, const QContext& ctx, unsigned max_vertices = 4,
                              unsigned max_arrows = 6);

UqbAction build_fixture_action(const UqbFixture& f, const QContext& ctx, unsigned bound = 4);

enum class BreakKind { QGamma, Sigma1, Sigma2, Sigma3 };

/// A raw action on a handcrafted quiver violating exactly the stated
/// condition; feeds the verifier's negative paths.
UqbAction broken_uqb_action(std::uint64_t seed, const QContext& ctx, BreakKind kind,
                            unsigned bound = 4);

struct UqslFixture {
  Quiver quiver;
  UqslActionData data;
};

/// Valid U_q(sl2)-action data: n-cycle vertex orbits carrying the paired
/// gamma^E/gamma^F scalars, cyclic arrow orbits with sigma = 0, and +-1
/// blocks on loops at fixed vertices.
UqslFixture random_uqsl_fixture(std::uint64_t seed, const QContext& ctx, unsigned n,
                                bool factoring = true);

/// Borel-case representation of Gamma(q^ell, d) with exact relations, mixing
/// zero-loop full cycles, scalar chains with nilpotent loops, and pure-loop
/// vertices.
GammaRep random_gamma_rep(std::uint64_t seed, const BimodContext& bc, unsigned max_support = 6,
                          unsigned max_dim = 3);

/// Primed representation over Gamma'(1, q^2, n) for m = m' = n.
GammaRep random_gamma_rep_prime(std::uint64_t seed, const QContext& ctx, unsigned n,
                                unsigned max_dim = 2);

/// Admissible psi scalars for the context (zero unless q^m = 1 allows more).
std::pair<FieldScalar, FieldScalar> random_psi_scalars(std::uint64_t seed, const BimodContext& bc);

/// The paired gamma^E/gamma^F base scalars satisfying
/// gammaE * gammaF = -q/(1-q^2)^2.
std::pair<FieldScalar, FieldScalar> gammaEF_pair(std::uint64_t seed, const QContext& ctx);

}  // namespace qqw::fixtures
