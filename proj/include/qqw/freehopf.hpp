#pragma once

#include <map>
#include <vector>

#include "qqw/field.hpp"
#include "qqw/qcombinatorics.hpp"

namespace qqw {

enum class HopfFamily { Uqb, Uqsl };

/// Generators for words. For the sl2 family read G as K, GInv as K^{-1} and
/// X as E; F only exists there.
enum class Gen { G, GInv, X, F };

/// A monomial in normal order: g^a x^b for U_q(b), K^a E^e F^f for U_q(sl2).
struct HopfMonomial {
  long g_exp = 0;
  unsigned x_exp = 0;
  unsigned f_exp = 0;  // Uqsl only

  auto operator<=>(const HopfMonomial&) const = default;
};

/// Finite linear combination of normal-ordered monomials. Zero coefficients
/// are never stored, so map equality is element equality.
struct HopfElement {
  std::map<HopfMonomial, FieldScalar> terms;

  bool is_zero() const { return terms.empty(); }
  friend bool operator==(const HopfElement& a, const HopfElement& b) { return a.terms == b.terms; }
};

/// Element of H^{otimes n}: linear combination of n-tuples of monomials.
struct TensorElement {
  unsigned factors = 1;
  std::map<std::vector<HopfMonomial>, FieldScalar> terms;

  bool is_zero() const { return terms.empty(); }
  friend bool operator==(const TensorElement& a, const TensorElement& b) {
    return a.factors == b.factors && a.terms == b.terms;
  }
};

enum class RewriteStrategy { Leftmost, Rightmost };

/// One of U_q(b), T(r,n), U_q(sl2), u_q(sl2): the family fixes the relations
/// and coproducts, the quotient flag additionally reduces g^n = 1 and kills
/// x^r (resp. K^n = 1, E^n = F^n = 0).
class HopfAlgebra {
public:
  static HopfAlgebra uqb(const QContext& ctx);
  /// errors: WrongOrderOfQ unless |q| = r and r | n
  static HopfAlgebra taft(const QContext& ctx, unsigned r, unsigned n);
  static HopfAlgebra uqsl(const QContext& ctx);
  /// errors: WrongOrderOfQ unless |q| = n, n odd, n > 2
  static HopfAlgebra uq_sl2(const QContext& ctx, unsigned n);

  HopfFamily family() const { return family_; }
  const QContext& ctx() const { return ctx_; }
  bool is_quotient() const { return quotient_; }
  unsigned quotient_r() const { return r_; }
  unsigned quotient_n() const { return n_; }

  HopfElement zero() const { return {}; }
  HopfElement one() const;
  HopfElement monomial(HopfMonomial m, FieldScalar c) const;
  HopfElement monomial(HopfMonomial m) const;
  HopfElement x_power(unsigned k) const;

  HopfElement add(const HopfElement& a, const HopfElement& b) const;
  HopfElement scale(const FieldScalar& c, const HopfElement& a) const;
  HopfElement mul(const HopfElement& a, const HopfElement& b) const;

  /// Canonical normal-ordered form of a word in the generators; confluent.
  HopfElement normal_form(const std::vector<Gen>& word,
                          RewriteStrategy strategy = RewriteStrategy::Leftmost) const;

  /// Counit on the standard generators: eps(g) = 1, eps(x) = 0 (K -> 1,
  /// E, F -> 0), extended multiplicatively and linearly.
  FieldScalar counit(const HopfElement& a) const;

  TensorElement tensor_monomial(std::vector<HopfMonomial> t, FieldScalar c) const;
  TensorElement tensor_add(const TensorElement& a, const TensorElement& b) const;
  TensorElement tensor_mul(const TensorElement& a, const TensorElement& b) const;

  /// Delta on a monomial, as a 2-factor tensor element.
  TensorElement coproduct(const HopfMonomial& m) const;

  /// Delta^l applied to elem, expanding `slot` at each step (any choice gives
  /// the same result by coassociativity; the default expands the last slot).
  TensorElement coproduct_power(unsigned l, const HopfElement& elem) const;
  TensorElement coproduct_power(unsigned l, const HopfElement& elem,
                                const std::vector<unsigned>& slots) const;
  TensorElement expand_slot(const TensorElement& t, unsigned slot) const;

  /// G tensor^lambda X for lambda in WC(k, l+1): factor i carries
  /// G^{lambda^i} X^{lambda_i}, with (G, X) = (g, x) or (K, E).
  TensorElement g_tensor_lambda(const WeakComposition& lambda) const;

  /// Sum over WC(k, l+1) of [k; lambda]_{q0^{-1}} G tensor^lambda X where
  /// q0 is the commutation scalar of the pair (q for (x,g), q^2 for (E,K)).
  TensorElement skew_power_closed_form(unsigned l, unsigned k) const;

  /// The commutation scalar q0 with G X = q0 X G.
  FieldScalar pair_q() const;

private:
  HopfAlgebra(HopfFamily fam, QContext ctx, bool quot, unsigned r, unsigned n)
      : family_(fam), ctx_(std::move(ctx)), quotient_(quot), r_(r), n_(n) {}

  HopfMonomial reduce(HopfMonomial m, bool& dead) const;
  void add_term(HopfElement& e, HopfMonomial m, const FieldScalar& c) const;

  HopfFamily family_;
  QContext ctx_;
  bool quotient_;
  unsigned r_, n_;
};

}  // namespace qqw
