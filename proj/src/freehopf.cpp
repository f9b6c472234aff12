#include "qqw/freehopf.hpp"

#include <algorithm>

namespace qqw {

namespace {

// Unit atoms for the rewriting engine: a g/K power of +-1, one x/E, or one F.
struct Atom {
  enum Kind { GK, X, F } kind;
  int exp = 0;  // GK only, +-1

  int rank() const { return kind == GK ? 0 : (kind == X ? 1 : 2); }
};

}  // namespace

HopfAlgebra HopfAlgebra::uqb(const QContext& ctx) {
  return HopfAlgebra(HopfFamily::Uqb, ctx, false, 0, 0);
}

HopfAlgebra HopfAlgebra::taft(const QContext& ctx, unsigned r, unsigned n) {
  check(ctx.order_of_q() == std::optional<unsigned>(r), Errc::WrongOrderOfQ,
        "T(r,n) needs q a primitive r-th root of unity");
  check(r >= 2 && n % r == 0, Errc::WrongOrderOfQ, "T(r,n) needs r | n");
  return HopfAlgebra(HopfFamily::Uqb, ctx, true, r, n);
}

HopfAlgebra HopfAlgebra::uqsl(const QContext& ctx) {
  return HopfAlgebra(HopfFamily::Uqsl, ctx, false, 0, 0);
}

HopfAlgebra HopfAlgebra::uq_sl2(const QContext& ctx, unsigned n) {
  check(n > 2 && n % 2 == 1, Errc::WrongOrderOfQ, "u_q(sl2) needs n odd, n > 2");
  check(ctx.order_of_q() == std::optional<unsigned>(n), Errc::WrongOrderOfQ,
        "u_q(sl2) needs q a primitive n-th root of unity");
  return HopfAlgebra(HopfFamily::Uqsl, ctx, true, n, n);
}

HopfMonomial HopfAlgebra::reduce(HopfMonomial m, bool& dead) const {
  dead = false;
  if (!quotient_) return m;
  long n = static_cast<long>(n_);
  m.g_exp = ((m.g_exp % n) + n) % n;
  if (m.x_exp >= r_ || m.f_exp >= r_) dead = true;
  return m;
}

void HopfAlgebra::add_term(HopfElement& e, HopfMonomial m, const FieldScalar& c) const {
  if (c.is_zero()) return;
  bool dead = false;
  m = reduce(m, dead);
  if (dead) return;
  auto [it, inserted] = e.terms.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) e.terms.erase(it);
  }
}

HopfElement HopfAlgebra::one() const { return monomial(HopfMonomial{}); }

HopfElement HopfAlgebra::monomial(HopfMonomial m, FieldScalar c) const {
  HopfElement e;
  add_term(e, m, c);
  return e;
}

HopfElement HopfAlgebra::monomial(HopfMonomial m) const { return monomial(m, ctx_.one()); }

HopfElement HopfAlgebra::x_power(unsigned k) const { return monomial(HopfMonomial{0, k, 0}); }

HopfElement HopfAlgebra::add(const HopfElement& a, const HopfElement& b) const {
  HopfElement e = a;
  for (const auto& [m, c] : b.terms) add_term(e, m, c);
  return e;
}

HopfElement HopfAlgebra::scale(const FieldScalar& c, const HopfElement& a) const {
  HopfElement e;
  for (const auto& [m, cm] : a.terms) add_term(e, m, c * cm);
  return e;
}

namespace {

std::vector<Atom> monomial_word(const HopfMonomial& m) {
  std::vector<Atom> w;
  int sign = m.g_exp >= 0 ? 1 : -1;
  for (long i = 0; i < std::abs(m.g_exp); ++i) w.push_back({Atom::GK, sign});
  for (unsigned i = 0; i < m.x_exp; ++i) w.push_back({Atom::X, 0});
  for (unsigned i = 0; i < m.f_exp; ++i) w.push_back({Atom::F, 0});
  return w;
}

// Sorts a word into normal order, returning raw (monomial, coeff) terms with
// no quotient reduction applied.
std::vector<std::pair<HopfMonomial, FieldScalar>> rewrite_word(const std::vector<Atom>& word,
                                                               const QContext& ctx,
                                                               HopfFamily family,
                                                               RewriteStrategy strategy) {
  std::vector<std::pair<std::vector<Atom>, FieldScalar>> work{{word, ctx.one()}};
  std::vector<std::pair<HopfMonomial, FieldScalar>> out;
  const FieldScalar comm = family == HopfFamily::Uqsl
                               ? (ctx.q() - ctx.q_pow(-1)).inv()
                               : ctx.zero();  // (q - q^{-1})^{-1}, [E,F] rewrites only
  while (!work.empty()) {
    auto [w, c] = std::move(work.back());
    work.pop_back();
    std::size_t hit = w.size();
    if (strategy == RewriteStrategy::Leftmost) {
      for (std::size_t i = 0; i + 1 < w.size(); ++i)
        if (w[i].rank() > w[i + 1].rank()) {
          hit = i;
          break;
        }
    } else {
      for (std::size_t i = w.size(); i-- > 1;)
        if (w[i - 1].rank() > w[i].rank()) {
          hit = i - 1;
          break;
        }
    }
    if (hit == w.size()) {
      HopfMonomial m;
      for (const Atom& a : w) {
        if (a.kind == Atom::GK) m.g_exp += a.exp;
        if (a.kind == Atom::X) ++m.x_exp;
        if (a.kind == Atom::F) ++m.f_exp;
      }
      out.emplace_back(m, c);
      continue;
    }
    const Atom left = w[hit], right = w[hit + 1];
    if (right.kind == Atom::GK) {
      // x g^s = q^{-s} g^s x  /  E K^s = q^{-2s} K^s E  /  F K^s = q^{2s} K^s F
      long e = right.exp;
      long power = left.kind == Atom::X ? (family == HopfFamily::Uqb ? -e : -2 * e) : 2 * e;
      auto w2 = w;
      std::swap(w2[hit], w2[hit + 1]);
      work.emplace_back(std::move(w2), c * ctx.q_pow(power));
    } else {
      // F E = E F - (K - K^{-1})/(q - q^{-1})
      auto swapped = w;
      std::swap(swapped[hit], swapped[hit + 1]);
      work.emplace_back(std::move(swapped), c);
      auto k_word = w;
      k_word[hit] = {Atom::GK, 1};
      k_word.erase(k_word.begin() + static_cast<long>(hit) + 1);
      work.emplace_back(k_word, -(c * comm));
      k_word[hit] = {Atom::GK, -1};
      work.emplace_back(std::move(k_word), c * comm);
    }
  }
  return out;
}

}  // namespace

HopfElement HopfAlgebra::mul(const HopfElement& a, const HopfElement& b) const {
  HopfElement out;
  for (const auto& [ma, ca] : a.terms) {
    for (const auto& [mb, cb] : b.terms) {
      FieldScalar c = ca * cb;
      if (family_ == HopfFamily::Uqb) {
        // x^{b1} g^{a2} = q^{-a2 b1} g^{a2} x^{b1}, from g x g^{-1} = q x
        FieldScalar scalar = ctx_.q_pow(-(mb.g_exp * static_cast<long>(ma.x_exp)));
        add_term(out, HopfMonomial{ma.g_exp + mb.g_exp, ma.x_exp + mb.x_exp, 0}, c * scalar);
      } else {
        // concatenate the normal words and re-sort via the rewriting engine
        std::vector<Atom> w = monomial_word(ma);
        auto wb = monomial_word(mb);
        w.insert(w.end(), wb.begin(), wb.end());
        for (const auto& [m, cm] : rewrite_word(w, ctx_, family_, RewriteStrategy::Leftmost))
          add_term(out, m, c * cm);
      }
    }
  }
  return out;
}

HopfElement HopfAlgebra::normal_form(const std::vector<Gen>& word, RewriteStrategy strategy) const {
  std::vector<Atom> atoms;
  for (Gen g : word) {
    switch (g) {
      case Gen::G: atoms.push_back({Atom::GK, 1}); break;
      case Gen::GInv: atoms.push_back({Atom::GK, -1}); break;
      case Gen::X: atoms.push_back({Atom::X, 0}); break;
      case Gen::F:
        check(family_ == HopfFamily::Uqsl, Errc::OutOfRange, "F only exists for U_q(sl2)");
        atoms.push_back({Atom::F, 0});
        break;
    }
  }
  HopfElement out;
  for (const auto& [m, c] : rewrite_word(atoms, ctx_, family_, strategy)) add_term(out, m, c);
  return out;
}

FieldScalar HopfAlgebra::counit(const HopfElement& a) const {
  FieldScalar acc = ctx_.zero();
  for (const auto& [m, c] : a.terms)
    if (m.x_exp == 0 && m.f_exp == 0) acc += c;
  return acc;
}

TensorElement HopfAlgebra::tensor_monomial(std::vector<HopfMonomial> t, FieldScalar c) const {
  TensorElement e;
  e.factors = static_cast<unsigned>(t.size());
  if (c.is_zero()) return e;
  for (auto& m : t) {
    bool dead = false;
    m = reduce(m, dead);
    if (dead) return e;
  }
  e.terms.emplace(std::move(t), std::move(c));
  return e;
}

TensorElement HopfAlgebra::tensor_add(const TensorElement& a, const TensorElement& b) const {
  check(a.factors == b.factors || a.is_zero() || b.is_zero(), Errc::Internal,
        "tensor factor count mismatch");
  TensorElement e = a.is_zero() ? b : a;
  if (a.is_zero() || b.is_zero()) return e;
  for (const auto& [t, c] : b.terms) {
    if (c.is_zero()) continue;
    auto [it, inserted] = e.terms.try_emplace(t, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) e.terms.erase(it);
    }
  }
  return e;
}

TensorElement HopfAlgebra::tensor_mul(const TensorElement& a, const TensorElement& b) const {
  check(a.factors == b.factors, Errc::Internal, "tensor factor count mismatch");
  TensorElement out;
  out.factors = a.factors;
  for (const auto& [ta, ca] : a.terms) {
    for (const auto& [tb, cb] : b.terms) {
      // factorwise products, expanded across slots
      std::vector<HopfElement> slots(a.factors);
      for (unsigned i = 0; i < a.factors; ++i)
        slots[i] = mul(monomial(ta[i]), monomial(tb[i]));
      std::vector<HopfMonomial> tuple(a.factors);
      FieldScalar base = ca * cb;
      auto expand = [&](auto&& self, unsigned slot, const FieldScalar& acc) -> void {
        if (slot == a.factors) {
          out = tensor_add(out, tensor_monomial(tuple, acc));
          return;
        }
        for (const auto& [m, c] : slots[slot].terms) {
          tuple[slot] = m;
          self(self, slot + 1, acc * c);
        }
      };
      expand(expand, 0, base);
    }
  }
  return out;
}

TensorElement HopfAlgebra::coproduct(const HopfMonomial& m) const {
  const HopfMonomial unit{};
  TensorElement acc = tensor_monomial({HopfMonomial{m.g_exp, 0, 0}, HopfMonomial{m.g_exp, 0, 0}},
                                      ctx_.one());
  if (family_ == HopfFamily::Uqb) {
    // Delta(x) = 1 (x) x + x (x) g
    TensorElement dx = tensor_add(tensor_monomial({unit, HopfMonomial{0, 1, 0}}, ctx_.one()),
                                  tensor_monomial({HopfMonomial{0, 1, 0}, HopfMonomial{1, 0, 0}},
                                                  ctx_.one()));
    for (unsigned i = 0; i < m.x_exp; ++i) acc = tensor_mul(acc, dx);
    return acc;
  }
  // Delta(E) = 1 (x) E + E (x) K, Delta(F) = K^{-1} (x) F + F (x) 1
  TensorElement de = tensor_add(tensor_monomial({unit, HopfMonomial{0, 1, 0}}, ctx_.one()),
                                tensor_monomial({HopfMonomial{0, 1, 0}, HopfMonomial{1, 0, 0}},
                                                ctx_.one()));
  TensorElement df = tensor_add(tensor_monomial({HopfMonomial{-1, 0, 0}, HopfMonomial{0, 0, 1}},
                                                ctx_.one()),
                                tensor_monomial({HopfMonomial{0, 0, 1}, unit}, ctx_.one()));
  for (unsigned i = 0; i < m.x_exp; ++i) acc = tensor_mul(acc, de);
  for (unsigned i = 0; i < m.f_exp; ++i) acc = tensor_mul(acc, df);
  return acc;
}

TensorElement HopfAlgebra::expand_slot(const TensorElement& t, unsigned slot) const {
  check(slot < t.factors, Errc::OutOfRange, "expand_slot index");
  TensorElement out;
  out.factors = t.factors + 1;
  for (const auto& [tuple, c] : t.terms) {
    TensorElement d = coproduct(tuple[slot]);
    for (const auto& [pair, c2] : d.terms) {
      std::vector<HopfMonomial> nt;
      nt.reserve(t.factors + 1);
      nt.insert(nt.end(), tuple.begin(), tuple.begin() + slot);
      nt.push_back(pair[0]);
      nt.push_back(pair[1]);
      nt.insert(nt.end(), tuple.begin() + slot + 1, tuple.end());
      out = tensor_add(out, tensor_monomial(std::move(nt), c * c2));
    }
  }
  return out;
}

TensorElement HopfAlgebra::coproduct_power(unsigned l, const HopfElement& elem) const {
  std::vector<unsigned> slots(l);
  for (unsigned i = 0; i < l; ++i) slots[i] = i;  // expand the last slot each time
  return coproduct_power(l, elem, slots);
}

TensorElement HopfAlgebra::coproduct_power(unsigned l, const HopfElement& elem,
                                           const std::vector<unsigned>& slots) const {
  check(slots.size() == l, Errc::OutOfRange, "need one slot choice per application");
  TensorElement t;
  t.factors = 1;
  for (const auto& [m, c] : elem.terms) t = tensor_add(t, tensor_monomial({m}, c));
  for (unsigned step = 0; step < l; ++step) t = expand_slot(t, slots[step]);
  return t;
}

TensorElement HopfAlgebra::g_tensor_lambda(const WeakComposition& lambda) const {
  check(lambda.length() >= 1, Errc::OutOfRange, "lambda must have at least one part");
  std::vector<HopfMonomial> t(lambda.length());
  for (std::size_t i = 0; i < lambda.length(); ++i) {
    t[i].g_exp = static_cast<long>(lambda.partial_sum(i + 1));
    t[i].x_exp = lambda.entries[i];
  }
  return tensor_monomial(std::move(t), ctx_.one());
}

FieldScalar HopfAlgebra::pair_q() const {
  return family_ == HopfFamily::Uqb ? ctx_.q() : ctx_.q() * ctx_.q();
}

TensorElement HopfAlgebra::skew_power_closed_form(unsigned l, unsigned k) const {
  check(l >= 1 && k >= 1, Errc::OutOfRange, "skew_power_closed_form needs l, k >= 1");
  const FieldScalar qinv = pair_q().inv();
  TensorElement acc;
  acc.factors = l + 1;
  for (const auto& lambda : weak_compositions(k, l + 1)) {
    FieldScalar coeff = q_multinomial_at(k, lambda, qinv);
    if (coeff.is_zero()) continue;
    TensorElement term = g_tensor_lambda(lambda);
    for (auto& [t, c] : term.terms) c *= coeff;
    acc = tensor_add(acc, term);
  }
  return acc;
}

}  // namespace qqw
