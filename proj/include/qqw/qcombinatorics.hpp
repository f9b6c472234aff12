#pragma once

#include <vector>

#include "qqw/field.hpp"

namespace qqw {

/// A weak composition: a tuple of nonnegative integers with a fixed sum.
struct WeakComposition {
  std::vector<unsigned> entries;

  unsigned total() const;

  /// Partial sum with 1-based index i: entries 1..i-1, so partial_sum(1) == 0.
  unsigned partial_sum(std::size_t i) const;

  std::size_t length() const { return entries.size(); }

  friend bool operator==(const WeakComposition&, const WeakComposition&) = default;
  friend bool operator<(const WeakComposition& a, const WeakComposition& b) {
    return a.entries < b.entries;
  }
};

/// [m]_q computed as the sum 1 + q + ... + q^{m-1}; [0]_q = 0.
FieldScalar q_integer(unsigned m, const QContext& ctx);

/// q-multinomial coefficient [k; lambda]_q with |lambda| = k, computed by the
/// Pascal-style recursion (never by dividing q-factorials, which can vanish
/// at roots of unity).
/// errors: OutOfRange when |lambda| != k
FieldScalar q_multinomial(unsigned k, const WeakComposition& lambda, const QContext& ctx);

/// Same recursion evaluated at an explicit nonzero q value.
FieldScalar q_multinomial_at(unsigned k, const WeakComposition& lambda, const FieldScalar& qval);

/// [n choose m]_q; equals 1 when m = 0 or m = n.
/// errors: OutOfRange unless 0 <= m <= n
FieldScalar q_binomial(unsigned n, unsigned m, const QContext& ctx);

/// All of WC(k, l) in ascending lexicographic order; size C(k+l-1, l-1).
std::vector<WeakComposition> weak_compositions(unsigned k, unsigned l);

}  // namespace qqw
