#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <optional>
#include <string>

#include "qqw/errors.hpp"

namespace qqw {

enum class FieldKind { Rational, Prime };

/// Descriptor of the ground field: arbitrary-precision rationals, or F_p.
struct FieldDesc {
  FieldKind kind = FieldKind::Rational;
  std::uint64_t p = 0;  // modulus, Prime only

  friend bool operator==(const FieldDesc&, const FieldDesc&) = default;
};

/// An exact field element. Arithmetic is exact in both backends; equality is
/// decidable and canonical (rationals kept reduced, residues kept in [0, p)).
/// Values are immutable in practice: all operations return new scalars.
class FieldScalar {
public:
  FieldScalar() = default;

  static FieldScalar rational(mpq_class v);
  static FieldScalar integer(long v);  // rational backend
  static FieldScalar residue(std::uint64_t v, std::uint64_t p);

  const FieldDesc& field() const { return field_; }

  bool is_zero() const;
  bool is_one() const;

  FieldScalar operator-() const;
  FieldScalar inv() const;  // errors: ZeroInput
  FieldScalar pow(long e) const;

  friend FieldScalar operator+(const FieldScalar& a, const FieldScalar& b);
  friend FieldScalar operator-(const FieldScalar& a, const FieldScalar& b);
  friend FieldScalar operator*(const FieldScalar& a, const FieldScalar& b);
  friend FieldScalar operator/(const FieldScalar& a, const FieldScalar& b);
  FieldScalar& operator+=(const FieldScalar& b) { return *this = *this + b; }
  FieldScalar& operator-=(const FieldScalar& b) { return *this = *this - b; }
  FieldScalar& operator*=(const FieldScalar& b) { return *this = *this * b; }

  friend bool operator==(const FieldScalar& a, const FieldScalar& b);
  friend bool operator!=(const FieldScalar& a, const FieldScalar& b) { return !(a == b); }

  /// Canonical total order (numeric for rationals, residue order for F_p),
  /// used for deterministic tie-breaking downstream.
  int cmp(const FieldScalar& b) const;
  friend bool operator<(const FieldScalar& a, const FieldScalar& b) { return a.cmp(b) < 0; }

  std::string to_string() const;
  const mpq_class& rational_value() const;
  std::uint64_t residue_value() const { return res_; }

private:
  FieldDesc field_{};
  mpq_class rat_{0};
  std::uint64_t res_ = 0;
};

/// The ambient field together with the distinguished element q (q != 0, +-1)
/// and its multiplicative order (nullopt = infinite).
class QContext {
public:
  /// Rational backend; q must not be 0, 1 or -1, which forces infinite order.
  static QContext rational(const mpq_class& q);

  const FieldDesc& field() const { return field_; }
  const FieldScalar& q() const { return q_; }

  /// Multiplicative order of q; nullopt is the infinity marker.
  const std::optional<unsigned>& order_of_q() const { return order_; }
  bool q_is_root_of_unity() const { return order_.has_value(); }

  FieldScalar zero() const;
  FieldScalar one() const;
  FieldScalar from_integer(long n) const;
  FieldScalar q_pow(long e) const { return q_.pow(e); }

  /// Parses "n", "-n" or "n/d" in the context's field.
  FieldScalar parse(const std::string& s) const;

  /// Context over the same field with q replaced by q^e.
  /// errors: QIsTrivial when q^e lands in {0, 1, -1}
  QContext derived_power(long e) const;

  friend QContext make_prime_field_context(std::uint64_t p, std::uint64_t q_residue);

private:
  QContext(FieldDesc f, FieldScalar q, std::optional<unsigned> order)
      : field_(f), q_(std::move(q)), order_(order) {}

  FieldDesc field_;
  FieldScalar q_;
  std::optional<unsigned> order_;
};

/// errors: NotPrime, QIsTrivial (q = 0, 1 or -1 in F_p)
QContext make_prime_field_context(std::uint64_t p, std::uint64_t q_residue);

FieldScalar field_zero(const FieldDesc& f);
FieldScalar field_one(const FieldDesc& f);

/// Least r >= 1 with x^r = 1, or nullopt if none exists.
/// errors: ZeroInput
std::optional<unsigned> multiplicative_order(const FieldScalar& x);

}  // namespace qqw
