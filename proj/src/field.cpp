#include "qqw/field.hpp"

#include <cstdlib>

namespace qqw {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::NotPrime: return "NotPrime";
    case Errc::QIsTrivial: return "QIsTrivial";
    case Errc::ZeroInput: return "ZeroInput";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::TruncationOverflow: return "TruncationOverflow";
    case Errc::NotBimoduleCompatible: return "NotBimoduleCompatible";
    case Errc::GammaConstraintViolated: return "GammaConstraintViolated";
    case Errc::SigmaConstraintViolated: return "SigmaConstraintViolated";
    case Errc::NotFiltered: return "NotFiltered";
    case Errc::WrongOrderOfQ: return "WrongOrderOfQ";
    case Errc::OracleMismatch: return "OracleMismatch";
    case Errc::SigmaFourViolated: return "SigmaFourViolated";
    case Errc::GammaEFConditionViolated: return "GammaEFConditionViolated";
    case Errc::EigenvaluesNotInField: return "EigenvaluesNotInField";
    case Errc::TauUnsolvable: return "TauUnsolvable";
    case Errc::ScalarConstraintViolated: return "ScalarConstraintViolated";
    case Errc::GlueMismatch: return "GlueMismatch";
    case Errc::CaseUnsupported: return "CaseUnsupported";
    case Errc::NotTransitive: return "NotTransitive";
    case Errc::MixedGamma: return "MixedGamma";
    case Errc::ConfigError: return "ConfigError";
    case Errc::FieldMismatch: return "FieldMismatch";
    case Errc::SingularMatrix: return "SingularMatrix";
    case Errc::Internal: return "Internal";
  }
  return "Unknown";
}

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

std::uint64_t invmod(std::uint64_t a, std::uint64_t p) {
  check(a % p != 0, Errc::ZeroInput, "inverse of zero");
  // extended Euclid on (a, p)
  long long t = 0, newt = 1;
  long long r = static_cast<long long>(p), newr = static_cast<long long>(a % p);
  while (newr != 0) {
    long long quot = r / newr;
    t -= quot * newt;
    std::swap(t, newt);
    r -= quot * newr;
    std::swap(r, newr);
  }
  if (t < 0) t += static_cast<long long>(p);
  return static_cast<std::uint64_t>(t);
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

void require_same_field(const FieldScalar& a, const FieldScalar& b) {
  check(a.field() == b.field(), Errc::FieldMismatch, "scalars from different fields");
}

}  // namespace

FieldScalar FieldScalar::rational(mpq_class v) {
  FieldScalar s;
  s.field_ = {FieldKind::Rational, 0};
  v.canonicalize();
  s.rat_ = std::move(v);
  return s;
}

FieldScalar FieldScalar::integer(long v) { return rational(mpq_class(v)); }

FieldScalar FieldScalar::residue(std::uint64_t v, std::uint64_t p) {
  FieldScalar s;
  s.field_ = {FieldKind::Prime, p};
  s.res_ = v % p;
  return s;
}

bool FieldScalar::is_zero() const {
  return field_.kind == FieldKind::Rational ? rat_ == 0 : res_ == 0;
}

bool FieldScalar::is_one() const {
  return field_.kind == FieldKind::Rational ? rat_ == 1 : res_ == 1 % field_.p;
}

FieldScalar FieldScalar::operator-() const {
  FieldScalar s = *this;
  if (field_.kind == FieldKind::Rational)
    s.rat_ = -rat_;
  else
    s.res_ = res_ == 0 ? 0 : field_.p - res_;
  return s;
}

FieldScalar FieldScalar::inv() const {
  check(!is_zero(), Errc::ZeroInput, "inverse of zero");
  FieldScalar s = *this;
  if (field_.kind == FieldKind::Rational) {
    s.rat_ = 1 / rat_;
  } else {
    s.res_ = invmod(res_, field_.p);
  }
  return s;
}

FieldScalar FieldScalar::pow(long e) const {
  if (e < 0) return inv().pow(-e);
  FieldScalar s = *this;
  if (field_.kind == FieldKind::Rational) {
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), rat_.get_num().get_mpz_t(), static_cast<unsigned long>(e));
    mpz_pow_ui(den.get_mpz_t(), rat_.get_den().get_mpz_t(), static_cast<unsigned long>(e));
    s.rat_ = mpq_class(num, den);
    s.rat_.canonicalize();
  } else {
    s.res_ = powmod(res_, static_cast<std::uint64_t>(e), field_.p);
  }
  return s;
}

FieldScalar operator+(const FieldScalar& a, const FieldScalar& b) {
  require_same_field(a, b);
  FieldScalar s = a;
  if (a.field_.kind == FieldKind::Rational)
    s.rat_ = a.rat_ + b.rat_;
  else
    s.res_ = (a.res_ + b.res_) % a.field_.p;
  return s;
}

FieldScalar operator-(const FieldScalar& a, const FieldScalar& b) { return a + (-b); }

FieldScalar operator*(const FieldScalar& a, const FieldScalar& b) {
  require_same_field(a, b);
  FieldScalar s = a;
  if (a.field_.kind == FieldKind::Rational)
    s.rat_ = a.rat_ * b.rat_;
  else
    s.res_ = mulmod(a.res_, b.res_, a.field_.p);
  return s;
}

FieldScalar operator/(const FieldScalar& a, const FieldScalar& b) { return a * b.inv(); }

bool operator==(const FieldScalar& a, const FieldScalar& b) {
  require_same_field(a, b);
  return a.field_.kind == FieldKind::Rational ? a.rat_ == b.rat_ : a.res_ == b.res_;
}

int FieldScalar::cmp(const FieldScalar& b) const {
  require_same_field(*this, b);
  if (field_.kind == FieldKind::Rational) return ::cmp(rat_, b.rat_);
  return res_ < b.res_ ? -1 : (res_ == b.res_ ? 0 : 1);
}

std::string FieldScalar::to_string() const {
  if (field_.kind == FieldKind::Rational) return rat_.get_str();
  return std::to_string(res_);
}

const mpq_class& FieldScalar::rational_value() const {
  check(field_.kind == FieldKind::Rational, Errc::Internal, "not a rational scalar");
  return rat_;
}

QContext QContext::rational(const mpq_class& q) {
  check(q != 0 && q != 1 && q != -1, Errc::QIsTrivial, "q must avoid {0, 1, -1}");
  FieldDesc f{FieldKind::Rational, 0};
  return QContext(f, FieldScalar::rational(q), std::nullopt);
}

FieldScalar QContext::zero() const { return from_integer(0); }
FieldScalar QContext::one() const { return from_integer(1); }

FieldScalar QContext::from_integer(long n) const {
  if (field_.kind == FieldKind::Rational) return FieldScalar::integer(n);
  long long r = n % static_cast<long long>(field_.p);
  if (r < 0) r += static_cast<long long>(field_.p);
  return FieldScalar::residue(static_cast<std::uint64_t>(r), field_.p);
}

FieldScalar QContext::parse(const std::string& s) const {
  std::string str = s;
  check(!str.empty(), Errc::ConfigError, "empty scalar string");
  std::string num = str, den = "1";
  if (auto slash = str.find('/'); slash != std::string::npos) {
    num = str.substr(0, slash);
    den = str.substr(slash + 1);
  }
  mpz_class n, d;
  check(n.set_str(num, 10) == 0 && d.set_str(den, 10) == 0, Errc::ConfigError,
        "bad scalar string '" + s + "'");
  check(d != 0, Errc::ConfigError, "zero denominator in '" + s + "'");
  if (field_.kind == FieldKind::Rational) return FieldScalar::rational(mpq_class(n, d));
  mpz_class p(static_cast<unsigned long>(field_.p));
  mpz_class nr = n % p, dr = d % p;
  if (nr < 0) nr += p;
  if (dr < 0) dr += p;
  check(dr != 0, Errc::ConfigError, "denominator vanishes mod p in '" + s + "'");
  auto a = FieldScalar::residue(nr.get_ui(), field_.p);
  auto b = FieldScalar::residue(dr.get_ui(), field_.p);
  return a / b;
}

QContext QContext::derived_power(long e) const {
  FieldScalar nq = q_.pow(e);
  check(!nq.is_zero() && !nq.is_one() && !(-nq).is_one(), Errc::QIsTrivial,
        "q^" + std::to_string(e) + " is 0 or +-1");
  std::optional<unsigned> order = multiplicative_order(nq);
  return QContext(field_, std::move(nq), order);
}

QContext make_prime_field_context(std::uint64_t p, std::uint64_t q_residue) {
  check(is_prime_u64(p), Errc::NotPrime, std::to_string(p) + " is not prime");
  std::uint64_t q = q_residue % p;
  check(q != 0 && q != 1 && q != p - 1, Errc::QIsTrivial,
        "q = " + std::to_string(q) + " is 0 or +-1 mod " + std::to_string(p));
  // order by direct power iteration
  unsigned order = 1;
  std::uint64_t x = q;
  while (x != 1) {
    x = mulmod(x, q, p);
    ++order;
  }
  FieldDesc f{FieldKind::Prime, p};
  return QContext(f, FieldScalar::residue(q, p), order);
}

FieldScalar field_zero(const FieldDesc& f) {
  return f.kind == FieldKind::Rational ? FieldScalar::integer(0) : FieldScalar::residue(0, f.p);
}

FieldScalar field_one(const FieldDesc& f) {
  return f.kind == FieldKind::Rational ? FieldScalar::integer(1) : FieldScalar::residue(1, f.p);
}

std::optional<unsigned> multiplicative_order(const FieldScalar& x) {
  check(!x.is_zero(), Errc::ZeroInput, "multiplicative order of zero");
  if (x.field().kind == FieldKind::Rational) {
    const mpq_class& v = x.rational_value();
    if (v == 1) return 1;
    if (v == -1) return 2;
    return std::nullopt;
  }
  unsigned order = 1;
  FieldScalar y = x;
  while (!y.is_one()) {
    y = y * x;
    ++order;
  }
  return order;
}

}  // namespace qqw
