#include "qqw/qcombinatorics.hpp"

#include <map>
#include <numeric>

namespace qqw {

unsigned WeakComposition::total() const {
  return std::accumulate(entries.begin(), entries.end(), 0u);
}

unsigned WeakComposition::partial_sum(std::size_t i) const {
  check(i >= 1 && i <= entries.size(), Errc::OutOfRange, "partial_sum index");
  return std::accumulate(entries.begin(), entries.begin() + (i - 1), 0u);
}

FieldScalar q_integer(unsigned m, const QContext& ctx) {
  FieldScalar acc = ctx.zero();
  FieldScalar qp = ctx.one();
  for (unsigned i = 0; i < m; ++i) {
    acc += qp;
    qp *= ctx.q();
  }
  return acc;
}

namespace {

FieldScalar q_multinomial_rec(const std::vector<unsigned>& lambda, const FieldScalar& qval,
                              std::map<std::vector<unsigned>, FieldScalar>& memo) {
  if (auto it = memo.find(lambda); it != memo.end()) return it->second;
  unsigned k = std::accumulate(lambda.begin(), lambda.end(), 0u);
  const FieldScalar one = field_one(qval.field());
  if (k == 0) return memo[lambda] = one;
  FieldScalar acc = field_zero(qval.field());
  unsigned partial = 0;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (lambda[i] > 0) {
      std::vector<unsigned> sub = lambda;
      --sub[i];
      acc += qval.pow(static_cast<long>(partial)) * q_multinomial_rec(sub, qval, memo);
    }
    partial += lambda[i];
  }
  return memo[lambda] = acc;
}

}  // namespace

FieldScalar q_multinomial_at(unsigned k, const WeakComposition& lambda, const FieldScalar& qval) {
  check(lambda.total() == k, Errc::OutOfRange, "|lambda| != k");
  check(!qval.is_zero(), Errc::ZeroInput, "q-multinomial at q = 0");
  std::map<std::vector<unsigned>, FieldScalar> memo;
  return q_multinomial_rec(lambda.entries, qval, memo);
}

FieldScalar q_multinomial(unsigned k, const WeakComposition& lambda, const QContext& ctx) {
  return q_multinomial_at(k, lambda, ctx.q());
}

FieldScalar q_binomial(unsigned n, unsigned m, const QContext& ctx) {
  check(m <= n, Errc::OutOfRange, "q_binomial needs 0 <= m <= n");
  return q_multinomial(n, WeakComposition{{m, n - m}}, ctx);
}

namespace {

void enumerate(unsigned k, unsigned l, std::vector<unsigned>& prefix,
               std::vector<WeakComposition>& out) {
  if (l == 1) {
    prefix.push_back(k);
    out.push_back(WeakComposition{prefix});
    prefix.pop_back();
    return;
  }
  for (unsigned first = 0; first <= k; ++first) {
    prefix.push_back(first);
    enumerate(k - first, l - 1, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<WeakComposition> weak_compositions(unsigned k, unsigned l) {
  check(l >= 1, Errc::OutOfRange, "weak_compositions needs l >= 1");
  std::vector<WeakComposition> out;
  std::vector<unsigned> prefix;
  enumerate(k, l, prefix, out);
  return out;
}

}  // namespace qqw
