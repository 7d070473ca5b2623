#include "bloch/arith/reconstruct.hpp"

#include "bloch/arith/linalg.hpp"
#include "bloch/error.hpp"

namespace bloch {

std::optional<Rational> best_rational(const Real& x, const Integer& max_den, const Real& tol) {
  const long bits = x.precision();
  Rational r = to_rational(x);  // exact value of the binary float
  Integer h2 = 0, h1 = 1, k2 = 1, k1 = 0;
  for (;;) {
    Integer a;
    mpz_fdiv_q(a.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    Integer h = a * h1 + h2;
    Integer k = a * k1 + k2;
    if (k > max_den) return std::nullopt;
    Rational candidate(h, k);
    candidate.canonicalize();
    if (abs(x - Real(candidate, bits)) <= tol) return candidate;
    Rational frac = r - Rational(a);
    if (frac == 0) return std::nullopt;
    r = 1 / frac;
    h2 = h1;
    h1 = h;
    k2 = k1;
    k1 = k;
  }
}

std::vector<Integer> normalize_relation(std::vector<Integer> v) {
  Integer g = gcd_of(v);
  if (g == 0) return v;
  for (auto& x : v) x /= g;
  for (const auto& x : v) {
    if (x == 0) continue;
    if (x < 0) {
      for (auto& y : v) y = -y;
    }
    break;
  }
  return v;
}

std::optional<IntegerRelation> find_integer_relation(const std::vector<std::vector<Real>>& vectors, long scale_bits,
                                                     const Integer& coeff_bound, const Real& tol) {
  const std::size_t m = vectors.size();
  if (m < 2) fail(Errc::InvalidArgument, "integer relation search needs at least two vectors");
  const std::size_t len = vectors[0].size();
  long bits = 64;
  for (const auto& v : vectors) {
    if (v.size() != len) fail(Errc::DimensionMismatch, "relation vectors differ in length");
    for (const auto& x : v) bits = std::max(bits, x.precision());
  }
  IntMatrix basis(m, m + len, Integer(0));
  for (std::size_t i = 0; i < m; ++i) {
    basis(i, i) = 1;
    for (std::size_t j = 0; j < len; ++j) basis(i, m + j) = round_to_integer(ldexp(vectors[i][j], scale_bits));
  }
  IntMatrix reduced = lll_reduce(basis);

  std::optional<IntegerRelation> best;
  Integer best_norm = 0;
  for (std::size_t r = 0; r < reduced.rows(); ++r) {
    std::vector<Integer> a(m);
    bool zero = true, bounded = true;
    for (std::size_t i = 0; i < m; ++i) {
      a[i] = reduced(r, i);
      if (a[i] != 0) zero = false;
      if (abs(a[i]) > coeff_bound) bounded = false;
    }
    if (zero || !bounded) continue;
    a = normalize_relation(std::move(a));
    Real sq(bits);
    for (std::size_t j = 0; j < len; ++j) {
      Real s(bits);
      for (std::size_t i = 0; i < m; ++i) s += vectors[i][j] * Real(a[i], bits);
      sq += s * s;
    }
    Real residual = sqrt(sq);
    if (residual > tol) continue;
    Integer n2 = dot(a, a);
    if (!best || n2 < best_norm) {
      best = IntegerRelation{a, residual};
      best_norm = n2;
    }
  }
  return best;
}

}  // namespace bloch
