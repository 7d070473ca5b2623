#include "bloch/cs.hpp"

#include <algorithm>

#include "bloch/arith/reconstruct.hpp"
#include "bloch/error.hpp"

namespace bloch {

FlatteningSolution solve_flattening(const IntMatrix& u, const std::vector<Integer>& d) {
  if (d.size() != u.rows()) fail(Errc::DimensionMismatch, "d must have one entry per row of U");
  if (u.cols() % 2 != 0) fail(Errc::DimensionMismatch, "U must have an even number of columns");
  FlatteningSolution sol;
  if (auto x = solve_integral(u, d)) {
    for (const auto& v : *x) sol.c.emplace_back(v);
    sol.integral = true;
    return sol;
  }
  auto x = solve_rational(u, d);
  if (!x) fail(Errc::Inconsistent, "U c = d has no rational solution; the gluing data is invalid");
  sol.c = std::move(*x);
  sol.integral = std::all_of(sol.c.begin(), sol.c.end(), [](const Rational& q) { return q.get_den() == 1; });
  return sol;
}

namespace {

// sum R(z) - (i pi / 2)(c' log(1-z) - c'' log z)
Complex flattened_sum(const std::vector<Complex>& shapes, const FlatteningSolution& c, long bits) {
  if (c.c.size() != 2 * shapes.size()) fail(Errc::DimensionMismatch, "flattening does not match the shapes");
  Complex sum(bits);
  Real half_pi = pi(bits) / 2;
  for (std::size_t v = 0; v < shapes.size(); ++v) {
    const Complex& z = shapes[v];
    Complex one(1, 0, bits);
    if (abs(z).is_zero() || abs(z - one).is_zero()) fail(Errc::DegenerateShape, "shape is 0 or 1");
    Complex inner = log(1 - z) * Real(c.c_prime(v), bits) - log(z) * Real(c.c_double_prime(v), bits);
    sum += rogers(z, bits) - times_i(inner) * half_pi;
  }
  return sum;
}

}  // namespace

Real CSResult::normalized() const {
  Real p = pi(cs.precision());
  return reduce_mod_half(cs / (2 * p * p));
}

CSResult cs_formula(const std::vector<Complex>& shapes, const std::vector<Complex>& lambdas,
                    const FlatteningSolution& c, long bits) {
  Complex value = -times_i(flattened_sum(shapes, c, bits));
  Real half_pi = pi(bits) / 2;
  for (const auto& l : lambdas) value -= l * half_pi;
  return CSResult{value, value.re, value.im};
}

RhoRepresentative rho_of_beta(const std::vector<Complex>& shapes, const FlatteningSolution& c, long bits) {
  Real p = pi(bits);
  return RhoRepresentative{flattened_sum(shapes, c, bits) / (2 * p * p)};
}

Real eta_from_cs(const Real& cs_over_2pi2) { return cs_over_2pi2; }

Real reduce_mod_half(const Real& x) {
  Real twice = x * 2;
  return (twice - floor(twice)) / 2;
}

std::optional<Rational> rationalize_mod_pi2(const Real& x, const Integer& max_den, const Real& tol) {
  const long bits = x.precision();
  Real p = pi(bits + 16);
  Real y = x / (p * p);
  auto r = best_rational(y, max_den, tol / (p * p));
  return r;
}

std::optional<Rational> rationalize_mod_pi2(const Real& x, const Integer& max_den) {
  return rationalize_mod_pi2(x, max_den, pow2(-x.precision() / 2, x.precision()));
}

std::optional<Rational> fit_alpha(const CSResult& computed, const Real& known_cs_over_2pi2, const Integer& max_den,
                                  const Real& tol) {
  const long bits = computed.cs.precision();
  Real p = pi(bits);
  Real pi2 = p * p;
  Real current = computed.cs / (2 * pi2);
  // alpha = i r pi^2 shifts CS / 2 pi^2 by r / 2, so r = 2 (known - current) modulo 1
  Real gap = reduce_mod_half(known_cs_over_2pi2 - current);
  auto r = rationalize_mod_pi2(gap * 2 * pi2, max_den, tol * 2 * pi2);
  if (!r) return std::nullopt;
  Rational q = *r;
  while (q < 0) q += 1;
  while (q >= 1) q -= 1;
  return q;
}

Real calibrated_cs(const CSResult& computed, const Rational& alpha_over_i_pi2) {
  const long bits = computed.cs.precision();
  Real p = pi(bits);
  return reduce_mod_half(computed.cs / (2 * p * p) + Real(alpha_over_i_pi2, bits) / 2);
}

}  // namespace bloch
