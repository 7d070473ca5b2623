#pragma once

// Chern-Simons invariants from shapes and a flattening c of U c = d:
//   vol + i CS = alpha - (pi/2) sum lambda_j
//                - i sum (R(z) - (i pi/2)(c'_nu log(1-z_nu) - c''_nu log z_nu)),
// evaluated with alpha = 0, plus reconstruction of rational multiples of pi^2.

#include <optional>
#include <vector>

#include "bloch/arith/linalg.hpp"
#include "bloch/dilog.hpp"

namespace bloch {

struct FlatteningSolution {
  std::vector<Rational> c;  // (c'_1..c'_n, c''_1..c''_n)
  bool integral = false;

  std::size_t n() const { return c.size() / 2; }
  const Rational& c_prime(std::size_t v) const { return c[v]; }
  const Rational& c_double_prime(std::size_t v) const { return c[n() + v]; }
};

// An integral solution if one exists, else a rational one. Throws
// Inconsistent when d is not in the column space of U.
FlatteningSolution solve_flattening(const IntMatrix& u, const std::vector<Integer>& d);

struct CSResult {
  Complex value;  // vol + i CS - alpha
  Real vol;       // Re(value)
  Real cs;        // Im(value), a representative of CS modulo pi^2 Q
  // Im(value) / (2 pi^2) reduced into [0, 1/2)
  Real normalized() const;
};

// lambdas: one per cusp, 0 for unfilled cusps. Throws DegenerateShape.
CSResult cs_formula(const std::vector<Complex>& shapes, const std::vector<Complex>& lambdas,
                    const FlatteningSolution& c, long bits);

// (i / 2 pi^2) times the formula without the lambda terms, as a C/Q class.
RhoRepresentative rho_of_beta(const std::vector<Complex>& shapes, const FlatteningSolution& c, long bits);

// (1/2 pi^2) CS = (3/2) eta modulo 1/2 for closed manifolds: the value is
// passed through unchanged and is meaningful only modulo 1/2.
Real eta_from_cs(const Real& cs_over_2pi2);

// x mod 1/2 in [0, 1/2)
Real reduce_mod_half(const Real& x);

// The rational r with |x - r pi^2| <= tol and denominator at most max_den,
// or nullopt. The default tolerance is 2^(-precision/2).
std::optional<Rational> rationalize_mod_pi2(const Real& x, const Integer& max_den);
std::optional<Rational> rationalize_mod_pi2(const Real& x, const Integer& max_den, const Real& tol);

// alpha / (i pi^2), fitted so that the calibrated CS matches a known value of
// (1/2 pi^2) CS modulo 1/2, known to within `tol`. Reduced into [0, 1).
std::optional<Rational> fit_alpha(const CSResult& computed, const Real& known_cs_over_2pi2, const Integer& max_den,
                                  const Real& tol);

// CS / (2 pi^2) of the calibrated value, reduced modulo 1/2.
Real calibrated_cs(const CSResult& computed, const Rational& alpha_over_i_pi2);

}  // namespace bloch
