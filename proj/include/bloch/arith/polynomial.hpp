#pragma once

// Dense univariate polynomials over Q, coefficients stored low degree first.
// The zero polynomial is the empty vector; every operation returns a trimmed
// result (no trailing zero coefficients).

#include <span>
#include <vector>

#include "bloch/arith/real.hpp"

namespace bloch {

using QPoly = std::vector<Rational>;

void trim(QPoly& p);
int degree(const QPoly& p);  // -1 for the zero polynomial
QPoly from_integers(std::span<const Integer> coeffs);

QPoly add(const QPoly& a, const QPoly& b);
QPoly sub(const QPoly& a, const QPoly& b);
QPoly mul(const QPoly& a, const QPoly& b);
QPoly scale(const QPoly& a, const Rational& s);
QPoly derivative(const QPoly& p);

struct QDivision {
  QPoly quotient;
  QPoly remainder;
};
QDivision divmod(const QPoly& a, const QPoly& b);

// Monic gcd.
QPoly gcd(const QPoly& a, const QPoly& b);

// Returns (g, s) with s*a = g (mod b), g the monic gcd of a and b.
struct HalfGcd {
  QPoly gcd;
  QPoly s;
};
HalfGcd extended_gcd(const QPoly& a, const QPoly& b);

Rational evaluate(const QPoly& p, const Rational& x);
Complex evaluate(const QPoly& p, const Complex& x);
Complex evaluate(std::span<const Integer> p, const Complex& x);

}  // namespace bloch
