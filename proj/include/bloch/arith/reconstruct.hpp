#pragma once

// Recovering exact data from high-precision numbers: rational reconstruction
// by continued fractions and integer relations by lattice reduction.

#include <optional>
#include <vector>

#include "bloch/arith/real.hpp"

namespace bloch {

// The continued-fraction convergent p/q of x with q <= max_den and
// |x - p/q| <= tol, or nullopt. When tol < 1/(2 max_den^2) this finds every
// rational within tol of x with denominator at most max_den.
std::optional<Rational> best_rational(const Real& x, const Integer& max_den, const Real& tol);

struct IntegerRelation {
  std::vector<Integer> coeffs;  // coprime, first nonzero entry positive
  Real residual;                // Euclidean norm of sum coeffs[i] * vectors[i]
};

// Small a != 0 with sum a_i * vectors[i] ~ 0. Reduces the lattice with rows
// (e_i | round(2^scale_bits * vectors[i])) and returns the shortest reduced
// row whose residual is at most tol and whose entries are bounded by
// coeff_bound. All vectors must have the same length.
std::optional<IntegerRelation> find_integer_relation(const std::vector<std::vector<Real>>& vectors, long scale_bits,
                                                     const Integer& coeff_bound, const Real& tol);

// Divide by the gcd and make the first nonzero entry positive.
std::vector<Integer> normalize_relation(std::vector<Integer> v);

}  // namespace bloch
