#pragma once

// Dilogarithm family: Li2, the Bloch-Wigner function D2, the Rogers
// dilogarithm R and the flattened Bloch regulator representative.

#include "bloch/arith/real.hpp"

namespace bloch {

// Principal branch of Li2(z) = -int_0^z log(1-t)/t dt.
Complex li2(const Complex& z, long bits);

// D2(z) = Im Li2(z) + log|z| arg(1-z). Zero on the real line; throws
// DegenerateShape for z in {0, 1}.
Real bloch_wigner(const Complex& z, long bits);

// R(z) = 1/2 log z log(1-z) + Li2(z), principal logs.
Complex rogers(const Complex& z, long bits);

// A complex number standing for a class in C/Q.
struct RhoRepresentative {
  Complex value;

  // The difference is real and within 2^(-bits/2) of a rational with
  // denominator at most max_den.
  bool equal_mod_rationals(const RhoRepresentative& other, const Integer& max_den, long bits) const;
};

// (1/2pi^2) [R(z) - (i pi/2)(c' log(1-z) - c'' log z)]. Summed over the shapes
// of a triangulation with a flattening this is (i/2pi^2)(vol + i CS) modulo Q.
RhoRepresentative rho(const Complex& z, const Rational& c_prime, const Rational& c_double_prime, long bits);

}  // namespace bloch
