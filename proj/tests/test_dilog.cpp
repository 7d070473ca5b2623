#include <gtest/gtest.h>

#include <random>

#include "bloch/arith/number_field.hpp"
#include "bloch/dilog.hpp"
#include "bloch/error.hpp"
#include "oracles.hpp"

using namespace bloch;

namespace {

Complex cx(double re, double im, long bits) { return {Real::from_double(re, bits), Real::from_double(im, bits)}; }

Complex unit_root(long num, long den, long bits) {
  Real a = pi(bits) * num / den;
  return {cos(a), sin(a)};
}

Real err(const Complex& a, const Complex& b) { return abs(a - b); }

}  // namespace

TEST(Li2, SpecialValues) {
  const long bits = 256;
  EXPECT_TRUE(abs(li2(Complex(bits), bits)).is_zero());
  Real z2 = pi(bits) * pi(bits) / 6;
  EXPECT_LT(err(li2(Complex(1, 0, bits), bits), Complex(z2)), pow2(-250, bits));
  Real l2 = log(Real(2, bits));
  Real closed = pi(bits) * pi(bits) / 12 - l2 * l2 / 2;
  Complex half(Rational(1, 2), Rational(0), bits);
  EXPECT_LT(err(li2(half, bits), Complex(closed)), pow2(-248, bits));
  // Li2(-1) = -pi^2/12, reached through the Bernoulli region
  EXPECT_LT(err(li2(Complex(-1, 0, bits), bits), Complex(-pi(bits) * pi(bits) / 12)), pow2(-248, bits));
}

TEST(Li2, MatchesQuadrature) {
  const long bits = 160;
  std::vector<Complex> points{cx(0.3, 0.4, bits), cx(0.66, 0.56, bits), cx(0.8, -0.5, bits), cx(-0.9, 0.2, bits),
                              cx(0.5, 0.866, bits), cx(1.3, 0.7, bits), cx(-3.0, -2.0, bits), cx(0.95, 0.1, bits)};
  for (const auto& z : points) {
    Complex q = oracle::li2_quadrature(z, bits);
    EXPECT_LT(err(li2(z, bits), q), pow2(-bits / 2, bits)) << z;
  }
}

TEST(Li2, PrincipalBranchOffDisk) {
  const long bits = 200;
  // values frozen from an independent implementation (mpmath polylog)
  Complex z = cx(2, 0.5, bits);
  Complex expect(Real::parse("1.75438526088378243710804329877029622870447092238315032705408", bits),
                 Real::parse("2.25385187609028841737619663313223911629274799581220908985701", bits));
  EXPECT_LT(err(li2(z, bits), expect), pow2(-190, bits));
}

TEST(BlochWigner, KnownValues) {
  const long bits = 256;
  Real expect = Real::parse("1.01494160640965362502120255427452028594168930753029979201749", bits);
  EXPECT_LT(abs(bloch_wigner(unit_root(1, 3, bits), bits) - expect), pow2(-190, bits));
  // maximum is attained at e^{i pi/3}; neighbours are smaller
  EXPECT_LT(bloch_wigner(unit_root(1, 3, bits) * Real::from_double(1.01, bits), bits), expect);
  EXPECT_TRUE(bloch_wigner(Complex(Rational(1, 3), Rational(0), bits), bits).is_zero());
  EXPECT_TRUE(bloch_wigner(Complex(-5, 0, bits), bits).is_zero());
  auto degenerate = [&](const Complex& z) {
    try {
      bloch_wigner(z, bits);
    } catch (const Error& e) {
      return e.code() == Errc::DegenerateShape;
    }
    return false;
  };
  EXPECT_TRUE(degenerate(Complex(bits)));
  EXPECT_TRUE(degenerate(Complex(1, 0, bits)));

  auto k = NumberField::make({1, -1, 0, 1});
  auto theta = embeddings(k, bits).complex_pairs[0];
  Real weeks = Real::parse("0.94270736277692772092129960309221164759032710576688316", bits);
  EXPECT_LT(abs(bloch_wigner(theta, bits) - weeks), Real::parse("1e-52", bits));
}

TEST(BlochWigner, QuadratureOracle) {
  const long bits = 160;
  Complex z = cx(0.4, 0.9, bits);
  Complex q = oracle::li2_quadrature(z, bits);
  Real d = q.im + log(abs(z)) * arg(1 - z);
  EXPECT_LT(abs(bloch_wigner(z, bits) - d), pow2(-bits / 2, bits));
}

TEST(BlochWigner, SymmetriesAndFiveTerm) {
  const long bits = 192;
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> dist(-3, 3);
  Real tol = pow2(-bits + 16, bits);
  for (int trial = 0; trial < 60; ++trial) {
    Complex x = cx(dist(rng), dist(rng), bits);
    Complex y = cx(dist(rng), dist(rng), bits);
    Real dx = bloch_wigner(x, bits);
    EXPECT_EQ(bloch_wigner(conj(x), bits), -dx);
    EXPECT_LT(abs(bloch_wigner(1 - inverse(x), bits) - dx), tol);
    EXPECT_LT(abs(bloch_wigner(inverse(1 - x), bits) - dx), tol);
    EXPECT_LT(abs(bloch_wigner(inverse(x), bits) + dx), tol);
    EXPECT_LT(abs(bloch_wigner(x / (x - Complex(1, 0, bits)), bits) + dx), tol);
    EXPECT_LT(abs(bloch_wigner(1 - x, bits) + dx), tol);
    Real five = dx - bloch_wigner(y, bits) + bloch_wigner(y / x, bits) -
                bloch_wigner((1 - inverse(x)) / (1 - inverse(y)), bits) + bloch_wigner((1 - x) / (1 - y), bits);
    EXPECT_LT(abs(five), tol);
  }
}

TEST(Rogers, Values) {
  const long bits = 256;
  Complex half(Rational(1, 2), Rational(0), bits);
  Complex r = rogers(half, bits);
  EXPECT_LT(err(r, Complex(pi(bits) * pi(bits) / 12)), pow2(-248, bits));
  EXPECT_TRUE(rogers(Complex(Rational(1, 5), Rational(0), bits), bits).im.is_zero());
  // R(z) + R(1-z) = pi^2/6, relying on the li2 reflection formula
  Complex z = cx(0.3, 0.7, bits);
  Complex s = rogers(z, bits) + rogers(1 - z, bits);
  EXPECT_LT(err(s, Complex(pi(bits) * pi(bits) / 6)), pow2(-240, bits));
}

TEST(Rho, Representatives) {
  const long bits = 256;
  auto real = rho(Complex(Rational(1, 3), Rational(0), bits), 0, 0, bits);
  EXPECT_TRUE(real.value.im.is_zero());
  Complex e3 = unit_root(1, 3, bits);
  auto r = rho(e3, 0, 0, bits);
  Real two_pi2 = 2 * pi(bits) * pi(bits);
  EXPECT_LT(abs(r.value.im * two_pi2 - bloch_wigner(e3, bits)), pow2(-240, bits));
  // At a root of unity, shifting the flattening by integers moves rho by a rational.
  auto shifted = rho(e3, 1, -2, bits);
  EXPECT_TRUE(r.equal_mod_rationals(shifted, 120, bits));
  auto generic = rho(cx(0.3, 0.7, bits), 0, 0, bits);
  auto generic_shift = rho(cx(0.3, 0.7, bits), 1, 0, bits);
  EXPECT_FALSE(generic.equal_mod_rationals(generic_shift, 120, bits));
}
