#pragma once

// Arbitrary-precision real and complex numbers on top of MPFR.
//
// Every constructor takes the binary precision explicitly. Binary operations
// produce a result at the larger of the two operand precisions, so mixing
// precisions never silently loses bits.

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <compare>
#include <iosfwd>
#include <string>
#include <string_view>

namespace bloch {

using Integer = mpz_class;
using Rational = mpq_class;

class Real {
 public:
  explicit Real(long bits);
  Real(long value, long bits);
  Real(const Rational& value, long bits);
  Real(const Integer& value, long bits);
  static Real from_double(double value, long bits);
  // Decimal literal such as "-1.25e-3"; throws Error(SyntaxError) on junk.
  static Real parse(std::string_view text, long bits);

  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  long precision() const { return static_cast<long>(mpfr_get_prec(v_)); }
  Real rounded(long bits) const;

  mpfr_srcptr get() const { return v_; }
  mpfr_ptr get() { return v_; }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  // Fixed-point decimal with `digits` digits after the point.
  std::string to_fixed(int digits) const;
  // Shortest decimal that reads back to the same value at this precision.
  std::string to_exact_string() const;

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  // floor(log2|x|) + 1, or a very negative number for zero.
  long exponent() const;

  Real operator-() const;
  Real& operator+=(const Real& o);
  Real& operator-=(const Real& o);
  Real& operator*=(const Real& o);
  Real& operator/=(const Real& o);
  Real& operator*=(long o);
  Real& operator/=(long o);

  friend Real operator+(Real a, const Real& b) { return a += b; }
  friend Real operator-(Real a, const Real& b) { return a -= b; }
  friend Real operator*(Real a, const Real& b) { return a *= b; }
  friend Real operator/(Real a, const Real& b) { return a /= b; }
  friend Real operator*(Real a, long b) { return a *= b; }
  friend Real operator*(long b, Real a) { return a *= b; }
  friend Real operator/(Real a, long b) { return a /= b; }
  friend Real operator+(Real a, long b) { return a += Real(b, a.precision()); }
  friend Real operator+(long b, Real a) { return a += Real(b, a.precision()); }
  friend Real operator-(Real a, long b) { return a -= Real(b, a.precision()); }
  friend Real operator-(long b, const Real& a) { return Real(b, a.precision()) - a; }

  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend std::partial_ordering operator<=>(const Real& a, const Real& b);

 private:
  void grow_to(long bits);
  mpfr_t v_;
};

std::ostream& operator<<(std::ostream& os, const Real& x);

Real pi(long bits);
Real abs(const Real& x);
Real sqrt(const Real& x);
Real exp(const Real& x);
Real log(const Real& x);
Real sin(const Real& x);
Real cos(const Real& x);
Real atan2(const Real& y, const Real& x);
Real floor(const Real& x);
Real ldexp(const Real& x, long e);
// Power of two 2^e at the given precision.
Real pow2(long e, long bits);
Integer round_to_integer(const Real& x);
Rational to_rational(const Real& x);

class Complex {
 public:
  explicit Complex(long bits) : re(bits), im(bits) {}
  Complex(Real r, Real i);
  explicit Complex(const Real& r);
  Complex(long r, long i, long bits) : re(r, bits), im(i, bits) {}
  Complex(const Rational& r, const Rational& i, long bits) : re(r, bits), im(i, bits) {}

  long precision() const { return std::max(re.precision(), im.precision()); }
  Complex rounded(long bits) const { return {re.rounded(bits), im.rounded(bits)}; }

  Complex operator-() const { return {-re, -im}; }
  Complex& operator+=(const Complex& o);
  Complex& operator-=(const Complex& o);
  Complex& operator*=(const Complex& o);
  Complex& operator/=(const Complex& o);
  Complex& operator*=(const Real& o);
  Complex& operator/=(const Real& o);
  Complex& operator*=(long o);
  Complex& operator/=(long o);

  friend Complex operator+(Complex a, const Complex& b) { return a += b; }
  friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
  friend Complex operator*(Complex a, const Complex& b) { return a *= b; }
  friend Complex operator/(Complex a, const Complex& b) { return a /= b; }
  friend Complex operator*(Complex a, const Real& b) { return a *= b; }
  friend Complex operator*(const Real& b, Complex a) { return a *= b; }
  friend Complex operator/(Complex a, const Real& b) { return a /= b; }
  friend Complex operator*(Complex a, long b) { return a *= b; }
  friend Complex operator*(long b, Complex a) { return a *= b; }
  friend Complex operator/(Complex a, long b) { return a /= b; }
  friend Complex operator+(Complex a, long b) { a.re += Real(b, a.re.precision()); return a; }
  friend Complex operator-(long b, const Complex& a) { return Complex(b, 0, a.precision()) - a; }

  friend bool operator==(const Complex& a, const Complex& b) { return a.re == b.re && a.im == b.im; }

  Real re;
  Real im;
};

std::ostream& operator<<(std::ostream& os, const Complex& z);

Complex conj(const Complex& z);
Real norm(const Complex& z);  // |z|^2
Real abs(const Complex& z);
Real arg(const Complex& z);   // in (-pi, pi]
Complex log(const Complex& z);  // principal branch
Complex exp(const Complex& z);
Complex sqrt(const Complex& z);  // principal branch
Complex inverse(const Complex& z);
Complex pow(const Complex& z, long n);
// i * x
Complex times_i(const Complex& z);
Complex i_unit(long bits);
// |a - b| <= tol
bool near(const Complex& a, const Complex& b, const Real& tol);

}  // namespace bloch
