#include "bloch/arith/real.hpp"

#include <cctype>
#include <ostream>
#include <string>

#include "bloch/error.hpp"

namespace bloch {

namespace {

constexpr mpfr_rnd_t kRnd = MPFR_RNDN;

long max_prec(const Real& a, const Real& b) { return std::max(a.precision(), b.precision()); }

}  // namespace

Real::Real(long bits) {
  mpfr_init2(v_, std::max<long>(bits, MPFR_PREC_MIN));
  mpfr_set_zero(v_, 1);
}

Real::Real(long value, long bits) : Real(bits) { mpfr_set_si(v_, value, kRnd); }

Real::Real(const Rational& value, long bits) : Real(bits) { mpfr_set_q(v_, value.get_mpq_t(), kRnd); }

Real::Real(const Integer& value, long bits) : Real(bits) { mpfr_set_z(v_, value.get_mpz_t(), kRnd); }

Real Real::from_double(double value, long bits) {
  Real r(bits);
  mpfr_set_d(r.v_, value, kRnd);
  return r;
}

Real Real::parse(std::string_view text, long bits) {
  std::string s(text);
  Real r(bits);
  char* end = nullptr;
  if (!s.empty()) mpfr_strtofr(r.v_, s.c_str(), &end, 10, kRnd);
  if (s.empty() || end == s.c_str() || *end != '\0') {
    fail(Errc::SyntaxError, "not a decimal number: '" + s + "'");
  }
  return r;
}

Real::Real(const Real& other) {
  mpfr_init2(v_, mpfr_get_prec(other.v_));
  mpfr_set(v_, other.v_, kRnd);
}

Real::Real(Real&& other) noexcept {
  mpfr_init2(v_, MPFR_PREC_MIN);
  mpfr_swap(v_, other.v_);
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    mpfr_set_prec(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, kRnd);
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  mpfr_swap(v_, other.v_);
  return *this;
}

Real::~Real() { mpfr_clear(v_); }

Real Real::rounded(long bits) const {
  Real r(bits);
  mpfr_set(r.v_, v_, kRnd);
  return r;
}

void Real::grow_to(long bits) {
  if (bits > precision()) mpfr_prec_round(v_, bits, kRnd);
}

std::string Real::to_fixed(int digits) const {
  if (mpfr_nan_p(v_)) return "nan";
  if (mpfr_inf_p(v_)) return sign() < 0 ? "-inf" : "inf";
  std::string fmt = "%." + std::to_string(digits) + "Rf";
  int n = mpfr_snprintf(nullptr, 0, fmt.c_str(), v_);
  std::string out(static_cast<std::size_t>(n) + 1, '\0');
  mpfr_snprintf(out.data(), out.size(), fmt.c_str(), v_);
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::string Real::to_exact_string() const {
  if (is_zero()) return "0";
  mpfr_exp_t e = 0;
  char* raw = mpfr_get_str(nullptr, &e, 10, 0, v_, kRnd);
  std::string digits(raw);
  mpfr_free_str(raw);
  bool neg = !digits.empty() && digits[0] == '-';
  if (neg) digits.erase(0, 1);
  while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
  std::string out = neg ? "-" : "";
  const long k = static_cast<long>(e) - 1;  // decimal exponent of the leading digit
  if (k >= -5 && k <= 20) {
    if (k < 0) {
      out += "0." + std::string(static_cast<std::size_t>(-k - 1), '0') + digits;
    } else {
      const std::size_t int_len = static_cast<std::size_t>(k) + 1;
      if (digits.size() < int_len) digits.append(int_len - digits.size(), '0');
      out += digits.substr(0, int_len);
      if (digits.size() > int_len) out += "." + digits.substr(int_len);
    }
    return out;
  }
  out += digits.substr(0, 1);
  if (digits.size() > 1) out += "." + digits.substr(1);
  out += "e" + std::to_string(k);
  return out;
}

long Real::exponent() const {
  if (is_zero()) return -(1L << 40);
  return static_cast<long>(mpfr_get_exp(v_));
}

Real Real::operator-() const {
  Real r(precision());
  mpfr_neg(r.v_, v_, kRnd);
  return r;
}

Real& Real::operator+=(const Real& o) {
  grow_to(o.precision());
  mpfr_add(v_, v_, o.v_, kRnd);
  return *this;
}

Real& Real::operator-=(const Real& o) {
  grow_to(o.precision());
  mpfr_sub(v_, v_, o.v_, kRnd);
  return *this;
}

Real& Real::operator*=(const Real& o) {
  grow_to(o.precision());
  mpfr_mul(v_, v_, o.v_, kRnd);
  return *this;
}

Real& Real::operator/=(const Real& o) {
  grow_to(o.precision());
  mpfr_div(v_, v_, o.v_, kRnd);
  return *this;
}

Real& Real::operator*=(long o) {
  mpfr_mul_si(v_, v_, o, kRnd);
  return *this;
}

Real& Real::operator/=(long o) {
  mpfr_div_si(v_, v_, o, kRnd);
  return *this;
}

std::partial_ordering operator<=>(const Real& a, const Real& b) {
  if (mpfr_unordered_p(a.v_, b.v_)) return std::partial_ordering::unordered;
  int c = mpfr_cmp(a.v_, b.v_);
  if (c < 0) return std::partial_ordering::less;
  if (c > 0) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}

std::ostream& operator<<(std::ostream& os, const Real& x) { return os << x.to_exact_string(); }

Real pi(long bits) {
  Real r(bits);
  mpfr_const_pi(r.get(), kRnd);
  return r;
}

Real abs(const Real& x) {
  Real r(x.precision());
  mpfr_abs(r.get(), x.get(), kRnd);
  return r;
}

Real sqrt(const Real& x) {
  Real r(x.precision());
  mpfr_sqrt(r.get(), x.get(), kRnd);
  return r;
}

Real exp(const Real& x) {
  Real r(x.precision());
  mpfr_exp(r.get(), x.get(), kRnd);
  return r;
}

Real log(const Real& x) {
  Real r(x.precision());
  mpfr_log(r.get(), x.get(), kRnd);
  return r;
}

Real sin(const Real& x) {
  Real r(x.precision());
  mpfr_sin(r.get(), x.get(), kRnd);
  return r;
}

Real cos(const Real& x) {
  Real r(x.precision());
  mpfr_cos(r.get(), x.get(), kRnd);
  return r;
}

Real atan2(const Real& y, const Real& x) {
  Real r(max_prec(y, x));
  mpfr_atan2(r.get(), y.get(), x.get(), kRnd);
  return r;
}

Real floor(const Real& x) {
  Real r(x.precision());
  mpfr_floor(r.get(), x.get());
  return r;
}

Real ldexp(const Real& x, long e) {
  Real r(x.precision());
  mpfr_mul_2si(r.get(), x.get(), e, kRnd);
  return r;
}

Real pow2(long e, long bits) {
  Real r(1, bits);
  mpfr_mul_2si(r.get(), r.get(), e, kRnd);
  return r;
}

Integer round_to_integer(const Real& x) {
  Integer z;
  mpfr_get_z(z.get_mpz_t(), x.get(), MPFR_RNDN);
  return z;
}

Rational to_rational(const Real& x) {
  if (x.is_zero()) return Rational(0);
  Integer m;
  mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), x.get());
  Rational q(m);
  if (e >= 0) {
    mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
  } else {
    mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
  }
  return q;
}

// ---------------------------------------------------------------------------

Complex::Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

Complex::Complex(const Real& r) : re(r), im(r.precision()) {}

Complex& Complex::operator+=(const Complex& o) {
  re += o.re;
  im += o.im;
  return *this;
}

Complex& Complex::operator-=(const Complex& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}

Complex& Complex::operator*=(const Complex& o) {
  Real r = re * o.re - im * o.im;
  Real i = re * o.im + im * o.re;
  re = std::move(r);
  im = std::move(i);
  return *this;
}

Complex& Complex::operator/=(const Complex& o) {
  Real den = o.re * o.re + o.im * o.im;
  if (den.is_zero()) fail(Errc::DivisionByZero, "complex division by zero");
  Real r = (re * o.re + im * o.im) / den;
  Real i = (im * o.re - re * o.im) / den;
  re = std::move(r);
  im = std::move(i);
  return *this;
}

Complex& Complex::operator*=(const Real& o) {
  re *= o;
  im *= o;
  return *this;
}

Complex& Complex::operator/=(const Real& o) {
  re /= o;
  im /= o;
  return *this;
}

Complex& Complex::operator*=(long o) {
  re *= o;
  im *= o;
  return *this;
}

Complex& Complex::operator/=(long o) {
  re /= o;
  im /= o;
  return *this;
}

std::ostream& operator<<(std::ostream& os, const Complex& z) {
  os << z.re;
  if (z.im.sign() >= 0) os << '+';
  return os << z.im << 'i';
}

Complex conj(const Complex& z) { return {z.re, -z.im}; }

Real norm(const Complex& z) { return z.re * z.re + z.im * z.im; }

Real abs(const Complex& z) {
  Real r(z.precision());
  mpfr_hypot(r.get(), z.re.get(), z.im.get(), kRnd);
  return r;
}

Real arg(const Complex& z) {
  // signed zero imaginary parts are treated as +0, so arg(-1) = pi
  if (z.im.is_zero()) return atan2(Real(z.im.precision()), z.re);
  return atan2(z.im, z.re);
}

Complex log(const Complex& z) {
  if (z.re.is_zero() && z.im.is_zero()) fail(Errc::DivisionByZero, "log of zero");
  return {log(abs(z)), arg(z)};
}

Complex exp(const Complex& z) {
  Real m = exp(z.re);
  return {m * cos(z.im), m * sin(z.im)};
}

Complex sqrt(const Complex& z) {
  long bits = z.precision();
  if (z.re.is_zero() && z.im.is_zero()) return Complex(bits);
  // sqrt(z) = sqrt((|z|+re)/2) + i sign(im) sqrt((|z|-re)/2)
  Real m = abs(z);
  Real a = sqrt((m + z.re) / 2);
  Real b = sqrt((m - z.re) / 2);
  if (z.im.sign() < 0) b = -b;
  return {a, b};
}

Complex inverse(const Complex& z) { return Complex(1, 0, z.precision()) / z; }

Complex pow(const Complex& z, long n) {
  if (n < 0) return pow(inverse(z), -n);
  Complex result(1, 0, z.precision());
  Complex base = z;
  while (n > 0) {
    if (n & 1) result *= base;
    n >>= 1;
    if (n > 0) base *= base;
  }
  return result;
}

Complex times_i(const Complex& z) { return {-z.im, z.re}; }

Complex i_unit(long bits) { return Complex(0, 1, bits); }

bool near(const Complex& a, const Complex& b, const Real& tol) { return abs(a - b) <= tol; }

}  // namespace bloch
