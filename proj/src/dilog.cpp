#include "bloch/dilog.hpp"

#include <map>
#include <mutex>
#include <vector>

#include "bloch/arith/reconstruct.hpp"
#include "bloch/error.hpp"

namespace bloch {

namespace {

constexpr long kGuard = 32;

bool is_exact_zero(const Complex& z) { return z.re.is_zero() && z.im.is_zero(); }
bool is_exact_one(const Complex& z) { return z.im.is_zero() && z.re == Real(1, z.re.precision()); }

// Coefficients B_n / (n+1)! of Li2(z) = sum_n a_n u^(n+1), u = -log(1-z).
class BernoulliTable {
 public:
  // Real coefficients a_0..a_{count-1} at the given precision.
  std::vector<Real> coefficients(std::size_t count, long bits) {
    std::lock_guard<std::mutex> lock(mutex_);
    extend(count);
    auto& cached = reals_[bits];
    while (cached.size() < count) {
      std::size_t n = cached.size();
      cached.emplace_back(bernoulli_[n] / factorial(n + 1), bits);
    }
    return {cached.begin(), cached.begin() + static_cast<std::ptrdiff_t>(count)};
  }

 private:
  static Rational factorial(std::size_t n) {
    Integer f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return Rational(f);
  }

  void extend(std::size_t count) {
    if (bernoulli_.empty()) {
      bernoulli_.emplace_back(1);
      bernoulli_.emplace_back(-1, 2);
    }
    while (bernoulli_.size() < count) {
      std::size_t m = bernoulli_.size();
      if (m % 2 == 1) {
        bernoulli_.emplace_back(0);
        continue;
      }
      // sum_{k=0}^{m} C(m+1, k) B_k = 0
      Rational s = Rational(static_cast<long>(m + 1)) * bernoulli_[1];
      for (std::size_t k = 0; k < m; k += 2) {
        Integer c;
        mpz_bin_uiui(c.get_mpz_t(), m + 1, k);
        s += Rational(c) * bernoulli_[k];
      }
      bernoulli_.push_back(-s / Rational(static_cast<long>(m + 1)));
    }
  }

  std::mutex mutex_;
  std::vector<Rational> bernoulli_;
  std::map<long, std::vector<Real>> reals_;
};

BernoulliTable& bernoulli_table() {
  static BernoulliTable table;
  return table;
}

Complex power_series(const Complex& w, long work) {
  Complex sum(work), power = w;
  Real eps = pow2(-work - 4, work);
  for (long n = 1;; ++n) {
    Complex term = power / (n * n);
    sum += term;
    if (abs(term) < eps) break;
    power *= w;
  }
  return sum;
}

Complex bernoulli_series(const Complex& w, long work) {
  Complex u = -log(1 - w);
  // |u| < 1.8 in the region this is used, so terms decay at least like 0.3^n.
  std::size_t count = static_cast<std::size_t>(work / 1.5) + 8;
  std::vector<Real> a = bernoulli_table().coefficients(count, work);
  Real eps = pow2(-work - 4, work);
  Complex sum = u * a[0];
  Complex power = u;
  for (std::size_t n = 1; n < count; ++n) {
    power *= u;
    if (a[n].is_zero()) continue;
    Complex term = power * a[n];
    sum += term;
    if (n >= 2 && abs(term) < eps) break;
  }
  return sum;
}

// Li2 for |w| <= 1, w != 1.
Complex li2_disk(const Complex& w, long work) {
  Real half = Real(1, work) / 2;
  if (abs(w) <= half) return power_series(w, work);
  Complex v = 1 - w;
  if (abs(v) <= half) {
    Real zeta2 = pi(work) * pi(work) / 6;
    return Complex(zeta2) - log(w) * log(v) - power_series(v, work);
  }
  return bernoulli_series(w, work);
}

void require_nondegenerate(const Complex& z) {
  if (is_exact_zero(z) || is_exact_one(z)) fail(Errc::DegenerateShape, "shape parameter is 0 or 1");
}

}  // namespace

Complex li2(const Complex& z, long bits) {
  const long work = bits + kGuard;
  Complex w = z.rounded(work);
  if (is_exact_zero(w)) return Complex(bits);
  Real zeta2 = pi(work) * pi(work) / 6;
  if (is_exact_one(w)) return Complex(zeta2).rounded(bits);
  Complex result(work);
  if (abs(w) <= Real(1, work)) {
    result = li2_disk(w, work);
  } else {
    // Li2(z) = -Li2(1/z) - pi^2/6 - 1/2 log^2(-z)
    Complex l = log(-w);
    result = -li2_disk(inverse(w), work) - Complex(zeta2) - l * l / 2;
  }
  return result.rounded(bits);
}

Real bloch_wigner(const Complex& z, long bits) {
  require_nondegenerate(z);
  if (z.im.is_zero()) return Real(bits);
  // evaluate in the upper half plane so that D2(conj z) = -D2(z) bit for bit
  if (z.im.sign() < 0) return -bloch_wigner(conj(z), bits);
  const long work = bits + kGuard;
  Complex w = z.rounded(work);
  Real value = li2(w, work).im + log(abs(w)) * arg(1 - w);
  return value.rounded(bits);
}

Complex rogers(const Complex& z, long bits) {
  require_nondegenerate(z);
  const long work = bits + kGuard;
  Complex w = z.rounded(work);
  Complex value = log(w) * log(1 - w) / 2 + li2(w, work);
  return value.rounded(bits);
}

RhoRepresentative rho(const Complex& z, const Rational& c_prime, const Rational& c_double_prime, long bits) {
  require_nondegenerate(z);
  const long work = bits + kGuard;
  Complex w = z.rounded(work);
  Real p = pi(work);
  Complex flat = log(1 - w) * Real(c_prime, work) - log(w) * Real(c_double_prime, work);
  Complex bracket = rogers(w, work) - times_i(flat) * p / 2;
  Complex value = bracket / (2 * p * p);
  return {value.rounded(bits)};
}

bool RhoRepresentative::equal_mod_rationals(const RhoRepresentative& other, const Integer& max_den, long bits) const {
  Complex d = value - other.value;
  Real tol = pow2(-bits / 2, bits);
  if (abs(d.im) > tol) return false;
  return best_rational(d.re, max_den, tol).has_value();
}

}  // namespace bloch
