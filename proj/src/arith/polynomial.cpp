#include "bloch/arith/polynomial.hpp"

#include "bloch/error.hpp"

namespace bloch {

void trim(QPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

int degree(const QPoly& p) { return static_cast<int>(p.size()) - 1; }

QPoly from_integers(std::span<const Integer> coeffs) {
  QPoly p(coeffs.begin(), coeffs.end());
  trim(p);
  return p;
}

QPoly add(const QPoly& a, const QPoly& b) {
  QPoly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  trim(r);
  return r;
}

QPoly sub(const QPoly& a, const QPoly& b) {
  QPoly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  trim(r);
  return r;
}

QPoly mul(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  trim(r);
  return r;
}

QPoly scale(const QPoly& a, const Rational& s) {
  QPoly r(a);
  for (auto& c : r) c *= s;
  trim(r);
  return r;
}

QPoly derivative(const QPoly& p) {
  if (p.size() <= 1) return {};
  QPoly r(p.size() - 1);
  for (std::size_t i = 1; i < p.size(); ++i) r[i - 1] = p[i] * static_cast<long>(i);
  trim(r);
  return r;
}

QDivision divmod(const QPoly& a, const QPoly& b) {
  if (b.empty()) fail(Errc::DivisionByZero, "polynomial division by zero");
  QDivision out;
  out.remainder = a;
  trim(out.remainder);
  int db = degree(b);
  if (degree(out.remainder) < db) return out;
  out.quotient.assign(static_cast<std::size_t>(degree(out.remainder) - db + 1), Rational(0));
  const Rational& lead = b.back();
  while (degree(out.remainder) >= db) {
    int shift = degree(out.remainder) - db;
    Rational f = out.remainder.back() / lead;
    out.quotient[static_cast<std::size_t>(shift)] = f;
    for (int i = 0; i <= db; ++i) out.remainder[static_cast<std::size_t>(shift + i)] -= f * b[static_cast<std::size_t>(i)];
    trim(out.remainder);
  }
  trim(out.quotient);
  return out;
}

QPoly gcd(const QPoly& a, const QPoly& b) { return extended_gcd(a, b).gcd; }

HalfGcd extended_gcd(const QPoly& a, const QPoly& b) {
  QPoly r0 = a, r1 = b;
  trim(r0);
  trim(r1);
  QPoly s0{Rational(1)}, s1{};
  while (!r1.empty()) {
    auto [q, r] = divmod(r0, r1);
    QPoly s2 = sub(s0, mul(q, s1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  if (r0.empty()) return {{}, {}};
  Rational lead = r0.back();
  return {scale(r0, 1 / lead), scale(s0, 1 / lead)};
}

Rational evaluate(const QPoly& p, const Rational& x) {
  Rational acc(0);
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Complex evaluate(const QPoly& p, const Complex& x) {
  long bits = x.precision();
  Complex acc(bits);
  for (auto it = p.rbegin(); it != p.rend(); ++it) {
    acc *= x;
    acc.re += Real(*it, bits);
  }
  return acc;
}

Complex evaluate(std::span<const Integer> p, const Complex& x) {
  long bits = x.precision();
  Complex acc(bits);
  for (auto it = p.rbegin(); it != p.rend(); ++it) {
    acc *= x;
    acc.re += Real(*it, bits);
  }
  return acc;
}

}  // namespace bloch
