#include "bloch/arith/number_field.hpp"

#include <algorithm>
#include <sstream>

#include "bloch/arith/linalg.hpp"
#include "bloch/error.hpp"

namespace bloch {

namespace {

// Simultaneous Aberth iteration followed by per-root Newton polishing.
// Roots are returned unsorted; real roots have an exactly zero imaginary part.
std::vector<Complex> polished_roots(const std::vector<Integer>& f, long bits) {
  const int d = static_cast<int>(f.size()) - 1;
  if (d == 1) {
    Integer c = -f[0];
    return {Complex(Real(c, bits))};
  }
  const long coarse = 128;
  QPoly fq = from_integers(f);
  QPoly dfq = derivative(fq);

  // Cauchy bound on the moduli of the roots.
  Real bound(1, coarse);
  for (int i = 0; i < d; ++i) {
    Real a = abs(Real(f[static_cast<std::size_t>(i)], coarse));
    if (a + 1 > bound) bound = a + 1;
  }
  std::vector<Complex> z;
  Real two_pi = pi(coarse) * 2;
  for (int k = 0; k < d; ++k) {
    Real angle = two_pi * k / d + Real::from_double(0.4, coarse);
    Real r = bound * Real::from_double(0.5 + 0.5 * (k + 1) / d, coarse);
    z.emplace_back(r * cos(angle), r * sin(angle));
  }
  Real tol = pow2(-coarse + 8, coarse);
  bool converged = false;
  for (int iter = 0; iter < 2000 && !converged; ++iter) {
    converged = true;
    for (int k = 0; k < d; ++k) {
      Complex fz = evaluate(fq, z[static_cast<std::size_t>(k)]);
      Complex dfz = evaluate(dfq, z[static_cast<std::size_t>(k)]);
      if (abs(fz).is_zero()) continue;
      if (abs(dfz).is_zero()) {
        z[static_cast<std::size_t>(k)] += Complex(Real::from_double(1e-3, coarse), Real::from_double(1e-3, coarse));
        converged = false;
        continue;
      }
      Complex ratio = fz / dfz;
      Complex sum(coarse);
      for (int j = 0; j < d; ++j) {
        if (j != k) sum += inverse(z[static_cast<std::size_t>(k)] - z[static_cast<std::size_t>(j)]);
      }
      Complex step = ratio / (Complex(1, 0, coarse) - ratio * sum);
      z[static_cast<std::size_t>(k)] -= step;
      Real scale = abs(z[static_cast<std::size_t>(k)]) + 1;
      if (abs(step) > tol * scale) converged = false;
    }
  }
  if (!converged) fail(Errc::RootFindingFailed, "Aberth iteration did not converge");

  const long work = bits + 32;
  Real im_floor = pow2(-std::max<long>(coarse / 2, 48), work);
  std::vector<Complex> roots;
  for (auto& root : z) {
    Complex x = root.rounded(work);
    bool real = abs(x.im) < im_floor;
    if (real) x.im = Real(work);
    Real step_tol = pow2(-work + 4, work);
    for (int it = 0; it < 64; ++it) {
      Complex fz = evaluate(fq, x);
      Complex dfz = evaluate(dfq, x);
      if (abs(dfz).is_zero()) fail(Errc::RootFindingFailed, "derivative vanished at a root");
      Complex step = fz / dfz;
      x -= step;
      if (real) x.im = Real(work);
      if (abs(step) <= step_tol * (abs(x) + 1)) break;
    }
    roots.push_back(x.rounded(bits));
  }

  Real residual_bound = pow2(-bits / 2, bits);
  for (const auto& r : roots) {
    if (abs(evaluate(fq, r.rounded(work))) >= residual_bound) {
      fail(Errc::RootFindingFailed, "root residual above 2^(-precision/2)");
    }
  }
  Real sep = pow2(-bits / 2, bits);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    for (std::size_t j = i + 1; j < roots.size(); ++j) {
      if (abs(roots[i] - roots[j]) < sep) fail(Errc::RootFindingFailed, "roots did not separate");
    }
  }
  return roots;
}

// Exact division check: does g (monic integral) divide f?
bool divides(const std::vector<Integer>& f, const std::vector<Integer>& g) {
  auto [q, r] = divmod(from_integers(f), from_integers(g));
  return r.empty();
}

// Looks for a factor of degree k <= 3 among products of root subsets whose
// coefficients round to integers, then confirms it by exact division.
bool has_small_factor(const std::vector<Integer>& f) {
  const int d = static_cast<int>(f.size()) - 1;
  if (d <= 1) return false;
  if (f[0] == 0) return true;  // x divides f
  const long bits = 128;
  std::vector<Complex> roots = polished_roots(f, bits);
  Real near_int = pow2(-40, bits);
  const int max_k = std::min(3, d / 2);
  std::vector<int> idx;
  bool found = false;
  auto try_subset = [&](const std::vector<int>& subset) {
    std::vector<Complex> poly{Complex(1, 0, bits)};
    for (int i : subset) {
      std::vector<Complex> next(poly.size() + 1, Complex(bits));
      for (std::size_t j = 0; j < poly.size(); ++j) {
        next[j + 1] += poly[j];
        next[j] -= poly[j] * roots[static_cast<std::size_t>(i)];
      }
      poly = std::move(next);
    }
    std::vector<Integer> g;
    for (const auto& c : poly) {
      if (abs(c.im) > near_int) return false;
      Integer n = round_to_integer(c.re);
      if (abs(c.re - Real(n, bits)) > near_int) return false;
      g.push_back(n);
    }
    return divides(f, g);
  };
  auto recurse = [&](auto&& self, int start, int k) -> void {
    if (found) return;
    if (static_cast<int>(idx.size()) == k) {
      found = try_subset(idx);
      return;
    }
    for (int i = start; i < d && !found; ++i) {
      idx.push_back(i);
      self(self, i + 1, k);
      idx.pop_back();
    }
  };
  for (int k = 1; k <= max_k && !found; ++k) recurse(recurse, 0, k);
  return found;
}

bool complex_order(const Complex& a, const Complex& b) {
  if (a.re != b.re) return a.re < b.re;
  return a.im < b.im;
}

}  // namespace

NumberField::NumberField(std::vector<Integer> min_poly)
    : min_poly_(std::move(min_poly)), modulus_(from_integers(min_poly_)) {}

FieldPtr NumberField::make(std::vector<Integer> min_poly) {
  while (!min_poly.empty() && min_poly.back() == 0) min_poly.pop_back();
  if (min_poly.size() < 2) fail(Errc::NonMonic, "minimal polynomial must have degree >= 1");
  if (min_poly.back() != 1) fail(Errc::NonMonic, "minimal polynomial must be monic");
  QPoly f = from_integers(min_poly);
  if (bloch::degree(gcd(f, derivative(f))) > 0) fail(Errc::NotSquarefree, "minimal polynomial is not squarefree");
  if (has_small_factor(min_poly)) fail(Errc::DetectedReducible, "minimal polynomial has a factor of small degree");
  return FieldPtr(new NumberField(std::move(min_poly)));
}

FieldPtr NumberField::rationals() { return make({Integer(0), Integer(1)}); }

FieldPtr NumberField::gaussian() { return make({Integer(1), Integer(0), Integer(1)}); }

std::string NumberField::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    const Integer& c = min_poly_[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    Integer a = abs(c);
    os << (first ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + "));
    if (a != 1 || i == 0) os << a.get_str();
    if (a != 1 && i > 0) os << "*";
    if (i >= 1) os << "x";
    if (i >= 2) os << "^" << i;
    first = false;
  }
  return os.str();
}

bool same_field(const FieldPtr& a, const FieldPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

// ---------------------------------------------------------------------------

FieldElement::FieldElement(FieldPtr field, std::vector<Rational> coeffs) : field_(std::move(field)) {
  if (!field_) fail(Errc::InvalidArgument, "field element without a field");
  QPoly p(std::move(coeffs));
  trim(p);
  if (degree(p) >= field_->degree()) p = divmod(p, field_->modulus()).remainder;
  p.resize(static_cast<std::size_t>(field_->degree()), Rational(0));
  for (auto& c : p) c.canonicalize();
  coeffs_ = std::move(p);
}

FieldElement FieldElement::constant(FieldPtr field, const Rational& value) {
  return FieldElement(std::move(field), {value});
}

FieldElement FieldElement::generator(FieldPtr field) {
  return FieldElement(std::move(field), {Rational(0), Rational(1)});
}

bool FieldElement::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rational& c) { return c == 0; });
}

bool FieldElement::is_one() const {
  if (coeffs_.empty() || coeffs_[0] != 1) return false;
  return std::all_of(coeffs_.begin() + 1, coeffs_.end(), [](const Rational& c) { return c == 0; });
}

bool FieldElement::is_rational() const {
  return std::all_of(coeffs_.begin() + 1, coeffs_.end(), [](const Rational& c) { return c == 0; });
}

void FieldElement::check_same(const FieldElement& o) const {
  if (!same_field(field_, o.field_)) fail(Errc::FieldMismatch, "elements of different number fields");
}

FieldElement FieldElement::operator-() const {
  FieldElement r(*this);
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

FieldElement& FieldElement::operator+=(const FieldElement& o) {
  check_same(o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

FieldElement& FieldElement::operator-=(const FieldElement& o) {
  check_same(o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

FieldElement& FieldElement::operator*=(const FieldElement& o) {
  check_same(o);
  QPoly a(coeffs_), b(o.coeffs_);
  trim(a);
  trim(b);
  *this = FieldElement(field_, mul(a, b));
  return *this;
}

FieldElement& FieldElement::operator/=(const FieldElement& o) {
  check_same(o);
  return *this *= o.inverse();
}

FieldElement FieldElement::inverse() const {
  if (is_zero()) fail(Errc::DivisionByZero, "inverse of zero field element");
  QPoly a(coeffs_);
  trim(a);
  HalfGcd g = extended_gcd(a, field_->modulus());
  if (degree(g.gcd) != 0) fail(Errc::DivisionByZero, "element is a zero divisor (modulus is reducible)");
  return FieldElement(field_, g.s);
}

FieldElement FieldElement::pow(long n) const {
  if (n < 0) return inverse().pow(-n);
  FieldElement result = constant(field_, 1);
  FieldElement base = *this;
  while (n > 0) {
    if (n & 1) result *= base;
    n >>= 1;
    if (n > 0) base *= base;
  }
  return result;
}

bool operator==(const FieldElement& a, const FieldElement& b) {
  return same_field(a.field_, b.field_) && a.coeffs_ == b.coeffs_;
}

bool lex_less(const FieldElement& a, const FieldElement& b) {
  return std::lexicographical_compare(a.coeffs_.begin(), a.coeffs_.end(), b.coeffs_.begin(), b.coeffs_.end());
}

std::string FieldElement::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (i) out += ' ';
    out += rational_to_string(coeffs_[i]);
  }
  return out;
}

std::string FieldElement::to_poly_string() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const Rational& c = coeffs_[i];
    if (c == 0) continue;
    Rational a = abs(c);
    os << (first ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + "));
    if (a != 1 || i == 0) os << rational_to_string(a);
    if (a != 1 && i > 0) os << "*";
    if (i >= 1) os << "x";
    if (i >= 2) os << "^" << i;
    first = false;
  }
  return first ? "0" : os.str();
}

Rational norm(const FieldElement& a) {
  const int d = a.field()->degree();
  RatMatrix m(static_cast<std::size_t>(d), static_cast<std::size_t>(d));
  FieldElement basis = FieldElement::constant(a.field(), 1);
  const FieldElement x = FieldElement::generator(a.field());
  for (int j = 0; j < d; ++j) {
    FieldElement col = a * basis;
    for (int i = 0; i < d; ++i) m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = col.coeffs()[static_cast<std::size_t>(i)];
    basis *= x;
  }
  return determinant(std::move(m));
}

FieldElement fe_add(const FieldElement& a, const FieldElement& b) { return a + b; }
FieldElement fe_mul(const FieldElement& a, const FieldElement& b) { return a * b; }
FieldElement fe_inv(const FieldElement& a) { return a.inverse(); }

// ---------------------------------------------------------------------------

std::vector<Complex> EmbeddingSet::all_roots() const {
  std::vector<Complex> out;
  for (const auto& r : real_roots) out.emplace_back(r);
  for (const auto& z : complex_pairs) {
    out.push_back(z);
    out.push_back(conj(z));
  }
  return out;
}

EmbeddingSet embeddings(const FieldPtr& field, long bits) {
  if (bits < 64) fail(Errc::InvalidArgument, "embedding precision must be at least 64 bits");
  EmbeddingSet set;
  set.field = field;
  set.precision = bits;
  for (auto& root : polished_roots(field->min_poly(), bits)) {
    if (root.im.is_zero()) {
      set.real_roots.push_back(root.re);
    } else if (root.im.sign() > 0) {
      set.complex_pairs.push_back(std::move(root));
    }
  }
  std::sort(set.real_roots.begin(), set.real_roots.end(), [](const Real& a, const Real& b) { return a < b; });
  std::sort(set.complex_pairs.begin(), set.complex_pairs.end(), complex_order);
  if (set.r1() + 2 * set.r2() != field->degree()) {
    fail(Errc::RootFindingFailed, "complex roots did not pair up under conjugation");
  }
  return set;
}

std::vector<Complex> select_roots(const EmbeddingSet& set, std::span<const Complex> hints) {
  std::vector<Complex> roots = set.all_roots();
  std::vector<Complex> out;
  for (const auto& h : hints) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < roots.size(); ++i) {
      if (abs(roots[i] - h) < abs(roots[best] - h)) best = i;
    }
    out.push_back(roots[best]);
  }
  return out;
}

Complex eval_embedding(const FieldElement& elem, const Complex& root, long bits) {
  QPoly p(elem.coeffs());
  trim(p);
  return evaluate(p, root.rounded(std::max(bits, root.precision()))).rounded(bits);
}

Rational parse_rational(const std::string& text) {
  Rational q;
  std::string t = text;
  if (!t.empty() && t[0] == '+') t.erase(0, 1);
  if (t.empty() || q.set_str(t, 10) != 0) fail(Errc::SyntaxError, "not a rational number: '" + text + "'");
  if (q.get_den() == 0) fail(Errc::SyntaxError, "zero denominator in '" + text + "'");
  q.canonicalize();
  return q;
}

std::string rational_to_string(const Rational& q) { return q.get_str(10); }

}  // namespace bloch
