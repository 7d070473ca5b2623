#pragma once

// Number fields Q[x]/(f) with f monic integral, exact elements as reduced
// residues, and complex embeddings computed to a caller-chosen precision.

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "bloch/arith/polynomial.hpp"
#include "bloch/arith/real.hpp"

namespace bloch {

class NumberField;
using FieldPtr = std::shared_ptr<const NumberField>;

class NumberField {
 public:
  // Validates monicity and squarefreeness and rejects fields with a cheap
  // reducibility witness (a factor of degree <= 3). Full irreducibility is
  // an input contract.
  static FieldPtr make(std::vector<Integer> min_poly);
  static FieldPtr rationals();  // Q = Q[x]/(x)
  static FieldPtr gaussian();   // Q(i) = Q[x]/(x^2 + 1)

  const std::vector<Integer>& min_poly() const { return min_poly_; }
  const QPoly& modulus() const { return modulus_; }
  int degree() const { return static_cast<int>(min_poly_.size()) - 1; }
  std::string to_string() const;

  friend bool operator==(const NumberField& a, const NumberField& b) { return a.min_poly_ == b.min_poly_; }

 private:
  explicit NumberField(std::vector<Integer> min_poly);
  std::vector<Integer> min_poly_;
  QPoly modulus_;
};

bool same_field(const FieldPtr& a, const FieldPtr& b);

class FieldElement {
 public:
  // Reduces `coeffs` (any length) modulo the minimal polynomial.
  FieldElement(FieldPtr field, std::vector<Rational> coeffs);
  static FieldElement constant(FieldPtr field, const Rational& value);
  static FieldElement generator(FieldPtr field);

  const FieldPtr& field() const { return field_; }
  // Exactly degree() entries.
  const std::vector<Rational>& coeffs() const { return coeffs_; }

  bool is_zero() const;
  bool is_one() const;
  bool is_rational() const;

  FieldElement operator-() const;
  FieldElement& operator+=(const FieldElement& o);
  FieldElement& operator-=(const FieldElement& o);
  FieldElement& operator*=(const FieldElement& o);
  FieldElement& operator/=(const FieldElement& o);
  friend FieldElement operator+(FieldElement a, const FieldElement& b) { return a += b; }
  friend FieldElement operator-(FieldElement a, const FieldElement& b) { return a -= b; }
  friend FieldElement operator*(FieldElement a, const FieldElement& b) { return a *= b; }
  friend FieldElement operator/(FieldElement a, const FieldElement& b) { return a /= b; }
  friend FieldElement operator-(long a, const FieldElement& b) { return constant(b.field_, a) - b; }

  FieldElement inverse() const;
  FieldElement pow(long n) const;

  friend bool operator==(const FieldElement& a, const FieldElement& b);
  // Lexicographic on the coefficient vector (constant term first).
  friend bool lex_less(const FieldElement& a, const FieldElement& b);

  // "q0 q1 ... q_{d-1}" with rationals printed as p/q.
  std::string to_string() const;
  // Human readable polynomial in x, e.g. "1/2 - 1/2*x^2 - 1/2*x^3".
  std::string to_poly_string() const;

 private:
  void check_same(const FieldElement& o) const;
  FieldPtr field_;
  std::vector<Rational> coeffs_;
};

// N_{K/Q}(a): determinant of multiplication by a.
Rational norm(const FieldElement& a);

FieldElement fe_add(const FieldElement& a, const FieldElement& b);
FieldElement fe_mul(const FieldElement& a, const FieldElement& b);
FieldElement fe_inv(const FieldElement& a);

// All complex embeddings, one representative per conjugate pair.
struct EmbeddingSet {
  FieldPtr field;
  long precision = 0;
  std::vector<Real> real_roots;       // ascending
  std::vector<Complex> complex_pairs;  // Im > 0, ascending real part then imaginary part

  int r1() const { return static_cast<int>(real_roots.size()); }
  int r2() const { return static_cast<int>(complex_pairs.size()); }
  // Every root: real roots, then each pair representative followed by its conjugate.
  std::vector<Complex> all_roots() const;
};

EmbeddingSet embeddings(const FieldPtr& field, long bits);

// For each hint, the root (any of the degree roots, conjugates included)
// closest to it. Used to reproduce a published embedding order and
// orientation.
std::vector<Complex> select_roots(const EmbeddingSet& set, std::span<const Complex> hints);

// Horner evaluation of the element's polynomial at `root`.
Complex eval_embedding(const FieldElement& elem, const Complex& root, long bits);

// Parse a rational "p", "p/q" or "-p/q".
Rational parse_rational(const std::string& text);
std::string rational_to_string(const Rational& q);

}  // namespace bloch
