#pragma once

// The pre-Bloch group: formal integer combinations of symbols [z], the
// six-fold symmetry, five-term relations, the map [z] -> 2 z ^ (1-z) and a
// Bloch-group membership test.

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bloch/arith/linalg.hpp"
#include "bloch/arith/number_field.hpp"
#include "bloch/arith/real.hpp"

namespace bloch {

// A symbol argument: an exact field element or a high-precision complex number.
class Generator {
 public:
  Generator(FieldElement z) : value_(std::move(z)) {}
  Generator(Complex z) : value_(std::move(z)) {}

  bool is_exact() const { return std::holds_alternative<FieldElement>(value_); }
  const FieldElement& exact() const { return std::get<FieldElement>(value_); }
  const Complex& numeric() const { return std::get<Complex>(value_); }

  // Complex value; `root` selects the embedding for exact generators.
  Complex evaluate(const Complex* root, long bits) const;
  bool is_zero() const;
  bool is_one() const;
  std::string to_string() const;

 private:
  std::variant<FieldElement, Complex> value_;
};

// Exact equality for field elements, closeness within 2^(-precision/2) for
// numbers. Mixed kinds compare unequal.
bool same_generator(const Generator& a, const Generator& b);

class ProjectivePoint {
 public:
  static ProjectivePoint infinity() { return ProjectivePoint(); }
  ProjectivePoint(FieldElement z) : finite_(Generator(std::move(z))) {}
  ProjectivePoint(Complex z) : finite_(Generator(std::move(z))) {}
  ProjectivePoint(Generator z) : finite_(std::move(z)) {}

  bool is_infinity() const { return !finite_.has_value(); }
  const Generator& finite() const { return *finite_; }

 private:
  ProjectivePoint() = default;
  std::optional<Generator> finite_;
};

// ((z3-z2)(z4-z1)) / ((z3-z1)(z4-z2)), with the limit taken when a point is
// infinity. Throws NotDistinct unless the points are pairwise distinct.
Generator cross_ratio(const ProjectivePoint& z1, const ProjectivePoint& z2, const ProjectivePoint& z3,
                      const ProjectivePoint& z4);

struct Term {
  Generator z;
  Integer coeff;
};

class PreBlochElement {
 public:
  PreBlochElement() = default;
  explicit PreBlochElement(FieldPtr field) : field_(std::move(field)) {}

  // Adds n[z], merging with an equal generator. Symbols [0] and [1] are
  // dropped, since they vanish in the pre-Bloch group.
  void add(const Generator& z, const Integer& n);

  const std::vector<Term>& terms() const { return terms_; }
  const FieldPtr& field() const { return field_; }
  bool is_zero() const { return terms_.empty(); }
  // Number of [0] or [1] symbols discarded by add().
  int dropped() const { return dropped_; }
  bool is_exact() const;

  PreBlochElement& operator+=(const PreBlochElement& o);
  PreBlochElement& operator-=(const PreBlochElement& o);
  friend PreBlochElement operator+(PreBlochElement a, const PreBlochElement& b) { return a += b; }
  friend PreBlochElement operator-(PreBlochElement a, const PreBlochElement& b) { return a -= b; }
  friend PreBlochElement operator*(const Integer& n, const PreBlochElement& e);

 private:
  FieldPtr field_;
  std::vector<Term> terms_;
  int dropped_ = 0;
};

// The six images of z with the sign of the symbol relation:
// +z, +(1-1/z), +1/(1-z), -1/z, -z/(z-1), -(1-z).
struct OrbitImage {
  Generator z;
  int sign;
};
std::vector<OrbitImage> six_fold_orbit(const Generator& z);

// Replace every symbol by the canonical representative of its orbit.
// Exact generators: lexicographically smallest coefficient vector.
// Numeric generators: among images with Im >= 0 the one closest to 1/2,
// ties broken by the real part. The orbit of -1 is 2-torsion, so its
// coefficient is reduced mod 2.
PreBlochElement six_fold_normalize(const PreBlochElement& e);

// [x] - [y] + [y/x] - [(1-1/x)/(1-1/y)] + [(1-x)/(1-y)], a relation in P(k).
PreBlochElement five_term(const Generator& x, const Generator& y);

// sum n_i D2(sigma(z_i)). Exact generators need an embedding root.
Real volume_of_prebloch(const PreBlochElement& e, const std::optional<Complex>& root, long bits);

// Verified multiplicative relations prod x_i^(e_i) = root of unity.
struct RelationLattice {
  std::vector<FieldElement> elements;
  std::vector<std::vector<Integer>> relations;
};
RelationLattice multiplicative_relations(const std::vector<FieldElement>& elements, long bits = 256);

// Exact check that prod x_i^(e_i) is a root of unity.
bool is_torsion_relation(const std::vector<FieldElement>& elements, const std::vector<Integer>& exponents);

// 2 sum n_i z_i ^ (1 - z_i), written in a basis of the group generated by the
// symbols modulo verified relations and torsion.
struct WedgeElement {
  std::vector<FieldElement> basis;
  IntMatrix matrix;  // antisymmetric
  bool certified = false;  // true when the matrix is zero
};
WedgeElement wedge(const PreBlochElement& e);

enum class BlochVerdict { CertifiedZero, LikelyNonzero };

struct BlochCertificate {
  BlochVerdict verdict = BlochVerdict::LikelyNonzero;
  std::vector<FieldElement> elements;             // the distinct z_i and 1 - z_i
  std::vector<std::vector<Integer>> relations;    // verified, in terms of `elements`
  std::vector<FieldElement> residual_basis;
  IntMatrix wedge_matrix;
};
BlochCertificate is_bloch(const PreBlochElement& e);

std::string verdict_name(BlochVerdict v);

// Text form: optional "field <d> <c0> ... <cd>" header, then one term per
// line, "<n> * [q0 ... q_{d-1}]" for exact or "<n> * (<re> <im>)" for numeric
// generators. '#' starts a comment.
PreBlochElement parse_prebloch(std::istream& in, long bits);
std::string serialize_prebloch(const PreBlochElement& e);

}  // namespace bloch
