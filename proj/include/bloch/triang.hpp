#pragma once

// Ideal triangulations: shapes, the consistency and cusp system
// U * Z = pi i * d with Z = (log z_1..log z_n, log(1-z_1)..log(1-z_n)),
// gluing combinatorics, and the text file format.

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bloch/arith/linalg.hpp"
#include "bloch/arith/number_field.hpp"
#include "bloch/prebloch.hpp"

namespace bloch {

struct FaceGluing {
  int target = -1;               // neighbouring tetrahedron
  std::array<int, 4> perm{};     // vertex i of this tetrahedron goes to perm[i]
};

struct GluingCombinatorics {
  std::vector<std::array<FaceGluing, 4>> faces;  // face f is opposite vertex f
};

struct Filling {
  bool complete = true;
  long p = 0;
  long q = 0;
};

struct Triangulation {
  int n = 0;  // tetrahedra
  int h = 0;  // cusps
  FieldPtr field;
  std::vector<Generator> shapes;  // empty, or one per tetrahedron
  std::optional<IntMatrix> u;     // (n + 2h) x 2n: edge rows, then (meridian, longitude) per cusp
  std::optional<std::vector<Integer>> d;
  std::optional<GluingCombinatorics> gluing;
  std::vector<Filling> fillings;  // one per cusp

  bool has_shapes() const { return !shapes.empty(); }
};

Triangulation parse_triangulation(std::istream& in, long bits);
std::string serialize_triangulation(const Triangulation& t);

// Edge rows of U and the matching entries of d, for shapes with positive
// imaginary part. Shape parameters sit on the edges as z on 01 and 23,
// 1/(1-z) on 02 and 13, 1 - 1/z on 03 and 12.
struct EdgeSystem {
  IntMatrix rows;
  std::vector<Integer> d;
};
EdgeSystem edge_equations(const GluingCombinatorics& g);

// Disjoint union; columns become (log z of a, log z of b, log(1-z) of a, log(1-z) of b).
Triangulation disjoint_union(const Triangulation& a, const Triangulation& b);

// Complex shapes. Exact shapes are evaluated at `root`, or at the root chosen
// by geometric_root when none is given.
std::vector<Complex> numeric_shapes(const Triangulation& t, long bits, const std::optional<Complex>& root = {});

// The root of the shape field maximizing the volume among roots at which the
// system U Z = pi i d is satisfied (all roots when U is absent).
Complex geometric_root(const Triangulation& t, long bits);

// Principal-branch log parameters (log z_nu, then log(1 - z_nu)).
std::vector<Complex> log_parameters(const std::vector<Complex>& shapes);

// d = round(U Z / (pi i)); throws NotIntegral if some entry is farther than
// 2^(-bits/4) from an integer.
std::vector<Integer> infer_d(const IntMatrix& u, const std::vector<Complex>& shapes, long bits);
std::vector<Integer> infer_d(const Triangulation& t, long bits);

// |U Z - pi i d| over all rows.
Real system_residual(const IntMatrix& u, const std::vector<Integer>& d, const std::vector<Complex>& shapes,
                     long bits);

// sum [z_nu], six-fold normalized.
PreBlochElement bloch_invariant(const Triangulation& t);

// Dimension and degeneracy checks, and U Z = pi i d when shapes and the
// system are present. Throws on failure.
void validate(const Triangulation& t, long bits);

// The element of `field` whose image under `root` is z, found by an integer
// relation among z, 1, root, ..., root^(d-1); nullopt if none is detected.
std::optional<FieldElement> recognize_in_field(const Complex& z, const FieldPtr& field, const Complex& root,
                                               long bits);

}  // namespace bloch
