#pragma once

// Ideal polyhedra with triangulated faces, their cone decompositions into
// ideal simplices, cycle moves, and the resulting pre-Bloch classes.

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "bloch/prebloch.hpp"

namespace bloch {

struct Diagonal {
  std::size_t face;
  std::size_t a, b;  // vertex indices
};

// Faces are vertex cycles, counterclockwise seen from outside when
// orientation is +1. A flat polygon is entered as two faces with opposite
// cycles, one per side, each with its own diagonals.
struct IdealPolyhedron {
  std::vector<ProjectivePoint> vertices;
  std::vector<std::vector<std::size_t>> faces;
  std::vector<Diagonal> diagonals;
  int orientation = 1;
  long bits = 256;  // working precision for numeric vertices
};

using Triangle = std::array<std::size_t, 3>;

// The face triangles, oriented like their faces. Throws InvalidPolyhedron
// unless every face is triangulated by its diagonals, every directed edge
// occurs once in each direction and V - E + T = 2; NotDistinct for
// coincident vertices.
std::vector<Triangle> face_triangles(const IdealPolyhedron& p);
void validate(const IdealPolyhedron& p);

struct OrientedSimplex {
  std::array<std::size_t, 4> v;
  int sign = 1;
};

// Simplices over a shared vertex list; the class is sum sign [cr(v)].
struct Decomposition {
  std::vector<ProjectivePoint> points;
  std::vector<OrientedSimplex> simplices;
  FieldPtr field;  // null for numeric points
};

PreBlochElement decomposition_class(const Decomposition& d);

// Cones to the apex over the face triangles not containing it.
Decomposition cone_simplices(const IdealPolyhedron& p, std::size_t apex);
PreBlochElement cone_decomposition(const IdealPolyhedron& p, std::size_t apex);

// Cone class from vertex 0, six-fold normalized.
PreBlochElement polyhedron_class(const IdealPolyhedron& p);

// For points q0..q4, the simplices omitting q0, q2, q4 and those omitting q1,
// q3 carry the same class. Replaces whichever side the decomposition
// contains (with a common orientation) by the other. Throws
// NotAFiveTermConfiguration otherwise.
Decomposition cycle_move(const Decomposition& d, const std::array<std::size_t, 5>& q);

// The relation five_term(x, y) of the configuration, where a Moebius map
// sends q0, q1, q2, q3, q4 to infinity, 0, 1, x, y.
PreBlochElement configuration_five_term(const std::vector<ProjectivePoint>& points,
                                        const std::array<std::size_t, 5>& q);

// Text form: "vertex <i> <re> <im>" or "vertex <i> inf", "face <i0> <i1> ...",
// "diag <face> <i> <j>", optional "orientation -1". Coordinates that are all
// rational give exact points over Q, or Q(i) if any is non-real; a decimal
// coordinate makes every point numeric at the given precision.
IdealPolyhedron parse_polyhedron(std::istream& in, long bits);
std::string serialize_polyhedron(const IdealPolyhedron& p);

}  // namespace bloch
