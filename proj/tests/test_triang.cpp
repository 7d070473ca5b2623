#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "bloch/dilog.hpp"
#include "bloch/triang.hpp"
#include "helpers.hpp"

using namespace bloch;
using testing_helpers::code_of;
using testing_helpers::load_fixture;

namespace {

Triangulation parse_text(const std::string& text, long bits = 256) {
  std::istringstream in(text);
  return parse_triangulation(in, bits);
}

// Edge classes by label propagation over (tet, vertex pair); independent of
// the union-find in the library.
std::vector<std::vector<std::pair<int, std::pair<int, int>>>> oracle_edge_classes(const GluingCombinatorics& g) {
  const int n = static_cast<int>(g.faces.size());
  std::map<std::pair<int, std::pair<int, int>>, int> label;
  int next = 0;
  for (int t = 0; t < n; ++t)
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b) label[{t, {a, b}}] = next++;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int t = 0; t < n; ++t) {
      for (int f = 0; f < 4; ++f) {
        const auto& fg = g.faces[t][f];
        for (int a = 0; a < 4; ++a) {
          for (int b = a + 1; b < 4; ++b) {
            if (a == f || b == f) continue;
            int x = fg.perm[a], y = fg.perm[b];
            auto& l1 = label[{t, {a, b}}];
            auto& l2 = label[{fg.target, {std::min(x, y), std::max(x, y)}}];
            int m = std::min(l1, l2);
            if (l1 != m || l2 != m) {
              l1 = l2 = m;
              changed = true;
            }
          }
        }
      }
    }
  }
  std::map<int, std::vector<std::pair<int, std::pair<int, int>>>> classes;
  for (auto& [k, v] : label) classes[v].push_back(k);
  std::vector<std::vector<std::pair<int, std::pair<int, int>>>> out;
  for (auto& [k, v] : classes) out.push_back(v);
  return out;
}

// The shape parameter a tetrahedron with shape z carries on edge (a, b).
Complex edge_parameter(const Complex& z, int a, int b) {
  int x = std::min(a, b), y = std::max(a, b);
  if ((x == 0 && y == 1) || (x == 2 && y == 3)) return z;
  if ((x == 0 && y == 2) || (x == 1 && y == 3)) return inverse(1 - z);
  return 1 - inverse(z);
}

std::string m004_without_system() {
  return "tets 2\ncusps 1\n"
         "glue 0 0 1 0132\nglue 0 1 1 1230\nglue 0 2 1 2310\nglue 0 3 1 2103\n"
         "glue 1 0 0 0132\nglue 1 1 0 3201\nglue 1 2 0 3012\nglue 1 3 0 2103\n";
}

}  // namespace

TEST(TriangFile, FigureEight) {
  auto t = load_fixture("m004.tri", 256);
  EXPECT_EQ(t.n, 2);
  EXPECT_EQ(t.h, 1);
  ASSERT_TRUE(t.u.has_value());
  EXPECT_EQ(t.u->rows(), 4u);
  EXPECT_EQ(t.u->cols(), 4u);
  ASSERT_TRUE(t.gluing.has_value());
  ASSERT_EQ(t.fillings.size(), 1u);
  EXPECT_TRUE(t.fillings[0].complete);
  EXPECT_NO_THROW(validate(t, 256));
}

TEST(TriangFile, Errors) {
  EXPECT_EQ(code_of([] { parse_text(""); }), Errc::SyntaxError);
  EXPECT_EQ(code_of([] { parse_text("# only a comment\n"); }), Errc::SyntaxError);
  EXPECT_EQ(code_of([] { parse_text("tets 1\ncusps 0\nurow 0 1 0 0\n"); }), Errc::DimensionMismatch);
  EXPECT_EQ(code_of([] { parse_text("tets 1\ncusps 0\nurow 0 1 0\ndvec 0 0\n"); }), Errc::DimensionMismatch);
  EXPECT_EQ(code_of([] { parse_text("tets 1\ncusps 0\nurow 0 1 0\nshape 0 0.5 0.5\n"); }), Errc::SyntaxError);
  EXPECT_EQ(code_of([] { parse_text("tets 1\ncusps 0\nshape 0 exact 1\n"); }), Errc::SyntaxError);
  EXPECT_EQ(code_of([] { parse_text("tets 1\ncusps 0\nglue 0 0 0 0112\n"); }), Errc::SyntaxError);
  EXPECT_EQ(code_of([] { parse_text("tets 2\ncusps 0\nshape 0 0.5 0.5\n"); }), Errc::DimensionMismatch);
  try {
    parse_text("tets 1\ncusps 0\n\nbogus 3\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos) << e.what();
  }
}

TEST(TriangFile, RoundTrip) {
  for (const char* name : {"m004.tri", "m003.tri", "m032.tri", "three_shapes.tri"}) {
    auto t = load_fixture(name, 256);
    std::string canonical = serialize_triangulation(t);
    EXPECT_EQ(serialize_triangulation(parse_text(canonical)), canonical) << name;
  }
  std::string filled = "tets 2\ncusps 1\nshape 0 0.5 0.75\nshape 1 -1.5 2.25e-10\nfill 0 5 -1\n";
  EXPECT_EQ(serialize_triangulation(parse_text(filled)), filled);
}

TEST(EdgeEquations, FigureEightAgainstOracle) {
  auto t = load_fixture("m004.tri", 256);
  auto sys = edge_equations(*t.gluing);
  auto classes = oracle_edge_classes(*t.gluing);
  ASSERT_EQ(sys.rows.rows(), 2u);
  ASSERT_EQ(classes.size(), 2u);

  // At the complete structure the shape parameters around each edge
  // multiply to 1 and their arguments add up to 2 pi.
  const long bits = 256;
  auto z = numeric_shapes(t, bits);
  Real tol = pow2(-200, bits);
  for (const auto& cls : classes) {
    Complex prod(1, 0, bits);
    Real angle(0, bits);
    for (auto& [tet, e] : cls) {
      Complex w = edge_parameter(z[tet], e.first, e.second);
      prod *= w;
      angle += arg(w);
    }
    EXPECT_TRUE(near(prod, Complex(1, 0, bits), tol));
    EXPECT_LT(abs(angle - 2 * pi(bits)), tol);
  }
  EXPECT_LT(system_residual(sys.rows, sys.d, z, bits), tol);

  // Matches the edge rows of the fixture, which came from SnapPy.
  std::multiset<std::vector<Integer>> ours, theirs;
  for (std::size_t i = 0; i < 2; ++i) {
    ours.insert(sys.rows.row(i));
    theirs.insert(t.u->row(i));
  }
  EXPECT_EQ(ours, theirs);
}

TEST(EdgeEquations, Conservation) {
  auto t = parse_text(m004_without_system());
  auto sys = edge_equations(*t.gluing);
  for (std::size_t j = 0; j < sys.rows.cols(); ++j) {
    Integer col(0);
    for (std::size_t i = 0; i < sys.rows.rows(); ++i) col += sys.rows(i, j);
    EXPECT_EQ(col, 0) << "column " << j;
  }
  // Each tetrahedron carries 1 - 1/z on two edges.
  Integer dsum(0);
  for (auto& v : sys.d) dsum += v;
  EXPECT_EQ(dsum, 2 * static_cast<long>(sys.rows.rows()) - 2 * t.n);
}

TEST(EdgeEquations, Errors) {
  EXPECT_EQ(code_of([] { edge_equations(GluingCombinatorics{std::vector<std::array<FaceGluing, 4>>(1)}); }),
            Errc::OpenFace);
  auto t = parse_text("tets 1\ncusps 0\nglue 0 0 0 0132\n");
  EXPECT_EQ(code_of([&] { edge_equations(*t.gluing); }), Errc::OpenFace);
  // face 0 glued to face 1, which is glued to face 2
  auto bad = parse_text("tets 1\ncusps 0\nglue 0 0 0 1023\nglue 0 1 0 0213\nglue 0 2 0 0132\nglue 0 3 0 0132\n");
  EXPECT_EQ(code_of([&] { edge_equations(*bad.gluing); }), Errc::Inconsistent);
}

TEST(EdgeEquations, DoublingIsBlockDiagonal) {
  auto t = parse_text(m004_without_system());
  auto both = disjoint_union(t, t);
  auto sys = edge_equations(*both.gluing);
  ASSERT_EQ(sys.rows.rows(), 4u);
  // Columns of the union are (z_0..z_3, w_0..w_3); each edge touches one copy.
  for (std::size_t i = 0; i < 4; ++i) {
    bool first = false, second = false;
    for (int j : {0, 1, 4, 5}) first |= sys.rows(i, j) != 0;
    for (int j : {2, 3, 6, 7}) second |= sys.rows(i, j) != 0;
    EXPECT_NE(first, second);
  }
}

TEST(InferD, FigureEight) {
  auto t = load_fixture("m004.tri", 256);
  auto d = infer_d(t, 256);
  EXPECT_EQ(d, *t.d);
  for (long bits : {64L, 128L, 512L}) {
    auto tb = load_fixture("m004.tri", bits);
    EXPECT_EQ(infer_d(tb, bits), d) << bits;
  }
}

TEST(InferD, Perturbed) {
  auto t = load_fixture("m004.tri", 256);
  Complex z = t.shapes[0].numeric();
  z.re += Real::parse("0.01", 256);
  t.shapes[0] = Generator(z);
  EXPECT_EQ(code_of([&] { infer_d(t, 256); }), Errc::NotIntegral);
  EXPECT_EQ(code_of([&] { validate(t, 256); }), Errc::NotIntegral);
}

TEST(InferD, Degenerate) {
  auto t = load_fixture("m004.tri", 128);
  t.shapes[1] = Generator(Complex(1, 0, 128));
  EXPECT_EQ(code_of([&] { infer_d(t, 128); }), Errc::DegenerateShape);
  EXPECT_EQ(code_of([&] { bloch_invariant(t); }), Errc::DegenerateShape);
}

TEST(InferD, DoubledConcatenates) {
  auto t = load_fixture("m004.tri", 256);
  auto both = disjoint_union(t, t);
  EXPECT_EQ(both.u->rows(), 8u);
  auto d = infer_d(both, 256);
  std::vector<Integer> expected = {0, 0, 0, 0, 0, -2, 0, -2};
  EXPECT_EQ(d, expected);
  EXPECT_EQ(d, *both.d);
}

TEST(BlochInvariant, FigureEight) {
  const long bits = 256;
  auto t = load_fixture("m004.tri", bits);
  auto beta = bloch_invariant(t);
  ASSERT_EQ(beta.terms().size(), 1u);
  EXPECT_EQ(beta.terms()[0].coeff, 2);
  Complex w(Real(1, bits) / 2, sqrt(Real(3, bits)) / 2);
  EXPECT_TRUE(near(beta.terms()[0].z.numeric(), w, pow2(-240, bits)));
  Real vol = volume_of_prebloch(beta, std::nullopt, bits);
  EXPECT_LT(abs(vol - 2 * bloch_wigner(w, bits)), pow2(-bits + 16, bits));
}

TEST(BlochInvariant, ExampleThree) {
  const long bits = 256;
  auto t = load_fixture("three_shapes.tri", bits);
  auto beta = bloch_invariant(t);
  Real vol = volume_of_prebloch(beta, std::nullopt, bits);
  Real expected = Real::parse("1.83193118835443803010920702986476822154829874856334", bits);
  EXPECT_LT(abs(vol - expected), Real::parse("1e-50", bits));
}

TEST(BlochInvariant, Empty) {
  auto t = parse_text("tets 0\ncusps 0\n");
  EXPECT_TRUE(bloch_invariant(t).is_zero());
}

TEST(ExactShapes, M032) {
  const long bits = 256;
  auto t = load_fixture("m032.tri", bits);
  EXPECT_NO_THROW(validate(t, bits));
  Complex root = geometric_root(t, bits);
  EXPECT_NEAR(root.re.to_double(), 0.547423794586, 1e-11);
  EXPECT_NEAR(root.im.to_double(), -0.585651979690, 1e-11);
  auto beta = bloch_invariant(t);
  EXPECT_TRUE(beta.is_exact());
  Real vol = volume_of_prebloch(beta, root, bits);
  EXPECT_NEAR(vol.to_double(), 3.16396322888, 1e-10);
  // Every shape is positively oriented at the geometric root.
  for (const auto& z : numeric_shapes(t, bits)) EXPECT_GT(z.im.sign(), 0);
  EXPECT_EQ(infer_d(t, bits).size(), 6u);
}

TEST(ExactShapes, RecognizeInField) {
  const long bits = 256;
  auto t = load_fixture("m032.tri", bits);
  Complex root = geometric_root(t, bits);
  for (const auto& s : t.shapes) {
    auto rec = recognize_in_field(s.evaluate(&root, bits), t.field, root, bits);
    ASSERT_TRUE(rec.has_value());
    EXPECT_EQ(*rec, s.exact());
  }
  Complex off(Real::parse("0.3", bits), pi(bits));
  EXPECT_FALSE(recognize_in_field(off, t.field, root, bits).has_value());
}
