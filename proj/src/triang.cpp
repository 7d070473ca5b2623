#include "bloch/triang.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <sstream>

#include "bloch/arith/reconstruct.hpp"
#include "bloch/dilog.hpp"
#include "bloch/error.hpp"
#include "bloch/text.hpp"

namespace bloch {

namespace {

enum Section { kHeader, kField, kShape, kUrow, kDvec, kGlue, kFill };

Section section_of(const std::string& keyword) {
  if (keyword == "field") return kField;
  if (keyword == "shape") return kShape;
  if (keyword == "urow") return kUrow;
  if (keyword == "dvec") return kDvec;
  if (keyword == "glue") return kGlue;
  if (keyword == "fill") return kFill;
  return kHeader;
}

long index_token(const Line& line, const std::string& token, long limit, const char* what) {
  long v = parse_long_token(line, token);
  if (v < 0 || v >= limit) syntax_error(line, std::string(what) + " index out of range: " + token);
  return v;
}

std::array<int, 4> parse_perm(const Line& line, const std::string& token) {
  if (token.size() != 4) syntax_error(line, "permutation must be 4 digits, got '" + token + "'");
  std::array<int, 4> p{};
  std::array<bool, 4> seen{};
  for (int i = 0; i < 4; ++i) {
    int c = token[i] - '0';
    if (c < 0 || c > 3 || seen[c]) syntax_error(line, "not a permutation of 0123: '" + token + "'");
    seen[c] = true;
    p[i] = c;
  }
  return p;
}

void check_shapes_nondegenerate(const Triangulation& t) {
  for (std::size_t i = 0; i < t.shapes.size(); ++i) {
    if (t.shapes[i].is_zero() || t.shapes[i].is_one()) {
      fail(Errc::DegenerateShape, "shape " + std::to_string(i) + " is 0 or 1");
    }
  }
}

int edge_slot(int a, int b) {
  if (a > b) std::swap(a, b);
  static const int table[4][4] = {{-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
  return table[a][b];
}

int find_root(std::vector<int>& parent, int x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

}  // namespace

Triangulation parse_triangulation(std::istream& in, long bits) {
  auto lines = read_lines(in);
  if (lines.empty()) fail(Errc::SyntaxError, "empty triangulation file");
  if (lines.size() < 2 || lines[0].tokens[0] != "tets" || lines[1].tokens[0] != "cusps") {
    syntax_error(lines[0], "expected 'tets <n>' followed by 'cusps <h>'");
  }
  Triangulation t;
  for (int k = 0; k < 2; ++k) {
    if (lines[k].tokens.size() != 2) syntax_error(lines[k], "expected a single count");
    long v = parse_long_token(lines[k], lines[k].tokens[1]);
    if (v < 0) syntax_error(lines[k], "count must be nonnegative");
    (k == 0 ? t.n : t.h) = static_cast<int>(v);
  }
  const int n = t.n, h = t.h;
  const std::size_t rows = static_cast<std::size_t>(n + 2 * h);

  std::vector<std::optional<Generator>> shapes(n);
  std::vector<std::optional<std::vector<Integer>>> urows(rows);
  std::vector<Filling> fills(h);
  std::vector<bool> fill_seen(h, false);
  std::vector<std::array<bool, 4>> glue_seen(n, {false, false, false, false});
  Section current = kHeader;

  for (std::size_t li = 2; li < lines.size(); ++li) {
    const Line& line = lines[li];
    const auto& tok = line.tokens;
    Section s = section_of(tok[0]);
    if (s == kHeader) syntax_error(line, "unknown keyword '" + tok[0] + "'");
    if (s < current) syntax_error(line, "'" + tok[0] + "' is out of order");
    if (s == kField && current == kField) syntax_error(line, "duplicate field line");
    if (s == kDvec && current == kDvec) syntax_error(line, "duplicate dvec line");
    current = s;

    switch (s) {
      case kField:
        t.field = parse_field_line(line);
        break;
      case kShape: {
        if (tok.size() < 2) syntax_error(line, "shape needs an index");
        long nu = index_token(line, tok[1], n, "tetrahedron");
        if (shapes[nu]) syntax_error(line, "shape " + tok[1] + " given twice");
        if (tok.size() >= 3 && tok[2] == "exact") {
          if (!t.field) syntax_error(line, "exact shape without a field line");
          const std::size_t deg = static_cast<std::size_t>(t.field->degree());
          if (tok.size() != deg + 3) {
            fail(Errc::DimensionMismatch, "line " + std::to_string(line.number) + ": exact shape needs " +
                                              std::to_string(deg) + " coefficients");
          }
          std::vector<Rational> c;
          for (std::size_t i = 3; i < tok.size(); ++i) c.push_back(parse_rational_token(line, tok[i]));
          shapes[nu] = Generator(FieldElement(t.field, std::move(c)));
        } else {
          if (tok.size() != 4) syntax_error(line, "expected 'shape <index> <re> <im>'");
          shapes[nu] = Generator(Complex(parse_real_token(line, tok[2], bits), parse_real_token(line, tok[3], bits)));
        }
        break;
      }
      case kUrow: {
        if (tok.size() < 2) syntax_error(line, "urow needs an index");
        long i = index_token(line, tok[1], static_cast<long>(rows), "row");
        if (urows[i]) syntax_error(line, "row " + tok[1] + " given twice");
        if (tok.size() != static_cast<std::size_t>(2 * n) + 2) {
          fail(Errc::DimensionMismatch, "line " + std::to_string(line.number) + ": U row needs " +
                                            std::to_string(2 * n) + " entries, got " +
                                            std::to_string(tok.size() - 2));
        }
        std::vector<Integer> r;
        for (std::size_t k = 2; k < tok.size(); ++k) r.push_back(parse_integer_token(line, tok[k]));
        urows[i] = std::move(r);
        break;
      }
      case kDvec: {
        if (tok.size() != rows + 1) {
          fail(Errc::DimensionMismatch, "line " + std::to_string(line.number) + ": d needs " +
                                            std::to_string(rows) + " entries, got " +
                                            std::to_string(tok.size() - 1));
        }
        std::vector<Integer> d;
        for (std::size_t k = 1; k < tok.size(); ++k) d.push_back(parse_integer_token(line, tok[k]));
        t.d = std::move(d);
        break;
      }
      case kGlue: {
        if (tok.size() != 5) syntax_error(line, "expected 'glue <tet> <face> <target> <perm>'");
        long nu = index_token(line, tok[1], n, "tetrahedron");
        long face = index_token(line, tok[2], 4, "face");
        long target = index_token(line, tok[3], n, "tetrahedron");
        if (!t.gluing) t.gluing = GluingCombinatorics{std::vector<std::array<FaceGluing, 4>>(n)};
        if (glue_seen[nu][face]) syntax_error(line, "face glued twice");
        glue_seen[nu][face] = true;
        t.gluing->faces[nu][face] = FaceGluing{static_cast<int>(target), parse_perm(line, tok[4])};
        break;
      }
      case kFill: {
        if (tok.size() < 3) syntax_error(line, "expected 'fill <cusp> <p> <q>' or 'fill <cusp> complete'");
        long j = index_token(line, tok[1], h, "cusp");
        if (fill_seen[j]) syntax_error(line, "cusp " + tok[1] + " filled twice");
        fill_seen[j] = true;
        if (tok.size() == 3 && tok[2] == "complete") {
          fills[j] = Filling{};
        } else if (tok.size() == 4) {
          fills[j] = Filling{false, parse_long_token(line, tok[2]), parse_long_token(line, tok[3])};
        } else {
          syntax_error(line, "expected 'fill <cusp> <p> <q>' or 'fill <cusp> complete'");
        }
        break;
      }
      default:
        break;
    }
  }

  std::size_t given = static_cast<std::size_t>(std::count_if(shapes.begin(), shapes.end(), [](auto& s) { return s.has_value(); }));
  if (given != 0 && given != shapes.size()) {
    fail(Errc::DimensionMismatch, "shapes given for " + std::to_string(given) + " of " + std::to_string(n) +
                                      " tetrahedra");
  }
  for (auto& s : shapes) {
    if (s) t.shapes.push_back(*s);
  }
  std::size_t urows_given =
      static_cast<std::size_t>(std::count_if(urows.begin(), urows.end(), [](auto& r) { return r.has_value(); }));
  if (urows_given != 0) {
    if (urows_given != rows) {
      fail(Errc::DimensionMismatch, "U has " + std::to_string(urows_given) + " rows, expected " +
                                        std::to_string(rows));
    }
    IntMatrix u(rows, static_cast<std::size_t>(2 * n));
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < u.cols(); ++j) u(i, j) = (*urows[i])[j];
    }
    t.u = std::move(u);
  } else if (t.d) {
    fail(Errc::DimensionMismatch, "dvec given without U");
  }
  t.fillings = std::move(fills);
  return t;
}

std::string serialize_triangulation(const Triangulation& t) {
  std::ostringstream out;
  out << "tets " << t.n << "\ncusps " << t.h << "\n";
  if (t.field) out << field_line(*t.field) << "\n";
  for (std::size_t i = 0; i < t.shapes.size(); ++i) {
    const auto& s = t.shapes[i];
    out << "shape " << i << " ";
    if (s.is_exact()) {
      out << "exact " << s.exact().to_string();
    } else {
      out << s.numeric().re.to_exact_string() << " " << s.numeric().im.to_exact_string();
    }
    out << "\n";
  }
  if (t.u) {
    for (std::size_t i = 0; i < t.u->rows(); ++i) {
      out << "urow " << i;
      for (std::size_t j = 0; j < t.u->cols(); ++j) out << " " << (*t.u)(i, j).get_str();
      out << "\n";
    }
  }
  if (t.d) {
    out << "dvec";
    for (const auto& v : *t.d) out << " " << v.get_str();
    out << "\n";
  }
  if (t.gluing) {
    for (std::size_t nu = 0; nu < t.gluing->faces.size(); ++nu) {
      for (int f = 0; f < 4; ++f) {
        const auto& g = t.gluing->faces[nu][f];
        if (g.target < 0) continue;
        out << "glue " << nu << " " << f << " " << g.target << " ";
        for (int v : g.perm) out << v;
        out << "\n";
      }
    }
  }
  for (int j = 0; j < t.h; ++j) {
    const Filling& f = j < static_cast<int>(t.fillings.size()) ? t.fillings[j] : Filling{};
    out << "fill " << j << " ";
    if (f.complete) {
      out << "complete";
    } else {
      out << f.p << " " << f.q;
    }
    out << "\n";
  }
  return out.str();
}

EdgeSystem edge_equations(const GluingCombinatorics& g) {
  const int n = static_cast<int>(g.faces.size());
  std::vector<int> parent(6 * n);
  std::iota(parent.begin(), parent.end(), 0);
  for (int t = 0; t < n; ++t) {
    for (int f = 0; f < 4; ++f) {
      const FaceGluing& fg = g.faces[t][f];
      if (fg.target < 0 || fg.target >= n) {
        fail(Errc::OpenFace, "face " + std::to_string(f) + " of tetrahedron " + std::to_string(t) + " is unglued");
      }
      const FaceGluing& back = g.faces[fg.target][fg.perm[f]];
      bool inverse = back.target == t;
      for (int v = 0; v < 4 && inverse; ++v) inverse = back.perm[fg.perm[v]] == v;
      if (!inverse) {
        fail(Errc::Inconsistent, "gluing of face " + std::to_string(f) + " of tetrahedron " + std::to_string(t) +
                                     " is not matched by its partner");
      }
      for (int a = 0; a < 4; ++a) {
        for (int b = a + 1; b < 4; ++b) {
          if (a == f || b == f) continue;
          int x = find_root(parent, 6 * t + edge_slot(a, b));
          int y = find_root(parent, 6 * fg.target + edge_slot(fg.perm[a], fg.perm[b]));
          if (x != y) parent[std::max(x, y)] = std::min(x, y);
        }
      }
    }
  }
  std::vector<int> class_of(6 * n, -1);
  std::vector<int> roots;
  for (int s = 0; s < 6 * n; ++s) {
    int r = find_root(parent, s);
    auto it = std::find(roots.begin(), roots.end(), r);
    if (it == roots.end()) {
      roots.push_back(r);
      class_of[s] = static_cast<int>(roots.size()) - 1;
    } else {
      class_of[s] = static_cast<int>(it - roots.begin());
    }
  }
  EdgeSystem sys{IntMatrix(roots.size(), static_cast<std::size_t>(2 * n), Integer(0)),
                 std::vector<Integer>(roots.size(), Integer(2))};
  // slots 0..5 are edges 01, 02, 03, 12, 13, 23
  static const int kind[6] = {0, 1, 2, 2, 1, 0};
  for (int t = 0; t < n; ++t) {
    for (int e = 0; e < 6; ++e) {
      std::size_t row = static_cast<std::size_t>(class_of[6 * t + e]);
      switch (kind[e]) {
        case 0:  // z
          sys.rows(row, t) += 1;
          break;
        case 1:  // 1/(1-z)
          sys.rows(row, n + t) -= 1;
          break;
        default:  // 1 - 1/z = -(1-z)/z
          sys.rows(row, t) -= 1;
          sys.rows(row, n + t) += 1;
          sys.d[row] -= 1;
          break;
      }
    }
  }
  return sys;
}

Triangulation disjoint_union(const Triangulation& a, const Triangulation& b) {
  if (a.has_shapes() != b.has_shapes()) fail(Errc::InvalidArgument, "only one triangulation has shapes");
  if (a.field || b.field) {
    if (!a.field || !b.field || !same_field(a.field, b.field)) {
      fail(Errc::FieldMismatch, "triangulations are over different fields");
    }
  }
  Triangulation t;
  t.n = a.n + b.n;
  t.h = a.h + b.h;
  t.field = a.field;
  t.shapes = a.shapes;
  t.shapes.insert(t.shapes.end(), b.shapes.begin(), b.shapes.end());
  t.fillings = a.fillings;
  t.fillings.resize(a.h);
  auto bf = b.fillings;
  bf.resize(b.h);
  t.fillings.insert(t.fillings.end(), bf.begin(), bf.end());

  if (a.u.has_value() != b.u.has_value()) fail(Errc::InvalidArgument, "only one triangulation has U");
  if (a.u) {
    const std::size_t rows = static_cast<std::size_t>(t.n + 2 * t.h);
    IntMatrix u(rows, static_cast<std::size_t>(2 * t.n), Integer(0));
    std::vector<Integer> d(rows, Integer(0));
    bool have_d = a.d && b.d;
    auto place = [&](const Triangulation& s, int col_offset, int edge_offset, int cusp_offset) {
      for (int i = 0; i < s.n + 2 * s.h; ++i) {
        std::size_t row = i < s.n ? edge_offset + i : t.n + 2 * cusp_offset + (i - s.n);
        for (int j = 0; j < s.n; ++j) {
          u(row, col_offset + j) = (*s.u)(i, j);
          u(row, t.n + col_offset + j) = (*s.u)(i, s.n + j);
        }
        if (have_d) d[row] = (*s.d)[i];
      }
    };
    place(a, 0, 0, 0);
    place(b, a.n, a.n, a.h);
    t.u = std::move(u);
    if (have_d) t.d = std::move(d);
  }
  if (a.gluing && b.gluing) {
    GluingCombinatorics g = *a.gluing;
    for (auto faces : b.gluing->faces) {
      for (auto& f : faces) {
        if (f.target >= 0) f.target += a.n;
      }
      g.faces.push_back(faces);
    }
    t.gluing = std::move(g);
  }
  return t;
}

std::vector<Complex> numeric_shapes(const Triangulation& t, long bits, const std::optional<Complex>& root) {
  bool exact = std::any_of(t.shapes.begin(), t.shapes.end(), [](const Generator& g) { return g.is_exact(); });
  std::optional<Complex> r = root;
  if (exact && !r) r = geometric_root(t, bits);
  std::vector<Complex> out;
  out.reserve(t.shapes.size());
  for (const auto& s : t.shapes) out.push_back(s.evaluate(r ? &*r : nullptr, bits));
  return out;
}

Complex geometric_root(const Triangulation& t, long bits) {
  if (!t.field) fail(Errc::RequiresExactField, "triangulation has no shape field");
  auto set = embeddings(t.field, std::max(bits, 64L));
  std::optional<Complex> best;
  Real best_volume(bits);
  for (const auto& root : set.all_roots()) {
    std::vector<Complex> z;
    for (const auto& s : t.shapes) z.push_back(s.evaluate(&root, bits));
    if (t.u) {
      try {
        auto d = infer_d(*t.u, z, bits);
        if (t.d && d != *t.d) continue;
      } catch (const Error& e) {
        if (e.code() != Errc::NotIntegral) throw;
        continue;
      }
    }
    Real vol(0, bits);
    for (const auto& zi : z) vol += bloch_wigner(zi, bits);
    if (!best || vol > best_volume) {
      best = root;
      best_volume = vol;
    }
  }
  if (!best) fail(Errc::NotIntegral, "no embedding of the shape field satisfies U Z = pi i d");
  return *best;
}

std::vector<Complex> log_parameters(const std::vector<Complex>& shapes) {
  std::vector<Complex> z;
  z.reserve(2 * shapes.size());
  for (const auto& s : shapes) z.push_back(log(s));
  for (const auto& s : shapes) z.push_back(log(1 - s));
  return z;
}

namespace {

std::vector<Complex> row_products(const IntMatrix& u, const std::vector<Complex>& shapes, long bits) {
  if (u.cols() != 2 * shapes.size()) fail(Errc::DimensionMismatch, "U does not match the number of shapes");
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    Complex one(1, 0, bits);
    if (abs(shapes[i]).is_zero() || abs(shapes[i] - one).is_zero()) {
      fail(Errc::DegenerateShape, "shape " + std::to_string(i) + " is 0 or 1");
    }
  }
  auto z = log_parameters(shapes);
  std::vector<Complex> out;
  for (std::size_t i = 0; i < u.rows(); ++i) {
    Complex w(bits);
    for (std::size_t j = 0; j < u.cols(); ++j) {
      if (u(i, j) != 0) w += z[j] * Real(u(i, j), bits);
    }
    out.push_back(w);
  }
  return out;
}

}  // namespace

std::vector<Integer> infer_d(const IntMatrix& u, const std::vector<Complex>& shapes, long bits) {
  auto w = row_products(u, shapes, bits);
  Real p = pi(bits);
  Real tol = pow2(-bits / 4, bits);
  std::vector<Integer> d;
  for (std::size_t i = 0; i < w.size(); ++i) {
    Real x = w[i].im / p;
    Integer k = round_to_integer(x);
    if (abs(w[i].re / p) > tol || abs(x - Real(k, bits)) > tol) {
      fail(Errc::NotIntegral, "row " + std::to_string(i) + ": U Z / (pi i) = " + x.to_fixed(12) + " + " +
                                     (-w[i].re / p).to_fixed(12) + " i is not integral");
    }
    d.push_back(k);
  }
  return d;
}

std::vector<Integer> infer_d(const Triangulation& t, long bits) {
  if (!t.u) fail(Errc::InvalidArgument, "triangulation has no U");
  if (!t.has_shapes()) fail(Errc::InvalidArgument, "triangulation has no shapes");
  return infer_d(*t.u, numeric_shapes(t, bits), bits);
}

Real system_residual(const IntMatrix& u, const std::vector<Integer>& d, const std::vector<Complex>& shapes,
                     long bits) {
  auto w = row_products(u, shapes, bits);
  Real p = pi(bits);
  Real worst(0, bits);
  for (std::size_t i = 0; i < w.size(); ++i) {
    Complex r = w[i];
    r.im -= p * Real(d[i], bits);
    worst = std::max(worst, abs(r));
  }
  return worst;
}

PreBlochElement bloch_invariant(const Triangulation& t) {
  check_shapes_nondegenerate(t);
  bool exact = !t.shapes.empty() && t.shapes.front().is_exact();
  PreBlochElement e = exact ? PreBlochElement(t.field) : PreBlochElement();
  for (const auto& s : t.shapes) e.add(s, Integer(1));
  return six_fold_normalize(e);
}

void validate(const Triangulation& t, long bits) {
  if (!t.shapes.empty() && static_cast<int>(t.shapes.size()) != t.n) {
    fail(Errc::DimensionMismatch, "expected " + std::to_string(t.n) + " shapes");
  }
  if (t.u && (t.u->rows() != static_cast<std::size_t>(t.n + 2 * t.h) ||
              t.u->cols() != static_cast<std::size_t>(2 * t.n))) {
    fail(Errc::DimensionMismatch, "U must be (n+2h) x 2n");
  }
  if (t.d && t.d->size() != static_cast<std::size_t>(t.n + 2 * t.h)) {
    fail(Errc::DimensionMismatch, "d must have n+2h entries");
  }
  if (!t.fillings.empty() && static_cast<int>(t.fillings.size()) != t.h) {
    fail(Errc::DimensionMismatch, "expected one filling per cusp");
  }
  check_shapes_nondegenerate(t);
  if (t.gluing) {
    if (static_cast<int>(t.gluing->faces.size()) != t.n) fail(Errc::DimensionMismatch, "gluing size differs from n");
    edge_equations(*t.gluing);
  }
  if (t.u && t.has_shapes()) {
    auto d = infer_d(*t.u, numeric_shapes(t, bits), bits);
    if (t.d && d != *t.d) fail(Errc::NotIntegral, "shapes do not satisfy U Z = pi i d for the given d");
  }
}

std::optional<FieldElement> recognize_in_field(const Complex& z, const FieldPtr& field, const Complex& root,
                                               long bits) {
  const int deg = field->degree();
  std::vector<std::vector<Real>> vectors;
  vectors.push_back({z.re, z.im});
  Complex power(1, 0, bits);
  for (int k = 0; k < deg; ++k) {
    vectors.push_back({power.re, power.im});
    power *= root;
  }
  Integer bound;
  mpz_ui_pow_ui(bound.get_mpz_t(), 2, static_cast<unsigned long>(std::max(8L, bits / (2 * (deg + 1)))));
  auto rel = find_integer_relation(vectors, bits - 8, bound, pow2(-bits / 2, bits));
  if (!rel || rel->coeffs[0] == 0) return std::nullopt;
  std::vector<Rational> c;
  for (int k = 0; k < deg; ++k) {
    Rational q(-rel->coeffs[k + 1], rel->coeffs[0]);
    q.canonicalize();
    c.push_back(q);
  }
  FieldElement e(field, std::move(c));
  if (!near(eval_embedding(e, root, bits), z, pow2(-bits / 2, bits))) return std::nullopt;
  return e;
}

}  // namespace bloch
