#include "bloch/scissors.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <set>
#include <sstream>

#include "bloch/error.hpp"
#include "bloch/text.hpp"

namespace bloch {

namespace {

[[noreturn]] void invalid(const std::string& what) { fail(Errc::InvalidPolyhedron, what); }

// Splits a cycle along its diagonals into triangles.
void split_face(const std::vector<std::size_t>& cycle, std::vector<std::pair<std::size_t, std::size_t>> diags,
                std::size_t face, std::vector<Triangle>& out) {
  if (cycle.size() == 3) {
    if (!diags.empty()) invalid("face " + std::to_string(face) + " has too many diagonals");
    out.push_back({cycle[0], cycle[1], cycle[2]});
    return;
  }
  if (diags.empty()) invalid("face " + std::to_string(face) + " is not triangulated");
  auto [a, b] = diags.back();
  diags.pop_back();
  auto ia = std::find(cycle.begin(), cycle.end(), a) - cycle.begin();
  auto ib = std::find(cycle.begin(), cycle.end(), b) - cycle.begin();
  const auto n = static_cast<std::ptrdiff_t>(cycle.size());
  if (ia == n || ib == n) invalid("diagonal " + std::to_string(a) + "-" + std::to_string(b) + " leaves face " +
                                  std::to_string(face));
  if (ia > ib) std::swap(ia, ib);
  if (ib - ia == 1 || (ia == 0 && ib == n - 1)) {
    invalid("diagonal " + std::to_string(a) + "-" + std::to_string(b) + " is an edge of face " + std::to_string(face));
  }
  std::vector<std::size_t> left(cycle.begin() + ia, cycle.begin() + ib + 1);
  std::vector<std::size_t> right(cycle.begin() + ib, cycle.end());
  right.insert(right.end(), cycle.begin(), cycle.begin() + ia + 1);
  auto has = [](const std::vector<std::size_t>& c, std::size_t v) { return std::find(c.begin(), c.end(), v) != c.end(); };
  std::vector<std::pair<std::size_t, std::size_t>> dl, dr;
  for (const auto& d : diags) {
    bool in_left = has(left, d.first) && has(left, d.second);
    bool in_right = has(right, d.first) && has(right, d.second);
    if (in_left && in_right) invalid("repeated diagonal in face " + std::to_string(face));
    if (in_left) {
      dl.push_back(d);
    } else if (in_right) {
      dr.push_back(d);
    } else {
      invalid("crossing diagonals in face " + std::to_string(face));
    }
  }
  split_face(left, dl, face, out);
  split_face(right, dr, face, out);
}

bool same_point(const ProjectivePoint& a, const ProjectivePoint& b) {
  if (a.is_infinity() || b.is_infinity()) return a.is_infinity() && b.is_infinity();
  return same_generator(a.finite(), b.finite());
}

// +1 or -1: the parity of the permutation taking tuple a to tuple b (same set).
int relative_parity(std::array<std::size_t, 4> a, const std::array<std::size_t, 4>& b) {
  int sign = 1;
  for (std::size_t i = 0; i < 4; ++i) {
    auto j = static_cast<std::size_t>(std::find(a.begin(), a.end(), b[i]) - a.begin());
    if (j != i) {
      std::swap(a[i], a[j]);
      sign = -sign;
    }
  }
  return sign;
}

bool same_vertex_set(std::array<std::size_t, 4> a, std::array<std::size_t, 4> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

FieldPtr field_of_points(const std::vector<ProjectivePoint>& pts) {
  for (const auto& p : pts) {
    if (!p.is_infinity() && p.finite().is_exact()) return p.finite().exact().field();
  }
  return nullptr;
}

}  // namespace

std::vector<Triangle> face_triangles(const IdealPolyhedron& p) {
  const std::size_t nv = p.vertices.size();
  if (nv < 4) invalid("a polyhedron needs at least 4 vertices");
  if (p.orientation != 1 && p.orientation != -1) invalid("orientation must be +1 or -1");
  for (std::size_t i = 0; i < nv; ++i) {
    for (std::size_t j = i + 1; j < nv; ++j) {
      if (same_point(p.vertices[i], p.vertices[j])) {
        fail(Errc::NotDistinct, "vertices " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
      }
    }
  }
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> diags(p.faces.size());
  for (const auto& d : p.diagonals) {
    if (d.face >= p.faces.size()) invalid("diagonal on unknown face " + std::to_string(d.face));
    diags[d.face].emplace_back(d.a, d.b);
  }
  std::vector<Triangle> tris;
  for (std::size_t f = 0; f < p.faces.size(); ++f) {
    const auto& c = p.faces[f];
    if (c.size() < 3) invalid("face " + std::to_string(f) + " has fewer than 3 vertices");
    std::set<std::size_t> distinct(c.begin(), c.end());
    if (distinct.size() != c.size()) invalid("face " + std::to_string(f) + " repeats a vertex");
    if (*distinct.rbegin() >= nv) invalid("face " + std::to_string(f) + " uses an unknown vertex");
    split_face(c, diags[f], f, tris);
  }
  std::map<std::pair<std::size_t, std::size_t>, int> directed;
  std::set<std::size_t> used;
  for (const auto& t : tris) {
    for (int k = 0; k < 3; ++k) {
      used.insert(t[k]);
      if (++directed[{t[k], t[(k + 1) % 3]}] > 1) {
        invalid("edge " + std::to_string(t[k]) + "->" + std::to_string(t[(k + 1) % 3]) + " is used twice");
      }
    }
  }
  for (const auto& [e, n] : directed) {
    if (!directed.count({e.second, e.first})) {
      invalid("edge " + std::to_string(e.first) + "-" + std::to_string(e.second) + " borders only one triangle");
    }
  }
  if (used.size() != nv) invalid("a vertex lies on no face");
  const long edges = static_cast<long>(directed.size() / 2);
  if (static_cast<long>(nv) - edges + static_cast<long>(tris.size()) != 2) {
    invalid("the faces do not close up into a sphere (V - E + T != 2)");
  }
  return tris;
}

void validate(const IdealPolyhedron& p) { face_triangles(p); }

PreBlochElement decomposition_class(const Decomposition& d) {
  PreBlochElement e(d.field);
  for (const auto& s : d.simplices) {
    const auto& v = s.v;
    try {
      e.add(cross_ratio(d.points[v[0]], d.points[v[1]], d.points[v[2]], d.points[v[3]]), s.sign);
    } catch (const Error& err) {
      if (err.code() != Errc::NotDistinct) throw;
      fail(Errc::DegenerateSimplex, "simplex with two equal ideal vertices");
    }
  }
  return e;
}

Decomposition cone_simplices(const IdealPolyhedron& p, std::size_t apex) {
  if (apex >= p.vertices.size()) fail(Errc::InvalidArgument, "apex is not a vertex");
  Decomposition d;
  d.points = p.vertices;
  d.field = field_of_points(p.vertices);
  for (const auto& t : face_triangles(p)) {
    if (std::find(t.begin(), t.end(), apex) != t.end()) continue;
    d.simplices.push_back({{apex, t[0], t[1], t[2]}, p.orientation});
  }
  return d;
}

PreBlochElement cone_decomposition(const IdealPolyhedron& p, std::size_t apex) {
  return decomposition_class(cone_simplices(p, apex));
}

PreBlochElement polyhedron_class(const IdealPolyhedron& p) { return six_fold_normalize(cone_decomposition(p, 0)); }

Decomposition cycle_move(const Decomposition& d, const std::array<std::size_t, 5>& q) {
  if (std::set<std::size_t>(q.begin(), q.end()).size() != 5) {
    fail(Errc::NotAFiveTermConfiguration, "the configuration needs five distinct points");
  }
  auto face = [&](int omit) {
    std::array<std::size_t, 4> s{};
    std::size_t k = 0;
    for (int i = 0; i < 5; ++i) {
      if (i != omit) s[k++] = q[static_cast<std::size_t>(i)];
    }
    return s;
  };
  const std::vector<int> even = {0, 2, 4}, odd = {1, 3};
  for (const auto* side : {&even, &odd}) {
    const auto& other = side == &even ? odd : even;
    // Find every simplex of this side, all with one common orientation.
    std::vector<std::size_t> hits;
    int orient = 0;
    bool ok = true;
    for (int omit : *side) {
      auto target = face(omit);
      std::size_t found = d.simplices.size();
      for (std::size_t j = 0; j < d.simplices.size(); ++j) {
        if (std::find(hits.begin(), hits.end(), j) != hits.end()) continue;
        if (same_vertex_set(d.simplices[j].v, target)) {
          found = j;
          break;
        }
      }
      if (found == d.simplices.size()) {
        ok = false;
        break;
      }
      int o = d.simplices[found].sign * relative_parity(d.simplices[found].v, target);
      if (orient != 0 && o != orient) {
        ok = false;
        break;
      }
      orient = o;
      hits.push_back(found);
    }
    if (!ok) continue;
    Decomposition out;
    out.points = d.points;
    out.field = d.field;
    for (std::size_t j = 0; j < d.simplices.size(); ++j) {
      if (std::find(hits.begin(), hits.end(), j) == hits.end()) out.simplices.push_back(d.simplices[j]);
    }
    for (int omit : other) out.simplices.push_back({face(omit), orient});
    return out;
  }
  fail(Errc::NotAFiveTermConfiguration, "the decomposition contains neither side of the five-point configuration");
}

PreBlochElement configuration_five_term(const std::vector<ProjectivePoint>& points,
                                        const std::array<std::size_t, 5>& q) {
  for (auto i : q) {
    if (i >= points.size()) fail(Errc::InvalidArgument, "configuration point out of range");
  }
  const auto& a = points[q[0]];
  const auto& b = points[q[1]];
  const auto& c = points[q[2]];
  // cr(q0, q1, q2, w) is the inverse of the image of w.
  auto image = [&](std::size_t i) -> Generator {
    Generator g = cross_ratio(a, b, c, points[i]);
    if (g.is_exact()) return Generator(g.exact().inverse());
    Complex z = g.numeric();
    return Generator(Complex(1, 0, z.precision()) / z);
  };
  return five_term(image(q[3]), image(q[4]));
}

IdealPolyhedron parse_polyhedron(std::istream& in, long bits) {
  IdealPolyhedron p;
  p.bits = bits;
  struct RawVertex {
    bool inf = false;
    std::string re, im;
    Line line;
  };
  std::vector<std::optional<RawVertex>> raw;
  bool have_orientation = false;
  auto lines = read_lines(in);
  if (lines.empty()) fail(Errc::SyntaxError, "empty polyhedron file");
  for (const auto& line : lines) {
    const auto& tk = line.tokens;
    const std::string& key = tk[0];
    if (key == "vertex") {
      if (tk.size() != 3 && tk.size() != 4) syntax_error(line, "expected 'vertex <i> <re> <im>' or 'vertex <i> inf'");
      long i = parse_long_token(line, tk[1]);
      if (i < 0 || i > 100000) syntax_error(line, "vertex index out of range");
      if (static_cast<std::size_t>(i) >= raw.size()) raw.resize(static_cast<std::size_t>(i) + 1);
      if (raw[static_cast<std::size_t>(i)]) syntax_error(line, "vertex " + tk[1] + " defined twice");
      RawVertex v;
      v.line = line;
      if (tk.size() == 3) {
        if (tk[2] != "inf") syntax_error(line, "expected 'inf' or a real and an imaginary part");
        v.inf = true;
      } else {
        v.re = tk[2];
        v.im = tk[3];
      }
      raw[static_cast<std::size_t>(i)] = v;
    } else if (key == "face") {
      if (tk.size() < 4) syntax_error(line, "a face needs at least 3 vertices");
      std::vector<std::size_t> c;
      for (std::size_t k = 1; k < tk.size(); ++k) {
        long v = parse_long_token(line, tk[k]);
        if (v < 0) syntax_error(line, "negative vertex index");
        c.push_back(static_cast<std::size_t>(v));
      }
      p.faces.push_back(std::move(c));
    } else if (key == "diag") {
      if (tk.size() != 4) syntax_error(line, "expected 'diag <face> <i> <j>'");
      long f = parse_long_token(line, tk[1]), a = parse_long_token(line, tk[2]), b = parse_long_token(line, tk[3]);
      if (f < 0 || a < 0 || b < 0) syntax_error(line, "negative index");
      p.diagonals.push_back({static_cast<std::size_t>(f), static_cast<std::size_t>(a), static_cast<std::size_t>(b)});
    } else if (key == "orientation") {
      if (tk.size() != 2 || have_orientation) syntax_error(line, "expected a single 'orientation +1|-1'");
      long o = parse_long_token(line, tk[1]);
      if (o != 1 && o != -1) syntax_error(line, "orientation must be +1 or -1");
      p.orientation = static_cast<int>(o);
      have_orientation = true;
    } else {
      syntax_error(line, "unknown keyword '" + key + "'");
    }
  }
  bool exact = true, complex = false;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!raw[i]) fail(Errc::SyntaxError, "vertex " + std::to_string(i) + " is missing");
    if (raw[i]->inf) continue;
    for (const auto* s : {&raw[i]->re, &raw[i]->im}) {
      try {
        parse_rational(*s);
      } catch (const Error&) {
        exact = false;
      }
    }
    if (exact && parse_rational(raw[i]->im) != 0) complex = true;
  }
  FieldPtr field = complex ? NumberField::gaussian() : NumberField::rationals();
  for (const auto& r : raw) {
    if (r->inf) {
      p.vertices.push_back(ProjectivePoint::infinity());
    } else if (exact) {
      auto re = parse_rational(r->re), im = parse_rational(r->im);
      std::vector<Rational> c = complex ? std::vector<Rational>{re, im} : std::vector<Rational>{re};
      p.vertices.emplace_back(FieldElement(field, c));
    } else {
      p.vertices.emplace_back(Complex(parse_real_token(r->line, r->re, bits), parse_real_token(r->line, r->im, bits)));
    }
  }
  validate(p);
  return p;
}

std::string serialize_polyhedron(const IdealPolyhedron& p) {
  std::ostringstream os;
  for (std::size_t i = 0; i < p.vertices.size(); ++i) {
    const auto& v = p.vertices[i];
    os << "vertex " << i << " ";
    if (v.is_infinity()) {
      os << "inf";
    } else if (v.finite().is_exact()) {
      const auto& c = v.finite().exact().coeffs();
      Rational re = c.empty() ? Rational(0) : c[0];
      Rational im = c.size() > 1 ? c[1] : Rational(0);
      os << rational_to_string(re) << " " << rational_to_string(im);
    } else {
      const auto& z = v.finite().numeric();
      os << z.re.to_exact_string() << " " << z.im.to_exact_string();
    }
    os << "\n";
  }
  for (const auto& f : p.faces) {
    os << "face";
    for (auto v : f) os << " " << v;
    os << "\n";
  }
  for (const auto& d : p.diagonals) os << "diag " << d.face << " " << d.a << " " << d.b << "\n";
  if (p.orientation != 1) os << "orientation " << p.orientation << "\n";
  return os.str();
}

}  // namespace bloch
