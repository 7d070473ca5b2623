#include "bloch/prebloch.hpp"

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

FieldElement one_like(const FieldElement& z) { return FieldElement::constant(z.field(), 1); }
Complex one_like(const Complex& z) { return Complex(1, 0, z.precision()); }
FieldElement inv(const FieldElement& z) { return z.inverse(); }
Complex inv(const Complex& z) { return inverse(z); }

template <typename T>
std::vector<OrbitImage> orbit_of(const T& z) {
  const T one = one_like(z);
  const T iz = inv(z);
  return {{Generator(z), 1},
          {Generator(one - iz), 1},
          {Generator(inv(one - z)), 1},
          {Generator(iz), -1},
          {Generator(z * inv(z - one)), -1},
          {Generator(one - z), -1}};
}

bool numeric_less(const Complex& a, const Complex& b) {
  if (a.re != b.re) return a.re < b.re;
  return a.im < b.im;
}

bool term_less(const Term& a, const Term& b) {
  if (a.z.is_exact() != b.z.is_exact()) return a.z.is_exact();
  if (a.z.is_exact()) return lex_less(a.z.exact(), b.z.exact());
  return numeric_less(a.z.numeric(), b.z.numeric());
}

Real numeric_tolerance(const Complex& a, const Complex& b) {
  long bits = std::min(a.precision(), b.precision());
  return pow2(-bits / 2, bits);
}

bool points_equal(const Generator& a, const Generator& b) { return same_generator(a, b); }

// Cross ratio over a ring T, `inf` the index of the point at infinity or -1.
template <typename T>
T cross_ratio_of(const std::vector<const T*>& p, int inf) {
  auto d = [&](int i, int j) { return *p[static_cast<std::size_t>(i)] - *p[static_cast<std::size_t>(j)]; };
  switch (inf) {
    case 0: return d(2, 1) * inv(d(3, 1));
    case 1: return d(3, 0) * inv(d(2, 0));
    case 2: return d(3, 0) * inv(d(3, 1));
    case 3: return d(2, 1) * inv(d(2, 0));
    default: return d(2, 1) * d(3, 0) * inv(d(2, 0) * d(3, 1));
  }
}

long lcm_torsion_order(int degree) {
  // every root of unity in a field of degree d has order m with phi(m) | d
  long w = 1;
  for (long m = 1; m <= 2L * degree * degree + 2; ++m) {
    long phi = m;
    long n = m;
    for (long p = 2; p * p <= n; ++p) {
      if (n % p != 0) continue;
      while (n % p == 0) n /= p;
      phi -= phi / p;
    }
    if (n > 1) phi -= phi / n;
    if (degree % phi == 0) w = std::lcm(w, m);
  }
  return w;
}

// Pairwise coprime integers > 1 such that each input factors over them.
std::vector<Integer> coprime_base(std::vector<Integer> values) {
  std::vector<Integer> base;
  for (auto v : values) {
    v = abs(v);
    if (v > 1) base.push_back(v);
  }
  bool changed = true;
  while (changed) {
    changed = false;
    std::sort(base.begin(), base.end());
    base.erase(std::unique(base.begin(), base.end()), base.end());
    for (std::size_t i = 0; i < base.size() && !changed; ++i) {
      for (std::size_t j = i + 1; j < base.size() && !changed; ++j) {
        Integer g;
        mpz_gcd(g.get_mpz_t(), base[i].get_mpz_t(), base[j].get_mpz_t());
        if (g == 1) continue;
        Integer a = base[i] / g, b = base[j] / g;
        base.erase(base.begin() + static_cast<std::ptrdiff_t>(j));
        base.erase(base.begin() + static_cast<std::ptrdiff_t>(i));
        for (const auto& x : {a, b, g}) {
          if (x > 1) base.push_back(x);
        }
        changed = true;
      }
    }
  }
  return base;
}

long valuation(Integer n, const Integer& b) {
  n = abs(n);
  if (n == 0) return 0;
  long v = 0;
  while (n % b == 0) {
    n /= b;
    ++v;
  }
  return v;
}

const FieldPtr& require_exact_field(const PreBlochElement& e) {
  for (const auto& t : e.terms()) {
    if (!t.z.is_exact()) fail(Errc::RequiresExactField, "operation needs exact generators over a number field");
  }
  return e.field();
}

}  // namespace

Complex Generator::evaluate(const Complex* root, long bits) const {
  if (!is_exact()) return numeric().rounded(bits);
  if (root == nullptr) fail(Errc::InvalidArgument, "an embedding is needed to evaluate an exact generator");
  return eval_embedding(exact(), *root, bits);
}

bool Generator::is_zero() const {
  if (is_exact()) return exact().is_zero();
  return numeric().re.is_zero() && numeric().im.is_zero();
}

bool Generator::is_one() const {
  if (is_exact()) return exact().is_one();
  return numeric().im.is_zero() && numeric().re == Real(1, 64);
}

std::string Generator::to_string() const {
  if (is_exact()) return "[" + exact().to_string() + "]";
  return "(" + numeric().re.to_exact_string() + " " + numeric().im.to_exact_string() + ")";
}

bool same_generator(const Generator& a, const Generator& b) {
  if (a.is_exact() != b.is_exact()) return false;
  if (a.is_exact()) return same_field(a.exact().field(), b.exact().field()) && a.exact() == b.exact();
  return near(a.numeric(), b.numeric(), numeric_tolerance(a.numeric(), b.numeric()));
}

Generator cross_ratio(const ProjectivePoint& z1, const ProjectivePoint& z2, const ProjectivePoint& z3,
                      const ProjectivePoint& z4) {
  const ProjectivePoint* pts[4] = {&z1, &z2, &z3, &z4};
  int inf = -1;
  bool exact = false, numeric = false;
  for (int i = 0; i < 4; ++i) {
    if (pts[i]->is_infinity()) {
      if (inf >= 0) fail(Errc::NotDistinct, "two points at infinity");
      inf = i;
    } else if (pts[i]->finite().is_exact()) {
      exact = true;
    } else {
      numeric = true;
    }
  }
  if (exact && numeric) fail(Errc::FieldMismatch, "cross ratio mixes exact and numeric points");
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      if (pts[i]->is_infinity() || pts[j]->is_infinity()) continue;
      if (points_equal(pts[i]->finite(), pts[j]->finite())) fail(Errc::NotDistinct, "cross ratio of coincident points");
    }
  }
  // any finite placeholder keeps indices aligned; the infinite slot is never read
  const Generator* any = nullptr;
  for (int i = 0; i < 4; ++i) {
    if (!pts[i]->is_infinity()) any = &pts[i]->finite();
  }
  if (exact) {
    std::vector<const FieldElement*> p;
    for (int i = 0; i < 4; ++i) p.push_back(pts[i]->is_infinity() ? &any->exact() : &pts[i]->finite().exact());
    return Generator(cross_ratio_of<FieldElement>(p, inf));
  }
  std::vector<const Complex*> p;
  for (int i = 0; i < 4; ++i) p.push_back(pts[i]->is_infinity() ? &any->numeric() : &pts[i]->finite().numeric());
  return Generator(cross_ratio_of<Complex>(p, inf));
}

// ---------------------------------------------------------------------------

void PreBlochElement::add(const Generator& z, const Integer& n) {
  if (n == 0) return;
  if (z.is_zero() || z.is_one()) {
    ++dropped_;
    return;
  }
  if (z.is_exact()) {
    if (!field_) {
      if (!terms_.empty()) fail(Errc::FieldMismatch, "exact symbol added to a numeric element");
      field_ = z.exact().field();
    } else if (!same_field(field_, z.exact().field())) {
      fail(Errc::FieldMismatch, "symbol from a different number field");
    }
  } else if (field_) {
    fail(Errc::FieldMismatch, "numeric symbol added to an element over a number field");
  }
  for (auto it = terms_.begin(); it != terms_.end(); ++it) {
    if (same_generator(it->z, z)) {
      it->coeff += n;
      if (it->coeff == 0) terms_.erase(it);
      return;
    }
  }
  terms_.push_back({z, n});
}

bool PreBlochElement::is_exact() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.z.is_exact(); });
}

PreBlochElement& PreBlochElement::operator+=(const PreBlochElement& o) {
  for (const auto& t : o.terms_) add(t.z, t.coeff);
  dropped_ += o.dropped_;
  return *this;
}

PreBlochElement& PreBlochElement::operator-=(const PreBlochElement& o) {
  for (const auto& t : o.terms_) add(t.z, -t.coeff);
  dropped_ += o.dropped_;
  return *this;
}

PreBlochElement operator*(const Integer& n, const PreBlochElement& e) {
  PreBlochElement r(e.field_);
  for (const auto& t : e.terms_) r.add(t.z, n * t.coeff);
  return r;
}

std::vector<OrbitImage> six_fold_orbit(const Generator& z) {
  if (z.is_zero() || z.is_one()) fail(Errc::DegenerateShape, "orbit of a degenerate symbol");
  return z.is_exact() ? orbit_of(z.exact()) : orbit_of(z.numeric());
}

PreBlochElement six_fold_normalize(const PreBlochElement& e) {
  PreBlochElement out(e.field());
  for (const auto& t : e.terms()) {
    auto orbit = six_fold_orbit(t.z);
    std::size_t best = 0;
    if (t.z.is_exact()) {
      for (std::size_t i = 1; i < orbit.size(); ++i) {
        if (lex_less(orbit[i].z.exact(), orbit[best].z.exact())) best = i;
      }
    } else {
      const long bits = t.z.numeric().precision();
      Complex center(Rational(1, 2), Rational(0), bits);
      bool have = false;
      Real best_dist(bits);
      for (std::size_t i = 0; i < orbit.size(); ++i) {
        const Complex& w = orbit[i].z.numeric();
        if (w.im.sign() < 0) continue;
        Real dist = abs(w - center);
        if (!have || dist < best_dist || (dist == best_dist && w.re < orbit[best].z.numeric().re)) {
          best = i;
          best_dist = dist;
          have = true;
        }
      }
    }
    out.add(orbit[best].z, orbit[best].sign * t.coeff);
  }
  // deterministic order
  std::vector<Term> sorted = out.terms();
  std::sort(sorted.begin(), sorted.end(), term_less);
  PreBlochElement ordered(e.field());
  for (const auto& t : sorted) {
    // On the orbit of -1 an odd image fixes the symbol, so 2[z] = 0.
    Integer n = t.coeff;
    for (const auto& img : six_fold_orbit(t.z)) {
      if (img.sign < 0 && same_generator(img.z, t.z)) {
        n = n % 2;
        if (n < 0) n = -n;
        break;
      }
    }
    if (n != 0) ordered.add(t.z, n);
  }
  return ordered;
}

PreBlochElement five_term(const Generator& x, const Generator& y) {
  if (x.is_exact() != y.is_exact()) fail(Errc::FieldMismatch, "five-term arguments of different kinds");
  if (x.is_zero() || x.is_one() || y.is_zero() || y.is_one() || same_generator(x, y)) {
    fail(Errc::DegenerateFiveTerm, "five-term relation needs distinct x, y outside {0, 1}");
  }
  auto build = [](const auto& a, const auto& b) {
    const auto one = one_like(a);
    std::vector<std::pair<Generator, int>> entries{
        {Generator(a), 1},
        {Generator(b), -1},
        {Generator(b * inv(a)), 1},
        {Generator((one - inv(a)) * inv(one - inv(b))), -1},
        {Generator((one - a) * inv(one - b)), 1}};
    return entries;
  };
  auto entries = x.is_exact() ? build(x.exact(), y.exact()) : build(x.numeric(), y.numeric());
  PreBlochElement e(x.is_exact() ? x.exact().field() : FieldPtr());
  for (const auto& [g, s] : entries) e.add(g, s);
  return e;
}

Real volume_of_prebloch(const PreBlochElement& e, const std::optional<Complex>& root, long bits) {
  Real total(bits);
  for (const auto& t : e.terms()) {
    Complex w = t.z.evaluate(root ? &*root : nullptr, bits);
    total += bloch_wigner(w, bits) * Real(t.coeff, bits);
  }
  return total;
}

// ---------------------------------------------------------------------------

bool is_torsion_relation(const std::vector<FieldElement>& elements, const std::vector<Integer>& exponents) {
  if (elements.empty()) return true;
  if (exponents.size() != elements.size()) fail(Errc::DimensionMismatch, "relation length mismatch");
  FieldElement y = FieldElement::constant(elements[0].field(), 1);
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (exponents[i] == 0) continue;
    if (!exponents[i].fits_slong_p()) return false;
    y *= elements[i].pow(exponents[i].get_si());
  }
  return y.pow(lcm_torsion_order(y.field()->degree())).is_one();
}

RelationLattice multiplicative_relations(const std::vector<FieldElement>& elements, long bits) {
  RelationLattice out{elements, {}};
  const std::size_t m = elements.size();
  if (m == 0) return out;
  const FieldPtr field = elements[0].field();
  for (const auto& x : elements) {
    if (!same_field(x.field(), field)) fail(Errc::FieldMismatch, "relations between elements of different fields");
    if (x.is_zero()) fail(Errc::DivisionByZero, "multiplicative relations of zero");
  }

  EmbeddingSet emb = embeddings(field, bits);
  std::vector<Complex> places(emb.real_roots.size(), Complex(bits));
  for (std::size_t i = 0; i < emb.real_roots.size(); ++i) places[i] = Complex(emb.real_roots[i]);
  for (const auto& c : emb.complex_pairs) places.push_back(c);

  std::vector<std::vector<Real>> logs(m);
  std::vector<Rational> norms;
  std::vector<Integer> to_factor;
  for (std::size_t i = 0; i < m; ++i) {
    for (const auto& p : places) logs[i].push_back(log(abs(eval_embedding(elements[i], p, bits))));
    Rational n = norm(elements[i]);
    norms.push_back(n);
    to_factor.push_back(n.get_num());
    to_factor.push_back(n.get_den());
  }
  std::vector<Integer> base = coprime_base(to_factor);

  // Norm valuations cannot tell conjugate primes apart, so arguments at the
  // complex places join the lattice, each modulo 2 pi / w with one extra row.
  const std::size_t nreal = emb.real_roots.size();
  const std::size_t ncx = places.size() - nreal;
  std::vector<std::vector<Real>> args(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = nreal; j < places.size(); ++j) args[i].push_back(arg(eval_embedding(elements[i], places[j], bits)));
  }
  const Real turn = pi(bits) * 2 / Real(Integer(lcm_torsion_order(field->degree())), bits);

  const long scale = bits / 2;
  const Integer heavy = Integer(1) << (bits + 16);
  const std::size_t arg0 = m + places.size();
  const std::size_t base0 = arg0 + ncx;
  const std::size_t cols = base0 + base.size();
  IntMatrix lattice(m + ncx, cols, Integer(0));
  for (std::size_t i = 0; i < m; ++i) {
    lattice(i, i) = 1;
    for (std::size_t j = 0; j < places.size(); ++j) lattice(i, m + j) = round_to_integer(ldexp(logs[i][j], scale));
    for (std::size_t j = 0; j < ncx; ++j) lattice(i, arg0 + j) = round_to_integer(ldexp(args[i][j], scale));
    for (std::size_t b = 0; b < base.size(); ++b) {
      long v = valuation(norms[i].get_num(), base[b]) - valuation(norms[i].get_den(), base[b]);
      lattice(i, base0 + b) = heavy * v;
    }
  }
  for (std::size_t j = 0; j < ncx; ++j) lattice(m + j, arg0 + j) = round_to_integer(ldexp(turn, scale));
  IntMatrix reduced = lll_reduce(lattice);

  const Integer bound = 100000;
  Real log_tol = pow2(-bits / 4, bits);
  for (std::size_t r = 0; r < reduced.rows(); ++r) {
    std::vector<Integer> a(m);
    bool ok = true, zero = true;
    for (std::size_t i = 0; i < m; ++i) {
      a[i] = reduced(r, i);
      if (a[i] != 0) zero = false;
      if (abs(a[i]) > bound) ok = false;
    }
    for (std::size_t b = 0; b < base.size() && ok; ++b) {
      if (reduced(r, base0 + b) != 0) ok = false;
    }
    if (zero || !ok) continue;
    for (std::size_t j = 0; j < places.size() && ok; ++j) {
      Real s(bits);
      for (std::size_t i = 0; i < m; ++i) s += logs[i][j] * Real(a[i], bits);
      if (abs(s) > log_tol) ok = false;
    }
    if (!ok) continue;
    a = normalize_relation(std::move(a));
    if (!is_torsion_relation(elements, a)) continue;
    if (std::find(out.relations.begin(), out.relations.end(), a) == out.relations.end()) out.relations.push_back(a);
  }
  return out;
}

namespace {

struct WedgeData {
  std::vector<FieldElement> elements;
  std::vector<std::vector<Integer>> relations;
  WedgeElement wedge;
};

WedgeData compute_wedge(const PreBlochElement& e) {
  require_exact_field(e);
  WedgeData out;
  auto index_of = [&](const FieldElement& x) {
    for (std::size_t i = 0; i < out.elements.size(); ++i) {
      if (out.elements[i] == x) return i;
    }
    out.elements.push_back(x);
    return out.elements.size() - 1;
  };
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& t : e.terms()) {
    const FieldElement& z = t.z.exact();
    std::size_t a = index_of(z);
    std::size_t b = index_of(1 - z);
    pairs.emplace_back(a, b);
  }
  const std::size_t s = out.elements.size();
  if (s == 0) {
    out.wedge.certified = true;
    return out;
  }
  out.relations = multiplicative_relations(out.elements).relations;

  IntMatrix v = IntMatrix::identity(s);
  IntMatrix v_inv = IntMatrix::identity(s);
  std::size_t rank = 0;
  if (!out.relations.empty()) {
    Diagonalization dz = diagonalize(IntMatrix::from_rows(out.relations));
    v = dz.v;
    v_inv = dz.v_inverse;
    rank = dz.rank;
  }
  // Z^S / (saturated relations) has basis rows rank..s-1 of V^{-1}; the
  // coordinates of generator j are row j of V in those columns.
  const std::size_t q = s - rank;
  auto coords = [&](std::size_t j) {
    std::vector<Integer> c(q);
    for (std::size_t k = 0; k < q; ++k) c[k] = v(j, rank + k);
    return c;
  };
  IntMatrix mat(q, q, Integer(0));
  for (std::size_t t = 0; t < pairs.size(); ++t) {
    const Integer& n = e.terms()[t].coeff;
    auto a = coords(pairs[t].first);
    auto b = coords(pairs[t].second);
    for (std::size_t i = 0; i < q; ++i) {
      for (std::size_t j = 0; j < q; ++j) mat(i, j) += 2 * n * (a[i] * b[j] - b[i] * a[j]);
    }
  }
  for (std::size_t k = 0; k < q; ++k) {
    FieldElement g = FieldElement::constant(out.elements[0].field(), 1);
    for (std::size_t j = 0; j < s; ++j) {
      const Integer& ex = v_inv(rank + k, j);
      if (ex != 0) g *= out.elements[j].pow(ex.get_si());
    }
    out.wedge.basis.push_back(g);
  }
  bool zero = true;
  for (std::size_t i = 0; i < q && zero; ++i) {
    for (std::size_t j = 0; j < q; ++j) {
      if (mat(i, j) != 0) {
        zero = false;
        break;
      }
    }
  }
  out.wedge.matrix = std::move(mat);
  out.wedge.certified = zero;
  return out;
}

}  // namespace

WedgeElement wedge(const PreBlochElement& e) { return compute_wedge(e).wedge; }

BlochCertificate is_bloch(const PreBlochElement& e) {
  WedgeData data = compute_wedge(e);
  BlochCertificate cert;
  cert.verdict = data.wedge.certified ? BlochVerdict::CertifiedZero : BlochVerdict::LikelyNonzero;
  cert.elements = std::move(data.elements);
  cert.relations = std::move(data.relations);
  cert.residual_basis = std::move(data.wedge.basis);
  cert.wedge_matrix = std::move(data.wedge.matrix);
  return cert;
}

std::string verdict_name(BlochVerdict v) {
  return v == BlochVerdict::CertifiedZero ? "CertifiedZero" : "LikelyNonzero";
}

// ---------------------------------------------------------------------------

PreBlochElement parse_prebloch(std::istream& in, long bits) {
  std::vector<Line> lines = read_lines(in);
  FieldPtr field;
  std::size_t start = 0;
  if (!lines.empty() && lines[0].tokens[0] == "field") {
    field = parse_field_line(lines[0]);
    start = 1;
  }
  PreBlochElement e(field);
  for (std::size_t li = start; li < lines.size(); ++li) {
    const Line& line = lines[li];
    // normalise brackets into separate tokens
    std::string joined;
    for (const auto& t : line.tokens) joined += t + " ";
    std::string spaced;
    for (char c : joined) {
      if (c == '[' || c == ']' || c == '(' || c == ')' || c == '*') {
        spaced += ' ';
        spaced += c;
        spaced += ' ';
      } else {
        spaced += c;
      }
    }
    std::istringstream ss(spaced);
    std::vector<std::string> tok;
    std::string t;
    while (ss >> t) tok.push_back(t);
    if (tok.size() < 4 || tok[1] != "*") syntax_error(line, "expected '<n> * [...]' or '<n> * (re im)'");
    Integer n = parse_integer_token(line, tok[0]);
    const std::string& open = tok[2];
    const std::string close = open == "[" ? "]" : ")";
    if ((open != "[" && open != "(") || tok.back() != close) syntax_error(line, "unbalanced brackets");
    std::vector<std::string> body(tok.begin() + 3, tok.end() - 1);
    if (open == "[") {
      if (!field) syntax_error(line, "exact symbol without a field header");
      if (body.size() != static_cast<std::size_t>(field->degree())) {
        fail(Errc::DimensionMismatch, "line " + std::to_string(line.number) + ": expected " +
                                          std::to_string(field->degree()) + " coefficients");
      }
      std::vector<Rational> c;
      for (const auto& b : body) c.push_back(parse_rational_token(line, b));
      e.add(Generator(FieldElement(field, c)), n);
    } else {
      if (field) syntax_error(line, "numeric symbol in an element over a number field");
      if (body.size() != 2) syntax_error(line, "numeric symbol needs a real and an imaginary part");
      e.add(Generator(Complex(parse_real_token(line, body[0], bits), parse_real_token(line, body[1], bits))), n);
    }
  }
  return e;
}

std::string serialize_prebloch(const PreBlochElement& e) {
  std::ostringstream os;
  if (e.field()) os << field_line(*e.field()) << "\n";
  for (const auto& t : e.terms()) os << t.coeff.get_str() << " * " << t.z.to_string() << "\n";
  return os.str();
}

}  // namespace bloch
