#include "bloch/borel.hpp"

#include <algorithm>
#include <numeric>

#include "bloch/arith/reconstruct.hpp"
#include "bloch/dilog.hpp"
#include "bloch/error.hpp"

namespace bloch {

namespace {

Real d2_at(const PreBlochElement& e, const Complex& root, long bits) {
  Real sum(0, bits);
  for (const auto& t : e.terms()) {
    if (!t.z.is_exact()) fail(Errc::RequiresExactField, "regulator needs exact generators");
    Complex z = eval_embedding(t.z.exact(), root, bits);
    sum += bloch_wigner(z, bits) * Real(t.coeff, bits);
  }
  return sum;
}

FieldPtr field_of(const PreBlochElement& e) {
  if (e.field()) return e.field();
  for (const auto& t : e.terms()) {
    if (t.z.is_exact()) return t.z.exact().field();
  }
  fail(Errc::RequiresExactField, "element has no field");
}

}  // namespace

std::vector<Complex> regulator_roots(const FieldPtr& field, long bits, std::span<const Complex> hints) {
  auto set = embeddings(field, std::max(bits, 64L));
  if (hints.empty()) return set.complex_pairs;
  if (static_cast<int>(hints.size()) != set.r2()) {
    fail(Errc::DimensionMismatch, "need one embedding hint per conjugate pair (" + std::to_string(set.r2()) + ")");
  }
  return select_roots(set, hints);
}

RegulatorVector borel_regulator(const PreBlochElement& e, long bits, std::span<const Complex> hints) {
  RegulatorVector v;
  v.field = field_of(e);
  v.roots = regulator_roots(v.field, bits, hints);
  for (const auto& r : v.roots) v.values.push_back(d2_at(e, r, bits));
  return v;
}

std::string confidence_name(Confidence c) {
  return c == Confidence::ExactInputVerified ? "ExactInputVerified" : "NumericOnly";
}

std::optional<RelationReport> detect_relation(const std::vector<std::vector<Real>>& vectors,
                                              const Integer& coefficient_bound, long bits) {
  if (vectors.size() < 2) fail(Errc::InvalidArgument, "relation detection needs at least two vectors");
  Real tol = pow2(-bits / 2, bits);
  auto rel = find_integer_relation(vectors, bits / 2, coefficient_bound, tol);
  if (!rel) return std::nullopt;
  RelationReport report;
  report.coefficients = rel->coeffs;
  report.residual = rel->residual;
  report.tolerance = tol;
  return report;
}

std::optional<RelationReport> detect_relation(const std::vector<RegulatorVector>& vectors,
                                              const Integer& coefficient_bound, long bits) {
  std::vector<std::vector<Real>> plain;
  for (const auto& v : vectors) {
    if (!plain.empty() && v.values.size() != plain[0].size()) {
      fail(Errc::DimensionMismatch, "regulator vectors differ in length");
    }
    plain.push_back(v.values);
  }
  return detect_relation(plain, coefficient_bound, bits);
}

std::optional<RelationReport> detect_relation(const std::vector<PreBlochElement>& elements,
                                              const Integer& coefficient_bound, long bits,
                                              std::span<const Complex> hints) {
  std::vector<RegulatorVector> vectors;
  for (const auto& e : elements) vectors.push_back(borel_regulator(e, bits, hints));
  for (std::size_t i = 1; i < vectors.size(); ++i) {
    if (!same_field(vectors[i].field, vectors[0].field)) fail(Errc::FieldMismatch, "elements over different fields");
  }
  auto report = detect_relation(vectors, coefficient_bound, bits);
  if (!report) return report;
  PreBlochElement combo(vectors[0].field);
  for (std::size_t i = 0; i < elements.size(); ++i) combo += report->coefficients[i] * elements[i];
  if (six_fold_normalize(combo).is_zero()) report->confidence = Confidence::ExactInputVerified;
  return report;
}

GaloisSum galois_conjugate_sum(const PreBlochElement& e, long bits) {
  GaloisSum g;
  g.sum = Real(0, bits);
  if (e.is_zero()) return g;
  auto set = embeddings(field_of(e), std::max(bits, 64L));
  g.roots = set.all_roots();
  for (const auto& r : g.roots) {
    g.values.push_back(d2_at(e, r, bits));
    g.sum += g.values.back();
  }
  return g;
}

std::vector<std::vector<Real>> galois_family(const PreBlochElement& e, long bits) {
  auto field = field_of(e);
  const int d = field->degree();
  if (d > 7) fail(Errc::InvalidArgument, "Galois family enumeration is limited to degree 7");
  auto g = galois_conjugate_sum(e, bits);
  std::vector<int> perm(d);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<Real>> family(d);
  do {
    for (int k = 0; k < d; ++k) family[k].push_back(g.values[perm[k]]);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return family;
}

RankWitness rank_witness(const std::vector<std::vector<Real>>& vectors, long bits) {
  RankWitness w;
  std::vector<std::vector<Real>> rest;
  for (const auto& v : vectors) {
    std::vector<Real> r;
    for (const auto& x : v) r.push_back(x.rounded(bits));
    rest.push_back(std::move(r));
  }
  auto norm2 = [&](const std::vector<Real>& v) {
    Real s(0, bits);
    for (const auto& x : v) s += x * x;
    return s;
  };
  while (!rest.empty()) {
    std::size_t best = 0;
    Real best_norm = norm2(rest[0]);
    for (std::size_t i = 1; i < rest.size(); ++i) {
      Real n = norm2(rest[i]);
      if (n > best_norm) {
        best_norm = n;
        best = i;
      }
    }
    std::vector<Real> q = rest[best];
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(best));
    Real len = sqrt(best_norm);
    w.pivots.push_back(len);
    if (len.is_zero()) continue;
    for (auto& x : q) x /= len;
    for (auto& v : rest) {
      Real dot(0, bits);
      for (std::size_t j = 0; j < v.size(); ++j) dot += v[j] * q[j];
      for (std::size_t j = 0; j < v.size(); ++j) v[j] -= dot * q[j];
    }
  }
  if (!w.pivots.empty()) {
    Real threshold = w.pivots[0] * pow2(-bits / 2, bits);
    for (const auto& p : w.pivots) {
      if (p > threshold) ++w.rank;
    }
  }
  return w;
}

}  // namespace bloch
