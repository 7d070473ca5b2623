#pragma once

// Borel regulator c2: B(F) -> R^{r2}, integer relations between regulator
// vectors, and Galois conjugate checks.

#include <optional>
#include <span>
#include <vector>

#include "bloch/prebloch.hpp"

namespace bloch {

struct RegulatorVector {
  FieldPtr field;
  std::vector<Complex> roots;  // the embedding used for each coordinate
  std::vector<Real> values;
};

// One root per conjugate pair: the EmbeddingSet representatives (Im > 0,
// ascending real part), or, when hints are given, the root closest to each
// hint, which fixes both order and orientation.
std::vector<Complex> regulator_roots(const FieldPtr& field, long bits, std::span<const Complex> hints = {});

// sum n_i D2(sigma_j(z_i)) for each root sigma_j. Throws DegenerateShape when
// a generator maps to 0 or 1, RequiresExactField for numeric generators.
RegulatorVector borel_regulator(const PreBlochElement& e, long bits, std::span<const Complex> hints = {});

enum class Confidence { ExactInputVerified, NumericOnly };
std::string confidence_name(Confidence c);

struct RelationReport {
  std::vector<Integer> coefficients;  // coprime, first nonzero entry positive
  Real residual{0, 64};               // |sum a_i v_i|
  Real tolerance{0, 64};              // 2^(-precision/2)
  Confidence confidence = Confidence::NumericOnly;
};

// Small integer a with sum a_i v_i ~ 0 by lattice reduction with scale
// 2^(precision/2); nullopt if none within the coefficient bound and tolerance.
std::optional<RelationReport> detect_relation(const std::vector<std::vector<Real>>& vectors,
                                              const Integer& coefficient_bound, long bits);
std::optional<RelationReport> detect_relation(const std::vector<RegulatorVector>& vectors,
                                              const Integer& coefficient_bound, long bits);

// Regulators of exact elements over a common field; the report is
// ExactInputVerified when sum a_i e_i is zero after six-fold normalization.
std::optional<RelationReport> detect_relation(const std::vector<PreBlochElement>& elements,
                                              const Integer& coefficient_bound, long bits,
                                              std::span<const Complex> hints = {});

struct GaloisSum {
  std::vector<Complex> roots;  // every root of the minimal polynomial
  std::vector<Real> values;    // D2 of the element at each root
  Real sum{0, 64};
};
GaloisSum galois_conjugate_sum(const PreBlochElement& e, long bits);

// The degree-many Galois conjugates of e as vectors over the embeddings of
// the Galois closure, assuming the Galois group is the full symmetric group:
// coordinate pi (a permutation of the roots) of conjugate k is D2 of e at
// root pi(k).
std::vector<std::vector<Real>> galois_family(const PreBlochElement& e, long bits);

struct RankWitness {
  int rank = 0;
  std::vector<Real> pivots;  // Gram-Schmidt residual norms, descending
};
// Numerical rank: pivots above 2^(-precision/2) times the largest.
RankWitness rank_witness(const std::vector<std::vector<Real>>& vectors, long bits);

}  // namespace bloch
