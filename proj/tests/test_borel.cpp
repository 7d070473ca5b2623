#include <gtest/gtest.h>

#include <random>

#include "bloch/borel.hpp"
#include "bloch/dilog.hpp"
#include "helpers.hpp"

using namespace bloch;
using testing_helpers::code_of;

namespace {

FieldPtr quartic() { return NumberField::make({1, -1, 1, 0, 1}); }

FieldElement el(std::vector<Rational> c) { return FieldElement(quartic(), std::move(c)); }

PreBlochElement beta1() {
  PreBlochElement e(quartic());
  e.add(Generator(el({Rational(1, 2), 0, Rational(-1, 2), Rational(-1, 2)})), 2);
  e.add(Generator(el({1, -1, 0, 0})), 1);
  e.add(Generator(el({Rational(1, 2), 0, Rational(-1, 2), Rational(1, 2)})), 1);
  return e;
}

PreBlochElement beta2() {
  PreBlochElement e(quartic());
  e.add(Generator(el({2, -1, 0, -1})), 2);
  e.add(Generator(el({0, 1, 1, 1})), 2);
  return e;
}

// sigma_1 = tau_1^-, sigma_2 = tau_2^-
std::vector<Complex> embedding_hints(long bits) {
  return {Complex(Real::parse("0.5474", bits), Real::parse("-0.5857", bits)),
          Complex(Real::parse("-0.5474", bits), Real::parse("-1.1209", bits))};
}

const char* kBeta1[] = {"3.1639632288831439839910147159731544848127876715181",
                        "-1.4151048972655633406895085877105020361346679596016"};
const char* kBeta2[] = {"-0.69854408278444071973072661203684276397736670535490",
                        "3.8216875861799777391109222242903855168213024955043"};

FieldPtr cubic() { return NumberField::make({1, -1, 0, 1}); }  // x^3 - x + 1

}  // namespace

TEST(Borel, ReferenceVectors) {
  const long bits = 256;
  auto hints = embedding_hints(bits);
  auto v1 = borel_regulator(beta1(), bits, hints);
  auto v2 = borel_regulator(beta2(), bits, hints);
  Real tol = Real::parse("1e-45", bits);
  for (int j = 0; j < 2; ++j) {
    EXPECT_LT(abs(v1.values[j] - Real::parse(kBeta1[j], bits)), tol) << j;
    EXPECT_LT(abs(v2.values[j] - Real::parse(kBeta2[j], bits)), tol) << j;
  }
  // Default order: Im > 0 representatives by ascending real part, i.e.
  // (tau_2^+, tau_1^+), which negates and swaps the reference coordinates.
  auto d1 = borel_regulator(beta1(), bits);
  EXPECT_LT(abs(d1.values[0] + v1.values[1]), tol);
  EXPECT_LT(abs(d1.values[1] + v1.values[0]), tol);
  EXPECT_EQ(code_of([&] { borel_regulator(beta1(), bits, std::span(hints).first(1)); }), Errc::DimensionMismatch);
}

TEST(Borel, Linearity) {
  const long bits = 192;
  auto a = borel_regulator(beta1(), bits);
  auto b = borel_regulator(beta2(), bits);
  auto c = borel_regulator(Integer(3) * beta1() - Integer(2) * beta2(), bits);
  for (int j = 0; j < 2; ++j) EXPECT_LT(abs(c.values[j] - (a.values[j] * 3 - b.values[j] * 2)), pow2(-180, bits));
  auto zero = borel_regulator(PreBlochElement(quartic()), bits);
  for (const auto& x : zero.values) EXPECT_TRUE(x.is_zero());
}

TEST(Borel, AnnihilatesFiveTerm) {
  const long bits = 192;
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> coef(-3, 3);
  int tested = 0;
  while (tested < 10) {
    FieldElement x = el({coef(rng), coef(rng), coef(rng), coef(rng)});
    FieldElement y = el({coef(rng), coef(rng), coef(rng), Rational(coef(rng), 2)});
    try {
      auto r = borel_regulator(five_term(Generator(x), Generator(y)), bits);
      for (const auto& v : r.values) EXPECT_LT(abs(v), pow2(-170, bits));
      ++tested;
    } catch (const Error&) {
      // degenerate pair (coinciding or trivial points)
    }
  }
}

TEST(Relations, ReferenceCandidates) {
  const long bits = 192;
  auto hints = embedding_hints(bits);
  auto v1 = borel_regulator(beta1(), bits, hints).values;
  auto v2 = borel_regulator(beta2(), bits, hints).values;
  Real noise = Real::parse("1e-40", bits);
  std::vector<Real> mix, mix2;
  for (int j = 0; j < 2; ++j) {
    mix.push_back(v1[j] * 3 / 2 + v2[j] / 2 + noise * (j == 0 ? 1 : -1));
    mix2.push_back(v1[j] * 2 + v2[j] + noise);
  }
  auto rel = detect_relation(std::vector<std::vector<Real>>{v1, v2, mix}, Integer(1000), bits);
  ASSERT_TRUE(rel.has_value());
  EXPECT_EQ(rel->coefficients, (std::vector<Integer>{3, 1, -2}));
  EXPECT_LT(rel->residual, rel->tolerance);
  EXPECT_EQ(rel->confidence, Confidence::NumericOnly);
  EXPECT_NEAR(mix[0].to_double(), 4.396672801932495, 1e-12);

  auto rel2 = detect_relation(std::vector<std::vector<Real>>{v1, v2, mix2}, Integer(1000), bits);
  ASSERT_TRUE(rel2.has_value());
  EXPECT_EQ(rel2->coefficients, (std::vector<Integer>{2, 1, -1}));
  EXPECT_NEAR(mix2[0].to_double(), 5.629382374981847, 1e-12);
}

TEST(Relations, TrivialAndNone) {
  const long bits = 192;
  auto v = borel_regulator(beta1(), bits).values;
  auto rel = detect_relation(std::vector<std::vector<Real>>{v, v}, Integer(100), bits);
  ASSERT_TRUE(rel.has_value());
  EXPECT_EQ(rel->coefficients, (std::vector<Integer>{1, -1}));
  EXPECT_TRUE(rel->residual.is_zero());

  // beta1 and beta2 generate a rank-2 lattice: no relation.
  auto w = borel_regulator(beta2(), bits).values;
  EXPECT_FALSE(detect_relation(std::vector<std::vector<Real>>{v, w}, Integer(1000000), bits).has_value());
}

TEST(Relations, ExactInputs) {
  const long bits = 192;
  auto rel = detect_relation(std::vector<PreBlochElement>{beta1(), beta2(), Integer(2) * beta1() + beta2()},
                             Integer(100), bits);
  ASSERT_TRUE(rel.has_value());
  EXPECT_EQ(rel->coefficients, (std::vector<Integer>{2, 1, -1}));
  EXPECT_EQ(rel->confidence, Confidence::ExactInputVerified);

  // The same element written with a six-fold image of one symbol.
  PreBlochElement alt(quartic());
  FieldElement z = el({1, -1, 0, 0});
  alt.add(Generator(el({Rational(1, 2), 0, Rational(-1, 2), Rational(-1, 2)})), 2);
  alt.add(Generator(1 - z), -1);
  alt.add(Generator(el({Rational(1, 2), 0, Rational(-1, 2), Rational(1, 2)})), 1);
  auto rel2 = detect_relation(std::vector<PreBlochElement>{beta1(), alt}, Integer(100), bits);
  ASSERT_TRUE(rel2.has_value());
  EXPECT_EQ(rel2->coefficients, (std::vector<Integer>{1, -1}));
  EXPECT_EQ(rel2->confidence, Confidence::ExactInputVerified);
}

TEST(Galois, Sums) {
  const long bits = 256;
  Real tol = pow2(-bits / 2 + 8, bits);
  PreBlochElement theta(cubic());
  theta.add(Generator(FieldElement::generator(cubic())), 1);
  auto g = galois_conjugate_sum(theta, bits);
  ASSERT_EQ(g.values.size(), 3u);
  EXPECT_LT(abs(g.sum), tol);
  EXPECT_TRUE(g.values[0].is_zero());  // the real embedding
  EXPECT_LT(abs(galois_conjugate_sum(Integer(6) * theta, bits).sum), tol);

  auto b = galois_conjugate_sum(beta1(), bits);
  ASSERT_EQ(b.values.size(), 4u);
  EXPECT_LT(abs(b.sum), Real::parse("1e-40", bits));
  EXPECT_GT(abs(b.values[0]), Real(1, bits));
}

TEST(Rank, Witness) {
  const long bits = 256;
  auto hints = embedding_hints(bits);
  auto v1 = borel_regulator(beta1(), bits, hints).values;
  auto v2 = borel_regulator(beta2(), bits, hints).values;
  EXPECT_EQ(rank_witness({v1, v2}, bits).rank, 2);
  std::vector<Real> twice;
  for (const auto& x : v1) twice.push_back(x * 2);
  auto w = rank_witness({v1, twice}, bits);
  EXPECT_EQ(w.rank, 1);
  ASSERT_EQ(w.pivots.size(), 2u);
  EXPECT_LT(w.pivots[1], pow2(-200, bits));

  auto f1 = galois_family(beta1(), bits);
  ASSERT_EQ(f1.size(), 4u);
  EXPECT_EQ(f1[0].size(), 24u);
  EXPECT_EQ(rank_witness(f1, bits).rank, 3);

  auto f2 = galois_family(beta2(), bits);
  auto both = f1;
  both.insert(both.end(), f2.begin(), f2.end());
  EXPECT_EQ(rank_witness(both, bits).rank, 6);

  // Rows follow all_roots(): tau_2^+, tau_2^-, tau_1^+, tau_1^-.
  std::vector<std::vector<Real>> five = {f1[2], f1[3], f2[0], f2[1], f2[2], f2[3]};
  EXPECT_EQ(rank_witness(five, bits).rank, 5);
}
