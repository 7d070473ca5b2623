#include <gtest/gtest.h>

#include <chrono>

#include "bloch/dilog.hpp"
#include "bloch/geom.hpp"
#include "helpers.hpp"

using namespace bloch;
using testing_helpers::code_of;
using testing_helpers::load_fixture;

namespace {

// Volumes of the figure-eight fillings (p, 1), p = 5..12, computed with SnapPy.
const double kFilledVolumes[] = {0.9813688289,  1.28448530047, 1.4637766449,  1.58316666062,
                                 1.66780445266, 1.7303379237,  1.77796688101, 1.8151189849};

std::vector<Filling> fill(long p, long q) { return {Filling{false, p, q}}; }

Complex e_i_pi_3(long bits) { return {Real(1, bits) / 2, sqrt(Real(3, bits)) / 2}; }

// prod z^A (1-z)^B for one row, evaluated multiplicatively with plain powers.
Complex monomial(const IntMatrix& u, std::size_t row, const std::vector<Complex>& z, long bits) {
  const std::size_t n = z.size();
  Complex acc(1, 0, bits);
  for (std::size_t v = 0; v < n; ++v) {
    acc *= pow(z[v], u(row, v).get_si());
    acc *= pow(1 - z[v], u(row, n + v).get_si());
  }
  return acc;
}

}  // namespace

TEST(FilledSystem, Shapes) {
  auto t = load_fixture("m004.tri", 256);
  auto complete = filled_system(t, {Filling{}});
  EXPECT_EQ(complete.rows.rows(), 2u);
  // The complete structure solves the complete system.
  auto sol = newton_solve(complete, {e_i_pi_3(256), e_i_pi_3(256)}, 256);
  EXPECT_EQ(sol.steps, 0);
  EXPECT_LT(sol.residual, pow2(-240, 256));

  auto filled = filled_system(t, fill(5, 1));
  EXPECT_EQ(rank(filled.rows), 2u);
  EXPECT_EQ(filled.filled, (std::vector<int>{0, 1}));

  EXPECT_EQ(code_of([&] { filled_system(t, fill(2, 4)); }), Errc::NotCoprime);
  EXPECT_EQ(code_of([&] { filled_system(t, fill(0, 0)); }), Errc::NotCoprime);

  auto flat = t;
  for (std::size_t j = 0; j < 4; ++j) {
    (*flat.u)(0, j) = 0;
    (*flat.u)(1, j) = 0;
  }
  EXPECT_EQ(code_of([&] { filled_system(flat, fill(5, 1)); }), Errc::RankDeficient);
}

TEST(Newton, FigureEightFamily) {
  const long bits = 128;
  auto t = load_fixture("m004.tri", bits);
  Real complete_volume = 2 * bloch_wigner(e_i_pi_3(bits), bits);
  auto start = std::chrono::steady_clock::now();
  Real last_volume(0, bits);
  Real last_length(100, bits);
  for (long p = 5; p <= 12; ++p) {
    auto sys = filled_system(t, fill(p, 1));
    auto sol = newton_solve(sys, numeric_shapes(t, bits), bits);
    ASSERT_TRUE(sol.converged);
    EXPECT_LT(sol.residual, pow2(-bits + 24, bits));
    Real vol = solution_volume(sol, bits);
    EXPECT_NEAR(vol.to_double(), kFilledVolumes[p - 5], 1e-9) << p;
    EXPECT_GT(vol, last_volume);
    EXPECT_LT(vol, complete_volume);
    ASSERT_EQ(sol.lambdas.size(), 1u);
    EXPECT_GT(sol.lambdas[0].re.sign(), 0);
    EXPECT_LT(sol.lambdas[0].re, last_length);
    last_volume = vol;
    last_length = sol.lambdas[0].re;

    // Independent check: the edge monomials are 1 and the filled holonomy
    // mu^p lambda is 1 in multiplicative form.
    for (std::size_t row = 0; row < 2; ++row) {
      Complex m = monomial(*t.u, row, sol.shapes, bits);
      EXPECT_TRUE(near(m, Complex(1, 0, bits), pow2(-90, bits))) << p;
    }
    Complex hol = pow(monomial(*t.u, 2, sol.shapes, bits), p) * monomial(*t.u, 3, sol.shapes, bits);
    EXPECT_TRUE(near(hol, Complex(1, 0, bits), pow2(-90, bits))) << p;
  }
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_LT(seconds, 30.0);
}

TEST(Newton, LargeCoefficientsApproachComplete) {
  const long bits = 128;
  auto t = load_fixture("m004.tri", bits);
  Real complete_volume = 2 * bloch_wigner(e_i_pi_3(bits), bits);
  Real previous(0, bits);
  for (long p : {20L, 40L, 80L}) {
    auto sol = newton_solve(filled_system(t, fill(p, 1)), numeric_shapes(t, bits), bits);
    Real vol = solution_volume(sol, bits);
    EXPECT_LT(vol, complete_volume);
    EXPECT_GT(vol, previous);
    previous = vol;
    for (const auto& z : sol.shapes) EXPECT_LT(abs(z - e_i_pi_3(bits)).to_double(), 20.0 / p);
  }
  EXPECT_LT((complete_volume - previous).to_double(), 1e-2);
}

TEST(Newton, PolishesToFullPrecision) {
  auto t128 = load_fixture("m004.tri", 128);
  auto t256 = load_fixture("m004.tri", 256);
  auto a = newton_solve(filled_system(t128, fill(7, 1)), numeric_shapes(t128, 128), 128);
  auto b = newton_solve(filled_system(t256, fill(7, 1)), numeric_shapes(t256, 256), 256);
  EXPECT_LT(b.residual, pow2(-232, 256));
  for (int i = 0; i < 2; ++i) EXPECT_LT(abs(a.shapes[i] - b.shapes[i]), pow2(-100, 256));
}

TEST(Newton, AdversarialStart) {
  const long bits = 128;
  auto t = load_fixture("m004.tri", bits);
  auto sys = filled_system(t, fill(5, 1));
  std::vector<Complex> real_start = {Complex(2, 0, bits), Complex(-3, 0, bits)};
  auto code = code_of([&] { newton_solve(sys, real_start, bits); });
  ASSERT_TRUE(code.has_value());
  EXPECT_TRUE(*code == Errc::DegeneratedToFlat || *code == Errc::Diverged || *code == Errc::JacobianSingular)
      << errc_name(*code);
  EXPECT_EQ(code_of([&] { newton_solve(sys, {Complex(1, 0, bits), e_i_pi_3(bits)}, bits); }),
            Errc::DegenerateShape);
}

TEST(CoreLength, Conventions) {
  const long bits = 128;
  auto t = load_fixture("m004.tri", bits);
  auto complete = filled_system(t, {Filling{}});
  EXPECT_EQ(code_of([&] { core_length(complete, numeric_shapes(t, bits), 0, 0, 1, bits); }), Errc::NotFilled);

  auto sys = filled_system(t, fill(5, 1));
  auto sol = newton_solve(sys, numeric_shapes(t, bits), bits);
  auto [r, s] = completion(5, 1);
  EXPECT_EQ(5 * s - 1 * r, 1);
  Complex a = core_holonomy(sys, sol.shapes, 0, r, s, bits);
  Complex b = core_holonomy(sys, sol.shapes, 0, r + 5, s + 1, bits);
  Complex diff = (b - a) / (2 * pi(bits));
  EXPECT_LT(abs(diff.re), pow2(-100, bits));
  EXPECT_LT(abs(diff.im - Real(round_to_integer(diff.im), bits)), pow2(-100, bits));
  EXPECT_NE(round_to_integer(diff.im), 0);

  Complex l1 = core_length(sys, sol.shapes, 0, r, s, bits);
  Complex l2 = core_length(sys, sol.shapes, 0, r + 5, s + 1, bits);
  EXPECT_TRUE(near(l1, l2, pow2(-100, bits)));
  EXPECT_GT(l1.im, -pi(bits));
  EXPECT_LE(l1.im, pi(bits));
  EXPECT_EQ(code_of([&] { core_length(sys, sol.shapes, 0, 1, 1, bits); }), Errc::InvalidArgument);
}

TEST(SolutionVolume, FlatContributesNothing) {
  const long bits = 128;
  SolveResult r;
  r.shapes = {e_i_pi_3(bits), Complex(Real::parse("0.3", bits), Real(0, bits))};
  EXPECT_LT(abs(solution_volume(r, bits) - bloch_wigner(e_i_pi_3(bits), bits)), pow2(-120, bits));
}
