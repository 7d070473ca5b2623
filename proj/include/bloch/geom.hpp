#pragma once

// Hyperbolic Dehn filling: the filled gluing system, a damped Newton solver
// on shape logarithms, core geodesic complex lengths and volumes.

#include <optional>
#include <vector>

#include "bloch/triang.hpp"

namespace bloch {

// Square system rows * Z = pi i * d + 2 pi i * filled, one row per unknown.
struct FilledSystem {
  int n = 0;
  int h = 0;
  IntMatrix rows;
  std::vector<Integer> d;
  std::vector<int> filled;  // 1 for the (p mu + q lambda) rows
  // The full system and filling, kept for residual checks and core lengths.
  IntMatrix u;
  std::vector<Integer> full_d;
  std::vector<Filling> fillings;
};

// Keeps a maximal independent subset of the edge rows, then per cusp either the
// meridian row (complete) or p * meridian + q * longitude (filled).
// Throws NotCoprime or RankDeficient. d is inferred from the shapes when absent.
FilledSystem filled_system(const Triangulation& t, const std::vector<Filling>& fillings, long bits = 256);

struct SolveOptions {
  bool allow_flat = false;
  int max_iterations = 80;  // per continuation stage
};

struct SolveResult {
  std::vector<Complex> shapes;
  std::vector<Complex> lambdas;  // core lengths, 0 for complete cusps
  Real residual{0, 64};          // max over every row of the full system
  bool converged = false;
  int steps = 0;                 // Newton iterations
  std::vector<bool> flat;        // shapes with |Im z| at or below the degeneracy floor
};

// Newton iteration on log z from `initial`, continuing the filled right-hand
// side from the complete structure. Works at min(bits, 128) and then polishes
// at `bits`. Throws JacobianSingular, Diverged or DegeneratedToFlat.
SolveResult newton_solve(const FilledSystem& sys, const std::vector<Complex>& initial, long bits,
                         const SolveOptions& options = {});

// (r mu + s lambda) Z - pi i (r d_mu + s d_lambda) for filled cusp j, unreduced.
Complex core_holonomy(const FilledSystem& sys, const std::vector<Complex>& shapes, int cusp, long r, long s,
                      long bits);

// Complex length of the core geodesic of filled cusp j, with p s - q r = +-1:
// sign chosen so that the real part is positive, imaginary part in (-pi, pi].
// Throws NotFilled for a complete cusp.
Complex core_length(const FilledSystem& sys, const std::vector<Complex>& shapes, int cusp, long r, long s,
                    long bits);

// A completion (r, s) with p s - q r = 1.
std::pair<long, long> completion(long p, long q);

// sum D2(z_nu)
Real solution_volume(const SolveResult& result, long bits);

}  // namespace bloch
