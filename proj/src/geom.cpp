#include "bloch/geom.hpp"

#include <algorithm>

#include "bloch/dilog.hpp"
#include "bloch/error.hpp"

namespace bloch {

namespace {

constexpr long kWorkBits = 128;

enum class Status { Converged, Singular, Diverged, Flat };

Errc errc_of(Status s) {
  switch (s) {
    case Status::Singular:
      return Errc::JacobianSingular;
    case Status::Flat:
      return Errc::DegeneratedToFlat;
    default:
      return Errc::Diverged;
  }
}

Real max_abs(const std::vector<Complex>& v, long bits) {
  Real m(0, bits);
  for (const auto& x : v) m = std::max(m, abs(x));
  return m;
}

Complex row_value(const IntMatrix& rows, std::size_t k, const std::vector<Complex>& z, long bits) {
  Complex w(bits);
  for (std::size_t j = 0; j < rows.cols(); ++j) {
    if (rows(k, j) != 0) w += z[j] * Real(rows(k, j), bits);
  }
  return w;
}

// rows * Z - pi i d - 2 pi i s filled
std::vector<Complex> residuals(const FilledSystem& sys, const std::vector<Complex>& shapes, const Real& s,
                               long bits) {
  auto z = log_parameters(shapes);
  Real p = pi(bits);
  std::vector<Complex> f;
  for (std::size_t k = 0; k < sys.rows.rows(); ++k) {
    Complex w = row_value(sys.rows, k, z, bits);
    w.im -= p * Real(sys.d[k], bits);
    if (sys.filled[k]) w.im -= 2 * p * s;
    f.push_back(w);
  }
  return f;
}

// Gaussian elimination with partial pivoting; nullopt when a pivot is
// negligible relative to the largest entry.
std::optional<std::vector<Complex>> solve_linear(std::vector<std::vector<Complex>> a, std::vector<Complex> b,
                                                 long bits) {
  const std::size_t n = b.size();
  Real scale(0, bits);
  for (auto& row : a) scale = std::max(scale, max_abs(row, bits));
  if (scale.is_zero()) return std::nullopt;
  Real tiny = scale * pow2(-bits / 2, bits);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    Real best = abs(a[c][c]);
    for (std::size_t r = c + 1; r < n; ++r) {
      Real v = abs(a[r][c]);
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best <= tiny) return std::nullopt;
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    Complex inv = inverse(a[c][c]);
    for (std::size_t r = c + 1; r < n; ++r) {
      if (a[r][c].re.is_zero() && a[r][c].im.is_zero()) continue;
      Complex m = a[r][c] * inv;
      for (std::size_t k = c; k < n; ++k) a[r][k] -= m * a[c][k];
      b[r] -= m * b[c];
    }
  }
  std::vector<Complex> x(n, Complex(bits));
  for (std::size_t i = n; i-- > 0;) {
    Complex acc = b[i];
    for (std::size_t k = i + 1; k < n; ++k) acc -= a[i][k] * x[k];
    x[i] = acc / a[i][i];
  }
  return x;
}

struct Corrector {
  const FilledSystem& sys;
  long bits;
  bool allow_flat;
  Real floor;

  bool below_floor(const std::vector<Complex>& z) const {
    if (allow_flat) return false;
    return std::any_of(z.begin(), z.end(), [&](const Complex& x) { return x.im <= floor; });
  }

  // Damped Newton on w = log z at homotopy parameter s.
  Status run(std::vector<Complex>& w, const Real& s, const Real& tol, int max_iterations, int& steps) const {
    const std::size_t n = w.size();
    std::vector<Complex> z;
    for (const auto& x : w) z.push_back(exp(x));
    auto f = residuals(sys, z, s, bits);
    Real fn = max_abs(f, bits);
    for (int it = 0; it < max_iterations; ++it) {
      if (fn < tol) return Status::Converged;
      // J = A - B diag(z / (1 - z))
      std::vector<std::vector<Complex>> j(n, std::vector<Complex>(n, Complex(bits)));
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t v = 0; v < n; ++v) {
          Complex entry(Real(sys.rows(k, v), bits), Real(0, bits));
          const Integer& b = sys.rows(k, n + v);
          if (b != 0) entry -= Real(b, bits) * (z[v] / (1 - z[v]));
          j[k][v] = entry;
        }
      }
      std::vector<Complex> rhs;
      for (const auto& x : f) rhs.push_back(-x);
      auto delta = solve_linear(std::move(j), std::move(rhs), bits);
      if (!delta) return Status::Singular;
      ++steps;
      Real t(1, bits);
      bool accepted = false;
      bool hit_floor = false;
      for (int halving = 0; halving <= 40; ++halving) {
        std::vector<Complex> w2, z2;
        for (std::size_t v = 0; v < n; ++v) {
          w2.push_back(w[v] + (*delta)[v] * t);
          z2.push_back(exp(w2.back()));
        }
        if (below_floor(z2)) {
          hit_floor = true;
        } else {
          auto f2 = residuals(sys, z2, s, bits);
          Real fn2 = max_abs(f2, bits);
          if (fn2 < fn) {
            w = std::move(w2);
            z = std::move(z2);
            f = std::move(f2);
            fn = fn2;
            accepted = true;
            break;
          }
        }
        t /= 2;
      }
      if (!accepted) {
        if (fn < tol * 256) return Status::Converged;  // at the rounding floor
        return hit_floor ? Status::Flat : Status::Diverged;
      }
    }
    return fn < tol ? Status::Converged : Status::Diverged;
  }
};

std::vector<Complex> at_precision(const std::vector<Complex>& v, long bits) {
  std::vector<Complex> out;
  for (const auto& x : v) out.push_back(x.rounded(bits));
  return out;
}

Real full_residual(const FilledSystem& sys, const std::vector<Complex>& shapes, long bits) {
  auto z = log_parameters(shapes);
  Real p = pi(bits);
  Real worst(0, bits);
  auto check = [&](Complex w, const Integer& d, long turns) {
    w.im -= p * Real(d, bits) + 2 * p * turns;
    worst = std::max(worst, abs(w));
  };
  for (int k = 0; k < sys.n; ++k) check(row_value(sys.u, k, z, bits), sys.full_d[k], 0);
  for (int j = 0; j < sys.h; ++j) {
    std::size_t mu = static_cast<std::size_t>(sys.n + 2 * j), la = mu + 1;
    const Filling& f = sys.fillings[j];
    if (f.complete) {
      check(row_value(sys.u, mu, z, bits), sys.full_d[mu], 0);
      check(row_value(sys.u, la, z, bits), sys.full_d[la], 0);
    } else {
      Complex w = row_value(sys.u, mu, z, bits) * f.p + row_value(sys.u, la, z, bits) * f.q;
      check(w, sys.full_d[mu] * f.p + sys.full_d[la] * f.q, 1);
    }
  }
  return worst;
}

void solve_stages(const FilledSystem& sys, std::vector<Complex>& w, long bits, long work, const SolveOptions& options,
                  int& steps) {
  const bool any_filled = std::any_of(sys.filled.begin(), sys.filled.end(), [](int f) { return f != 0; });
  Corrector coarse{sys, work, options.allow_flat, pow2(-work / 8, work)};
  Real loose = pow2(-work / 2, work);
  Real tight = pow2(-work + 24, work);

  auto require = [](Status s, const char* where) {
    if (s != Status::Converged) fail(errc_of(s), std::string("Newton iteration failed ") + where);
  };

  if (!any_filled) {
    require(coarse.run(w, Real(1, work), tight, options.max_iterations, steps), "at the complete structure");
  } else {
    require(coarse.run(w, Real(0, work), loose, options.max_iterations, steps), "at the complete structure");
    Real s(0, work), ds = Real(1, work) / 4;
    Real min_ds = pow2(-24, work);
    Status last = Status::Converged;
    while (s < Real(1, work)) {
      Real target = std::min(Real(1, work), s + ds);
      auto trial = w;
      int before = steps;
      Status st = coarse.run(trial, target, loose, 12, steps);
      if (st == Status::Converged) {
        w = std::move(trial);
        s = target;
        if (steps - before <= 5) ds *= 2;
      } else {
        last = st;
        ds /= 2;
        if (ds < min_ds) fail(errc_of(last), "continuation of the filled right-hand side stalled");
      }
    }
    require(coarse.run(w, Real(1, work), tight, options.max_iterations, steps), "at the filled structure");
  }

  if (bits > work) {
    w = at_precision(w, bits);
    Corrector fine{sys, bits, options.allow_flat, pow2(-work / 8, bits)};
    require(fine.run(w, Real(1, bits), pow2(-bits + 24, bits), options.max_iterations, steps), "while polishing");
  }

}

}  // namespace

FilledSystem filled_system(const Triangulation& t, const std::vector<Filling>& fillings, long bits) {
  if (!t.u) fail(Errc::InvalidArgument, "triangulation has no gluing system");
  if (static_cast<int>(fillings.size()) != t.h) fail(Errc::DimensionMismatch, "need one filling per cusp");
  FilledSystem sys;
  sys.n = t.n;
  sys.h = t.h;
  sys.u = *t.u;
  sys.fillings = fillings;
  if (t.d) {
    sys.full_d = *t.d;
  } else if (t.has_shapes()) {
    sys.full_d = infer_d(t, bits);
  } else {
    fail(Errc::InvalidArgument, "triangulation has neither d nor shapes");
  }
  for (const auto& f : fillings) {
    if (f.complete) continue;
    Integer g = gcd(Integer(f.p), Integer(f.q));
    if (g != 1) {
      fail(Errc::NotCoprime, "filling (" + std::to_string(f.p) + "," + std::to_string(f.q) + ") is not primitive");
    }
  }
  const std::size_t n = static_cast<std::size_t>(t.n);
  IntMatrix edges(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < 2 * n; ++j) edges(i, j) = sys.u(i, j);
  auto keep = independent_rows(edges);
  if (keep.size() + static_cast<std::size_t>(t.h) != n) {
    fail(Errc::RankDeficient, "edge rows have rank " + std::to_string(keep.size()) + ", expected " +
                                  std::to_string(t.n - t.h));
  }
  sys.rows = IntMatrix(n, 2 * n, Integer(0));
  std::size_t r = 0;
  for (auto i : keep) {
    for (std::size_t j = 0; j < 2 * n; ++j) sys.rows(r, j) = sys.u(i, j);
    sys.d.push_back(sys.full_d[i]);
    sys.filled.push_back(0);
    ++r;
  }
  for (int c = 0; c < t.h; ++c) {
    std::size_t mu = n + 2 * static_cast<std::size_t>(c), la = mu + 1;
    const Filling& f = fillings[c];
    long p = f.complete ? 1 : f.p, q = f.complete ? 0 : f.q;
    for (std::size_t j = 0; j < 2 * n; ++j) sys.rows(r, j) = sys.u(mu, j) * p + sys.u(la, j) * q;
    sys.d.push_back(sys.full_d[mu] * p + sys.full_d[la] * q);
    sys.filled.push_back(f.complete ? 0 : 1);
    ++r;
  }
  if (rank(sys.rows) != n) fail(Errc::RankDeficient, "filled system is not of full rank");
  return sys;
}

SolveResult newton_solve(const FilledSystem& sys, const std::vector<Complex>& initial, long bits,
                         const SolveOptions& options) {
  if (static_cast<int>(initial.size()) != sys.n) fail(Errc::DimensionMismatch, "need one initial shape per tetrahedron");
  for (const auto& z : initial) {
    if (abs(z).is_zero() || abs(1 - z).is_zero()) {
      fail(Errc::DegenerateShape, "initial shape is 0 or 1");
    }
  }
  SolveResult result;
  const long work = std::min(bits, kWorkBits);
  std::vector<Complex> w;
  if (max_abs(residuals(sys, initial, Real(1, bits), bits), bits) < pow2(-bits + 24, bits)) {
    // already a solution at the target precision
    for (const auto& z : at_precision(initial, bits)) w.push_back(log(z));
  } else {
    for (const auto& z : at_precision(initial, work)) w.push_back(log(z));
    solve_stages(sys, w, bits, work, options, result.steps);
  }

  for (const auto& x : w) result.shapes.push_back(exp(x));
  result.residual = full_residual(sys, result.shapes, bits);
  result.converged = result.residual < pow2(-bits + 24, bits);
  if (!result.converged) {
    fail(Errc::Diverged, "solution does not satisfy the full system (residual " + result.residual.to_fixed(6) + ")");
  }
  Real flat_floor = pow2(-work / 8, bits);
  for (const auto& z : result.shapes) result.flat.push_back(abs(z.im) <= flat_floor);
  for (int j = 0; j < sys.h; ++j) {
    const Filling& f = sys.fillings[j];
    if (f.complete) {
      result.lambdas.push_back(Complex(0, 0, bits));
    } else {
      auto [r, s] = completion(f.p, f.q);
      result.lambdas.push_back(core_length(sys, result.shapes, j, r, s, bits));
    }
  }
  return result;
}

Complex core_holonomy(const FilledSystem& sys, const std::vector<Complex>& shapes, int cusp, long r, long s,
                      long bits) {
  if (cusp < 0 || cusp >= sys.h) fail(Errc::InvalidArgument, "no such cusp");
  const Filling& f = sys.fillings[cusp];
  if (f.complete) fail(Errc::NotFilled, "cusp " + std::to_string(cusp) + " is not filled");
  long det = f.p * s - f.q * r;
  if (det != 1 && det != -1) fail(Errc::InvalidArgument, "completion must satisfy p s - q r = +-1");
  auto z = log_parameters(shapes);
  std::size_t mu = static_cast<std::size_t>(sys.n + 2 * cusp), la = mu + 1;
  Complex w = row_value(sys.u, mu, z, bits) * r + row_value(sys.u, la, z, bits) * s;
  w.im -= pi(bits) * Real(Integer(sys.full_d[mu] * r + sys.full_d[la] * s), bits);
  return w;
}

Complex core_length(const FilledSystem& sys, const std::vector<Complex>& shapes, int cusp, long r, long s,
                    long bits) {
  Complex w = core_holonomy(sys, shapes, cusp, r, s, bits);
  if (w.re.sign() < 0) w = -w;
  Real two_pi = 2 * pi(bits);
  Real k = floor((pi(bits) - w.im) / two_pi);  // im + 2 pi k lands in (-pi, pi]
  w.im += two_pi * k;
  return w;
}

std::pair<long, long> completion(long p, long q) {
  Integer g, a, b;
  mpz_gcdext(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t(), Integer(p).get_mpz_t(), Integer(q).get_mpz_t());
  if (abs(g) != 1) fail(Errc::NotCoprime, "filling coefficients are not coprime");
  if (g < 0) {
    a = -a;
    b = -b;
  }
  // p a + q b = 1, so (r, s) = (-b, a)
  return {-b.get_si(), a.get_si()};
}

Real solution_volume(const SolveResult& result, long bits) {
  Real v(0, bits);
  for (const auto& z : result.shapes) {
    if (!z.im.is_zero()) v += bloch_wigner(z, bits);
  }
  return v;
}

}  // namespace bloch
