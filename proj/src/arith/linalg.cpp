#include "bloch/arith/linalg.hpp"

#include "bloch/error.hpp"

namespace bloch {

namespace {

// In-place reduced row echelon form; returns pivot columns.
std::vector<std::size_t> rref(RatMatrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c) == 0) ++p;
    if (p == m.rows()) continue;
    m.swap_rows(p, r);
    Rational inv = 1 / m(r, c);
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c) == 0) continue;
      Rational f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Integer round_div(const Integer& a, const Integer& b) {
  // nearest integer to a/b for b > 0
  return floor_div(2 * a + b, 2 * b);
}

}  // namespace

RatMatrix to_rational(const IntMatrix& m) {
  RatMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Rational(m(i, j));
  }
  return r;
}

std::vector<Integer> multiply(const IntMatrix& a, const std::vector<Integer>& x) {
  if (x.size() != a.cols()) fail(Errc::DimensionMismatch, "matrix-vector size mismatch");
  std::vector<Integer> y(a.rows(), Integer(0));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
  }
  return y;
}

std::vector<Rational> multiply(const IntMatrix& a, const std::vector<Rational>& x) {
  if (x.size() != a.cols()) fail(Errc::DimensionMismatch, "matrix-vector size mismatch");
  std::vector<Rational> y(a.rows(), Rational(0));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
  }
  return y;
}

Rational determinant(RatMatrix m) {
  if (m.rows() != m.cols()) fail(Errc::DimensionMismatch, "determinant of a non-square matrix");
  Rational det = 1;
  const std::size_t n = m.rows();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m(p, c) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      m.swap_rows(p, c);
      det = -det;
    }
    det *= m(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m(i, c) == 0) continue;
      Rational f = m(i, c) / m(c, c);
      for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return det;
}

std::size_t rank(const IntMatrix& m) {
  RatMatrix r = to_rational(m);
  return rref(r).size();
}

std::vector<std::size_t> independent_rows(const IntMatrix& m) {
  std::vector<std::size_t> chosen;
  std::vector<std::vector<Integer>> rows;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    rows.push_back(m.row(i));
    IntMatrix trial = IntMatrix::from_rows(rows);
    if (rank(trial) == rows.size()) {
      chosen.push_back(i);
    } else {
      rows.pop_back();
    }
  }
  return chosen;
}

std::optional<std::vector<Rational>> solve_rational(const IntMatrix& a, const std::vector<Integer>& b) {
  if (b.size() != a.rows()) fail(Errc::DimensionMismatch, "right-hand side has the wrong length");
  RatMatrix aug(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = Rational(a(i, j));
    aug(i, a.cols()) = Rational(b[i]);
  }
  std::vector<std::size_t> pivots = rref(aug);
  if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt;
  std::vector<Rational> x(a.cols(), Rational(0));
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug(r, a.cols());
  return x;
}

std::vector<std::vector<Integer>> integer_kernel(const IntMatrix& a) {
  RatMatrix m = to_rational(a);
  std::vector<std::size_t> pivots = rref(m);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<std::vector<Integer>> basis;
  for (std::size_t f = 0; f < a.cols(); ++f) {
    if (is_pivot[f]) continue;
    std::vector<Rational> v(a.cols(), Rational(0));
    v[f] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m(r, f);
    Integer den = 1;
    for (const auto& q : v) {
      Integer l;
      mpz_lcm(l.get_mpz_t(), den.get_mpz_t(), q.get_den_mpz_t());
      den = l;
    }
    std::vector<Integer> iv;
    for (const auto& q : v) iv.push_back(Integer(q * den));
    Integer g = gcd_of(iv);
    if (g > 1) {
      for (auto& x : iv) x /= g;
    }
    basis.push_back(std::move(iv));
  }
  return basis;
}

Diagonalization diagonalize(const IntMatrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  Diagonalization out{a, IntMatrix::identity(m), IntMatrix::identity(n), IntMatrix::identity(n), 0};
  IntMatrix& d = out.d;
  IntMatrix& u = out.u;
  IntMatrix& v = out.v;
  IntMatrix& vi = out.v_inverse;

  auto row_addmul = [&](std::size_t dst, std::size_t src, const Integer& q) {
    // row_dst -= q * row_src   (applied to D and U)
    for (std::size_t j = 0; j < n; ++j) d(dst, j) -= q * d(src, j);
    for (std::size_t j = 0; j < m; ++j) u(dst, j) -= q * u(src, j);
  };
  auto col_addmul = [&](std::size_t dst, std::size_t src, const Integer& q) {
    // col_dst -= q * col_src   (applied to D and V; V^{-1} gets row_src += q * row_dst)
    for (std::size_t i = 0; i < m; ++i) d(i, dst) -= q * d(i, src);
    for (std::size_t i = 0; i < n; ++i) v(i, dst) -= q * v(i, src);
    for (std::size_t j = 0; j < n; ++j) vi(src, j) += q * vi(dst, j);
  };
  auto swap_r = [&](std::size_t x, std::size_t y) {
    d.swap_rows(x, y);
    u.swap_rows(x, y);
  };
  auto swap_c = [&](std::size_t x, std::size_t y) {
    d.swap_cols(x, y);
    v.swap_cols(x, y);
    vi.swap_rows(x, y);
  };

  std::size_t t = 0;
  while (t < std::min(m, n)) {
    // smallest nonzero entry of the trailing block becomes the pivot
    bool any = false;
    std::size_t pi = t, pj = t;
    for (std::size_t i = t; i < m; ++i) {
      for (std::size_t j = t; j < n; ++j) {
        if (d(i, j) == 0) continue;
        if (!any || abs(d(i, j)) < abs(d(pi, pj))) {
          pi = i;
          pj = j;
          any = true;
        }
      }
    }
    if (!any) break;
    swap_r(t, pi);
    swap_c(t, pj);
    for (;;) {
      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (d(i, t) == 0) continue;
        row_addmul(i, t, floor_div(d(i, t), d(t, t)));
        if (d(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (d(t, j) == 0) continue;
        col_addmul(j, t, floor_div(d(t, j), d(t, t)));
        if (d(t, j) != 0) clean = false;
      }
      if (clean) break;
      // move the smallest remaining entry of row/column t onto the pivot
      std::size_t bi = t, bj = t;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (d(i, t) != 0 && abs(d(i, t)) < abs(d(bi, bj))) {
          bi = i;
          bj = t;
        }
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (d(t, j) != 0 && abs(d(t, j)) < abs(d(bi, bj))) {
          bi = t;
          bj = j;
        }
      }
      swap_r(t, bi);
      swap_c(t, bj);
    }
    if (d(t, t) < 0) {
      for (std::size_t j = 0; j < n; ++j) d(t, j) = -d(t, j);
      for (std::size_t j = 0; j < m; ++j) u(t, j) = -u(t, j);
    }
    ++t;
  }
  out.rank = t;
  return out;
}

std::optional<std::vector<Integer>> solve_integral(const IntMatrix& a, const std::vector<Integer>& b) {
  if (b.size() != a.rows()) fail(Errc::DimensionMismatch, "right-hand side has the wrong length");
  Diagonalization dz = diagonalize(a);
  std::vector<Integer> ub = multiply(dz.u, b);
  std::vector<Integer> y(a.cols(), Integer(0));
  for (std::size_t i = 0; i < ub.size(); ++i) {
    if (i < dz.rank) {
      const Integer& di = dz.d(i, i);
      if (ub[i] % di != 0) return std::nullopt;
      y[i] = ub[i] / di;
    } else if (ub[i] != 0) {
      return std::nullopt;
    }
  }
  return multiply(dz.v, y);
}

Integer dot(const std::vector<Integer>& a, const std::vector<Integer>& b) {
  Integer s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Integer gcd_of(const std::vector<Integer>& v) {
  Integer g = 0;
  for (const auto& x : v) {
    Integer r;
    mpz_gcd(r.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    g = r;
  }
  return g;
}

IntMatrix lll_reduce(const IntMatrix& basis) {
  const std::size_t n = basis.rows();
  std::vector<std::vector<Integer>> b;
  for (std::size_t i = 0; i < n; ++i) b.push_back(basis.row(i));
  if (n <= 1) return basis;

  std::vector<Integer> d(n + 1, Integer(0));
  std::vector<std::vector<Integer>> lam(n, std::vector<Integer>(n, Integer(0)));
  d[0] = 1;
  d[1] = dot(b[0], b[0]);
  if (d[1] == 0) fail(Errc::InvalidArgument, "LLL basis vectors are dependent");

  auto red = [&](std::size_t k, std::size_t l) {
    if (2 * abs(lam[k][l]) <= d[l + 1]) return;
    Integer q = round_div(lam[k][l], d[l + 1]);
    for (std::size_t j = 0; j < b[k].size(); ++j) b[k][j] -= q * b[l][j];
    lam[k][l] -= q * d[l + 1];
    for (std::size_t i = 0; i < l; ++i) lam[k][i] -= q * lam[l][i];
  };

  std::size_t k = 1, kmax = 0;
  while (k < n) {
    if (k > kmax) {
      kmax = k;
      for (std::size_t j = 0; j <= k; ++j) {
        Integer u = dot(b[k], b[j]);
        for (std::size_t i = 0; i < j; ++i) u = (d[i + 1] * u - lam[k][i] * lam[j][i]) / d[i];
        if (j < k) {
          lam[k][j] = u;
        } else {
          d[k + 1] = u;
          if (u == 0) fail(Errc::InvalidArgument, "LLL basis vectors are dependent");
        }
      }
    }
    red(k, k - 1);
    if (4 * d[k + 1] * d[k - 1] < 3 * d[k] * d[k] - 4 * lam[k][k - 1] * lam[k][k - 1]) {
      std::swap(b[k], b[k - 1]);
      for (std::size_t j = 0; j + 1 < k; ++j) std::swap(lam[k][j], lam[k - 1][j]);
      Integer L = lam[k][k - 1];
      Integer B = (d[k - 1] * d[k + 1] + L * L) / d[k];
      for (std::size_t i = k + 1; i <= kmax; ++i) {
        Integer t = lam[i][k];
        lam[i][k] = (d[k + 1] * lam[i][k - 1] - L * t) / d[k];
        lam[i][k - 1] = (B * t + L * lam[i][k]) / d[k + 1];
      }
      d[k] = B;
      if (k > 1) --k;
    } else {
      for (std::size_t l = k - 1; l-- > 0;) red(k, l);
      ++k;
    }
  }
  return IntMatrix::from_rows(b);
}

}  // namespace bloch
