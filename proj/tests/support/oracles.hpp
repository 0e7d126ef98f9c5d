#pragma once

// Independent reference computations and random generators for the tests.
// Nothing here calls the library algorithm it is meant to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "mdcrt/mdcrt.hpp"

namespace oracle {

using mdcrt::Int;
using mdcrt::IntMat;
using mdcrt::IntVec;
using mdcrt::Rat;
using mdcrt::RatVec;

// Laplace expansion along the first row.
inline Int cofactor_det(const IntMat& a) {
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  if (n == 1) return a(0, 0);
  Int total = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (a(0, j) == 0) continue;
    IntMat minor(n - 1, n - 1);
    for (std::size_t r = 1; r < n; ++r)
      for (std::size_t c = 0, cc = 0; c < n; ++c) {
        if (c == j) continue;
        minor(r - 1, cc++) = a(r, c);
      }
    Int term = a(0, j) * cofactor_det(minor);
    total += (j % 2 == 0) ? term : Int(-term);
  }
  return total;
}

inline void subsets(std::size_t n, std::size_t k, std::vector<std::vector<std::size_t>>& out) {
  std::vector<std::size_t> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (cur.size() == k) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = start; i < n; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
}

// d_k = gcd of all k x k minors; invariant factors are d_k / d_{k-1}.
inline std::vector<Int> invariant_factors_by_minors(const IntMat& a) {
  const std::size_t top = std::min(a.rows(), a.cols());
  std::vector<Int> out;
  Int prev = 1;
  for (std::size_t k = 1; k <= top; ++k) {
    std::vector<std::vector<std::size_t>> rs, cs;
    subsets(a.rows(), k, rs);
    subsets(a.cols(), k, cs);
    Int g = 0;
    for (const auto& r : rs)
      for (const auto& c : cs) {
        IntMat m(k, k);
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j) m(i, j) = a(r[i], c[j]);
        g = gcd(g, cofactor_det(m));
      }
    if (g == 0) {
      out.push_back(0);
      prev = 0;
      continue;
    }
    out.push_back(prev == 0 ? Int(0) : Int(g / prev));
    prev = g;
  }
  return out;
}

// Test-side generator, deliberately separate from the library RNG.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}

  long range(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(eng_); }
  bool coin() { return range(0, 1) == 1; }
  std::mt19937_64& engine() { return eng_; }

  IntMat matrix(std::size_t r, std::size_t c, long lo, long hi) {
    IntMat m(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) m(i, j) = range(lo, hi);
    return m;
  }
  IntMat nonsingular(std::size_t d, long lo, long hi) {
    for (;;) {
      IntMat m = matrix(d, d, lo, hi);
      if (cofactor_det(m) != 0) return m;
    }
  }
  IntVec vector(std::size_t d, long lo, long hi) {
    IntVec v(d);
    for (auto& x : v) x = range(lo, hi);
    return v;
  }
  // Product of random elementary operations.
  IntMat unimodular(std::size_t d, int steps = 6) {
    IntMat u = IntMat::identity(d);
    if (d < 2) return coin() ? u : IntMat(Int(-1) * u);
    for (int s = 0; s < steps; ++s) {
      std::size_t i = range(0, d - 1), j = range(0, d - 2);
      if (j >= i) ++j;
      u.add_row(i, j, Int(range(-2, 2)));
    }
    if (coin()) u.swap_rows(0, d - 1);
    return u;
  }
  // Circulants of a fixed size commute with one another.
  IntMat circulant(std::size_t d, long lo, long hi) {
    for (;;) {
      IntVec c = vector(d, lo, hi);
      IntMat m(d, d);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) m(i, j) = c[(j + d - i) % d];
      if (cofactor_det(m) != 0) return m;
    }
  }

 private:
  std::mt19937_64 eng_;
};

inline std::vector<IntVec> box(std::size_t d, long lo, long hi) {
  std::vector<IntVec> out;
  IntVec x(d);
  for (auto& c : x) c = lo;
  for (;;) {
    out.push_back(x);
    std::size_t j = 0;
    while (j < d) {
      x[j] += 1;
      if (x[j] <= hi) break;
      x[j] = lo;
      ++j;
    }
    if (j == d) break;
  }
  return out;
}

// Residue by the rational-floor definition, written out here instead of reused.
inline IntVec reference_reduce(const IntVec& m, const IntMat& M) {
  mdcrt::RatMat inv(M.rows(), M.cols());
  {
    Int dt = cofactor_det(M);
    IntMat adj(M.rows(), M.cols());
    const std::size_t n = M.rows();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        IntMat minor(n - 1, n - 1);
        for (std::size_t r = 0, rr = 0; r < n; ++r) {
          if (r == j) continue;
          for (std::size_t c = 0, cc = 0; c < n; ++c) {
            if (c == i) continue;
            minor(rr, cc++) = M(r, c);
          }
          ++rr;
        }
        Int cof = n == 1 ? Int(1) : cofactor_det(minor);
        adj(i, j) = (i + j) % 2 ? Int(-cof) : cof;
      }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        inv(i, j) = Rat(adj(i, j), dt);
        inv(i, j).canonicalize();
      }
  }
  IntVec n(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    Rat s = 0;
    for (std::size_t j = 0; j < m.size(); ++j) s += inv(i, j) * m[j];
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), s.get_num_mpz_t(), s.get_den_mpz_t());
    n[i] = q;
  }
  return m - M * n;
}

inline Rat norm_measure(const IntVec& v, mdcrt::Norm norm) {
  Rat out = 0;
  for (const auto& x : v) {
    Int a = abs(x);
    if (norm == mdcrt::Norm::L1) out += a;
    else if (norm == mdcrt::Norm::L2) out += Int(a * a);
    else if (Rat(a) > out) out = a;
  }
  return out;
}

inline Rat norm_measure(const RatVec& v, mdcrt::Norm norm) {
  Rat out = 0;
  for (const auto& x : v) {
    Rat a = abs(x);
    if (norm == mdcrt::Norm::L1) out += a;
    else if (norm == mdcrt::Norm::L2) out += a * a;
    else if (a > out) out = a;
  }
  return out;
}

// Coefficient radius so that all x with |Bx - w| <= r lie within x0 +- radius:
// |x_j - y_j| <= |row_j(B^-1)|_2 * |Bx - w|_2 and |v|_2 <= sqrt(D) * |v|_any for our norms.
inline long coefficient_radius(const IntMat& b, double r) {
  const std::size_t d = b.rows();
  mdcrt::RatMat inv = mdcrt::inv_rational(b);
  double worst = 0;
  for (std::size_t i = 0; i < d; ++i) {
    double s = 0;
    for (std::size_t j = 0; j < d; ++j) s += inv(i, j).get_d() * inv(i, j).get_d();
    worst = std::max(worst, std::sqrt(s));
  }
  return static_cast<long>(std::ceil(worst * r * std::sqrt(static_cast<double>(d)))) + 1;
}

inline double column_length(const IntMat& b, std::size_t j) {
  double s = 0;
  for (std::size_t i = 0; i < b.rows(); ++i) s += b(i, j).get_d() * b(i, j).get_d();
  return std::sqrt(s);
}

inline Rat brute_min_distance(const IntMat& b, mdcrt::Norm norm) {
  double r = column_length(b, 0);
  for (std::size_t j = 1; j < b.cols(); ++j) r = std::min(r, column_length(b, j));
  const long rad = coefficient_radius(b, r);
  Rat best = -1;
  for (const auto& x : box(b.cols(), -rad, rad)) {
    if (x.is_zero()) continue;
    Rat m = norm_measure(IntVec(b * x), norm);
    if (best < 0 || m < best) best = m;
  }
  return best;
}

// Minimum measure |Bx - w| over a box certain to hold the optimum.
inline Rat brute_cvp_measure(const IntMat& b, const RatVec& w, mdcrt::Norm norm) {
  mdcrt::RatVec y = mdcrt::inv_rational(b) * w;
  IntVec x0(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) x0[i] = mdcrt::round_half_up(y[i]);
  RatVec diff0 = mdcrt::to_rat(IntVec(b * x0)) - w;
  double r = 0;
  for (const auto& c : diff0) r += c.get_d() * c.get_d();
  r = std::sqrt(r) * std::sqrt(static_cast<double>(b.rows())) + 1;
  const long rad = coefficient_radius(b, r);
  Rat best = -1;
  for (const auto& dx : box(b.cols(), -rad, rad)) {
    IntVec x = x0 + dx;
    Rat m = norm_measure(RatVec(mdcrt::to_rat(IntVec(b * x)) - w), norm);
    if (best < 0 || m < best) best = m;
  }
  return best;
}

}  // namespace oracle
