#include "mdcrt/intmat.hpp"

#include <algorithm>
#include <string>

namespace mdcrt {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::ShapeMismatch: return "SHAPE_MISMATCH";
    case ErrorCode::Singular: return "SINGULAR";
    case ErrorCode::CapExceeded: return "CAP_EXCEEDED";
    case ErrorCode::CrtInconsistent: return "CRT_INCONSISTENT";
    case ErrorCode::ConditionViolated: return "CONDITION_VIOLATED";
    case ErrorCode::BoundExceeded: return "BOUND_EXCEEDED";
    case ErrorCode::ParseError: return "PARSE_ERROR";
    case ErrorCode::IoError: return "IO_ERROR";
  }
  return "UNKNOWN";
}

void require_square(const IntMat& a, const char* what) {
  if (!a.is_square()) fail(ErrorCode::ShapeMismatch, std::string(what) + ": matrix must be square");
}

void require_nonsingular(const IntMat& a, const char* what) {
  require_square(a, what);
  if (a.rows() == 0) fail(ErrorCode::InvalidArgument, std::string(what) + ": empty matrix");
  if (det(a) == 0) fail(ErrorCode::Singular, std::string(what) + ": matrix is singular");
}

// Bareiss fraction-free elimination.
Int det(const IntMat& a) {
  require_square(a, "det");
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  IntMat m = a;
  Int sign = 1;
  Int prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return 0;
      m.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Int t = m(k, k) * m(i, j) - m(i, k) * m(k, j);
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        m(i, j) = t;
      }
      m(i, k) = 0;
    }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

static IntMat minor_matrix(const IntMat& a, std::size_t skip_r, std::size_t skip_c) {
  const std::size_t n = a.rows();
  IntMat out(n - 1, n - 1);
  for (std::size_t i = 0, oi = 0; i < n; ++i) {
    if (i == skip_r) continue;
    for (std::size_t j = 0, oj = 0; j < n; ++j) {
      if (j == skip_c) continue;
      out(oi, oj++) = a(i, j);
    }
    ++oi;
  }
  return out;
}

IntMat adjugate(const IntMat& a) {
  require_square(a, "adjugate");
  const std::size_t n = a.rows();
  if (n == 0) return {};
  if (n == 1) return IntMat{{1}};
  IntMat adj(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Int c = det(minor_matrix(a, j, i));
      adj(i, j) = ((i + j) % 2 == 0) ? c : Int(-c);
    }
  return adj;
}

bool is_unimodular(const IntMat& a) {
  if (!a.is_square() || a.rows() == 0) return false;
  return abs(det(a)) == 1;
}

std::size_t SmithForm::rank() const {
  std::size_t r = 0;
  const std::size_t n = std::min(Lambda.rows(), Lambda.cols());
  while (r < n && Lambda(r, r) != 0) ++r;
  return r;
}

IntVec SmithForm::invariant_factors() const {
  IntVec out(rank());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = Lambda(i, i);
  return out;
}

SmithForm smith(const IntMat& a) {
  const std::size_t d = a.rows(), k = a.cols();
  IntMat A = a, U = IntMat::identity(d), V = IntMat::identity(k);
  const std::size_t steps = std::min(d, k);
  Int q;
  for (std::size_t t = 0; t < steps; ++t) {
    for (;;) {
      // Smallest nonzero entry of the trailing block becomes the pivot.
      std::size_t pi = d, pj = k;
      for (std::size_t i = t; i < d; ++i)
        for (std::size_t j = t; j < k; ++j)
          if (A(i, j) != 0 && (pi == d || mpz_cmpabs(A(i, j).get_mpz_t(), A(pi, pj).get_mpz_t()) < 0)) {
            pi = i;
            pj = j;
          }
      if (pi == d) return {U, V, A};
      A.swap_rows(t, pi);
      U.swap_rows(t, pi);
      A.swap_cols(t, pj);
      V.swap_cols(t, pj);

      bool clean = true;
      for (std::size_t i = t + 1; i < d; ++i) {
        if (A(i, t) == 0) continue;
        q = A(i, t) / A(t, t);
        A.add_row(i, t, -q);
        U.add_row(i, t, -q);
        if (A(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < k; ++j) {
        if (A(t, j) == 0) continue;
        q = A(t, j) / A(t, t);
        A.add_col(j, t, -q);
        V.add_col(j, t, -q);
        if (A(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      std::size_t bad = d;
      for (std::size_t i = t + 1; i < d && bad == d; ++i)
        for (std::size_t j = t + 1; j < k; ++j)
          if (!mpz_divisible_p(A(i, j).get_mpz_t(), A(t, t).get_mpz_t())) {
            bad = i;
            break;
          }
      if (bad == d) break;
      A.add_row(t, bad, 1);
      U.add_row(t, bad, 1);
    }
    if (A(t, t) < 0) {
      A.negate_row(t);
      U.negate_row(t);
    }
  }
  return {U, V, A};
}

RatMat inv_rational(const IntMat& a) {
  require_square(a, "inv_rational");
  const std::size_t n = a.rows();
  RatMat m = to_rat(a), inv = RatMat::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m(p, c) == 0) ++p;
    if (p == n) fail(ErrorCode::Singular, "inv_rational: matrix is singular");
    m.swap_rows(c, p);
    inv.swap_rows(c, p);
    Rat piv = m(c, c);
    for (std::size_t j = 0; j < n; ++j) {
      m(c, j) /= piv;
      inv(c, j) /= piv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || m(i, c) == 0) continue;
      Rat f = m(i, c);
      m.add_row(i, c, -f);
      inv.add_row(i, c, -f);
    }
  }
  return inv;
}

IntMat inv_unimodular(const IntMat& a) {
  require_square(a, "inv_unimodular");
  Int d = det(a);
  if (abs(d) != 1) fail(ErrorCode::InvalidArgument, "inv_unimodular: matrix is not unimodular");
  IntMat adj = adjugate(a);
  return d > 0 ? adj : Int(-1) * adj;
}

IntMat hstack(const IntMat& a, const IntMat& b) {
  if (a.rows() != b.rows()) fail(ErrorCode::ShapeMismatch, "hstack: row count mismatch");
  IntMat out(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) out(i, a.cols() + j) = b(i, j);
  }
  return out;
}

IntMat product(const std::vector<IntMat>& factors, std::size_t dim) {
  IntMat out = IntMat::identity(dim);
  for (const auto& f : factors) out = out * f;
  return out;
}

RatMat to_rat(const IntMat& a) {
  RatMat out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = Rat(a(i, j));
  return out;
}

RatVec to_rat(const IntVec& v) {
  RatVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = Rat(v[i]);
  return out;
}

bool is_integral(const RatMat& a) {
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (a(i, j).get_den() != 1) return false;
  return true;
}

bool is_integral(const RatVec& v) {
  for (const auto& x : v)
    if (x.get_den() != 1) return false;
  return true;
}

IntMat to_int(const RatMat& a) {
  if (!is_integral(a)) fail(ErrorCode::InvalidArgument, "to_int: matrix is not integral");
  IntMat out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j).get_num();
  return out;
}

IntVec to_int(const RatVec& v) {
  if (!is_integral(v)) fail(ErrorCode::InvalidArgument, "to_int: vector is not integral");
  IntVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].get_num();
  return out;
}

RatVec operator*(const RatMat& a, const IntVec& x) {
  if (a.cols() != x.size()) fail(ErrorCode::ShapeMismatch, "matrix-vector shape mismatch");
  RatVec out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out[i] += a(i, j) * Rat(x[j]);
  return out;
}

Int floor_int(const Rat& q) {
  Int out;
  mpz_fdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return out;
}

Int round_half_up(const Rat& q) { return floor_int(q + Rat(1, 2)); }

bool left_quotient(const IntMat& a, const IntMat& b, IntMat* out) {
  require_nonsingular(a, "left_quotient");
  if (a.rows() != b.rows()) fail(ErrorCode::ShapeMismatch, "left_quotient: row count mismatch");
  Int d = det(a);
  IntMat num = adjugate(a) * b;
  IntMat q(num.rows(), num.cols());
  for (std::size_t i = 0; i < num.rows(); ++i)
    for (std::size_t j = 0; j < num.cols(); ++j) {
      if (!mpz_divisible_p(num(i, j).get_mpz_t(), d.get_mpz_t())) return false;
      mpz_divexact(q(i, j).get_mpz_t(), num(i, j).get_mpz_t(), d.get_mpz_t());
    }
  if (out) *out = std::move(q);
  return true;
}

bool left_quotient(const IntMat& a, const IntVec& b, IntVec* out) {
  require_nonsingular(a, "left_quotient");
  if (a.rows() != b.size()) fail(ErrorCode::ShapeMismatch, "left_quotient: length mismatch");
  Int d = det(a);
  IntVec num = adjugate(a) * b;
  IntVec q(num.size());
  for (std::size_t i = 0; i < num.size(); ++i) {
    if (!mpz_divisible_p(num[i].get_mpz_t(), d.get_mpz_t())) return false;
    mpz_divexact(q[i].get_mpz_t(), num[i].get_mpz_t(), d.get_mpz_t());
  }
  if (out) *out = std::move(q);
  return true;
}

}  // namespace mdcrt
