#include "mdcrt/divisibility.hpp"

namespace mdcrt {

namespace {

void require_pair(const IntMat& m, const IntMat& n, const char* what) {
  require_nonsingular(m, what);
  require_nonsingular(n, what);
  if (m.rows() != n.rows()) fail(ErrorCode::ShapeMismatch, std::string(what) + ": dimension mismatch");
}

}  // namespace

HermiteForm hermite_column(const IntMat& b) {
  const std::size_t d = b.rows(), k = b.cols();
  IntMat H = b, W = IntMat::identity(k);
  std::size_t piv = 0;
  Int g, s, t, a_g, b_g;
  for (std::size_t i = 0; i < d && piv < k; ++i) {
    for (std::size_t j = piv + 1; j < k; ++j) {
      if (H(i, j) == 0) continue;
      const Int a = H(i, piv), c = H(i, j);
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), c.get_mpz_t());
      a_g = a / g;
      b_g = c / g;
      // [col_p col_j] <- [col_p col_j] * [[s, -b/g], [t, a/g]], determinant 1.
      for (auto* m : {&H, &W}) {
        for (std::size_t r = 0; r < m->rows(); ++r) {
          Int x = (*m)(r, piv), y = (*m)(r, j);
          (*m)(r, piv) = s * x + t * y;
          (*m)(r, j) = a_g * y - b_g * x;
        }
      }
    }
    if (H(i, piv) == 0) continue;
    if (H(i, piv) < 0) {
      H.negate_col(piv);
      W.negate_col(piv);
    }
    for (std::size_t j = 0; j < piv; ++j) {
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), H(i, j).get_mpz_t(), H(i, piv).get_mpz_t());
      if (q == 0) continue;
      H.add_col(j, piv, -q);
      W.add_col(j, piv, -q);
    }
    ++piv;
  }
  return {H, W};
}

HermiteForm hermite_row(const IntMat& b) {
  HermiteForm t = hermite_column(b.transpose());
  return {t.H.transpose(), t.W.transpose()};
}

BezoutCert gcld(const IntMat& m, const IntMat& n, Form form) {
  require_pair(m, n, "gcld");
  const std::size_t d = m.rows();
  SmithForm s = smith(hstack(m, n));
  // (M | N) V = U^{-1} (Lambda | 0), so the leading block of V certifies L.
  IntMat lam = s.Lambda.block(0, 0, d, d);
  BezoutCert c{inv_unimodular(s.U) * lam, s.V.block(0, 0, d, d), s.V.block(d, 0, d, d)};
  if (form == Form::Canonical) {
    HermiteForm h = hermite_column(c.L);
    c.L = h.H;
    c.P = c.P * h.W;
    c.Q = c.Q * h.W;
  }
  return c;
}

GcrdCert gcrd(const IntMat& m, const IntMat& n, Form form) {
  require_pair(m, n, "gcrd");
  BezoutCert t = gcld(m.transpose(), n.transpose(), Form::Raw);
  GcrdCert c{t.L.transpose(), t.P.transpose(), t.Q.transpose()};
  if (form == Form::Canonical) {
    HermiteForm h = hermite_row(c.L);
    c.L = h.H;
    c.P = h.W * c.P;
    c.Q = h.W * c.Q;
  }
  return c;
}

IntMat lcrm(const IntMat& m, const IntMat& n, Form form) {
  require_pair(m, n, "lcrm");
  const std::size_t d = m.rows();
  // Integer kernel of (M | -N): trailing columns of the Smith V.
  SmithForm s = smith(hstack(m, Int(-1) * n));
  IntMat x = s.V.block(0, d, d, d);
  IntMat c = m * x;
  if (form == Form::Canonical) return hermite_column(c).H;
  return c;
}

IntMat lclm(const IntMat& m, const IntMat& n, Form form) {
  IntMat c = lcrm(m.transpose(), n.transpose(), Form::Raw).transpose();
  if (form == Form::Canonical) return hermite_row(c).H;
  return c;
}

IntMat lcrm_list(const std::vector<IntMat>& ms, Form form) {
  if (ms.empty()) fail(ErrorCode::InvalidArgument, "lcrm_list: empty list");
  IntMat acc = ms[0];
  require_nonsingular(acc, "lcrm_list");
  for (std::size_t i = 1; i < ms.size(); ++i) acc = lcrm(acc, ms[i], Form::Raw);
  if (form == Form::Canonical) return hermite_column(acc).H;
  return acc;
}

bool is_left_coprime(const IntMat& m, const IntMat& n) { return is_unimodular(gcld(m, n, Form::Raw).L); }

bool is_right_coprime(const IntMat& m, const IntMat& n) { return is_unimodular(gcrd(m, n, Form::Raw).L); }

bool commutes(const IntMat& m, const IntMat& n) {
  if (!m.is_square() || m.rows() != n.rows() || m.cols() != n.cols())
    fail(ErrorCode::ShapeMismatch, "commutes: shape mismatch");
  return m * n == n * m;
}

bool circulant2_coprime(const Int& p1, const Int& q1, const Int& p2, const Int& q2) {
  if (p1 == q1 || p2 == q2)
    fail(ErrorCode::InvalidArgument, "circulant2_coprime: circulant with all-equal entries");
  return gcd(Int(p1 + q1), Int(p2 + q2)) == 1 && gcd(Int(p1 - q1), Int(p2 - q2)) == 1;
}

bool gcld_equivalent(const IntMat& b1, const IntMat& b2) {
  require_pair(b1, b2, "gcld_equivalent");
  IntMat q;
  return left_quotient(b2, b1, &q) && is_unimodular(q);
}

bool left_divides(const IntMat& n, const IntMat& m) { return left_quotient(n, m, nullptr); }

bool right_divides(const IntMat& n, const IntMat& m) { return left_quotient(n.transpose(), m.transpose(), nullptr); }

}  // namespace mdcrt
