#include <doctest.h>

#include "../support/oracles.hpp"

using namespace mdcrt;

namespace {

bool integral_left_quotient(const IntMat& l, const IntMat& m) {
  IntMat q;
  return left_quotient(l, m, &q);
}

}  // namespace

TEST_CASE("Hermite column form is canonical") {
  oracle::Gen g(21);
  for (int t = 0; t < 200; ++t) {
    const std::size_t d = g.range(1, 4);
    IntMat b = g.nonsingular(d, -15, 15);
    HermiteForm h = hermite_column(b);
    REQUIRE(is_unimodular(h.W));
    CHECK(b * h.W == h.H);
    for (std::size_t i = 0; i < d; ++i) {
      CHECK(h.H(i, i) > 0);
      for (std::size_t j = i + 1; j < d; ++j) CHECK(h.H(i, j) == 0);
      for (std::size_t j = 0; j < i; ++j) {
        CHECK(h.H(i, j) >= 0);
        CHECK(h.H(i, j) < h.H(i, i));
      }
    }
    // Same lattice after a unimodular change of basis gives the same form.
    CHECK(hermite_column(b * g.unimodular(d)).H == h.H);
    HermiteForm r = hermite_row(b);
    CHECK(r.W * b == r.H);
  }
}

TEST_CASE("gcld Bezout certificate property suite") {
  oracle::Gen g(22);
  for (int t = 0; t < 500; ++t) {
    const std::size_t d = g.range(1, 3);
    IntMat m = g.nonsingular(d, -12, 12), n = g.nonsingular(d, -12, 12);
    if (t % 3 == 0) {
      IntMat common = g.nonsingular(d, -3, 3);
      m = common * m;
      n = common * n;
    }
    for (Form form : {Form::Canonical, Form::Raw}) {
      BezoutCert c = gcld(m, n, form);
      CHECK(m * c.P + n * c.Q == c.L);
      CHECK(integral_left_quotient(c.L, m));
      CHECK(integral_left_quotient(c.L, n));
    }
    BezoutCert c = gcld(m, n);
    GcrdCert r = gcrd(m, n);
    CHECK(r.P * m + r.Q * n == r.L);
    IntMat q;
    CHECK(left_quotient(r.L.transpose(), m.transpose(), &q));
    CHECK(left_quotient(r.L.transpose(), n.transpose(), &q));
    CHECK(is_left_coprime(m, n) == is_unimodular(c.L));
  }
}

TEST_CASE("gcld is greatest among common left divisors") {
  oracle::Gen g(23);
  for (int t = 0; t < 200; ++t) {
    const std::size_t d = g.range(1, 3);
    IntMat k = g.nonsingular(d, -4, 4);
    IntMat m = k * g.nonsingular(d, -8, 8), n = k * g.nonsingular(d, -8, 8);
    BezoutCert c = gcld(m, n);
    CHECK(left_divides(k, c.L));
    CHECK(oracle::cofactor_det(c.L) % oracle::cofactor_det(k) == 0);
  }
}

TEST_CASE("lcrm generates the lattice intersection") {
  oracle::Gen g(24);
  for (int t = 0; t < 500; ++t) {
    const std::size_t d = g.range(1, 3);
    IntMat m = g.nonsingular(d, -6, 6), n = g.nonsingular(d, -6, 6);
    IntMat c = lcrm(m, n);
    REQUIRE(left_divides(m, c));
    REQUIRE(left_divides(n, c));
    // Membership in both directions on random lattice points and random vectors.
    for (int s = 0; s < 6; ++s) {
      IntVec x = g.vector(d, -5, 5);
      IntVec v = c * x;
      CHECK(lattice_member(m, v));
      CHECK(lattice_member(n, v));
      IntVec w = m * g.vector(d, -6, 6);
      CHECK(lattice_member(c, w) == lattice_member(n, w));
      IntVec u = g.vector(d, -60, 60);
      CHECK(lattice_member(c, u) == (lattice_member(m, u) && lattice_member(n, u)));
    }
    IntMat cl = lclm(m, n);
    CHECK(right_divides(m, cl));
    CHECK(right_divides(n, cl));
    CHECK(lattices_equal(cl.transpose(), lcrm(m.transpose(), n.transpose())));
  }
}

TEST_CASE("determinant product identity for commuting pairs") {
  oracle::Gen g(25);
  for (int t = 0; t < 500; ++t) {
    const std::size_t d = g.range(2, 3);
    IntMat m = g.circulant(d, -6, 6), n = g.circulant(d, -6, 6);
    REQUIRE(commutes(m, n));
    Int lhs = abs(det(gcld(m, n).L)) * abs(det(lcrm(m, n)));
    CHECK(lhs == abs(det(m) * det(n)));
  }
}

TEST_CASE("coprimeness equivalences for commuting pairs") {
  oracle::Gen g(26);
  int coprime = 0;
  for (int t = 0; t < 500; ++t) {
    const std::size_t d = g.range(2, 3);
    IntMat m = g.circulant(d, -6, 6), n = g.circulant(d, -6, 6);
    const bool left = is_left_coprime(m, n), right = is_right_coprime(m, n);
    CHECK(left == right);
    if (left) {
      ++coprime;
      CHECK(gcld_equivalent(lcrm(m, n, Form::Raw), m * n));
      CHECK(gcld_equivalent(lclm(m, n, Form::Raw).transpose(), IntMat(m * n).transpose()));
    }
  }
  CHECK(coprime > 50);
}

TEST_CASE("products of commutative-coprime matrices stay coprime") {
  oracle::Gen g(27);
  int checked = 0;
  for (int t = 0; t < 4000 && checked < 500; ++t) {
    const std::size_t d = g.range(2, 3);
    IntMat a = g.circulant(d, -5, 5), b = g.circulant(d, -5, 5), c = g.circulant(d, -5, 5);
    if (!is_right_coprime(a, b) || !is_right_coprime(a, c) || !is_right_coprime(b, c)) continue;
    ++checked;
    CHECK(is_right_coprime(a * b, c));
    CHECK(is_right_coprime(a * c, b));
    CHECK(is_left_coprime(b * c, a));
  }
  CHECK(checked == 500);
}

TEST_CASE("lcrm of a common left factor pulls out") {
  oracle::Gen g(28);
  int checked = 0;
  for (int t = 0; t < 4000 && checked < 500; ++t) {
    const std::size_t d = g.range(2, 3);
    IntMat m = g.nonsingular(d, -5, 5);
    std::vector<IntMat> gs;
    const std::size_t count = g.range(2, 3);
    for (std::size_t i = 0; i < count; ++i) gs.push_back(g.circulant(d, -4, 4));
    bool ok = true;
    for (std::size_t i = 0; i < count && ok; ++i)
      for (std::size_t j = i + 1; j < count && ok; ++j) ok = is_right_coprime(gs[i], gs[j]);
    if (!ok) continue;
    ++checked;
    std::vector<IntMat> mg;
    for (const auto& x : gs) mg.push_back(m * x);
    CHECK(gcld_equivalent(lcrm_list(mg), m * lcrm_list(gs)));
    CHECK(gcld_equivalent(lcrm_list(mg), m * product(gs, d)));
  }
  CHECK(checked == 500);
}

TEST_CASE("circulant coprimeness criterion") {
  CHECK(circulant2_coprime(Int(1), Int(3), Int(3), Int(4)));
  CHECK(is_right_coprime(IntMat{{1, 3}, {3, 1}}, IntMat{{3, 4}, {4, 3}}));
  CHECK_FALSE(is_right_coprime(IntMat{{2, 0}, {0, 2}}, IntMat{{4, 2}, {2, 4}}));
  oracle::Gen g(29);
  for (int t = 0; t < 300; ++t) {
    Int p1 = g.range(-9, 9), q1 = g.range(-9, 9), p2 = g.range(-9, 9), q2 = g.range(-9, 9);
    if (abs(p1) == abs(q1) || abs(p2) == abs(q2)) continue;
    IntMat a{{p1, q1}, {q1, p1}}, b{{p2, q2}, {q2, p2}};
    CHECK(circulant2_coprime(p1, q1, p2, q2) == is_right_coprime(a, b));
  }
  CHECK_THROWS_AS(circulant2_coprime(Int(2), Int(2), Int(1), Int(3)), Error);
}

TEST_CASE("divisibility guards") {
  CHECK_THROWS_AS(gcld(IntMat{{1, 0}, {0, 1}}, IntMat{{1}}), Error);
  CHECK(left_divides(IntMat{{2, 0}, {0, 2}}, IntMat{{4, 2}, {2, 4}}));
  CHECK_FALSE(left_divides(IntMat{{3, 0}, {0, 3}}, IntMat{{4, 2}, {2, 4}}));
}
