#include <doctest.h>

#include "../support/oracles.hpp"

using namespace mdcrt;

namespace {

const Norm kNorms[] = {Norm::L1, Norm::L2, Norm::Linf};

// Random basis whose oracle box stays small.
IntMat tame_basis(oracle::Gen& g, std::size_t d) {
  for (;;) {
    IntMat b = g.nonsingular(d, -9, 9);
    double r = oracle::column_length(b, 0);
    for (std::size_t j = 1; j < d; ++j) r = std::min(r, oracle::column_length(b, j));
    if (oracle::coefficient_radius(b, r) <= (d == 2 ? 40 : 8)) return b;
  }
}

}  // namespace

TEST_CASE("minimum distance golden values") {
  CHECK(min_distance(IntMat{{48, 17}, {8, 46}}, Norm::L2) == 2368);
  CHECK(min_distance(IntMat{{96, 34}, {16, 92}}, Norm::L2) == 9472);
  CHECK(magnitude(Rat(2368), Norm::L2) / 4 == doctest::Approx(12.1655).epsilon(1e-4));
  CHECK(min_distance(IntMat{{8, 0}, {0, 8}}, Norm::Linf) == 8);
  CHECK(min_distance(IntMat{{1}}, Norm::L1) == 1);
}

TEST_CASE("minimum distance matches box enumeration") {
  oracle::Gen g(51);
  for (int t = 0; t < 150; ++t) {
    const std::size_t d = t % 3 == 0 ? 3 : 2;
    IntMat b = tame_basis(g, d);
    for (Norm n : kNorms) CHECK(min_distance(b, n) == oracle::brute_min_distance(b, n));
  }
}

TEST_CASE("minimum distance scales with the basis") {
  oracle::Gen g(52);
  for (int t = 0; t < 100; ++t) {
    IntMat b = g.nonsingular(g.range(2, 3), -9, 9);
    Int c = g.range(-4, 4);
    if (c == 0) c = 3;
    for (Norm n : kNorms) {
      Rat base = min_distance(b, n);
      Rat scaled = min_distance(c * b, n);
      CHECK(scaled == (n == Norm::L2 ? Rat(base * c * c) : Rat(base * abs(c))));
      CHECK(scale_measure(base, Rat(abs(c)), n) == scaled);
    }
    // Basis change leaves the lattice, hence the minimum, alone.
    CHECK(min_distance(b * g.unimodular(b.rows()), Norm::L2) == min_distance(b, Norm::L2));
  }
}

TEST_CASE("closest vector is optimal against the oracle") {
  oracle::Gen g(53);
  for (int t = 0; t < 200; ++t) {
    const std::size_t d = t % 2 ? 3 : 2;
    IntMat b = tame_basis(g, d);
    RatVec w(d);
    for (auto& x : w) {
      x = Rat(g.range(-400, 400), g.range(1, 6));
      x.canonicalize();
    }
    for (Norm n : kNorms) {
      CvpResult c = cvp(b, w, n);
      CHECK(b * c.coeffs == c.point);
      CHECK(c.measure == oracle::norm_measure(RatVec(to_rat(c.point) - w), n));
      CHECK(c.measure == oracle::brute_cvp_measure(b, w, n));
    }
  }
}

TEST_CASE("closest vector golden cases and half-minimum guarantee") {
  CHECK(cvp(IntMat{{8, -8}, {-8, 16}}, to_rat(IntVec{5, -8}), Norm::L2).point == IntVec{8, -8});
  CHECK(cvp(IntMat{{8, 0}, {0, 8}}, to_rat(IntVec{6, 3}), Norm::L2).point == IntVec{8, 0});
  oracle::Gen g(54);
  for (int t = 0; t < 200; ++t) {
    IntMat b = g.nonsingular(2, -20, 20);
    Lattice lat(b);
    Rat lam = lat.min_distance(Norm::L2);
    IntVec v0 = b * g.vector(2, -5, 5);
    IntVec e = g.vector(2, -15, 15);
    // |e| < lambda / 2 forces the unique answer v0.
    if (!(Rat(4) * oracle::norm_measure(e, Norm::L2) < lam)) continue;
    CHECK(lat.closest(IntVec(v0 + e), Norm::L2).point == v0);
  }
}

TEST_CASE("ties break the same way after a lattice shift") {
  IntMat b{{8, 0}, {0, 8}};
  Lattice lat(b);
  CvpResult a = lat.closest(IntVec{4, 4}, Norm::L2);
  CvpResult c = lat.closest(IntVec{20, -12}, Norm::L2);
  CHECK(IntVec(c.point - a.point) == IntVec{16, -16});
}

TEST_CASE("membership and equality") {
  IntMat b{{2, 1}, {0, 3}};
  CHECK(lattice_member(b, IntVec{3, 3}));
  CHECK_FALSE(lattice_member(b, IntVec{1, 0}));
  CHECK(lattices_equal(b, b * IntMat{{1, 5}, {0, 1}}));
  CHECK_FALSE(lattices_equal(b, IntMat{{1, 0}, {0, 6}}));
}

TEST_CASE("norm parsing and limits") {
  CHECK(parse_norm("l1") == Norm::L1);
  CHECK(parse_norm("linf") == Norm::Linf);
  CHECK_THROWS_AS(parse_norm("l3"), Error);
  EnumLimits small;
  small.max_dim = 2;
  CHECK_THROWS_AS(Lattice(IntMat::identity(3), small), Error);
  CHECK_THROWS_AS(Lattice(IntMat{{1, 2}, {2, 4}}), Error);
}
