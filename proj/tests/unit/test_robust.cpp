#include <doctest.h>

#include "../support/robust_instances.hpp"

using namespace mdcrt;

namespace {

bool recovers(const RobustTrace& t, const oracle::Instance& in) { return t.success && t.folding == in.folds; }

long radius_for(oracle::Gen& g, const RobustModuli& rm) {
  const double lam = std::sqrt(min_distance(rm.M(), Norm::L2).get_d());
  return std::max(1L, static_cast<long>(lam * (0.1 + 0.5 * g.range(0, 100) / 100.0)));
}

}  // namespace

TEST_CASE("moduli validation") {
  CHECK_THROWS_AS(RobustModuli(IntMat{{4, 0}, {0, 4}}, {IntMat{{2, 0}, {0, 1}}, IntMat{{1, 1}, {0, 1}}}), Error);
  CHECK_THROWS_AS(RobustModuli(IntMat{{4, 0}, {0, 4}}, {IntMat{{2, 0}, {0, 2}}, IntMat{{2, 2}, {0, 2}}}), Error);
  RobustCase base = simulation_case_base();
  CHECK(base.moduli.size() == 2);
  CHECK(base.moduli.moduli()[1] == IntMat{{48, 17}, {8, 46}} * IntMat{{3, 4}, {4, 3}});
}

TEST_CASE("noiseless remainders always reconstruct exactly") {
  oracle::Gen g(61);
  for (int t = 0; t < 100; ++t) {
    RobustModuli rm = oracle::random_moduli(g, 2);
    oracle::Instance in = oracle::make_instance(g, rm, 0, 1000 + t);
    for (int alg : {1, 2}) {
      RobustTrace tr = RobustSolver(rm, alg).solve(in.rtilde);
      REQUIRE(recovers(tr, in));
      Reconstruction rec = robust_reconstruct(tr, in.rtilde, rm);
      CHECK(rec.rounded == in.m);
      CHECK(rec.value == to_rat(in.m));
    }
  }
}

TEST_CASE("first scheme succeeds exactly when error differences snap to zero") {
  oracle::Gen g(62);
  int yes = 0, no = 0;
  for (int t = 0; t < 600; ++t) {
    RobustModuli rm = oracle::random_moduli(g, 2);
    oracle::Instance in = oracle::make_instance(g, rm, radius_for(g, rm), 2000 + t);
    oracle::ClosestZero c = oracle::condition_algorithm1(in, Norm::L2);
    if (c.zero_closest && !c.unique) continue;
    RobustTrace tr = algorithm1(in.rtilde, rm);
    CHECK(recovers(tr, in) == c.zero_closest);
    (c.zero_closest ? yes : no)++;
  }
  CHECK(yes > 50);
  CHECK(no > 50);
}

TEST_CASE("second scheme succeeds exactly when the diagonal test passes") {
  oracle::Gen g(63);
  int yes = 0, no = 0;
  for (int t = 0; t < 600; ++t) {
    RobustModuli rm = oracle::random_moduli_with_diagonal(g, 2);
    SmithForm s = smith(rm.M());
    const double lam = Int(s.Lambda(0, 0)).get_d();
    const long radius = std::max(1L, static_cast<long>(lam * g.range(5, 40) / 100.0));
    oracle::Instance in = oracle::make_instance(g, rm, radius, 3000 + t);
    oracle::ClosestZero c = oracle::condition_algorithm2(in, s);
    if (c.zero_closest && !c.unique) continue;
    RobustTrace tr = algorithm2(in.rtilde, rm, Norm::L2, std::nullopt, s);
    CHECK(recovers(tr, in) == c.zero_closest);
    (c.zero_closest ? yes : no)++;
  }
  CHECK(yes > 50);
  CHECK(no > 50);
}

TEST_CASE("sufficient conditions") {
  oracle::Gen g(64);
  for (int t = 0; t < 300; ++t) {
    RobustModuli rm = oracle::random_moduli(g, 2);
    Rat lam = min_distance(rm.M(), Norm::L2);
    oracle::Instance in = oracle::make_instance(g, rm, radius_for(g, rm), 4000 + t);
    bool half = true;
    for (std::size_t i = 1; i < in.errors.size(); ++i)
      half = half && Rat(4) * oracle::norm_measure(IntVec(in.errors[i] - in.errors[0]), Norm::L2) < lam;
    if (half) CHECK(recovers(algorithm1(in.rtilde, rm), in));

    Bound b = bound_algorithm1(rm);
    Rat tau = 0;
    for (const auto& e : in.errors) tau = std::max(tau, oracle::norm_measure(e, Norm::L2));
    // tau stands for the squared L2 radius here.
    if (tau < b.measure) {
      CHECK(half);
      CHECK(recovers(algorithm1(in.rtilde, rm), in));
    }
    Bound b2 = bound_algorithm2(rm);
    if (tau < b2.measure) CHECK(recovers(algorithm2(in.rtilde, rm), in));
  }
}

TEST_CASE("both schemes agree when both succeed and the error stays within tau") {
  oracle::Gen g(65);
  for (int t = 0; t < 300; ++t) {
    RobustModuli rm = oracle::random_moduli(g, 2);
    oracle::Instance in = oracle::make_instance(g, rm, radius_for(g, rm), 5000 + t);
    RobustTrace a = algorithm1(in.rtilde, rm), b = algorithm2(in.rtilde, rm);
    if (recovers(a, in) && recovers(b, in)) CHECK(a.folding == b.folding);
    if (recovers(a, in)) {
      Rat tau2 = 0;
      for (const auto& e : in.errors) tau2 = std::max(tau2, oracle::norm_measure(e, Norm::L2));
      Reconstruction rec = robust_reconstruct(a, in.rtilde, rm);
      CHECK(oracle::norm_measure(RatVec(rec.value - to_rat(in.m)), Norm::L2) <= tau2);
    }
  }
}

TEST_CASE("one-dimensional interval condition") {
  oracle::Gen g(66);
  for (int t = 0; t < 400; ++t) {
    const long Mv = g.range(5, 40);
    RobustModuli rm(IntMat{{Mv}}, {IntMat{{3}}, IntMat{{5}}, IntMat{{7}}});
    oracle::Instance in = oracle::make_instance(g, rm, Mv / 2 + 3, 6000 + t);
    bool inside = true, boundary = false;
    for (std::size_t i = 1; i < 3; ++i) {
      Int diff = in.errors[i][0] - in.errors[0][0];
      // Twice the difference against [-M, M) avoids halves.
      Int two = 2 * diff;
      if (two == -Mv || two == Mv) boundary = true;
      inside = inside && -Mv <= two && two < Mv;
    }
    if (boundary) continue;
    CHECK(recovers(algorithm1(in.rtilde, rm), in) == inside);
  }
}

TEST_CASE("diverging schemes on a diagonalizable modulus") {
  IntMat U{{2, 1}, {1, 1}};
  IntMat L8{{8, 0}, {0, 8}};
  RobustModuli rm(inv_unimodular(U) * L8 * U, {IntMat{{1, 3}, {3, 1}}, IntMat{{3, 4}, {4, 3}}});
  SmithForm sf{U, inv_unimodular(U), L8};
  oracle::Gen g(67);
  for (int t = 0; t < 30; ++t) {
    oracle::Instance in = oracle::make_instance(g, rm, 0, 7000 + t);
    std::vector<IntVec> a = in.rtilde, b = in.rtilde;
    a[1] = a[1] + IntVec{5, -8};
    b[1] = b[1] + IntVec{3, 0};
    CHECK_FALSE(recovers(algorithm1(a, rm), in));
    CHECK(recovers(algorithm2(a, rm, Norm::L2, std::nullopt, sf), in));
    CHECK(recovers(algorithm1(b, rm), in));
    CHECK_FALSE(recovers(algorithm2(b, rm, Norm::L2, std::nullopt, sf), in));
  }
  CHECK_THROWS_AS(algorithm2({IntVec{0, 0}, IntVec{0, 0}}, rm, Norm::L2, std::nullopt,
                             SmithForm{U, U, L8}),
                  Error);
}

TEST_CASE("bound values") {
  RobustCase base = simulation_case_base(), dbl = simulation_case_doubled();
  Bound b = bound_algorithm1(base.moduli);
  CHECK(b.measure == Rat(148));  // 2368 / 16
  CHECK(b.value() == doctest::Approx(12.165).epsilon(1e-4));
  CHECK(bound_algorithm1(dbl.moduli).value() == doctest::Approx(24.33).epsilon(1e-3));
  CHECK(below_bound(Rat(12), b));
  CHECK_FALSE(below_bound(Rat(13), b));

  IntMat U{{2, 1}, {1, 1}};
  IntMat L8{{8, 0}, {0, 8}};
  RobustModuli rm(inv_unimodular(U) * L8 * U, {IntMat{{1, 3}, {3, 1}}, IntMat{{3, 4}, {4, 3}}});
  SmithForm sf{U, inv_unimodular(U), L8};
  CHECK(bound_algorithm2(rm, Norm::Linf, sf).measure == Rat(2, 3));
  CHECK(bound_algorithm2(rm, Norm::L1, sf).measure == Rat(2, 3));
  Bound l2 = bound_algorithm2(rm, Norm::L2, sf);
  CHECK(l2.conservative);
  // Exact value 2 / sqrt((7 + sqrt(45)) / 2); the certificate sits just below it.
  const double exact = 2.0 / std::sqrt((7 + std::sqrt(45.0)) / 2);
  CHECK(l2.value() <= exact);
  CHECK(l2.value() == doctest::Approx(exact).epsilon(1e-8));
}

TEST_CASE("operator norms") {
  IntMat u{{2, 1}, {1, 1}};
  CHECK(operator_norm_measure(u, Norm::L1) == 3);
  CHECK(operator_norm_measure(u, Norm::Linf) == 3);
  Rat s = operator_norm_measure(u, Norm::L2);
  CHECK(s.get_d() >= (7 + std::sqrt(45.0)) / 2);
}

TEST_CASE("range membership and samplers") {
  RobustCase base = simulation_case_base();
  CHECK(range_contains(IntVec{1645, 1373}, base.moduli, 0));
  Rng rng(3);
  for (int i = 0; i < 200; ++i) CHECK(range_contains(sample_m_in_A1(rng, base.moduli), base.moduli, 0));
  ErrorBall ball({Rat(2), Norm::L2}, 2);
  CHECK(ball.points().size() == 13);
  ErrorBall cube({Rat(1), Norm::Linf}, 3);
  CHECK(cube.points().size() == 27);
  for (int i = 0; i < 100; ++i) CHECK(oracle::norm_measure(ball.sample(rng), Norm::L2) <= 4);
}

TEST_CASE("fig1 harness is deterministic across thread counts") {
  Fig1Config cfg;
  cfg.cases = {simulation_case_base()};
  cfg.taus = {Rat(4), Rat(20)};
  cfg.trials = 60;
  cfg.seed = 9;
  cfg.threads = 1;
  auto a = fig1_experiment(cfg);
  cfg.threads = 4;
  auto b = fig1_experiment(cfg);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].mean_error == b[i].mean_error);
    CHECK(a[i].successes == b[i].successes);
  }
  CHECK(a[0].success_rate == 1.0);
  CHECK(a[0].over_tau == 0);
}
