#include "mdcrt/robust.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace mdcrt {

RobustModuli::RobustModuli(IntMat m, std::vector<IntMat> gammas) : m_(std::move(m)), gammas_(std::move(gammas)) {
  require_nonsingular(m_, "robust moduli: M");
  if (gammas_.empty()) fail(ErrorCode::InvalidArgument, "robust moduli: no Gamma factors");
  for (const auto& g : gammas_) {
    require_nonsingular(g, "robust moduli: Gamma");
    if (g.rows() != m_.rows()) fail(ErrorCode::ShapeMismatch, "robust moduli: dimension mismatch");
  }
  for (std::size_t i = 0; i < gammas_.size(); ++i)
    for (std::size_t j = i + 1; j < gammas_.size(); ++j) {
      if (!commutes(gammas_[i], gammas_[j]))
        fail(ErrorCode::ConditionViolated,
             "robust moduli: Gamma " + std::to_string(i) + " and " + std::to_string(j) + " do not commute");
      if (!is_right_coprime(gammas_[i], gammas_[j]))
        fail(ErrorCode::ConditionViolated,
             "robust moduli: Gamma " + std::to_string(i) + " and " + std::to_string(j) + " are not coprime");
    }
  for (const auto& g : gammas_) moduli_.push_back(m_ * g);
}

IntMat RobustModuli::cofactor(std::size_t i, const IntMat& u) const {
  IntMat w = IntMat::identity(dim());
  for (std::size_t j = 0; j < gammas_.size(); ++j)
    if (j != i) w = w * gammas_[j];
  return w * u;
}

void validate_smith(const IntMat& m, const SmithForm& s) {
  const std::size_t d = m.rows();
  if (s.U.rows() != d || s.V.rows() != d || s.Lambda.rows() != d || s.Lambda.cols() != d)
    fail(ErrorCode::ShapeMismatch, "Smith decomposition has the wrong shape");
  if (!is_unimodular(s.U) || !is_unimodular(s.V))
    fail(ErrorCode::ConditionViolated, "Smith decomposition factors are not unimodular");
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      if (i != j && s.Lambda(i, j) != 0) fail(ErrorCode::ConditionViolated, "Smith decomposition is not diagonal");
  if (!(s.U * m * s.V == s.Lambda)) fail(ErrorCode::ConditionViolated, "U M V does not equal Lambda");
}

namespace {

IntMat unit_or(const std::optional<IntMat>& u, std::size_t d) {
  if (!u) return IntMat::identity(d);
  if (!is_unimodular(*u) || u->rows() != d) fail(ErrorCode::ConditionViolated, "U_i must be unimodular");
  return *u;
}

}  // namespace

RobustSolver::RobustSolver(const RobustModuli& rm, int algorithm, RobustOptions opts)
    : rm_(rm), algorithm_(algorithm), opts_(std::move(opts)) {
  if (algorithm != 1 && algorithm != 2) fail(ErrorCode::InvalidArgument, "algorithm must be 1 or 2");
  const std::size_t d = rm_.dim();
  IntMat u1 = unit_or(opts_.u1, d);
  IntMat target = rm_.cofactor(rm_.size(), u1);  // all Gammas times U1
  for (const auto& g : rm_.gammas()) gamma_.emplace_back(g);
  if (algorithm == 1) {
    lattice_.emplace(rm_.M(), opts_.limits);
    plan_ = ExplicitCrtPlan::from_factors(rm_.gammas(), rm_.gammas(), {target, {}});
    for (const auto& g : rm_.gammas()) reducers_.emplace_back(g);
  } else {
    if (opts_.smith) {
      validate_smith(rm_.M(), *opts_.smith);
      smith_ = *opts_.smith;
    } else {
      smith_ = mdcrt::smith(rm_.M());
    }
    v_inv_ = inv_unimodular(smith_.V);
    lattice_.emplace(smith_.Lambda, opts_.limits);
    plan_ = ExplicitCrtPlan::left_unimodular(v_inv_, rm_.gammas(), IntMat(v_inv_ * target));
    for (const auto& g : rm_.gammas()) reducers_.emplace_back(v_inv_ * g);
  }
}

RobustTrace RobustSolver::solve(const std::vector<IntVec>& rtilde) const {
  if (rtilde.size() != rm_.size()) fail(ErrorCode::ShapeMismatch, "robust: one remainder per modulus required");
  for (const auto& r : rtilde)
    if (r.size() != rm_.dim()) fail(ErrorCode::ShapeMismatch, "robust: remainder dimension mismatch");
  return algorithm_ == 1 ? solve1(rtilde) : solve2(rtilde);
}

RobustTrace RobustSolver::solve1(const std::vector<IntVec>& rtilde) const {
  const std::size_t L = rm_.size(), d = rm_.dim();
  RobustTrace t;
  t.algorithm = 1;
  t.cvp_points.assign(L, IntVec(d));
  t.residues.assign(L, IntVec(d));
  std::vector<IntVec> coeffs(L, IntVec(d));
  for (std::size_t i = 1; i < L; ++i) {
    CvpResult c = lattice_->closest(rtilde[i] - rtilde[0], opts_.norm);
    t.cvp_points[i] = c.point;
    coeffs[i] = c.coeffs;
    t.residues[i] = reducers_[i].reduce(c.coeffs);
  }
  t.aggregate = plan_->solve(t.residues).m;
  t.folding.assign(L, IntVec(d));
  if (!left_quotient(rm_.gammas()[0], t.aggregate, &t.folding[0])) {
    t.failure = "reference folding vector is not integral";
    return t;
  }
  for (std::size_t i = 1; i < L; ++i)
    if (!left_quotient(rm_.gammas()[i], t.aggregate - coeffs[i], &t.folding[i])) {
      t.failure = "folding vector " + std::to_string(i) + " is not integral";
      return t;
    }
  t.success = true;
  return t;
}

RobustTrace RobustSolver::solve2(const std::vector<IntVec>& rtilde) const {
  const std::size_t L = rm_.size(), d = rm_.dim();
  RobustTrace t;
  t.algorithm = 2;
  t.cvp_points.assign(L, IntVec(d));
  t.residues.assign(L, IntVec(d));
  std::vector<IntVec> coeffs(L, IntVec(d));
  for (std::size_t i = 1; i < L; ++i) {
    CvpResult c = lattice_->closest(smith_.U * (rtilde[i] - rtilde[0]), opts_.norm);
    t.cvp_points[i] = c.point;
    coeffs[i] = c.coeffs;
    t.residues[i] = reducers_[i].reduce(c.coeffs);
  }
  t.aggregate = plan_->solve(t.residues).m;
  t.folding.assign(L, IntVec(d));
  if (!left_quotient(rm_.gammas()[0], smith_.V * t.aggregate, &t.folding[0])) {
    t.failure = "reference folding vector is not integral";
    return t;
  }
  for (std::size_t i = 1; i < L; ++i)
    if (!left_quotient(rm_.gammas()[i], smith_.V * (t.aggregate - coeffs[i]), &t.folding[i])) {
      t.failure = "folding vector " + std::to_string(i) + " is not integral";
      return t;
    }
  t.success = true;
  return t;
}

bool range_contains(const IntVec& m, const RobustModuli& rm, std::size_t i, const std::optional<IntMat>& ui) {
  if (i >= rm.size()) fail(ErrorCode::InvalidArgument, "range_contains: index out of range");
  IntMat u = unit_or(ui, rm.dim());
  return in_fpd(folding_vector(m, rm.moduli()[i]), rm.cofactor(i, u));
}

RobustTrace algorithm1(const std::vector<IntVec>& rtilde, const RobustModuli& rm, Norm norm,
                       const std::optional<IntMat>& u1) {
  RobustOptions o;
  o.norm = norm;
  o.u1 = u1;
  return RobustSolver(rm, 1, o).solve(rtilde);
}

RobustTrace algorithm2(const std::vector<IntVec>& rtilde, const RobustModuli& rm, Norm norm,
                       const std::optional<IntMat>& u1, const std::optional<SmithForm>& smith_of_m) {
  RobustOptions o;
  o.norm = norm;
  o.u1 = u1;
  o.smith = smith_of_m;
  return RobustSolver(rm, 2, o).solve(rtilde);
}

Bound bound_algorithm1(const RobustModuli& rm, Norm norm) {
  return {norm, scale_measure(min_distance(rm.M(), norm), Rat(1, 4), norm), false};
}

namespace {

// Largest eigenvalue estimate of a symmetric matrix by cyclic Jacobi rotations.
double largest_eigenvalue(std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
  }
  double best = a[0][0];
  for (std::size_t i = 1; i < n; ++i) best = std::max(best, a[i][i]);
  return best;
}

// s I - G positive definite, by exact leading principal minors.
bool dominates(const Rat& s, const IntMat& g) {
  const std::size_t n = g.rows();
  RatMat a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = (i == j ? s : Rat(0)) - Rat(g(i, j));
  // Gaussian elimination without pivoting: all pivots positive iff positive definite.
  for (std::size_t k = 0; k < n; ++k) {
    if (a(k, k) <= 0) return false;
    for (std::size_t i = k + 1; i < n; ++i) {
      Rat f = a(i, k) / a(k, k);
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return true;
}

}  // namespace

Rat operator_norm_measure(const IntMat& u, Norm norm) {
  const std::size_t r = u.rows(), c = u.cols();
  Int best = 0;
  switch (norm) {
    case Norm::L1:
      for (std::size_t j = 0; j < c; ++j) {
        Int s = 0;
        for (std::size_t i = 0; i < r; ++i) s += abs(u(i, j));
        best = std::max(best, s);
      }
      return Rat(best);
    case Norm::Linf:
      for (std::size_t i = 0; i < r; ++i) {
        Int s = 0;
        for (std::size_t j = 0; j < c; ++j) s += abs(u(i, j));
        best = std::max(best, s);
      }
      return Rat(best);
    case Norm::L2: {
      IntMat g = u.transpose() * u;
      std::vector<std::vector<double>> a(c, std::vector<double>(c));
      for (std::size_t i = 0; i < c; ++i)
        for (std::size_t j = 0; j < c; ++j) a[i][j] = g(i, j).get_d();
      const double est = largest_eigenvalue(a);
      double slack = std::max(1e-12, std::abs(est) * 1e-10);
      for (;;) {
        Rat s(est + slack);
        if (dominates(s, g)) return s;
        slack *= 4;
      }
    }
  }
  return Rat(0);
}

Bound bound_algorithm2(const RobustModuli& rm, Norm norm, const std::optional<SmithForm>& smith_of_m) {
  SmithForm s;
  if (smith_of_m) {
    validate_smith(rm.M(), *smith_of_m);
    s = *smith_of_m;
  } else {
    s = smith(rm.M());
  }
  Rat lam = min_distance(s.Lambda, norm);
  Rat op = operator_norm_measure(s.U, norm);
  // lambda / (4 ||U||): squared for L2, where op already bounds ||U||^2.
  Rat m = norm == Norm::L2 ? Rat(lam / (Rat(16) * op)) : Rat(lam / (Rat(4) * op));
  return {norm, m, norm == Norm::L2};
}

bool below_bound(const Rat& tau, const Bound& b) {
  if (tau < 0) return false;
  return (b.norm == Norm::L2 ? Rat(tau * tau) : tau) < b.measure;
}

Reconstruction robust_reconstruct(const RobustTrace& trace, const std::vector<IntVec>& rtilde,
                                  const RobustModuli& rm) {
  if (!trace.success) fail(ErrorCode::ConditionViolated, "robust_reconstruct: trace did not succeed");
  const std::size_t L = rm.size(), d = rm.dim();
  if (rtilde.size() != L || trace.folding.size() != L)
    fail(ErrorCode::ShapeMismatch, "robust_reconstruct: remainder count mismatch");
  IntVec sum(d);
  for (std::size_t i = 0; i < L; ++i) sum = sum + rm.moduli()[i] * trace.folding[i] + rtilde[i];
  Reconstruction out{RatVec(d), IntVec(d)};
  for (std::size_t k = 0; k < d; ++k) {
    out.value[k] = Rat(sum[k], Int(static_cast<unsigned long>(L)));
    out.value[k].canonicalize();
    out.rounded[k] = round_half_up(out.value[k]);
  }
  return out;
}

IntVec sample_m_in_A1(Rng& rng, const RobustModuli& rm, const std::optional<IntMat>& u1) {
  IntMat u = unit_or(u1, rm.dim());
  ResidueSampler folds(rm.cofactor(0, u));
  ResidueSampler rems(rm.moduli()[0]);
  IntVec n1 = folds(rng);
  return rm.moduli()[0] * n1 + rems(rng);
}

ErrorBall::ErrorBall(const ErrorModel& em, std::size_t dim) {
  if (em.tau < 0) fail(ErrorCode::InvalidArgument, "error bound must be nonnegative");
  const Int r = floor_int(em.tau);
  const Rat lim = em.norm == Norm::L2 ? Rat(em.tau * em.tau) : em.tau;
  Int side = 2 * r + 1, box = 1;
  for (std::size_t i = 0; i < dim; ++i) box *= side;
  if (box > Int(std::to_string(default_enum_cap())))
    fail(ErrorCode::CapExceeded, "error ball enumeration exceeds cap");
  IntVec x(dim);
  for (auto& c : x) c = -r;
  for (;;) {
    if (measure(x, em.norm) <= lim) points_.push_back(x);
    std::size_t j = 0;
    while (j < dim) {
      x[j] += 1;
      if (x[j] <= r) break;
      x[j] = -r;
      ++j;
    }
    if (j == dim) break;
  }
}

IntVec ErrorBall::sample(Rng& rng) const { return points_[rng.uniform_u64(points_.size())]; }

IntVec sample_error(Rng& rng, const ErrorModel& em, std::size_t dim) { return ErrorBall(em, dim).sample(rng); }

RobustCase simulation_case_base() {
  return {"base", RobustModuli(IntMat{{48, 17}, {8, 46}}, {IntMat{{1, 3}, {3, 1}}, IntMat{{3, 4}, {4, 3}}})};
}

RobustCase simulation_case_doubled() {
  return {"doubled", RobustModuli(IntMat{{96, 34}, {16, 92}}, {IntMat{{1, 3}, {3, 1}}, IntMat{{3, 4}, {4, 3}}})};
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& f) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i; !failed && (i = next++) < n;) {
        try {
          f(i);
        } catch (...) {
          if (!failed.exchange(true)) err = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

std::vector<Fig1Row> fig1_experiment(const Fig1Config& cfg) {
  struct Trial {
    bool reconstructed = false, success = false, over = false;
    double error = 0;
  };
  std::vector<Fig1Row> rows;
  for (std::size_t ci = 0; ci < cfg.cases.size(); ++ci) {
    const RobustModuli& rm = cfg.cases[ci].moduli;
    RobustOptions opts;
    opts.norm = cfg.norm;
    const RobustSolver solver(rm, cfg.algorithm, opts);
    std::vector<Modulus> mods;
    for (const auto& m : rm.moduli()) mods.emplace_back(m);
    for (std::size_t ti = 0; ti < cfg.taus.size(); ++ti) {
      const Rat tau = cfg.taus[ti];
      const ErrorBall ball({tau, cfg.norm}, rm.dim());
      const Rat lim = cfg.norm == Norm::L2 ? Rat(tau * tau) : tau;
      std::vector<Trial> out(cfg.trials);
      parallel_for(cfg.trials, cfg.threads, [&](std::size_t k) {
        Rng rng(derive_seed(cfg.seed, {ci, ti, k}));
        IntVec m = sample_m_in_A1(rng, rm);
        std::vector<IntVec> folds, rtilde;
        for (const auto& mod : mods) {
          folds.push_back(mod.fold(m));
          rtilde.push_back(mod.reduce(m) + ball.sample(rng));
        }
        RobustTrace t = solver.solve(rtilde);
        Trial& r = out[k];
        if (!t.success) return;
        r.reconstructed = true;
        r.success = t.folding == folds;
        Reconstruction rec = robust_reconstruct(t, rtilde, rm);
        RatVec diff = rec.value - to_rat(m);
        Rat e = measure(diff, cfg.norm);
        r.error = magnitude(e, cfg.norm);
        r.over = r.success && e > lim;
      });
      Fig1Row row{cfg.cases[ci].name, tau};
      row.trials = cfg.trials;
      std::size_t rec = 0;
      double sum = 0;
      for (const auto& t : out) {
        if (t.reconstructed) {
          ++rec;
          sum += t.error;
        }
        row.successes += t.success;
        row.over_tau += t.over;
      }
      row.mean_error = rec ? sum / static_cast<double>(rec) : 0.0;
      row.success_rate = cfg.trials ? static_cast<double>(row.successes) / static_cast<double>(cfg.trials) : 0.0;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace mdcrt
