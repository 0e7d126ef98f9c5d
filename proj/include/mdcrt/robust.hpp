#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mdcrt/crt.hpp"
#include "mdcrt/lattice.hpp"
#include "mdcrt/random.hpp"

namespace mdcrt {

// Moduli M * Gamma_i with pairwise commuting, coprime Gamma_i.
class RobustModuli {
 public:
  RobustModuli(IntMat m, std::vector<IntMat> gammas);

  const IntMat& M() const { return m_; }
  const std::vector<IntMat>& gammas() const { return gammas_; }
  const std::vector<IntMat>& moduli() const { return moduli_; }
  std::size_t size() const { return gammas_.size(); }
  std::size_t dim() const { return m_.rows(); }
  // Product of all Gamma_j with j != i, times u.
  IntMat cofactor(std::size_t i, const IntMat& u) const;

 private:
  IntMat m_;
  std::vector<IntMat> gammas_, moduli_;
};

struct ErrorModel {
  Rat tau;
  Norm norm = Norm::L2;
};

struct RobustTrace {
  int algorithm = 1;
  std::vector<IntVec> cvp_points;  // v_i or p_i; entry 0 is zero
  std::vector<IntVec> residues;    // zeta_i or varpi_i; entry 0 is zero
  IntVec aggregate;                // chi_1 or psi_1
  std::vector<IntVec> folding;     // estimated folding vectors
  bool success = false;
  std::string failure;
};

struct Reconstruction {
  RatVec value;
  IntVec rounded;  // round half up
};

struct Bound {
  Norm norm = Norm::L2;
  Rat measure;               // squared for L2
  bool conservative = false; // measure is a rigorous lower bound rather than exact
  double value() const { return magnitude(measure, norm); }
};

struct RobustOptions {
  Norm norm = Norm::L2;
  std::optional<IntMat> u1;          // identity when absent
  std::optional<SmithForm> smith;    // Algorithm 2 only; computed when absent
  EnumLimits limits;
};

// Precomputes lattices and CRT coefficients for one modulus set.
class RobustSolver {
 public:
  RobustSolver(const RobustModuli& rm, int algorithm, RobustOptions opts = {});
  RobustTrace solve(const std::vector<IntVec>& rtilde) const;
  int algorithm() const { return algorithm_; }
  const SmithForm& smith() const { return smith_; }

 private:
  RobustTrace solve1(const std::vector<IntVec>& rtilde) const;
  RobustTrace solve2(const std::vector<IntVec>& rtilde) const;

  RobustModuli rm_;
  int algorithm_;
  RobustOptions opts_;
  SmithForm smith_;
  IntMat v_inv_;
  std::optional<Lattice> lattice_;
  std::optional<ExplicitCrtPlan> plan_;
  std::vector<Modulus> reducers_;  // Gamma_i or V^{-1} Gamma_i
  std::vector<Modulus> gamma_;
};

void validate_smith(const IntMat& m, const SmithForm& s);

bool range_contains(const IntVec& m, const RobustModuli& rm, std::size_t i,
                    const std::optional<IntMat>& ui = std::nullopt);
RobustTrace algorithm1(const std::vector<IntVec>& rtilde, const RobustModuli& rm, Norm norm = Norm::L2,
                       const std::optional<IntMat>& u1 = std::nullopt);
RobustTrace algorithm2(const std::vector<IntVec>& rtilde, const RobustModuli& rm, Norm norm = Norm::L2,
                       const std::optional<IntMat>& u1 = std::nullopt,
                       const std::optional<SmithForm>& smith_of_m = std::nullopt);

Bound bound_algorithm1(const RobustModuli& rm, Norm norm = Norm::L2);
Bound bound_algorithm2(const RobustModuli& rm, Norm norm = Norm::L2,
                       const std::optional<SmithForm>& smith_of_m = std::nullopt);
// Exact for L1/Linf; for L2 a certified rational upper bound on the squared norm.
Rat operator_norm_measure(const IntMat& u, Norm norm);
// True iff tau is strictly below the bound.
bool below_bound(const Rat& tau, const Bound& b);

Reconstruction robust_reconstruct(const RobustTrace& trace, const std::vector<IntVec>& rtilde,
                                  const RobustModuli& rm);

IntVec sample_m_in_A1(Rng& rng, const RobustModuli& rm, const std::optional<IntMat>& u1 = std::nullopt);

// Integer points of a closed ball, enumerated once.
class ErrorBall {
 public:
  ErrorBall(const ErrorModel& em, std::size_t dim);
  IntVec sample(Rng& rng) const;
  const std::vector<IntVec>& points() const { return points_; }

 private:
  std::vector<IntVec> points_;
};

IntVec sample_error(Rng& rng, const ErrorModel& em, std::size_t dim);

struct RobustCase {
  std::string name;
  RobustModuli moduli;
};

struct Fig1Config {
  std::vector<RobustCase> cases;
  std::vector<Rat> taus;
  std::size_t trials = 500;
  std::uint64_t seed = 1;
  Norm norm = Norm::L2;
  int algorithm = 1;
  unsigned threads = 0;  // 0 = hardware concurrency
};

struct Fig1Row {
  std::string case_name;
  Rat tau;
  double mean_error = 0;     // over trials that produced a reconstruction
  double success_rate = 0;   // folding vectors exactly right
  std::size_t trials = 0;
  std::size_t successes = 0;
  std::size_t over_tau = 0;  // successful trials with error above tau
};

std::vector<Fig1Row> fig1_experiment(const Fig1Config& cfg);

// The two sampling setups used by the experiment harnesses: M and 2M.
RobustCase simulation_case_base();
RobustCase simulation_case_doubled();

// Runs f(i) for i in [0, n) on up to `threads` workers.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& f);

}  // namespace mdcrt
