#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "mdcrt/divisibility.hpp"
#include "mdcrt/residue.hpp"

namespace mdcrt {

struct ResidueSystem {
  std::vector<IntMat> moduli;
  std::vector<IntVec> remainders;

  std::size_t size() const { return moduli.size(); }
  std::size_t dim() const { return moduli.empty() ? 0 : moduli[0].rows(); }
  // Nonempty, nonsingular moduli of equal dimension, remainders in N(M_i).
  void validate() const;
};

struct CrtSolution {
  IntVec m;
  IntMat R;
  bool canonical = true;  // R is the Hermite representative
};

// (G, P1, P2) with M1 P1 + M2 P2 = G a gcld of M1, M2.
struct PairCertificate {
  IntMat G, P1, P2;
};

struct PairResult {
  IntVec m12;
  IntMat R1;
};

struct CascadeStep {
  std::size_t merged;  // index of the entry merged in this step
  IntVec raw;          // before reduction modulo R
  IntMat R;
  IntVec reduced;
};

struct CrtTrace {
  std::vector<CascadeStep> steps;  // crt_general
  std::vector<IntMat> coefficients;  // W_i * What_i for the explicit formula
  IntVec raw_sum;                    // explicit formula before reduction
};

// Supplied certificates and intermediate bases are validated, not trusted.
struct GeneralOptions {
  std::vector<std::optional<PairCertificate>> certificates;  // per merge step
  std::vector<std::optional<IntMat>> step_moduli;            // lcrm basis per merge step
  std::optional<IntMat> target;                              // final R basis
};

struct ExplicitOptions {
  std::optional<IntMat> target;
  std::vector<std::optional<IntMat>> w_hat;
};

PairResult crt_pair(const IntVec& r1, const IntMat& M1, const IntVec& r2, const IntMat& M2,
                    const PairCertificate* cert = nullptr, const IntMat* lcm = nullptr);

CrtSolution crt_general(const ResidueSystem& sys, const GeneralOptions& opts = {},
                        CrtTrace* trace = nullptr);
CrtSolution crt_explicit(const ResidueSystem& sys, const std::vector<IntMat>& ns,
                         const ExplicitOptions& opts = {}, CrtTrace* trace = nullptr);
CrtSolution crt_cc(const ResidueSystem& sys, const std::optional<IntMat>& target = std::nullopt,
                   CrtTrace* trace = nullptr);
// Moduli A * Gamma_i with A unimodular and Gamma_i pairwise commuting and coprime.
CrtSolution crt_left_unimodular(const std::vector<IntVec>& remainders, const IntMat& a,
                                const std::vector<IntMat>& gammas,
                                const std::optional<IntMat>& target = std::nullopt,
                                CrtTrace* trace = nullptr);
CrtSolution crt_diagonalized(const ResidueSystem& sys, const IntMat& U, const std::vector<IntMat>& lambdas);

Int scalar_crt(const std::vector<std::pair<Int, Int>>& rs);

// m = < sum_i C_i r_i >_R with fixed coefficient matrices; reusable across calls.
class ExplicitCrtPlan {
 public:
  static ExplicitCrtPlan from_factors(std::vector<IntMat> moduli, const std::vector<IntMat>& ns,
                                      const ExplicitOptions& opts = {});
  static ExplicitCrtPlan left_unimodular(const IntMat& a, const std::vector<IntMat>& gammas,
                                         const std::optional<IntMat>& target = std::nullopt);

  CrtSolution solve(const std::vector<IntVec>& remainders, CrtTrace* trace = nullptr) const;
  const IntMat& R() const { return r_.matrix(); }
  const std::vector<IntMat>& coefficients() const { return coeff_; }

 private:
  ExplicitCrtPlan(std::vector<IntMat> moduli, std::vector<IntMat> coeff, IntMat r, bool canonical);
  std::vector<Modulus> moduli_;
  std::vector<IntMat> coeff_;
  Modulus r_;
  bool canonical_;
};

}  // namespace mdcrt
