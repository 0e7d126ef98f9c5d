#include "mdcrt/crt.hpp"

#include <string>

namespace mdcrt {

namespace {

std::string idx(std::size_t i) { return std::to_string(i); }

// What with W What + N Q = I; zero when N is unimodular.
IntMat bezout_inverse(const IntMat& w, const IntMat& n, std::size_t i) {
  if (is_unimodular(n)) return IntMat(n.rows(), n.cols());
  BezoutCert c = gcld(w, n, Form::Raw);
  if (!is_unimodular(c.L))
    fail(ErrorCode::ConditionViolated, "entry " + idx(i) + ": cofactor product is not coprime with its modulus");
  return c.P * inv_unimodular(c.L);
}

void check_pairwise_cc(const std::vector<IntMat>& ms, const char* what) {
  for (std::size_t i = 0; i < ms.size(); ++i)
    for (std::size_t j = i + 1; j < ms.size(); ++j) {
      if (!commutes(ms[i], ms[j]))
        fail(ErrorCode::ConditionViolated,
             std::string(what) + " " + idx(i) + " and " + idx(j) + " do not commute");
      if (!is_left_coprime(ms[i], ms[j]))
        fail(ErrorCode::ConditionViolated,
             std::string(what) + " " + idx(i) + " and " + idx(j) + " are not coprime");
    }
}

// (basis, canonical) for the final reduction.
std::pair<IntMat, bool> resolve_target(const IntMat& lcm, const std::optional<IntMat>& target) {
  if (target) {
    require_nonsingular(*target, "target modulus");
    if (target->rows() != lcm.rows() || !gcld_equivalent(*target, lcm))
      fail(ErrorCode::ConditionViolated, "target modulus is not an lcrm of the system moduli");
    return {*target, false};
  }
  return {hermite_column(lcm).H, true};
}

IntMat cofactor_product(const std::vector<IntMat>& fs, std::size_t skip, std::size_t dim) {
  IntMat w = IntMat::identity(dim);
  for (std::size_t j = 0; j < fs.size(); ++j)
    if (j != skip) w = w * fs[j];
  return w;
}

}  // namespace

void ResidueSystem::validate() const {
  if (moduli.empty()) fail(ErrorCode::InvalidArgument, "residue system is empty");
  if (moduli.size() != remainders.size())
    fail(ErrorCode::ShapeMismatch, "residue system: moduli and remainders differ in count");
  const std::size_t d = moduli[0].rows();
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    require_nonsingular(moduli[i], "residue system modulus");
    if (moduli[i].rows() != d || remainders[i].size() != d)
      fail(ErrorCode::ShapeMismatch, "residue system: entry " + idx(i) + " has the wrong dimension");
    if (!in_fpd(remainders[i], moduli[i]))
      fail(ErrorCode::InvalidArgument, "residue system: remainder " + idx(i) + " is not reduced");
  }
}

PairResult crt_pair(const IntVec& r1, const IntMat& M1, const IntVec& r2, const IntMat& M2,
                    const PairCertificate* cert, const IntMat* lcm) {
  require_nonsingular(M1, "crt_pair");
  require_nonsingular(M2, "crt_pair");
  if (M1.rows() != M2.rows() || r1.size() != M1.rows() || r2.size() != M1.rows())
    fail(ErrorCode::ShapeMismatch, "crt_pair: dimension mismatch");

  PairCertificate c;
  if (cert) {
    if (!(M1 * cert->P1 + M2 * cert->P2 == cert->G) || !left_divides(cert->G, M1) ||
        !left_divides(cert->G, M2))
      fail(ErrorCode::ConditionViolated, "crt_pair: supplied certificate is not a gcld certificate");
    c = *cert;
  } else {
    BezoutCert b = gcld(M1, M2);
    c = {b.L, b.P, b.Q};
  }

  IntVec y;
  if (!left_quotient(c.G, r2 - r1, &y))
    fail(ErrorCode::CrtInconsistent, "crt_pair: remainder difference is not in the gcld lattice");
  // Equals M2 P2 G^{-1} r1 + M1 P1 G^{-1} r2.
  PairResult out{r1 + M1 * (c.P1 * y), {}};

  IntMat l = lcrm(M1, M2, Form::Raw);
  if (lcm) {
    require_nonsingular(*lcm, "crt_pair");
    if (!gcld_equivalent(*lcm, l)) fail(ErrorCode::ConditionViolated, "crt_pair: supplied basis is not an lcrm");
    out.R1 = *lcm;
  } else {
    out.R1 = hermite_column(l).H;
  }
  return out;
}

CrtSolution crt_general(const ResidueSystem& sys, const GeneralOptions& opts, CrtTrace* trace) {
  sys.validate();
  IntVec acc = sys.remainders[0];
  IntMat acc_r = sys.moduli[0];
  for (std::size_t k = 1; k < sys.size(); ++k) {
    const std::size_t step = k - 1;
    const PairCertificate* cert =
        step < opts.certificates.size() && opts.certificates[step] ? &*opts.certificates[step] : nullptr;
    const IntMat* basis =
        step < opts.step_moduli.size() && opts.step_moduli[step] ? &*opts.step_moduli[step] : nullptr;
    PairResult pr;
    try {
      pr = crt_pair(acc, acc_r, sys.remainders[k], sys.moduli[k], cert, basis);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::CrtInconsistent) throw;
      for (std::size_t j = 0; j < k; ++j) {
        BezoutCert g = gcld(sys.moduli[j], sys.moduli[k], Form::Raw);
        if (!left_quotient(g.L, sys.remainders[k] - sys.remainders[j], nullptr))
          fail(ErrorCode::CrtInconsistent, "inconsistent congruences at entries " + idx(j) + " and " + idx(k));
      }
      fail(ErrorCode::CrtInconsistent, "entry " + idx(k) + " is inconsistent with entries 0.." + idx(k - 1));
    }
    IntVec reduced = Modulus(pr.R1).reduce(pr.m12);
    if (trace) trace->steps.push_back({k, pr.m12, pr.R1, reduced});
    acc = std::move(reduced);
    acc_r = std::move(pr.R1);
  }
  auto [R, canonical] = resolve_target(acc_r, opts.target);
  CrtSolution sol{Modulus(R).reduce(acc), R, canonical};
  for (std::size_t i = 0; i < sys.size(); ++i)
    if (!(Modulus(sys.moduli[i]).reduce(sol.m) == sys.remainders[i]))
      fail(ErrorCode::CrtInconsistent, "reconstruction does not reproduce remainder " + idx(i));
  return sol;
}

ExplicitCrtPlan::ExplicitCrtPlan(std::vector<IntMat> moduli, std::vector<IntMat> coeff, IntMat r, bool canonical)
    : coeff_(std::move(coeff)), r_(std::move(r)), canonical_(canonical) {
  for (auto& m : moduli) moduli_.emplace_back(std::move(m));
}

ExplicitCrtPlan ExplicitCrtPlan::from_factors(std::vector<IntMat> moduli, const std::vector<IntMat>& ns,
                                              const ExplicitOptions& opts) {
  if (moduli.empty()) fail(ErrorCode::InvalidArgument, "explicit CRT: empty system");
  if (ns.size() != moduli.size()) fail(ErrorCode::ShapeMismatch, "explicit CRT: one factor per modulus required");
  const std::size_t d = moduli[0].rows();
  for (std::size_t i = 0; i < ns.size(); ++i) {
    require_nonsingular(ns[i], "explicit CRT factor");
    if (ns[i].rows() != d) fail(ErrorCode::ShapeMismatch, "explicit CRT: factor dimension mismatch");
  }
  check_pairwise_cc(ns, "factors");
  for (std::size_t i = 0; i < ns.size(); ++i)
    if (!left_divides(ns[i], moduli[i]))
      fail(ErrorCode::ConditionViolated, "factor " + idx(i) + " does not left-divide its modulus");
  IntMat prod = product(ns, d);
  if (!gcld_equivalent(prod, lcrm_list(moduli, Form::Raw)))
    fail(ErrorCode::ConditionViolated, "product of factors is not an lcrm of the moduli");

  std::vector<IntMat> coeff;
  const IntMat id = IntMat::identity(d);
  for (std::size_t i = 0; i < ns.size(); ++i) {
    IntMat w = cofactor_product(ns, i, d);
    IntMat wh;
    if (i < opts.w_hat.size() && opts.w_hat[i]) {
      wh = *opts.w_hat[i];
      if (wh.rows() != d || wh.cols() != d || !left_divides(ns[i], id - w * wh))
        fail(ErrorCode::ConditionViolated, "supplied inverse " + idx(i) + " fails W What = I mod N");
    } else {
      wh = bezout_inverse(w, ns[i], i);
    }
    coeff.push_back(w * wh);
  }
  auto [R, canonical] = resolve_target(prod, opts.target);
  return ExplicitCrtPlan(std::move(moduli), std::move(coeff), std::move(R), canonical);
}

ExplicitCrtPlan ExplicitCrtPlan::left_unimodular(const IntMat& a, const std::vector<IntMat>& gammas,
                                                 const std::optional<IntMat>& target) {
  if (!is_unimodular(a)) fail(ErrorCode::ConditionViolated, "common left factor is not unimodular");
  if (gammas.empty()) fail(ErrorCode::InvalidArgument, "explicit CRT: empty system");
  const std::size_t d = a.rows();
  for (const auto& g : gammas) {
    require_nonsingular(g, "explicit CRT factor");
    if (g.rows() != d) fail(ErrorCode::ShapeMismatch, "explicit CRT: factor dimension mismatch");
  }
  check_pairwise_cc(gammas, "factors");
  std::vector<IntMat> moduli, coeff;
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    moduli.push_back(a * gammas[i]);
    IntMat w = a * cofactor_product(gammas, i, d);
    coeff.push_back(w * bezout_inverse(w, moduli.back(), i));
  }
  auto [R, canonical] = resolve_target(a * product(gammas, d), target);
  return ExplicitCrtPlan(std::move(moduli), std::move(coeff), std::move(R), canonical);
}

CrtSolution ExplicitCrtPlan::solve(const std::vector<IntVec>& remainders, CrtTrace* trace) const {
  if (remainders.size() != moduli_.size()) fail(ErrorCode::ShapeMismatch, "explicit CRT: remainder count mismatch");
  const std::size_t d = r_.dim();
  IntVec sum(d);
  for (std::size_t i = 0; i < coeff_.size(); ++i) sum = sum + coeff_[i] * remainders[i];
  CrtSolution sol{r_.reduce(sum), r_.matrix(), canonical_};
  for (std::size_t i = 0; i < moduli_.size(); ++i)
    if (!(moduli_[i].reduce(sol.m) == moduli_[i].reduce(remainders[i])))
      fail(ErrorCode::CrtInconsistent, "reconstruction does not reproduce remainder " + idx(i));
  if (trace) {
    trace->coefficients = coeff_;
    trace->raw_sum = sum;
  }
  return sol;
}

CrtSolution crt_explicit(const ResidueSystem& sys, const std::vector<IntMat>& ns, const ExplicitOptions& opts,
                         CrtTrace* trace) {
  sys.validate();
  return ExplicitCrtPlan::from_factors(sys.moduli, ns, opts).solve(sys.remainders, trace);
}

CrtSolution crt_cc(const ResidueSystem& sys, const std::optional<IntMat>& target, CrtTrace* trace) {
  ExplicitOptions opts;
  opts.target = target;
  return crt_explicit(sys, sys.moduli, opts, trace);
}

CrtSolution crt_left_unimodular(const std::vector<IntVec>& remainders, const IntMat& a,
                                const std::vector<IntMat>& gammas, const std::optional<IntMat>& target,
                                CrtTrace* trace) {
  return ExplicitCrtPlan::left_unimodular(a, gammas, target).solve(remainders, trace);
}

Int scalar_crt(const std::vector<std::pair<Int, Int>>& rs) {
  if (rs.empty()) fail(ErrorCode::InvalidArgument, "scalar_crt: empty system");
  for (const auto& [r, m] : rs)
    if (m <= 0) fail(ErrorCode::InvalidArgument, "scalar_crt: moduli must be positive");

  // Pairwise coprime N_i | M_i whose product is the lcm: split each new modulus
  // against the running lcm so every prime power lands in exactly one factor.
  std::vector<Int> ns{rs[0].second};
  Int lcm_acc = rs[0].second;
  for (std::size_t k = 1; k < rs.size(); ++k) {
    Int a = lcm_acc, b = rs[k].second;
    Int g = gcd(a, b);
    b /= g;
    for (Int e = gcd(a, b); e != 1; e = gcd(a, b)) {
      a /= e;
      b *= e;
    }
    for (auto& n : ns) n = gcd(n, a);
    ns.push_back(b);
    lcm_acc = a * b;
  }

  Int sum = 0;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if (ns[i] == 1) continue;
    Int w = lcm_acc / ns[i], inv;
    mpz_invert(inv.get_mpz_t(), Int(w % ns[i]).get_mpz_t(), ns[i].get_mpz_t());
    sum += w * inv * rs[i].first;
  }
  Int m;
  mpz_fdiv_r(m.get_mpz_t(), sum.get_mpz_t(), lcm_acc.get_mpz_t());
  for (std::size_t i = 0; i < rs.size(); ++i) {
    Int d = m - rs[i].first;
    if (!mpz_divisible_p(d.get_mpz_t(), rs[i].second.get_mpz_t()))
      fail(ErrorCode::CrtInconsistent, "scalar_crt: congruence " + idx(i) + " is inconsistent");
  }
  return m;
}

CrtSolution crt_diagonalized(const ResidueSystem& sys, const IntMat& U, const std::vector<IntMat>& lambdas) {
  sys.validate();
  const std::size_t d = sys.dim();
  if (!is_unimodular(U) || U.rows() != d) fail(ErrorCode::ConditionViolated, "crt_diagonalized: U is not unimodular");
  if (lambdas.size() != sys.size()) fail(ErrorCode::ShapeMismatch, "crt_diagonalized: one diagonal per modulus");
  for (const auto& l : lambdas) {
    require_nonsingular(l, "crt_diagonalized");
    if (l.rows() != d) fail(ErrorCode::ShapeMismatch, "crt_diagonalized: diagonal dimension mismatch");
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        if (i != j && l(i, j) != 0) fail(ErrorCode::ConditionViolated, "crt_diagonalized: Lambda is not diagonal");
  }
  IntMat u_inv = inv_unimodular(U);
  IntMat v;
  if (!left_quotient(lambdas[0], u_inv * sys.moduli[0], &v) || !is_unimodular(v))
    fail(ErrorCode::ConditionViolated, "crt_diagonalized: modulus 0 is not U Lambda V with unimodular V");
  for (std::size_t i = 1; i < sys.size(); ++i)
    if (!(U * lambdas[i] * v == sys.moduli[i]))
      fail(ErrorCode::ConditionViolated, "crt_diagonalized: modulus " + idx(i) + " does not share U and V");

  std::vector<IntVec> zeta;
  for (std::size_t i = 0; i < sys.size(); ++i) zeta.push_back(u_inv * sys.remainders[i]);
  IntVec a(d), lam(d);
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<std::pair<Int, Int>> rs;
    Int l = 1;
    for (std::size_t i = 0; i < sys.size(); ++i) {
      Int mod = abs(lambdas[i](j, j)), r;
      mpz_fdiv_r(r.get_mpz_t(), zeta[i][j].get_mpz_t(), mod.get_mpz_t());
      rs.emplace_back(r, mod);
      l = lcm(l, mod);
    }
    a[j] = scalar_crt(rs);
    lam[j] = l;
  }
  CrtSolution sol{U * a, U * IntMat::diagonal(lam), false};
  for (std::size_t i = 0; i < sys.size(); ++i)
    if (!(Modulus(sys.moduli[i]).reduce(sol.m) == sys.remainders[i]))
      fail(ErrorCode::CrtInconsistent, "crt_diagonalized: reconstruction does not reproduce remainder " + idx(i));
  return sol;
}

}  // namespace mdcrt
