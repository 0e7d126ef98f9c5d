#include "mdcrt/residue.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#include "mdcrt/random.hpp"

namespace mdcrt {

Modulus::Modulus(IntMat m) : m_(std::move(m)) {
  require_nonsingular(m_, "modulus");
  det_ = mdcrt::det(m_);
  adj_ = mdcrt::adjugate(m_);
  absdet_ = abs(det_);
  sign_ = sgn(det_);
}

IntVec Modulus::scaled_coords(const IntVec& v) const {
  if (v.size() != dim()) fail(ErrorCode::ShapeMismatch, "modulus: vector length mismatch");
  IntVec a = adj_ * v;
  if (sign_ < 0)
    for (auto& x : a) x = -x;
  return a;
}

IntVec Modulus::reduce(const IntVec& v) const {
  IntVec a = scaled_coords(v);
  for (auto& x : a) mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), absdet_.get_mpz_t());
  IntVec r = m_ * a;
  for (auto& x : r) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), absdet_.get_mpz_t());
  return r;
}

IntVec Modulus::fold(const IntVec& v) const {
  IntVec a = scaled_coords(v);
  for (auto& x : a) mpz_fdiv_q(x.get_mpz_t(), x.get_mpz_t(), absdet_.get_mpz_t());
  return a;
}

bool Modulus::contains(const IntVec& v) const {
  for (const auto& x : scaled_coords(v))
    if (x < 0 || x >= absdet_) return false;
  return true;
}

bool Modulus::divides(const IntVec& v) const {
  for (const auto& x : scaled_coords(v))
    if (!mpz_divisible_p(x.get_mpz_t(), absdet_.get_mpz_t())) return false;
  return true;
}

IntVec Modulus::solve(const IntVec& v) const {
  IntVec a = scaled_coords(v);
  for (auto& x : a) {
    if (!mpz_divisible_p(x.get_mpz_t(), absdet_.get_mpz_t()))
      fail(ErrorCode::InvalidArgument, "vector is not in the lattice of the modulus");
    mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), absdet_.get_mpz_t());
  }
  return a;
}

Residue mod_reduce(const IntVec& m, const IntMat& M) {
  Modulus mod(M);
  return {M, mod.reduce(m)};
}

IntVec mod_reduce_rational(const IntVec& m, const IntMat& M) {
  RatVec x = inv_rational(M) * m;
  for (auto& c : x) c -= Rat(floor_int(c));
  RatMat mr = to_rat(M);
  RatVec r(M.rows());
  for (std::size_t i = 0; i < M.rows(); ++i)
    for (std::size_t j = 0; j < M.cols(); ++j) r[i] += mr(i, j) * x[j];
  return to_int(r);
}

IntVec folding_vector(const IntVec& m, const IntMat& M) { return Modulus(M).fold(m); }

bool in_fpd(const IntVec& m, const IntMat& M) { return Modulus(M).contains(m); }

std::uint64_t default_enum_cap() {
  if (const char* env = std::getenv("MDCRT_ENUM_CAP")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return 1000000;
}

std::vector<IntVec> residue_set(const IntMat& M, std::uint64_t cap) {
  Modulus mod(M);
  if (abs(mod.det()) > Int(std::to_string(cap)))
    fail(ErrorCode::CapExceeded, "residue_set: |det| = " + Int(abs(mod.det())).get_str() +
                                     " exceeds enumeration cap " + std::to_string(cap));
  ResidueSampler sampler(M);
  const IntVec& lam = sampler.moduli();
  const std::size_t d = lam.size();
  std::vector<IntVec> out;
  out.reserve(Int(abs(mod.det())).get_ui());
  IntVec digits(d);
  for (;;) {
    out.push_back(sampler.from_digits(digits));
    std::size_t j = d;
    while (j > 0) {
      --j;
      digits[j] += 1;
      if (digits[j] < lam[j]) break;
      digits[j] = 0;
      if (j == 0) {
        std::sort(out.begin(), out.end());
        return out;
      }
    }
    if (d == 0) return out;
  }
}

ResidueSampler::ResidueSampler(const IntMat& M) : mod_(M) {
  SmithForm s = smith(M);
  u_inv_ = inv_unimodular(s.U);
  lambda_ = IntVec(M.rows());
  for (std::size_t i = 0; i < M.rows(); ++i) lambda_[i] = s.Lambda(i, i);
}

IntVec ResidueSampler::from_digits(const IntVec& digits) const { return mod_.reduce(u_inv_ * digits); }

IntVec ResidueSampler::operator()(Rng& rng) const {
  IntVec digits(lambda_.size());
  for (std::size_t i = 0; i < lambda_.size(); ++i) digits[i] = rng.uniform_below(lambda_[i]);
  return from_digits(digits);
}

}  // namespace mdcrt
