#pragma once

#include <cstdint>
#include <vector>

#include "mdcrt/intmat.hpp"

namespace mdcrt {

class Rng;

struct Residue {
  IntMat modulus;
  IntVec value;
};

// Precomputed adjugate and determinant for repeated reductions by one modulus.
class Modulus {
 public:
  explicit Modulus(IntMat m);

  const IntMat& matrix() const { return m_; }
  const Int& det() const { return det_; }
  const IntMat& adjugate() const { return adj_; }
  std::size_t dim() const { return m_.rows(); }

  // sign(det) * adj(M) * v, i.e. |det| * M^{-1} v.
  IntVec scaled_coords(const IntVec& v) const;
  IntVec reduce(const IntVec& v) const;
  IntVec fold(const IntVec& v) const;
  bool contains(const IntVec& v) const;  // v in N(M)
  bool divides(const IntVec& v) const;   // v in LAT(M)
  IntVec solve(const IntVec& v) const;   // M^{-1} v, throws unless integral

 private:
  IntMat m_, adj_;
  Int det_, absdet_;
  int sign_;
};

Residue mod_reduce(const IntVec& m, const IntMat& M);
// Cross-check path: M * (M^{-1}m - floor(M^{-1}m)) in exact rationals.
IntVec mod_reduce_rational(const IntVec& m, const IntMat& M);
IntVec folding_vector(const IntVec& m, const IntMat& M);
bool in_fpd(const IntVec& m, const IntMat& M);

// Reads MDCRT_ENUM_CAP, defaulting to 1e6.
std::uint64_t default_enum_cap();
// Lexicographically sorted representatives of N(M).
std::vector<IntVec> residue_set(const IntMat& M, std::uint64_t cap = default_enum_cap());

// Uniform draws from N(M) through Smith digits; no enumeration.
class ResidueSampler {
 public:
  explicit ResidueSampler(const IntMat& M);
  IntVec operator()(Rng& rng) const;
  IntVec from_digits(const IntVec& digits) const;
  const IntVec& moduli() const { return lambda_; }

 private:
  Modulus mod_;
  IntMat u_inv_;
  IntVec lambda_;
};

}  // namespace mdcrt
