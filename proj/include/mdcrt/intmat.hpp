#pragma once

#include <vector>

#include "mdcrt/matrix.hpp"

namespace mdcrt {

struct SmithForm {
  IntMat U;       // D x D, unimodular
  IntMat V;       // K x K, unimodular
  IntMat Lambda;  // D x K, U * A * V, diagonal with lambda_i | lambda_{i+1}

  std::size_t rank() const;
  // Leading nonzero diagonal entries.
  IntVec invariant_factors() const;
};

Int det(const IntMat& a);
IntMat adjugate(const IntMat& a);
bool is_unimodular(const IntMat& a);
SmithForm smith(const IntMat& a);
RatMat inv_rational(const IntMat& a);

// Exact integer inverse; requires |det| = 1.
IntMat inv_unimodular(const IntMat& a);

IntMat hstack(const IntMat& a, const IntMat& b);
IntMat product(const std::vector<IntMat>& factors, std::size_t dim);

RatMat to_rat(const IntMat& a);
RatVec to_rat(const IntVec& v);
bool is_integral(const RatMat& a);
bool is_integral(const RatVec& v);
IntMat to_int(const RatMat& a);  // throws unless integral
IntVec to_int(const RatVec& v);
RatVec operator*(const RatMat& a, const IntVec& x);

Int floor_int(const Rat& q);
Int round_half_up(const Rat& q);

// A^{-1} B when the quotient is integral, otherwise nothing.
bool left_quotient(const IntMat& a, const IntMat& b, IntMat* out);
bool left_quotient(const IntMat& a, const IntVec& b, IntVec* out);

void require_square(const IntMat& a, const char* what);
void require_nonsingular(const IntMat& a, const char* what);

}  // namespace mdcrt
