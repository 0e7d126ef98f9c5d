#pragma once

#include <cstdint>
#include <string_view>

#include "mdcrt/intmat.hpp"

namespace mdcrt {

enum class Norm { L1, L2, Linf };

Norm parse_norm(std::string_view s);
std::string_view norm_name(Norm n);

// Exact size of a vector: the squared length for L2, the length otherwise.
Rat measure(const RatVec& v, Norm norm);
Rat measure(const IntVec& v, Norm norm);
// Measure of c * v for a scalar c >= 0 given the measure of v.
Rat scale_measure(const Rat& m, const Rat& c, Norm norm);
// Plain magnitude (square root for L2), for reporting only.
double magnitude(const Rat& measure, Norm norm);

struct EnumLimits {
  std::size_t max_dim = 6;
  std::uint64_t max_nodes = 20'000'000;
};

struct CvpResult {
  IntVec point;   // B * coeffs
  IntVec coeffs;
  Rat measure;    // of point - w
};

// Gram-Schmidt data prepared once per basis; queries are exact.
class Lattice {
 public:
  explicit Lattice(IntMat basis, EnumLimits limits = {});

  const IntMat& basis() const { return b_; }
  std::size_t dim() const { return b_.rows(); }

  Rat min_distance(Norm norm) const;
  CvpResult closest(const RatVec& w, Norm norm) const;
  CvpResult closest(const IntVec& w, Norm norm) const;

 private:
  struct Search;
  void enumerate(Search& s) const;
  void descend(Search& s, std::size_t level, const Rat& above) const;

  IntMat b_;
  EnumLimits limits_;
  RatMat mu_;              // mu_(i, j) for j < i
  std::vector<Rat> bn_;    // squared Gram-Schmidt lengths
  std::vector<RatVec> bstar_;
};

Rat min_distance(const IntMat& b, Norm norm, const EnumLimits& limits = {});
CvpResult cvp(const IntMat& b, const RatVec& w, Norm norm, const EnumLimits& limits = {});
bool lattices_equal(const IntMat& b1, const IntMat& b2);
bool lattice_member(const IntMat& b, const IntVec& w);

}  // namespace mdcrt
