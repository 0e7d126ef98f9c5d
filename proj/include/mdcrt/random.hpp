#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include "mdcrt/matrix.hpp"

namespace mdcrt {

// mt19937_64 is bit-exact across standard libraries; the distributions here are
// implemented locally for the same reason.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }
  std::uint64_t uniform_u64(std::uint64_t bound);  // [0, bound)
  Int uniform_below(const Int& bound);             // [0, bound)
  Int uniform_range(const Int& lo, const Int& hi); // [lo, hi]
  double uniform01();                              // [0, 1)
  double normal();

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);
// Seed for one trial, independent of evaluation order.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

}  // namespace mdcrt
