#include "mdcrt/random.hpp"

#include <cmath>
#include <numbers>

namespace mdcrt {

std::uint64_t Rng::uniform_u64(std::uint64_t bound) {
  if (bound == 0) fail(ErrorCode::InvalidArgument, "uniform_u64: empty range");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  for (;;) {
    std::uint64_t x = eng_();
    if (x < limit) return x % bound;
  }
}

Int Rng::uniform_below(const Int& bound) {
  if (bound <= 0) fail(ErrorCode::InvalidArgument, "uniform_below: empty range");
  if (bound.fits_ulong_p()) return Int(static_cast<unsigned long>(uniform_u64(bound.get_ui())));
  const std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
  for (;;) {
    Int x = 0;
    std::size_t have = 0;
    while (have < bits) {
      x <<= 64;
      const std::uint64_t word = next();
      Int w;
      mpz_import(w.get_mpz_t(), 1, 1, sizeof(word), 0, 0, &word);
      x += w;
      have += 64;
    }
    x >>= (have - bits);
    if (x < bound) return x;
  }
}

Int Rng::uniform_range(const Int& lo, const Int& hi) { return lo + uniform_below(Int(hi - lo + 1)); }

double Rng::uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1;
  do u1 = uniform01();
  while (u1 == 0.0);
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = splitmix64(master);
  for (std::uint64_t p : path) h = splitmix64(h ^ splitmix64(p + 0x632be59bd9b4e019ULL));
  return h;
}

}  // namespace mdcrt
