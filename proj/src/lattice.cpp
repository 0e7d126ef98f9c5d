#include "mdcrt/lattice.hpp"

#include <cmath>
#include <string>

#include "mdcrt/divisibility.hpp"

namespace mdcrt {

Norm parse_norm(std::string_view s) {
  if (s == "l1" || s == "L1") return Norm::L1;
  if (s == "l2" || s == "L2") return Norm::L2;
  if (s == "linf" || s == "Linf" || s == "LINF") return Norm::Linf;
  fail(ErrorCode::InvalidArgument, "unknown norm '" + std::string(s) + "' (expected l1, l2 or linf)");
}

std::string_view norm_name(Norm n) {
  switch (n) {
    case Norm::L1: return "l1";
    case Norm::L2: return "l2";
    case Norm::Linf: return "linf";
  }
  return "?";
}

Rat measure(const RatVec& v, Norm norm) {
  Rat acc = 0;
  for (const auto& x : v) {
    switch (norm) {
      case Norm::L1: acc += abs(x); break;
      case Norm::L2: acc += x * x; break;
      case Norm::Linf:
        if (abs(x) > acc) acc = abs(x);
        break;
    }
  }
  return acc;
}

Rat measure(const IntVec& v, Norm norm) { return measure(to_rat(v), norm); }

Rat scale_measure(const Rat& m, const Rat& c, Norm norm) { return norm == Norm::L2 ? Rat(m * c * c) : Rat(m * c); }

double magnitude(const Rat& m, Norm norm) { return norm == Norm::L2 ? std::sqrt(m.get_d()) : m.get_d(); }

namespace {

// Squared-L2 radius enclosing the ball of the given measure.
Rat l2_radius(const Rat& m, Norm norm, std::size_t d) {
  switch (norm) {
    case Norm::L1: return m * m;
    case Norm::L2: return m;
    case Norm::Linf: return Rat(static_cast<unsigned long>(d)) * m * m;
  }
  return m;
}

Int lower_bound_in(const Rat& c, const Rat& q) {
  // Smallest integer x with (x - c)^2 <= q; assumes q >= 0.
  Int x = floor_int(c) - Int(static_cast<long>(std::floor(std::sqrt(std::max(0.0, q.get_d())))));
  auto ok = [&](const Int& v) {
    Rat t = Rat(v) - c;
    return t * t <= q;
  };
  while (ok(Int(x - 1))) x -= 1;
  while (!ok(x) && Rat(x) < c) x += 1;
  return x;
}

}  // namespace

struct Lattice::Search {
  RatVec target;
  std::vector<Rat> t;  // target coordinates along the Gram-Schmidt directions
  Norm norm;
  bool exclude_zero;
  bool found = false;
  Rat best;
  IntVec best_x;
  Rat radius2;  // squared-L2 pruning radius
  IntVec x;
  std::uint64_t nodes = 0;
};

Lattice::Lattice(IntMat basis, EnumLimits limits) : b_(std::move(basis)), limits_(limits) {
  require_nonsingular(b_, "lattice basis");
  const std::size_t d = b_.rows();
  if (d > limits_.max_dim)
    fail(ErrorCode::BoundExceeded, "lattice dimension " + std::to_string(d) + " exceeds enumeration limit " +
                                       std::to_string(limits_.max_dim));
  mu_ = RatMat(d, d);
  bn_.assign(d, Rat(0));
  bstar_.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    RatVec v = to_rat(b_.col(i));
    RatVec bs = v;
    for (std::size_t j = 0; j < i; ++j) {
      Rat dot = 0;
      for (std::size_t k = 0; k < d; ++k) dot += v[k] * bstar_[j][k];
      mu_(i, j) = dot / bn_[j];
      for (std::size_t k = 0; k < d; ++k) bs[k] -= mu_(i, j) * bstar_[j][k];
    }
    Rat n2 = 0;
    for (const auto& c : bs) n2 += c * c;
    bstar_[i] = bs;
    bn_[i] = n2;
  }
}

void Lattice::enumerate(Search& s) const { descend(s, dim() - 1, Rat(0)); }

void Lattice::descend(Search& s, std::size_t j, const Rat& above) const {
  const std::size_t d = dim();
  Rat c = s.t[j];
  for (std::size_t i = j + 1; i < d; ++i) c -= mu_(i, j) * Rat(s.x[i]);
  Rat room = s.radius2 - above;
  if (room < 0) return;
  // The radius only shrinks while iterating, so the starting point stays valid.
  for (Int x = lower_bound_in(c, Rat(room / bn_[j]));; x += 1) {
    if (++s.nodes > limits_.max_nodes) fail(ErrorCode::BoundExceeded, "lattice enumeration exceeded node budget");
    Rat t = Rat(x) - c;
    Rat here = above + t * t * bn_[j];
    if (here > s.radius2) {
      if (t > 0) break;
      continue;
    }
    s.x[j] = x;
    if (j == 0) {
      if (s.exclude_zero && s.x.is_zero()) continue;
      IntVec v = b_ * s.x;
      RatVec diff(d);
      for (std::size_t k = 0; k < d; ++k) diff[k] = Rat(v[k]) - s.target[k];
      Rat m = measure(diff, s.norm);
      if (!s.found || m < s.best || (m == s.best && s.x < s.best_x)) {
        s.found = true;
        s.best = m;
        s.best_x = s.x;
        s.radius2 = l2_radius(m, s.norm, d);
      }
    } else {
      descend(s, j - 1, here);
    }
  }
  s.x[j] = 0;
}

Rat Lattice::min_distance(Norm norm) const {
  const std::size_t d = dim();
  Search s;
  s.target = RatVec(d);
  s.t.assign(d, Rat(0));
  s.norm = norm;
  s.exclude_zero = true;
  s.x = IntVec(d);
  for (std::size_t i = 0; i < d; ++i) {
    IntVec c = b_.col(i);
    Rat m = measure(c, norm);
    IntVec e(d);
    e[i] = 1;
    if (!s.found || m < s.best || (m == s.best && e < s.best_x)) {
      s.found = true;
      s.best = m;
      s.best_x = e;
    }
  }
  s.radius2 = l2_radius(s.best, norm, d);
  enumerate(s);
  return s.best;
}

CvpResult Lattice::closest(const RatVec& w, Norm norm) const {
  const std::size_t d = dim();
  if (w.size() != d) fail(ErrorCode::ShapeMismatch, "cvp: target length mismatch");
  Search s;
  s.target = w;
  s.t.resize(d);
  for (std::size_t j = 0; j < d; ++j) {
    Rat dot = 0;
    for (std::size_t k = 0; k < d; ++k) dot += w[k] * bstar_[j][k];
    s.t[j] = dot / bn_[j];
  }
  s.norm = norm;
  s.exclude_zero = false;
  s.x = IntVec(d);
  // Nearest-plane seed.
  for (std::size_t jj = d; jj-- > 0;) {
    Rat c = s.t[jj];
    for (std::size_t i = jj + 1; i < d; ++i) c -= mu_(i, jj) * Rat(s.x[i]);
    s.x[jj] = round_half_up(c);
  }
  {
    IntVec v = b_ * s.x;
    RatVec diff(d);
    for (std::size_t k = 0; k < d; ++k) diff[k] = Rat(v[k]) - w[k];
    s.found = true;
    s.best = measure(diff, norm);
    s.best_x = s.x;
    s.radius2 = l2_radius(s.best, norm, d);
  }
  s.x = IntVec(d);
  enumerate(s);
  return {b_ * s.best_x, s.best_x, s.best};
}

CvpResult Lattice::closest(const IntVec& w, Norm norm) const { return closest(to_rat(w), norm); }

Rat min_distance(const IntMat& b, Norm norm, const EnumLimits& limits) { return Lattice(b, limits).min_distance(norm); }

CvpResult cvp(const IntMat& b, const RatVec& w, Norm norm, const EnumLimits& limits) {
  return Lattice(b, limits).closest(w, norm);
}

bool lattices_equal(const IntMat& b1, const IntMat& b2) {
  if (b1.rows() != b2.rows()) fail(ErrorCode::ShapeMismatch, "lattices_equal: dimension mismatch");
  return gcld_equivalent(b1, b2);
}

bool lattice_member(const IntMat& b, const IntVec& w) {
  IntVec q;
  return left_quotient(b, w, &q);
}

}  // namespace mdcrt
