#pragma once

#include <vector>

#include "mdcrt/intmat.hpp"

namespace mdcrt {

enum class Form { Canonical, Raw };

// M P + N Q = L, with L a greatest common left divisor of M and N.
struct BezoutCert {
  IntMat L, P, Q;
};

// P M + Q N = L, with L a greatest common right divisor of M and N.
struct GcrdCert {
  IntMat L, P, Q;
};

// Column-style Hermite form: H = B W with W unimodular, H lower triangular,
// positive diagonal, 0 <= H(i,j) < H(i,i) for j < i. Unique per lattice.
struct HermiteForm {
  IntMat H, W;
};
HermiteForm hermite_column(const IntMat& b);
// Row-style dual: H = W B, upper triangular.
HermiteForm hermite_row(const IntMat& b);

BezoutCert gcld(const IntMat& m, const IntMat& n, Form form = Form::Canonical);
GcrdCert gcrd(const IntMat& m, const IntMat& n, Form form = Form::Canonical);
IntMat lcrm(const IntMat& m, const IntMat& n, Form form = Form::Canonical);
IntMat lclm(const IntMat& m, const IntMat& n, Form form = Form::Canonical);
IntMat lcrm_list(const std::vector<IntMat>& ms, Form form = Form::Canonical);

bool is_left_coprime(const IntMat& m, const IntMat& n);
bool is_right_coprime(const IntMat& m, const IntMat& n);
bool commutes(const IntMat& m, const IntMat& n);
bool circulant2_coprime(const Int& p1, const Int& q1, const Int& p2, const Int& q2);
bool gcld_equivalent(const IntMat& b1, const IntMat& b2);

// N divides M on the left: M = N X for integral X.
bool left_divides(const IntMat& n, const IntMat& m);
bool right_divides(const IntMat& n, const IntMat& m);

}  // namespace mdcrt
