#pragma once

// Riemann and Hurwitz zeta for real arguments s > 1, a > 0, evaluated by
// Euler-Maclaurin summation. Accuracy is near machine precision over the
// parameter range used by the order-flow model (s = 1 + beta with beta > 1,
// a = metaorder age), which the test suite checks against independent
// partial-sum oracles.

namespace alob {

// hurwitz_zeta(s, a) = sum_{k>=0} (k + a)^(-s).
double hurwitz_zeta(double s, double a);

// riemann_zeta(s) = hurwitz_zeta(s, 1).
double riemann_zeta(double s);

}  // namespace alob
