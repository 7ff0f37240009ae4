#include "alob/zeta.hpp"

#include <cmath>
#include <stdexcept>

namespace alob {

namespace {

// Bernoulli numbers B_2, B_4, ..., B_16 for the Euler-Maclaurin tail.
constexpr double kBernoulli2n[] = {
    1.0 / 6.0,   -1.0 / 30.0,     1.0 / 42.0,   -1.0 / 30.0,
    5.0 / 66.0,  -691.0 / 2730.0, 7.0 / 6.0,    -3617.0 / 510.0,
};

}  // namespace

double hurwitz_zeta(double s, double a) {
    if (!(s > 1.0)) throw std::domain_error("hurwitz_zeta: requires s > 1");
    if (!(a > 0.0)) throw std::domain_error("hurwitz_zeta: requires a > 0");

    // Direct sum over the first N terms, then Euler-Maclaurin for the rest:
    //   sum_{k>=N} (a+k)^-s  =  (a+N)^(1-s)/(s-1) + (a+N)^-s/2
    //                         + sum_j B_2j/(2j)! * (s)_(2j-1) * (a+N)^(-s-2j+1).
    // N is chosen so the asymptotic series converges fast; 18 + |s| keeps the
    // correction terms decreasing over the whole supported range.
    const int n_direct = 18 + static_cast<int>(s);
    double sum = 0.0;
    for (int k = 0; k < n_direct; ++k) sum += std::pow(a + k, -s);

    const double x = a + n_direct;
    sum += std::pow(x, 1.0 - s) / (s - 1.0);
    sum += 0.5 * std::pow(x, -s);

    // Rising factorial (s)_(2j-1) accumulated incrementally.
    double poch = s;                      // (s)_1
    double x_pow = std::pow(x, -s - 1.0); // x^(-s-2j+1) at j = 1
    double factorial = 2.0;               // (2j)! at j = 1
    const double x2 = x * x;
    for (int j = 1; j <= 8; ++j) {
        const double term = kBernoulli2n[j - 1] / factorial * poch * x_pow;
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        // Advance to j+1: multiply pochhammer by (s+2j-1)(s+2j),
        // factorial by (2j+1)(2j+2), and the power by x^-2.
        poch *= (s + 2.0 * j - 1.0) * (s + 2.0 * j);
        factorial *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
        x_pow /= x2;
    }
    return sum;
}

double riemann_zeta(double s) { return hurwitz_zeta(s, 1.0); }

}  // namespace alob
