#include "alob/rng.hpp"

#include <algorithm>
#include <cmath>

namespace alob::rng {

namespace {

// PTRS: Poisson transformed rejection with squeeze (W. Hormann, "The
// transformed rejection method for generating Poisson random variables",
// 1993). Exact for mean >= 10; expected uniforms per draw is close to 2.
std::int64_t poisson_ptrs(Xoshiro256pp& gen, double mu) noexcept {
    const double smu = std::sqrt(mu);
    const double log_mu = std::log(mu);
    const double b = 0.931 + 2.53 * smu;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);

    for (;;) {
        const double u = gen.next_double() - 0.5;
        const double v = gen.next_double();
        const double us = 0.5 - std::abs(u);
        const double k = std::floor((2.0 * a / us + b) * u + mu + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<std::int64_t>(k);
        if (k < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
            k * log_mu - mu - std::lgamma(k + 1.0)) {
            return static_cast<std::int64_t>(k);
        }
    }
}

}  // namespace

std::int64_t poisson(Xoshiro256pp& gen, double mean) noexcept {
    if (mean <= 0.0) return 0;
    if (mean < 10.0) {
        // Multiplicative inversion: count uniforms until their product drops
        // below exp(-mean).
        const double threshold = std::exp(-mean);
        std::int64_t k = 0;
        double prod = gen.next_double();
        while (prod > threshold) {
            ++k;
            prod *= gen.next_double();
        }
        return k;
    }
    return poisson_ptrs(gen, mean);
}

std::int64_t binomial(Xoshiro256pp& gen, std::int64_t n, double p) noexcept {
    if (n <= 0 || p <= 0.0) return 0;
    if (p >= 1.0) return n;
    if (static_cast<double>(n) * p <= 25.0) {
        // CDF inversion with the recurrence
        //   P(k+1) = P(k) * (n-k)/(k+1) * p/(1-p).
        const double q = 1.0 - p;
        const double ratio = p / q;
        double pmf = std::pow(q, static_cast<double>(n));
        double cdf = pmf;
        const double u = gen.next_double();
        std::int64_t k = 0;
        while (u > cdf && k < n) {
            pmf *= ratio * static_cast<double>(n - k) / static_cast<double>(k + 1);
            cdf += pmf;
            ++k;
            // pmf underflow guard: remaining mass is below double epsilon.
            if (pmf < 1e-318) break;
        }
        return k;
    }
    // Rare transient path (large n*p): exact Bernoulli counting.
    std::int64_t k = 0;
    for (std::int64_t i = 0; i < n; ++i) {
        if (gen.next_double() < p) ++k;
    }
    return k;
}

SurvivalTable::SurvivalTable(double p, std::size_t n_max) : one_minus_p_(1.0 - p) {
    table_.resize(n_max + 1);
    table_[0] = 1.0;
    for (std::size_t k = 1; k <= n_max; ++k) table_[k] = table_[k - 1] * one_minus_p_;
}

}  // namespace alob::rng
