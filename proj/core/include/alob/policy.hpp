#pragma once

#include <cstdint>

#include "alob/errors.hpp"
#include "alob/rng.hpp"

// Liquidity-taking policies: the volume fraction f of the opposite best a
// market order consumes is drawn from the beta-like family
//
//   P(f) = g (1 - f)^(g - 1),   f in [0, 1],
//
// either with a constant exponent g = zeta (the baseline taker) or with the
// state-dependent exponent g(x) chosen so that the probability of taking
// the whole opposite best equals alpha (1 - x), where x is the product of
// the trade sign and its predicted value. The adaptive taker trades small
// when it is predictable and sweeps the quote when it surprises, which is
// exactly the dosage that keeps the price diffusive under autocorrelated
// order flow.

namespace alob::policy {

struct TothPolicy {
    double zeta = 1.0;  // constant exponent; 1 = uniform fractions

    void validate() const {
        if (!(zeta > 0.0)) throw ValidationError("toth policy: zeta must be > 0");
    }
};

struct AdaptivePolicy {
    double alpha = 0.5;  // penetration probability at x = 0; (0, 1/2]
    double delta = 0.05; // a fraction f >= 1 - delta sweeps the whole best

    void validate() const {
        if (!(alpha > 0.0) || alpha > 0.5)
            throw ValidationError("adaptive policy: alpha must lie in (0, 1/2]");
        if (!(delta > 0.0) || !(delta < 1.0))
            throw ValidationError("adaptive policy: delta must lie in (0, 1)");
    }
};

// g(x) = (log(alpha) + log(1 - x)) / log(delta). The exponent reaches zero
// only at x = -1 with alpha = 1/2; it is clamped at 1e-12 there (and the
// optional counter incremented) so the fraction sampler stays defined.
double adaptive_exponent(const AdaptivePolicy& policy, double x,
                         std::uint64_t* clamp_count = nullptr);

// delta^g(x) collapses to alpha * (1 - x) by construction; evaluated in
// closed form and clamped to [0, 1].
double penetration_probability(const AdaptivePolicy& policy, double x);

// Inverse-CDF draw from P(f) = g (1 - f)^(g - 1).
double sample_fraction(double exponent, rng::Xoshiro256pp& gen);

struct VolumeDecision {
    std::int64_t shares = 0;
    bool full_best = false;  // order consumes the entire opposite best
};

// Baseline taker: v = max(1 share, floor(f * best)).
VolumeDecision toth_volume(double fraction, std::int64_t opposite_best_shares);

// Adaptive taker: f >= 1 - delta maps to the whole opposite best, otherwise
// v = max(1 share, floor(f * best)).
VolumeDecision adaptive_volume(const AdaptivePolicy& policy, double fraction,
                               std::int64_t opposite_best_shares);

}  // namespace alob::policy
