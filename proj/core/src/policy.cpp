#include "alob/policy.hpp"

#include <algorithm>
#include <cmath>

namespace alob::policy {

double adaptive_exponent(const AdaptivePolicy& policy, double x, std::uint64_t* clamp_count) {
    policy.validate();
    if (!(x >= -1.0) || !(x <= 1.0))
        throw ValidationError("adaptive policy: x must lie in [-1, 1]");
    // x = 1 means a perfectly predicted trade; clamping 1 - x at the noise
    // floor keeps g finite there (the sampler then concentrates f near 0).
    const double one_minus_x = std::max(1.0 - x, 1e-12);
    double g = (std::log(policy.alpha) + std::log(one_minus_x)) / std::log(policy.delta);
    if (g <= 1e-12) {
        g = 1e-12;
        if (clamp_count != nullptr) ++*clamp_count;
    }
    return g;
}

double penetration_probability(const AdaptivePolicy& policy, double x) {
    policy.validate();
    return std::clamp(policy.alpha * (1.0 - x), 0.0, 1.0);
}

double sample_fraction(double exponent, rng::Xoshiro256pp& gen) {
    if (!(exponent > 0.0)) throw ValidationError("sample_fraction: exponent must be > 0");
    const double u = gen.next_double();
    return 1.0 - std::pow(1.0 - u, 1.0 / exponent);
}

VolumeDecision toth_volume(double fraction, std::int64_t opposite_best_shares) {
    if (opposite_best_shares < 1)
        throw ValidationError("toth_volume: opposite best must hold at least one share");
    VolumeDecision v;
    v.shares = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(fraction * static_cast<double>(opposite_best_shares)));
    v.shares = std::min(v.shares, opposite_best_shares);
    v.full_best = v.shares >= opposite_best_shares;
    return v;
}

VolumeDecision adaptive_volume(const AdaptivePolicy& policy, double fraction,
                               std::int64_t opposite_best_shares) {
    if (opposite_best_shares < 1)
        throw ValidationError("adaptive_volume: opposite best must hold at least one share");
    VolumeDecision v;
    if (fraction >= 1.0 - policy.delta) {
        v.shares = opposite_best_shares;
        v.full_best = true;
    } else {
        // Below the threshold the taker never consumes the whole level, so the
        // penetration probability stays exactly delta^g.  At a one-share best
        // the cap is zero: the taker stands aside rather than being forced to
        // sweep the quote.
        v.shares = std::max<std::int64_t>(
            1, static_cast<std::int64_t>(fraction * static_cast<double>(opposite_best_shares)));
        v.shares = std::min(v.shares, opposite_best_shares - 1);
        v.full_best = false;
    }
    return v;
}

}  // namespace alob::policy
