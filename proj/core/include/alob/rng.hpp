#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

// Self-contained random number generation.
//
// The simulator draws hundreds of random numbers per event step, so the
// generator and the discrete samplers live in the header and are written for
// speed. We use xoshiro256++ (Blackman & Vigna) seeded through splitmix64,
// which gives a small, fast engine whose output is identical on every
// platform — a requirement for byte-reproducible runs. std::mt19937_64 with
// the standard distribution adaptors would be both slower in the cancellation
// loop and implementation-defined in its sampling sequences.
//
// Independent processes (limit arrivals, cancellations, sign flow, volume
// fractions) each own a stream derived from (seed, stream name), so toggling
// one process never perturbs the draws seen by another.

namespace alob::rng {

inline constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// FNV-1a 64-bit; used to hash stream names and config text.
inline constexpr std::uint64_t fnv1a64(std::string_view text) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : text) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

class Xoshiro256pp {
public:
    explicit Xoshiro256pp(std::uint64_t seed) noexcept {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64(sm);
    }

    // Stream constructor: mixes a stream label into the seed so that streams
    // derived from the same run seed are statistically independent.
    Xoshiro256pp(std::uint64_t seed, std::string_view stream) noexcept
        : Xoshiro256pp(seed ^ fnv1a64(stream)) {}

    std::uint64_t next_u64() noexcept {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform double in [0, 1) with 53 random bits.
    double next_double() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, bound) via Lemire's multiply-shift rejection.
    std::uint64_t next_below(std::uint64_t bound) noexcept {
        using u128 = unsigned __int128;
        std::uint64_t x = next_u64();
        u128 m = static_cast<u128>(x) * static_cast<u128>(bound);
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = -bound % bound;
            while (low < threshold) {
                x = next_u64();
                m = static_cast<u128>(x) * static_cast<u128>(bound);
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    // Standard normal via Box-Muller; the second deviate of each pair is
    // cached, so consecutive calls cost one log/sqrt pair on average.
    double next_normal() noexcept {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        const double u2 = next_double();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 6.283185307179586476925286766559 * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4]{};
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Poisson sampler, exact for all means.
//   mean < 10 : multiplicative inversion (Knuth), expected O(mean) uniforms.
//   mean >= 10: PTRS transformed-rejection (Hormann 1993), O(1) expected.
std::int64_t poisson(Xoshiro256pp& gen, double mean) noexcept;

// Binomial sampler, exact for all (n, p) with 0 <= p <= 1.
//   n*p <= 25 : CDF inversion, expected O(n*p) iterations.
//   otherwise : plain Bernoulli counting, O(n); only reached in transients.
std::int64_t binomial(Xoshiro256pp& gen, std::int64_t n, double p) noexcept;

// Lookup table of survival powers (1-p)^k for k = 0..n_max, used by the
// cancellation pass to reject the "no cancellation at this level" case with a
// single uniform and one comparison.
class SurvivalTable {
public:
    SurvivalTable() = default;
    SurvivalTable(double p, std::size_t n_max);

    // P(Binomial(n, p) == 0); falls back to pow beyond the table.
    double zero_prob(std::int64_t n) const noexcept {
        if (n < static_cast<std::int64_t>(table_.size()))
            return table_[static_cast<std::size_t>(n)];
        return std::pow(one_minus_p_, static_cast<double>(n));
    }

private:
    std::vector<double> table_;
    double one_minus_p_ = 1.0;
};

}  // namespace alob::rng
