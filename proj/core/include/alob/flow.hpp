#pragma once

#include <cstdint>
#include <vector>

#include "alob/errors.hpp"
#include "alob/rng.hpp"

// Market-order sign processes.
//
// Two generators with long memory are provided. The DAR(p) chain either
// copies a uniformly aged past sign (with probability chi * phi_i for age i)
// or draws a fresh one; its autocorrelation obeys a Yule-Walker recursion,
// which makes it the natural parametric model for fitting and prediction.
// The metaorder flow interleaves fair noise trades with the child orders of
// a single active metaorder whose size is Pareto distributed, reproducing
// the slow power-law decay of empirical sign autocorrelations.

namespace alob::flow {

// ---------------------------------------------------------------- DAR(p)

struct DarParams {
    double chi = 0.0;                // copy probability, 0 <= chi < 1
    std::vector<double> phi;         // age distribution over lags 1..p
    double mean_innovation = 0.0;    // mean of the +/-1 innovation law

    int order() const noexcept { return static_cast<int>(phi.size()); }

    // InvalidMemory if chi is outside [0, 1); ValidationError if phi is not
    // a probability vector or the innovation mean is outside [-1, 1].
    void validate() const;
};

class DarGenerator {
public:
    // Seeds the lag window with IID innovations and discards 10 * p draws so
    // the chain starts near stationarity.
    DarGenerator(DarParams params, rng::Xoshiro256pp gen);

    int next();  // returns +1 or -1

    const DarParams& params() const noexcept { return params_; }

private:
    int draw_innovation_();

    DarParams params_;
    rng::Xoshiro256pp gen_;
    std::vector<std::int8_t> window_;  // ring buffer of the last p signs
    std::size_t head_ = 0;
    std::vector<double> copy_cdf_;  // CDF of chi * phi for the age draw
};

// Convenience: n signs from a fresh generator.
std::vector<std::int8_t> gen_dar(const DarParams& params, std::size_t n,
                                 rng::Xoshiro256pp gen);

// ------------------------------------------------------------- metaorders

struct LmfParams {
    double beta = 1.5;                    // metaorder size tail exponent
    double participation = 1.0;           // pi, probability a trade is a child order
    std::int64_t max_size = 10'000'000;   // truncation of the size law

    void validate() const;
};

// State of the active metaorder as seen just before a trade: its sign, how
// many child orders have already executed, and (for diagnostics) its total
// size. A taker working the metaorder knows `sign` and `executed`; whether
// the metaorder is finished (executed == size) is only revealed by the next
// child slot, which is when a finished one is replaced.
struct LmfState {
    std::int8_t sign = 0;
    std::int64_t executed = 0;  // m
    std::int64_t size = 0;      // L
};

class LmfGenerator {
public:
    LmfGenerator(LmfParams params, rng::Xoshiro256pp gen);

    struct Draw {
        std::int8_t sign;     // the realised trade sign epsilon_n
        LmfState before;      // metaorder state at the pre-trade instant
        double continuation;  // P_m for before.executed, see below
    };
    Draw next();

    // Probability that the next child-order slot still belongs to the
    // current metaorder after m executions, P_m = zeta(1+beta, 1+m) /
    // zeta(1+beta, m); P_0 = 1 since every metaorder has at least one child.
    // The table-free evaluation used here is tested against direct Hurwitz
    // zeta ratios.
    double continuation_probability() const noexcept { return cont_prob_; }

    const LmfParams& params() const noexcept { return params_; }

private:
    std::int64_t draw_size_();
    void refresh_metaorder_();
    void advance_continuation_();

    LmfParams params_;
    rng::Xoshiro256pp gen_;
    LmfState meta_;
    // Running zeta(1+beta, m) pair maintained by subtraction with periodic
    // exact refresh, giving O(1) continuation probabilities per trade.
    double zeta_at_m_ = 0.0;
    double cont_prob_ = 1.0;
    int drift_counter_ = 0;
    // Inverse-CDF table for the bulk of the size law; the tail walks term by
    // term (expected size of the walk is finite for beta > 1).
    std::vector<double> size_cdf_;
    double norm_ = 1.0;
};

// P_m evaluated directly from Hurwitz zeta; slow-path reference used by the
// generator's tests and by the private predictor helper.
double continuation_probability(double beta, std::int64_t executed);

// Private sign prediction available to the metaorder owner: sign * pi * P_m.
double private_prediction(const LmfParams& params, const LmfState& state);

// P(L = k) under the truncated discrete Pareto size law, for tests.
double metaorder_size_pmf(const LmfParams& params, std::int64_t k);

// ------------------------------------------------------------------ IID

// Fair-coin signs; the memoryless baseline.
std::vector<std::int8_t> gen_iid(std::size_t n, rng::Xoshiro256pp gen);

}  // namespace alob::flow
