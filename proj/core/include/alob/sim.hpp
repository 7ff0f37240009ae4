#pragma once

#include <cstdint>
#include <vector>

#include "alob/book.hpp"
#include "alob/errors.hpp"
#include "alob/flow.hpp"
#include "alob/policy.hpp"

// Discrete-event simulation coupling the book, the sign flow and the taking
// policy, plus a reduced-form efficient-price model for closed-form checks.
//
// Time advances in fixed steps of dt. Each step deposits fresh limit lots
// (one aggregate Poisson draw per side, placed uniformly over the legal
// ticks), runs a cancellation sweep, and with probability mu * dt executes
// one market order whose sign comes from the configured flow model and whose
// volume comes from the configured policy. The trade log records the
// pre-trade snapshot together with the realised sign, the forecasts, the
// sampled fraction, the executed volume and the return decomposition; the
// total return of record n is only known once the next trade's pre-trade
// snapshot exists, so it is finalised one trade late.

namespace alob::sim {

enum class FlowKind : std::uint8_t { Iid, Dar, Lmf };
enum class PolicyKind : std::uint8_t { Toth, Adaptive };

// Forecast fed to the policy as eps_hat. None trades uninformed (x = 0),
// which is the usual companion of the constant-exponent policy. Private is
// the metaorder-owner forecast sign * pi * P_m and requires the metaorder
// flow. Dar fits a DAR(predictor_p) model to the realised sign series and
// forecasts each trade from the p preceding signs. Oracle (reduced model
// only) uses the realised sign itself, the perfect-prediction bound.
enum class PredictorKind : std::uint8_t { None, Private, Dar, Oracle };

struct SimConfig {
    // Event rates, per second: market orders (mu), limit lots per tick
    // (lambda), per-lot cancellation (nu). dt is the step length in seconds;
    // mu * dt and nu * dt act as per-step probabilities and must stay small
    // enough for the thinning to be faithful.
    double mu = 0.1;
    double lambda = 0.5;
    double nu = 0.01;
    double dt = 1.0;

    std::int64_t tick = 1;         // price increment w
    std::int64_t lot_shares = 1;   // shares per limit lot (s)
    std::int64_t half_width = 500; // grid window half-width L, in ticks
    std::int64_t base_price = 1'000;

    std::int64_t n_trades = 100'000;  // recorded trades
    std::int64_t burn_in_steps = -1;  // < 0: ten cancellation lifetimes
    std::uint64_t seed = 1;

    FlowKind flow = FlowKind::Lmf;
    flow::DarParams dar;  // used when flow == Dar
    flow::LmfParams lmf;  // used when flow == Lmf

    PolicyKind policy = PolicyKind::Adaptive;
    policy::TothPolicy toth;
    policy::AdaptivePolicy adaptive;

    PredictorKind predictor = PredictorKind::Private;
    // Order of the fitted public forecast. Required when predictor == Dar;
    // with any other predictor a positive value still fits the model and
    // fills the public-forecast column, for conditioning analyses. The first
    // predictor_p trades are executed but not recorded, so every record
    // carries a fully-informed public forecast.
    int predictor_p = 0;

    void validate() const;  // ConfigInvalid on any violated constraint

    std::int64_t effective_burn_in() const;
    // Stationary depth s * lambda / nu, in shares per tick.
    double stationary_depth() const { return static_cast<double>(lot_shares) * lambda / nu; }
};

// One row of the trade log; field order matches the CSV schema.
struct TradeRecord {
    std::int64_t n = 0;      // record index
    double t = 0.0;          // event time of the trade's step, seconds
    int eps = 0;             // realised sign
    double eps_hat_pub = 0.0;
    double eps_hat_priv = 0.0;
    double x = 0.0;          // eps * (forecast used by the policy)
    double p_log = 0.0;      // pre-trade log-midprice
    std::int64_t v_ask = 0;  // pre-trade best volumes
    std::int64_t v_bid = 0;
    double gap_ask = 0.0;  // pre-trade log gaps behind the best quotes
    double gap_bid = 0.0;
    double f = 0.0;           // sampled fraction of the opposite best
    std::int64_t v_mo = 0;    // executed market-order volume
    std::int64_t v_opp_best = 0;
    bool penetrated = false;  // trade consumed the entire opposite best
    double r_mech = 0.0;      // log-mid move of the execution itself
    double r_quote = 0.0;     // r - r_mech: quote revision until the next trade
    double r = 0.0;           // pre-trade log-mid difference to the next trade
};

using TradeLog = std::vector<TradeRecord>;

struct RunStats {
    std::int64_t steps = 0;  // trading-phase steps (warm-up excluded)
    std::int64_t warmup_steps = 0;
    std::int64_t trades = 0;  // recorded
    std::int64_t recenters = 0;
    std::uint64_t exponent_clamps = 0;   // adaptive exponent hit its floor
    std::int64_t volume_cap_clamps = 0;  // order trimmed to executable depth
    double mean_depth = 0.0;             // shares per occupied tick at warm-up end
    double mean_one_tick_gap = 0.0;      // run mean of the recorded log gaps
};

struct SimResult {
    TradeLog log;
    RunStats stats;
};

// Runs the full simulation. Throws ConfigInvalid on a bad configuration and
// NonStationaryWarmup when the post-warm-up depth misses the stationary
// value by more than 20%.
SimResult run(const SimConfig& config);

// ------------------------------------------------------------------------
// Reduced-form model: the price responds only to the sign surprise,
//   p_(n+1) = p_n + A (eps_n - eps_hat_n) + eta_n,   eta ~ N(0, Sigma^2).
// Fast enough for 1e7-trade runs, and its per-step variance has a closed
// form against which the signature plot can be checked exactly.

struct ReducedConfig {
    double impact = 0.01;          // A, log units per unit sign surprise
    double noise_variance = 1e-4;  // Sigma^2 of the idiosyncratic component

    std::int64_t n_trades = 1'000'000;
    std::uint64_t seed = 1;

    FlowKind flow = FlowKind::Dar;
    flow::DarParams dar;
    flow::LmfParams lmf;

    // Dar uses the true flow parameters (the model-consistent conditional
    // expectation), with the first p trades discarded while history fills.
    PredictorKind predictor = PredictorKind::Dar;

    void validate() const;
};

// Lean result: the trade-by-trade log-price path plus the sign and forecast
// series, enough for signature plots, inefficiency scans and the diffusion
// closed form without the weight of full trade records.
struct ReducedResult {
    std::vector<double> log_price;  // n_trades + 1 points, pre-trade prices
    std::vector<std::int8_t> eps;
    std::vector<double> eps_hat;
};

ReducedResult run_reduced(const ReducedConfig& config);

}  // namespace alob::sim
