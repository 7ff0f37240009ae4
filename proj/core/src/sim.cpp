#include "alob/sim.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <string>

#include "alob/dar.hpp"

namespace alob::sim {

using book::OrderBook;
using book::Side;

void SimConfig::validate() const {
    if (!(mu > 0.0) || !(lambda > 0.0) || !(nu > 0.0))
        throw ConfigInvalid("sim: rates mu, lambda, nu must all be positive");
    if (!(dt > 0.0)) throw ConfigInvalid("sim: dt must be positive");
    if (mu * dt > 0.2)
        throw ConfigInvalid("sim: mu * dt must not exceed 0.2 (one trade per step at most)");
    if (nu * dt > 0.2) throw ConfigInvalid("sim: nu * dt must not exceed 0.2");
    if (tick < 1) throw ConfigInvalid("sim: tick must be >= 1");
    if (lot_shares < 1) throw ConfigInvalid("sim: lot_shares must be >= 1");
    if (half_width < 2) throw ConfigInvalid("sim: half_width must be >= 2");
    if (base_price % tick != 0) throw ConfigInvalid("sim: base_price must be a tick multiple");
    if (base_price / tick <= half_width)
        throw ConfigInvalid("sim: base_price must clear the grid window (raise it above half_width ticks)");
    if (n_trades < 1) throw ConfigInvalid("sim: n_trades must be >= 1");
    if (predictor_p < 0) throw ConfigInvalid("sim: predictor_p must be >= 0");

    try {
        if (flow == FlowKind::Dar) dar.validate();
        if (flow == FlowKind::Lmf) lmf.validate();
        if (policy == PolicyKind::Toth) toth.validate();
        if (policy == PolicyKind::Adaptive) adaptive.validate();
    } catch (const Error& e) {
        throw ConfigInvalid(std::string("sim: ") + e.what());
    }

    switch (predictor) {
        case PredictorKind::None:
            break;
        case PredictorKind::Private:
            if (flow != FlowKind::Lmf)
                throw ConfigInvalid("sim: the private predictor requires the metaorder flow");
            break;
        case PredictorKind::Dar:
            if (predictor_p < 1)
                throw ConfigInvalid("sim: predictor_p must be >= 1 for the fitted predictor");
            break;
        case PredictorKind::Oracle:
            throw ConfigInvalid("sim: the oracle predictor exists only in the reduced model");
    }
}

std::int64_t SimConfig::effective_burn_in() const {
    if (burn_in_steps >= 0) return burn_in_steps;
    return static_cast<std::int64_t>(std::ceil(10.0 / (nu * dt)));
}

namespace {

struct SignSeries {
    std::vector<std::int8_t> eps;
    std::vector<double> priv;  // metaorder-owner forecasts, zero otherwise
};

SignSeries generate_signs(const SimConfig& cfg, std::int64_t n, rng::Xoshiro256pp gen) {
    SignSeries s;
    const auto count = static_cast<std::size_t>(n);
    switch (cfg.flow) {
        case FlowKind::Iid:
            s.eps = flow::gen_iid(count, gen);
            s.priv.assign(count, 0.0);
            break;
        case FlowKind::Dar:
            s.eps = flow::gen_dar(cfg.dar, count, gen);
            s.priv.assign(count, 0.0);
            break;
        case FlowKind::Lmf: {
            flow::LmfGenerator g(cfg.lmf, gen);
            s.eps.resize(count);
            s.priv.resize(count);
            for (std::size_t i = 0; i < count; ++i) {
                const auto d = g.next();
                s.eps[i] = d.sign;
                s.priv[i] = static_cast<double>(d.before.sign) * cfg.lmf.participation *
                            d.continuation;
            }
            break;
        }
    }
    return s;
}

// Public forecasts from a model fitted to the whole realised series; the
// first p entries stay zero (no full lag window yet) and are discarded by
// the caller's predictor burn-in.
std::vector<double> public_forecasts(const std::vector<std::int8_t>& eps, int p,
                                     flow::DarParams& fitted_out) {
    const auto fit = dar::fit_signs(std::span<const std::int8_t>(eps), p);
    fitted_out = fit.params;
    std::vector<double> out(eps.size(), 0.0);
    const auto up = static_cast<std::size_t>(p);
    for (std::size_t n = up; n < eps.size(); ++n)
        out[n] = dar::predict(fit.params, std::span<const std::int8_t>(&eps[n - up], up));
    return out;
}

}  // namespace

SimResult run(const SimConfig& cfg) {
    cfg.validate();

    rng::Xoshiro256pp limits(cfg.seed, "limits");
    rng::Xoshiro256pp cancels(cfg.seed, "cancels");
    rng::Xoshiro256pp fraction(cfg.seed, "fraction");
    rng::Xoshiro256pp events(cfg.seed, "events");

    // The whole sign series is generated up front: the fitted public
    // predictor needs it, and it makes the flow stream's consumption
    // independent of how the steps fall.
    const std::int64_t p_burn = cfg.predictor_p;
    const std::int64_t n_total = p_burn + cfg.n_trades + 1;
    SignSeries signs = generate_signs(cfg, n_total, rng::Xoshiro256pp(cfg.seed, "flow"));

    std::vector<double> pub;
    flow::DarParams fitted;
    if (cfg.predictor_p > 0) pub = public_forecasts(signs.eps, cfg.predictor_p, fitted);

    const double mu_dt = cfg.mu * cfg.dt;
    const double nu_dt = cfg.nu * cfg.dt;
    const double rho_lots = cfg.lambda / cfg.nu;  // stationary lots per tick

    book::BookParams bp;
    bp.tick = cfg.tick;
    bp.lot_shares = cfg.lot_shares;
    bp.half_width = cfg.half_width;
    OrderBook ob = OrderBook::seeded(bp, cfg.base_price, rho_lots, limits);

    RunStats stats;

    auto arrival_phase = [&] {
        // One aggregate draw per side against the pre-step midprice; the
        // uniform placement over the legal range makes it equivalent to
        // independent Poisson(lambda dt) arrivals at every legal tick.
        for (auto side : {Side::Bid, Side::Ask}) {
            const auto range = ob.placement_range(side);
            if (range.ticks <= 0) continue;
            const std::int64_t count =
                rng::poisson(limits, cfg.lambda * cfg.dt * static_cast<double>(range.ticks));
            for (std::int64_t i = 0; i < count; ++i) {
                const std::int64_t t =
                    range.lo +
                    cfg.tick * static_cast<std::int64_t>(
                                   limits.next_below(static_cast<std::uint64_t>(range.ticks)));
                ob.deposit(side, t);
            }
        }
    };

    stats.warmup_steps = cfg.effective_burn_in();
    for (std::int64_t s = 0; s < stats.warmup_steps; ++s) {
        arrival_phase();
        ob.cancel_pass(nu_dt, cancels);
        if (ob.maybe_recenter(rho_lots, limits)) ++stats.recenters;
    }

    {
        const double occupied =
            static_cast<double>(ob.level_count(Side::Bid) + ob.level_count(Side::Ask));
        const double total = static_cast<double>(ob.total_shares(Side::Bid) +
                                                 ob.total_shares(Side::Ask));
        stats.mean_depth = occupied > 0.0 ? total / occupied : 0.0;
        const double rho = cfg.stationary_depth();
        if (std::abs(stats.mean_depth - rho) > 0.2 * rho)
            throw NonStationaryWarmup("sim: depth after warm-up is " +
                                      std::to_string(stats.mean_depth) +
                                      " shares per tick, stationary value " +
                                      std::to_string(rho));
    }

    SimResult res;
    res.log.reserve(static_cast<std::size_t>(cfg.n_trades));

    std::int64_t global_step = stats.warmup_steps;
    std::int64_t k = 0;        // trade counter over the pre-generated series
    bool pending = false;      // log.back() awaits its total return
    double gap_sum = 0.0;

    while (k < n_total) {
        ++global_step;
        ++stats.steps;
        arrival_phase();
        ob.cancel_pass(nu_dt, cancels);

        if (events.next_double() < mu_dt) {
            const book::BookSnapshot snap = ob.snapshot(book::GapMode::OneTick);
            if (pending) {
                TradeRecord& prev = res.log.back();
                prev.r = snap.log_mid - prev.p_log;
                prev.r_quote = prev.r - prev.r_mech;
                pending = false;
            }
            if (k == n_total - 1) {
                ++k;  // final snapshot only; the closing trade is never placed
                break;
            }

            const int sign = signs.eps[static_cast<std::size_t>(k)];
            const double hat_priv = signs.priv[static_cast<std::size_t>(k)];
            const double hat_pub = pub.empty() ? 0.0 : pub[static_cast<std::size_t>(k)];
            const double hat_sel = cfg.predictor == PredictorKind::Private ? hat_priv
                                   : cfg.predictor == PredictorKind::Dar  ? hat_pub
                                                                          : 0.0;
            const double x = std::clamp(sign * hat_sel, -1.0, 1.0);

            double f;
            policy::VolumeDecision vd;
            const std::int64_t v_opp = sign > 0 ? snap.ask_shares : snap.bid_shares;
            if (cfg.policy == PolicyKind::Toth) {
                f = policy::sample_fraction(cfg.toth.zeta, fraction);
                vd = policy::toth_volume(f, v_opp);
            } else {
                const double g =
                    policy::adaptive_exponent(cfg.adaptive, x, &stats.exponent_clamps);
                f = policy::sample_fraction(g, fraction);
                vd = policy::adaptive_volume(cfg.adaptive, f, v_opp);
            }

            std::int64_t volume = vd.shares;
            book::ExecutionReport rep;
            if (volume > 0) {
                const std::int64_t cap = ob.max_market_volume(sign);
                if (volume > cap) {
                    if (cap < 1)
                        throw InsufficientLiquidity(
                            "sim: opposite side too thin for any execution at trade " +
                            std::to_string(k));
                    volume = cap;
                    ++stats.volume_cap_clamps;
                }
                rep = ob.execute_market(sign, volume);
            } else {
                // Zero-volume decision at a one-share best: the event still
                // carries its sign through the flow, but nothing executes.
                rep.log_mid_before = snap.log_mid;
                rep.log_mid_after = snap.log_mid;
            }

            if (k >= p_burn) {
                TradeRecord rec;
                rec.n = k - p_burn;
                rec.t = static_cast<double>(global_step) * cfg.dt;
                rec.eps = sign;
                rec.eps_hat_pub = hat_pub;
                rec.eps_hat_priv = hat_priv;
                rec.x = x;
                rec.p_log = snap.log_mid;
                rec.v_ask = snap.ask_shares;
                rec.v_bid = snap.bid_shares;
                rec.gap_ask = snap.gap_ask;
                rec.gap_bid = snap.gap_bid;
                rec.f = f;
                rec.v_mo = rep.executed;
                rec.v_opp_best = v_opp;
                rec.penetrated = rep.penetrated;
                rec.r_mech = rep.mechanical_return;
                res.log.push_back(rec);
                pending = true;
                gap_sum += 0.5 * (snap.gap_ask + snap.gap_bid);
            }
            ++k;
        }

        if (ob.maybe_recenter(rho_lots, limits)) ++stats.recenters;
    }

    stats.trades = static_cast<std::int64_t>(res.log.size());
    stats.mean_one_tick_gap = stats.trades > 0 ? gap_sum / static_cast<double>(stats.trades) : 0.0;
    res.stats = stats;
    return res;
}

// ------------------------------------------------------------------------

void ReducedConfig::validate() const {
    if (!(impact >= 0.0)) throw ConfigInvalid("reduced: impact scale A must be >= 0");
    if (!(noise_variance >= 0.0)) throw ConfigInvalid("reduced: noise variance must be >= 0");
    if (n_trades < 1) throw ConfigInvalid("reduced: n_trades must be >= 1");
    try {
        if (flow == FlowKind::Dar) dar.validate();
        if (flow == FlowKind::Lmf) lmf.validate();
    } catch (const Error& e) {
        throw ConfigInvalid(std::string("reduced: ") + e.what());
    }
    if (predictor == PredictorKind::Dar && flow != FlowKind::Dar)
        throw ConfigInvalid("reduced: the model-consistent predictor requires the DAR flow");
    if (predictor == PredictorKind::Private && flow != FlowKind::Lmf)
        throw ConfigInvalid("reduced: the private predictor requires the metaorder flow");
}

ReducedResult run_reduced(const ReducedConfig& cfg) {
    cfg.validate();

    const std::int64_t p_burn = cfg.predictor == PredictorKind::Dar ? cfg.dar.order() : 0;
    const std::int64_t n_total = p_burn + cfg.n_trades;

    SimConfig flow_cfg;  // only the flow fields are read by generate_signs
    flow_cfg.flow = cfg.flow;
    flow_cfg.dar = cfg.dar;
    flow_cfg.lmf = cfg.lmf;
    SignSeries signs = generate_signs(flow_cfg, n_total, rng::Xoshiro256pp(cfg.seed, "flow"));

    rng::Xoshiro256pp noise(cfg.seed, "noise");
    const double sigma = std::sqrt(cfg.noise_variance);
    const auto n = static_cast<std::size_t>(cfg.n_trades);
    const auto burn = static_cast<std::size_t>(p_burn);

    ReducedResult out;
    out.log_price.resize(n + 1);
    out.eps.resize(n);
    out.eps_hat.resize(n);

    double p = 0.0;
    out.log_price[0] = p;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t k = burn + i;
        const double eps = signs.eps[k];
        double hat = 0.0;
        switch (cfg.predictor) {
            case PredictorKind::None:
                break;
            case PredictorKind::Oracle:
                hat = eps;
                break;
            case PredictorKind::Private:
                hat = signs.priv[k];
                break;
            case PredictorKind::Dar:
                hat = dar::predict(cfg.dar,
                                   std::span<const std::int8_t>(&signs.eps[k - burn], burn));
                break;
        }
        const double r = cfg.impact * (eps - hat) + sigma * noise.next_normal();
        p += r;
        out.log_price[i + 1] = p;
        out.eps[i] = signs.eps[k];
        out.eps_hat[i] = hat;
    }
    return out;
}

}  // namespace alob::sim
