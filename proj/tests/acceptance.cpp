// Acceptance suite: ten go/no-go criteria for the simulator and its
// statistics library, run at full scale. Each criterion prints exactly one
// line, "[PASS]" or "[FAIL]" with the measured quantities inline, and the
// process exit code is the number of failed criteria. All tolerances are
// pinned below; seeds are fixed so the suite is reproducible bit for bit.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "alob/analytics.hpp"
#include "alob/dar.hpp"
#include "alob/flow.hpp"
#include "alob/io.hpp"
#include "alob/policy.hpp"
#include "alob/rng.hpp"
#include "alob/sim.hpp"
#include "alob/zeta.hpp"

using namespace alob;

namespace {

// ---- pinned tolerances, sizes and seeds ---------------------------------

// 1: reduced-model diffusivity against the closed form.
constexpr std::int64_t kC1Trades = 10'000'000;
constexpr double kC1RelTol = 0.01;  // per-lag |sigma/D - 1|
constexpr std::uint64_t kC1Seed = 101;

// 2: flat signature plots of the adaptive full model.
constexpr std::int64_t kBookTrades = 1'000'000;
constexpr std::int64_t kSigMaxLag = 1000;
constexpr double kC2MaxDev = 0.10;      // max relative deviation from the mean level
constexpr double kC2SlopeBound = 0.02;  // |log-log slope| allowed beyond 2 SE
constexpr std::uint64_t kC2SeedR1 = 201, kC2SeedR2 = 202, kC2SeedR3 = 203;

// 3: volatility comparisons across the criterion-2 runs.
constexpr double kC3DeltaTol = 0.05;  // sigma equality across delta, relative
constexpr double kC3PiMargin = 0.02;  // sigma must drop by at least this at higher pi

// 4: constant-exponent baseline turns super-diffusive at large lags.
constexpr std::int64_t kC4ProbeTrades = 100'000;
constexpr int kC4BisectIters = 9;
constexpr double kC4SlopeFloor = 0.05;  // slope - 2 SE must exceed this on lags 30..300
constexpr std::uint64_t kC4ProbeSeed = 401, kC4Seed = 402;

// 5: fitted-predictor runs stay diffusive below the predictor order.
constexpr double kC5UpFloor = 0.01;  // slope - 2 SE beyond the order must exceed this
constexpr std::uint64_t kC5SeedP50 = 501, kC5SeedP200 = 502;

// 6: linear penetration and impact laws on the criterion-2 log.
constexpr int kC6Bins = 20;

// 7: conditional-volume signs, and their inversion in the slow-book regime.
constexpr int kC7Bins = 10;
constexpr double kC7SlowNu = 1e-4;
constexpr std::int64_t kC7ProbeTrades = 50'000;
constexpr int kC7BisectIters = 7;
constexpr std::int64_t kC7FlipTrades = 1'000'000;
constexpr std::uint64_t kC7ProbeSeed = 701, kC7Seed = 702;

// 8: metaorder-flow autocorrelation scaling.
constexpr std::size_t kC8Signs = 10'000'000;
constexpr double kC8SlopeTol = 0.10;  // around the predicted -1/2
constexpr double kC8DampTol = 0.20;   // participation damping, relative
constexpr std::uint64_t kC8SeedFull = 801, kC8SeedPartial = 802;

// 9: oracle identities.
constexpr double kC9EnumTol = 1e-12;
constexpr double kC9TowerTol = 1e-10;
constexpr double kC9ContTol = 1e-4;
constexpr double kC9RatioTol = 0.01;
constexpr double kC9IdentityTol = 1e-12;
constexpr std::size_t kC9KsSamples = 100'000;
constexpr double kC9KsCritical = 1.628;  // 1% level, times 1/sqrt(n)
constexpr std::uint64_t kC9Seed = 901;

// 10: determinism and round trips.
constexpr std::int64_t kC10Trades = 20'000;
constexpr std::uint64_t kC10Seed = 1001;

// -------------------------------------------------------------- utilities

std::string fmt(double v, int prec = 3) {
    std::ostringstream ss;
    ss << std::setprecision(prec) << v;
    return ss.str();
}

class Reporter {
  public:
    void line(int id, bool pass, const std::string& detail) {
        std::cout << (pass ? "[PASS] " : "[FAIL] ") << id << ": " << detail << "\n"
                  << std::flush;
        if (!pass) ++failures_;
    }
    int failures() const { return failures_; }

  private:
    int failures_ = 0;
};

using Verdict = std::pair<bool, std::string>;

template <typename Fn>
void run_criterion(Reporter& rep, int id, Fn&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = false;
    std::string detail;
    try {
        Verdict v = fn();
        pass = v.first;
        detail = std::move(v.second);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rep.line(id, pass, detail + " [" + fmt(secs, 3) + "s]");
}

// The operating point shared by the full-model criteria: sparse flow on a
// wide one-tick grid, metaorder order flow, adaptive liquidity taking
// informed by the metaorder owner's own forecast.
sim::SimConfig book_config(double pi, double delta, std::uint64_t seed) {
    sim::SimConfig c;
    c.mu = 0.1;
    c.lambda = 0.5;
    c.nu = 0.01;
    c.dt = 1.0;
    c.tick = 1;
    c.lot_shares = 1;
    c.half_width = 500;
    c.base_price = 10'000;
    c.n_trades = kBookTrades;
    c.seed = seed;
    c.flow = sim::FlowKind::Lmf;
    c.lmf.beta = 1.5;
    c.lmf.participation = pi;
    c.policy = sim::PolicyKind::Adaptive;
    c.adaptive.alpha = 0.5;
    c.adaptive.delta = delta;
    c.predictor = sim::PredictorKind::Private;
    return c;
}

struct FlatnessCheck {
    double max_dev = 0.0;  // max |sigma/mean - 1| over the lags
    double slope = 0.0;
    double slope_se = 0.0;
    bool flat(double max_dev_tol, double slope_bound) const {
        return max_dev < max_dev_tol && std::abs(slope) - 2.0 * slope_se < slope_bound;
    }
};

FlatnessCheck flatness(const analytics::SignaturePlot& plot) {
    FlatnessCheck out;
    double mean = 0.0;
    for (double s : plot.sigma) mean += s;
    mean /= static_cast<double>(plot.sigma.size());
    for (double s : plot.sigma) out.max_dev = std::max(out.max_dev, std::abs(s / mean - 1.0));
    const analytics::LineFit fit = analytics::loglog_slope(plot.lags, plot.sigma, plot.se);
    out.slope = fit.slope;
    out.slope_se = fit.slope_se;
    return out;
}

std::vector<std::int64_t> lag_band(std::int64_t lo, std::int64_t hi) {
    std::vector<std::int64_t> lags;
    for (double v = static_cast<double>(lo); v <= static_cast<double>(hi) + 0.5; v *= 1.25) {
        const auto l = static_cast<std::int64_t>(std::llround(v));
        if (lags.empty() || l != lags.back()) lags.push_back(l);
    }
    if (lags.back() != hi) lags.push_back(hi);
    return lags;
}

double mean_of(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// Results of the first criterion-2 run reused by criteria 3, 6 and 7.
struct SharedResults {
    std::vector<std::int64_t> lags;
    double sigma_bar_r1 = 0.0, sigma_bar_r2 = 0.0, sigma_bar_r3 = 0.0;
    bool have_runs = false;

    double w_log = 0.0;  // mean one-tick log gap of run 1
    analytics::ConditionalCurve penetration;  // P(pen | x), binned on x
    analytics::ConditionalCurve response;     // E[eps r | x]
    analytics::ConditionalCurve vol_bid;      // E[v_bid | eps_hat]
    analytics::ConditionalCurve vol_ask;      // E[v_ask | eps_hat]
    bool have_curves = false;
};

// Conditional best-quote volumes binned on the forecast.
std::pair<analytics::ConditionalCurve, analytics::ConditionalCurve> volume_curves(
    const sim::TradeLog& log, int bins) {
    std::vector<double> hat(log.size()), vb(log.size()), va(log.size());
    for (std::size_t i = 0; i < log.size(); ++i) {
        hat[i] = log[i].eps_hat_priv;
        vb[i] = static_cast<double>(log[i].v_bid);
        va[i] = static_cast<double>(log[i].v_ask);
    }
    return {analytics::conditional_curve(vb, hat, bins),
            analytics::conditional_curve(va, hat, bins)};
}

// Every bin lying fully on one side of zero must show the expected sign of
// E[v_bid - v_ask | forecast] at two standard errors; bins straddling zero
// carry no sign prediction and are skipped. `direction` = +1 expects
// bid-heavier books under buy forecasts, -1 the inverted pattern.
struct SignPattern {
    int tested = 0;
    int failed = 0;
};

SignPattern volume_sign_pattern(const analytics::ConditionalCurve& vb,
                                const analytics::ConditionalCurve& va, int direction) {
    SignPattern out;
    for (std::size_t b = 0; b < vb.mean.size(); ++b) {
        if (vb.bin_lo[b] < 0.0 && vb.bin_hi[b] > 0.0) continue;
        const double want = vb.center[b] > 0.0 ? direction : -direction;
        const double diff = vb.mean[b] - va.mean[b];
        const double se = std::hypot(vb.se[b], va.se[b]);
        ++out.tested;
        if (want * diff - 2.0 * se <= 0.0) ++out.failed;
    }
    return out;
}

// Log-log slope of sigma(l) over lags 1..10, used to tune the constant
// exponent to its critical value: small exponents transmit the persistent
// flow into the price (rising sigma), large ones pin the price (falling
// sigma).
double short_lag_slope(const sim::SimConfig& cfg) {
    const sim::SimResult res = sim::run(cfg);
    std::vector<std::int64_t> lags(10);
    for (int i = 0; i < 10; ++i) lags[static_cast<std::size_t>(i)] = i + 1;
    const auto plot = analytics::signature_plot(res.log, lags);
    int moving = 0;
    for (double s : plot.sigma)
        if (s > 0.0) ++moving;
    // A frozen price is the extreme pinned limit; report a slope below any
    // attainable value (sigma slopes are bounded by -1/2) so the search
    // treats the exponent as far too large.
    if (moving < 2) return -1.0;
    return analytics::loglog_slope(plot.lags, plot.sigma, plot.se).slope;
}

double tune_zeta(sim::SimConfig probe, std::int64_t probe_trades, std::uint64_t probe_seed,
                 int iters) {
    probe.policy = sim::PolicyKind::Toth;
    probe.n_trades = probe_trades;
    probe.seed = probe_seed;  // common draws across probes keep the slope monotone

    double lo = 0.3, hi = 4.0;
    auto slope_at = [&](double zeta) {
        probe.toth.zeta = zeta;
        return short_lag_slope(probe);
    };
    double slo = slope_at(lo);
    double shi = slope_at(hi);
    for (int widen = 0; widen < 2 && (slo < 0.0) == (shi < 0.0); ++widen) {
        lo /= 3.0;
        hi *= 3.0;
        slo = slope_at(lo);
        shi = slope_at(hi);
    }
    const bool increasing = shi > slo;
    for (int i = 0; i < iters; ++i) {
        const double mid = std::sqrt(lo * hi);
        const double s = slope_at(mid);
        if ((s < 0.0) == increasing)
            lo = mid;
        else
            hi = mid;
    }
    return std::sqrt(lo * hi);
}

// ------------------------------------------------------------ criterion 1

Verdict criterion1() {
    sim::ReducedConfig cfg;
    cfg.impact = 0.01;
    cfg.noise_variance = 1e-4;
    cfg.n_trades = kC1Trades;
    cfg.seed = kC1Seed;
    cfg.flow = sim::FlowKind::Dar;
    cfg.predictor = sim::PredictorKind::Dar;

    // Ten-lag sign memory, smoothed the same way fitted parameters are.
    std::vector<double> chi_phi(10);
    double h = 0.0;
    for (int i = 1; i <= 10; ++i) h += 1.0 / i;
    for (int i = 1; i <= 10; ++i)
        chi_phi[static_cast<std::size_t>(i - 1)] = 0.5 / (h * static_cast<double>(i));
    cfg.dar = dar::smooth_and_project(chi_phi);

    const sim::ReducedResult res = sim::run_reduced(cfg);
    const auto acf = dar::sample_autocorrelation(res.eps, cfg.dar.order());
    const double level =
        std::sqrt(analytics::diffusion_closed_form(cfg.dar, cfg.impact, cfg.noise_variance, acf));

    const std::vector<std::int64_t> lags = {1, 10, 100, 1000};
    const auto plot = analytics::signature_plot(res.log_price, lags);
    double worst = 0.0;
    for (double s : plot.sigma) worst = std::max(worst, std::abs(s / level - 1.0));

    return {worst < kC1RelTol,
            "reduced model is exactly diffusive: max |sigma(l)/D - 1| = " + fmt(worst) +
                " over lags 1/10/100/1000 (tol " + fmt(kC1RelTol) + ", D = " + fmt(level, 6) +
                ", " + std::to_string(kC1Trades) + " trades)"};
}

// ------------------------------------------------------- criteria 2 and 3

Verdict criterion2(SharedResults& shared) {
    shared.lags = analytics::log_spaced_lags(kSigMaxLag);

    struct RunSummary {
        FlatnessCheck flat;
        double sigma_bar = 0.0;
    };
    auto summarize = [&](const sim::SimResult& res) {
        const auto plot = analytics::signature_plot(res.log, shared.lags);
        return RunSummary{flatness(plot), mean_of(plot.sigma)};
    };

    // Run 1 also feeds the penetration/impact and conditional-volume
    // criteria, so its full log is mined before being freed.
    RunSummary r1;
    {
        const sim::SimResult res = sim::run(book_config(0.6, 0.05, kC2SeedR1));
        r1 = summarize(res);
        shared.w_log = res.stats.mean_one_tick_gap;

        const auto pen = analytics::penetration_stats(res.log, kC6Bins);
        shared.penetration = pen.penetration;
        std::vector<double> x(res.log.size()), er(res.log.size());
        for (std::size_t i = 0; i < res.log.size(); ++i) {
            x[i] = res.log[i].x;
            er[i] = static_cast<double>(res.log[i].eps) * res.log[i].r;
        }
        shared.response = analytics::conditional_curve(er, x, kC6Bins);
        std::tie(shared.vol_bid, shared.vol_ask) = volume_curves(res.log, kC7Bins);
        shared.have_curves = true;
    }
    const RunSummary r2 = summarize(sim::run(book_config(0.6, 0.2, kC2SeedR2)));
    const RunSummary r3 = summarize(sim::run(book_config(0.9, 0.05, kC2SeedR3)));

    shared.sigma_bar_r1 = r1.sigma_bar;
    shared.sigma_bar_r2 = r2.sigma_bar;
    shared.sigma_bar_r3 = r3.sigma_bar;
    shared.have_runs = true;

    const bool pass = r1.flat.flat(kC2MaxDev, kC2SlopeBound) &&
                      r2.flat.flat(kC2MaxDev, kC2SlopeBound) &&
                      r3.flat.flat(kC2MaxDev, kC2SlopeBound);
    const double worst_dev = std::max({r1.flat.max_dev, r2.flat.max_dev, r3.flat.max_dev});
    const double worst_slope =
        std::max({std::abs(r1.flat.slope), std::abs(r2.flat.slope), std::abs(r3.flat.slope)});
    return {pass, "adaptive-policy signature plots are flat over lags 1.." +
                      std::to_string(kSigMaxLag) + ": max deviation " + fmt(worst_dev) +
                      " (tol " + fmt(kC2MaxDev) + "), worst |slope| " + fmt(worst_slope) +
                      " (bound " + fmt(kC2SlopeBound) + " + 2 SE; pi/delta = 0.6/0.05, 0.6/0.2, "
                      "0.9/0.05)"};
}

Verdict criterion3(const SharedResults& shared) {
    if (!shared.have_runs) return {false, "criterion-2 runs unavailable"};
    const double delta_dev = std::abs(shared.sigma_bar_r2 / shared.sigma_bar_r1 - 1.0);
    const double pi_drop = 1.0 - shared.sigma_bar_r3 / shared.sigma_bar_r1;
    const bool pass = delta_dev < kC3DeltaTol && pi_drop > kC3PiMargin;
    return {pass, "volatility ignores the sweep threshold but falls with participation: "
                  "|sigma(delta=0.2)/sigma(delta=0.05) - 1| = " +
                      fmt(delta_dev) + " (tol " + fmt(kC3DeltaTol) +
                      "), drop at pi 0.9 vs 0.6 = " + fmt(pi_drop) + " (min " +
                      fmt(kC3PiMargin) + ")"};
}

// ------------------------------------------------------------ criterion 4

Verdict criterion4() {
    sim::SimConfig base = book_config(0.6, 0.05, kC4Seed);
    const double zeta = tune_zeta(base, kC4ProbeTrades, kC4ProbeSeed, kC4BisectIters);

    base.policy = sim::PolicyKind::Toth;
    base.toth.zeta = zeta;
    const sim::SimResult res = sim::run(base);
    const auto lags = lag_band(30, 300);
    const auto plot = analytics::signature_plot(res.log, lags);
    const analytics::LineFit fit = analytics::loglog_slope(plot.lags, plot.sigma, plot.se);

    const bool pass = fit.slope - 2.0 * fit.slope_se > kC4SlopeFloor;
    return {pass, "constant-exponent taker goes super-diffusive: slope " + fmt(fit.slope) +
                      " +/- " + fmt(fit.slope_se) + " over lags 30..300 (needs > " +
                      fmt(kC4SlopeFloor) + " at 2 SE; tuned exponent " + fmt(zeta) + ")"};
}

// ------------------------------------------------------------ criterion 5

Verdict criterion5() {
    struct Case {
        int p;
        std::uint64_t seed;
    };
    std::string detail;
    bool pass = true;
    for (const Case c : {Case{50, kC5SeedP50}, Case{200, kC5SeedP200}}) {
        sim::SimConfig cfg = book_config(0.6, 0.05, c.seed);
        cfg.predictor = sim::PredictorKind::Dar;
        cfg.predictor_p = c.p;
        const sim::SimResult res = sim::run(cfg);

        const auto below = analytics::signature_plot(
            res.log, lag_band(1, static_cast<std::int64_t>(0.8 * c.p)));
        const FlatnessCheck flat = flatness(below);

        const auto above = analytics::signature_plot(
            res.log, lag_band(2 * c.p, 20 * c.p));
        const analytics::LineFit up = analytics::loglog_slope(above.lags, above.sigma, above.se);

        const bool ok = flat.flat(kC2MaxDev, kC2SlopeBound) &&
                        up.slope - 2.0 * up.slope_se > kC5UpFloor;
        pass = pass && ok;
        if (!detail.empty()) detail += "; ";
        detail += "p=" + std::to_string(c.p) + ": below-dev " + fmt(flat.max_dev) +
                  ", above-slope " + fmt(up.slope) + " +/- " + fmt(up.slope_se);
    }
    return {pass, "fitted-predictor runs are diffusive below the order and rise past it (" +
                      detail + "; dev tol " + fmt(kC2MaxDev) + ", rise > " + fmt(kC5UpFloor) +
                      " at 2 SE)"};
}

// ------------------------------------------------------------ criterion 6

Verdict criterion6(const SharedResults& shared) {
    if (!shared.have_curves) return {false, "criterion-2 run unavailable"};
    const double alpha = 0.5;  // of the criterion-2 configuration

    const analytics::LineFit fit = analytics::weighted_line_fit(
        shared.penetration.center, shared.penetration.mean, shared.penetration.se);
    const bool line_ok = std::abs(fit.slope + alpha) < 2.0 * fit.slope_se &&
                         std::abs(fit.intercept - alpha) < 2.0 * fit.intercept_se;

    // Expected conditional impact: half the one-tick log gap per unit
    // penetration probability.
    const double scale = 0.5 * shared.w_log * alpha;
    int bad_bins = 0;
    for (std::size_t b = 0; b < shared.response.mean.size(); ++b) {
        const double target = scale * (1.0 - shared.response.center[b]);
        if (std::abs(shared.response.mean[b] - target) > 2.0 * shared.response.se[b]) ++bad_bins;
    }

    const bool pass = line_ok && bad_bins == 0;
    return {pass, "penetration is linear in the surprise and impact follows the gap law: "
                  "P(pen|x) slope " +
                      fmt(fit.slope) + " +/- " + fmt(fit.slope_se) + " (want -0.5), intercept " +
                      fmt(fit.intercept) + " +/- " + fmt(fit.intercept_se) + " (want 0.5), " +
                      std::to_string(bad_bins) + "/" +
                      std::to_string(shared.response.mean.size()) +
                      " impact bins off the 2-SE band"};
}

// ------------------------------------------------------------ criterion 7

Verdict criterion7(const SharedResults& shared) {
    if (!shared.have_curves) return {false, "criterion-2 run unavailable"};

    const SignPattern fast = volume_sign_pattern(shared.vol_bid, shared.vol_ask, +1);

    // Slow-cancellation regime: liquidity lingers, so the book shows the
    // opposite volume pattern around a predictable flow. The constant
    // exponent is re-tuned for this depth before measuring.
    sim::SimConfig cfg = book_config(0.6, 0.05, kC7Seed);
    cfg.nu = kC7SlowNu;
    const double zeta = tune_zeta(cfg, kC7ProbeTrades, kC7ProbeSeed, kC7BisectIters);
    cfg.policy = sim::PolicyKind::Toth;
    cfg.toth.zeta = zeta;
    cfg.n_trades = kC7FlipTrades;
    const sim::SimResult res = sim::run(cfg);
    const auto [vb, va] = volume_curves(res.log, kC7Bins);
    const SignPattern slow = volume_sign_pattern(vb, va, -1);

    const bool pass = fast.tested > 0 && fast.failed == 0 && slow.tested > 0 && slow.failed == 0;
    return {pass, "book volume leans with the forecast and flips in the slow-book regime: "
                  "adaptive run " +
                      std::to_string(fast.failed) + "/" + std::to_string(fast.tested) +
                      " bins off, slow-book run " + std::to_string(slow.failed) + "/" +
                      std::to_string(slow.tested) + " bins off (2 SE each; slow-book exponent " +
                      fmt(zeta) + ")"};
}

// ------------------------------------------------------------ criterion 8

Verdict criterion8() {
    auto signs_at = [&](double pi, std::uint64_t seed) {
        flow::LmfParams params;
        params.beta = 1.5;
        params.participation = pi;
        flow::LmfGenerator gen(params, rng::Xoshiro256pp(seed, "acceptance-lmf"));
        std::vector<std::int8_t> signs(kC8Signs);
        for (auto& s : signs) s = gen.next().sign;
        return signs;
    };

    const auto full = signs_at(1.0, kC8SeedFull);
    const auto acf_full = dar::sample_autocorrelation(full, 1000);
    const auto lags = lag_band(10, 1000);
    std::vector<double> rho(lags.size()), se(lags.size(), 1.0 / std::sqrt(double(kC8Signs)));
    for (std::size_t i = 0; i < lags.size(); ++i)
        rho[i] = acf_full[static_cast<std::size_t>(lags[i])];
    const analytics::LineFit fit = analytics::loglog_slope(lags, rho, se);
    const bool slope_ok = std::abs(fit.slope + 0.5) < kC8SlopeTol;

    const auto partial = signs_at(0.6, kC8SeedPartial);
    const auto acf_part = dar::sample_autocorrelation(partial, 250);
    double ratio_sum = 0.0;
    int ratio_n = 0;
    for (std::int64_t l = 20; l <= 200; l = std::max(l + 1, static_cast<std::int64_t>(
                                                               std::llround(l * 1.25)))) {
        ratio_sum += acf_part[static_cast<std::size_t>(l)] /
                     acf_full[static_cast<std::size_t>(l)];
        ++ratio_n;
    }
    const double ratio = ratio_sum / ratio_n;
    const double predicted = std::pow(0.6, 1.5);
    const bool damp_ok = std::abs(ratio / predicted - 1.0) < kC8DampTol;

    return {slope_ok && damp_ok,
            "metaorder flow has the predicted long memory: ACF slope " + fmt(fit.slope) +
                " (want -0.5 +/- " + fmt(kC8SlopeTol) + "), participation damping " + fmt(ratio) +
                " vs " + fmt(predicted) + " (tol " + fmt(kC8DampTol) + " rel)"};
}

// ------------------------------------------------------------ criterion 9

// Direct Hurwitz zeta by partial sum plus averaged integral-tail bounds;
// an independent check on the library's evaluator.
double zeta_partial_sum(double s, double a, std::int64_t terms) {
    double sum = 0.0;
    for (std::int64_t k = terms - 1; k >= 0; --k)
        sum += std::pow(a + static_cast<double>(k), -s);
    const double edge = a + static_cast<double>(terms);
    const double tail_hi = std::pow(edge - 1.0, 1.0 - s) / (s - 1.0);
    const double tail_lo = std::pow(edge, 1.0 - s) / (s - 1.0);
    return sum + 0.5 * (tail_hi + tail_lo);
}

Verdict criterion9() {
    int checks = 0, failed = 0;
    std::string first_failure;
    auto expect = [&](bool ok, const std::string& what) {
        ++checks;
        if (!ok) {
            ++failed;
            if (first_failure.empty()) first_failure = what;
        }
    };

    // One-step predictions against exhaustive enumeration for short memory.
    {
        struct Case {
            flow::DarParams params;
        };
        std::vector<flow::DarParams> cases(2);
        cases[0].chi = 0.6;
        cases[0].phi = {1.0};
        cases[0].mean_innovation = 0.1;
        cases[1].chi = 0.5;
        cases[1].phi = {0.6, 0.4};
        cases[1].mean_innovation = -0.2;
        for (const auto& params : cases) {
            const int p = params.order();
            for (int mask = 0; mask < (1 << p); ++mask) {
                std::vector<std::int8_t> hist(static_cast<std::size_t>(p));
                for (int j = 0; j < p; ++j)
                    hist[static_cast<std::size_t>(j)] =
                        (mask >> j) & 1 ? std::int8_t{1} : std::int8_t{-1};
                // Enumerate the one-step law: copy lag i with weight
                // chi phi_i, otherwise innovate with the given mean.
                double enumerated = 0.0;
                for (int i = 1; i <= p; ++i)
                    enumerated += params.chi * params.phi[static_cast<std::size_t>(i - 1)] *
                                  static_cast<double>(hist[static_cast<std::size_t>(p - i)]);
                enumerated += (1.0 - params.chi) * params.mean_innovation;
                const double predicted = dar::predict(params, hist);
                expect(std::abs(predicted - enumerated) < kC9EnumTol, "one-step enumeration");
            }
        }
    }

    // Multi-step predictions against a brute-force chain expectation.
    {
        flow::DarParams params;
        params.chi = 0.7;
        params.phi = {0.2, 0.5, 0.3};
        params.mean_innovation = 0.1;
        const int p = params.order();
        const double q_up = 0.5 * (1.0 + params.mean_innovation);

        for (int mask = 0; mask < (1 << p); ++mask) {
            std::vector<std::int8_t> hist(static_cast<std::size_t>(p));
            for (int j = 0; j < p; ++j)
                hist[static_cast<std::size_t>(j)] =
                    (mask >> j) & 1 ? std::int8_t{1} : std::int8_t{-1};
            // Probability vector over the 2^p sign windows, advanced step by
            // step through the exact transition law.
            std::vector<double> prob(1u << p, 0.0);
            prob[static_cast<std::size_t>(mask)] = 1.0;
            for (int s = 0; s <= 10; ++s) {
                double expectation = 0.0;
                for (std::size_t w = 0; w < prob.size(); ++w) {
                    if (prob[w] == 0.0) continue;
                    double up = (1.0 - params.chi) * q_up;
                    for (int i = 1; i <= p; ++i)
                        if ((w >> (p - i)) & 1)
                            up += params.chi * params.phi[static_cast<std::size_t>(i - 1)];
                    expectation += prob[w] * (2.0 * up - 1.0);
                }
                const double predicted = dar::predict_lagged(params, hist, s);
                expect(std::abs(predicted - expectation) < kC9TowerTol,
                       "multi-step enumeration at s=" + std::to_string(s));
                // Advance the window distribution one trade.  Bit p - i holds
                // lag i, so ageing by one trade shifts every bit down and the
                // fresh sign enters at the top.
                std::vector<double> next(prob.size(), 0.0);
                for (std::size_t w = 0; w < prob.size(); ++w) {
                    if (prob[w] == 0.0) continue;
                    double up = (1.0 - params.chi) * q_up;
                    for (int i = 1; i <= p; ++i)
                        if ((w >> (p - i)) & 1)
                            up += params.chi * params.phi[static_cast<std::size_t>(i - 1)];
                    const std::size_t keep = w >> 1;
                    next[keep | (1u << (p - 1))] += prob[w] * up;
                    next[keep] += prob[w] * (1.0 - up);
                }
                prob = std::move(next);
            }
        }
    }

    // Metaorder continuation probabilities against a direct zeta oracle and
    // their large-size power-law form.
    {
        const double p1 = flow::continuation_probability(1.5, 1);
        const double oracle =
            zeta_partial_sum(2.5, 2.0, 200'000) / zeta_partial_sum(2.5, 1.0, 200'000);
        expect(std::abs(p1 - oracle) < 1e-9, "continuation vs partial-sum oracle");
        expect(std::abs(p1 - 0.2546) < kC9ContTol, "continuation level");
        for (std::int64_t m : {50, 100, 1000, 10'000}) {
            const double pm = flow::continuation_probability(1.5, m);
            const double approx = std::pow(static_cast<double>(m) / static_cast<double>(m + 1), 1.5);
            expect(std::abs(pm / approx - 1.0) < kC9RatioTol,
                   "continuation power law at m=" + std::to_string(m));
        }
    }

    // The sweep-probability identity of the adaptive exponent.
    {
        for (double alpha : {0.5, 0.3, 0.1}) {
            for (double delta : {0.05, 0.2}) {
                policy::AdaptivePolicy pol;
                pol.alpha = alpha;
                pol.delta = delta;
                for (double x = -0.999; x < 1.0; x += 0.0999) {
                    const double g = policy::adaptive_exponent(pol, x);
                    expect(std::abs(std::pow(delta, g) - alpha * (1.0 - x)) < kC9IdentityTol,
                           "sweep-probability identity");
                }
            }
        }
    }

    // The fraction sampler's probability transform is uniform.
    {
        rng::Xoshiro256pp gen(kC9Seed, "acceptance-ks");
        const double g = 0.7;
        std::vector<double> u(kC9KsSamples);
        for (auto& v : u) v = 1.0 - std::pow(1.0 - policy::sample_fraction(g, gen), g);
        std::sort(u.begin(), u.end());
        double ks = 0.0;
        const auto n = static_cast<double>(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) {
            const double hi = static_cast<double>(i + 1) / n - u[i];
            const double lo = u[i] - static_cast<double>(i) / n;
            ks = std::max({ks, hi, lo});
        }
        expect(ks < kC9KsCritical / std::sqrt(n), "fraction-sampler KS");
    }

    const bool pass = failed == 0;
    std::string detail = "oracle identities hold: " + std::to_string(checks - failed) + "/" +
                         std::to_string(checks) + " checks";
    if (!pass) detail += " (first failure: " + first_failure + ")";
    return {pass, detail};
}

// ----------------------------------------------------------- criterion 10

Verdict criterion10() {
    sim::SimConfig cfg = book_config(0.6, 0.05, kC10Seed);
    cfg.n_trades = kC10Trades;

    const sim::SimResult a = sim::run(cfg);
    const sim::SimResult b = sim::run(cfg);
    const std::string text_a = io::format_trade_log(a.log);
    const bool deterministic = text_a == io::format_trade_log(b.log);

    const sim::TradeLog back = io::parse_trade_log(text_a);
    const bool round_trip = io::format_trade_log(back) == text_a;

    sim::ReducedConfig red;
    red.n_trades = 200'000;
    red.seed = kC10Seed;
    red.dar.chi = 0.3;
    red.dar.phi = {1.0};
    const sim::ReducedResult ra = sim::run_reduced(red);
    const sim::ReducedResult rb = sim::run_reduced(red);
    const bool reduced_deterministic =
        ra.log_price == rb.log_price && ra.eps == rb.eps && ra.eps_hat == rb.eps_hat;

    const bool pass = deterministic && round_trip && reduced_deterministic;
    return {pass, std::string("byte determinism and export round trip: full run ") +
                      (deterministic ? "stable" : "DIVERGED") + ", reduced run " +
                      (reduced_deterministic ? "stable" : "DIVERGED") + ", log round trip " +
                      (round_trip ? "exact" : "BROKEN") + " (" + std::to_string(kC10Trades) +
                      " trades)"};
}

}  // namespace

int main() {
    std::cout << "acceptance: ten criteria at full scale, one line each\n" << std::flush;
    Reporter rep;
    SharedResults shared;

    run_criterion(rep, 1, [&] { return criterion1(); });
    run_criterion(rep, 2, [&] { return criterion2(shared); });
    run_criterion(rep, 3, [&] { return criterion3(shared); });
    run_criterion(rep, 4, [&] { return criterion4(); });
    run_criterion(rep, 5, [&] { return criterion5(); });
    run_criterion(rep, 6, [&] { return criterion6(shared); });
    run_criterion(rep, 7, [&] { return criterion7(shared); });
    run_criterion(rep, 8, [&] { return criterion8(); });
    run_criterion(rep, 9, [&] { return criterion9(); });
    run_criterion(rep, 10, [&] { return criterion10(); });

    if (rep.failures() == 0)
        std::cout << "all 10 criteria passed\n";
    else
        std::cout << rep.failures() << " of 10 criteria failed\n";
    return rep.failures();
}
