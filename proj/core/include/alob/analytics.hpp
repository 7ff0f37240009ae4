#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "alob/errors.hpp"
#include "alob/flow.hpp"
#include "alob/sim.hpp"

// Diagnostics computed from trade logs: signature plots, quantile-binned
// conditional expectations, penetration statistics, the mechanical-impact
// approximation, lagged inefficiency scans, and the closed forms of the
// reduced model (per-step variance and bare propagator).

namespace alob::analytics {

// ------------------------------------------------------------- signature

struct SignaturePlot {
    std::vector<std::int64_t> lags;
    std::vector<double> sigma;  // log-return units per square-root trade
    std::vector<double> se;
};

// sigma(l) = sqrt(E[(p_(n+l) - p_n)^2] / l) over overlapping windows of the
// pre-trade log-price series. Standard errors come from ~32 batch means,
// which absorbs the serial correlation the overlap introduces. Requires
// n > 10 * max(lags); SeriesTooShort otherwise.
SignaturePlot signature_plot(std::span<const double> log_price,
                             std::span<const std::int64_t> lags);
SignaturePlot signature_plot(const sim::TradeLog& log, std::span<const std::int64_t> lags);

// Roughly geometric lag ladder 1..max_lag with `per_decade` distinct values
// per factor of ten; always contains 1 and max_lag.
std::vector<std::int64_t> log_spaced_lags(std::int64_t max_lag, int per_decade = 8);

// ------------------------------------------------------- conditional bins

struct ConditionalCurve {
    std::vector<double> bin_lo;   // smallest conditioning value in the bin
    std::vector<double> bin_hi;   // largest
    std::vector<double> center;   // mean conditioning value per bin
    std::vector<double> mean;     // conditional mean of the target
    std::vector<double> se;       // its standard error
    std::vector<std::int64_t> count;
};

// Equal-count quantile bins on x (sizes differ by at most one; ties broken
// by position, so the partition is deterministic). Throws LengthMismatch on
// misaligned inputs, DegenerateBins when x has fewer distinct values than
// bins.
ConditionalCurve conditional_curve(std::span<const double> y, std::span<const double> x,
                                   int bins);

// --------------------------------------------- penetration and mechanics

// The four book-reaction curves conditioned on the policy variable x.
struct PenetrationStats {
    ConditionalCurve penetration;  // P(trade eats the whole opposite best | x)
    ConditionalCurve fraction;     // E[f | x]
    ConditionalCurve volume;       // E[market volume | x]
    ConditionalCurve opposite;     // E[opposite best volume | x]
};
PenetrationStats penetration_stats(const sim::TradeLog& log, int bins);

// Mechanical impact E[eps * r_mech | x]: the direct per-bin measurement and
// its gap-times-penetration reconstruction
//   P(pen | x, buy) E[gap_ask/4 | pen, x, buy] + (same for sells),
// aligned on the same bins. Large-tick books should see the two agree to a
// few percent.
struct MechanicalImpact {
    ConditionalCurve measured;
    std::vector<double> approx;
};
MechanicalImpact mechanical_impact_approx(const sim::TradeLog& log, int bins);

// ------------------------------------------------------ inefficiency scan

// For each horizon s: forecast the sign s+1 trades past the end of each lag
// window, bin eps_(n+s) * eps_hat_(n+s), and test whether any bin pair (x,
// -x) with x > 0 shows E[eps r | x] above E[eps r | -x] by more than twice
// the combined standard error - the conditional-inefficiency signature.
// minimal_s is the smallest clean horizon, -1 when none is.
struct InefficiencyScan {
    struct Horizon {
        int s = 0;
        int tested_pairs = 0;
        int violations = 0;
    };
    std::vector<Horizon> horizons;
    int minimal_s = -1;
};
InefficiencyScan inefficiency_scan(std::span<const std::int8_t> eps, std::span<const double> r,
                                   const flow::DarParams& predictor,
                                   std::span<const int> horizons, int bins);
InefficiencyScan inefficiency_scan(const sim::TradeLog& log, const flow::DarParams& predictor,
                                   std::span<const int> horizons, int bins);

// ------------------------------------------------------ reduced closed forms

// Per-step return variance D^2 of the reduced model driven by a DAR flow
// with its model-consistent predictor:
//   D^2 = Sigma^2 + A^2 (1 - chi^2 sum phi_i^2
//                          - 2 chi^2 sum_(r>s) phi_r phi_s rho(r-s)),
// with rho the (empirical) sign autocorrelation, rho[k] for lag k. The
// signature plot of such a run is flat at sqrt(D^2).
double diffusion_closed_form(const flow::DarParams& params, double impact,
                             double noise_variance, std::span<const double> acf);

// Bare propagator G0(l) = A chi (1 - sum_(j<l) phi_j) for l = 1..l_max;
// zero beyond the memory.
std::vector<double> propagator(const flow::DarParams& params, double impact, int l_max);

// ------------------------------------------------------------ regressions

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_se = 0.0;
    double intercept_se = 0.0;
};

// Weighted least squares y = a + b x with weights 1/se^2 (unweighted when
// `se` is empty). Throws LengthMismatch on misaligned inputs,
// DegenerateSeries with fewer than two distinct x.
LineFit weighted_line_fit(std::span<const double> x, std::span<const double> y,
                          std::span<const double> se);

// The same fit on (log lag, log value): the log-log slope of a signature
// plot or an autocorrelation tail. Zero or negative values are skipped.
LineFit loglog_slope(std::span<const std::int64_t> lags, std::span<const double> values,
                     std::span<const double> se);

}  // namespace alob::analytics
