#include "alob/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "alob/dar.hpp"

namespace alob::analytics {

namespace {

// Deterministic equal-count partition: `order` holds indices sorted by the
// conditioning value (ties by position), `offsets` the bin boundaries.
struct Partition {
    std::vector<std::size_t> order;
    std::vector<std::size_t> offsets;  // bins + 1 entries
};

Partition make_partition(std::span<const double> x, int bins) {
    if (bins < 2) throw ValidationError("conditional bins: need at least 2 bins");
    const std::size_t n = x.size();
    if (n < static_cast<std::size_t>(bins))
        throw DegenerateBins("conditional bins: fewer samples than bins");

    Partition part;
    part.order.resize(n);
    std::iota(part.order.begin(), part.order.end(), std::size_t{0});
    std::sort(part.order.begin(), part.order.end(), [&](std::size_t a, std::size_t b) {
        return x[a] < x[b] || (x[a] == x[b] && a < b);
    });

    std::size_t distinct = 1;
    for (std::size_t i = 1; i < n && distinct < static_cast<std::size_t>(bins); ++i)
        if (x[part.order[i]] != x[part.order[i - 1]]) ++distinct;
    if (distinct < static_cast<std::size_t>(bins))
        throw DegenerateBins("conditional bins: conditioning variable has too few distinct values");

    const std::size_t base = n / static_cast<std::size_t>(bins);
    const std::size_t rem = n % static_cast<std::size_t>(bins);
    part.offsets.resize(static_cast<std::size_t>(bins) + 1);
    part.offsets[0] = 0;
    for (std::size_t b = 0; b < static_cast<std::size_t>(bins); ++b)
        part.offsets[b + 1] = part.offsets[b] + base + (b < rem ? 1 : 0);
    return part;
}

template <typename YFn>
ConditionalCurve curve_from(const Partition& part, std::span<const double> x, YFn&& y) {
    const std::size_t bins = part.offsets.size() - 1;
    ConditionalCurve c;
    c.bin_lo.resize(bins);
    c.bin_hi.resize(bins);
    c.center.resize(bins);
    c.mean.resize(bins);
    c.se.resize(bins);
    c.count.resize(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        const std::size_t lo = part.offsets[b];
        const std::size_t hi = part.offsets[b + 1];
        const auto cnt = static_cast<double>(hi - lo);
        double sx = 0.0, sy = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            sx += x[part.order[i]];
            sy += y(part.order[i]);
        }
        const double my = sy / cnt;
        double ss = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            const double d = y(part.order[i]) - my;
            ss += d * d;
        }
        c.bin_lo[b] = x[part.order[lo]];
        c.bin_hi[b] = x[part.order[hi - 1]];
        c.center[b] = sx / cnt;
        c.mean[b] = my;
        c.se[b] = cnt > 1.0 ? std::sqrt(ss / (cnt - 1.0) / cnt) : 0.0;
        c.count[b] = static_cast<std::int64_t>(hi - lo);
    }
    return c;
}

std::vector<double> policy_variable(const sim::TradeLog& log) {
    std::vector<double> x(log.size());
    for (std::size_t i = 0; i < log.size(); ++i) x[i] = log[i].x;
    return x;
}

}  // namespace

// ------------------------------------------------------------- signature

SignaturePlot signature_plot(std::span<const double> log_price,
                             std::span<const std::int64_t> lags) {
    if (lags.empty()) throw ValidationError("signature plot: empty lag list");
    const auto n = static_cast<std::int64_t>(log_price.size());
    std::int64_t max_lag = 0;
    for (std::int64_t l : lags) {
        if (l < 1) throw ValidationError("signature plot: lags must be >= 1");
        max_lag = std::max(max_lag, l);
    }
    if (n <= 10 * max_lag)
        throw SeriesTooShort("signature plot: series must be longer than 10 * max lag");

    SignaturePlot out;
    out.lags.assign(lags.begin(), lags.end());
    out.sigma.resize(lags.size());
    out.se.resize(lags.size());

    std::vector<double> batch;  // reused batch-mean scratch
    for (std::size_t j = 0; j < lags.size(); ++j) {
        const std::int64_t l = lags[j];
        const std::int64_t m = n - l;
        const std::int64_t n_batches = std::min<std::int64_t>(32, m);
        const std::int64_t bs = m / n_batches;

        batch.assign(static_cast<std::size_t>(n_batches), 0.0);
        double total = 0.0;
        for (std::int64_t i = 0; i < m; ++i) {
            const double d = log_price[static_cast<std::size_t>(i + l)] -
                             log_price[static_cast<std::size_t>(i)];
            const double sq = d * d;
            total += sq;
            batch[static_cast<std::size_t>(std::min(i / bs, n_batches - 1))] += sq;
        }
        const double mean_sq = total / static_cast<double>(m);
        const double sigma = std::sqrt(mean_sq / static_cast<double>(l));

        // Batch counts: bs each, the last also absorbs the remainder.
        double var_bm = 0.0;
        for (std::int64_t b = 0; b < n_batches; ++b) {
            const std::int64_t cnt = b == n_batches - 1 ? m - bs * (n_batches - 1) : bs;
            const double bm = batch[static_cast<std::size_t>(b)] / static_cast<double>(cnt);
            var_bm += (bm - mean_sq) * (bm - mean_sq);
        }
        const double se_mean =
            n_batches > 1
                ? std::sqrt(var_bm / static_cast<double>(n_batches - 1) /
                            static_cast<double>(n_batches))
                : 0.0;
        out.sigma[j] = sigma;
        out.se[j] = sigma > 0.0 ? se_mean / (2.0 * sigma * static_cast<double>(l)) : 0.0;
    }
    return out;
}

SignaturePlot signature_plot(const sim::TradeLog& log, std::span<const std::int64_t> lags) {
    std::vector<double> p(log.size());
    for (std::size_t i = 0; i < log.size(); ++i) p[i] = log[i].p_log;
    return signature_plot(p, lags);
}

std::vector<std::int64_t> log_spaced_lags(std::int64_t max_lag, int per_decade) {
    if (max_lag < 1) throw ValidationError("lag ladder: max_lag must be >= 1");
    if (per_decade < 1) throw ValidationError("lag ladder: per_decade must be >= 1");
    std::vector<std::int64_t> lags{1};
    for (int k = 1;; ++k) {
        const double v = std::pow(10.0, static_cast<double>(k) / per_decade);
        const auto lag = static_cast<std::int64_t>(std::llround(v));
        if (lag >= max_lag) break;
        if (lag > lags.back()) lags.push_back(lag);
    }
    if (max_lag > lags.back()) lags.push_back(max_lag);
    return lags;
}

// ------------------------------------------------------- conditional bins

ConditionalCurve conditional_curve(std::span<const double> y, std::span<const double> x,
                                   int bins) {
    if (y.size() != x.size())
        throw LengthMismatch("conditional curve: target and conditioning series differ in length");
    const Partition part = make_partition(x, bins);
    return curve_from(part, x, [&](std::size_t i) { return y[i]; });
}

// --------------------------------------------- penetration and mechanics

PenetrationStats penetration_stats(const sim::TradeLog& log, int bins) {
    const std::vector<double> x = policy_variable(log);
    const Partition part = make_partition(x, bins);
    PenetrationStats out;
    out.penetration =
        curve_from(part, x, [&](std::size_t i) { return log[i].penetrated ? 1.0 : 0.0; });
    out.fraction = curve_from(part, x, [&](std::size_t i) { return log[i].f; });
    out.volume =
        curve_from(part, x, [&](std::size_t i) { return static_cast<double>(log[i].v_mo); });
    out.opposite = curve_from(
        part, x, [&](std::size_t i) { return static_cast<double>(log[i].v_opp_best); });
    return out;
}

MechanicalImpact mechanical_impact_approx(const sim::TradeLog& log, int bins) {
    const std::vector<double> x = policy_variable(log);
    const Partition part = make_partition(x, bins);

    MechanicalImpact out;
    out.measured = curve_from(
        part, x, [&](std::size_t i) { return static_cast<double>(log[i].eps) * log[i].r_mech; });

    const std::size_t nb = part.offsets.size() - 1;
    out.approx.resize(nb);
    for (std::size_t b = 0; b < nb; ++b) {
        std::int64_t buys = 0, sells = 0;
        double pen_gap_ask = 0.0, pen_gap_bid = 0.0;
        for (std::size_t i = part.offsets[b]; i < part.offsets[b + 1]; ++i) {
            const sim::TradeRecord& t = log[part.order[i]];
            if (t.eps > 0) {
                ++buys;
                if (t.penetrated) pen_gap_ask += t.gap_ask;
            } else {
                ++sells;
                if (t.penetrated) pen_gap_bid += t.gap_bid;
            }
        }
        // P(pen | x, side) * E[gap/4 | pen, x, side] collapses to the summed
        // penetrated gaps over four times the side count.
        double a = 0.0;
        if (buys > 0) a += pen_gap_ask / (4.0 * static_cast<double>(buys));
        if (sells > 0) a += pen_gap_bid / (4.0 * static_cast<double>(sells));
        out.approx[b] = a;
    }
    return out;
}

// ------------------------------------------------------ inefficiency scan

InefficiencyScan inefficiency_scan(std::span<const std::int8_t> eps, std::span<const double> r,
                                   const flow::DarParams& predictor,
                                   std::span<const int> horizons, int bins) {
    if (eps.size() != r.size())
        throw LengthMismatch("inefficiency scan: sign and return series differ in length");
    predictor.validate();
    const auto p = static_cast<std::size_t>(predictor.order());
    const std::size_t n = eps.size();

    InefficiencyScan out;
    for (int s : horizons) {
        if (s < 0) throw ValidationError("inefficiency scan: horizons must be >= 0");
        const std::size_t span_s = static_cast<std::size_t>(s);
        if (n < p + span_s + 1)
            throw SeriesTooShort("inefficiency scan: series shorter than predictor window + horizon");

        std::vector<double> xv, yv;
        xv.reserve(n - p - span_s);
        yv.reserve(n - p - span_s);
        for (std::size_t k = p; k + span_s < n; ++k) {
            const double hat =
                dar::predict_lagged(predictor, std::span<const std::int8_t>(&eps[k - p], p), s);
            const std::size_t m = k + span_s;
            xv.push_back(static_cast<double>(eps[m]) * hat);
            yv.push_back(static_cast<double>(eps[m]) * r[m]);
        }

        const Partition part = make_partition(xv, bins);
        const ConditionalCurve c = curve_from(part, xv, [&](std::size_t i) { return yv[i]; });

        InefficiencyScan::Horizon h;
        h.s = s;
        for (std::size_t b = 0; b < c.center.size(); ++b) {
            if (!(c.center[b] > 0.0)) continue;
            // Partner bin: negative centre closest to the mirror image.
            std::size_t best = c.center.size();
            double best_d = 0.0;
            for (std::size_t q = 0; q < c.center.size(); ++q) {
                if (!(c.center[q] < 0.0)) continue;
                const double d = std::abs(c.center[q] + c.center[b]);
                if (best == c.center.size() || d < best_d) {
                    best = q;
                    best_d = d;
                }
            }
            if (best == c.center.size()) continue;
            ++h.tested_pairs;
            const double diff = c.mean[b] - c.mean[best];
            const double se = std::sqrt(c.se[b] * c.se[b] + c.se[best] * c.se[best]);
            if (diff > 2.0 * se) ++h.violations;
        }
        out.horizons.push_back(h);
    }

    out.minimal_s = -1;
    for (const auto& h : out.horizons)
        if (h.violations == 0 && (out.minimal_s < 0 || h.s < out.minimal_s)) out.minimal_s = h.s;
    return out;
}

InefficiencyScan inefficiency_scan(const sim::TradeLog& log, const flow::DarParams& predictor,
                                   std::span<const int> horizons, int bins) {
    std::vector<std::int8_t> eps(log.size());
    std::vector<double> r(log.size());
    for (std::size_t i = 0; i < log.size(); ++i) {
        eps[i] = static_cast<std::int8_t>(log[i].eps);
        r[i] = log[i].r;
    }
    return inefficiency_scan(eps, r, predictor, horizons, bins);
}

// ------------------------------------------------------ reduced closed forms

double diffusion_closed_form(const flow::DarParams& params, double impact,
                             double noise_variance, std::span<const double> acf) {
    params.validate();
    const int p = params.order();
    if (static_cast<int>(acf.size()) < p)
        throw SeriesTooShort("diffusion closed form: autocorrelation up to lag p-1 required");

    double sum_sq = 0.0;
    for (double w : params.phi) sum_sq += w * w;
    double cross = 0.0;
    for (int r = 2; r <= p; ++r)
        for (int s = 1; s < r; ++s)
            cross += params.phi[static_cast<std::size_t>(r - 1)] *
                     params.phi[static_cast<std::size_t>(s - 1)] *
                     acf[static_cast<std::size_t>(r - s)];

    const double chi2 = params.chi * params.chi;
    return noise_variance + impact * impact * (1.0 - chi2 * sum_sq - 2.0 * chi2 * cross);
}

std::vector<double> propagator(const flow::DarParams& params, double impact, int l_max) {
    params.validate();
    if (l_max < 1) throw ValidationError("propagator: l_max must be >= 1");
    std::vector<double> g(static_cast<std::size_t>(l_max));
    double tail = 1.0;  // 1 - sum_(j<l) phi_j
    for (int l = 1; l <= l_max; ++l) {
        g[static_cast<std::size_t>(l - 1)] = impact * params.chi * tail;
        if (l <= params.order()) tail -= params.phi[static_cast<std::size_t>(l - 1)];
    }
    return g;
}

// ------------------------------------------------------------ regressions

LineFit weighted_line_fit(std::span<const double> x, std::span<const double> y,
                          std::span<const double> se) {
    if (x.size() != y.size())
        throw LengthMismatch("line fit: x and y differ in length");
    if (!se.empty() && se.size() != x.size())
        throw LengthMismatch("line fit: standard errors differ in length");
    if (x.size() < 2) throw DegenerateSeries("line fit: need at least two points");

    double sw = 0.0, swx = 0.0, swy = 0.0, swxx = 0.0, swxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double w = se.empty() ? 1.0 : 1.0 / (se[i] * se[i] + 1e-300);
        sw += w;
        swx += w * x[i];
        swy += w * y[i];
        swxx += w * x[i] * x[i];
        swxy += w * x[i] * y[i];
    }
    const double det = sw * swxx - swx * swx;
    if (!(det > 0.0)) throw DegenerateSeries("line fit: conditioning values are degenerate");

    LineFit fit;
    fit.slope = (sw * swxy - swx * swy) / det;
    fit.intercept = (swxx * swy - swx * swxy) / det;

    // With supplied errors the weights are inverse variances and the
    // parameter covariance is (X^T W X)^-1; without them, scale by the
    // residual variance.
    double scale = 1.0;
    if (se.empty()) {
        double ss = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double rres = y[i] - fit.intercept - fit.slope * x[i];
            ss += rres * rres;
        }
        scale = x.size() > 2 ? ss / static_cast<double>(x.size() - 2) : 0.0;
    }
    fit.slope_se = std::sqrt(scale * sw / det);
    fit.intercept_se = std::sqrt(scale * swxx / det);
    return fit;
}

LineFit loglog_slope(std::span<const std::int64_t> lags, std::span<const double> values,
                     std::span<const double> se) {
    if (lags.size() != values.size())
        throw LengthMismatch("log-log slope: lags and values differ in length");
    if (!se.empty() && se.size() != values.size())
        throw LengthMismatch("log-log slope: standard errors differ in length");

    std::vector<double> lx, ly, lse;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (lags[i] < 1 || !(values[i] > 0.0)) continue;
        lx.push_back(std::log(static_cast<double>(lags[i])));
        ly.push_back(std::log(values[i]));
        if (!se.empty()) lse.push_back(se[i] / values[i]);
    }
    return weighted_line_fit(lx, ly, lse);
}

}  // namespace alob::analytics
