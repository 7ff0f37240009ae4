#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "alob/errors.hpp"
#include "alob/flow.hpp"

// Estimation and prediction for the DAR(p) sign process.
//
// The fitting pipeline is sample autocorrelation -> Yule-Walker solve for
// the products chi * phi_i -> smoothing projection onto valid parameters
// (moving average, clip at zero, renormalise). Prediction is the
// conditional expectation of a future sign given the lag window, including
// the s-step-ahead version obtained by feeding forecasts back into the
// recursion.

namespace alob::dar {

// Sample autocorrelation rho_0..rho_max_lag of a mean-centred series, with
// the 1/n (biased) normalisation that keeps the estimated sequence positive
// semi-definite. Uses an FFT under the hood, so max_lag can be large.
// Throws SeriesTooShort unless n > max_lag, DegenerateSeries on zero
// variance.
std::vector<double> sample_autocorrelation(std::span<const double> series, int max_lag);
std::vector<double> sample_autocorrelation(std::span<const std::int8_t> series, int max_lag);

struct FitResult {
    flow::DarParams params;       // after the smoothing projection
    std::vector<double> raw;      // chi * phi_i straight from the linear solve
};

// Solves the first p Yule-Walker equations
//   rho_k = sum_i (chi phi_i) rho_(k-i),   k = 1..p
// for the products chi * phi_i, then projects onto valid DAR parameters via
// smooth_and_project. `acf` must hold rho_0..rho_p at least.
// Throws SeriesTooShort if the ACF is shorter than p+1, SingularSystem if
// the Toeplitz system is numerically singular.
FitResult yule_walker_fit(std::span<const double> acf, int p);

// Fit directly from a sign series: autocorrelation to lag p, then the solve
// above. Requires n > 10 * p.
FitResult fit_signs(std::span<const std::int8_t> signs, int p);

// Projection of raw chi * phi_i estimates onto valid parameters:
//   1. centred moving average, nominal span ten, truncated symmetrically at
//      the edges (so short inputs pass through unchanged),
//   2. negative values clipped to zero,
//   3. chi = sum of the clipped values (InvalidMemory if >= 1),
//   4. phi = clipped values / chi (uniform if chi == 0).
flow::DarParams smooth_and_project(std::span<const double> chi_phi,
                                   double mean_innovation = 0.0);

// One-step prediction E[X_n | X_(n-1)..X_(n-p)]:
//   chi * sum_i phi_i X_(n-i) + (1 - chi) * mean_innovation.
// `history` is ordered oldest first; only the last p entries are used.
// Throws InsufficientHistory when fewer than p values are supplied.
double predict(const flow::DarParams& params, std::span<const std::int8_t> history);

// s-step-ahead prediction E[X_(n+s) | X_(n-1)..]: the same recursion with
// forecasts substituted for the unobserved intermediate signs. s = 0 is the
// one-step version above.
double predict_lagged(const flow::DarParams& params, std::span<const std::int8_t> history,
                      int steps_ahead);

// Mean squared prediction error between realised signs and predictions.
// Throws LengthMismatch if the spans differ in size.
double mse(std::span<const std::int8_t> signs, std::span<const double> predictions);

// MSE of the trivial zero prediction given the predictor being benchmarked:
// 1 + E[prediction^2]. A useful predictor must beat this.
double null_mse(std::span<const double> predictions);

}  // namespace alob::dar
