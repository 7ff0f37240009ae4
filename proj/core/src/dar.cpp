#include "alob/dar.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include <Eigen/Dense>
#include <fftw3.h>

namespace alob::dar {

namespace {

struct FftwRealDeleter {
    void operator()(double* p) const noexcept { fftw_free(p); }
};
struct FftwComplexDeleter {
    void operator()(fftw_complex* p) const noexcept { fftw_free(p); }
};

std::size_t next_pow2(std::size_t n) {
    std::size_t m = 1;
    while (m < n) m <<= 1;
    return m;
}

// Autocovariance sums sum_t x_t x_(t+k), k = 0..max_lag, of a mean-centred
// series via zero-padded FFT (linear, not circular, correlation).
std::vector<double> autocov_sums(const std::vector<double>& centred, int max_lag) {
    const std::size_t n = centred.size();
    const std::size_t m = next_pow2(n + static_cast<std::size_t>(max_lag) + 1);

    std::unique_ptr<double, FftwRealDeleter> buf(fftw_alloc_real(m));
    std::unique_ptr<fftw_complex, FftwComplexDeleter> spec(fftw_alloc_complex(m / 2 + 1));
    std::copy(centred.begin(), centred.end(), buf.get());
    std::fill(buf.get() + n, buf.get() + m, 0.0);

    fftw_plan fwd = fftw_plan_dft_r2c_1d(static_cast<int>(m), buf.get(), spec.get(),
                                         FFTW_ESTIMATE);
    fftw_execute(fwd);
    fftw_destroy_plan(fwd);

    for (std::size_t i = 0; i < m / 2 + 1; ++i) {
        spec.get()[i][0] = spec.get()[i][0] * spec.get()[i][0] +
                           spec.get()[i][1] * spec.get()[i][1];
        spec.get()[i][1] = 0.0;
    }

    fftw_plan bwd = fftw_plan_dft_c2r_1d(static_cast<int>(m), spec.get(), buf.get(),
                                         FFTW_ESTIMATE);
    fftw_execute(bwd);
    fftw_destroy_plan(bwd);

    std::vector<double> sums(static_cast<std::size_t>(max_lag) + 1);
    const double scale = 1.0 / static_cast<double>(m);  // FFTW's unnormalised inverse
    for (int k = 0; k <= max_lag; ++k)
        sums[static_cast<std::size_t>(k)] = buf.get()[k] * scale;
    return sums;
}

std::vector<double> acf_impl(std::vector<double> values, int max_lag) {
    const std::size_t n = values.size();
    if (max_lag < 1) throw ValidationError("acf: max_lag must be >= 1");
    if (n <= static_cast<std::size_t>(max_lag))
        throw SeriesTooShort("acf: need more observations than the largest lag (n = " +
                             std::to_string(n) + ", max_lag = " + std::to_string(max_lag) + ")");

    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(n);
    for (double& v : values) v -= mean;

    auto sums = autocov_sums(values, max_lag);
    if (!(sums[0] > 0.0))
        throw DegenerateSeries("acf: series has zero variance");
    std::vector<double> rho(sums.size());
    for (std::size_t k = 0; k < sums.size(); ++k) rho[k] = sums[k] / sums[0];
    return rho;
}

}  // namespace

std::vector<double> sample_autocorrelation(std::span<const double> series, int max_lag) {
    return acf_impl(std::vector<double>(series.begin(), series.end()), max_lag);
}

std::vector<double> sample_autocorrelation(std::span<const std::int8_t> series, int max_lag) {
    std::vector<double> values(series.size());
    std::transform(series.begin(), series.end(), values.begin(),
                   [](std::int8_t s) { return static_cast<double>(s); });
    return acf_impl(std::move(values), max_lag);
}

FitResult yule_walker_fit(std::span<const double> acf, int p) {
    if (p < 1) throw ValidationError("yule_walker_fit: order must be >= 1");
    if (acf.size() < static_cast<std::size_t>(p) + 1)
        throw SeriesTooShort("yule_walker_fit: autocorrelation must reach lag p");

    Eigen::MatrixXd r(p, p);
    Eigen::VectorXd b(p);
    for (int k = 0; k < p; ++k) {
        b(k) = acf[static_cast<std::size_t>(k) + 1];
        for (int i = 0; i < p; ++i)
            r(k, i) = acf[static_cast<std::size_t>(std::abs(k - i))];
    }

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(r);
    Eigen::VectorXd x = lu.solve(b);
    const double residual = (r * x - b).cwiseAbs().maxCoeff();
    // rcond catches rank-deficient-but-consistent systems (e.g. a constant
    // series), which solve to a finite answer with zero residual.
    if (!x.allFinite() || lu.rcond() < 1e-12 ||
        residual > 1e-8 * (1.0 + b.cwiseAbs().maxCoeff()))
        throw SingularSystem("yule_walker_fit: Toeplitz system is numerically singular");

    FitResult out;
    out.raw.assign(x.data(), x.data() + p);
    out.params = smooth_and_project(out.raw);
    return out;
}

FitResult fit_signs(std::span<const std::int8_t> signs, int p) {
    if (signs.size() <= 10 * static_cast<std::size_t>(p))
        throw SeriesTooShort("fit_signs: need more than 10 p observations");
    const auto acf = sample_autocorrelation(signs, p);
    return yule_walker_fit(acf, p);
}

flow::DarParams smooth_and_project(std::span<const double> chi_phi, double mean_innovation) {
    const int p = static_cast<int>(chi_phi.size());
    if (p < 1) throw ValidationError("smooth_and_project: empty coefficient vector");

    // Centred moving average with nominal span ten. The half-width shrinks
    // symmetrically near the edges, which keeps the output length at p and
    // makes the transform the identity for p <= 2.
    std::vector<double> smoothed(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) {
        const int h = std::min({i, p - 1 - i, 5});
        double acc = 0.0;
        for (int j = i - h; j <= i + h; ++j) acc += chi_phi[static_cast<std::size_t>(j)];
        smoothed[static_cast<std::size_t>(i)] = acc / static_cast<double>(2 * h + 1);
    }

    double chi = 0.0;
    for (double& v : smoothed) {
        v = std::max(v, 0.0);
        chi += v;
    }
    if (chi >= 1.0)
        throw InvalidMemory("smooth_and_project: estimated memory chi = " + std::to_string(chi) +
                            " is not < 1");

    flow::DarParams params;
    params.chi = chi;
    params.mean_innovation = mean_innovation;
    params.phi.resize(static_cast<std::size_t>(p));
    if (chi > 0.0) {
        for (int i = 0; i < p; ++i)
            params.phi[static_cast<std::size_t>(i)] = smoothed[static_cast<std::size_t>(i)] / chi;
    } else {
        // Memoryless fit: the age weights are immaterial, report uniform.
        std::fill(params.phi.begin(), params.phi.end(), 1.0 / static_cast<double>(p));
    }
    params.validate();
    return params;
}

double predict(const flow::DarParams& params, std::span<const std::int8_t> history) {
    const auto p = static_cast<std::size_t>(params.order());
    if (history.size() < p)
        throw InsufficientHistory("predict: need the last p signs");
    double acc = 0.0;
    for (std::size_t i = 1; i <= p; ++i)
        acc += params.phi[i - 1] * static_cast<double>(history[history.size() - i]);
    return params.chi * acc + (1.0 - params.chi) * params.mean_innovation;
}

double predict_lagged(const flow::DarParams& params, std::span<const std::int8_t> history,
                      int steps_ahead) {
    if (steps_ahead < 0) throw ValidationError("predict_lagged: steps_ahead must be >= 0");
    const auto p = static_cast<std::size_t>(params.order());
    if (history.size() < p)
        throw InsufficientHistory("predict_lagged: need the last p signs");

    // forecasts[j] estimates X_(n+j); unobserved intermediate signs are
    // replaced by their own forecasts (tower property of the recursion).
    std::vector<double> forecasts(static_cast<std::size_t>(steps_ahead) + 1);
    for (int j = 0; j <= steps_ahead; ++j) {
        double acc = 0.0;
        for (std::size_t i = 1; i <= p; ++i) {
            const std::int64_t t = j - static_cast<std::int64_t>(i);  // index n + t
            const double value =
                t >= 0 ? forecasts[static_cast<std::size_t>(t)]
                       : static_cast<double>(history[history.size() -
                                                     static_cast<std::size_t>(-t)]);
            acc += params.phi[i - 1] * value;
        }
        forecasts[static_cast<std::size_t>(j)] =
            params.chi * acc + (1.0 - params.chi) * params.mean_innovation;
    }
    return forecasts.back();
}

double mse(std::span<const std::int8_t> signs, std::span<const double> predictions) {
    if (signs.size() != predictions.size())
        throw LengthMismatch("mse: signs and predictions differ in length");
    if (signs.empty()) throw SeriesTooShort("mse: empty input");
    double acc = 0.0;
    for (std::size_t i = 0; i < signs.size(); ++i) {
        const double d = static_cast<double>(signs[i]) - predictions[i];
        acc += d * d;
    }
    return acc / static_cast<double>(signs.size());
}

double null_mse(std::span<const double> predictions) {
    if (predictions.empty()) throw SeriesTooShort("null_mse: empty input");
    double acc = 0.0;
    for (double v : predictions) acc += v * v;
    return 1.0 + acc / static_cast<double>(predictions.size());
}

}  // namespace alob::dar
