#include "alob/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "alob/zeta.hpp"

namespace alob::flow {

// ---------------------------------------------------------------- DAR(p)

void DarParams::validate() const {
    if (!(chi >= 0.0) || chi >= 1.0)
        throw InvalidMemory("dar: copy probability chi must lie in [0, 1)");
    if (phi.empty()) throw ValidationError("dar: phi must have at least one lag");
    double sum = 0.0;
    for (double w : phi) {
        if (!(w >= 0.0)) throw ValidationError("dar: phi weights must be non-negative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw ValidationError("dar: phi weights must sum to 1");
    if (std::abs(mean_innovation) > 1.0)
        throw ValidationError("dar: innovation mean must lie in [-1, 1]");
}

DarGenerator::DarGenerator(DarParams params, rng::Xoshiro256pp gen)
    : params_(std::move(params)), gen_(gen) {
    params_.validate();
    const int p = params_.order();
    copy_cdf_.resize(static_cast<std::size_t>(p));
    double acc = 0.0;
    for (int i = 0; i < p; ++i) {
        acc += params_.chi * params_.phi[static_cast<std::size_t>(i)];
        copy_cdf_[static_cast<std::size_t>(i)] = acc;
    }

    window_.resize(static_cast<std::size_t>(p));
    for (auto& w : window_) w = static_cast<std::int8_t>(draw_innovation_());
    // Discard 10 p draws so the lag window forgets its IID start.
    for (int i = 0; i < 10 * p; ++i) next();
}

int DarGenerator::draw_innovation_() {
    const double p_up = 0.5 * (1.0 + params_.mean_innovation);
    return gen_.next_double() < p_up ? 1 : -1;
}

int DarGenerator::next() {
    const std::size_t p = window_.size();
    const double u = gen_.next_double();
    int value;
    if (u < copy_cdf_.back()) {
        const auto it = std::upper_bound(copy_cdf_.begin(), copy_cdf_.end(), u);
        const auto age = static_cast<std::size_t>(it - copy_cdf_.begin()) + 1;  // 1..p
        value = window_[(head_ + p - age) % p];
    } else {
        value = draw_innovation_();
    }
    window_[head_] = static_cast<std::int8_t>(value);
    head_ = (head_ + 1) % p;
    return value;
}

std::vector<std::int8_t> gen_dar(const DarParams& params, std::size_t n,
                                 rng::Xoshiro256pp gen) {
    DarGenerator g(params, gen);
    std::vector<std::int8_t> out(n);
    for (auto& s : out) s = static_cast<std::int8_t>(g.next());
    return out;
}

// ------------------------------------------------------------- metaorders

void LmfParams::validate() const {
    if (!(beta > 1.0))
        throw ValidationError("metaorder flow: beta must exceed 1 for a normalisable size law");
    if (!(participation > 0.0) || participation > 1.0)
        throw ValidationError("metaorder flow: participation must lie in (0, 1]");
    if (max_size < 1) throw ValidationError("metaorder flow: max_size must be >= 1");
}

namespace {
constexpr std::size_t kSizeTable = 4096;     // inverse-CDF table for the size bulk
constexpr int kZetaRefreshPeriod = 4096;     // exact recompute of the running zeta
}  // namespace

LmfGenerator::LmfGenerator(LmfParams params, rng::Xoshiro256pp gen)
    : params_(params), gen_(gen) {
    params_.validate();
    const double s = 1.0 + params_.beta;
    norm_ = riemann_zeta(s) - (params_.max_size == std::numeric_limits<std::int64_t>::max()
                                   ? 0.0
                                   : hurwitz_zeta(s, static_cast<double>(params_.max_size) + 1.0));

    const auto bulk = static_cast<std::size_t>(
        std::min<std::int64_t>(params_.max_size, static_cast<std::int64_t>(kSizeTable)));
    size_cdf_.resize(bulk);
    double acc = 0.0;
    for (std::size_t k = 1; k <= bulk; ++k) {
        acc += std::pow(static_cast<double>(k), -s) / norm_;
        size_cdf_[k - 1] = acc;
    }
    refresh_metaorder_();
}

std::int64_t LmfGenerator::draw_size_() {
    const double u = gen_.next_double();
    if (u < size_cdf_.back()) {
        const auto it = std::upper_bound(size_cdf_.begin(), size_cdf_.end(), u);
        return static_cast<std::int64_t>(it - size_cdf_.begin()) + 1;
    }
    // Tail walk beyond the table; expected length is finite because the size
    // law has a finite mean for beta > 1.
    const double s = 1.0 + params_.beta;
    double acc = size_cdf_.back();
    std::int64_t k = static_cast<std::int64_t>(size_cdf_.size());
    while (k < params_.max_size) {
        ++k;
        acc += std::pow(static_cast<double>(k), -s) / norm_;
        if (u < acc) return k;
    }
    return params_.max_size;
}

void LmfGenerator::refresh_metaorder_() {
    meta_.sign = (gen_.next_u64() & 1u) ? std::int8_t{1} : std::int8_t{-1};
    meta_.size = draw_size_();
    meta_.executed = 0;
    cont_prob_ = 1.0;  // a fresh metaorder certainly places its first child
    zeta_at_m_ = 0.0;
    drift_counter_ = 0;
}

void LmfGenerator::advance_continuation_() {
    // Called with meta_.executed == m >= 1; maintains zeta(1+beta, m) by the
    // identity zeta(s, m+1) = zeta(s, m) - m^-s, with a periodic exact
    // refresh to stop floating-point drift on very long metaorders.
    const double s = 1.0 + params_.beta;
    const auto m = static_cast<double>(meta_.executed);
    if (meta_.executed == 1 || ++drift_counter_ >= kZetaRefreshPeriod) {
        zeta_at_m_ = hurwitz_zeta(s, m);
        drift_counter_ = 0;
    }
    const double next = zeta_at_m_ - std::pow(m, -s);
    cont_prob_ = next / zeta_at_m_;
    zeta_at_m_ = next;  // becomes zeta(s, m+1) for the following call
}

LmfGenerator::Draw LmfGenerator::next() {
    Draw d;
    d.before = meta_;
    d.continuation = cont_prob_;
    if (gen_.next_double() < params_.participation) {
        // Child-order slot. A used-up metaorder is only replaced here, so the
        // pre-trade state (and any prediction built on it) never anticipates
        // the replacement's sign: the taker holding (sign, m) learns that the
        // metaorder ended only when the next child turns out to be a fresh one.
        if (meta_.executed == meta_.size) refresh_metaorder_();
        d.sign = meta_.sign;
        ++meta_.executed;
        advance_continuation_();
    } else {
        d.sign = (gen_.next_u64() & 1u) ? std::int8_t{1} : std::int8_t{-1};
    }
    return d;
}

double continuation_probability(double beta, std::int64_t executed) {
    if (executed <= 0) return 1.0;
    const double s = 1.0 + beta;
    const auto m = static_cast<double>(executed);
    return hurwitz_zeta(s, m + 1.0) / hurwitz_zeta(s, m);
}

double private_prediction(const LmfParams& params, const LmfState& state) {
    return static_cast<double>(state.sign) * params.participation *
           continuation_probability(params.beta, state.executed);
}

double metaorder_size_pmf(const LmfParams& params, std::int64_t k) {
    if (k < 1 || k > params.max_size) return 0.0;
    const double s = 1.0 + params.beta;
    const double norm =
        riemann_zeta(s) - hurwitz_zeta(s, static_cast<double>(params.max_size) + 1.0);
    return std::pow(static_cast<double>(k), -s) / norm;
}

// ------------------------------------------------------------------ IID

std::vector<std::int8_t> gen_iid(std::size_t n, rng::Xoshiro256pp gen) {
    std::vector<std::int8_t> out(n);
    for (auto& s : out) s = (gen.next_u64() & 1u) ? std::int8_t{1} : std::int8_t{-1};
    return out;
}

}  // namespace alob::flow
