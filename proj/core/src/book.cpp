#include "alob/book.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace alob::book {

namespace {

constexpr std::size_t idx(Side s) noexcept { return static_cast<std::size_t>(s); }

std::string price_str(std::int64_t p) { return std::to_string(p); }

}  // namespace

// ============================ construction ============================

OrderBook::OrderBook(const BookParams& params, std::int64_t anchor_price)
    : params_(params) {
    if (params_.tick < 1) throw ConfigInvalid("book: tick size must be >= 1");
    if (params_.lot_shares < 1) throw ConfigInvalid("book: lot_shares must be >= 1");
    if (params_.half_width < 2) throw ConfigInvalid("book: half_width must be >= 2");
    if (anchor_price % params_.tick != 0)
        throw ConfigInvalid("book: anchor price must be a tick multiple");
    anchor_ = anchor_price / params_.tick;
    window_lo_ = anchor_ - params_.half_width;
    if (window_lo_ < 1)
        throw ConfigInvalid("book: grid window reaches non-positive prices; raise the anchor");
    const std::size_t width = static_cast<std::size_t>(2 * params_.half_width + 1);
    for (auto& side : sides_) side.shares.assign(width, 0);
}

OrderBook OrderBook::seeded(const BookParams& params, std::int64_t anchor_price,
                            double seed_lots_mean, rng::Xoshiro256pp& gen) {
    OrderBook ob(params, anchor_price);
    const std::int64_t a = ob.anchor_;
    const std::int64_t l = params.half_width;
    // Bids fill [a-L, a-1] and asks [a+1, a+L]; the inner tick on each side
    // is forced non-empty so the book starts quoted with mid == anchor.
    for (std::int64_t t = a - l; t <= a - 1; ++t)
        ob.seed_tick_(Side::Bid, t, seed_lots_mean, t == a - 1, gen);
    for (std::int64_t t = a + 1; t <= a + l; ++t)
        ob.seed_tick_(Side::Ask, t, seed_lots_mean, t == a + 1, gen);
    return ob;
}

void OrderBook::seed_tick_(Side side, std::int64_t tick, double mean_lots, bool force_min_one,
                           rng::Xoshiro256pp& gen) {
    std::int64_t lots = rng::poisson(gen, mean_lots);
    if (force_min_one && lots == 0) lots = 1;
    if (lots == 0) return;
    auto& st = sides_[idx(side)];
    auto& cell = st.shares[static_cast<std::size_t>(slot_of(tick))];
    if (cell == 0) ++st.levels;
    cell += lots * params_.lot_shares;
    st.total += lots * params_.lot_shares;
    if (side == Side::Bid) {
        if (st.best < 0 || tick > st.best) st.best = tick;
        if (st.outer < 0 || tick < st.outer) st.outer = tick;
    } else {
        if (st.best < 0 || tick < st.best) st.best = tick;
        if (st.outer < 0 || tick > st.outer) st.outer = tick;
    }
}

// ============================ observers ============================

bool OrderBook::side_empty(Side side) const noexcept { return sides_[idx(side)].best < 0; }

std::int64_t OrderBook::best_price(Side side) const {
    const auto& st = sides_[idx(side)];
    if (st.best < 0)
        throw EmptySide(side == Side::Bid ? "book: bid side is empty" : "book: ask side is empty");
    return st.best * params_.tick;
}

std::int64_t OrderBook::best_shares(Side side) const {
    const auto& st = sides_[idx(side)];
    if (st.best < 0) throw EmptySide("book: side is empty");
    return st.shares[static_cast<std::size_t>(slot_of(st.best))];
}

std::int64_t OrderBook::total_shares(Side side) const noexcept { return sides_[idx(side)].total; }

int OrderBook::level_count(Side side) const noexcept { return sides_[idx(side)].levels; }

std::int64_t OrderBook::shares_at(std::int64_t price) const {
    const std::int64_t t = index_of(price, "shares_at");
    const auto slot = static_cast<std::size_t>(slot_of(t));
    return sides_[0].shares[slot] + sides_[1].shares[slot];
}

std::int64_t OrderBook::window_low() const noexcept { return window_lo_ * params_.tick; }

std::int64_t OrderBook::window_high() const noexcept {
    return (window_lo_ + 2 * params_.half_width) * params_.tick;
}

double OrderBook::mid2_() const {
    const auto& bid = sides_[idx(Side::Bid)];
    const auto& ask = sides_[idx(Side::Ask)];
    if (bid.best < 0) throw EmptySide("book: bid side is empty");
    if (ask.best < 0) throw EmptySide("book: ask side is empty");
    return static_cast<double>(bid.best + ask.best);
}

double OrderBook::mid_price() const {
    return 0.5 * mid2_() * static_cast<double>(params_.tick);
}

double OrderBook::log_mid() const { return std::log(mid_price()); }

std::int64_t OrderBook::max_market_volume(int sign) const {
    const auto& opp = sides_[idx(sign > 0 ? Side::Ask : Side::Bid)];
    return std::max<std::int64_t>(0, opp.total - params_.lot_shares);
}

OrderBook::PlacementRange OrderBook::placement_range(Side side) const {
    const auto& bid = sides_[idx(Side::Bid)];
    const auto& ask = sides_[idx(Side::Ask)];
    const std::int64_t wlo = window_lo_;
    const std::int64_t whi = window_lo_ + 2 * params_.half_width;

    std::int64_t lo_t = wlo;
    std::int64_t hi_t = whi;
    if (bid.best >= 0 && ask.best >= 0) {
        const std::int64_t mid2 = bid.best + ask.best;
        if (side == Side::Bid) {
            hi_t = (mid2 - 1) / 2;  // strictly below the mid
        } else {
            lo_t = mid2 / 2 + 1;  // strictly above the mid
        }
    } else if (side == Side::Bid && ask.best >= 0) {
        hi_t = ask.best - 1;
    } else if (side == Side::Ask && bid.best >= 0) {
        lo_t = bid.best + 1;
    }
    lo_t = std::max(lo_t, wlo);
    hi_t = std::min(hi_t, whi);

    PlacementRange r;
    r.ticks = hi_t >= lo_t ? hi_t - lo_t + 1 : 0;
    r.lo = lo_t * params_.tick;
    r.hi = hi_t * params_.tick;
    return r;
}

std::vector<std::pair<std::int64_t, std::int64_t>> OrderBook::depth_profile(Side side) const {
    std::vector<std::pair<std::int64_t, std::int64_t>> out;
    const auto& st = sides_[idx(side)];
    if (st.best < 0) return out;
    out.reserve(static_cast<std::size_t>(st.levels));
    const std::int64_t step = side == Side::Bid ? -1 : 1;
    for (std::int64_t t = st.best;; t += step) {
        const auto sh = st.shares[static_cast<std::size_t>(slot_of(t))];
        if (sh > 0) out.emplace_back(t * params_.tick, sh);
        if (t == st.outer) break;
    }
    return out;
}

BookSnapshot OrderBook::snapshot(GapMode mode) const {
    const auto& bid = sides_[idx(Side::Bid)];
    const auto& ask = sides_[idx(Side::Ask)];
    if (bid.best < 0) throw EmptySide("book: snapshot on empty bid side");
    if (ask.best < 0) throw EmptySide("book: snapshot on empty ask side");

    const std::int64_t w = params_.tick;
    BookSnapshot s;
    s.best_ask = ask.best * w;
    s.best_bid = bid.best * w;
    s.ask_shares = ask.shares[static_cast<std::size_t>(slot_of(ask.best))];
    s.bid_shares = bid.shares[static_cast<std::size_t>(slot_of(bid.best))];

    auto second = [&](const SideState& st, std::int64_t step) -> std::int64_t {
        for (std::int64_t t = st.best + step;
             step > 0 ? t <= st.outer : t >= st.outer; t += step) {
            if (st.shares[static_cast<std::size_t>(slot_of(t))] > 0) return t;
        }
        return -1;
    };
    std::int64_t a2 = second(ask, +1);
    std::int64_t b2 = second(bid, -1);
    if (a2 < 0 || b2 < 0) {
        if (mode == GapMode::Strict)
            throw ThinSide("book: side has a single level, gap undefined");
        if (a2 < 0) a2 = ask.best + 1;  // synthetic level one tick behind
        if (b2 < 0) b2 = bid.best - 1;
    }
    s.second_ask = a2 * w;
    s.second_bid = b2 * w;

    s.mid = 0.5 * static_cast<double>(s.best_ask + s.best_bid);
    s.log_mid = std::log(s.mid);
    s.gap_ask = std::log(static_cast<double>(s.second_ask)) -
                std::log(static_cast<double>(s.best_ask));
    s.gap_bid = std::log(static_cast<double>(s.best_bid)) -
                std::log(static_cast<double>(s.second_bid));
    return s;
}

// ============================ mutations ============================

std::int64_t OrderBook::index_of(std::int64_t price, const char* op) const {
    if (price % params_.tick != 0)
        throw ValidationError(std::string("book: ") + op + ": price " + price_str(price) +
                              " is not a tick multiple");
    const std::int64_t t = price / params_.tick;
    if (t < window_lo_ || t > window_lo_ + 2 * params_.half_width)
        throw ValidationError(std::string("book: ") + op + ": price " + price_str(price) +
                              " is outside the grid window");
    return t;
}

void OrderBook::place_limit(Side side, std::int64_t price, std::int64_t lots) {
    if (lots < 1) throw ValidationError("book: place_limit: lots must be >= 1");
    const std::int64_t t = index_of(price, "place_limit");

    const auto& bid = sides_[idx(Side::Bid)];
    const auto& ask = sides_[idx(Side::Ask)];
    if (bid.best >= 0 && ask.best >= 0) {
        const std::int64_t mid2 = bid.best + ask.best;
        const bool ok = side == Side::Bid ? (2 * t < mid2) : (2 * t > mid2);
        if (!ok)
            throw CrossingOrder("book: " + std::string(side == Side::Bid ? "buy" : "sell") +
                                " limit at " + price_str(price) +
                                " does not rest strictly beyond the midprice");
    } else if (side == Side::Bid && ask.best >= 0 && t >= ask.best) {
        throw CrossingOrder("book: buy limit at " + price_str(price) + " crosses the best ask");
    } else if (side == Side::Ask && bid.best >= 0 && t <= bid.best) {
        throw CrossingOrder("book: sell limit at " + price_str(price) + " crosses the best bid");
    }

    add_(side, t, lots);
}

void OrderBook::deposit(Side side, std::int64_t price, std::int64_t lots) {
    if (lots < 1) throw ValidationError("book: deposit: lots must be >= 1");
    add_(side, index_of(price, "deposit"), lots);
}

void OrderBook::add_(Side side, std::int64_t t, std::int64_t lots) {
    auto& st = sides_[idx(side)];
    auto& cell = st.shares[static_cast<std::size_t>(slot_of(t))];
    if (cell == 0) ++st.levels;
    cell += lots * params_.lot_shares;
    st.total += lots * params_.lot_shares;
    if (st.best < 0) {
        st.best = st.outer = t;
    } else if (side == Side::Bid) {
        st.best = std::max(st.best, t);
        st.outer = std::min(st.outer, t);
    } else {
        st.best = std::min(st.best, t);
        st.outer = std::max(st.outer, t);
    }
}

void OrderBook::refresh_best_(Side side) noexcept {
    auto& st = sides_[idx(side)];
    if (st.best < 0) return;
    const std::int64_t step = side == Side::Bid ? -1 : 1;
    std::int64_t t = st.best;
    while ((step > 0 ? t <= st.outer : t >= st.outer) &&
           st.shares[static_cast<std::size_t>(slot_of(t))] == 0) {
        t += step;
    }
    if (step > 0 ? t > st.outer : t < st.outer) {
        st.best = st.outer = -1;
    } else {
        st.best = t;
    }
}

void OrderBook::refresh_outer_(Side side) noexcept {
    auto& st = sides_[idx(side)];
    if (st.best < 0) return;
    const std::int64_t step = side == Side::Bid ? 1 : -1;  // walk towards best
    std::int64_t t = st.outer;
    while (t != st.best && st.shares[static_cast<std::size_t>(slot_of(t))] == 0) t += step;
    if (st.shares[static_cast<std::size_t>(slot_of(t))] == 0) {
        st.best = st.outer = -1;
    } else {
        st.outer = t;
    }
}

void OrderBook::cancel_pass(double cancel_prob, rng::Xoshiro256pp& gen) {
    if (cancel_prob < 0.0 || cancel_prob > 1.0)
        throw ValidationError("book: cancellation probability must lie in [0, 1]");
    if (cancel_prob == 0.0) return;
    const std::int64_t lot = params_.lot_shares;
    const double q = 1.0 - cancel_prob;
    const double ratio = cancel_prob >= 1.0 ? 0.0 : cancel_prob / q;
    if (cancel_prob != survival_prob_) {
        survival_ = rng::SurvivalTable(cancel_prob, 4096);
        survival_prob_ = cancel_prob;
    }

    for (auto side : {Side::Bid, Side::Ask}) {
        auto& st = sides_[idx(side)];
        if (st.best < 0) continue;
        sweep_scratch_.clear();
        std::int64_t removed_total = 0;

        const std::int64_t step = side == Side::Bid ? -1 : 1;
        for (std::int64_t t = st.best;; t += step) {
            const auto slot = static_cast<std::size_t>(slot_of(t));
            const std::int64_t sh = st.shares[slot];
            if (sh > 0) {
                const std::int64_t full = sh / lot;
                const std::int64_t stub = sh % lot;
                const std::int64_t units = full + (stub != 0 ? 1 : 0);

                std::int64_t k;
                if (cancel_prob >= 1.0) {
                    k = units;
                } else if (const double zero = survival_.zero_prob(units); zero < 1e-300) {
                    // Starting the inversion at (1-p)^units would underflow;
                    // only reachable far above the stationary depth.
                    k = rng::binomial(gen, units, cancel_prob);
                } else {
                    // One uniform per level; the overwhelmingly common
                    // "nothing cancelled here" case exits on the first
                    // comparison of the CDF inversion.
                    const double u = gen.next_double();
                    double pmf = zero;
                    double cdf = pmf;
                    k = 0;
                    while (u > cdf && k < units) {
                        pmf *= ratio * static_cast<double>(units - k) /
                               static_cast<double>(k + 1);
                        cdf += pmf;
                        ++k;
                        if (pmf < 1e-318) break;
                    }
                }

                if (k > 0) {
                    std::int64_t removed;
                    if (stub == 0) {
                        removed = k * lot;
                    } else if (k == units) {
                        removed = sh;
                    } else if (gen.next_double() * static_cast<double>(units) <
                               static_cast<double>(k)) {
                        // The partial lot is among the k cancelled units.
                        removed = (k - 1) * lot + stub;
                    } else {
                        removed = k * lot;
                    }
                    sweep_scratch_.emplace_back(static_cast<std::int64_t>(slot), removed);
                    removed_total += removed;
                }
            }
            if (t == st.outer) break;
        }

        // Keep the side quoted: if the sweep would empty it, retain one lot
        // (or whatever is left, if less) at the best level.
        if (removed_total == st.total && st.total > 0) {
            const auto best_slot = static_cast<std::int64_t>(slot_of(st.best));
            for (auto& [slot, removed] : sweep_scratch_) {
                if (slot == best_slot) {
                    const std::int64_t keep = std::min(lot, st.shares[static_cast<std::size_t>(slot)]);
                    removed -= keep;
                    removed_total -= keep;
                    break;
                }
            }
        }

        for (const auto& [slot, removed] : sweep_scratch_) {
            auto& cell = st.shares[static_cast<std::size_t>(slot)];
            cell -= removed;
            if (cell == 0) --st.levels;
        }
        st.total -= removed_total;
        refresh_best_(side);
        refresh_outer_(side);
    }
}

ExecutionReport OrderBook::execute_market(int sign, std::int64_t shares) {
    if (sign == 0) throw ValidationError("book: execute_market: sign must be +1 or -1");
    if (shares < 1) throw ValidationError("book: execute_market: volume must be >= 1 share");
    const Side opp = sign > 0 ? Side::Ask : Side::Bid;
    auto& st = sides_[idx(opp)];
    if (st.best < 0) throw EmptySide("book: market order against an empty side");
    if (sides_[idx(opposite(opp))].best < 0)
        throw EmptySide("book: same side unquoted, midprice undefined");
    const std::int64_t cap = max_market_volume(sign);
    if (shares > cap)
        throw InsufficientLiquidity("book: market order for " + price_str(shares) +
                                    " shares exceeds executable depth " + price_str(cap));

    ExecutionReport rep;
    rep.requested = shares;
    rep.opposite_best_before = st.best * params_.tick;
    rep.log_mid_before = log_mid();
    const std::int64_t pre_best_shares = st.shares[static_cast<std::size_t>(slot_of(st.best))];

    const std::int64_t step = opp == Side::Ask ? 1 : -1;
    std::int64_t remaining = shares;
    std::int64_t t = st.best;
    while (remaining > 0) {
        auto& cell = st.shares[static_cast<std::size_t>(slot_of(t))];
        const std::int64_t take = std::min(cell, remaining);
        cell -= take;
        st.total -= take;
        remaining -= take;
        if (cell == 0 && take > 0) {
            --st.levels;
            ++rep.levels_consumed;
        }
        if (remaining > 0) t += step;  // guaranteed in range by the cap check
    }
    // New best: first occupied level at or beyond the last touched tick.
    while (st.shares[static_cast<std::size_t>(slot_of(t))] == 0) t += step;
    st.best = t;

    rep.executed = shares;
    rep.opposite_best_after = st.best * params_.tick;
    rep.log_mid_after = log_mid();
    rep.mechanical_return = rep.log_mid_after - rep.log_mid_before;
    rep.penetrated = shares >= pre_best_shares;
    return rep;
}

bool OrderBook::maybe_recenter(double seed_lots_mean, rng::Xoshiro256pp& gen) {
    const auto& bid = sides_[idx(Side::Bid)];
    const auto& ask = sides_[idx(Side::Ask)];
    if (bid.best < 0 || ask.best < 0) return false;
    const std::int64_t mid2 = bid.best + ask.best;  // twice the mid, in ticks
    const std::int64_t l = params_.half_width;
    if (std::llabs(mid2 - 2 * anchor_) < l) return false;

    std::int64_t new_anchor = (mid2 + 1) / 2;  // round half up
    new_anchor = std::max(new_anchor, l + 1);  // keep the window at positive prices
    if (new_anchor == anchor_) return false;

    const std::int64_t new_lo = new_anchor - l;
    const std::int64_t old_lo = window_lo_;
    const std::int64_t old_hi = window_lo_ + 2 * l;
    const std::size_t width = static_cast<std::size_t>(2 * l + 1);

    for (auto side : {Side::Bid, Side::Ask}) {
        auto& st = sides_[idx(side)];
        std::vector<std::int64_t> fresh(width, 0);
        for (std::size_t slot = 0; slot < width; ++slot) {
            const std::int64_t t = new_lo + static_cast<std::int64_t>(slot);
            if (t >= old_lo && t <= old_hi) {
                fresh[slot] = st.shares[static_cast<std::size_t>(t - old_lo)];
            } else {
                // Newly exposed tick: seed at stationary depth on whichever
                // side of the current midprice it falls.
                const bool bid_territory = 2 * t < mid2;
                if ((side == Side::Bid) == bid_territory && 2 * t != mid2) {
                    const std::int64_t lots = rng::poisson(gen, seed_lots_mean);
                    fresh[slot] = lots * params_.lot_shares;
                }
            }
        }
        st.shares = std::move(fresh);
        // Rebuild the side summary by scan; re-centring is rare.
        st.total = 0;
        st.levels = 0;
        st.best = st.outer = -1;
        for (std::size_t slot = 0; slot < width; ++slot) {
            const std::int64_t sh = st.shares[slot];
            if (sh == 0) continue;
            const std::int64_t t = new_lo + static_cast<std::int64_t>(slot);
            st.total += sh;
            ++st.levels;
            if (side == Side::Bid) {
                st.best = std::max(st.best, t);
                st.outer = st.outer < 0 ? t : std::min(st.outer, t);
            } else {
                st.best = st.best < 0 ? t : std::min(st.best, t);
                st.outer = std::max(st.outer, t);
            }
        }
    }
    anchor_ = new_anchor;
    window_lo_ = new_lo;
    return true;
}

}  // namespace alob::book
