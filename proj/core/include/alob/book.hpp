#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "alob/errors.hpp"
#include "alob/rng.hpp"

// Zero-intelligence limit order book on an integer price grid.
//
// Prices are positive integer multiples of the tick size w and liquidity is
// deposited in lots of a fixed share size s. The book keeps a moving window
// of 2L+1 ticks centred on an anchor; when the midprice drifts within L/2
// ticks of a window edge the window is re-centred and freshly exposed ticks
// are seeded at the stationary depth. Liquidity on each side is stored as a
// flat shares-per-tick array, which keeps the three bulk operations of the
// event loop (Poisson placement, per-lot cancellation, market-order
// execution) at a few nanoseconds per touched level.

namespace alob::book {

enum class Side : std::uint8_t { Bid, Ask };

inline constexpr Side opposite(Side s) noexcept {
    return s == Side::Bid ? Side::Ask : Side::Bid;
}

// How snapshot() reports the gap behind the best quote when a side holds a
// single level. OneTick substitutes a synthetic level one tick behind the
// best (the natural convention in a grid whose interior is dense); Strict
// raises ThinSide instead.
enum class GapMode : std::uint8_t { OneTick, Strict };

struct BookParams {
    std::int64_t tick = 1;          // price increment w
    std::int64_t lot_shares = 100;  // shares per limit order lot (s)
    std::int64_t half_width = 500;  // grid window half-width L, in ticks
};

// Pre-trade book state at an order arrival. Log quantities are natural logs
// of the tick-denominated price.
struct BookSnapshot {
    std::int64_t best_ask = 0;    // A
    std::int64_t best_bid = 0;    // B
    std::int64_t second_ask = 0;  // next occupied (or synthetic) ask price
    std::int64_t second_bid = 0;
    std::int64_t ask_shares = 0;  // v_A, shares at the best ask
    std::int64_t bid_shares = 0;  // v_B
    double mid = 0.0;             // (A + B) / 2
    double log_mid = 0.0;
    double gap_ask = 0.0;  // g_A = log(second_ask) - log(A)
    double gap_bid = 0.0;  // g_B = log(B) - log(second_bid)
};

struct ExecutionReport {
    std::int64_t requested = 0;
    std::int64_t executed = 0;
    int levels_consumed = 0;
    std::int64_t opposite_best_before = 0;
    std::int64_t opposite_best_after = 0;
    double log_mid_before = 0.0;
    double log_mid_after = 0.0;
    // Mechanical return r^M: log-mid move caused by the execution itself.
    double mechanical_return = 0.0;
    // True when the order consumed at least the pre-trade volume at the
    // opposite best, i.e. the trade moved the quote.
    bool penetrated = false;
};

class OrderBook {
public:
    // Creates a book whose window is centred on anchor_price with every tick
    // below the anchor seeded as bids and every tick above as asks, each with
    // Poisson(seed_lots_mean) lots (the two inner ticks get at least one lot
    // so both sides start quoted). The anchor tick itself starts empty, so
    // the initial midprice equals anchor_price.
    static OrderBook seeded(const BookParams& params, std::int64_t anchor_price,
                            double seed_lots_mean, rng::Xoshiro256pp& gen);

    // Creates an empty book (both sides vacant) for manual assembly in tests
    // and for the ingest path.
    OrderBook(const BookParams& params, std::int64_t anchor_price);

    // ================= mutating operations =================

    // Deposits `lots` lots at `price`. A buy must rest strictly below and a
    // sell strictly above the current midprice (CrossingOrder otherwise).
    // While only the opposite side is quoted the constraint degrades to "do
    // not cross the opposite best"; an entirely unquoted book accepts any
    // in-window price.
    void place_limit(Side side, std::int64_t price, std::int64_t lots = 1);

    // place_limit without the midprice legality check (window membership is
    // still enforced). The simulator's arrival phase draws every placement of
    // a step against the same pre-step midprice, so the lots are mutually
    // non-crossing by construction but individual ones may sit at or beyond
    // the midprice as it moves during the phase.
    void deposit(Side side, std::int64_t price, std::int64_t lots = 1);

    // One cancellation sweep: every resting lot (a trailing partial lot
    // counts as one) is removed independently with probability cancel_prob.
    // If a sweep would wipe a side out completely, one lot at that side's
    // best level is retained so the book always stays two-sided.
    void cancel_pass(double cancel_prob, rng::Xoshiro256pp& gen);

    // Executes a market order of `shares` against the opposite side in price
    // priority. sign > 0 buys (consumes asks), sign < 0 sells. Throws
    // InsufficientLiquidity if `shares` exceeds max_market_volume(sign); use
    // that bound to clamp upstream.
    ExecutionReport execute_market(int sign, std::int64_t shares);

    // Re-centres the window once the midprice is within L/2 ticks of either
    // edge. Freshly exposed ticks are seeded with Poisson(seed_lots_mean)
    // lots on the side they fall on; ticks that leave the window are
    // dropped. Returns true if a shift happened.
    bool maybe_recenter(double seed_lots_mean, rng::Xoshiro256pp& gen);

    // ================= observers =================

    BookSnapshot snapshot(GapMode mode = GapMode::OneTick) const;

    std::int64_t best_price(Side side) const;    // EmptySide if vacant
    std::int64_t best_shares(Side side) const;   // shares at best
    std::int64_t total_shares(Side side) const noexcept;
    int level_count(Side side) const noexcept;
    std::int64_t shares_at(std::int64_t price) const;  // 0 if level vacant
    bool side_empty(Side side) const noexcept;

    double mid_price() const;  // EmptySide if either side vacant
    double log_mid() const;

    // Largest executable market-order volume for this sign: the opposite
    // side's total minus one protected lot.
    std::int64_t max_market_volume(int sign) const;

    // Inclusive price range where a limit order of this side may currently
    // rest (window edge to strictly inside the midprice), and the number of
    // distinct ticks it contains.
    struct PlacementRange {
        std::int64_t lo = 0;
        std::int64_t hi = 0;
        std::int64_t ticks = 0;  // 0 when no legal tick exists
    };
    PlacementRange placement_range(Side side) const;

    // Occupied levels as (price, shares), best first.
    std::vector<std::pair<std::int64_t, std::int64_t>> depth_profile(Side side) const;

    const BookParams& params() const noexcept { return params_; }
    std::int64_t window_low() const noexcept;   // lowest in-window price
    std::int64_t window_high() const noexcept;  // highest in-window price
    std::int64_t anchor_price() const noexcept { return anchor_ * params_.tick; }

private:
    // Internal coordinates are tick indices (price / w).
    std::int64_t index_of(std::int64_t price, const char* op) const;
    void add_(Side side, std::int64_t tick, std::int64_t lots);
    std::int64_t slot_of(std::int64_t tick) const noexcept { return tick - window_lo_; }
    double mid2_() const;  // A + B in tick units (twice the mid), both sides quoted
    void refresh_best_(Side side) noexcept;
    void refresh_outer_(Side side) noexcept;
    void seed_tick_(Side side, std::int64_t tick, double mean_lots, bool force_min_one,
                    rng::Xoshiro256pp& gen);

    BookParams params_;
    std::int64_t anchor_ = 0;     // tick index at window centre
    std::int64_t window_lo_ = 0;  // tick index of slot 0

    // Per-side state, indexed by static_cast<size_t>(Side).
    struct SideState {
        std::vector<std::int64_t> shares;  // by slot
        std::int64_t total = 0;
        int levels = 0;
        std::int64_t best = -1;   // tick index, -1 when vacant
        std::int64_t outer = -1;  // occupied tick farthest from the mid
    };
    SideState sides_[2];

    // Reused by cancel_pass to make the sweep two-phase without allocating.
    std::vector<std::pair<std::int64_t, std::int64_t>> sweep_scratch_;

    // (1-p)^n lookup rebuilt only when the cancellation probability changes;
    // it turns the common "no cancellation at this level" case into a single
    // uniform draw and one comparison.
    double survival_prob_ = -1.0;
    rng::SurvivalTable survival_;
};

}  // namespace alob::book
