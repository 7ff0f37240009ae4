#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "alob/analytics.hpp"
#include "alob/errors.hpp"
#include "alob/sim.hpp"

// File formats: flat key=value run configuration, CSV trade logs and binned
// curves (shortest round-trip float text, so a written log reloads
// bit-exactly), a raw quote/trade event-log schema for external data, and a
// small JSON run manifest tying outputs to the config hash and seed.

namespace alob::io {

// ------------------------------------------------------------------ config

// A configuration file describes either a full book simulation or a reduced
// sign-surprise run, selected by the `model` key (default `book`).
struct ConfigFile {
    enum class Model : std::uint8_t { Book, Reduced };
    Model model = Model::Book;
    sim::SimConfig book;
    sim::ReducedConfig reduced;
};

// Parses `key=value` lines; `#` starts a comment, blank lines are skipped.
// Unknown or duplicate keys and malformed values raise ParseError with the
// line number; missing required keys (mu, lambda, nu for the book model) and
// out-of-range values raise ValidationError naming the key. Returns the
// parsed configuration with defaults filled in; documented by `--help` of
// the command-line tool.
ConfigFile parse_config(std::string_view text);
ConfigFile load_config(const std::string& path);  // IoError if unreadable

// FNV-1a hash of the raw configuration text, recorded in the manifest.
std::uint64_t config_hash(std::string_view text);

// -------------------------------------------------------------- trade logs

// Fixed column order:
//   n,t,eps,eps_hat_pub,eps_hat_priv,x,p_log,v_ask,v_bid,gap_ask,gap_bid,
//   f,v_mo,v_opp_best,penetrated,r_mech,r_quote,r
// penetrated is serialized as 0/1. An empty log writes the header only.
std::string format_trade_log(const sim::TradeLog& log);
void write_trade_log(const sim::TradeLog& log, const std::string& path);

// Strict parse of the schema above; SchemaError on a wrong header, short
// rows or malformed fields. Reading a written log reproduces it exactly.
sim::TradeLog parse_trade_log(std::string_view text);
sim::TradeLog read_trade_log(const std::string& path);

// Streams a reduced-model run into the same schema so every analysis tool
// applies unchanged. Book-dependent columns (volumes, gaps, fraction) are
// zero; r carries the whole price increment in r_quote.
void write_reduced_log(const sim::ReducedResult& result, const std::string& path);

// ------------------------------------------------------------------ curves

// bin_lo,bin_hi,bin_center,mean,se,count
void write_curve(const analytics::ConditionalCurve& curve, const std::string& path);
analytics::ConditionalCurve read_curve(const std::string& path);

// lag,sigma,se (not a binned curve, hence its own schema)
void write_signature(const analytics::SignaturePlot& plot, const std::string& path);

// -------------------------------------------------------------- event logs

// Raw market-data row. Quote rows snapshot the book (sign/price/shares
// ignored); trade rows record an execution (book columns ignored). Prices
// are integer ticks; a missing second-best may be left as 0, in which case
// ingestion assumes a one-tick gap.
struct ExternalEvent {
    double t = 0.0;
    bool is_trade = false;
    int sign = 0;
    std::int64_t shares = 0;
    std::int64_t price = 0;
    std::int64_t best_bid = 0;
    std::int64_t best_ask = 0;
    std::int64_t v_bid = 0;
    std::int64_t v_ask = 0;
    std::int64_t second_bid = 0;
    std::int64_t second_ask = 0;
};

using ExternalEventLog = std::vector<ExternalEvent>;

// CSV schema: t,type,sign,price,shares,best_bid,best_ask,v_bid,v_ask,
// second_bid,second_ask with type ∈ {trade,quote}. SchemaError on malformed
// rows, crossed quotes or trade signs outside {-1,+1}; UnorderedTimestamps
// when timestamps decrease.
ExternalEventLog parse_event_log(std::string_view text);
ExternalEventLog read_event_log(const std::string& path);

struct IngestStats {
    std::int64_t trades_in = 0;      // trade rows seen
    std::int64_t trades_out = 0;     // records produced
    std::int64_t merged_rows = 0;    // extra rows folded by aggregation
    std::int64_t dropped_rows = 0;   // no usable snapshot or unfinalized return
};

// Converts an event log into the TradeLog schema. Uninterrupted runs of
// trade rows with the same timestamp and sign are aggregated into a single
// execution with summed volume; each trade takes its pre-trade snapshot
// from the last preceding quote row. The mechanical return is the log-mid
// move from that snapshot to the first quote after the trade; the total
// return spans consecutive pre-trade snapshots. Trades with no preceding
// quote, and the final trade (whose return is undefined without a
// subsequent snapshot), are dropped and counted. Forecast columns are left
// zero: external data carries no forecasts, so conditioning analyses fit
// their own predictor from the recovered sign series.
sim::TradeLog ingest(const ExternalEventLog& events, IngestStats* stats = nullptr);

// ---------------------------------------------------------------- manifest

struct RunManifest {
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;
    std::string version;
    std::vector<std::string> outputs;
    double wall_seconds = 0.0;
};

void write_manifest(const RunManifest& manifest, const std::string& path);
RunManifest read_manifest(const std::string& path);

// Library version string recorded in manifests.
std::string_view version();

}  // namespace alob::io
