#include "alob/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "alob/rng.hpp"
#include "json.hpp"

namespace alob::io {

namespace {

constexpr std::string_view kVersion = "0.1.0";

constexpr std::string_view kTradeHeader =
    "n,t,eps,eps_hat_pub,eps_hat_priv,x,p_log,v_ask,v_bid,gap_ask,gap_bid,"
    "f,v_mo,v_opp_best,penetrated,r_mech,r_quote,r";

constexpr std::string_view kCurveHeader = "bin_lo,bin_hi,bin_center,mean,se,count";

constexpr std::string_view kEventHeader =
    "t,type,sign,price,shares,best_bid,best_ask,v_bid,v_ask,second_bid,second_ask";

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Splits text into lines, tolerating a trailing newline and CRLF endings.
std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        pos = nl + 1;
    }
    return lines;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (true) {
        const auto comma = line.find(',', pos);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(pos));
            break;
        }
        fields.push_back(line.substr(pos, comma - pos));
        pos = comma + 1;
    }
    return fields;
}

// ---- numeric text, shortest round-trip ----------------------------------

void append_double(std::string& out, double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

void append_int(std::string& out, std::int64_t v) {
    char buf[24];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

template <typename Err>
double parse_double_or(std::string_view s, const std::string& what) {
    s = trim(s);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw Err(what + ": invalid number \"" + std::string(s) + "\"");
    return v;
}

template <typename Err>
std::int64_t parse_int_or(std::string_view s, const std::string& what) {
    s = trim(s);
    std::int64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw Err(what + ": invalid integer \"" + std::string(s) + "\"");
    return v;
}

template <typename Err>
std::uint64_t parse_uint_or(std::string_view s, const std::string& what) {
    s = trim(s);
    std::uint64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw Err(what + ": invalid unsigned integer \"" + std::string(s) + "\"");
    return v;
}

std::string line_tag(std::size_t line_no) { return "line " + std::to_string(line_no); }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open \"" + path + "\" for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("read failure on \"" + path + "\"");
    return std::move(ss).str();
}

void write_file(const std::string& text, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open \"" + path + "\" for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw IoError("write failure on \"" + path + "\"");
}

}  // namespace

// ------------------------------------------------------------------ config

namespace {

struct ConfigEntry {
    std::size_t line_no;
    std::string value;
};

const std::unordered_set<std::string_view> kCommonKeys = {
    "model",   "n_trades", "seed",     "flow",     "beta",        "pi",
    "max_size", "dar_chi", "dar_phi",  "dar_mean", "predictor",   "predictor_p"};
const std::unordered_set<std::string_view> kBookKeys = {
    "mu",     "lambda",     "nu",    "dt",    "tick",  "lot_shares", "half_width",
    "base_price", "burn_in", "policy", "zeta", "alpha", "delta"};
const std::unordered_set<std::string_view> kReducedKeys = {"impact", "noise_variance"};

std::vector<double> parse_double_list(std::string_view s, const std::string& what) {
    std::vector<double> out;
    for (std::string_view f : split_fields(s)) out.push_back(parse_double_or<ParseError>(f, what));
    return out;
}

}  // namespace

ConfigFile parse_config(std::string_view text) {
    std::unordered_map<std::string, ConfigEntry> entries;
    const auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string_view line = lines[i];
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ParseError(line_tag(i + 1) + ": expected key=value");
        const std::string key{trim(line.substr(0, eq))};
        const std::string value{trim(line.substr(eq + 1))};
        if (key.empty()) throw ParseError(line_tag(i + 1) + ": empty key");
        if (!entries.emplace(key, ConfigEntry{i + 1, value}).second)
            throw ParseError(line_tag(i + 1) + ": duplicate key \"" + key + "\"");
    }

    ConfigFile cfg;
    if (const auto it = entries.find("model"); it != entries.end()) {
        if (it->second.value == "book")
            cfg.model = ConfigFile::Model::Book;
        else if (it->second.value == "reduced")
            cfg.model = ConfigFile::Model::Reduced;
        else
            throw ParseError(line_tag(it->second.line_no) +
                             ": model must be \"book\" or \"reduced\"");
    }
    const bool book = cfg.model == ConfigFile::Model::Book;

    for (const auto& [key, entry] : entries) {
        if (kCommonKeys.count(key)) continue;
        if (book ? kBookKeys.count(key) > 0 : kReducedKeys.count(key) > 0) continue;
        throw ParseError(line_tag(entry.line_no) + ": unknown key \"" + key + "\"");
    }

    const auto get = [&](std::string_view key) -> const std::string* {
        const auto it = entries.find(std::string(key));
        return it == entries.end() ? nullptr : &it->second.value;
    };
    const auto get_f64 = [&](std::string_view key, double& dst) {
        if (const auto* v = get(key)) dst = parse_double_or<ParseError>(*v, "key \"" + std::string(key) + "\"");
    };
    const auto get_i64 = [&](std::string_view key, std::int64_t& dst) {
        if (const auto* v = get(key)) dst = parse_int_or<ParseError>(*v, "key \"" + std::string(key) + "\"");
    };

    // Keys shared by both models; written to whichever config is active.
    flow::DarParams* dar = book ? &cfg.book.dar : &cfg.reduced.dar;
    flow::LmfParams* lmf = book ? &cfg.book.lmf : &cfg.reduced.lmf;
    if (const auto* v = get("flow")) {
        sim::FlowKind kind;
        if (*v == "iid")
            kind = sim::FlowKind::Iid;
        else if (*v == "dar")
            kind = sim::FlowKind::Dar;
        else if (*v == "lmf")
            kind = sim::FlowKind::Lmf;
        else
            throw ParseError(line_tag(entries.at("flow").line_no) +
                             ": flow must be one of iid, dar, lmf");
        (book ? cfg.book.flow : cfg.reduced.flow) = kind;
    }
    get_f64("beta", lmf->beta);
    get_f64("pi", lmf->participation);
    get_i64("max_size", lmf->max_size);
    get_f64("dar_chi", dar->chi);
    get_f64("dar_mean", dar->mean_innovation);
    if (const auto* v = get("dar_phi")) dar->phi = parse_double_list(*v, "key \"dar_phi\"");
    get_i64("n_trades", book ? cfg.book.n_trades : cfg.reduced.n_trades);
    if (const auto* v = get("seed"))
        (book ? cfg.book.seed : cfg.reduced.seed) = parse_uint_or<ParseError>(*v, "key \"seed\"");
    if (const auto* v = get("predictor")) {
        sim::PredictorKind kind;
        if (*v == "none")
            kind = sim::PredictorKind::None;
        else if (*v == "private")
            kind = sim::PredictorKind::Private;
        else if (*v == "dar")
            kind = sim::PredictorKind::Dar;
        else if (*v == "oracle")
            kind = sim::PredictorKind::Oracle;
        else
            throw ParseError(line_tag(entries.at("predictor").line_no) +
                             ": predictor must be one of none, private, dar, oracle");
        (book ? cfg.book.predictor : cfg.reduced.predictor) = kind;
    }

    if (book) {
        for (std::string_view req : {"mu", "lambda", "nu"})
            if (!get(req))
                throw ValidationError("missing required key \"" + std::string(req) + "\"");
        get_f64("mu", cfg.book.mu);
        get_f64("lambda", cfg.book.lambda);
        get_f64("nu", cfg.book.nu);
        get_f64("dt", cfg.book.dt);
        get_i64("tick", cfg.book.tick);
        get_i64("lot_shares", cfg.book.lot_shares);
        get_i64("half_width", cfg.book.half_width);
        get_i64("base_price", cfg.book.base_price);
        get_i64("burn_in", cfg.book.burn_in_steps);
        if (const auto* v = get("policy")) {
            if (*v == "toth")
                cfg.book.policy = sim::PolicyKind::Toth;
            else if (*v == "adaptive")
                cfg.book.policy = sim::PolicyKind::Adaptive;
            else
                throw ParseError(line_tag(entries.at("policy").line_no) +
                                 ": policy must be toth or adaptive");
        }
        get_f64("zeta", cfg.book.toth.zeta);
        get_f64("alpha", cfg.book.adaptive.alpha);
        get_f64("delta", cfg.book.adaptive.delta);
        if (const auto* v = get("predictor_p"))
            cfg.book.predictor_p =
                static_cast<int>(parse_int_or<ParseError>(*v, "key \"predictor_p\""));
        try {
            cfg.book.validate();
        } catch (const Error& e) {
            throw ValidationError(e.what());
        }
    } else {
        if (get("predictor_p"))
            throw ParseError(line_tag(entries.at("predictor_p").line_no) +
                             ": the reduced model forecasts from its true flow parameters");
        get_f64("impact", cfg.reduced.impact);
        get_f64("noise_variance", cfg.reduced.noise_variance);
        try {
            cfg.reduced.validate();
        } catch (const Error& e) {
            throw ValidationError(e.what());
        }
    }
    return cfg;
}

ConfigFile load_config(const std::string& path) { return parse_config(read_file(path)); }

std::uint64_t config_hash(std::string_view text) { return rng::fnv1a64(text); }

// -------------------------------------------------------------- trade logs

namespace {

void append_trade_row(std::string& out, const sim::TradeRecord& t) {
    append_int(out, t.n);
    out.push_back(',');
    append_double(out, t.t);
    out.push_back(',');
    append_int(out, t.eps);
    out.push_back(',');
    append_double(out, t.eps_hat_pub);
    out.push_back(',');
    append_double(out, t.eps_hat_priv);
    out.push_back(',');
    append_double(out, t.x);
    out.push_back(',');
    append_double(out, t.p_log);
    out.push_back(',');
    append_int(out, t.v_ask);
    out.push_back(',');
    append_int(out, t.v_bid);
    out.push_back(',');
    append_double(out, t.gap_ask);
    out.push_back(',');
    append_double(out, t.gap_bid);
    out.push_back(',');
    append_double(out, t.f);
    out.push_back(',');
    append_int(out, t.v_mo);
    out.push_back(',');
    append_int(out, t.v_opp_best);
    out.push_back(',');
    out.push_back(t.penetrated ? '1' : '0');
    out.push_back(',');
    append_double(out, t.r_mech);
    out.push_back(',');
    append_double(out, t.r_quote);
    out.push_back(',');
    append_double(out, t.r);
    out.push_back('\n');
}

}  // namespace

std::string format_trade_log(const sim::TradeLog& log) {
    std::string out;
    out.reserve(log.size() * 160 + 200);
    out.append(kTradeHeader);
    out.push_back('\n');
    for (const sim::TradeRecord& t : log) append_trade_row(out, t);
    return out;
}

void write_trade_log(const sim::TradeLog& log, const std::string& path) {
    write_file(format_trade_log(log), path);
}

sim::TradeLog parse_trade_log(std::string_view text) {
    const auto lines = split_lines(text);
    if (lines.empty() || trim(lines[0]) != kTradeHeader)
        throw SchemaError("trade log: missing or wrong header");
    sim::TradeLog log;
    log.reserve(lines.size());
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        const auto f = split_fields(lines[i]);
        if (f.size() != 18)
            throw SchemaError("trade log: " + line_tag(i + 1) + " has " +
                              std::to_string(f.size()) + " fields, expected 18");
        const std::string tag = "trade log " + line_tag(i + 1);
        sim::TradeRecord t;
        t.n = parse_int_or<SchemaError>(f[0], tag);
        t.t = parse_double_or<SchemaError>(f[1], tag);
        t.eps = static_cast<int>(parse_int_or<SchemaError>(f[2], tag));
        t.eps_hat_pub = parse_double_or<SchemaError>(f[3], tag);
        t.eps_hat_priv = parse_double_or<SchemaError>(f[4], tag);
        t.x = parse_double_or<SchemaError>(f[5], tag);
        t.p_log = parse_double_or<SchemaError>(f[6], tag);
        t.v_ask = parse_int_or<SchemaError>(f[7], tag);
        t.v_bid = parse_int_or<SchemaError>(f[8], tag);
        t.gap_ask = parse_double_or<SchemaError>(f[9], tag);
        t.gap_bid = parse_double_or<SchemaError>(f[10], tag);
        t.f = parse_double_or<SchemaError>(f[11], tag);
        t.v_mo = parse_int_or<SchemaError>(f[12], tag);
        t.v_opp_best = parse_int_or<SchemaError>(f[13], tag);
        if (f[14] == "1")
            t.penetrated = true;
        else if (f[14] == "0")
            t.penetrated = false;
        else
            throw SchemaError(tag + ": penetrated must be 0 or 1");
        t.r_mech = parse_double_or<SchemaError>(f[15], tag);
        t.r_quote = parse_double_or<SchemaError>(f[16], tag);
        t.r = parse_double_or<SchemaError>(f[17], tag);
        log.push_back(t);
    }
    return log;
}

sim::TradeLog read_trade_log(const std::string& path) { return parse_trade_log(read_file(path)); }

void write_reduced_log(const sim::ReducedResult& result, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open \"" + path + "\" for writing");
    std::string buf;
    buf.reserve(1 << 20);
    buf.append(kTradeHeader);
    buf.push_back('\n');
    for (std::size_t i = 0; i < result.eps.size(); ++i) {
        sim::TradeRecord t;
        t.n = static_cast<std::int64_t>(i);
        t.t = static_cast<double>(i);
        t.eps = result.eps[i];
        t.eps_hat_pub = result.eps_hat[i];
        t.x = static_cast<double>(result.eps[i]) * result.eps_hat[i];
        t.p_log = result.log_price[i];
        t.r = result.log_price[i + 1] - result.log_price[i];
        t.r_quote = t.r;  // no book, so nothing mechanical
        append_trade_row(buf, t);
        if (buf.size() > (1 << 20) - 256) {
            out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
            buf.clear();
        }
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw IoError("write failure on \"" + path + "\"");
}

// ------------------------------------------------------------------ curves

void write_curve(const analytics::ConditionalCurve& curve, const std::string& path) {
    std::string out{kCurveHeader};
    out.push_back('\n');
    for (std::size_t b = 0; b < curve.mean.size(); ++b) {
        append_double(out, curve.bin_lo[b]);
        out.push_back(',');
        append_double(out, curve.bin_hi[b]);
        out.push_back(',');
        append_double(out, curve.center[b]);
        out.push_back(',');
        append_double(out, curve.mean[b]);
        out.push_back(',');
        append_double(out, curve.se[b]);
        out.push_back(',');
        append_int(out, curve.count[b]);
        out.push_back('\n');
    }
    write_file(out, path);
}

analytics::ConditionalCurve read_curve(const std::string& path) {
    const std::string text = read_file(path);
    const auto lines = split_lines(text);
    if (lines.empty() || trim(lines[0]) != kCurveHeader)
        throw SchemaError("curve file: missing or wrong header");
    analytics::ConditionalCurve c;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        const auto f = split_fields(lines[i]);
        if (f.size() != 6)
            throw SchemaError("curve file: " + line_tag(i + 1) + " has " +
                              std::to_string(f.size()) + " fields, expected 6");
        const std::string tag = "curve file " + line_tag(i + 1);
        c.bin_lo.push_back(parse_double_or<SchemaError>(f[0], tag));
        c.bin_hi.push_back(parse_double_or<SchemaError>(f[1], tag));
        c.center.push_back(parse_double_or<SchemaError>(f[2], tag));
        c.mean.push_back(parse_double_or<SchemaError>(f[3], tag));
        c.se.push_back(parse_double_or<SchemaError>(f[4], tag));
        c.count.push_back(parse_int_or<SchemaError>(f[5], tag));
    }
    return c;
}

void write_signature(const analytics::SignaturePlot& plot, const std::string& path) {
    std::string out{"lag,sigma,se\n"};
    for (std::size_t i = 0; i < plot.lags.size(); ++i) {
        append_int(out, plot.lags[i]);
        out.push_back(',');
        append_double(out, plot.sigma[i]);
        out.push_back(',');
        append_double(out, plot.se[i]);
        out.push_back('\n');
    }
    write_file(out, path);
}

// -------------------------------------------------------------- event logs

ExternalEventLog parse_event_log(std::string_view text) {
    const auto lines = split_lines(text);
    if (lines.empty() || trim(lines[0]) != kEventHeader)
        throw SchemaError("event log: missing or wrong header");
    ExternalEventLog events;
    double last_t = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        const auto f = split_fields(lines[i]);
        if (f.size() != 11)
            throw SchemaError("event log: " + line_tag(i + 1) + " has " +
                              std::to_string(f.size()) + " fields, expected 11");
        const std::string tag = "event log " + line_tag(i + 1);
        ExternalEvent e;
        e.t = parse_double_or<SchemaError>(f[0], tag);
        const std::string_view type = trim(f[1]);
        if (type == "trade")
            e.is_trade = true;
        else if (type == "quote")
            e.is_trade = false;
        else
            throw SchemaError(tag + ": type must be trade or quote");
        e.sign = static_cast<int>(parse_int_or<SchemaError>(f[2], tag));
        e.price = parse_int_or<SchemaError>(f[3], tag);
        e.shares = parse_int_or<SchemaError>(f[4], tag);
        e.best_bid = parse_int_or<SchemaError>(f[5], tag);
        e.best_ask = parse_int_or<SchemaError>(f[6], tag);
        e.v_bid = parse_int_or<SchemaError>(f[7], tag);
        e.v_ask = parse_int_or<SchemaError>(f[8], tag);
        e.second_bid = parse_int_or<SchemaError>(f[9], tag);
        e.second_ask = parse_int_or<SchemaError>(f[10], tag);

        if (e.t < last_t)
            throw UnorderedTimestamps(tag + ": timestamp decreases");
        last_t = e.t;
        if (e.is_trade) {
            if (e.sign != 1 && e.sign != -1)
                throw SchemaError(tag + ": trade sign must be -1 or +1");
            if (e.shares < 1) throw SchemaError(tag + ": trade shares must be >= 1");
        } else {
            if (e.best_bid < 1 || e.best_ask <= e.best_bid)
                throw SchemaError(tag + ": quote must satisfy 0 < bid < ask");
            if (e.v_bid < 0 || e.v_ask < 0)
                throw SchemaError(tag + ": quote volumes must be >= 0");
            if (e.second_bid != 0 && e.second_bid >= e.best_bid)
                throw SchemaError(tag + ": second bid must lie below the best bid");
            if (e.second_ask != 0 && e.second_ask <= e.best_ask)
                throw SchemaError(tag + ": second ask must lie above the best ask");
        }
        events.push_back(e);
    }
    return events;
}

ExternalEventLog read_event_log(const std::string& path) {
    return parse_event_log(read_file(path));
}

namespace {

double quote_log_mid(const ExternalEvent& q) {
    return std::log((static_cast<double>(q.best_bid) + static_cast<double>(q.best_ask)) / 2.0);
}

}  // namespace

sim::TradeLog ingest(const ExternalEventLog& events, IngestStats* stats) {
    struct Pending {
        double t = 0.0;
        int sign = 0;
        std::int64_t shares = 0;
        std::int64_t rows = 1;
        ExternalEvent snap;                // last quote before the trade
        std::optional<double> post_mid;    // first quote after it, log-mid
    };

    IngestStats local;
    std::vector<Pending> pending;
    const ExternalEvent* quote = nullptr;
    bool group_open = false;    // current last Pending may still aggregate
    std::size_t mech_front = 0; // first Pending without a post-trade quote

    for (const ExternalEvent& e : events) {
        if (!e.is_trade) {
            for (; mech_front < pending.size(); ++mech_front)
                pending[mech_front].post_mid = quote_log_mid(e);
            quote = &e;
            group_open = false;
            continue;
        }
        ++local.trades_in;
        if (quote == nullptr) {
            ++local.dropped_rows;
            continue;
        }
        if (group_open && pending.back().t == e.t && pending.back().sign == e.sign) {
            pending.back().shares += e.shares;
            pending.back().rows += 1;
            ++local.merged_rows;
            continue;
        }
        Pending p;
        p.t = e.t;
        p.sign = e.sign;
        p.shares = e.shares;
        p.snap = *quote;
        pending.push_back(p);
        group_open = true;
    }

    sim::TradeLog log;
    if (!pending.empty()) {
        log.reserve(pending.size() - 1);
        for (std::size_t i = 0; i + 1 < pending.size(); ++i) {
            const Pending& p = pending[i];
            sim::TradeRecord t;
            t.n = static_cast<std::int64_t>(i);
            t.t = p.t;
            t.eps = p.sign;
            t.p_log = quote_log_mid(p.snap);
            t.v_ask = p.snap.v_ask;
            t.v_bid = p.snap.v_bid;
            const auto ask = static_cast<double>(p.snap.best_ask);
            const auto bid = static_cast<double>(p.snap.best_bid);
            const double second_ask =
                p.snap.second_ask > 0 ? static_cast<double>(p.snap.second_ask) : ask + 1.0;
            const double second_bid =
                p.snap.second_bid > 0 ? static_cast<double>(p.snap.second_bid) : bid - 1.0;
            t.gap_ask = std::log(second_ask) - std::log(ask);
            t.gap_bid = std::log(bid) - std::log(second_bid);
            t.v_mo = p.shares;
            t.v_opp_best = p.sign > 0 ? p.snap.v_ask : p.snap.v_bid;
            t.penetrated = t.v_opp_best > 0 && t.v_mo >= t.v_opp_best;
            t.f = t.v_opp_best > 0
                      ? static_cast<double>(t.v_mo) / static_cast<double>(t.v_opp_best)
                      : 0.0;
            t.r_mech = p.post_mid ? *p.post_mid - t.p_log : 0.0;
            t.r = quote_log_mid(pending[i + 1].snap) - t.p_log;
            t.r_quote = t.r - t.r_mech;
            log.push_back(t);
        }
        // The final trade has no later snapshot, so its return is undefined.
        local.dropped_rows += pending.back().rows;
    }
    local.trades_out = static_cast<std::int64_t>(log.size());
    if (stats != nullptr) *stats = local;
    return log;
}

// ---------------------------------------------------------------- manifest

void write_manifest(const RunManifest& manifest, const std::string& path) {
    nlohmann::json j;
    j["config_hash"] = manifest.config_hash;
    j["seed"] = manifest.seed;
    j["version"] = manifest.version;
    j["outputs"] = manifest.outputs;
    j["wall_seconds"] = manifest.wall_seconds;
    write_file(j.dump(2) + "\n", path);
}

RunManifest read_manifest(const std::string& path) {
    const std::string text = read_file(path);
    try {
        const nlohmann::json j = nlohmann::json::parse(text);
        RunManifest m;
        m.config_hash = j.at("config_hash").get<std::uint64_t>();
        m.seed = j.at("seed").get<std::uint64_t>();
        m.version = j.at("version").get<std::string>();
        m.outputs = j.at("outputs").get<std::vector<std::string>>();
        m.wall_seconds = j.at("wall_seconds").get<double>();
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("manifest \"" + path + "\": " + e.what());
    }
}

std::string_view version() { return kVersion; }

}  // namespace alob::io
