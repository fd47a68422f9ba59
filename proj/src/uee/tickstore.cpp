#include "uee/tickstore.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <unordered_map>

namespace uee {
namespace {

constexpr std::size_t kMaxColumns = 32;

struct Fields {
    std::array<std::string_view, kMaxColumns> v;
    std::size_t n = 0;
};

void split(std::string_view line, char delim, Fields& out) {
    out.n = 0;
    std::size_t start = 0;
    while (out.n < kMaxColumns) {
        const std::size_t pos = line.find(delim, start);
        if (pos == std::string_view::npos) {
            out.v[out.n++] = line.substr(start);
            return;
        }
        out.v[out.n++] = line.substr(start, pos - start);
        start = pos + 1;
    }
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

template <class Int>
bool parse_int(std::string_view s, Int& out) {
    if (s.empty()) return false;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

// Integer seconds since midnight, or HH:MM:SS.
bool parse_second(std::string_view s, std::int64_t& out) {
    if (s.size() == 8 && s[2] == ':' && s[5] == ':') {
        int h = 0, m = 0, sec = 0;
        if (!parse_int(s.substr(0, 2), h) || !parse_int(s.substr(3, 2), m) || !parse_int(s.substr(6, 2), sec))
            return false;
        if (h > 23 || m > 59 || sec > 59) return false;
        out = h * 3600 + m * 60 + sec;
        return true;
    }
    if (!parse_int(s, out)) return false;
    return out >= 0 && out < 86400;
}

// Key interning with a one-entry cache: consecutive rows usually share a key.
class KeyInterner {
public:
    explicit KeyInterner(std::vector<StreamKey>& keys) : keys_(keys) {
        for (std::uint32_t k = 0; k < keys_.size(); ++k) index_.emplace(raw(keys_[k]), k);
    }

    std::uint32_t intern(std::string_view symbol, std::string_view venue, std::string_view date_text, const Date& day) {
        if (has_last_ && symbol == last_symbol_ && venue == last_venue_ && date_text == last_date_) return last_id_;
        std::string key;
        key.reserve(symbol.size() + venue.size() + 12);
        key.append(symbol).push_back('\x1f');
        key.append(venue).push_back('\x1f');
        key.append(day.to_string());
        auto [it, inserted] = index_.emplace(std::move(key), static_cast<std::uint32_t>(keys_.size()));
        if (inserted) keys_.push_back(StreamKey{std::string(symbol), std::string(venue), day});
        has_last_ = true;
        last_symbol_.assign(symbol);
        last_venue_.assign(venue);
        last_date_.assign(date_text);
        last_id_ = it->second;
        return last_id_;
    }

private:
    static std::string raw(const StreamKey& k) { return k.symbol + '\x1f' + k.venue + '\x1f' + k.day.to_string(); }

    std::vector<StreamKey>& keys_;
    std::unordered_map<std::string, std::uint32_t> index_;
    bool has_last_ = false;
    std::string last_symbol_, last_venue_, last_date_;
    std::uint32_t last_id_ = 0;
};

struct RowContext {
    std::size_t line;
    std::vector<Diagnostic>& diagnostics;
    void reject(std::string message) { diagnostics.push_back(Diagnostic{line, std::move(message)}); }
};

std::string_view field(const Fields& f, int col) { return trim(f.v[static_cast<std::size_t>(col)]); }

template <class Tick, class RowFn>
void parse_lines(std::string_view data, const FormatDescriptor& format, ParsedTicks<Tick>& out, RowFn&& row_fn) {
    KeyInterner interner(out.keys);
    std::vector<std::uint64_t> next_seq(out.keys.size(), 0);
    for (std::size_t i = 0; i < out.stream_of.size(); ++i) {
        const auto s = out.stream_of[i];
        next_seq[s] = std::max(next_seq[s], out.ticks[i].seq + 1);
    }

    Fields fields;
    std::size_t line_no = 0;
    bool first_data_line = true;
    std::size_t pos = 0;
    const int needed = format.column_count();
    while (pos < data.size()) {
        std::size_t eol = data.find('\n', pos);
        if (eol == std::string_view::npos) eol = data.size();
        std::string_view line = data.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (trim(line).empty() || line.front() == '#') continue;

        split(line, format.delimiter, fields);
        if (first_data_line) {
            first_data_line = false;
            // Header: the time column is not a timestamp.
            std::int64_t probe = 0;
            if (static_cast<std::size_t>(format.time) < fields.n && !parse_second(field(fields, format.time), probe)) {
                const auto t = field(fields, format.time);
                if (!t.empty() && (t.front() < '0' || t.front() > '9')) continue;
            }
        }
        ++out.rows;
        RowContext ctx{line_no, out.diagnostics};
        if (static_cast<int>(fields.n) < needed) {
            ctx.reject("expected " + std::to_string(needed) + " columns, found " + std::to_string(fields.n));
            continue;
        }
        const auto symbol = field(fields, format.symbol);
        const auto venue = field(fields, format.venue);
        const auto date_text = field(fields, format.date);
        if (symbol.empty() || venue.empty()) {
            ctx.reject("empty symbol or venue");
            continue;
        }
        const auto day = Date::parse(date_text);
        if (!day) {
            ctx.reject("bad date '" + std::string(date_text) + "'");
            continue;
        }
        std::int64_t second = 0;
        if (!parse_second(field(fields, format.time), second)) {
            ctx.reject("bad time '" + std::string(field(fields, format.time)) + "'");
            continue;
        }
        Tick tick{};
        tick.second = second;
        tick.t = static_cast<double>(second);
        if (!row_fn(fields, tick, ctx)) continue;

        const auto id = interner.intern(symbol, venue, date_text, *day);
        if (id >= next_seq.size()) next_seq.resize(id + 1, 0);
        tick.seq = next_seq[id]++;
        out.stream_of.push_back(id);
        out.ticks.push_back(tick);
    }
}

}  // namespace

FormatDescriptor FormatDescriptor::trades() { return FormatDescriptor{}; }

FormatDescriptor FormatDescriptor::quotes() {
    FormatDescriptor f;
    f.price = -1;
    f.size = -1;
    f.bid = 4;
    f.ask = 5;
    return f;
}

FormatDescriptor FormatDescriptor::from_names(std::string_view spec) {
    FormatDescriptor f;
    f.symbol = f.venue = f.date = f.time = f.price = f.size = f.bid = f.ask = -1;
    if (spec.starts_with("tsv:")) {
        f.delimiter = '\t';
        spec.remove_prefix(4);
    }
    int col = 0;
    std::size_t start = 0;
    while (start <= spec.size()) {
        std::size_t end = spec.find(',', start);
        if (end == std::string_view::npos) end = spec.size();
        const auto name = trim(spec.substr(start, end - start));
        int* slot = nullptr;
        if (name == "symbol") slot = &f.symbol;
        else if (name == "venue") slot = &f.venue;
        else if (name == "date") slot = &f.date;
        else if (name == "time") slot = &f.time;
        else if (name == "price") slot = &f.price;
        else if (name == "size") slot = &f.size;
        else if (name == "bid") slot = &f.bid;
        else if (name == "ask") slot = &f.ask;
        else if (name != "_") throw Error(ErrorCode::invalid_argument, "unknown column name '" + std::string(name) + "'");
        if (slot) {
            if (*slot >= 0) throw Error(ErrorCode::invalid_argument, "duplicate column '" + std::string(name) + "'");
            *slot = col;
        }
        ++col;
        start = end + 1;
    }
    if (f.symbol < 0 || f.venue < 0 || f.date < 0 || f.time < 0)
        throw Error(ErrorCode::invalid_argument, "format must name symbol, venue, date and time columns");
    return f;
}

int FormatDescriptor::column_count() const {
    return std::max({symbol, venue, date, time, price, size, bid, ask}) + 1;
}

namespace {

bool trade_row(const FormatDescriptor& format, const Fields& f, TradeTick& tick, RowContext& ctx) {
    const auto price_text = field(f, format.price);
    const auto price = parse_price(price_text);
    if (!price) {
        ctx.reject("bad price '" + std::string(price_text) + "'");
        return false;
    }
    if (price->units <= 0) {
        ctx.reject("nonpositive price '" + std::string(price_text) + "'");
        return false;
    }
    const auto size_text = field(f, format.size);
    if (!parse_int(size_text, tick.size)) {
        ctx.reject("bad size '" + std::string(size_text) + "'");
        return false;
    }
    if (tick.size <= 0) {
        ctx.reject("nonpositive size '" + std::string(size_text) + "'");
        return false;
    }
    tick.price = *price;
    return true;
}

bool quote_row(const FormatDescriptor& format, const Fields& f, QuoteTick& tick, RowContext& ctx) {
    const auto bid = parse_price(field(f, format.bid));
    const auto ask = parse_price(field(f, format.ask));
    if (!bid || !ask) {
        ctx.reject("bad bid/ask");
        return false;
    }
    if (bid->units <= 0 || ask->units <= 0) {
        ctx.reject("nonpositive bid/ask");
        return false;
    }
    tick.bid = *bid;
    tick.ask = *ask;
    tick.crossed = *bid >= *ask;
    return true;
}

void check_trade_format(const FormatDescriptor& format) {
    if (format.price < 0 || format.size < 0) throw Error(ErrorCode::invalid_argument, "trade format needs price and size");
}

void check_quote_format(const FormatDescriptor& format) {
    if (format.bid < 0 || format.ask < 0) throw Error(ErrorCode::invalid_argument, "quote format needs bid and ask");
}

template <class Tick>
void tag_diagnostics(ParsedTicks<Tick>& into, std::size_t from, const std::filesystem::path& path) {
    for (std::size_t k = from; k < into.diagnostics.size(); ++k)
        into.diagnostics[k].message = path.filename().string() + ": " + into.diagnostics[k].message;
}

}  // namespace

ParsedTrades parse_trades(std::string_view data, const FormatDescriptor& format) {
    check_trade_format(format);
    ParsedTrades out;
    parse_lines(data, format, out, [&](const Fields& f, TradeTick& tick, RowContext& ctx) {
        return trade_row(format, f, tick, ctx);
    });
    return out;
}

ParsedQuotes parse_quotes(std::string_view data, const FormatDescriptor& format) {
    check_quote_format(format);
    ParsedQuotes out;
    parse_lines(data, format, out, [&](const Fields& f, QuoteTick& tick, RowContext& ctx) {
        return quote_row(format, f, tick, ctx);
    });
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::io, "cannot open '" + path.string() + "'");
    in.seekg(0, std::ios::end);
    const auto size = in.tellg();
    if (size < 0) throw Error(ErrorCode::io, "cannot read '" + path.string() + "'");
    std::string data(static_cast<std::size_t>(size), '\0');
    in.seekg(0, std::ios::beg);
    in.read(data.data(), size);
    if (!in) throw Error(ErrorCode::io, "short read on '" + path.string() + "'");
    return data;
}

void load_trades(const std::filesystem::path& path, const FormatDescriptor& format, ParsedTrades& into) {
    check_trade_format(format);
    const std::string data = read_file(path);
    const std::size_t diag_from = into.diagnostics.size();
    parse_lines(data, format, into, [&](const Fields& f, TradeTick& tick, RowContext& ctx) {
        return trade_row(format, f, tick, ctx);
    });
    tag_diagnostics(into, diag_from, path);
}

void load_quotes(const std::filesystem::path& path, const FormatDescriptor& format, ParsedQuotes& into) {
    check_quote_format(format);
    const std::string data = read_file(path);
    const std::size_t diag_from = into.diagnostics.size();
    parse_lines(data, format, into, [&](const Fields& f, QuoteTick& tick, RowContext& ctx) {
        return quote_row(format, f, tick, ctx);
    });
    tag_diagnostics(into, diag_from, path);
}

}  // namespace uee
