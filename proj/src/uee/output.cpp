#include "uee/output.hpp"

#include "uee/tickstore.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>

namespace uee {

std::string fmt9(double value) {
    if (value == 0.0) return "0";  // no "-0"
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", value);
    return buf;
}

double round9(double value) { return std::strtod(fmt9(value).c_str(), nullptr); }

Json event_to_json(const UeeEvent& e, std::size_t id) {
    Json j;
    j["id"] = id;
    j["symbol"] = e.key.symbol;
    j["venue"] = e.key.venue;
    j["day"] = e.key.day.to_string();
    j["direction"] = std::string(to_string(e.direction));
    j["start_index"] = e.start_index;
    j["end_index"] = e.end_index;
    j["t0_uee"] = round9(e.t0_uee);
    j["t0_rec"] = round9(e.t0_rec);
    j["price_start"] = format_price(e.price_start);
    j["price_extreme"] = format_price(e.price_extreme);
    j["size"] = round9(e.size);
    j["n_trades"] = e.n_trades();
    j["end_trigger"] = std::string(to_string(e.end_trigger));
    return j;
}

UeeEvent event_from_json(const Json& j) {
    auto bad = [](const std::string& what) { return Error(ErrorCode::parse, "event record: " + what); };
    try {
        UeeEvent e;
        e.key.symbol = j.at("symbol").get<std::string>();
        e.key.venue = j.at("venue").get<std::string>();
        const auto day = Date::parse(j.at("day").get<std::string>());
        if (!day) throw bad("bad day");
        e.key.day = *day;
        const auto dir = parse_direction(j.at("direction").get<std::string>());
        if (!dir) throw bad("bad direction");
        e.direction = *dir;
        e.start_index = j.at("start_index").get<std::size_t>();
        e.end_index = j.at("end_index").get<std::size_t>();
        e.t0_uee = j.at("t0_uee").get<double>();
        e.t0_rec = j.at("t0_rec").get<double>();
        const auto ps = parse_price(j.at("price_start").get<std::string>());
        const auto pe = parse_price(j.at("price_extreme").get<std::string>());
        if (!ps || !pe) throw bad("bad price");
        e.price_start = *ps;
        e.price_extreme = *pe;
        e.size = relative_change(e.price_start, e.price_extreme);
        const auto trig = parse_end_trigger(j.at("end_trigger").get<std::string>());
        if (!trig) throw bad("bad end_trigger");
        e.end_trigger = *trig;
        if (e.end_index < e.start_index) throw bad("end_index < start_index");
        return e;
    } catch (const nlohmann::json::exception& ex) {
        throw bad(ex.what());
    }
}

std::string csv_meta_block(const Json& meta) {
    std::string out;
    for (const auto& [key, value] : meta.items()) {
        out += "# " + key + ": " + (value.is_string() ? value.get<std::string>() : value.dump()) + "\n";
    }
    return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::io, "cannot write '" + path.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorCode::io, "write failed on '" + path.string() + "'");
}

std::string events_jsonl(const std::vector<UeeEvent>& events, const Json& meta) {
    std::string out = Json{{"meta", meta}}.dump() + "\n";
    for (std::size_t id = 0; id < events.size(); ++id) out += event_to_json(events[id], id).dump() + "\n";
    return out;
}

std::string events_csv(const std::vector<UeeEvent>& events, const Json& meta) {
    std::string out = csv_meta_block(meta);
    out += "id,key,direction,t0_uee,t0_rec,size,n_trades,end_trigger\n";
    for (std::size_t id = 0; id < events.size(); ++id) {
        const auto& e = events[id];
        out += std::to_string(id) + "," + e.key.to_string() + "," + std::string(to_string(e.direction)) + "," +
               fmt9(e.t0_uee) + "," + fmt9(e.t0_rec) + "," + fmt9(e.size) + "," + std::to_string(e.n_trades()) +
               "," + std::string(to_string(e.end_trigger)) + "\n";
    }
    return out;
}

std::vector<UeeEvent> read_events_jsonl(const std::filesystem::path& path) {
    const std::string data = read_file(path);
    std::vector<UeeEvent> events;
    std::size_t pos = 0, line_no = 0;
    while (pos < data.size()) {
        std::size_t eol = data.find('\n', pos);
        if (eol == std::string::npos) eol = data.size();
        const std::string_view line(data.data() + pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
        Json record;
        try {
            record = Json::parse(line);
        } catch (const nlohmann::json::exception& ex) {
            throw Error(ErrorCode::parse, path.string() + ":" + std::to_string(line_no) + ": " + ex.what());
        }
        if (record.contains("meta")) continue;
        events.push_back(event_from_json(record));
    }
    return events;
}

}  // namespace uee
