#include "uee/output.hpp"
#include "uee/synth.hpp"
#include "uee/tickstore.hpp"

#include "../support/streams.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

namespace fs = std::filesystem;
using namespace uee;

namespace {

struct Run {
    int status;
    std::string output;
};

Run cli(const std::string& args) {
    const fs::path log = fs::temp_directory_path() / "uee_cli_test.log";
    const std::string cmd = std::string(UEE_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
    const int raw = std::system(cmd.c_str());
    Run r{WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, read_file(log)};
    return r;
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("uee_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string body(const fs::path& file) {
    std::string out;
    std::ifstream in(file);
    for (std::string line; std::getline(in, line);)
        if (!line.starts_with("#")) out += line + "\n";
    return out;
}

std::size_t lines(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

}  // namespace

TEST_CASE("synthetic bundle round-trips through detect") {
    const auto dir = scratch("roundtrip");
    REQUIRE(cli("synth --seed 4 --out " + (dir / "data").string()).status == 0);
    const auto r = cli("detect --trades " + (dir / "data" / "trades.csv").string() + " --out " + (dir / "out").string());
    REQUIRE(r.status == 0);
    const auto summary = Json::parse(read_file(dir / "out" / "detect_summary.json"));
    CHECK(summary["events"] == 3);
    CHECK(summary["meta"]["criterion"]["change"] == 0.008);

    const auto truth = Json::parse(read_file(dir / "data" / "ground_truth.json"));
    const auto events = read_events_jsonl(dir / "out" / "events.jsonl");
    REQUIRE(events.size() == truth["events"].size());
    for (std::size_t i = 0; i < events.size(); ++i) {
        CHECK(events[i].start_index == truth["events"][i]["start_index"]);
        CHECK(events[i].end_index == truth["events"][i]["end_index"]);
        CHECK(std::string(to_string(events[i].direction)) == truth["events"][i]["direction"]);
    }
}

TEST_CASE("synth with no events gives background only") {
    const auto dir = scratch("background");
    REQUIRE(cli("synth --events 0 --synth.symbols 1 --synth.days 1 --out " + dir.string()).status == 0);
    CHECK(Json::parse(read_file(dir / "ground_truth.json"))["events"].empty());
    REQUIRE(cli("detect --trades " + (dir / "trades.csv").string() + " --out " + dir.string()).status == 0);
    CHECK(Json::parse(read_file(dir / "detect_summary.json"))["events"] == 0);
}

TEST_CASE("fixed seed gives a byte-identical bundle") {
    const auto a = scratch("seed_a"), b = scratch("seed_b");
    REQUIRE(cli("synth --seed 9 --out " + a.string()).status == 0);
    REQUIRE(cli("synth --seed 9 --out " + b.string()).status == 0);
    for (const char* f : {"trades.csv", "quotes.csv", "sectors.csv", "ground_truth.json"})
        CHECK(read_file(a / f) == read_file(b / f));
}

TEST_CASE("empty input directory") {
    const auto dir = scratch("empty");
    const auto r = cli("detect --trades " + dir.string() + " --out " + (dir / "out").string());
    CHECK(r.status == 2);
    CHECK(r.output.find("no input files") != std::string::npos);
}

TEST_CASE("usage errors exit with status 1") {
    CHECK(cli("detect --no-such-flag").status == 1);
    CHECK(cli("").status == 1);
    CHECK(cli("detect --criterion.trades 1 --trades /dev/null").status == 1);
    CHECK(cli("detect --trades /no/such/file").status == 2);
}

TEST_CASE("default configuration echo") {
    const auto r = cli("detect --show-config");
    REQUIRE(r.status == 0);
    const auto j = Json::parse(r.output);
    CHECK(j["criterion"]["change"] == 0.008);
    CHECK(j["criterion"]["duration"] == 1.5);
    CHECK(j["criterion"]["trades"] == 10);
    CHECK(j["criterion"]["pause"] == 1.0);
    CHECK(j["recovery"]["n"] == 100);
    CHECK(j["recovery"]["upper"] == 0.8);
    CHECK(j["recovery"]["lower"] == 0.2);
    CHECK(j["mechanism"]["major"] == 0.005);
    CHECK(j["mechanism"]["dominant"] == 0.008);
}

TEST_CASE("report over three events in two sectors") {
    const auto dir = scratch("report");
    std::vector<UeeEvent> events(3);
    const char* symbols[] = {"AAA", "BBB", "AAA"};
    for (int i = 0; i < 3; ++i) {
        auto& e = events[static_cast<std::size_t>(i)];
        e.key = StreamKey{symbols[i], "Q", Date{2008, 12, 1}};
        e.direction = i == 1 ? Direction::spike : Direction::crash;
        e.start_index = 0;
        e.end_index = 10;
        e.t0_uee = 34200 + i;
        e.price_start = Price::from_double(100.0);
        e.price_extreme = Price::from_double(i == 1 ? 101.0 : 99.0);
        e.end_trigger = EndTrigger::trend_reversal;
    }
    write_text_file(dir / "events.jsonl", events_jsonl(events, Json::object()));
    write_text_file(dir / "sectors.csv", "ticker,sector\nAAA,Energy\nBBB,Utilities\n");
    const auto r = cli("report --events-file " + (dir / "events.jsonl").string() + " --sectors " +
                       (dir / "sectors.csv").string() + " --out " + dir.string());
    REQUIRE(r.status == 0);
    CHECK(lines(body(dir / "sectors.csv")) == 3);
    CHECK(body(dir / "cooccurrence.csv") == "k,seconds\n1,3\n");
    const auto report = Json::parse(read_file(dir / "report.json"));
    CHECK(report["total_events"] == 3);
    CHECK(report["identities"] == "ok");

    // An event smaller than the criterion allows breaks the size identity.
    events[0].price_extreme = Price::from_double(99.5);
    write_text_file(dir / "events.jsonl", events_jsonl(events, Json::object()));
    const auto bad = cli("report --events-file " + (dir / "events.jsonl").string() + " --out " + dir.string());
    CHECK(bad.status == 3);
    CHECK(bad.output.find("identity") != std::string::npos);
}

TEST_CASE("recover with a one-trade horizon and mechanism outputs") {
    const auto dir = scratch("recover");
    REQUIRE(cli("synth --seed 12 --events 6 --out " + dir.string()).status == 0);
    const std::string in = "--trades " + (dir / "trades.csv").string() + " --quotes " + (dir / "quotes.csv").string();
    REQUIRE(cli("recover --recovery.n 1 " + in + " --out " + dir.string()).status == 0);
    const auto crash = body(dir / "profiles_crash.csv");
    CHECK(crash.substr(0, crash.find('\n')) == "id,key,eta_1");
    CHECK(lines(body(dir / "curves.csv")) == 2);
    const auto spike = body(dir / "profiles_spike.csv");
    const auto truth = Json::parse(read_file(dir / "ground_truth.json"));
    std::size_t crashes = 0;
    for (const auto& e : truth["events"]) crashes += e["direction"] == "crash";
    CHECK(lines(crash) == crashes + 1);
    CHECK(lines(spike) == truth["events"].size() - crashes + 1);

    REQUIRE(cli("mechanism " + in + " --out " + dir.string()).status == 0);
    const auto h = Json::parse(read_file(dir / "mechanism_histogram.json"));
    CHECK(h["classified"] == truth["events"].size());
    CHECK(h["coverage"] == 1.0);
}

TEST_CASE("events file reuse matches fresh detection") {
    const auto dir = scratch("reuse");
    REQUIRE(cli("synth --seed 21 --events 5 --out " + dir.string()).status == 0);
    const std::string in = "--trades " + (dir / "trades.csv").string();
    REQUIRE(cli("detect " + in + " --out " + (dir / "d").string()).status == 0);
    REQUIRE(cli("recover " + in + " --out " + (dir / "fresh").string()).status == 0);
    REQUIRE(cli("recover " + in + " --events-file " + (dir / "d" / "events.jsonl").string() + " --out " +
                (dir / "reused").string())
                .status == 0);
    for (const char* f : {"profiles_crash.csv", "profiles_spike.csv", "curves.csv"})
        CHECK(body(dir / "fresh" / f) == body(dir / "reused" / f));
}

TEST_CASE("detect output matches the reference detector path") {
    const auto dir = scratch("golden");
    REQUIRE(cli("synth --seed 33 --events 8 --synth.near-misses 4 --out " + dir.string()).status == 0);
    REQUIRE(cli("detect --trades " + (dir / "trades.csv").string() + " --out " + (dir / "out").string()).status == 0);

    ParsedTrades parsed;
    load_trades(dir / "trades.csv", FormatDescriptor::trades(), parsed);
    auto streams = partition_streams(std::move(parsed));
    std::vector<UeeEvent> reference;
    for (auto& [key, trades] : streams) {
        prepare_stream(trades);
        for (auto& e : oracle_detect(key, trades)) reference.push_back(std::move(e));
    }
    CHECK(reference.size() == 8);
    CHECK(body(dir / "out" / "events.csv") == [&] {
        const auto text = events_csv(reference, Json::object());
        std::string out;
        std::istringstream in(text);
        for (std::string line; std::getline(in, line);)
            if (!line.starts_with("#")) out += line + "\n";
        return out;
    }());
}
