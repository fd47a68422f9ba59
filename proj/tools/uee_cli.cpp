#include "uee/uee.h"

#include <CLI11.hpp>

#include <cstdio>
#include <deque>
#include <map>
#include <string>
#include <vector>

namespace {

struct OptionSpec {
    const char* flag;
    const char* key;
    const char* help;
};

const std::vector<OptionSpec> kInputOptions = {
    {"--trades", "trades", "Trade file or directory of trade files"},
    {"--quotes", "quotes", "Quote file or directory of quote files"},
    {"--sectors", "sectors", "ticker,sector map"},
    {"--events-file", "events-file", "Reuse events.jsonl from an earlier detect run"},
    {"--format", "format", "Trade column order, e.g. venue,symbol,date,time,price,size (tsv: prefix for tabs)"},
    {"--quote-format", "quote-format", "Quote column order"},
};

const std::vector<OptionSpec> kAnalysisOptions = {
    {"--criterion.change", "criterion.change", "Minimum relative price change (default 0.008)"},
    {"--criterion.duration", "criterion.duration", "Maximum duration in seconds (default 1.5)"},
    {"--criterion.trades", "criterion.trades", "Minimum number of trades (default 10)"},
    {"--criterion.pause", "criterion.pause", "Trading pause in seconds (default 1.0)"},
    {"--recovery.n", "recovery.n", "Trades after the extremum to follow (default 100)"},
    {"--recovery.upper", "recovery.upper", "eta threshold for strong recovery (default 0.8)"},
    {"--recovery.lower", "recovery.lower", "eta threshold for weak recovery (default 0.2)"},
    {"--mechanism.major", "mechanism.major", "Quote jump for a major single order (default 0.005)"},
    {"--mechanism.dominant", "mechanism.dominant", "Quote jump for a dominant single order (default 0.008)"},
    {"--histogram.bin", "histogram.bin", "Bin width of the size and jump histograms (default 0.001)"},
};

const std::vector<OptionSpec> kRunOptions = {
    {"--out", "out", "Output directory (default .)"},
    {"--jobs", "jobs", "Worker threads (default 1)"},
    {"--seed", "seed", "Random seed (default 1)"},
};

const std::vector<OptionSpec> kSynthOptions = {
    {"--events", "synth.events", "Qualifying events to inject (default 3)"},
    {"--synth.near-misses", "synth.near-misses", "Sub-criterion patterns to inject (default 0)"},
    {"--synth.symbols", "synth.symbols", "Number of symbols (default 4)"},
    {"--synth.venues", "synth.venues", "Venues per symbol (default 2)"},
    {"--synth.days", "synth.days", "Trading days (default 2)"},
    {"--synth.trades", "synth.trades", "Trades per stream (default 5000)"},
    {"--synth.post-trades", "synth.post-trades", "Designed trades after each extremum (default 20)"},
    {"--synth.first-day", "synth.first-day", "First trading day, YYYY-MM-DD (default 2008-09-15)"},
};

struct Bound {
    const char* key;
    std::string value;
    CLI::Option* option = nullptr;
};

struct Subcommand {
    CLI::App* app = nullptr;
    std::deque<Bound> bound;
};

void add_options(Subcommand& sub, const std::vector<OptionSpec>& specs) {
    for (const auto& spec : specs) {
        auto& b = sub.bound.emplace_back(Bound{spec.key, {}, nullptr});
        b.option = sub.app->add_option(spec.flag, b.value, spec.help);
    }
}

int report_failure(uee_status status) {
    std::fprintf(stderr, "uee: %s: %s\n", uee_status_name(status), uee_last_error());
    return uee_exit_code(status);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Detect ultrafast extreme events in trade and quote data"};
    app.require_subcommand(1);
    bool show_config = false;
    app.add_flag("--show-config", show_config, "Print the effective configuration and exit");
    app.set_version_flag("--version", uee_version());

    const std::map<std::string, std::string> about = {
        {"detect", "Find events and write events.jsonl, events.csv and detect_summary.json"},
        {"mechanism", "Classify each event by its largest quote jump"},
        {"recover", "Recovery profiles, probability curves and level densities"},
        {"report", "Sector, co-occurrence, weekly and size statistics"},
        {"synth", "Write a synthetic trade/quote bundle with ground truth"},
    };
    std::map<std::string, Subcommand> subs;
    for (const auto& [name, text] : about) {
        auto& sub = subs[name];
        sub.app = app.add_subcommand(name, text);
        sub.app->add_flag("--show-config", show_config, "Print the effective configuration and exit");
        add_options(sub, kRunOptions);
        add_options(sub, kAnalysisOptions);
        if (name == "synth") add_options(sub, kSynthOptions);
        else add_options(sub, kInputOptions);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    std::string command;
    Subcommand* chosen = nullptr;
    for (auto& [name, sub] : subs) {
        if (sub.app->parsed()) {
            command = name;
            chosen = &sub;
        }
    }

    uee_config* config = nullptr;
    if (const auto s = uee_config_create(&config); s != UEE_OK) return report_failure(s);
    int status = 0;
    for (const auto& b : chosen->bound) {
        if (b.option->count() == 0) continue;
        if (const auto s = uee_config_set(config, b.key, b.value.c_str()); s != UEE_OK) {
            status = report_failure(s);
            break;
        }
    }
    if (status == 0 && show_config) {
        const char* json = nullptr;
        const auto s = uee_config_describe(config, command.c_str(), &json);
        if (s == UEE_OK) std::printf("%s\n", json);
        else status = report_failure(s);
    } else if (status == 0) {
        uee_run_summary summary{};
        const auto s = uee_run(config, command.c_str(), &summary);
        if (s == UEE_OK) {
            std::fprintf(stderr, "uee %s: %zu streams, %zu trades, %zu events, %zu rejected rows, %zu files\n",
                         command.c_str(), summary.streams, summary.trades, summary.events, summary.rejected_rows,
                         summary.files_written);
        } else {
            status = report_failure(s);
        }
    }
    uee_config_destroy(config);
    return status;
}
