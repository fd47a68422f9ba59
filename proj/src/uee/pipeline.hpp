#pragma once

// Batch runs behind the command-line front end. Streams are processed by a
// worker pool and merged in StreamKey order, so the output does not depend
// on the number of workers.

#include "uee/detector.hpp"
#include "uee/mechanism.hpp"
#include "uee/output.hpp"
#include "uee/synth.hpp"

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace uee {

enum class Command { detect, mechanism, recover, report, synth };

std::string_view to_string(Command command);
std::optional<Command> parse_command(std::string_view text);

struct RunConfig {
    std::filesystem::path trades;   // file or directory of files
    std::filesystem::path quotes;
    std::filesystem::path sectors;
    std::filesystem::path events_file;  // reuse events instead of detecting
    std::filesystem::path out = ".";
    std::string trade_format;       // column names, see FormatDescriptor::from_names
    std::string quote_format;
    UeeCriterion criterion;
    std::size_t recovery_n = 100;
    double recovery_upper = 0.8;
    double recovery_lower = 0.2;
    JumpThresholds jumps;
    double histogram_bin = 0.001;
    unsigned jobs = 1;
    BundleConfig synth;             // synth.seed doubles as the run seed

    void validate() const;  // throws Error(invalid_argument)
    // Everything that determines the output; paths of the output directory
    // and the worker count are left out.
    Json metadata(Command command) const;
};

struct RunResult {
    std::size_t streams = 0;
    std::size_t trades = 0;
    std::size_t events = 0;
    std::size_t rejected_rows = 0;
    std::vector<std::filesystem::path> written;
};

RunResult run_command(Command command, const RunConfig& config);

// Files behind an input argument: the file itself, or the regular files of a
// directory in name order. Throws Error(empty_input, "no input files").
std::vector<std::filesystem::path> input_files(const std::filesystem::path& path);

// Calls fn(i) for i in [0, n) on up to `jobs` threads.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn);

// Error code to process exit status: 1 usage, 2 input/output, 3 internal.
int exit_status(ErrorCode code);

}  // namespace uee
