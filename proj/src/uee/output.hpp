#pragma once

// Serialisation helpers shared by the pipeline and the synthetic bundle
// writer. Floats go out with 9 significant digits so that reruns are
// byte-identical.

#include "uee/detector.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace uee {

using Json = nlohmann::ordered_json;

std::string fmt9(double value);
// value rounded to 9 significant digits, for JSON emission.
double round9(double value);

Json event_to_json(const UeeEvent& event, std::size_t id);
UeeEvent event_from_json(const Json& record);

// Metadata as "# key: value" lines for CSV files.
std::string csv_meta_block(const Json& meta);

void write_text_file(const std::filesystem::path& path, const std::string& content);

// JSON-lines event file: a {"meta": ...} record followed by one event per line.
std::string events_jsonl(const std::vector<UeeEvent>& events, const Json& meta);
std::string events_csv(const std::vector<UeeEvent>& events, const Json& meta);
std::vector<UeeEvent> read_events_jsonl(const std::filesystem::path& path);

}  // namespace uee
