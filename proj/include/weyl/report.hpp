#pragma once

// Deterministic report emission: JSON with insertion-ordered keys and doubles printed
// with 17 significant digits, and plain CSV.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "weyl/extremal.hpp"
#include "weyl/lemmas.hpp"

namespace weyl::report {

using Json = nlohmann::ordered_json;

/// %.17g; non-finite values become "inf", "-inf" or "nan".
std::string format_double(double v);

/// Pretty JSON (2-space indent, trailing newline). Non-finite doubles are written as
/// the strings above since JSON has no literal for them.
std::string dump(const Json& j);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
std::string to_csv(const CsvTable& table);
/// Throws ErrorKind::Format on ragged rows or an empty file.
CsvTable parse_csv(const std::string& text);

/// Writes atomically enough for our purposes; unwritable paths raise ErrorKind::Resource.
void write_file(const std::filesystem::path& path, const std::string& contents);
/// Missing or unreadable files raise ErrorKind::Format.
std::string read_file(const std::filesystem::path& path);

Json to_json(const Witness& w);
Json to_json(const ConstantEstimate& e);
Json to_json(const SearchWitness& w);
Json to_json(const GrowthFit& f);
Json to_json(const PipelineReport& r);
Json to_json(const ConditionReport& r);
Json to_json(const std::vector<CwwRow>& rows);

}  // namespace weyl::report
