#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace hierlab {

inline constexpr int kSchemaVersion = 1;

struct CsvTable {
  std::string name;  // file stem
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  std::string render() const;
};

// Shortest round-trip decimal form; "nan"/"inf" spelled out.
std::string format_number(double value);

std::string sha256_hex(std::string_view data);

// Writes to a sibling temporary file and renames it over the target.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

nlohmann::json load_report(const std::filesystem::path& path);

// One report is returned unchanged. Several are returned as an array of reports, each
// tagged with its source path. Throws SchemaMismatch on missing or differing versions.
nlohmann::json report_merge(const std::vector<nlohmann::json>& reports,
                            const std::vector<std::string>& sources);

}  // namespace hierlab
