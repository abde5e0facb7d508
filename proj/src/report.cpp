#include "hierlab/report.hpp"

#include <openssl/evp.h>
#include <unistd.h>

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "hierlab/errors.hpp"

namespace hierlab {

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header.size())
    throw ContractViolation("CSV row width " + std::to_string(row.size()) + " does not match header " +
                            std::to_string(header.size()));
  rows.push_back(std::move(row));
}

std::string CsvTable::render() const {
  std::string out;
  auto emit = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  emit(header);
  for (const auto& r : rows) emit(r);
  return out;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf.data(), ptr);
}

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xF];
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write to " + tmp.string() + " failed");
  }
  std::filesystem::rename(tmp, path);
}

nlohmann::json load_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read report " + path.string());
  return nlohmann::json::parse(in);
}

namespace {

int schema_of(const nlohmann::json& r, const std::string& source) {
  if (!r.is_object() || !r.contains("schema_version") || !r["schema_version"].is_number_integer())
    throw SchemaMismatch(source + ": missing schema_version");
  return r["schema_version"].get<int>();
}

}  // namespace

nlohmann::json report_merge(const std::vector<nlohmann::json>& reports,
                            const std::vector<std::string>& sources) {
  if (reports.empty()) throw ContractViolation("nothing to merge");
  if (sources.size() != reports.size()) throw ContractViolation("one source per report required");
  const int version = schema_of(reports.front(), sources.front());
  for (std::size_t i = 1; i < reports.size(); ++i) {
    const int v = schema_of(reports[i], sources[i]);
    if (v != version)
      throw SchemaMismatch(sources[i] + ": schema_version " + std::to_string(v) + " differs from " +
                           std::to_string(version) + " in " + sources.front());
  }
  if (reports.size() == 1) return reports.front();
  nlohmann::json merged = nlohmann::json::array();
  for (std::size_t i = 0; i < reports.size(); ++i) {
    nlohmann::json entry = reports[i];
    entry["provenance"] = sources[i];
    merged.push_back(std::move(entry));
  }
  return merged;
}

}  // namespace hierlab
