#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace hierlab {

// Sectioned key=value text. Keys are addressed as "section.key". Lines starting with
// '#' or ';' are comments. Errors carry 1-based line and column.
class Config {
 public:
  struct Entry {
    std::string value;
    int line = 0;
    int column = 0;  // column of the value
    int key_column = 0;
  };

  static Config parse(std::string_view text);
  static Config load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  const std::map<std::string, Entry>& entries() const noexcept { return entries_; }
  const std::string& text() const noexcept { return text_; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  std::vector<double> get_doubles(const std::string& key, const std::vector<double>& fallback) const;
  std::vector<int> get_ints(const std::string& key, const std::vector<int>& fallback) const;

  // Throws ConfigError at the first key not in the allowed set.
  void reject_unknown(const std::set<std::string>& allowed) const;

  // Throws ConfigError at the value of key, or without a position if key is absent.
  [[noreturn]] void reject(const std::string& key, const std::string& what) const;

 private:

  std::map<std::string, Entry> entries_;
  std::string text_;
};

}  // namespace hierlab
