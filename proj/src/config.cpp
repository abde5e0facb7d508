#include "hierlab/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "hierlab/errors.hpp"

namespace hierlab {

namespace {

std::size_t first_non_space(std::string_view s, std::size_t from = 0) {
  while (from < s.size() && std::isspace(static_cast<unsigned char>(s[from]))) ++from;
  return from;
}

std::string_view trim_right(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool valid_name(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
  return true;
}

template <class T>
bool parse_number(std::string_view s, T& out) {
  s = trim_right(s.substr(first_non_space(s)));
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

bool parse_u64(std::string_view s, std::uint64_t& out) {
  s = trim_right(s.substr(first_non_space(s)));
  int base = 10;
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    s.remove_prefix(2);
    base = 16;
  }
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out, base);
  return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t comma = s.find(',', start);
    const std::size_t end = comma == std::string_view::npos ? s.size() : comma;
    parts.push_back(s.substr(start, end - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return parts;
}

}  // namespace

Config Config::parse(std::string_view text) {
  Config cfg;
  cfg.text_ = std::string(text);
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const std::size_t b = first_non_space(line);
    if (b < line.size() && line[b] != '#' && line[b] != ';') {
      const int col = static_cast<int>(b) + 1;
      if (line[b] == '[') {
        const std::size_t close = line.find(']', b);
        if (close == std::string_view::npos)
          throw ConfigError("unterminated section header", line_no, col);
        if (first_non_space(line, close + 1) != line.size())
          throw ConfigError("trailing characters after section header", line_no,
                            static_cast<int>(close) + 2);
        std::string_view name = line.substr(b + 1, close - b - 1);
        const std::size_t nb = first_non_space(name);
        name = trim_right(name.substr(nb));
        if (!valid_name(name)) throw ConfigError("invalid section name", line_no, col + 1);
        section = std::string(name);
      } else {
        const std::size_t eq = line.find('=', b);
        if (eq == std::string_view::npos)
          throw ConfigError("expected key = value", line_no, static_cast<int>(line.size()) + 1);
        const std::string_view key = trim_right(line.substr(b, eq - b));
        if (!valid_name(key)) throw ConfigError("invalid key name", line_no, col);
        if (section.empty()) throw ConfigError("key outside of any section", line_no, col);
        const std::size_t vb = first_non_space(line, eq + 1);
        const std::string full = section + "." + std::string(key);
        if (cfg.entries_.count(full)) throw ConfigError("duplicate key " + full, line_no, col);
        cfg.entries_[full] = Entry{std::string(trim_right(line.substr(std::min(vb, line.size())))),
                                   line_no, static_cast<int>(vb) + 1, col};
      }
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string(), 0, 0);
  std::ostringstream os;
  os << in.rdbuf();
  return parse(os.str());
}

void Config::reject(const std::string& key, const std::string& what) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError(key + ": " + what, 0, 0);
  throw ConfigError(key + ": " + what, it->second.line, it->second.column);
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second.value;
}

double Config::get_double(const std::string& key, double fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  double v = 0;
  if (!parse_number(it->second.value, v)) reject(key, "expected a real number");
  return v;
}

int Config::get_int(const std::string& key, int fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  int v = 0;
  if (!parse_number(it->second.value, v)) reject(key, "expected an integer");
  return v;
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  std::uint64_t v = 0;
  if (!parse_u64(it->second.value, v)) reject(key, "expected an unsigned 64-bit integer");
  return v;
}

std::vector<double> Config::get_doubles(const std::string& key,
                                        const std::vector<double>& fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  std::vector<double> out;
  for (auto part : split_list(it->second.value)) {
    double v = 0;
    if (!parse_number(part, v)) reject(key, "expected a comma-separated list of reals");
    out.push_back(v);
  }
  return out;
}

std::vector<int> Config::get_ints(const std::string& key, const std::vector<int>& fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  std::vector<int> out;
  for (auto part : split_list(it->second.value)) {
    int v = 0;
    if (!parse_number(part, v)) reject(key, "expected a comma-separated list of integers");
    out.push_back(v);
  }
  return out;
}

void Config::reject_unknown(const std::set<std::string>& allowed) const {
  const std::string* first = nullptr;
  for (const auto& [key, e] : entries_)
    if (!allowed.count(key) && (!first || e.line < entries_.at(*first).line)) first = &key;
  if (first) {
    const auto& e = entries_.at(*first);
    throw ConfigError("unknown key " + *first, e.line, e.key_column);
  }
}

}  // namespace hierlab
