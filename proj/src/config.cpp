#include "adm/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include <unistd.h>

namespace adm {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Keys that never change the bytes of an output file.
bool presentation_only(const std::string& key) { return key == "out" || key == "workers"; }

}  // namespace

const std::map<std::string, std::string>& Config::defaults() {
  static const std::map<std::string, std::string> d = {
      {"scheme", "dpsk"},
      {"variant", "rule"},
      {"method", "analytic"},
      {"betas", "1,2,3,4"},
      {"beta", "adaptive"},
      {"ring_ratio", "2"},
      {"channel", "rayleigh"},
      {"snr_db_min", "0"},
      {"snr_db_max", "30"},
      {"snr_db_step", "2"},
      {"avg_snr_db", "15"},
      {"trials", "1000000"},
      {"seed", "1"},
      {"workers", "0"},
      {"target_ber", "1e-4"},
      {"lt_k", "1000"},
      {"lt_c", "0.1"},
      {"lt_delta", "0.5"},
      {"lt_epsilon", "0.3"},
      {"coherence_len", "2"},
      {"max_pairs", "1000000"},
      {"transcript_format", "csv"},
      {"out", ""},
  };
  return d;
}

Config::Config() : values_(defaults()) {}

void Config::set(const std::string& key, const std::string& value) {
  if (!values_.count(key)) throw ConfigError("unknown config key '" + key + "'");
  values_[key] = value;
  explicit_[key] = true;
}

void Config::merge(const Config& other) {
  for (const auto& [k, on] : other.explicit_)
    if (on) set(k, other.values_.at(k));
}

Config Config::parse(std::string_view text) {
  Config c;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(std::string_view(t).substr(0, eq));
    const std::string val = trim(std::string_view(t).substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    c.set(key, val);
  }
  return c;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

const std::string& Config::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown config key '" + key + "'");
  return it->second;
}

double Config::get_double(const std::string& key) const {
  const std::string& s = get(key);
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected a number, got '" + s + "'");
  }
}

std::int64_t Config::get_int(const std::string& key) const {
  const std::string& s = get(key);
  std::int64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw ConfigError("key '" + key + "': expected an integer, got '" + s + "'");
  return v;
}

std::uint64_t Config::get_uint(const std::string& key) const {
  const std::int64_t v = get_int(key);
  if (v < 0) throw ConfigError("key '" + key + "' must be non-negative");
  return static_cast<std::uint64_t>(v);
}

std::vector<std::string> Config::get_list(const std::string& key) const {
  std::vector<std::string> out;
  std::stringstream ss(get(key));
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  if (out.empty()) throw ConfigError("key '" + key + "' is empty");
  return out;
}

std::vector<double> Config::get_double_list(const std::string& key) const {
  std::vector<double> out;
  for (const auto& s : get_list(key)) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(s, &pos));
      if (pos != s.size()) throw std::invalid_argument(s);
    } catch (const std::exception&) {
      throw ConfigError("key '" + key + "': bad number '" + s + "'");
    }
  }
  return out;
}

std::vector<int> Config::get_int_list(const std::string& key) const {
  std::vector<int> out;
  for (const auto& s : get_list(key)) {
    int v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
      throw ConfigError("key '" + key + "': bad integer '" + s + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<double> Config::snr_grid() const {
  const double lo = get_double("snr_db_min"), hi = get_double("snr_db_max");
  const double step = get_double("snr_db_step");
  if (!(step > 0.0)) throw ConfigError("snr_db_step must be positive");
  if (!(hi >= lo)) throw ConfigError("snr_db_max must be >= snr_db_min");
  std::vector<double> g;
  const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  for (long i = 0; i <= n; ++i) g.push_back(lo + static_cast<double>(i) * step);
  return g;
}

std::string Config::canonical(std::string_view command) const {
  std::string s = "command=" + std::string(command) + "\n";
  for (const auto& [k, v] : values_)
    if (!presentation_only(k)) s += k + "=" + v + "\n";
  return s;
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string Config::hash(std::string_view command) const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical(command))));
  return buf;
}

std::string csv_hash_line(const Config& cfg, std::string_view command) {
  return "# config_hash=" + cfg.hash(command) + " command=" + std::string(command) + "\n";
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    f << content;
    f.flush();
    if (!f) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw std::runtime_error("write failed for '" + tmp.string() + "'");
    }
  }
  fs::rename(tmp, path);
}

}  // namespace adm
