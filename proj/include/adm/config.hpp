#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace adm {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat key=value experiment configuration. Every key has a default; keys not
// in the schema are rejected. '#' starts a comment.
class Config {
 public:
  Config();

  static Config parse(std::string_view text);
  static Config load(const std::filesystem::path& path);

  /// Throws ConfigError for unknown keys.
  void set(const std::string& key, const std::string& value);
  void merge(const Config& other);  // values explicitly set in `other` win

  const std::string& get(const std::string& key) const;
  double get_double(const std::string& key) const;
  std::int64_t get_int(const std::string& key) const;
  std::uint64_t get_uint(const std::string& key) const;
  std::vector<std::string> get_list(const std::string& key) const;
  std::vector<double> get_double_list(const std::string& key) const;
  std::vector<int> get_int_list(const std::string& key) const;
  /// snr_db_min..snr_db_max inclusive in snr_db_step increments.
  std::vector<double> snr_grid() const;

  const std::map<std::string, std::string>& values() const { return values_; }
  /// Canonical text of every key that affects results.
  std::string canonical(std::string_view command) const;
  /// 64-bit FNV-1a of canonical(command), as 16 hex digits.
  std::string hash(std::string_view command) const;

  static const std::map<std::string, std::string>& defaults();

 private:
  std::map<std::string, std::string> values_;
  std::map<std::string, bool> explicit_;
};

std::uint64_t fnv1a64(std::string_view data);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// First line of every CSV the CLI writes.
std::string csv_hash_line(const Config& cfg, std::string_view command);

}  // namespace adm
