#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace strauss {

/// Shortest text representation that round-trips to the same double
/// (plain-from-to_chars; "nan"/"inf" for non-finite values).
std::string format_double(double v);

/// An ordered table of named real columns produced by a sweep, plus the
/// metadata describing how it was made. Serializes to CSV (metadata as
/// '#'-prefixed lines) and to a JSON mirror with the same content. Byte
/// output is deterministic for identical content.
struct SweepTable {
  std::string kind;
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_meta(std::string key, std::string value) {
    metadata.emplace_back(std::move(key), std::move(value));
  }
  /// First metadata value stored under key, if any.
  const std::string* find_meta(const std::string& key) const;

  std::size_t column_index(const std::string& name) const; // throws if absent
  std::vector<double> column(const std::string& name) const;

  /// FNV-1a hash over kind, metadata and column names (not data rows).
  std::uint64_t config_hash() const;

  std::string csv() const;
  std::string json() const;
};

} // namespace strauss
