#include "strauss/sweep_table.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace strauss {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

const std::string* SweepTable::find_meta(const std::string& key) const {
  for (const auto& [k, v] : metadata)
    if (k == key) return &v;
  return nullptr;
}

std::size_t SweepTable::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw std::invalid_argument("SweepTable: no column named '" + name + "'");
}

std::vector<double> SweepTable::column(const std::string& name) const {
  const std::size_t idx = column_index(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[idx]);
  return out;
}

std::uint64_t SweepTable::config_hash() const {
  std::uint64_t h = 1469598103934665603ull; // FNV offset basis
  auto mix = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
    h ^= 0xff;
    h *= 1099511628211ull;
  };
  mix(kind);
  for (const auto& [k, v] : metadata) {
    mix(k);
    mix(v);
  }
  for (const auto& c : columns) mix(c);
  return h;
}

std::string SweepTable::csv() const {
  std::ostringstream os;
  os << "# strauss-table v1\n";
  os << "# kind: " << kind << "\n";
  for (const auto& [k, v] : metadata) os << "# " << k << ": " << v << "\n";
  {
    std::ostringstream hex;
    hex << std::hex << config_hash();
    os << "# config_hash: " << hex.str() << "\n";
  }
  for (std::size_t i = 0; i < columns.size(); ++i)
    os << columns[i] << (i + 1 < columns.size() ? "," : "");
  os << "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i)
      os << format_double(r[i]) << (i + 1 < r.size() ? "," : "");
    os << "\n";
  }
  return os.str();
}

std::string SweepTable::json() const {
  nlohmann::ordered_json j;
  j["kind"] = kind;
  nlohmann::ordered_json meta;
  for (const auto& [k, v] : metadata) meta[k] = v;
  {
    std::ostringstream hex;
    hex << std::hex << config_hash();
    meta["config_hash"] = hex.str();
  }
  j["metadata"] = meta;
  j["columns"] = columns;
  auto cells = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    auto row = nlohmann::ordered_json::array();
    for (double v : r) {
      if (std::isfinite(v))
        row.push_back(v);
      else
        row.push_back(nullptr);
    }
    cells.push_back(std::move(row));
  }
  j["rows"] = std::move(cells);
  return j.dump(2) + "\n";
}

} // namespace strauss
