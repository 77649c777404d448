#pragma once

// Serialization helpers shared by every report: 17-significant-digit number
// formatting, JSON documents tagged with the schema version, CSV tables, and
// atomic file writes.

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace staticlab {

inline constexpr const char* kSchemaVersion = "staticlab/1";

std::string format_double(double x);

// JSON number that round-trips exactly. Non-finite values become strings
// ("inf", "-inf", "nan") since JSON has no representation for them.
nlohmann::ordered_json json_number(double x);
nlohmann::ordered_json json_array(const std::vector<double>& xs);

// Deterministic text rendering (sorted insertion order, 2-space indent, every
// double at 17 significant digits).
std::string dump_json(const nlohmann::ordered_json& doc);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}
  void add_row(const std::vector<double>& row);
  std::string str() const;
  std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<double>> rows_;
};

// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace staticlab
