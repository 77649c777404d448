#include "staticlab/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "staticlab/errors.hpp"

namespace staticlab {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

nlohmann::ordered_json json_number(double x) {
  if (!std::isfinite(x)) return format_double(x);
  return x;
}

nlohmann::ordered_json json_array(const std::vector<double>& xs) {
  auto arr = nlohmann::ordered_json::array();
  for (double x : xs) arr.push_back(json_number(x));
  return arr;
}

namespace {

void emit(const nlohmann::ordered_json& j, std::ostringstream& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        out << "{}";
        return;
      }
      out << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out << ",\n";
        first = false;
        out << inner << nlohmann::json(it.key()).dump() << ": ";
        emit(it.value(), out, indent + 1);
      }
      out << "\n" << pad << "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        out << "[]";
        return;
      }
      out << "[\n";
      bool first = true;
      for (const auto& v : j) {
        if (!first) out << ",\n";
        first = false;
        out << inner;
        emit(v, out, indent + 1);
      }
      out << "\n" << pad << "]";
      return;
    }
    case nlohmann::json::value_t::number_float:
      out << format_double(j.get<double>());
      return;
    default:
      out << j.dump();
  }
}

}  // namespace

std::string dump_json(const nlohmann::ordered_json& doc) {
  std::ostringstream out;
  emit(doc, out, 0);
  out << "\n";
  return out.str();
}

void CsvTable::add_row(const std::vector<double>& row) {
  if (row.size() != columns_.size()) {
    fail(ErrorCode::Parameter, "CSV row has " + std::to_string(row.size()) + " fields, expected " +
                                   std::to_string(columns_.size()));
  }
  rows_.push_back(row);
}

std::string CsvTable::str() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << columns_[i];
  out << "\n";
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << "\n";
  }
  return out.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) fail(ErrorCode::Io, "cannot open '" + tmp.string() + "' for writing");
    f << contents;
    f.flush();
    if (!f) fail(ErrorCode::Io, "write to '" + tmp.string() + "' failed");
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    fail(ErrorCode::Io, "cannot move report into '" + path.string() + "'");
  }
}

}  // namespace staticlab
