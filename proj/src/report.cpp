#include "boxsim/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace boxsim {

CsvWriter::CsvWriter(std::vector<std::string> columns)
    : columns_(std::move(columns)) {}

std::string CsvWriter::format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

void CsvWriter::add_row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_.size())
    throw std::invalid_argument("CsvWriter: cell count does not match header");
  rows_.push_back(cells);
}

void CsvWriter::add_row_mixed(const std::vector<nlohmann::json>& cells) {
  std::vector<std::string> row;
  row.reserve(cells.size());
  for (const auto& c : cells) {
    if (c.is_number_float())
      row.push_back(format_number(c.get<double>()));
    else if (c.is_number_integer())
      row.push_back(std::to_string(c.get<std::int64_t>()));
    else if (c.is_string())
      row.push_back(c.get<std::string>());
    else if (c.is_boolean())
      row.push_back(c.get<bool>() ? "1" : "0");
    else
      throw std::invalid_argument("CsvWriter: unsupported cell type");
  }
  add_row(row);
}

namespace {

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out.push_back(sep);
    out += parts[i];
  }
  return out;
}

}  // namespace

std::string CsvWriter::str() const {
  std::string out = join(columns_, ',');
  out.push_back('\n');
  for (const auto& row : rows_) {
    out += join(row, ',');
    out.push_back('\n');
  }
  return out;
}

void CsvWriter::write(const std::string& path) const {
  write_text_file(path, str());
}

void CsvWriter::write_gnuplot(const std::string& path) const {
  std::string out = "# " + join(columns_, ' ') + "\n";
  for (const auto& row : rows_) {
    out += join(row, ' ');
    out.push_back('\n');
  }
  write_text_file(path, out);
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << contents;
  os.flush();
  if (!os) throw std::runtime_error("write failed: " + path);
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

}  // namespace boxsim
