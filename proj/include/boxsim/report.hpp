#pragma once
#include <string>
#include <vector>

#include <json.hpp>

namespace boxsim {

// Row-oriented CSV writer. Numbers are serialized with 9 significant digits
// ("%.9g"), independent of locale.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> columns);

  void add_row(const std::vector<std::string>& cells);
  // Convenience: formats doubles, keeps strings verbatim.
  void add_row_mixed(const std::vector<nlohmann::json>& cells);

  std::string str() const;                     // full CSV contents
  void write(const std::string& path) const;   // write to file
  void write_gnuplot(const std::string& path) const;  // '#'-headed .dat

  static std::string format_number(double v);

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

void write_text_file(const std::string& path, const std::string& contents);
void write_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace boxsim
