#ifndef RAILS_CSV_HPP
#define RAILS_CSV_HPP

#include <string>
#include <vector>

namespace rails {

/// Minimal RFC-4180-ish CSV support: comma separated, double quotes with ""
/// escapes, no embedded newlines.
namespace csv {

std::vector<std::string> split_line(const std::string& line, long line_number = -1);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column_index(const std::string& name) const;  // -1 when absent
};

Table read_file(const std::string& path);

std::string escape(const std::string& field);

/// Doubles rendered with 17 significant digits so round-trips are exact.
std::string format_double(double value);

}  // namespace csv

}  // namespace rails

#endif  // RAILS_CSV_HPP
