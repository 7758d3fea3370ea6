#include "rails/csv.hpp"

#include <cstdio>
#include <fstream>

#include "rails/errors.hpp"

namespace rails {
namespace csv {

std::vector<std::string> split_line(const std::string& line, long line_number) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c == '\r') {
      // tolerate CRLF
    } else {
      cur += c;
    }
    ++i;
  }
  if (quoted) throw ParseError("unterminated quote", line_number);
  fields.push_back(cur);
  return fields;
}

int Table::column_index(const std::string& name) const {
  for (size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

Table read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  Table table;
  std::string line;
  long line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty() && in.peek() == EOF) break;
    auto fields = split_line(line, line_number);
    if (line_number == 1) {
      table.header = std::move(fields);
    } else {
      if (fields.size() != table.header.size())
        throw ParseError("row has " + std::to_string(fields.size()) + " fields, expected " +
                             std::to_string(table.header.size()) + " in '" + path + "'",
                         line_number);
      table.rows.push_back(std::move(fields));
    }
  }
  if (table.header.empty()) throw ParseError("'" + path + "' is empty");
  return table;
}

std::string escape(const std::string& field) {
  bool needs = field.find_first_of(",\"\n") != std::string::npos;
  if (!needs) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

}  // namespace csv
}  // namespace rails
