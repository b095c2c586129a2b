#include "betarma/io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace barma {

namespace {

// Trim ASCII whitespace and a possible UTF-8 BOM / CR.
std::string trim(std::string s) {
  if (s.size() >= 3 && s[0] == '\xEF' && s[1] == '\xBB' && s[2] == '\xBF') s.erase(0, 3);
  const char* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

bool parse_number(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  out = std::strtod(s.c_str(), &end);
  return errno == 0 && end == s.c_str() + s.size();
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',' || ch == ';') {
      fields.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  fields.push_back(trim(cur));
  return fields;
}

}  // namespace

BoundedSeries ingest_csv(const std::string& path, bool percent) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input file: " + path);

  std::vector<double> values;
  std::vector<int> bad_rows;
  std::string line;
  int row = 0;
  bool warned_date_column = false;
  bool header_allowed = true;

  while (std::getline(in, line)) {
    ++row;
    const std::string t = trim(line);
    if (t.empty()) continue;

    const auto fields = split_fields(t);
    std::string cell;
    double v = 0.0;
    if (fields.size() == 1) {
      cell = fields[0];
    } else if (fields.size() == 2) {
      // a leading non-numeric field is treated as a date/index column
      double ignored;
      if (!parse_number(fields[0], ignored) && !warned_date_column) {
        std::cerr << "note: ignoring first column of " << path
                  << " (non-numeric, treated as dates)\n";
        warned_date_column = true;
      }
      cell = fields[1];
    } else {
      throw std::runtime_error(path + ": row " + std::to_string(row) +
                               " has more than two columns");
    }

    if (!parse_number(cell, v)) {
      if (header_allowed) {
        header_allowed = false;  // a single leading header line is fine
        continue;
      }
      throw std::runtime_error(path + ": non-numeric cell at row " + std::to_string(row));
    }
    header_allowed = false;

    if (percent) v /= 100.0;
    if (!(v > 0.0 && v < 1.0)) {
      bad_rows.push_back(row);
      continue;
    }
    values.push_back(v);
  }

  if (!bad_rows.empty()) {
    std::string rows;
    for (std::size_t i = 0; i < bad_rows.size() && i < 10; ++i)
      rows += (i ? ", " : "") + std::to_string(bad_rows[i]);
    if (bad_rows.size() > 10) rows += ", ...";
    throw std::runtime_error(path + ": values outside (0,1) at rows " + rows +
                             (percent ? "" : " (percentages? pass --percent)"));
  }
  if (values.empty()) throw std::runtime_error(path + ": no data rows");

  return BoundedSeries::from_values(std::move(values));
}

void write_text_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";

  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open output file: " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("rename failed for " + path + ": " + ec.message());
  }
}

std::string series_to_csv(const BoundedSeries& y) {
  std::string out;
  char buf[64];
  for (double v : y.values) {
    std::snprintf(buf, sizeof(buf), "%.17g\n", v);
    out += buf;
  }
  return out;
}

}  // namespace barma
