#include "fsde/csv.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace fsde {

CsvWriter::CsvWriter(const std::string& path) : out_(path) {
  if (!out_) throw std::runtime_error("CsvWriter: cannot open " + path);
}

std::string CsvWriter::format(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void CsvWriter::comment(const std::string& line) { out_ << "# " << line << "\n"; }

void CsvWriter::header(std::span<const std::string> columns) {
  for (std::size_t i = 0; i < columns.size(); ++i)
    out_ << (i ? "," : "") << columns[i];
  out_ << "\n";
}

void CsvWriter::row(std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i)
    out_ << (i ? "," : "") << format(values[i]);
  out_ << "\n";
}

void CsvWriter::row(const std::string& first, std::span<const double> rest) {
  out_ << first;
  for (double v : rest) out_ << "," << format(v);
  out_ << "\n";
}

std::vector<double> CsvTable::column(const std::string& name) const {
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c] != name) continue;
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.at(c));
    return out;
  }
  throw std::invalid_argument("CsvTable: no column named " + name);
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_csv: cannot open " + path);
  CsvTable table;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!have_header) {
      table.columns = fields;
      have_header = true;
      continue;
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) {
      try {
        row.push_back(std::stod(f));
      } catch (const std::exception&) {
        throw std::runtime_error("read_csv: non-numeric field '" + f + "'");
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace fsde
