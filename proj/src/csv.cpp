#include "ttsim/csv.hpp"

#include <cmath>
#include <cstdio>

#include "ttsim/errors.hpp"

namespace ttsim::csv {

std::string number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // folds -0 into 0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string integer(std::int64_t v) { return std::to_string(v); }

std::string boolean(bool v) { return v ? "true" : "false"; }

std::string optional_number(const std::optional<double>& v) { return v ? number(*v) : std::string(); }

Table::Table(std::vector<std::string> header) : header_(std::move(header)) {}

void Table::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size())
    throw Error(ErrorKind::InvalidArgument, "row has " + std::to_string(cells.size()) + " cells, header has " +
                                                std::to_string(header_.size()));
  rows_.push_back(std::move(cells));
}

namespace {
void put(std::string& out, const std::string& cell) {
  if (cell.find_first_of(",\"\n\r") == std::string::npos) {
    out += cell;
    return;
  }
  out += '"';
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
}

void put_line(std::string& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    put(out, cells[i]);
  }
  out += '\n';
}
}  // namespace

std::string Table::str() const {
  std::string out;
  put_line(out, header_);
  for (const auto& row : rows_) put_line(out, row);
  return out;
}

}  // namespace ttsim::csv
