#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ttsim::csv {

// 12 significant digits, "inf"/"-inf"/"nan" spelled out. Output never depends on the locale.
std::string number(double v);
std::string integer(std::int64_t v);
std::string boolean(bool v);
std::string optional_number(const std::optional<double>& v);  // empty cell when absent

class Table {
 public:
  explicit Table(std::vector<std::string> header);

  void add_row(std::vector<std::string> cells);
  std::size_t rows() const noexcept { return rows_.size(); }
  const std::vector<std::string>& header() const noexcept { return header_; }
  const std::vector<std::vector<std::string>>& data() const noexcept { return rows_; }

  // LF line endings, comma separated, cells quoted only when they need it.
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace ttsim::csv
