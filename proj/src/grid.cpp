#include "ttsim/grid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

#include "ttsim/errors.hpp"

namespace ttsim {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  return s.substr(first, s.find_last_not_of(" \t") - first + 1);
}

template <typename T>
T parse_number(std::string_view token, std::string_view whole) {
  token = trim(token);
  T v{};
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (token.empty() || ec != std::errc() || ptr != token.data() + token.size())
    throw Error(ErrorKind::Usage, "bad grid '" + std::string(whole) + "': cannot read '" + std::string(token) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto at = text.find(sep, start);
    parts.push_back(text.substr(start, at == std::string_view::npos ? text.npos : at - start));
    if (at == std::string_view::npos) break;
    start = at + 1;
  }
  return parts;
}

}  // namespace

std::vector<double> parse_real_grid(std::string_view text) {
  text = trim(text);
  std::vector<double> out;
  if (text.find(':') != std::string_view::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw Error(ErrorKind::Usage, "range grid must be start:stop:step");
    const double start = parse_number<double>(parts[0], text);
    const double stop = parse_number<double>(parts[1], text);
    const double step = parse_number<double>(parts[2], text);
    if (!(step > 0.0) || stop < start) throw Error(ErrorKind::Usage, "range grid needs step > 0 and stop >= start");
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (count > 100000) throw Error(ErrorKind::Usage, "range grid has too many points");
    for (std::size_t k = 0; k < count; ++k) out.push_back(start + static_cast<double>(k) * step);
  } else {
    for (auto token : split(text, ',')) out.push_back(parse_number<double>(token, text));
  }
  for (double v : out)
    if (!std::isfinite(v)) throw Error(ErrorKind::Usage, "grid values must be finite");
  return out;
}

std::vector<std::int64_t> parse_count_grid(std::string_view text) {
  text = trim(text);
  std::vector<std::int64_t> out;
  if (text.find(':') != std::string_view::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw Error(ErrorKind::Usage, "range grid must be start:stop:step");
    const auto start = parse_number<std::int64_t>(parts[0], text);
    const auto stop = parse_number<std::int64_t>(parts[1], text);
    const auto step = parse_number<std::int64_t>(parts[2], text);
    if (step <= 0 || stop < start) throw Error(ErrorKind::Usage, "range grid needs step > 0 and stop >= start");
    for (std::int64_t v = start; v <= stop; v += step) out.push_back(v);
  } else {
    for (auto token : split(text, ',')) out.push_back(parse_number<std::int64_t>(token, text));
  }
  for (auto v : out)
    if (v < 0) throw Error(ErrorKind::Usage, "batch sizes must be >= 0");
  return out;
}

std::vector<double> auto_beta_grid(double s, double s_ver, int per_regime) {
  if (!(s > 0.0 && s < 1.0 && s_ver > 0.0 && s_ver < 1.0))
    throw Error(ErrorKind::InvalidArgument, "automatic beta grid needs both masses strictly inside (0,1)");
  if (per_regime < 2) throw Error(ErrorKind::InvalidArgument, "need at least two points per regime");
  const double lower = std::min(1.0 / s, 1.0 / s_ver);
  const double upper = std::max(1.0 / s, 1.0 / s_ver);
  const double n = per_regime;
  std::vector<double> grid;
  for (int k = 0; k < per_regime; ++k) grid.push_back(1.0 + (lower - 1.0) * k / (n - 1.0));
  grid.back() = lower;
  if (upper > lower) {
    for (int k = 1; k <= per_regime; ++k) grid.push_back(lower + (upper - lower) * k / n);
    grid.back() = upper;
  }
  for (int k = 1; k <= per_regime; ++k) grid.push_back(upper + upper * k / n);
  return grid;
}

}  // namespace ttsim
