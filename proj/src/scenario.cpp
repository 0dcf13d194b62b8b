#include "ttsim/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <initializer_list>
#include <map>
#include <sstream>

#include "ttsim/errors.hpp"

namespace ttsim {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(std::string_view value, std::size_t line) {
  std::vector<std::string> out;
  if (trim(value).empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = value.find(',', start);
    const auto item = trim(value.substr(start, comma == std::string_view::npos ? value.npos : comma - start));
    if (item.empty()) throw ParseError(line, "empty item in list");
    out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_double(std::string_view text, std::size_t line, std::string_view key) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw ParseError(line, "'" + std::string(key) + "' expects a number, got '" + std::string(text) + "'");
  return v;
}

std::uint64_t parse_unsigned(std::string_view text, std::size_t line, std::string_view key) {
  text = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw ParseError(line, "'" + std::string(key) + "' expects a non-negative integer, got '" + std::string(text) + "'");
  return v;
}

// "name(a, b, c)" -> {name, [a, b, c]}; a bare word has no arguments.
std::pair<std::string, std::vector<std::string>> parse_call(std::string_view value, std::size_t line) {
  value = trim(value);
  const auto open = value.find('(');
  if (open == std::string_view::npos) return {std::string(value), {}};
  if (value.back() != ')') throw ParseError(line, "missing ')' in '" + std::string(value) + "'");
  return {std::string(trim(value.substr(0, open))), split_list(value.substr(open + 1, value.size() - open - 2), line)};
}

UniverseSpec parse_universe(std::string_view value, std::size_t line) {
  const auto [name, args] = parse_call(value, line);
  UniverseSpec spec;
  auto expect_args = [&](std::size_t n, const char* usage) {
    if (args.size() != n) throw ParseError(line, std::string("expected ") + usage);
  };
  if (name == "explicit") {
    expect_args(0, "'explicit' without arguments");
    spec.kind = UniverseSpec::Kind::Explicit;
  } else if (name == "uniform") {
    expect_args(1, "uniform(n)");
    spec.kind = UniverseSpec::Kind::Uniform;
    spec.n = parse_unsigned(args[0], line, "uniform");
  } else if (name == "zipf") {
    expect_args(2, "zipf(n, exponent)");
    spec.kind = UniverseSpec::Kind::Zipf;
    spec.n = parse_unsigned(args[0], line, "zipf");
    spec.exponent = parse_double(args[1], line, "zipf");
  } else if (name == "dirichlet") {
    expect_args(3, "dirichlet(n, concentration, seed)");
    spec.kind = UniverseSpec::Kind::Dirichlet;
    spec.n = parse_unsigned(args[0], line, "dirichlet");
    spec.concentration = parse_double(args[1], line, "dirichlet");
    spec.seed = parse_unsigned(args[2], line, "dirichlet");
  } else {
    throw ParseError(line, "unknown universe '" + name + "' (expected uniform, zipf, dirichlet or explicit)");
  }
  if (spec.kind != UniverseSpec::Kind::Explicit && spec.n == 0) throw ParseError(line, "universe needs n >= 1");
  return spec;
}

const std::vector<std::string_view> kKnownKeys = {
    "format",   "name",       "universe", "ids",           "probs",       "s_star",   "s_star_mass",
    "s_star_top", "s_hat",    "verifier_j", "verifier_s_ver", "verifier_tol", "episodes", "seed"};

}  // namespace

ScenarioFile parse_scenario(std::string_view text) {
  std::map<std::string, std::pair<std::string, std::size_t>> entries;
  std::size_t line_no = 0;
  bool seen_format = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ParseError(line_no, "missing key before '='");
    if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) == kKnownKeys.end())
      throw ParseError(line_no, "unknown key '" + key + "'");
    if (!seen_format) {
      if (key != "format") throw ParseError(line_no, "the first entry must be 'format = " + std::string(kScenarioFormat) + "'");
      if (value != kScenarioFormat)
        throw ParseError(line_no, "unsupported format '" + value + "' (this build reads " + std::string(kScenarioFormat) + ")");
      seen_format = true;
    }
    if (!entries.emplace(key, std::make_pair(value, line_no)).second)
      throw ParseError(line_no, "duplicate key '" + key + "'");
  }
  if (!seen_format) throw ParseError(line_no == 0 ? 1 : line_no, "empty scenario (missing format header)");

  ScenarioFile f;
  f.source = std::string(text);
  for (const auto& [key, entry] : entries) f.key_lines[key] = entry.second;
  auto get = [&](const char* key) -> const std::pair<std::string, std::size_t>* {
    auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second;
  };

  if (auto e = get("name")) f.name = e->first;

  const auto* uni = get("universe");
  if (!uni) throw ParseError(line_no, "missing 'universe'");
  f.universe = parse_universe(uni->first, uni->second);
  const auto* ids = get("ids");
  const auto* probs = get("probs");
  if (f.universe.kind == UniverseSpec::Kind::Explicit) {
    if (!probs) throw ParseError(uni->second, "explicit universe needs 'probs'");
    for (const auto& p : split_list(probs->first, probs->second))
      f.universe.probs.push_back(parse_double(p, probs->second, "probs"));
    if (ids) {
      f.universe.ids = split_list(ids->first, ids->second);
      if (f.universe.ids.size() != f.universe.probs.size())
        throw ParseError(ids->second, "'ids' has " + std::to_string(f.universe.ids.size()) + " entries but 'probs' has " +
                                          std::to_string(f.universe.probs.size()));
    }
    f.universe.n = f.universe.probs.size();
  } else if (ids || probs) {
    throw ParseError((ids ? ids : probs)->second, "'ids'/'probs' are only allowed with 'universe = explicit'");
  }

  const auto* star = get("s_star");
  const auto* star_mass = get("s_star_mass");
  const auto* star_top = get("s_star_top");
  const int star_count = (star != nullptr) + (star_mass != nullptr) + (star_top != nullptr);
  if (star_count != 1)
    throw ParseError(star_count ? (star ? star : star_mass ? star_mass : star_top)->second : line_no,
                     "give exactly one of 's_star', 's_star_mass', 's_star_top'");
  if (star) f.s_star.members = split_list(star->first, star->second);
  if (star_mass) f.s_star.target_mass = parse_double(star_mass->first, star_mass->second, "s_star_mass");
  if (star_top) f.s_star.top = parse_unsigned(star_top->first, star_top->second, "s_star_top");

  const auto* hat = get("s_hat");
  const auto* vj = get("verifier_j");
  const auto* vs = get("verifier_s_ver");
  const auto* vt = get("verifier_tol");
  if (hat) {
    if (vj || vs || vt) throw ParseError(hat->second, "'s_hat' cannot be combined with verifier targets");
    f.verifier.members = split_list(hat->first, hat->second);
  } else {
    if (!vj || !vs) throw ParseError(line_no, "give either 's_hat' or both 'verifier_j' and 'verifier_s_ver'");
    f.verifier.target_j = parse_double(vj->first, vj->second, "verifier_j");
    f.verifier.target_s_ver = parse_double(vs->first, vs->second, "verifier_s_ver");
    if (vt) {
      f.verifier.tol = parse_double(vt->first, vt->second, "verifier_tol");
      if (!(f.verifier.tol > 0.0)) throw ParseError(vt->second, "'verifier_tol' must be positive");
    }
  }

  if (auto e = get("episodes")) {
    f.episodes = parse_unsigned(e->first, e->second, "episodes");
    if (f.episodes < 2) throw ParseError(e->second, "'episodes' must be at least 2");
  }
  if (auto e = get("seed")) f.seed = parse_unsigned(e->first, e->second, "seed");
  return f;
}

ScenarioFile load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Usage, "cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

namespace {

// Semantic errors (unknown ids, bad probabilities) are reported against the line that caused them.
template <class F>
auto at_line(const ScenarioFile& f, std::initializer_list<const char*> keys, F&& build) {
  try {
    return build();
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Membership && e.kind() != ErrorKind::InvalidArgument) throw;
    for (const char* k : keys)
      if (auto it = f.key_lines.find(k); it != f.key_lines.end()) throw ParseError(it->second, e.what());
    throw;
  }
}

}  // namespace

Scenario build_scenario(const ScenarioFile& f) {
  auto universe = at_line(f, {"probs", "universe"}, [&] {
    switch (f.universe.kind) {
      case UniverseSpec::Kind::Uniform: return ResponseUniverse::uniform(f.universe.n);
      case UniverseSpec::Kind::Zipf: return ResponseUniverse::zipf(f.universe.n, f.universe.exponent);
      case UniverseSpec::Kind::Dirichlet:
        return ResponseUniverse::dirichlet(f.universe.n, f.universe.concentration, f.universe.seed);
      case UniverseSpec::Kind::Explicit: {
        auto ids = f.universe.ids;
        if (ids.empty())
          for (std::size_t i = 0; i < f.universe.probs.size(); ++i) ids.push_back("y" + std::to_string(i));
        return ResponseUniverse(std::move(ids), f.universe.probs);
      }
    }
    throw Error(ErrorKind::InvalidArgument, "unknown universe kind");
  });

  VerifierSet s_star = at_line(f, {"s_star", "s_star_mass", "s_star_top"}, [&] {
    if (f.s_star.target_mass) return greedy_fill(universe, *f.s_star.target_mass);
    if (f.s_star.top) return top_k(universe, *f.s_star.top);
    return VerifierSet::from_ids(universe, f.s_star.members);
  });

  // Infeasible or too-coarse verifier targets keep their own error kinds.
  VerifierSet s_hat = at_line(f, {"s_hat", "verifier_j"}, [&] {
    if (f.verifier.members) return VerifierSet::from_ids(universe, *f.verifier.members);
    return construct_verifier(universe, s_star, f.verifier.target_j, f.verifier.target_s_ver, f.verifier.tol).set;
  });

  RocProfile roc = roc_of(universe, s_star, s_hat);
  return Scenario{f.name, std::move(universe), std::move(s_star), std::move(s_hat), roc, f.episodes, f.seed, f.source};
}

namespace {

constexpr std::string_view kExplicit5 = R"(format = ttsim-scenario/1
name = explicit-5
# Five hand-written responses; two are correct.
universe = explicit
ids = a, b, c, d, e
probs = 0.35, 0.25, 0.2, 0.12, 0.08
s_star = a, c
s_hat = a, d
episodes = 5000
seed = 101
)";

constexpr std::string_view kUniform6 = R"(format = ttsim-scenario/1
name = uniform-6
# A generous verifier: accepts both correct responses and one wrong one.
universe = uniform(6)
s_star = y0, y1
s_hat = y0, y1, y2
episodes = 5000
seed = 102
)";

constexpr std::string_view kDirichlet8 = R"(format = ttsim-scenario/1
name = dirichlet-8
universe = dirichlet(8, 0.8, 7)
s_star_mass = 0.4
s_hat = y0, y2, y5
episodes = 5000
seed = 103
)";

constexpr std::string_view kUniform20 = R"(format = ttsim-scenario/1
name = uniform-20
universe = uniform(20)
s_star_top = 6
verifier_j = 0.55
verifier_s_ver = 0.45
verifier_tol = 0.02
episodes = 5000
seed = 104
)";

constexpr std::string_view kZipf64 = R"(format = ttsim-scenario/1
name = zipf-64
# Default desk-scale stand-in for a pool of sampled LLM answers.
universe = zipf(64, 0.6)
s_star_mass = 0.35
verifier_j = 0.4
verifier_s_ver = 0.25
verifier_tol = 0.02
episodes = 5000
seed = 105
)";

constexpr std::string_view kRegimeS25 = R"(format = ttsim-scenario/1
name = regime-s25
# s = 0.25 with a verifier that accepts half the mass.
universe = uniform(400)
s_star_top = 100
verifier_j = 0.35
verifier_s_ver = 0.5
verifier_tol = 0.01
episodes = 5000
seed = 106
)";

constexpr std::string_view kRegimeLight = R"(format = ttsim-scenario/1
name = regime-light
# Verifier lighter than the ground truth (s_ver < s), the geometry with a falling middle regime.
universe = uniform(1000)
s_star_top = 400
verifier_j = 0.35
verifier_s_ver = 0.28
verifier_tol = 0.01
episodes = 5000
seed = 107
)";

}  // namespace

const std::vector<BundledScenario>& bundled_scenarios() {
  static const std::vector<BundledScenario> all = {
      {"explicit-5", kExplicit5}, {"uniform-6", kUniform6},   {"dirichlet-8", kDirichlet8},  {"uniform-20", kUniform20},
      {"zipf-64", kZipf64},       {"regime-s25", kRegimeS25}, {"regime-light", kRegimeLight},
  };
  return all;
}

std::optional<std::string_view> bundled_scenario_text(std::string_view name) {
  for (const auto& b : bundled_scenarios())
    if (b.name == name) return b.text;
  return std::nullopt;
}

}  // namespace ttsim
