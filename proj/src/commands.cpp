#include "ttsim/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "ttsim/csv.hpp"
#include "ttsim/errors.hpp"
#include "ttsim/grid.hpp"
#include "ttsim/montecarlo.hpp"
#include "ttsim/svg.hpp"

namespace ttsim {

namespace {

using csv::number;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

const char* color_of(Algorithm a) { return kPalette[static_cast<int>(a)]; }

struct Masses {
  double s;
  double s_ver;
};

Masses masses_of(const Scenario& sc) { return {mass(sc.universe, sc.s_star), mass(sc.universe, sc.s_hat)}; }

bool coverage_ok(const EstimateReport& r, CoverageBudget beta) { return r.exact_chi2 <= beta.value() - 1.0 + 1e-9; }

std::string regime_cell(const TheoryPrediction& t) { return t.regime ? to_string(*t.regime) : "undefined"; }

void require_sorted(const std::vector<double>& grid, const char* what) {
  if (grid.empty()) throw Error(ErrorKind::Usage, std::string(what) + " is empty");
  if (!std::is_sorted(grid.begin(), grid.end()))
    throw Error(ErrorKind::Usage, std::string(what) + " must be sorted ascending");
}

void require_subset(const std::vector<Algorithm>& algs, std::initializer_list<Algorithm> allowed, const char* cmd) {
  if (algs.empty()) throw Error(ErrorKind::Usage, std::string(cmd) + " needs at least one algorithm");
  for (Algorithm a : algs)
    if (std::find(allowed.begin(), allowed.end(), a) == allowed.end())
      throw Error(ErrorKind::Usage, to_string(a) + " is not available in " + cmd);
}

void add_regime_bands(svg::Chart& chart, double s, double s_ver, double x_max) {
  const double lo = std::min(1.0 / s, 1.0 / s_ver), hi = std::max(1.0 / s, 1.0 / s_ver);
  chart.bands.push_back({1.0, lo, "transport", "#eef4fb"});
  chart.bands.push_back({lo, hi, "policy improvement", "#fbf3e6"});
  chart.bands.push_back({hi, x_max, "saturation", "#eef8ee"});
}

bool parse_bool(const ArgMap& args, const std::string& key) {
  const auto& v = args.at(key);
  if (v == "true") return true;
  if (v == "false") return false;
  throw Error(ErrorKind::Usage, "'" + key + "' expects true or false, got '" + v + "'");
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  unsigned long long x = 0;
  try {
    if (!v.empty() && v[0] != '-') x = std::stoull(v, &used, 10);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw Error(ErrorKind::Usage, "'" + key + "' expects a non-negative integer");
  return x;
}

double parse_real(const std::string& key, const std::string& v) {
  const auto grid = parse_real_grid(v);
  if (grid.size() != 1) throw Error(ErrorKind::Usage, "'" + key + "' expects a single number");
  return grid.front();
}

BonBatchRule parse_bon_rule(const std::string& v) {
  if (v == "literal") return BonBatchRule::Literal;
  if (v == "chi-square") return BonBatchRule::ChiSquare;
  throw Error(ErrorKind::Usage, "bon-rule must be 'literal' or 'chi-square'");
}

BonInspection parse_bon_inspect(const std::string& v) {
  if (v == "all") return BonInspection::AllResponses;
  if (v == "first-n") return BonInspection::FirstN;
  throw Error(ErrorKind::Usage, "bon-inspect must be 'all' or 'first-n'");
}

std::string n_max_cell(const BatchLimit& lim) {
  switch (lim.kind) {
    case BatchLimit::Kind::Infinite: return "inf";
    case BatchLimit::Kind::Finite: return csv::integer(lim.floored);
    case BatchLimit::Kind::Undetermined: return "undetermined";
  }
  return "";
}

Scenario scenario_from_text(const std::string& text) { return build_scenario(parse_scenario(text)); }

}  // namespace

std::vector<Algorithm> parse_algorithm_list(const std::string& text) {
  std::vector<Algorithm> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    const std::string name = first == std::string::npos ? "" : item.substr(first, last - first + 1);
    const auto a = parse_algorithm(name);
    if (!a) throw Error(ErrorKind::Usage, "unknown algorithm '" + name + "'");
    if (std::find(out.begin(), out.end(), *a) != out.end())
      throw Error(ErrorKind::Usage, "algorithm '" + name + "' listed twice");
    out.push_back(*a);
  }
  if (out.empty()) throw Error(ErrorKind::Usage, "empty algorithm list");
  return out;
}

std::string format_algorithm_list(const std::vector<Algorithm>& algorithms) {
  std::string out;
  for (std::size_t i = 0; i < algorithms.size(); ++i) out += (i ? "," : "") + to_string(algorithms[i]);
  return out;
}

CommandOutput sweep_beta(const Scenario& sc, const SweepBetaOptions& opt) {
  require_subset(opt.algorithms, {Algorithm::AiC, Algorithm::SRS, Algorithm::SMC}, "sweep-beta");
  const auto [s, s_ver] = masses_of(sc);
  const std::vector<double> betas = opt.betas.empty() ? auto_beta_grid(s, s_ver) : opt.betas;
  require_sorted(betas, "beta grid");

  std::vector<CoverageBudget> budgets;
  for (double b : betas) budgets.emplace_back(b);

  // Every algorithm sees the same per-beta seeds, so paired comparisons share randomness.
  std::vector<std::vector<EstimateReport>> reports;
  for (Algorithm a : opt.algorithms) {
    std::vector<SamplerConfig> configs;
    for (auto b : budgets) configs.push_back(SamplerConfig::make(a, b, std::nullopt, std::nullopt));
    reports.push_back(sweep(configs, sc.universe, sc.s_star, sc.s_hat, opt.run.episodes, opt.run.seed,
                            EstimateOptions{opt.run.threads}));
  }

  csv::Table t({"algorithm", "beta", "regime", "empirical_subopt", "se", "theory_subopt", "z", "mean_proposals",
                "theory_complexity", "empirical_chi2", "chi2_budget", "coverage_ok", "proposals_se", "z_proposals",
                "exact_chi2", "chi2_bias", "accuracy", "skyline", "alpha", "episodes", "seed"});
  for (std::size_t i = 0; i < budgets.size(); ++i) {
    for (std::size_t k = 0; k < opt.algorithms.size(); ++k) {
      const auto& r = reports[k][i];
      t.add_row({to_string(opt.algorithms[k]), number(betas[i]), regime_cell(r.theory), number(r.subopt.value),
                 number(r.subopt.se), number(r.theory.subopt), number(r.z.subopt), number(r.proposals.value),
                 csv::optional_number(r.theory.expected_proposals), number(r.empirical_chi2),
                 number(budgets[i].radius()), csv::boolean(coverage_ok(r, budgets[i])), number(r.proposals.se),
                 csv::optional_number(r.z.proposals), number(r.exact_chi2), number(r.chi2_bias), number(r.accuracy),
                 number(r.skyline), csv::optional_number(r.theory.alpha), csv::integer(static_cast<std::int64_t>(r.episodes)),
                 std::to_string(derive_seed(opt.run.seed, i))});
    }
  }

  CommandOutput out{t.str(), std::nullopt};
  if (opt.run.render_svg) {
    svg::Chart chart;
    chart.title = sc.name + ": sub-optimality vs coverage budget";
    chart.x_label = "beta";
    chart.y_label = "sub-optimality";
    if (s > 0 && s < 1 && s_ver > 0 && s_ver < 1) add_regime_bands(chart, s, s_ver, betas.back());
    for (std::size_t k = 0; k < opt.algorithms.size(); ++k) {
      svg::Series emp{to_string(opt.algorithms[k]) + " empirical", betas, {}, {}, color_of(opt.algorithms[k])};
      svg::Series th{to_string(opt.algorithms[k]) + " theory", betas, {}, {}, color_of(opt.algorithms[k]), true};
      for (const auto& r : reports[k]) {
        emp.y.push_back(r.subopt.value);
        emp.err.push_back(1.96 * r.subopt.se);
        th.y.push_back(r.theory.subopt);
      }
      chart.series.push_back(std::move(th));
      chart.series.push_back(std::move(emp));
    }
    out.svg = svg::render(chart);
  }
  return out;
}

CommandOutput sweep_batch(const Scenario& sc, const SweepBatchOptions& opt) {
  require_subset(opt.algorithms, {Algorithm::BoN, Algorithm::BRS}, "sweep-batch");
  if (opt.ns.empty()) throw Error(ErrorKind::Usage, "n grid is empty");
  if (!std::is_sorted(opt.ns.begin(), opt.ns.end())) throw Error(ErrorKind::Usage, "n grid must be sorted ascending");
  const auto [s, s_ver] = masses_of(sc);
  const CoverageBudget beta(opt.beta);

  // The sampler only sees the verifier, so admissibility is judged on its mass.
  const bool has_bon = std::find(opt.algorithms.begin(), opt.algorithms.end(), Algorithm::BoN) != opt.algorithms.end();
  const BatchLimit bon_limit = bon_max_batch(s_ver, beta, opt.bon_rule);
  if (has_bon && bon_limit.kind == BatchLimit::Kind::Undetermined && !opt.allow_undetermined)
    throw Error(ErrorKind::Undetermined,
                "the admissible BoN batch size is undetermined for this (s_ver, beta); pass --allow-undetermined to run anyway");

  std::vector<std::vector<EstimateReport>> reports;
  for (Algorithm a : opt.algorithms) {
    std::vector<SamplerConfig> configs;
    for (auto n : opt.ns)
      configs.push_back(a == Algorithm::BoN ? SamplerConfig::bon(beta, n, opt.bon_inspection)
                                            : SamplerConfig::brs(beta, n));
    reports.push_back(sweep(configs, sc.universe, sc.s_star, sc.s_hat, opt.run.episodes, opt.run.seed,
                            EstimateOptions{opt.run.threads}));
  }

  csv::Table t({"algorithm", "n", "empirical_subopt", "se", "theory_subopt", "z", "empirical_chi2", "chi2_budget",
                "coverage_ok", "n_max", "exact_chi2", "chi2_bias", "n_max_value", "accuracy", "skyline", "beta",
                "episodes", "seed"});
  for (std::size_t k = 0; k < opt.algorithms.size(); ++k) {
    const bool bon = opt.algorithms[k] == Algorithm::BoN;
    for (std::size_t i = 0; i < opt.ns.size(); ++i) {
      const auto& r = reports[k][i];
      const std::string n_max = bon ? n_max_cell(bon_limit) : "inf";
      const std::string n_max_value =
          bon && bon_limit.kind == BatchLimit::Kind::Finite ? number(bon_limit.value) : (n_max == "inf" ? "inf" : "");
      t.add_row({to_string(opt.algorithms[k]), csv::integer(opt.ns[i]), number(r.subopt.value), number(r.subopt.se),
                 number(r.theory.subopt), number(r.z.subopt), number(r.empirical_chi2), number(beta.radius()),
                 csv::boolean(coverage_ok(r, beta)), n_max, number(r.exact_chi2), number(r.chi2_bias), n_max_value,
                 number(r.accuracy), number(r.skyline), number(beta.value()),
                 csv::integer(static_cast<std::int64_t>(r.episodes)), std::to_string(derive_seed(opt.run.seed, i))});
    }
  }

  CommandOutput out{t.str(), std::nullopt};
  if (opt.run.render_svg) {
    svg::Chart chart;
    chart.title = sc.name + ": sub-optimality vs batch size (beta = " + number(beta.value()) + ")";
    chart.x_label = "N";
    chart.y_label = "sub-optimality";
    std::vector<double> xs;
    for (auto n : opt.ns) xs.push_back(static_cast<double>(n));
    for (std::size_t k = 0; k < opt.algorithms.size(); ++k) {
      svg::Series emp{to_string(opt.algorithms[k]) + " empirical", xs, {}, {}, color_of(opt.algorithms[k])};
      svg::Series th{to_string(opt.algorithms[k]) + " theory", xs, {}, {}, color_of(opt.algorithms[k]), true};
      for (const auto& r : reports[k]) {
        emp.y.push_back(r.subopt.value);
        emp.err.push_back(1.96 * r.subopt.se);
        th.y.push_back(r.theory.subopt);
      }
      chart.series.push_back(std::move(th));
      chart.series.push_back(std::move(emp));
    }
    out.svg = svg::render(chart);
  }
  return out;
}

CommandOutput ablate_s(const Scenario& sc, const AblateOptions& opt) {
  const double s_ver = masses_of(sc).s_ver;
  std::vector<double> grid = opt.s_values;
  if (grid.empty()) {
    for (double f : {0.25, 0.5, 0.75, 1.0, 1.5, 2.0})
      if (const double v = f * s_ver; v > 0.0 && v < 1.0) grid.push_back(v);
    grid.push_back(1.0);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  }
  require_sorted(grid, "s grid");
  for (double v : grid)
    if (!(v > 0.0 && v <= 1.0)) throw Error(ErrorKind::Usage, "assumed s values must lie in (0, 1]");
  const CoverageBudget beta(opt.beta);

  const std::vector<Algorithm> algs{Algorithm::AiC, Algorithm::SRS, Algorithm::SMC};
  std::vector<std::vector<EstimateReport>> reports;
  for (Algorithm a : algs) {
    std::vector<SamplerConfig> configs;
    for (double v : grid)
      configs.push_back(SamplerConfig::make(a, beta, std::nullopt, a == Algorithm::AiC ? std::nullopt : std::optional(v)));
    reports.push_back(sweep(configs, sc.universe, sc.s_star, sc.s_hat, opt.run.episodes, opt.run.seed,
                            EstimateOptions{opt.run.threads}));
  }

  csv::Table t({"algorithm", "s_assumed", "accuracy", "se", "mean_proposals", "theory_accuracy", "z",
                "theory_proposals", "proposals_se", "empirical_subopt", "theory_subopt", "beta", "episodes", "seed"});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t k = 0; k < algs.size(); ++k) {
      const auto& r = reports[k][i];
      const double theory_acc = r.skyline - r.theory.subopt;
      t.add_row({to_string(algs[k]), number(grid[i]), number(r.accuracy), number(r.subopt.se),
                 number(r.proposals.value), number(theory_acc), number(z_score(r.accuracy, theory_acc, r.subopt.se)),
                 csv::optional_number(r.theory.expected_proposals), number(r.proposals.se), number(r.subopt.value),
                 number(r.theory.subopt), number(beta.value()), csv::integer(static_cast<std::int64_t>(r.episodes)),
                 std::to_string(derive_seed(opt.run.seed, i))});
    }
  }

  CommandOutput out{t.str(), std::nullopt};
  if (opt.run.render_svg) {
    svg::Chart chart;
    chart.title = sc.name + ": accuracy vs assumed s (true s_ver = " + number(s_ver) + ")";
    chart.x_label = "assumed s";
    chart.y_label = "accuracy";
    for (std::size_t k = 0; k < algs.size(); ++k) {
      svg::Series emp{to_string(algs[k]) + " empirical", grid, {}, {}, color_of(algs[k])};
      svg::Series th{to_string(algs[k]) + " theory", grid, {}, {}, color_of(algs[k]), true};
      for (const auto& r : reports[k]) {
        emp.y.push_back(r.accuracy);
        emp.err.push_back(1.96 * r.subopt.se);
        th.y.push_back(r.skyline - r.theory.subopt);
      }
      chart.series.push_back(std::move(th));
      chart.series.push_back(std::move(emp));
    }
    out.svg = svg::render(chart);
  }
  return out;
}

std::string describe(const Scenario& sc, double beta_value) {
  const CoverageBudget beta(beta_value);
  const auto [s, s_ver] = masses_of(sc);
  std::ostringstream o;
  o << "scenario      " << sc.name << "\n";
  o << "atoms         " << sc.universe.size() << "\n";
  o << "|S*|          " << sc.s_star.count() << "   mass s     = " << number(s) << "\n";
  o << "|S-hat|       " << sc.s_hat.count() << "   mass s_ver = " << number(s_ver) << "\n";
  o << "TPR / FPR     " << number(sc.roc.tpr) << " / " << number(sc.roc.fpr) << "\n";
  o << "Youden J      " << number(sc.roc.youden_j) << "\n";
  o << "episodes      " << sc.episodes << "   seed " << sc.seed << "\n";
  if (s > 0 && s < 1 && s_ver > 0 && s_ver < 1) {
    o << "regimes       transport [1, " << number(std::min(1 / s, 1 / s_ver)) << "], policy improvement up to "
      << number(std::max(1 / s, 1 / s_ver)) << ", saturation beyond\n";
    o << "at beta = " << number(beta.value()) << "\n";
    o << "  regime            " << to_string(regime_of(s, s_ver, beta)) << "\n";
    o << "  OTC               " << number(otc(s, beta)) << "\n";
    o << "  skyline           " << number(std::min(1.0, m_beta(s, beta))) << "\n";
    o << "  SRS/SMC subopt    " << number(srs_smc_subopt(s, s_ver, sc.roc.youden_j, beta).subopt) << "\n";
    o << "  SRS/SMC proposals " << number(srs_smc_complexity(s_ver, beta)) << "\n";
    o << "  AiC subopt        " << number(aic_subopt(s, s_ver, sc.roc.youden_j, beta)) << "\n";
    o << "  AiC proposals     " << number(aic_complexity(s_ver)) << "\n";
    o << "  envelope M        " << number(envelope_m(s_ver, beta)) << "\n";
    for (auto rule : {BonBatchRule::Literal, BonBatchRule::ChiSquare}) {
      const auto lim = bon_max_batch(s_ver, beta, rule);
      o << "  BoN N_max (" << (rule == BonBatchRule::Literal ? "literal" : "chi-square") << ") "
        << n_max_cell(lim) << "\n";
    }
  } else {
    o << "masses on the boundary: regime analysis does not apply\n";
  }
  return o.str();
}

namespace {

const std::set<std::string> kCommonKeys{"episodes", "seed", "svg", "threads"};

std::set<std::string> keys_for(const std::string& command) {
  std::set<std::string> keys = kCommonKeys;
  if (command == "sweep-beta") {
    keys.insert({"algorithms", "beta-grid"});
  } else if (command == "sweep-batch") {
    keys.insert({"algorithms", "n-grid", "beta", "allow-undetermined", "bon-rule", "bon-inspect"});
  } else if (command == "ablate-s") {
    keys.insert({"s-grid", "beta"});
  } else {
    throw Error(ErrorKind::Usage, "unknown command '" + command + "'");
  }
  return keys;
}

RunSettings settings_from(const ArgMap& a) {
  RunSettings r;
  r.episodes = static_cast<std::size_t>(parse_u64("episodes", a.at("episodes")));
  if (r.episodes < 2) throw Error(ErrorKind::Usage, "episodes must be at least 2");
  r.seed = parse_u64("seed", a.at("seed"));
  r.render_svg = parse_bool(a, "svg");
  if (auto it = a.find("threads"); it != a.end()) {
    r.threads = static_cast<unsigned>(parse_u64("threads", it->second));
    if (r.threads == 0) throw Error(ErrorKind::Usage, "threads must be at least 1");
  }
  return r;
}

}  // namespace

ArgMap normalize_args(const std::string& command, const ArgMap& args, const Scenario& scenario) {
  const auto allowed = keys_for(command);
  for (const auto& [k, v] : args)
    if (!allowed.count(k)) throw Error(ErrorKind::Usage, "option '" + k + "' does not apply to " + command);

  ArgMap out = args;
  out.erase("threads");
  out.emplace("episodes", std::to_string(scenario.episodes));
  out.emplace("seed", std::to_string(scenario.seed));
  out.emplace("svg", "false");
  if (command == "sweep-beta") {
    out.emplace("algorithms", "AiC,SRS,SMC");
    out.emplace("beta-grid", "auto");
  } else if (command == "sweep-batch") {
    out.emplace("algorithms", "BoN,BRS");
    out.emplace("n-grid", "0:5:1");
    out.emplace("beta", "1.5");
    out.emplace("allow-undetermined", "false");
    out.emplace("bon-rule", "literal");
    out.emplace("bon-inspect", "all");
  } else {
    out.emplace("s-grid", "auto");
    out.emplace("beta", "1.5");
  }
  if (auto it = out.find("algorithms"); it != out.end()) it->second = format_algorithm_list(parse_algorithm_list(it->second));
  return out;
}

CommandOutput run_command(const std::string& command, const ArgMap& args, const std::string& scenario_text) {
  const Scenario sc = scenario_from_text(scenario_text);
  ArgMap a = normalize_args(command, args, sc);
  if (auto it = args.find("threads"); it != args.end()) a["threads"] = it->second;
  const RunSettings run = settings_from(a);

  if (command == "sweep-beta") {
    SweepBetaOptions o;
    o.run = run;
    o.algorithms = parse_algorithm_list(a.at("algorithms"));
    if (a.at("beta-grid") != "auto") o.betas = parse_real_grid(a.at("beta-grid"));
    return sweep_beta(sc, o);
  }
  if (command == "sweep-batch") {
    SweepBatchOptions o;
    o.run = run;
    o.algorithms = parse_algorithm_list(a.at("algorithms"));
    o.ns = parse_count_grid(a.at("n-grid"));
    o.beta = parse_real("beta", a.at("beta"));
    o.allow_undetermined = parse_bool(a, "allow-undetermined");
    o.bon_rule = parse_bon_rule(a.at("bon-rule"));
    o.bon_inspection = parse_bon_inspect(a.at("bon-inspect"));
    return sweep_batch(sc, o);
  }
  AblateOptions o;
  o.run = run;
  if (a.at("s-grid") != "auto") o.s_values = parse_real_grid(a.at("s-grid"));
  o.beta = parse_real("beta", a.at("beta"));
  return ablate_s(sc, o);
}

RunManifest make_manifest(const std::string& command, const ArgMap& normalized, const std::string& scenario_path,
                          const std::string& scenario_text, std::vector<std::string> outputs) {
  RunManifest m;
  m.command = command;
  m.scenario_path = scenario_path;
  m.scenario_text = scenario_text;
  m.args = normalized;
  m.args.erase("threads");
  m.seed = parse_u64("seed", normalized.at("seed"));
  m.tool_version = tool_version();
  m.outputs = std::move(outputs);
  return m;
}

CommandOutput replay(const RunManifest& manifest) {
  auto it = manifest.args.find("seed");
  if (it == manifest.args.end() || parse_u64("seed", it->second) != manifest.seed)
    throw Error(ErrorKind::Parse, "manifest seed does not match its recorded arguments");
  return run_command(manifest.command, manifest.args, manifest.scenario_text);
}

}  // namespace ttsim
