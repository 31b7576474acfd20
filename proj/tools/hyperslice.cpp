#include <hyperslice/hyperslice.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace hyperslice;

namespace {

struct Globals {
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::optional<std::uint64_t> budget;
  std::string out;
};

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::BudgetExceeded: return 4;
    case ErrorCode::FitUnderdetermined: return 5;
    case ErrorCode::BasePointHit: return 6;
    case ErrorCode::DivisionByZero: return 1;
    default: return 3;
  }
}

std::uint64_t resolve_budget(const Globals& g, const Scenario* s) {
  if (g.budget) return *g.budget;
  if (const char* env = std::getenv("HYPERSLICE_BUDGET")) {
    try {
      std::size_t used = 0;
      const std::uint64_t b = std::stoull(env, &used);
      if (used == std::string(env).size()) return b;
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::InvalidScenario, "HYPERSLICE_BUDGET is not a nonnegative integer: '" + std::string(env) + "'");
  }
  if (s) return s->options.budget;
  return kDefaultBudget;
}

CountOptions count_options(const Globals& g, const Scenario* s) { return {resolve_budget(g, s), std::max(1u, g.workers)}; }

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw Error(ErrorCode::InvalidScenario, "cannot write '" + g.out + "'");
  f << text;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::InvalidScenario, "cannot write '" + path + "'");
  f << text;
}

std::uint64_t pick_q(const Scenario& s, std::optional<std::uint64_t> q) {
  if (q) return *q;
  if (auto d = s.default_q()) return *d;
  throw Error(ErrorCode::InvalidScenario, "scenario '" + s.name + "' names no field; pass --q");
}

// Constant expressions over k, comma separated.  A coordinate may carry one
// leading '-', read as 0 - expr.
std::vector<Elem> parse_constants(const std::string& text, const FieldPtr& k) {
  std::vector<Elem> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto start = item.find_first_not_of(" \t");
    const bool negate = start != std::string::npos && item[start] == '-';
    const Elem c = parse_poly(negate ? item.substr(start + 1) : item, {}, k).constant_term();
    out.push_back(negate ? k->neg(c) : c);
  }
  return out;
}

// One point per line; '#' starts a comment; blank lines are skipped.
std::vector<ProjPoint> read_points(const std::string& path, const FieldPtr& k, unsigned n) {
  std::vector<ProjPoint> pts;
  std::stringstream in(read_file(path));
  std::string line;
  unsigned lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto v = parse_constants(line, k);
      if (v.size() != n + 1)
        throw Error(ErrorCode::DimensionMismatch,
                    "expected " + std::to_string(n + 1) + " coordinates, got " + std::to_string(v.size()));
      pts.push_back(make_projective<ProjPoint>(*k, std::move(v)));
    } catch (const Error& e) {
      throw Error(e.code(), path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return pts;
}

int run_count(const Globals& g, const std::string& path, std::optional<std::uint64_t> q_opt, std::uint32_t M) {
  const Scenario s = load_scenario(path);
  const std::uint64_t q = pick_q(s, q_opt);
  const Instance inst = s.instantiate(q);
  const auto opts = count_options(g, &s);
  Json j = report_header("count", g.seed);
  j["scenario"] = s.name;
  j["q"] = q;
  Json counts = Json::array();
  for (const auto& E : extension_ladder(inst.variety.field, M)) {
    const auto rec = count_points(inst.variety, E, opts);
    counts.push_back({{"m", rec.m}, {"count", rec.count}});
  }
  j["counts"] = std::move(counts);
  emit(g, dump(j));
  return 0;
}

struct StatsArgs {
  std::string scenario;
  std::string setmap;
  std::optional<std::uint64_t> q;
  unsigned n = 0;
  bool exhaustive = false;
  std::uint64_t samples = 0;
};

int run_stats(const Globals& g, const StatsArgs& a) {
  if (a.scenario.empty() == a.setmap.empty()) throw Error(ErrorCode::InvalidScenario, "give either a scenario or --setmap");
  if (a.exhaustive == (a.samples > 0)) throw Error(ErrorCode::InvalidScenario, "give either --exhaustive or --samples K");
  Json j = report_header("stats", g.seed);
  std::optional<Scenario> s;
  SetMap map;
  std::optional<Instance> inst;
  CountOptions opts;
  if (!a.scenario.empty()) {
    s = load_scenario(a.scenario);
    opts = count_options(g, &*s);
    inst = s->instantiate(pick_q(*s, a.q));
    map = to_set_map(inst->variety, inst->morphism, opts);
    j["scenario"] = s->name;
  } else {
    if (!a.q) throw Error(ErrorCode::InvalidScenario, "--setmap needs --q");
    if (a.n < 1) throw Error(ErrorCode::InvalidScenario, "--setmap needs --n >= 1");
    opts = count_options(g, nullptr);
    const auto k = make_field_of_order(*a.q);
    map = SetMap{k, a.n, read_points(a.setmap, k, a.n)};
    j["setmap"] = a.setmap;
  }
  const std::uint64_t q = map.field->order();
  j["q"] = q;
  j["n"] = map.n;
  j["p1"] = rational_json(p1(q, map.n));
  j["p2"] = rational_json(p2(q, map.n));
  std::uint64_t collisions = 0;
  {
    std::map<std::vector<Elem>, std::uint64_t> fibers;
    for (const auto& y : map.images) ++fibers[y.coords];
    for (const auto& [y, f] : fibers) collisions += f * f;
  }
  const auto pred = predicted_stats(map.images.size(), collisions, q, map.n);
  Json predicted{{"mean", rational_json(pred.mean)}, {"variance", rational_json(pred.variance)}};
  if (a.exhaustive) {
    const SliceStats ex = inst ? exact_stats(inst->variety, inst->morphism, opts) : exact_stats(map, opts.workers, opts.budget);
    j["mode"] = "exhaustive";
    j["exact"] = stats_json(ex);
    j["predicted"] = std::move(predicted);
    j["equal"] = ex.mean == pred.mean && ex.variance == pred.variance;
    const auto vb = variance_bound(ex.image_size, ex.max_fiber, ex.collision_sum, q, map.n);
    j["variance_bound"] = {{"sharp", rational_json(vb.sharp)}, {"coarse", rational_json(vb.coarse)}};
  } else {
    const McStats mc = mc_stats(map, a.samples, g.seed, opts.workers);
    j["mode"] = "monte_carlo";
    j["monte_carlo"] = mc_json(mc);
    j["predicted"] = std::move(predicted);
  }
  emit(g, dump(j));
  return 0;
}

struct CensusArgs {
  std::string scenario;
  std::vector<std::uint64_t> q_list;
  std::string mode;
  std::optional<std::uint32_t> M;
  bool compare = false;
  bool timing = false;
  std::string csv;
};

int run_census(const Globals& g, const CensusArgs& a) {
  const Scenario s = load_scenario(a.scenario);
  const auto q_list = a.q_list.empty() ? s.q_list : a.q_list;
  if (q_list.empty()) throw Error(ErrorCode::InvalidScenario, "scenario '" + s.name + "' has no q_list; pass --q");
  CensusOptions opts;
  opts.mode = a.mode.empty() ? s.options.classifier : parse_classifier_mode(a.mode);
  opts.M = a.M.value_or(s.options.M);
  opts.count = count_options(g, &s);
  opts.compare_modes = a.compare;
  opts.timing = a.timing;
  const auto report = census([&](std::uint64_t q) { return s.instantiate(q); }, s.r, s.codim, q_list, opts);
  emit(g, dump(census_json(report, s.name, g.seed)));
  if (!a.csv.empty()) write_file(a.csv, census_csv(report));
  require_fit(report);
  return 0;
}

int run_span(const Globals& g, const std::string& points, std::uint64_t q, unsigned n) {
  if (n < 1) throw Error(ErrorCode::InvalidScenario, "--n must be >= 1");
  const auto k = make_field_of_order(q);
  const auto pts = read_points(points, k, n);
  const int sd = span_dim(*k, pts);
  const int ld = span_locus_dim(*k, pts);
  // Independent check: enumerate the dual space.
  const auto opts = count_options(g, nullptr);
  ProjectiveSpace dual(k, n);
  check_budget(dual.size() * pts.size(), opts.budget, "hyperplane enumeration");
  std::uint64_t containing = 0;
  for (std::uint64_t h = 0; h < dual.size(); ++h) {
    const auto H = dual.at(h);
    bool all = true;
    for (const auto& y : pts)
      if (dot(*k, y.coords, H).v != 0) {
        all = false;
        break;
      }
    containing += all;
  }
  // #P^d(F_q) = containing identifies d; 0 hyperplanes means d = -1.
  int enum_dim = -1;
  for (std::uint64_t size = 0, qd = 1; size < containing; qd *= q) {
    size += qd;
    ++enum_dim;
  }
  Json j = report_header("span", g.seed);
  j["q"] = q;
  j["n"] = n;
  j["points"] = pts.size();
  j["span_dim"] = sd;
  j["codim_span"] = static_cast<int>(n) - sd;
  j["locus_dim"] = ld;
  j["containing_hyperplanes"] = containing;
  j["enumerated_locus_dim"] = enum_dim;
  j["agree"] = enum_dim == ld;
  emit(g, dump(j));
  return 0;
}

int run_probe(const Globals& g, const std::string& path, std::optional<std::uint64_t> q_opt, const std::string& hyperplane,
              const std::string& mode_text, std::optional<std::uint32_t> M) {
  const Scenario s = load_scenario(path);
  const std::uint64_t q = pick_q(s, q_opt);
  const Instance inst = s.instantiate(q);
  const auto& k = inst.variety.field;
  auto coeffs = parse_constants(hyperplane, k);
  if (coeffs.size() != inst.morphism.n + 1)
    throw Error(ErrorCode::DimensionMismatch, "hyperplane needs " + std::to_string(inst.morphism.n + 1) + " coefficients");
  const auto H = make_projective<Hyperplane>(*k, std::move(coeffs));
  const auto mode = mode_text.empty() ? s.options.classifier : parse_classifier_mode(mode_text);
  const auto v = classify(inst.variety, inst.morphism, H, s.r, mode, M.value_or(s.options.M), count_options(g, &s));
  Json j = report_header("probe", g.seed);
  j["scenario"] = s.name;
  j["q"] = q;
  j["r"] = s.r;
  j.update(verdict_json(*k, v));
  emit(g, dump(j));
  return 0;
}

int run_validate(const Globals& g, const std::string& path, std::vector<std::uint64_t> q_list) {
  const Scenario s = load_scenario(path);
  if (q_list.empty()) q_list = s.q_list;
  if (q_list.empty()) q_list.push_back(pick_q(s, std::nullopt));
  const auto opts = count_options(g, &s);
  Json j = report_header("validate", g.seed);
  j["scenario"] = s.name;
  const bool round_trip = scenario_from_json(nlohmann::json::parse(scenario_to_json(s).dump())) == s;
  if (!round_trip) throw Error(ErrorCode::InvalidScenario, "scenario does not survive a serialize/load round trip");
  j["round_trip"] = true;
  Json rows = Json::array();
  for (const auto q : q_list) {
    const Instance inst = s.instantiate(q);
    const auto est = lw_estimate(inst.variety, std::max<std::uint32_t>(s.options.M, 2), std::nullopt, opts);
    if (est.empty() || *est.dimension != s.r)
      throw Error(ErrorCode::DimensionCheckFailed,
                  "declared r = " + std::to_string(s.r) + " but counts over q = " + std::to_string(q) + " suggest " +
                      (est.empty() ? std::string("an empty set") : "dimension " + std::to_string(*est.dimension)));
    const auto bp = check_base_point_free(inst.variety, inst.morphism, opts);
    if (!bp.base_point_free)
      throw Error(ErrorCode::BasePointHit,
                  "every component vanishes at " + format_coords(*inst.variety.field, *bp.witness) + " over q = " + std::to_string(q));
    rows.push_back({{"q", q}, {"counts", est.counts}, {"dimension", *est.dimension}, {"base_point_free", true}});
  }
  j["fields"] = std::move(rows);
  j["valid"] = true;
  emit(g, dump(j));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hyperplane slices of varieties over finite fields"};
  app.set_version_flag("--version", std::string(kVersionString));
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Seed for all randomness")->capture_default_str();
  app.add_option("--workers", g.workers, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--budget", g.budget, "Maximum point evaluations (overrides HYPERSLICE_BUDGET)");
  app.add_option("--out", g.out, "Write the report here instead of stdout");

  std::string scenario;
  std::optional<std::uint64_t> q;
  std::uint32_t m = 1;
  auto* count = app.add_subcommand("count", "Point counts N_1..N_m");
  count->add_option("scenario", scenario, "Scenario file")->required();
  count->add_option("--q", q, "Field order");
  count->add_option("--m", m, "Count over GF(q^1) .. GF(q^m)")->check(CLI::PositiveNumber)->capture_default_str();

  StatsArgs sa;
  auto* stats = app.add_subcommand("stats", "Mean and variance of the slice count");
  stats->add_option("scenario", sa.scenario, "Scenario file");
  stats->add_option("--setmap", sa.setmap, "File of image points, one per line");
  stats->add_option("--q", sa.q, "Field order");
  stats->add_option("--n", sa.n, "Target dimension for --setmap");
  stats->add_flag("--exhaustive", sa.exhaustive, "Visit every hyperplane");
  stats->add_option("--samples", sa.samples, "Monte Carlo samples");

  CensusArgs ca;
  auto* cen = app.add_subcommand("census", "Count very bad hyperplanes for each q and fit the growth exponent");
  cen->add_option("scenario", ca.scenario, "Scenario file")->required();
  cen->add_option("--q", ca.q_list, "Comma separated field orders")->delimiter(',');
  cen->add_option("--mode", ca.mode, "threshold or estimator")->check(CLI::IsMember({"threshold", "estimator"}));
  cen->add_option("--M", ca.M, "Extension depth for the estimator")->check(CLI::PositiveNumber);
  cen->add_flag("--compare", ca.compare, "Also run the other classifier and count disagreements");
  cen->add_flag("--timing", ca.timing, "Record wall-clock runtimes");
  cen->add_option("--csv", ca.csv, "Also write the CSV table here");

  std::string points;
  std::uint64_t span_q = 0;
  unsigned span_n = 0;
  auto* span = app.add_subcommand("span", "Span and hyperplane-locus dimensions of a point set");
  span->add_option("--points", points, "File of points, one per line")->required();
  span->add_option("--q", span_q, "Field order")->required();
  span->add_option("--n", span_n, "Projective dimension")->required();

  std::string hyperplane, probe_mode;
  std::optional<std::uint32_t> probe_M;
  auto* probe = app.add_subcommand("probe", "Classify one hyperplane");
  probe->add_option("scenario", scenario, "Scenario file")->required();
  probe->add_option("--q", q, "Field order");
  probe->add_option("--hyperplane", hyperplane, "Coefficients c0,...,cn")->required();
  probe->add_option("--mode", probe_mode, "threshold or estimator")->check(CLI::IsMember({"threshold", "estimator"}));
  probe->add_option("--M", probe_M, "Extension depth")->check(CLI::PositiveNumber);

  std::vector<std::uint64_t> validate_q;
  auto* validate = app.add_subcommand("validate", "Check a scenario: parse, round trip, dimension, base points");
  validate->add_option("scenario", scenario, "Scenario file")->required();
  validate->add_option("--q", validate_q, "Comma separated field orders")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*count) return run_count(g, scenario, q, m);
    if (*stats) return run_stats(g, sa);
    if (*cen) return run_census(g, ca);
    if (*span) return run_span(g, points, span_q, span_n);
    if (*probe) return run_probe(g, scenario, q, hyperplane, probe_mode, probe_M);
    if (*validate) return run_validate(g, scenario, validate_q);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: Internal: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
