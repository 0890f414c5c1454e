// recsim: command-line driver for the recommender/user co-evolution model.
//
// Exit codes: 0 success, 2 usage error (bad flags, unreadable input, invalid
// configuration), 1 runtime failure. Errors are reported on stderr as a
// single-line JSON object {"error": {"kind": ..., "message": ...}}.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "recsim/error.hpp"
#include "recsim/evaluation.hpp"
#include "recsim/experiments.hpp"
#include "recsim/io.hpp"
#include "recsim/metrics.hpp"
#include "recsim/rewiring.hpp"
#include "recsim/run_config.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace recsim;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct UsageError : Error {
  using Error::Error;
};

template <class T>
CLI::Option* bind_opt(CLI::App* app, const std::string& name, std::optional<T>& target, const std::string& help) {
  return app->add_option_function<T>(name, [&target](const T& v) { target = v; }, help);
}

CLI::Option* bind_grid(CLI::App* app, const std::string& name, std::optional<std::vector<double>>& target,
                       const std::string& help) {
  return app->add_option_function<std::string>(
      name, [&target](const std::string& v) { target = parse_grid(v); }, help + " (start:stop:step or a,b,c)");
}

void add_common(CLI::App* app, RunOptions& flags, std::string& config_path) {
  app->add_option("--config", config_path, "JSON run configuration; flags take precedence");
  bind_opt(app, "--output", flags.output, "Output path");
  bind_opt(app, "--format", flags.format, "Table format")->check(CLI::IsMember({"csv", "json"}));
  bind_opt(app, "--seed", flags.seed, "Base random seed");
  bind_opt(app, "--jobs", flags.jobs, "Worker threads for grid experiments (0 = all cores)");
}

void add_input(CLI::App* app, RunOptions& flags) {
  bind_opt(app, "--input", flags.input, "Network snapshot CSV (JSON header alongside)");
}

void add_rewiring(CLI::App* app, RunOptions& flags) {
  bind_opt(app, "--theta", flags.theta, "Similarity exponent in [0, 1]");
  bind_opt(app, "--p", flags.p, "Probability of following the recommendation");
  bind_opt(app, "--list-length", flags.list_length, "Recommendation list length L");
  bind_opt(app, "--attachment", flags.attachment, "Non-recommendation channel")->check(CLI::IsMember({"pa", "ra"}));
  bind_opt(app, "--max-sweeps", flags.max_sweeps, "Sweep cap per run");
  bind_opt(app, "--window", flags.window, "Stationarity window W in sweeps");
  bind_opt(app, "--eps", flags.eps, "Stationarity tolerance in Gini units");
}

fs::path default_dir() {
  if (const char* env = std::getenv("RECSIM_OUTPUT_DIR"); env && *env) return env;
  return ".";
}

fs::path output_path(const RunOptions& o, const std::string& default_name) {
  if (o.output) return *o.output;
  return default_dir() / default_name;
}

std::string format_of(const RunOptions& o) { return o.format.value_or("csv"); }

fs::path with_suffix(const fs::path& p, const std::string& suffix) {
  fs::path out = p;
  out.replace_extension();
  out += suffix;
  return out;
}

std::ofstream open_out(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write '" + p.string() + "'");
  return out;
}

void write_table(const Table& t, const fs::path& path, const std::string& format) {
  auto out = open_out(path);
  if (format == "json") t.write_json(out);
  else t.write_csv(out);
}

BipartiteNetwork load_input(const RunOptions& o) {
  if (!o.input) throw UsageError("--input is required");
  try {
    return read_snapshot(fs::path(*o.input));
  } catch (const InvalidInput& ex) {
    throw UsageError(ex.what());
  }
}

json dataset_json(const RunOptions& o, const BipartiteNetwork& net) {
  return {{"path", o.input.value_or(o.ratings.value_or(o.synthetic.value_or("")))},
          {"hash", hex64(network_hash(net))},
          {"n_users", net.n_users()},
          {"n_items", net.n_items()},
          {"n_links", net.n_links()}};
}

json resolved_json(const std::string& command, const RunOptions& o) {
  if (command == "ingest") return {{"seed", o.seed.value_or(0)}, {"threshold", o.threshold.value_or(3)}};
  if (command == "metrics") return json::object();
  const auto c = rewiring_config(o);
  json r = {{"theta", c.theta}, {"p", c.p}, {"list_length", c.list_length},
            {"attachment", std::string(to_string(c.attachment))}, {"seed", c.seed},
            {"max_sweeps", c.max_sweeps}, {"window", c.window}, {"eps", c.eps}};
  if (command != "simulate") r["replicas"] = experiment_options(o).replicas;
  if (command == "sweep") {
    r["theta_grid"] = theta_grid(o);
    r["p_grid"] = o.p_grid.value_or(std::vector<double>{c.p});
  } else if (command == "hysteresis") {
    r["theta_grid"] = theta_grid(o);
    r["init_low"] = o.init_low.value_or(1.0);
    r["init_high"] = o.init_high.value_or(0.0);
  } else if (command == "density") {
    r["density_grid"] = density_grid(o);
    std::vector<std::string> modes;
    for (auto m : density_modes(o)) modes.emplace_back(to_string(m));
    r["density_modes"] = modes;
    r["theta_grid"] = o.theta_grid.value_or(std::vector<double>{c.theta});
  } else if (command == "evaluate") {
    const auto s = split_spec(o);
    r["probe_fraction"] = s.probe_fraction;
    r["divisions"] = s.n_divisions;
    if (o.theta_grid) r["theta_grid"] = *o.theta_grid;
  }
  return r;
}

void write_manifest(const fs::path& output, const std::string& command, const RunOptions& o,
                    const BipartiteNetwork& net, const json& extra = json::object()) {
  json m = {{"command", command},
            {"code_version", RECSIM_VERSION},
            {"options", to_json(o)},
            {"resolved", resolved_json(command, o)},
            {"dataset", dataset_json(o, net)}};
  m["options"].erase("jobs");
  m["options"].erase("output");
  for (const auto& [k, v] : extra.items()) m[k] = v;
  auto out = open_out(with_suffix(output, ".manifest.json"));
  out << m.dump(2) << '\n';
}

json gstar_json(const GstarStats& s) {
  return {{"mean", s.mean}, {"sd", s.sd}, {"values", s.values}, {"sweeps", s.sweeps},
          {"stationary_runs", s.stationary_runs}};
}

void gstar_cells(std::vector<Cell>& row, const GstarStats& s) {
  row.push_back(static_cast<std::int64_t>(s.replicas()));
  row.push_back(s.mean);
  row.push_back(s.sd);
  row.push_back(static_cast<std::int64_t>(s.stationary_runs));
}

// ---------------------------------------------------------------------------

int run_ingest(const RunOptions& o) {
  const auto seed = o.seed.value_or(0);
  const fs::path out = output_path(o, "snapshot.csv");
  if (o.ratings.has_value() == o.synthetic.has_value())
    throw UsageError("ingest needs exactly one of --ratings or --synthetic");
  BipartiteNetwork net;
  json extra = json::object();
  if (o.ratings) {
    IngestResult ing;
    try {
      ing = ingest_ratings(fs::path(*o.ratings), o.threshold.value_or(3), seed);
    } catch (const InvalidInput& ex) {
      throw UsageError(ex.what());
    }
    write_id_map(with_suffix(out, ".ids.csv"), ing);
    extra["lines_read"] = ing.lines_read;
    net = std::move(ing.network);
  } else {
    SyntheticSpec spec;
    try {
      spec = parse_synthetic_spec(*o.synthetic);
    } catch (const InvalidInput& ex) {
      throw UsageError(ex.what());
    }
    if (o.seed) spec.seed = *o.seed;
    net = synthetic_network(spec);
  }
  write_snapshot(net, out);
  write_manifest(out, "ingest", o, net, extra);
  std::cout << json{{"snapshot", out.string()}, {"n_users", net.n_users()}, {"n_items", net.n_items()},
                    {"n_links", net.n_links()}, {"gini", gini(net.item_degrees())}}.dump() << '\n';
  return 0;
}

int run_simulate(const RunOptions& o, const std::optional<std::string>& final_path,
                 const std::optional<std::string>& curve_path) {
  const auto input = load_input(o);
  auto net = input;
  const auto cfg = rewiring_config(o);
  const fs::path out = output_path(o, "trace.csv");
  const auto trace = run_to_stationarity(net, cfg);
  write_table(trace_table(trace), out, format_of(o));
  if (final_path) write_snapshot(net, fs::path(*final_path));
  if (curve_path) write_table(curve_table(popularity_rank_curve(net.item_degrees())), *curve_path, "csv");
  const json summary = {{"sweeps", trace.sweeps()}, {"terminal", std::string(to_string(trace.terminal))},
                        {"initial_gini", trace.initial_gini()}, {"stationary_gini", trace.stationary_gini()}};
  write_manifest(out, "simulate", o, input, {{"result", summary}});
  std::cout << summary.dump() << '\n';
  return 0;
}

int run_sweep(const RunOptions& o) {
  const auto net = load_input(o);
  const auto cfg = rewiring_config(o);
  const auto thetas = theta_grid(o);
  const auto ps = o.p_grid.value_or(std::vector<double>{cfg.p});
  const auto rows = theta_sweep(net, thetas, ps, cfg, experiment_options(o));
  Table t{{"theta", "p", "replicas", "gstar_mean", "gstar_sd", "stationary_runs"}, {}};
  for (const auto& r : rows) {
    std::vector<Cell> row{r.theta, r.p};
    gstar_cells(row, r.gstar);
    t.rows.push_back(std::move(row));
  }
  const fs::path out = output_path(o, "sweep.csv");
  write_table(t, out, format_of(o));
  write_manifest(out, "sweep", o, net);
  return 0;
}

int run_hysteresis(const RunOptions& o) {
  const auto net = load_input(o);
  HysteresisProtocol protocol;
  protocol.base = rewiring_config(o);
  protocol.low_init_theta = o.init_low.value_or(1.0);
  protocol.high_init_theta = o.init_high.value_or(0.0);
  protocol.theta_grid = theta_grid(o);
  const auto result = hysteresis_run(net, protocol, experiment_options(o));
  Table t{{"init_theta", "theta", "replicas", "gstar_mean", "gstar_sd", "stationary_runs"}, {}};
  for (const auto& r : result.rows) {
    std::vector<Cell> row{r.init_theta, r.theta};
    gstar_cells(row, r.gstar);
    t.rows.push_back(std::move(row));
  }
  const fs::path out = output_path(o, "hysteresis.csv");
  write_table(t, out, format_of(o));
  write_manifest(out, "hysteresis", o, net,
                 {{"initial_states", {{"low", gstar_json(result.low_init)}, {"high", gstar_json(result.high_init)}}}});
  return 0;
}

int run_density(const RunOptions& o) {
  const auto net = load_input(o);
  const auto cfg = rewiring_config(o);
  const auto retains = density_grid(o);
  const auto modes = density_modes(o);
  const auto thetas = o.theta_grid.value_or(std::vector<double>{cfg.theta});
  const auto rows = density_sweep(net, retains, modes, thetas, cfg, experiment_options(o));
  Table t{{"mode", "retain", "theta", "density", "mean_item_degree", "original_gini", "replicas", "gstar_mean",
           "gstar_sd", "stationary_runs"},
          {}};
  for (const auto& r : rows) {
    std::vector<Cell> row{std::string(to_string(r.mode)), r.retain, r.theta, r.density, r.mean_item_degree,
                          r.original_gini};
    gstar_cells(row, r.gstar);
    t.rows.push_back(std::move(row));
  }
  const fs::path out = output_path(o, "density.csv");
  write_table(t, out, format_of(o));
  write_manifest(out, "density", o, net);
  return 0;
}

int run_evaluate(const RunOptions& o) {
  const auto net = load_input(o);
  const auto cfg = rewiring_config(o);
  const auto split = split_spec(o);
  const fs::path out = output_path(o, "evaluation.json");

  if (o.theta_grid) {
    const auto rows = tradeoff_curve(net, *o.theta_grid, split, cfg, experiment_options(o));
    Table t{{"theta", "precision", "short_term_diversity", "replicas", "gstar_mean", "gstar_sd", "stationary_runs"}, {}};
    for (const auto& r : rows) {
      std::vector<Cell> row{r.theta, r.precision, r.short_term_diversity};
      gstar_cells(row, r.gstar);
      t.rows.push_back(std::move(row));
    }
    write_table(t, with_suffix(out, ".tradeoff.csv"), "csv");
    const double original = gini(net.item_degrees());
    const auto cost = precision_cost(rows, original);
    json report = {{"original_gini", original},
                   {"optimal_theta", cost.optimal_theta},
                   {"optimal_precision", cost.optimal_precision},
                   {"constrained_precision", cost.constrained_precision ? json(*cost.constrained_precision) : json()},
                   {"relative_cost", cost.relative_cost}};
    open_out(out) << report.dump(2) << '\n';
    write_manifest(out, "evaluate", o, net);
    std::cout << report.dump() << '\n';
    return 0;
  }

  const auto report = evaluate(net, split, cfg.theta, cfg.list_length, experiment_options(o).jobs);
  json doc = {{"theta", report.theta},
              {"list_length", report.list_length},
              {"precision", report.precision},
              {"precision_per_division", report.precision_per_division()},
              {"short_term_diversity", report.short_term_diversity},
              {"probe_fraction", split.probe_fraction},
              {"divisions", split.n_divisions}};
  open_out(out) << doc.dump(2) << '\n';
  Table t{{"division", "precision", "short_term_diversity", "eligible_users"}, {}};
  for (const auto& d : report.divisions)
    t.rows.push_back({static_cast<std::int64_t>(d.division), d.precision, d.short_term_diversity,
                      static_cast<std::int64_t>(d.eligible_users)});
  write_table(t, with_suffix(out, ".divisions.csv"), "csv");
  write_manifest(out, "evaluate", o, net);
  std::cout << doc.dump() << '\n';
  return 0;
}

int run_metrics(const RunOptions& o, const std::optional<std::string>& curve_path) {
  const auto net = load_input(o);
  const auto k = net.item_degrees();
  const json doc = {{"gini", gini(k)}, {"herfindahl", herfindahl(k)}, {"top1_share", top_share(k, 0.01)},
                    {"n_users", net.n_users()}, {"n_items", net.n_items()}, {"n_links", net.n_links()}};
  if (o.output) {
    if (format_of(o) == "json") {
      open_out(*o.output) << doc.dump(2) << '\n';
    } else {
      Table t{{"gini", "herfindahl", "top1_share"}, {{gini(k), herfindahl(k), top_share(k, 0.01)}}};
      write_table(t, *o.output, "csv");
    }
    write_manifest(*o.output, "metrics", o, net);
  }
  if (curve_path) write_table(curve_table(popularity_rank_curve(k)), *curve_path, "csv");
  std::cout << doc.dump() << '\n';
  return 0;
}

void report_error(const char* kind, const std::string& message) {
  std::cerr << json{{"error", {{"kind", kind}, {"message", message}}}}.dump() << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Co-evolution of an item-based recommender and its users on a bipartite network"};
  app.require_subcommand(1);
  app.set_version_flag("--version", RECSIM_VERSION);

  RunOptions flags;
  std::string config_path;
  std::optional<std::string> final_path, curve_path;

  auto* ingest = app.add_subcommand("ingest", "Build a network snapshot from ratings or a synthetic generator");
  add_common(ingest, flags, config_path);
  bind_opt(ingest, "--ratings", flags.ratings, "Ratings file: user item rating [timestamp]");
  bind_opt(ingest, "--synthetic", flags.synthetic, "Synthetic spec, e.g. 'users=500 items=400 links=15000'");
  bind_opt(ingest, "--threshold", flags.threshold, "Minimum rating that becomes a link")->check(CLI::Range(1, 5));

  auto* simulate = app.add_subcommand("simulate", "Rewire until stationary and write the Gini trace");
  add_common(simulate, flags, config_path);
  add_input(simulate, flags);
  add_rewiring(simulate, flags);
  simulate->add_option_function<std::string>("--final", [&](const std::string& v) { final_path = v; },
                                              "Write the terminal network snapshot here");
  simulate->add_option_function<std::string>("--curve", [&](const std::string& v) { curve_path = v; },
                                             "Write the terminal popularity-rank curve here");

  auto* sweep_cmd = app.add_subcommand("sweep", "Stationary Gini over theta and p grids");
  add_common(sweep_cmd, flags, config_path);
  add_input(sweep_cmd, flags);
  add_rewiring(sweep_cmd, flags);
  bind_grid(sweep_cmd, "--theta-grid", flags.theta_grid, "Theta values");
  bind_grid(sweep_cmd, "--p-grid", flags.p_grid, "p values (default: --p)");
  bind_opt(sweep_cmd, "--replicas", flags.replicas, "Seeded replicas per grid point");

  auto* hysteresis = app.add_subcommand("hysteresis", "Stationary Gini from two initial stationary states");
  add_common(hysteresis, flags, config_path);
  add_input(hysteresis, flags);
  add_rewiring(hysteresis, flags);
  bind_grid(hysteresis, "--theta-grid", flags.theta_grid, "Theta values for both branches");
  bind_opt(hysteresis, "--init-low", flags.init_low, "Theta producing the low-inequality initial state");
  bind_opt(hysteresis, "--init-high", flags.init_high, "Theta producing the high-inequality initial state");
  bind_opt(hysteresis, "--replicas", flags.replicas, "Seeded replicas per grid point");

  auto* density = app.add_subcommand("density", "Stationary Gini on networks thinned by link, user or item removal");
  add_common(density, flags, config_path);
  add_input(density, flags);
  add_rewiring(density, flags);
  bind_grid(density, "--density-grid", flags.density_grid, "Fractions of the original size to retain");
  density->add_option_function<std::string>(
      "--modes",
      [&](const std::string& v) {
        std::vector<std::string> modes;
        std::size_t pos = 0;
        while (pos <= v.size()) {
          const auto comma = std::min(v.find(',', pos), v.size());
          modes.push_back(v.substr(pos, comma - pos));
          pos = comma + 1;
        }
        flags.density_modes = modes;
      },
      "Comma list of link, user, item");
  bind_grid(density, "--theta-grid", flags.theta_grid, "Recommendation methods as theta values (default: --theta)");
  bind_opt(density, "--replicas", flags.replicas, "Seeded replicas per grid point");

  auto* evaluate_cmd = app.add_subcommand("evaluate", "Precision and short-term diversity over train/probe divisions");
  add_common(evaluate_cmd, flags, config_path);
  add_input(evaluate_cmd, flags);
  add_rewiring(evaluate_cmd, flags);
  bind_opt(evaluate_cmd, "--probe-fraction", flags.probe_fraction, "Fraction of links held out");
  bind_opt(evaluate_cmd, "--divisions", flags.divisions, "Number of train/probe divisions");
  bind_grid(evaluate_cmd, "--theta-grid", flags.theta_grid, "Trade-off curve over these theta values");
  bind_opt(evaluate_cmd, "--replicas", flags.replicas, "Seeded replicas per grid point (trade-off mode)");

  auto* metrics = app.add_subcommand("metrics", "Inequality metrics of a snapshot");
  add_common(metrics, flags, config_path);
  add_input(metrics, flags);
  metrics->add_option_function<std::string>("--curve", [&](const std::string& v) { curve_path = v; },
                                             "Write the popularity-rank curve here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error("usage", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    report_error("usage", e.what());
    return kExitUsage;
  }

  RunOptions opts;
  try {
    if (!config_path.empty()) opts = load_run_config(config_path);
    opts = overlay(opts, flags);
    // Resolve everything up front so bad settings surface as usage errors.
    rewiring_config(opts);
    split_spec(opts);
    density_modes(opts);
  } catch (const std::exception& e) {
    report_error("usage", e.what());
    return kExitUsage;
  }

  try {
    if (*ingest) return run_ingest(opts);
    if (*simulate) return run_simulate(opts, final_path, curve_path);
    if (*sweep_cmd) return run_sweep(opts);
    if (*hysteresis) return run_hysteresis(opts);
    if (*density) return run_density(opts);
    if (*evaluate_cmd) return run_evaluate(opts);
    if (*metrics) return run_metrics(opts, curve_path);
  } catch (const UsageError& e) {
    report_error("usage", e.what());
    return kExitUsage;
  } catch (const InvalidInput& e) {
    report_error("usage", e.what());
    return kExitUsage;
  } catch (const ContractViolation& e) {
    // option values the resolver cannot see in advance, e.g. a synthetic size
    report_error("usage", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    report_error("runtime", e.what());
    return kExitRuntime;
  }
  return kExitUsage;
}
