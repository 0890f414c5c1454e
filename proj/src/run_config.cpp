#include "recsim/run_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>

#include "recsim/attachment.hpp"
#include "recsim/error.hpp"

namespace recsim {

using nlohmann::json;

namespace {

double parse_double(std::string_view token) {
  double v = 0.0;
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, v);
  if (ec != std::errc{} || ptr != end || token.empty())
    throw InvalidInput("'" + std::string(token) + "' is not a number");
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  return s;
}

double round12(double v) { return std::round(v * 1e12) / 1e12; }

template <class T>
T get_as(const json& v, const std::string& key) {
  try {
    if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) throw InvalidInput("");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw InvalidInput("");
      if constexpr (std::is_unsigned_v<T>)
        if (!v.is_number_unsigned()) throw InvalidInput("");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw InvalidInput("");
    }
    return v.get<T>();
  } catch (const std::exception&) {
    throw InvalidInput("config key '" + key + "' has the wrong type");
  }
}

std::vector<double> grid_from(const json& v, const std::string& key) {
  if (v.is_string()) return parse_grid(v.get<std::string>());
  if (!v.is_array()) throw InvalidInput("config key '" + key + "' must be an array or a grid string");
  std::vector<double> out;
  for (const auto& x : v) out.push_back(get_as<double>(x, key));
  if (out.empty()) throw InvalidInput("config key '" + key + "' is empty");
  return out;
}

std::vector<std::string> strings_from(const json& v, const std::string& key) {
  std::vector<std::string> out;
  if (v.is_string()) {
    std::string_view s = v.get_ref<const std::string&>();
    std::size_t pos = 0;
    while (pos <= s.size()) {
      const auto comma = std::min(s.find(',', pos), s.size());
      out.emplace_back(trim(s.substr(pos, comma - pos)));
      pos = comma + 1;
    }
    return out;
  }
  if (!v.is_array()) throw InvalidInput("config key '" + key + "' must be an array or a comma list");
  for (const auto& x : v) out.push_back(get_as<std::string>(x, key));
  return out;
}

template <class T>
void put(json& doc, const char* key, const std::optional<T>& v) {
  if (v) doc[key] = *v;
}

}  // namespace

std::vector<double> parse_grid(std::string_view text) {
  text = trim(text);
  std::vector<double> out;
  if (text.find(':') != std::string_view::npos) {
    const auto c1 = text.find(':');
    const auto c2 = text.find(':', c1 + 1);
    if (c2 == std::string_view::npos) throw InvalidInput("grid '" + std::string(text) + "' must be start:stop:step");
    const double start = parse_double(trim(text.substr(0, c1)));
    const double stop = parse_double(trim(text.substr(c1 + 1, c2 - c1 - 1)));
    const double step = parse_double(trim(text.substr(c2 + 1)));
    if (!(step > 0.0) || stop < start) throw InvalidInput("grid '" + std::string(text) + "' is empty or has a non-positive step");
    const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < n; ++i) out.push_back(round12(start + static_cast<double>(i) * step));
    return out;
  }
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = std::min(text.find(',', pos), text.size());
    out.push_back(parse_double(trim(text.substr(pos, comma - pos))));
    pos = comma + 1;
  }
  return out;
}

RunOptions parse_run_config(const json& doc) {
  if (!doc.is_object()) throw InvalidInput("config document must be a JSON object");
  RunOptions o;
  using Setter = std::function<void(const json&, const std::string&)>;
  const std::map<std::string, Setter> setters = {
      {"input", [&](const json& v, const std::string& k) { o.input = get_as<std::string>(v, k); }},
      {"ratings", [&](const json& v, const std::string& k) { o.ratings = get_as<std::string>(v, k); }},
      {"synthetic", [&](const json& v, const std::string& k) { o.synthetic = get_as<std::string>(v, k); }},
      {"threshold", [&](const json& v, const std::string& k) { o.threshold = get_as<int>(v, k); }},
      {"output", [&](const json& v, const std::string& k) { o.output = get_as<std::string>(v, k); }},
      {"format", [&](const json& v, const std::string& k) { o.format = get_as<std::string>(v, k); }},
      {"theta", [&](const json& v, const std::string& k) { o.theta = get_as<double>(v, k); }},
      {"p", [&](const json& v, const std::string& k) { o.p = get_as<double>(v, k); }},
      {"list_length", [&](const json& v, const std::string& k) { o.list_length = get_as<std::size_t>(v, k); }},
      {"attachment", [&](const json& v, const std::string& k) { o.attachment = get_as<std::string>(v, k); }},
      {"seed", [&](const json& v, const std::string& k) { o.seed = get_as<std::uint64_t>(v, k); }},
      {"max_sweeps", [&](const json& v, const std::string& k) { o.max_sweeps = get_as<std::size_t>(v, k); }},
      {"window", [&](const json& v, const std::string& k) { o.window = get_as<std::size_t>(v, k); }},
      {"eps", [&](const json& v, const std::string& k) { o.eps = get_as<double>(v, k); }},
      {"theta_grid", [&](const json& v, const std::string& k) { o.theta_grid = grid_from(v, k); }},
      {"p_grid", [&](const json& v, const std::string& k) { o.p_grid = grid_from(v, k); }},
      {"density_grid", [&](const json& v, const std::string& k) { o.density_grid = grid_from(v, k); }},
      {"density_modes", [&](const json& v, const std::string& k) { o.density_modes = strings_from(v, k); }},
      {"init_low", [&](const json& v, const std::string& k) { o.init_low = get_as<double>(v, k); }},
      {"init_high", [&](const json& v, const std::string& k) { o.init_high = get_as<double>(v, k); }},
      {"replicas", [&](const json& v, const std::string& k) { o.replicas = get_as<std::size_t>(v, k); }},
      {"jobs", [&](const json& v, const std::string& k) { o.jobs = get_as<std::size_t>(v, k); }},
      {"probe_fraction", [&](const json& v, const std::string& k) { o.probe_fraction = get_as<double>(v, k); }},
      {"divisions", [&](const json& v, const std::string& k) { o.divisions = get_as<std::size_t>(v, k); }},
  };
  for (const auto& [key, value] : doc.items()) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw InvalidInput("unknown config key '" + key + "'");
    it->second(value, key);
  }
  return o;
}

RunOptions load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config '" + path + "'");
  try {
    return parse_run_config(json::parse(in));
  } catch (const json::parse_error& ex) {
    throw InvalidInput("config '" + path + "' is not valid JSON: " + ex.what());
  }
}

RunOptions overlay(RunOptions base, const RunOptions& top) {
  auto take = [](auto& dst, const auto& src) {
    if (src) dst = src;
  };
  take(base.input, top.input);
  take(base.ratings, top.ratings);
  take(base.synthetic, top.synthetic);
  take(base.threshold, top.threshold);
  take(base.output, top.output);
  take(base.format, top.format);
  take(base.theta, top.theta);
  take(base.p, top.p);
  take(base.list_length, top.list_length);
  take(base.attachment, top.attachment);
  take(base.seed, top.seed);
  take(base.max_sweeps, top.max_sweeps);
  take(base.window, top.window);
  take(base.eps, top.eps);
  take(base.theta_grid, top.theta_grid);
  take(base.p_grid, top.p_grid);
  take(base.density_grid, top.density_grid);
  take(base.density_modes, top.density_modes);
  take(base.init_low, top.init_low);
  take(base.init_high, top.init_high);
  take(base.replicas, top.replicas);
  take(base.jobs, top.jobs);
  take(base.probe_fraction, top.probe_fraction);
  take(base.divisions, top.divisions);
  return base;
}

RewiringConfig rewiring_config(const RunOptions& o) {
  RewiringConfig c;
  c.p = o.p.value_or(c.p);
  c.theta = o.theta.value_or(c.theta);
  c.list_length = o.list_length.value_or(c.list_length);
  if (o.attachment) c.attachment = parse_attachment(*o.attachment);
  c.seed = o.seed.value_or(c.seed);
  c.max_sweeps = o.max_sweeps.value_or(c.max_sweeps);
  c.window = o.window.value_or(c.window);
  c.eps = o.eps.value_or(c.eps);
  c.validate();
  return c;
}

SplitSpec split_spec(const RunOptions& o) {
  SplitSpec s;
  s.probe_fraction = o.probe_fraction.value_or(s.probe_fraction);
  s.n_divisions = o.divisions.value_or(s.n_divisions);
  s.seed = o.seed.value_or(s.seed);
  s.validate();
  return s;
}

ExperimentOptions experiment_options(const RunOptions& o) {
  ExperimentOptions e;
  e.replicas = o.replicas.value_or(e.replicas);
  e.jobs = o.jobs.value_or(e.jobs);
  return e;
}

std::vector<double> theta_grid(const RunOptions& o) { return o.theta_grid.value_or(parse_grid("0:1:0.05")); }
std::vector<double> p_grid(const RunOptions& o) { return o.p_grid.value_or(std::vector<double>{0.25, 0.5, 0.75, 1.0}); }
std::vector<double> density_grid(const RunOptions& o) { return o.density_grid.value_or(std::vector<double>{1.0, 0.75, 0.5}); }

std::vector<DensityMode> density_modes(const RunOptions& o) {
  std::vector<DensityMode> out;
  for (const auto& m : o.density_modes.value_or(std::vector<std::string>{"link"})) out.push_back(parse_density_mode(m));
  return out;
}

json to_json(const RunOptions& o) {
  json doc = json::object();
  put(doc, "input", o.input);
  put(doc, "ratings", o.ratings);
  put(doc, "synthetic", o.synthetic);
  put(doc, "threshold", o.threshold);
  put(doc, "output", o.output);
  put(doc, "format", o.format);
  put(doc, "theta", o.theta);
  put(doc, "p", o.p);
  put(doc, "list_length", o.list_length);
  put(doc, "attachment", o.attachment);
  put(doc, "seed", o.seed);
  put(doc, "max_sweeps", o.max_sweeps);
  put(doc, "window", o.window);
  put(doc, "eps", o.eps);
  put(doc, "theta_grid", o.theta_grid);
  put(doc, "p_grid", o.p_grid);
  put(doc, "density_grid", o.density_grid);
  put(doc, "density_modes", o.density_modes);
  put(doc, "init_low", o.init_low);
  put(doc, "init_high", o.init_high);
  put(doc, "replicas", o.replicas);
  put(doc, "jobs", o.jobs);
  put(doc, "probe_fraction", o.probe_fraction);
  put(doc, "divisions", o.divisions);
  return doc;
}

}  // namespace recsim
