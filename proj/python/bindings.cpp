#include <optional>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "recsim/attachment.hpp"
#include "recsim/error.hpp"
#include "recsim/evaluation.hpp"
#include "recsim/experiments.hpp"
#include "recsim/io.hpp"
#include "recsim/metrics.hpp"
#include "recsim/recommender.hpp"
#include "recsim/rewiring.hpp"

namespace py = pybind11;
using namespace recsim;

namespace {

std::vector<std::uint32_t> degrees_of(const BipartiteNetwork& net) {
  const auto k = net.item_degrees();
  return {k.begin(), k.end()};
}

py::dict gstar_dict(const GstarStats& s) {
  py::dict d;
  d["mean"] = s.mean;
  d["sd"] = s.sd;
  d["values"] = s.values;
  d["sweeps"] = s.sweeps;
  d["stationary_runs"] = s.stationary_runs;
  return d;
}

py::dict trace_dict(const SweepTrace& t) {
  std::vector<double> g, h, top;
  std::vector<std::uint64_t> fallbacks;
  for (const auto& r : t.records) {
    g.push_back(r.metrics.gini);
    h.push_back(r.metrics.herfindahl);
    top.push_back(r.metrics.top1_share);
    fallbacks.push_back(r.fallbacks);
  }
  py::dict d;
  d["gini"] = g;
  d["herfindahl"] = h;
  d["top1_share"] = top;
  d["fallbacks"] = fallbacks;
  d["sweeps"] = t.sweeps();
  d["terminal"] = std::string(to_string(t.terminal));
  d["stationary_gini"] = t.stationary_gini();
  return d;
}

RewiringConfig make_config(double theta, double p, std::size_t list_length, const std::string& attachment,
                           std::uint64_t seed, std::size_t max_sweeps, std::size_t window, double eps) {
  RewiringConfig c;
  c.theta = theta;
  c.p = p;
  c.list_length = list_length;
  c.attachment = parse_attachment(attachment);
  c.seed = seed;
  c.max_sweeps = max_sweeps;
  c.window = window;
  c.eps = eps;
  c.validate();
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Co-evolution of an item-based recommender and its users";
  m.attr("__version__") = RECSIM_VERSION;

  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_ValueError);

  py::class_<BipartiteNetwork>(m, "Network")
      .def_static(
          "from_edges",
          [](const std::vector<std::pair<UserId, ItemId>>& pairs, std::uint64_t seed, std::optional<std::size_t> n_users,
             std::optional<std::size_t> n_items) {
            std::vector<Edge> edges;
            for (auto [u, i] : pairs) edges.push_back({u, i});
            if (n_users || n_items) {
              std::size_t nu = 0, ni = 0;
              for (const auto& e : edges) {
                nu = std::max<std::size_t>(nu, e.user + 1);
                ni = std::max<std::size_t>(ni, e.item + 1);
              }
              return BipartiteNetwork::from_edge_list(edges, n_users.value_or(nu), n_items.value_or(ni), seed);
            }
            return BipartiteNetwork::from_edge_list(edges, seed);
          },
          py::arg("edges"), py::arg("seed") = 0, py::arg("n_users") = py::none(), py::arg("n_items") = py::none(),
          "Network from (user, item) pairs; timestamps are a seeded random order.")
      .def_property_readonly("n_users", &BipartiteNetwork::n_users)
      .def_property_readonly("n_items", &BipartiteNetwork::n_items)
      .def_property_readonly("n_links", &BipartiteNetwork::n_links)
      .def_property_readonly("clock", &BipartiteNetwork::clock)
      .def("item_degrees", &degrees_of)
      .def("user_degrees", &BipartiteNetwork::user_degrees)
      .def("has_link", &BipartiteNetwork::has_link)
      .def("common_neighbors", &BipartiteNetwork::common_neighbors)
      .def("oldest_link",
           [](const BipartiteNetwork& n, UserId u) {
             const auto l = n.oldest_link(u);
             return py::make_tuple(l.item, l.timestamp);
           })
      .def("rewire_link", &BipartiteNetwork::rewire_link, py::arg("user"), py::arg("old_item"), py::arg("new_item"))
      .def("links",
           [](const BipartiteNetwork& n) {
             std::vector<std::tuple<UserId, ItemId, Tick>> out;
             for (const auto& l : n.links()) out.emplace_back(l.user, l.item, l.timestamp);
             return out;
           },
           "(user, item, timestamp) triples ordered by user, then timestamp.")
      .def("hash", [](const BipartiteNetwork& n) { return hex64(network_hash(n)); })
      .def("copy", [](const BipartiteNetwork& n) { return BipartiteNetwork(n); })
      .def("__eq__", [](const BipartiteNetwork& a, const BipartiteNetwork& b) { return a == b; })
      .def("__repr__", [](const BipartiteNetwork& n) {
        return "<Network users=" + std::to_string(n.n_users()) + " items=" + std::to_string(n.n_items()) +
               " links=" + std::to_string(n.n_links()) + ">";
      });

  // io
  m.def(
      "ingest_ratings",
      [](const std::filesystem::path& path, int threshold, std::uint64_t seed) {
        auto r = ingest_ratings(path, threshold, seed);
        return py::make_tuple(std::move(r.network), r.user_external, r.item_external);
      },
      py::arg("path"), py::arg("threshold") = 3, py::arg("seed") = 0,
      "Returns (network, external user ids, external item ids).");
  m.def(
      "synthetic_network",
      [](std::size_t users, std::size_t items, std::size_t links, double skew, std::size_t groups, double mixing,
         std::uint64_t seed) { return synthetic_network({users, items, links, skew, groups, mixing, seed}); },
      py::arg("users") = 500, py::arg("items") = 400, py::arg("links") = 15000, py::arg("skew") = 1.0,
      py::arg("groups") = 1, py::arg("mixing") = 0.2, py::arg("seed") = 0);
  m.def("write_snapshot", py::overload_cast<const BipartiteNetwork&, const std::filesystem::path&>(&write_snapshot),
        py::arg("network"), py::arg("path"));
  m.def("read_snapshot", py::overload_cast<const std::filesystem::path&>(&read_snapshot), py::arg("path"));

  // metrics
  m.def("gini", [](const std::vector<double>& k) { return gini(k); }, py::arg("degrees"));
  m.def("herfindahl", [](const std::vector<double>& k) { return herfindahl(k); }, py::arg("degrees"));
  m.def("top_share", [](const std::vector<double>& k, double f) { return top_share(k, f); }, py::arg("degrees"),
        py::arg("fraction") = 0.01);
  m.def(
      "popularity_rank_curve",
      [](const std::vector<double>& k) {
        std::vector<std::pair<double, double>> out;
        for (const auto& p : popularity_rank_curve(k)) out.emplace_back(p.rank_norm, p.pop_norm);
        return out;
      },
      py::arg("degrees"), "(normalized rank, normalized popularity) pairs, most popular first.");

  // recommender
  m.def("item_similarity", &item_similarity, py::arg("network"), py::arg("a"), py::arg("b"), py::arg("theta"));
  m.def(
      "icf_scores",
      [](const BipartiteNetwork& n, UserId u, double theta) {
        std::vector<std::pair<ItemId, double>> out;
        for (const auto& s : icf_scores(n, u, theta)) out.emplace_back(s.item, s.score);
        return out;
      },
      py::arg("network"), py::arg("user"), py::arg("theta"));
  m.def(
      "top_list",
      [](const BipartiteNetwork& n, UserId u, double theta, std::size_t L, std::uint64_t seed) {
        Rng rng(seed);
        std::vector<std::pair<ItemId, double>> out;
        for (const auto& s : top_list(n, u, theta, L, rng)) out.emplace_back(s.item, s.score);
        return out;
      },
      py::arg("network"), py::arg("user"), py::arg("theta"), py::arg("list_length") = 20, py::arg("seed") = 0);

  // rewiring
  py::class_<RewiringConfig>(m, "RewiringConfig")
      .def(py::init(&make_config), py::arg("theta") = 0.0, py::arg("p") = 1.0, py::arg("list_length") = 20,
           py::arg("attachment") = "pa", py::arg("seed") = 0, py::arg("max_sweeps") = 2000, py::arg("window") = 50,
           py::arg("eps") = 0.002)
      .def_readwrite("theta", &RewiringConfig::theta)
      .def_readwrite("p", &RewiringConfig::p)
      .def_readwrite("list_length", &RewiringConfig::list_length)
      .def_readwrite("seed", &RewiringConfig::seed)
      .def_readwrite("max_sweeps", &RewiringConfig::max_sweeps)
      .def_readwrite("window", &RewiringConfig::window)
      .def_readwrite("eps", &RewiringConfig::eps)
      .def_property(
          "attachment", [](const RewiringConfig& c) { return std::string(to_string(c.attachment)); },
          [](RewiringConfig& c, const std::string& s) { c.attachment = parse_attachment(s); });

  m.def(
      "run_to_stationarity",
      [](BipartiteNetwork& net, const RewiringConfig& cfg) {
        SweepTrace trace;
        {
          py::gil_scoped_release release;
          trace = run_to_stationarity(net, cfg);
        }
        return trace_dict(trace);
      },
      py::arg("network"), py::arg("config"), "Rewires the network in place and returns the per-sweep trace.");
  m.def(
      "sweep",
      [](BipartiteNetwork& net, const RewiringConfig& cfg, std::uint64_t seed) {
        Rng rng(seed);
        return sweep(net, cfg, rng);
      },
      py::arg("network"), py::arg("config"), py::arg("seed"), "One sweep in place; returns the fallback count.");

  // evaluation
  m.def(
      "evaluate",
      [](const BipartiteNetwork& net, double theta, std::size_t L, double probe_fraction, std::size_t divisions,
         std::uint64_t seed, std::size_t jobs) {
        SplitSpec spec{probe_fraction, divisions, seed};
        spec.validate();
        EvaluationReport r;
        {
          py::gil_scoped_release release;
          r = evaluate(net, spec, theta, L, jobs);
        }
        py::dict d;
        d["theta"] = r.theta;
        d["precision"] = r.precision;
        d["short_term_diversity"] = r.short_term_diversity;
        d["precision_per_division"] = r.precision_per_division();
        return d;
      },
      py::arg("network"), py::arg("theta"), py::arg("list_length") = 20, py::arg("probe_fraction") = 0.1,
      py::arg("divisions") = 10, py::arg("seed") = 0, py::arg("jobs") = 1);

  // experiments
  m.def(
      "theta_sweep",
      [](const BipartiteNetwork& net, const std::vector<double>& thetas, const std::vector<double>& ps,
         const RewiringConfig& base, std::size_t replicas, std::size_t jobs) {
        std::vector<ThetaSweepRow> rows;
        {
          py::gil_scoped_release release;
          rows = theta_sweep(net, thetas, ps, base, {replicas, jobs});
        }
        py::list out;
        for (const auto& r : rows) {
          py::dict d = gstar_dict(r.gstar);
          d["theta"] = r.theta;
          d["p"] = r.p;
          out.append(d);
        }
        return out;
      },
      py::arg("network"), py::arg("thetas"), py::arg("ps"), py::arg("config"), py::arg("replicas") = 5,
      py::arg("jobs") = 1);
  m.def(
      "hysteresis_run",
      [](const BipartiteNetwork& net, const std::vector<double>& thetas, const RewiringConfig& base, double init_low,
         double init_high, std::size_t replicas, std::size_t jobs) {
        HysteresisResult r;
        {
          py::gil_scoped_release release;
          r = hysteresis_run(net, {base, init_low, init_high, thetas}, {replicas, jobs});
        }
        py::list rows;
        for (const auto& row : r.rows) {
          py::dict d = gstar_dict(row.gstar);
          d["init_theta"] = row.init_theta;
          d["theta"] = row.theta;
          rows.append(d);
        }
        py::dict out;
        out["low_init"] = gstar_dict(r.low_init);
        out["high_init"] = gstar_dict(r.high_init);
        out["rows"] = rows;
        return out;
      },
      py::arg("network"), py::arg("thetas"), py::arg("config"), py::arg("init_low") = 1.0, py::arg("init_high") = 0.0,
      py::arg("replicas") = 5, py::arg("jobs") = 1);
  m.def(
      "modify_density",
      [](const BipartiteNetwork& net, const std::string& mode, double retain, std::uint64_t seed) {
        return modify_density(net, {parse_density_mode(mode), retain, seed}).network;
      },
      py::arg("network"), py::arg("mode"), py::arg("retain"), py::arg("seed") = 0);
  m.def(
      "density_sweep",
      [](const BipartiteNetwork& net, const std::vector<double>& retains, const std::vector<std::string>& mode_names,
         const std::vector<double>& thetas, const RewiringConfig& base, std::size_t replicas, std::size_t jobs) {
        std::vector<DensityMode> modes;
        for (const auto& s : mode_names) modes.push_back(parse_density_mode(s));
        std::vector<DensitySweepRow> rows;
        {
          py::gil_scoped_release release;
          rows = density_sweep(net, retains, modes, thetas, base, {replicas, jobs});
        }
        py::list out;
        for (const auto& r : rows) {
          py::dict d = gstar_dict(r.gstar);
          d["mode"] = std::string(to_string(r.mode));
          d["retain"] = r.retain;
          d["theta"] = r.theta;
          d["density"] = r.density;
          d["mean_item_degree"] = r.mean_item_degree;
          d["original_gini"] = r.original_gini;
          out.append(d);
        }
        return out;
      },
      py::arg("network"), py::arg("retains"), py::arg("modes"), py::arg("thetas"), py::arg("config"),
      py::arg("replicas") = 5, py::arg("jobs") = 1);
}
