#include "recsim/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "recsim/error.hpp"
#include "recsim/random.hpp"

namespace recsim {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

template <class T>
bool parse_number(std::string_view token, T& out) {
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

std::vector<std::string_view> split_fields(std::string_view line, std::string_view separators) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos < line.size()) {
    pos = line.find_first_not_of(separators, pos);
    if (pos == std::string_view::npos) break;
    const std::size_t end = std::min(line.find_first_of(separators, pos), line.size());
    fields.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return fields;
}

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  return out;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

// ---------------------------------------------------------------------------

IngestResult ingest_ratings(std::istream& in, int threshold, std::uint64_t seed) {
  if (threshold < 1 || threshold > 5)
    throw ContractViolation("rating threshold must lie in 1..5, got " + std::to_string(threshold));

  struct Raw {
    std::int64_t user;
    std::int64_t item;
  };
  std::vector<Raw> kept;
  std::vector<std::int64_t> users, items;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(std::move(line));
    const auto fields = split_fields(line, " \t");
    if (fields.empty() || fields.front().front() == '#') continue;
    std::int64_t user = 0, item = 0, stamp = 0;
    int rating = 0;
    const bool ok = (fields.size() == 3 || fields.size() == 4) && parse_number(fields[0], user) &&
                    parse_number(fields[1], item) && parse_number(fields[2], rating) &&
                    (fields.size() == 3 || parse_number(fields[3], stamp)) && user >= 0 &&
                    item >= 0 && rating >= 1 && rating <= 5;
    if (!ok) throw InvalidInput("malformed ratings line " + std::to_string(line_no) + ": '" + line + "'");
    users.push_back(user);
    items.push_back(item);
    if (rating >= threshold) kept.push_back({user, item});
  }
  if (kept.empty()) throw InvalidInput("no rating meets threshold " + std::to_string(threshold));

  // Every rated item stays in the item universe, linked or not. Users without
  // a surviving link are dropped since they have nothing to rewire.
  users.clear();
  for (const auto& r : kept) users.push_back(r.user);
  auto uniq = [](std::vector<std::int64_t>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  uniq(users);
  uniq(items);
  auto dense = [](const std::vector<std::int64_t>& ids, std::int64_t ext) {
    return static_cast<std::uint32_t>(std::lower_bound(ids.begin(), ids.end(), ext) - ids.begin());
  };

  std::vector<Edge> edges;
  edges.reserve(kept.size());
  for (const auto& r : kept) edges.push_back({dense(users, r.user), dense(items, r.item)});
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.user != b.user ? a.user < b.user : a.item < b.item;
  });
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  IngestResult result{BipartiteNetwork::from_edge_list(edges, users.size(), items.size(), seed),
                      std::move(users), std::move(items), line_no};
  return result;
}

IngestResult ingest_ratings(const fs::path& path, int threshold, std::uint64_t seed) {
  auto in = open_input(path);
  return ingest_ratings(in, threshold, seed);
}

void write_id_map(const fs::path& path, const IngestResult& ingest) {
  auto out = open_output(path);
  out << "kind,dense_id,external_id\n";
  for (std::size_t i = 0; i < ingest.user_external.size(); ++i)
    out << "user," << i << ',' << ingest.user_external[i] << '\n';
  for (std::size_t i = 0; i < ingest.item_external.size(); ++i)
    out << "item," << i << ',' << ingest.item_external[i] << '\n';
}

// ---------------------------------------------------------------------------

SyntheticSpec parse_synthetic_spec(std::string_view text) {
  SyntheticSpec spec;
  bool has_users = false, has_items = false, has_links = false;
  for (auto token : split_fields(text, " ,")) {
    const auto eq = token.find('=');
    if (eq == std::string_view::npos) throw InvalidInput("synthetic spec token '" + std::string(token) + "' lacks '='");
    const auto key = token.substr(0, eq);
    const auto value = token.substr(eq + 1);
    bool ok = false;
    if (key == "users") ok = has_users = parse_number(value, spec.users);
    else if (key == "items") ok = has_items = parse_number(value, spec.items);
    else if (key == "links") ok = has_links = parse_number(value, spec.links);
    else if (key == "groups") ok = parse_number(value, spec.groups);
    else if (key == "seed") ok = parse_number(value, spec.seed);
    else if (key == "skew") ok = parse_number(value, spec.skew);
    else if (key == "mixing") ok = parse_number(value, spec.mixing);
    else throw InvalidInput("unknown synthetic spec key '" + std::string(key) + "'");
    if (!ok) throw InvalidInput("bad value for synthetic spec key '" + std::string(key) + "'");
  }
  if (!has_users || !has_items || !has_links)
    throw InvalidInput("synthetic spec needs users=, items= and links=");
  return spec;
}

BipartiteNetwork synthetic_network(const SyntheticSpec& spec) {
  const std::size_t n = spec.users, m = spec.items, e = spec.links;
  if (n == 0 || m < 2) throw ContractViolation("synthetic network needs users >= 1 and items >= 2");
  const std::size_t cap = std::max<std::size_t>(1, m / 2);
  if (e < n || e > n * cap) throw ContractViolation("synthetic link count must lie in [users, users * items / 2]");
  if (spec.groups < 1 || spec.groups > m) throw ContractViolation("groups must lie in 1..items");
  if (!(spec.mixing >= 0.0 && spec.mixing <= 1.0)) throw ContractViolation("mixing must lie in [0, 1]");
  if (!(spec.skew >= 0.0)) throw ContractViolation("skew must be non-negative");

  Rng rng(derive_seed(spec.seed, {0x5e7}));

  // User activity: one link each, the rest spread with weights rank^-0.5.
  std::vector<double> activity(n);
  for (std::size_t i = 0; i < n; ++i) activity[i] = std::pow(static_cast<double>(i + 1), -0.5);
  std::shuffle(activity.begin(), activity.end(), rng);
  std::discrete_distribution<std::size_t> pick_user(activity.begin(), activity.end());
  std::vector<std::size_t> degree(n, 1);
  for (std::size_t placed = n; placed < e;) {
    const std::size_t u = pick_user(rng);
    if (degree[u] < cap) {
      ++degree[u];
      ++placed;
    }
  }

  // Item popularity weights, and group membership by random assignment.
  std::vector<double> weight(m);
  for (std::size_t a = 0; a < m; ++a) weight[a] = std::pow(static_cast<double>(a + 1), -spec.skew);
  std::shuffle(weight.begin(), weight.end(), rng);
  std::vector<std::vector<ItemId>> group_items(spec.groups);
  for (std::size_t a = 0; a < m; ++a) group_items[a % spec.groups].push_back(static_cast<ItemId>(a));
  std::discrete_distribution<std::size_t> pick_global(weight.begin(), weight.end());
  std::vector<std::discrete_distribution<std::size_t>> pick_group;
  for (const auto& g : group_items) {
    std::vector<double> w;
    for (ItemId a : g) w.push_back(weight[a]);
    pick_group.emplace_back(w.begin(), w.end());
  }

  std::vector<Edge> edges;
  edges.reserve(e);
  std::vector<char> held(m, 0);
  std::bernoulli_distribution mix(spec.mixing);
  for (std::size_t u = 0; u < n; ++u) {
    const std::size_t g = u % spec.groups;
    std::vector<ItemId> mine;
    std::size_t misses = 0;
    while (mine.size() < degree[u]) {
      ItemId a;
      if (misses > 64) {
        // Saturated by heavy weights: fall back to a uniform free item.
        std::uniform_int_distribution<std::size_t> any(0, m - 1);
        a = static_cast<ItemId>(any(rng));
      } else if (mix(rng)) {
        a = static_cast<ItemId>(pick_global(rng));
      } else {
        a = group_items[g][pick_group[g](rng)];
      }
      if (held[a]) {
        ++misses;
        continue;
      }
      held[a] = 1;
      misses = 0;
      mine.push_back(a);
      edges.push_back({static_cast<UserId>(u), a});
    }
    for (ItemId a : mine) held[a] = 0;
  }
  return BipartiteNetwork::from_edge_list(edges, n, m, spec.seed);
}

// ---------------------------------------------------------------------------

fs::path snapshot_header_path(const fs::path& csv_path) {
  fs::path p = csv_path;
  p.replace_extension(".json");
  return p;
}

void write_snapshot(const BipartiteNetwork& net, std::ostream& csv, std::ostream& header) {
  csv << "user,item,timestamp\n";
  for (const auto& l : net.links()) csv << l.user << ',' << l.item << ',' << l.timestamp << '\n';
  const json h = {{"n_users", net.n_users()},
                  {"n_items", net.n_items()},
                  {"n_links", net.n_links()},
                  {"clock", net.clock()},
                  {"seed", net.seed()}};
  header << h.dump(2) << '\n';
}

void write_snapshot(const BipartiteNetwork& net, const fs::path& csv_path) {
  auto csv = open_output(csv_path);
  auto header = open_output(snapshot_header_path(csv_path));
  write_snapshot(net, csv, header);
}

BipartiteNetwork read_snapshot(std::istream& csv, std::istream& header) {
  json h;
  try {
    h = json::parse(header);
  } catch (const json::exception& ex) {
    throw InvalidInput(std::string("snapshot header is not valid JSON: ") + ex.what());
  }
  for (const char* key : {"n_users", "n_items", "n_links", "clock", "seed"})
    if (!h.contains(key) || !h[key].is_number_unsigned())
      throw InvalidInput(std::string("snapshot header lacks unsigned field '") + key + "'");

  std::string line;
  if (!std::getline(csv, line) || strip_cr(line) != "user,item,timestamp")
    throw InvalidInput("snapshot CSV must start with 'user,item,timestamp'");
  std::vector<Link> links;
  std::size_t line_no = 1;
  while (std::getline(csv, line)) {
    ++line_no;
    line = strip_cr(std::move(line));
    if (line.empty()) continue;
    const auto f = split_fields(line, ",");
    Link l{};
    if (f.size() != 3 || !parse_number(f[0], l.user) || !parse_number(f[1], l.item) ||
        !parse_number(f[2], l.timestamp))
      throw InvalidInput("malformed snapshot line " + std::to_string(line_no) + ": '" + line + "'");
    links.push_back(l);
  }
  if (links.size() != h["n_links"].get<std::size_t>())
    throw InvalidInput("snapshot header declares " + h["n_links"].dump() + " links but CSV holds " +
                       std::to_string(links.size()));
  return BipartiteNetwork::from_links(h["n_users"].get<std::size_t>(), h["n_items"].get<std::size_t>(),
                                      links, h["clock"].get<Tick>(), h["seed"].get<std::uint64_t>());
}

BipartiteNetwork read_snapshot(const fs::path& csv_path) {
  auto csv = open_input(csv_path);
  auto header = open_input(snapshot_header_path(csv_path));
  return read_snapshot(csv, header);
}

std::uint64_t network_hash(const BipartiteNetwork& net) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  mix(net.n_users());
  mix(net.n_items());
  mix(net.clock());
  for (const auto& l : net.links()) {
    mix(l.user);
    mix(l.item);
    mix(l.timestamp);
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  auto [ptr, ec] = std::to_chars(buf, buf + 16, v, 16);
  std::string s(buf, ptr);
  return std::string(16 - s.size(), '0') + s;
}

// ---------------------------------------------------------------------------

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void Table::write_csv(std::ostream& out) const {
  for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      std::visit(
          [&](const auto& v) {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, double>) out << format_double(v);
            else out << v;
          },
          row[c]);
    }
    out << '\n';
  }
}

void Table::write_json(std::ostream& out) const {
  json arr = json::array();
  for (const auto& row : rows) {
    json obj = json::object();
    for (std::size_t c = 0; c < row.size() && c < columns.size(); ++c)
      std::visit([&](const auto& v) { obj[columns[c]] = v; }, row[c]);
    arr.push_back(std::move(obj));
  }
  out << arr.dump(2) << '\n';
}

Table trace_table(const SweepTrace& trace) {
  Table t{{"sweep", "gini", "herfindahl", "top1_share", "fallbacks"}, {}};
  for (const auto& r : trace.records)
    t.rows.push_back({static_cast<std::int64_t>(r.metrics.sweep), r.metrics.gini, r.metrics.herfindahl,
                      r.metrics.top1_share, static_cast<std::int64_t>(r.fallbacks)});
  return t;
}

Table curve_table(std::span<const CurvePoint> curve) {
  Table t{{"rank_norm", "pop_norm"}, {}};
  for (const auto& pt : curve) t.rows.push_back({pt.rank_norm, pt.pop_norm});
  return t;
}

}  // namespace recsim
