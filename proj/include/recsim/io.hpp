#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "recsim/metrics.hpp"
#include "recsim/network.hpp"
#include "recsim/rewiring.hpp"

namespace recsim {

// ---------------------------------------------------------------------------
// Ratings ingest
// ---------------------------------------------------------------------------

/// A thresholded ratings file with ids densified in ascending external order.
struct IngestResult {
  BipartiteNetwork network;
  std::vector<std::int64_t> user_external;  // dense user id -> external id
  std::vector<std::int64_t> item_external;  // dense item id -> external id
  std::size_t lines_read = 0;
};

/// Lines are `user item rating [timestamp]`, whitespace separated; ratings are
/// integers in 1..5. Every (user, item) with rating >= threshold becomes one
/// link. Blank lines and lines starting with '#' are skipped.
IngestResult ingest_ratings(std::istream& in, int threshold, std::uint64_t seed);
IngestResult ingest_ratings(const std::filesystem::path& path, int threshold, std::uint64_t seed);

/// Sidecar `kind,dense_id,external_id`.
void write_id_map(const std::filesystem::path& path, const IngestResult& ingest);

// ---------------------------------------------------------------------------
// Synthetic networks
// ---------------------------------------------------------------------------

struct SyntheticSpec {
  std::size_t users = 500;
  std::size_t items = 400;
  std::size_t links = 15000;
  double skew = 1.0;      // item popularity weights (rank)^-skew
  std::size_t groups = 1; // taste groups shared by users and items
  double mixing = 0.2;    // chance a draw ignores the user's group
  std::uint64_t seed = 0;
};

/// Parses `users=N items=M links=E [skew=x] [groups=g] [mixing=x] [seed=s]`,
/// separated by spaces or commas.
SyntheticSpec parse_synthetic_spec(std::string_view text);

/// Random bipartite network: every user holds at least one item, user
/// activity is mildly heterogeneous and item choice follows skewed weights.
BipartiteNetwork synthetic_network(const SyntheticSpec& spec);

// ---------------------------------------------------------------------------
// Snapshots: CSV edge list plus a JSON header next to it
// ---------------------------------------------------------------------------

std::filesystem::path snapshot_header_path(const std::filesystem::path& csv_path);
void write_snapshot(const BipartiteNetwork& net, const std::filesystem::path& csv_path);
BipartiteNetwork read_snapshot(const std::filesystem::path& csv_path);
void write_snapshot(const BipartiteNetwork& net, std::ostream& csv, std::ostream& header);
BipartiteNetwork read_snapshot(std::istream& csv, std::istream& header);

/// FNV-1a over dimensions, clock and the ordered link list.
std::uint64_t network_hash(const BipartiteNetwork& net);
std::string hex64(std::uint64_t v);

// ---------------------------------------------------------------------------
// Output tables
// ---------------------------------------------------------------------------

/// Shortest round-trip decimal representation.
std::string format_double(double v);

using Cell = std::variant<std::int64_t, double, std::string>;

/// Column-ordered result table, emitted as CSV or as a JSON array of objects.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void write_csv(std::ostream& out) const;
  void write_json(std::ostream& out) const;
};

Table trace_table(const SweepTrace& trace);  // sweep,gini,herfindahl,top1_share,fallbacks
Table curve_table(std::span<const CurvePoint> curve);  // rank_norm,pop_norm

}  // namespace recsim
