#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "recsim/error.hpp"
#include "recsim/io.hpp"
#include "recsim/metrics.hpp"

using namespace recsim;
namespace fs = std::filesystem;

TEST_CASE("a single line above threshold becomes a link") {
  std::istringstream in("3 7 4\n");
  const auto r = ingest_ratings(in, 3, 0);
  CHECK(r.network.n_links() == 1);
  CHECK(r.user_external == std::vector<std::int64_t>{3});
  CHECK(r.item_external == std::vector<std::int64_t>{7});
  CHECK(r.lines_read == 1);
}

TEST_CASE("threshold filtering, duplicates and densification") {
  std::istringstream in(
      "# comment\n"
      "10\t5\t5\t881250949\n"
      "10 5 4\n"        // duplicate pair collapses
      "10 9 2\n"        // below threshold but item 9 is kept in the universe
      "20 9 3\n"
      "30 5 1\n"        // user 30 has no kept link and is dropped
      "\n");
  const auto r = ingest_ratings(in, 3, 1);
  CHECK(r.network.n_links() == 2);
  CHECK(r.user_external == std::vector<std::int64_t>{10, 20});
  CHECK(r.item_external == std::vector<std::int64_t>{5, 9});
  CHECK(r.network.has_link(0, 0));
  CHECK(r.network.has_link(1, 1));
  CHECK_FALSE(r.network.has_link(0, 1));
}

TEST_CASE("ingest errors") {
  std::istringstream none("1 1 2\n");
  CHECK_THROWS_AS(ingest_ratings(none, 3, 0), InvalidInput);
  std::istringstream any("1 1 5\n");
  CHECK_THROWS(ingest_ratings(any, 6, 0));
  std::istringstream bad("1 1 5\n1 x 4\n");
  try {
    ingest_ratings(bad, 3, 0);
    FAIL("expected an error");
  } catch (const InvalidInput& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  std::istringstream out_of_scale("1 1 7\n");
  CHECK_THROWS_AS(ingest_ratings(out_of_scale, 3, 0), InvalidInput);
  std::istringstream negative("-1 1 4\n");
  CHECK_THROWS_AS(ingest_ratings(negative, 3, 0), InvalidInput);
}

TEST_CASE("ingest is idempotent for a fixed seed") {
  const std::string text = "1 1 5\n1 2 4\n2 1 3\n3 3 5\n3 1 4\n";
  std::istringstream a(text), b(text);
  CHECK(ingest_ratings(a, 3, 5).network.links() == ingest_ratings(b, 3, 5).network.links());
}

TEST_CASE("snapshot round trip is exact") {
  SyntheticSpec spec;
  spec.users = 40;
  spec.items = 30;
  spec.links = 300;
  spec.seed = 2;
  const auto net = synthetic_network(spec);
  std::stringstream csv, header;
  write_snapshot(net, csv, header);
  const auto back = read_snapshot(csv, header);
  CHECK(back == net);
  CHECK(back.links() == net.links());
  CHECK(back.seed() == net.seed());
  CHECK(network_hash(back) == network_hash(net));

  const auto dir = fs::temp_directory_path() / "recsim_io_test";
  fs::create_directories(dir);
  write_snapshot(net, dir / "net.csv");
  CHECK(fs::exists(dir / "net.json"));
  CHECK(read_snapshot(dir / "net.csv") == net);
  fs::remove_all(dir);
}

TEST_CASE("corrupt snapshots are rejected") {
  std::stringstream csv("user,item,timestamp\n0,0,1\n"), header(R"({"n_users":1,"n_items":1,"n_links":2,"clock":2,"seed":0})");
  CHECK_THROWS_AS(read_snapshot(csv, header), InvalidInput);
  std::stringstream csv2("user,item\n"), header2(R"({"n_users":1,"n_items":1,"n_links":0,"clock":1,"seed":0})");
  CHECK_THROWS_AS(read_snapshot(csv2, header2), InvalidInput);
  std::stringstream csv3("user,item,timestamp\n"), header3("not json");
  CHECK_THROWS_AS(read_snapshot(csv3, header3), InvalidInput);
}

TEST_CASE("synthetic generator honours its spec") {
  const auto spec = parse_synthetic_spec("users=300 items=200 links=6000 skew=1.2 seed=4");
  CHECK(spec.users == 300);
  CHECK(spec.skew == 1.2);
  const auto net = synthetic_network(spec);
  CHECK(net.n_users() == 300);
  CHECK(net.n_items() == 200);
  CHECK(net.n_links() == 6000);
  for (UserId u = 0; u < 300; ++u) CHECK(net.user_degree(u) >= 1);
  CHECK(network_hash(synthetic_network(spec)) == network_hash(net));
  // more skew, more inequality
  auto flat = spec;
  flat.skew = 0.0;
  CHECK(gini(synthetic_network(flat).item_degrees()) < gini(net.item_degrees()));
  CHECK_THROWS_AS(parse_synthetic_spec("users=3"), InvalidInput);
  CHECK_THROWS_AS(parse_synthetic_spec("users=3 items=4 links=5 color=red"), InvalidInput);
  CHECK(parse_synthetic_spec("users=3,items=4,links=5").links == 5);
}

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 0.8957, 1e-300, 123456789.0}) CHECK(std::stod(format_double(v)) == v);
  CHECK(format_double(0.25) == "0.25");
}

TEST_CASE("tables write csv and json") {
  Table t{{"a", "b", "c"}, {{std::int64_t{1}, 0.5, std::string("x")}}};
  std::ostringstream csv, json;
  t.write_csv(csv);
  t.write_json(json);
  CHECK(csv.str() == "a,b,c\n1,0.5,x\n");
  CHECK(json.str().find("\"c\": \"x\"") != std::string::npos);
}
