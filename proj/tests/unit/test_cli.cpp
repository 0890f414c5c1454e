#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

struct Sandbox {
  fs::path dir;
  Sandbox() {
    dir = fs::temp_directory_path() / ("recsim_cli_" + std::to_string(std::rand()));
    fs::create_directories(dir);
  }
  ~Sandbox() { fs::remove_all(dir); }
  std::string operator/(const std::string& name) const { return (dir / name).string(); }
};

int run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " \"" RECSIM_CLI "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string capture_stderr(const std::string& args) {
  const std::string cmd = "\"" RECSIM_CLI "\" " + args + " 2>&1 >/dev/null";
  std::string out;
  if (FILE* pipe = popen(cmd.c_str(), "r")) {
    char buf[512];
    while (fgets(buf, sizeof buf, pipe)) out += buf;
    pclose(pipe);
  }
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count_lines(const std::string& text) {
  std::size_t n = 0;
  for (char c : text) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("cli end to end") {
  Sandbox box;
  const auto snap = box / "syn.csv";
  REQUIRE(run("ingest --synthetic 'users=60 items=50 links=700' --seed 2 --output " + snap) == 0);
  CHECK(fs::exists(box / "syn.json"));
  CHECK(fs::exists(box / "syn.manifest.json"));

  SUBCASE("sweep grid arithmetic") {
    REQUIRE(run("sweep --input " + snap + " --theta-grid 0:1:0.5 --p 1 --replicas 1 --max-sweeps 40 --window 10 --output " +
                (box / "sweep.csv")) == 0);
    CHECK(count_lines(slurp(box / "sweep.csv")) == 4);
    const auto manifest = nlohmann::json::parse(slurp(box / "sweep.manifest.json"));
    CHECK(manifest["command"] == "sweep");
    CHECK(manifest["resolved"]["seed"] == 0);
    CHECK(manifest["dataset"]["n_links"] == 700);
  }

  SUBCASE("byte-identical output across runs and worker counts") {
    const std::string base = "sweep --input " + snap + " --theta-grid 0,1 --replicas 2 --max-sweeps 40 --window 10 --seed 5 ";
    REQUIRE(run(base + "--jobs 1 --output " + (box / "a.csv")) == 0);
    REQUIRE(run(base + "--jobs 3 --output " + (box / "b.csv")) == 0);
    CHECK(slurp(box / "a.csv") == slurp(box / "b.csv"));
    CHECK(slurp(box / "a.manifest.json") == slurp(box / "b.manifest.json"));
  }

  SUBCASE("flags override the config file") {
    std::ofstream(box / "cfg.json") << R"({"theta": 0.2, "max_sweeps": 30, "window": 5})";
    REQUIRE(run("simulate --input " + snap + " --config " + (box / "cfg.json") + " --theta 0.7 --output " +
                (box / "t.csv")) == 0);
    const auto manifest = nlohmann::json::parse(slurp(box / "t.manifest.json"));
    CHECK(manifest["resolved"]["theta"] == 0.7);
    CHECK(manifest["resolved"]["max_sweeps"] == 30);
    CHECK(manifest["resolved"]["p"] == 1.0);
  }

  SUBCASE("default output directory comes from the environment") {
    REQUIRE(run("metrics --input " + snap + " --output m.csv", "cd " + box.dir.string() + " &&") == 0);
    REQUIRE(run("simulate --input " + snap + " --max-sweeps 5", "RECSIM_OUTPUT_DIR=" + (box / "out")) == 0);
    CHECK(fs::exists(box / "out/trace.csv"));
    CHECK(count_lines(slurp(box / "out/trace.csv")) == 7);
  }

  SUBCASE("simulate writes the final snapshot and curve") {
    REQUIRE(run("simulate --input " + snap + " --max-sweeps 5 --output " + (box / "t.csv") + " --final " +
                (box / "fin.csv") + " --curve " + (box / "curve.csv")) == 0);
    REQUIRE(run("metrics --input " + (box / "fin.csv") + " --format json --output " + (box / "m.json")) == 0);
    CHECK(nlohmann::json::parse(slurp(box / "m.json"))["n_links"] == 700);
    CHECK(count_lines(slurp(box / "curve.csv")) == 51);
  }

  SUBCASE("usage errors are distinct from success") {
    CHECK(run("simulate --bogus") == 2);
    CHECK(run("simulate --input " + (box / "missing.csv")) == 2);
    CHECK(run("simulate --input " + snap + " --theta 4") == 2);
    CHECK(run("simulate --input " + snap + " --attachment xx") == 2);
    std::ofstream(box / "bad.json") << R"({"thetaa": 1})";
    CHECK(run("simulate --input " + snap + " --config " + (box / "bad.json")) == 2);
    CHECK(run("ingest --synthetic 'users=2 items=2 links=50'") == 2);
    const auto err = nlohmann::json::parse(capture_stderr("simulate --input " + (box / "missing.csv")));
    CHECK(err["error"]["kind"] == "usage");
    CHECK(err["error"]["message"].get<std::string>().find("missing.csv") != std::string::npos);
  }
}
