// End-to-end tests of the command-line binary: exit codes, report shape,
// determinism, config handling, and the negative controls the pipeline
// promises (corrupted input named by property, budget exhaustion).
//
// The binary path arrives in MONEX_BIN (set by the test harness); every run
// works inside a private scratch directory so config-hash-named outputs from
// different cases never collide.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <gmpxx.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
  int code = -1;
  std::string out, err;
};

const char* bin_path() {
  const char* bin = std::getenv("MONEX_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "MONEX_BIN must point at the cli binary");
  return bin;
}

fs::path scratch_root() {
  static fs::path root = [] {
    fs::path p = fs::temp_directory_path() /
                 ("monex-cli-test-" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return root;
}

// Fresh subdirectory per call site so hash-named files never cross cases.
fs::path fresh_dir(const std::string& tag) {
  static int counter = 0;
  fs::path d = scratch_root() / (tag + "-" + std::to_string(counter++));
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "missing file: " << p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary);
  out << bytes;
  REQUIRE(out.good());
}

// Runs the binary with `args` inside `dir`; `env` is a shell prefix like
// "MONEX_BUDGET=1000 " (trailing space included by the caller).
RunResult run_in(const fs::path& dir, const std::string& args,
                 const std::string& env = "") {
  fs::path out = dir / "stdout.txt", err = dir / "stderr.txt";
  std::string cmd = "cd '" + dir.string() + "' && " + env + "'" +
                    std::string(bin_path()) + "' " + args + " > '" +
                    out.string() + "' 2> '" + err.string() + "'";
  int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

json parse_report(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  REQUIRE_MESSAGE(!j.is_discarded(), "not JSON: " << text.substr(0, 200));
  return j;
}

// The forged set reused across cases: near-identity search seed, small and
// fast to reproduce (the forge itself is deterministic).
const std::string kFixtureForge =
    "forge --seed search --q 5 --ell 6 --epsilon 1/8 --depth 2 --kmax 1";

}  // namespace

TEST_CASE("usage errors exit with code two") {
  fs::path d = fresh_dir("usage");
  CHECK(run_in(d, "").code == 2);
  CHECK(run_in(d, "frobnicate").code == 2);
  CHECK(run_in(d, "walk --no-such-flag 1").code == 2);
  CHECK(run_in(d, "walk --rank 2 --rank 2").code == 2);
  CHECK(run_in(d, "walk --rank zero").code == 2);

  RunResult help = run_in(d, "help");
  CHECK(help.code == 0);
  CHECK(help.out.find("forge") != std::string::npos);
  CHECK(help.out.find("MONEX_BUDGET") != std::string::npos);
}

TEST_CASE("walk reports exact return probabilities") {
  fs::path d = fresh_dir("walk");
  RunResult r = run_in(d, "walk --rank 2 --steps 2,4,8 --out -");
  REQUIRE(r.code == 0);
  json rep = parse_report(r.out);
  CHECK(rep["command"] == "walk");
  CHECK(rep["config_hash"].get<std::string>().size() == 16);
  auto rows = rep["result"]["rows"];
  REQUIRE(rows.size() == 3);
  CHECK(rows[0]["t"] == 2);
  CHECK(rows[0]["p"] == "1/4");
  CHECK(rows[1]["p"] == "7/64");
  CHECK(rows[2]["p"] == "523/16384");
  double target = rep["result"]["target"].get<double>();
  CHECK(std::abs(target - 0.8660254037844386) < 1e-12);

  CHECK(run_in(d, "walk --steps 0").code == 2);
  CHECK(run_in(d, "walk --steps 2,junk").code == 2);
  CHECK(run_in(d, "walk --steps 9999").code == 2);
}

TEST_CASE("huge-radius forge collects every doubled word") {
  fs::path d = fresh_dir("huge");
  RunResult r = run_in(
      d, "forge --ell 8 --epsilon huge --depth 2 --kmax 1 --gens-out hg.gens --out -");
  REQUIRE_MESSAGE(r.code == 0, r.err);
  json rep = parse_report(r.out);
  auto gs = rep["result"]["generator_set"];
  size_t words = gs["stats"]["word_count"].get<size_t>();
  CHECK(words == 547);
  CHECK(gs["size"].get<size_t>() == words - 1);
  CHECK(fs::exists(d / "hg.gens"));

  // The same radius given literally is smaller than any pairwise distance in
  // the word set, so no cell can collect a collision.
  RunResult tiny = run_in(d, "forge --ell 8 --epsilon 2 --depth 2 --kmax 1");
  CHECK(tiny.code == 2);
  CHECK(tiny.err.find("collision") != std::string::npos);
}

TEST_CASE("verify passes a clean set and names the violated property") {
  fs::path d = fresh_dir("verify");
  REQUIRE(run_in(d, kFixtureForge + " --gens-out f.gens").code == 0);

  RunResult clean = run_in(d, "verify --gens f.gens --depth 2 --kmax 1 --out -");
  REQUIRE_MESSAGE(clean.code == 0, clean.err);
  json rep = parse_report(clean.out);
  CHECK(rep["result"]["properties"]["all_pass"] == true);
  CHECK(rep["result"]["set"]["size"].get<size_t>() == 13);

  // Corrupt the first generator entry off the denominator grid: n/d becomes
  // (2n+1)/(2d), which no integer Q scales back to the recorded grid.
  std::string text = slurp(d / "f.gens");
  size_t at = text.find("\ngen ");
  REQUIRE(at != std::string::npos);
  size_t start = at + 5;
  size_t slash = text.find('/', start);
  size_t end = text.find(' ', slash);
  REQUIRE(slash != std::string::npos);
  REQUIRE(end != std::string::npos);
  mpz_class num(text.substr(start, slash - start));
  mpz_class den(text.substr(slash + 1, end - slash - 1));
  mpz_class bad_num = 2 * num + 1, bad_den = 2 * den;
  spit(d / "c.gens", text.substr(0, start) + bad_num.get_str() + "/" +
                         bad_den.get_str() + text.substr(end));

  RunResult bad = run_in(d, "verify --gens c.gens --depth 2 --kmax 1");
  CHECK(bad.code == 1);
  CHECK(bad.err.find("verification failed") != std::string::npos);
  CHECK(bad.err.find("P4") != std::string::npos);
}

TEST_CASE("reports are config-hash named and reruns are byte identical") {
  fs::path d = fresh_dir("determinism");
  RunResult first = run_in(d, kFixtureForge);
  REQUIRE_MESSAGE(first.code == 0, first.err);
  // Success prints the written paths: the report first, siblings after.
  std::istringstream lines(first.out);
  std::string name;
  REQUIRE(std::getline(lines, name));
  if (name.rfind("./", 0) == 0) name = name.substr(2);
  CHECK(name.rfind("forge-", 0) == 0);
  CHECK(name.size() == std::string("forge-0123456789abcdef.json").size());

  std::string report1 = slurp(d / name);
  std::string gens1 = slurp(d / ("forge-" + name.substr(6, 16) + ".gens"));

  RunResult second = run_in(d, kFixtureForge);
  REQUIRE(second.code == 0);
  CHECK(second.out == first.out);
  CHECK(slurp(d / name) == report1);
  CHECK(slurp(d / ("forge-" + name.substr(6, 16) + ".gens")) == gens1);
}

TEST_CASE("pipeline forge to graph to spectral measurement") {
  fs::path d = fresh_dir("pipeline");
  REQUIRE(run_in(d, kFixtureForge + " --gens-out f.gens").code == 0);
  RunResult bg = run_in(d, "build-graph --gens f.gens --n 256 --graph-out g.graph.json --out -");
  REQUIRE_MESSAGE(bg.code == 0, bg.err);
  json brep = parse_report(bg.out);
  CHECK(brep["result"]["graph"]["n"] == 256);
  CHECK(brep["result"]["graph"]["monotone"] == true);
  CHECK(brep["result"]["graph"]["max_layers_per_psi"].get<int>() <= 3);

  RunResult ms = run_in(d, "measure --graph g.graph.json --spectral --out -");
  REQUIRE_MESSAGE(ms.code == 0, ms.err);
  json mrep = parse_report(ms.out);
  double sigma2 = mrep["result"]["spectral"]["sigma2"].get<double>();
  CHECK(sigma2 > 0.0);
  CHECK(sigma2 < 1.0);
}

TEST_CASE("budget environment override and flag precedence") {
  fs::path d = fresh_dir("budget");
  // 1000 nodes cannot cover the seed-search freeness scan: budget exhaustion.
  RunResult starved = run_in(d, kFixtureForge, "MONEX_BUDGET=1000 ");
  CHECK(starved.code == 3);
  CHECK(starved.err.find("budget") != std::string::npos);

  // An explicit flag outranks the environment.
  RunResult flagged =
      run_in(d, kFixtureForge + " --budget 10000000", "MONEX_BUDGET=1000 ");
  CHECK(flagged.code == 0);
}

TEST_CASE("config files apply per section and flags override them") {
  fs::path d = fresh_dir("config");
  spit(d / "run.cfg",
       "# walk settings\n"
       "[walk]\n"
       "rank = 2\n"
       "steps = 2,4\n"
       "[forge]\n"
       "q = 7\n");
  RunResult r = run_in(d, "walk --config run.cfg --out -");
  REQUIRE_MESSAGE(r.code == 0, r.err);
  json rep = parse_report(r.out);
  REQUIRE(rep["result"]["rows"].size() == 2);
  CHECK(rep["result"]["rows"][1]["t"] == 4);

  RunResult over = run_in(d, "walk --config run.cfg --steps 8 --out -");
  REQUIRE(over.code == 0);
  json orep = parse_report(over.out);
  REQUIRE(orep["result"]["rows"].size() == 1);
  CHECK(orep["result"]["rows"][0]["t"] == 8);
  CHECK(orep["config_hash"] != rep["config_hash"]);

  spit(d / "bad.cfg", "[walk]\nbogus = 1\n");
  CHECK(run_in(d, "walk --config bad.cfg").code == 2);
}

TEST_CASE("export emits each raw format") {
  fs::path d = fresh_dir("export");
  REQUIRE(run_in(d, kFixtureForge + " --gens-out f.gens").code == 0);
  REQUIRE(run_in(d, "build-graph --gens f.gens --n 16 --graph-out g.graph.json").code == 0);

  RunResult csv = run_in(d, "export --graph g.graph.json --format edge-csv --out -");
  REQUIRE(csv.code == 0);
  CHECK(csv.out.rfind("layer,i,j\n", 0) == 0);

  RunResult dot = run_in(d, "export --graph g.graph.json --format dot --out -");
  REQUIRE(dot.code == 0);
  CHECK(dot.out.find("digraph") != std::string::npos);

  RunResult lj = run_in(d, "export --graph g.graph.json --format layered-json --out -");
  REQUIRE(lj.code == 0);
  json graph = parse_report(lj.out);
  CHECK(graph["n"] == 16);
  CHECK(graph["layers"].is_array());

  CHECK(run_in(d, "export --graph g.graph.json --format png").code == 2);
}
