#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  std::string cmd = std::string(LCX_BIN) + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  RunResult rr;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) rr.out.append(buf, n);
  int status = pclose(p);
  rr.exit = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return rr;
}

fs::path tmpdir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("lcx_cli_" + std::to_string(getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string put(const std::string& name, const std::string& content) {
  fs::path p = tmpdir() / name;
  std::ofstream f(p);
  f << content;
  return p.string();
}

}  // namespace

TEST_CASE("match enumerate lists both stable matchings") {
  std::string f = put("two_stable.json", R"({
    "men": ["m0", "m1"], "women": ["w0", "w1"],
    "men_pref": [[0, 1], [1, 0]], "women_pref": [[1, 0], [0, 1]]})");
  RunResult rr = run("match " + f + " --enumerate");
  CHECK(rr.exit == 0);
  CHECK(rr.out.find("\"count\": 2") != std::string::npos);
  CHECK(rr.out.find("\"m0\": \"w0\"") != std::string::npos);
  CHECK(rr.out.find("\"m0\": \"w1\"") != std::string::npos);

  RunResult opt = run("match-optimal " + f);
  CHECK(opt.exit == 0);
  CHECK(opt.out.find("\"m0\": \"w0\"") != std::string::npos);  // men's favourites
  CHECK(opt.out.find("\"stable\": true") != std::string::npos);
}

TEST_CASE("manipulate reports no profitable misreport") {
  std::string f = put("full3.json", R"({
    "men": ["a", "b", "c"], "women": ["x", "y", "z"],
    "men_pref": [[0, 1, 2], [0, 2, 1], [1, 0, 2]],
    "women_pref": [[2, 1, 0], [0, 1, 2], [1, 2, 0]]})");
  RunResult rr = run("manipulate " + f + " --man 0");
  CHECK(rr.exit == 0);
  CHECK(rr.out.find("\"profitable_misreport_exists\": false") != std::string::npos);
}

TEST_CASE("garp on the violating pair exits 1 with a cycle") {
  std::string f = put("garp_bad.json", R"({"observations": [
    {"price": ["2", "1"], "bundle": ["2", "1"]},
    {"price": ["1", "2"], "bundle": ["1", "2"]}]})");
  RunResult rr = run("garp " + f);
  CHECK(rr.exit == 1);
  CHECK(rr.out.find("\"consistent\": false") != std::string::npos);
  CHECK(rr.out.find("\"cycle\"") != std::string::npos);
  CHECK(rr.out.find("\"afriat_feasible\": false") != std::string::npos);

  RunResult sat = run("rationalize " + f + " --n 4 --no-midpoints");
  CHECK(sat.exit == 1);
  CHECK(sat.out.find("\"status\": \"unsat\"") != std::string::npos);
}

TEST_CASE("rationalize a consistent dataset") {
  std::string f = put("garp_ok.json", R"({"observations": [
    {"price": ["1", "1"], "bundle": ["2", "0"]},
    {"price": ["1", "1"], "bundle": ["0", "3"]}]})");
  RunResult garp = run("garp " + f);
  CHECK(garp.exit == 0);
  RunResult rr = run("rationalize " + f + " --n 3");
  CHECK(rr.exit == 0);
  CHECK(rr.out.find("\"verified\": true") != std::string::npos);
}

TEST_CASE("probability decimals are rejected without the tolerance flag") {
  std::string f = put("dec.json", R"({"items": ["a", "b"], "entries": [
    {"menu": [0, 1], "choice": 0, "prob": "0.3333"}]})");
  RunResult rr = run("arsp " + f);
  CHECK(rr.exit == 2);
  CHECK(rr.out.find("rejected") != std::string::npos);
  RunResult ok = run("--allow-decimal arsp " + f);
  CHECK(ok.exit == 0);
}

TEST_CASE("arsp and stoch-rationalize on the cyclic dataset") {
  std::string f = put("cyclic.json", R"({"items": ["a", "b", "c"], "entries": [
    {"menu": [0, 1], "choice": 0, "prob": "7/10"},
    {"menu": [1, 2], "choice": 1, "prob": "7/10"},
    {"menu": [0, 2], "choice": 2, "prob": "7/10"}]})");
  RunResult rr = run("arsp " + f + " --len 3");
  CHECK(rr.exit == 1);
  CHECK(rr.out.find("\"sum\": \"21/10\"") != std::string::npos);
  CHECK(rr.out.find("\"best\": \"2\"") != std::string::npos);
  RunResult lp = run("stoch-rationalize " + f);
  CHECK(lp.exit == 1);
  CHECK(lp.out.find("\"lp_feasible\": false") != std::string::npos);
}

TEST_CASE("stoch-rationalize round-trips an exact dataset") {
  std::string f = put("exact.json", R"({"items": ["a", "b"], "entries": [
    {"menu": [0, 1], "choice": 0, "prob": "3/5"},
    {"menu": [0, 1], "choice": 1, "prob": "2/5"}]})");
  RunResult rr = run("stoch-rationalize " + f + " --n 4 --L 2");
  CHECK(rr.exit == 0);
  CHECK(rr.out.find("\"lp_feasible\": true") != std::string::npos);
  CHECK(rr.out.find("\"fragment_sat\": true") != std::string::npos);
}

TEST_CASE("couples subcommand") {
  std::string f = put("couples.json", R"({
    "doctors": ["d0", "d1"], "hospitals": ["h"], "capacity": [1],
    "hospital_pref": [[0, 1]], "singles": [0, 1], "single_pref": [[0], [0]],
    "couples": [], "couple_pref": []})");
  RunResult rr = run("couples " + f);
  CHECK(rr.exit == 0);
  CHECK(rr.out.find("\"stable\": true") != std::string::npos);
  CHECK(rr.out.find("\"d0\": \"h\"") != std::string::npos);
}

TEST_CASE("walrasian solve and refine") {
  std::string f = put("net.json", R"({
    "n_agents": 2,
    "trades": [{"object": 0, "seller": 0, "buyer": 1}],
    "utility": [
      [{"bundle": [0], "value": "0"}, {"bundle": [], "value": "-2"}],
      [{"bundle": [], "value": "0"}, {"bundle": [0], "value": "5"}]]})");
  RunResult rr = run("walrasian " + f + " --n 2");
  CHECK(rr.exit == 0);
  CHECK(rr.out.find("\"verified\": true") != std::string::npos);
  RunResult ref = run("walrasian " + f + " --refine 1 2 4");
  CHECK(ref.exit == 0);
  CHECK(ref.out.find("\"exact_verified\": true") != std::string::npos);
}

TEST_CASE("nash on matching pennies") {
  std::string f = put("pennies.json", R"({
    "neighbors": [[0, 1], [0, 1]],
    "strategies": [["H", "T"], ["H", "T"]],
    "payoff": [
      [{"profile": [0, 0], "value": "1"}, {"profile": [0, 1], "value": "-1"},
       {"profile": [1, 0], "value": "-1"}, {"profile": [1, 1], "value": "1"}],
      [{"profile": [0, 0], "value": "-1"}, {"profile": [0, 1], "value": "1"},
       {"profile": [1, 0], "value": "1"}, {"profile": [1, 1], "value": "-1"}]]})");
  RunResult rr = run("nash " + f + " --eps 1/4");
  CHECK(rr.exit == 0);
  CHECK(rr.out.find("\"verified\": true") != std::string::npos);
}

TEST_CASE("dynamic window and forward run") {
  // parity-line market materialized on [-3,3]: men arrive at -4..3, two
  // periods each; the woman prefers later arrivals
  std::string f = put("parity.json", R"({
    "n_women": 1,
    "men": [
      {"pref": [0], "arrival": -4, "departure": -2},
      {"pref": [0], "arrival": -3, "departure": -1},
      {"pref": [0], "arrival": -2, "departure": 0},
      {"pref": [0], "arrival": -1, "departure": 1},
      {"pref": [0], "arrival": 0, "departure": 2},
      {"pref": [0], "arrival": 1, "departure": 3},
      {"pref": [0], "arrival": 2, "departure": 4},
      {"pref": [0], "arrival": 3, "departure": 5}],
    "women_pref": [[7, 6, 5, 4, 3, 2, 1, 0]]})");
  RunResult rr = run("dynamic " + f + " --window -3 3");
  CHECK(rr.exit == 0);
  CHECK(rr.out.find("\"count\": 2") != std::string::npos);

  std::string g = put("fwd.json", R"({
    "n_women": 1,
    "men": [
      {"pref": [0], "arrival": 0, "departure": 2},
      {"pref": [0], "arrival": 1, "departure": 3},
      {"pref": [0], "arrival": 2, "departure": 4}],
    "women_pref": [[2, 1, 0]]})");
  RunResult fwd = run("dynamic " + g + " --window 0 3 --forward");
  CHECK(fwd.exit == 0);
  CHECK(fwd.out.find("\"stable_subject_to_tenure\": true") != std::string::npos);
  // even arrivals matched: man 0 at t=0,1 and man 2 at t=2,3
  CHECK(fwd.out.find("\"0\": [\n        0\n      ]") != std::string::npos);
  CHECK(fwd.out.find("\"2\": [\n        2\n      ]") != std::string::npos);
}

TEST_CASE("szpilrajn puts a last when b and c dominate it") {
  std::string f = put("po.json", R"({"elems": ["a", "b", "c"], "pairs": [[1, 0], [2, 0]]})");
  RunResult rr = run("szpilrajn " + f + " --enumerate");
  CHECK(rr.exit == 0);
  CHECK(rr.out.find("\"count\": 2") != std::string::npos);
  // both extensions end with a
  size_t pos = 0;
  int models = 0;
  while ((pos = rr.out.find("[\n      \"", pos)) != std::string::npos) {
    ++models;
    pos += 1;
  }
  CHECK(rr.out.find("\"a\"\n    ]") != std::string::npos);
}

TEST_CASE("ladder and prefix-limit over builtin families") {
  RunResult lad = run("ladder --family szpilrajn_nat --kmax 60 --step 20");
  CHECK(lad.exit == 0);
  CHECK(lad.out.find("\"unsat\": false") != std::string::npos);
  RunResult pre = run("prefix-limit --family szpilrajn_nat --prefix 6 --kmax 60 --step 20");
  CHECK(pre.exit == 0);
  CHECK(pre.out.find("\"gt(1,0)\": true") != std::string::npos);
  CHECK(pre.out.find("\"gt(0,1)\": false") != std::string::npos);
  RunResult bad = run("prefix-limit --family nope");
  CHECK(bad.exit == 2);
  RunResult nfp = run("ladder --family no_finite_presence --kmax 2000 --step 200");
  CHECK(nfp.exit == 1);
  CHECK(nfp.out.find("\"unsat\": true") != std::string::npos);
}

TEST_CASE("export-cnf header counts match the body") {
  std::string f = put("po2.json", R"({"elems": ["a", "b", "c"], "pairs": [[1, 0], [2, 0]]})");
  fs::path cnf = tmpdir() / "out.cnf";
  RunResult rr = run("export-cnf --domain szpilrajn " + f + " --out " + cnf.string());
  CHECK(rr.exit == 0);
  std::ifstream in(cnf);
  REQUIRE(in.good());
  std::string line;
  int declared_vars = -1, declared_clauses = -1, clause_lines = 0, max_var = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == 'c') continue;
    if (line[0] == 'p') {
      std::istringstream hs(line);
      std::string p, fmt;
      hs >> p >> fmt >> declared_vars >> declared_clauses;
      CHECK(fmt == "cnf");
      continue;
    }
    ++clause_lines;
    std::istringstream ls(line);
    int lit;
    while (ls >> lit) max_var = std::max(max_var, std::abs(lit));
  }
  CHECK(declared_clauses == clause_lines);
  CHECK(max_var <= declared_vars);
  CHECK(declared_vars > 0);
}

TEST_CASE("deterministic output and usage errors") {
  std::string f = put("det.json", R"({
    "men": ["m0", "m1"], "women": ["w0", "w1"],
    "men_pref": [[0, 1], [1, 0]], "women_pref": [[1, 0], [0, 1]]})");
  RunResult a = run("match " + f + " --enumerate");
  RunResult b = run("match " + f + " --enumerate");
  CHECK(a.out == b.out);
  CHECK(run("frobnicate").exit == 2);
  CHECK(run("match /nonexistent.json").exit == 2);
  std::string bad = put("bad_market.json", R"({
    "men": ["m0"], "women": ["w0"], "men_pref": [[3]], "women_pref": [[0]]})");
  CHECK(run("match " + bad).exit == 2);
}
