#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "ersg/experiment.hpp"
#include "ersg/game_io.hpp"

using namespace ersg;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout only
  std::string errors;  // stderr only
};

// Runs the built cli with the given arguments, capturing both streams.
RunResult run_cli(const std::string& args) {
  static int counter = 0;
  const auto dir = std::filesystem::temp_directory_path();
  const std::filesystem::path log = dir / ("ersg_cli_" + std::to_string(counter) + ".out");
  const std::filesystem::path err = dir / ("ersg_cli_" + std::to_string(counter) + ".err");
  ++counter;
  const std::string cmd = std::string(ERSG_CLI_PATH) + " " + args + " >" + log.string() +
                          " 2>" + err.string();
  const int rc = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  r.output = slurp(log);
  r.errors = slurp(err);
  std::filesystem::remove(log);
  std::filesystem::remove(err);
  return r;
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const std::filesystem::path p = std::filesystem::temp_directory_path() / name;
  std::ofstream out(p, std::ios::binary);
  out << content;
  return p;
}

}  // namespace

TEST_CASE("csv header and number formatting are pinned") {
  CHECK(sweep_csv_header() ==
        "beta1,beta2,solve_map,eval_map,start_state,win_prob,phi,"
        "exploitability_p1,exploitability_p2");
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(1.0 / 3.0) == "0.333333333333");
  CHECK(format_double(-2.0) == "-2");
  CHECK(format_beta(Beta::infinity()) == "inf");
  CHECK(format_beta(Beta::finite(6.0)) == "6");
}

TEST_CASE("opponent names parse strictly") {
  CHECK(opponent_from_string("nash") == Opponent::kNash);
  CHECK(opponent_from_string("regularized") == Opponent::kRegularized);
  CHECK_THROWS_AS(opponent_from_string("best"), std::invalid_argument);
}

TEST_CASE("sweep output is sorted and carries sane probabilities") {
  ExperimentSpec spec;
  spec.betas = {Beta::finite(6.0), Beta::infinity()};
  spec.eval_maps = {"builtin:blocked", "builtin:nominal"};
  spec.tol = 1e-5;
  const std::vector<SweepRow> rows = run_sweep(spec);
  REQUIRE(rows.size() == 4);
  // finite beta first, infinity last; maps alphabetical inside a beta block
  CHECK(!rows[0].beta1.is_inf());
  CHECK(rows[0].eval_map == "builtin:blocked");
  CHECK(rows[1].eval_map == "builtin:nominal");
  CHECK(rows[2].beta1.is_inf());
  for (const SweepRow& r : rows) {
    CHECK(r.solve_map == "builtin:nominal");
    CHECK(r.win_prob >= 0.0);
    CHECK(r.win_prob <= 1.0);
    CHECK(r.start_state >= 0);
    // player 1 leaves value on the table, player 2 concedes some: both gaps
    // are nonnegative up to solver tolerance
    CHECK(r.exploitability_p1 >= -1e-4);
    CHECK(r.exploitability_p2 >= -1e-4);
  }
  // the on-board nominal row at beta 6 should show a strong pursuit
  CHECK(rows[1].win_prob > 0.7);
  // the csv body has one line per row plus the header
  const std::string csv = sweep_csv(rows);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
  CHECK(csv.rfind(sweep_csv_header() + "\n", 0) == 0);

  ExperimentSpec empty;
  CHECK_THROWS_AS(run_sweep(empty), std::invalid_argument);
}

TEST_CASE("cli solve emits identical bytes on repeat runs") {
  const std::filesystem::path out1 = std::filesystem::temp_directory_path() / "solve1.json";
  const std::filesystem::path out2 = std::filesystem::temp_directory_path() / "solve2.json";
  const std::string args = "solve --game builtin:nominal --beta1 6 --beta2 6 "
                           "--gamma 0.8 --tol 1e-5 --out ";
  CHECK(run_cli(args + out1.string()).exit_code == 0);
  CHECK(run_cli(args + out2.string() + " --threads 4").exit_code == 0);
  const std::string a = slurp(out1);
  const std::string b = slurp(out2);
  REQUIRE(!a.empty());
  CHECK(a == b);

  const Json doc = Json::parse(a);
  CHECK(doc.at("kind") == "discounted");
  CHECK(doc.at("converged") == true);
  CHECK(doc.at("start_state") == 147);
  std::filesystem::remove(out1);
  std::filesystem::remove(out2);
}

TEST_CASE("cli sweep emits identical bytes on repeat runs") {
  const std::filesystem::path out1 = std::filesystem::temp_directory_path() / "sweep1.csv";
  const std::filesystem::path out2 = std::filesystem::temp_directory_path() / "sweep2.csv";
  const std::string args = "sweep --betas 6 --eval-maps builtin:blocked "
                           "--tol 1e-5 --out ";
  CHECK(run_cli(args + out1.string()).exit_code == 0);
  CHECK(run_cli(args + out2.string()).exit_code == 0);
  const std::string a = slurp(out1);
  REQUIRE(!a.empty());
  CHECK(a == slurp(out2));
  CHECK(a.rfind("beta1,beta2,", 0) == 0);
  std::filesystem::remove(out1);
  std::filesystem::remove(out2);
}

TEST_CASE("cli eval reports the value of a stored solution") {
  const std::filesystem::path sol = std::filesystem::temp_directory_path() / "eval_sol.json";
  REQUIRE(run_cli("solve --game builtin:nominal --beta1 inf --beta2 inf --gamma 0.8 "
                  "--tol 1e-9 --out " + sol.string()).exit_code == 0);
  const RunResult r =
      run_cli("eval --game builtin:nominal --strategies " + sol.string() + " --phi --win");
  CHECK(r.exit_code == 0);
  const Json doc = Json::parse(r.output);
  // the unregularized pursuit value from the standard start is exactly 0.512
  CHECK(doc.at("phi").get<double>() == doctest::Approx(0.512).epsilon(1e-6));
  CHECK(doc.at("win_prob").get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  std::filesystem::remove(sol);
}

TEST_CASE("cli rejects malformed input with exit code 2") {
  CHECK(run_cli("solve --game /nonexistent.json --gamma 0.8").exit_code == 2);
  CHECK(run_cli("solve --game builtin:nominal").exit_code == 2);  // no horizon or gamma
  CHECK(run_cli("solve --game builtin:nominal --mode nstage").exit_code == 2);
  CHECK(run_cli("solve --game builtin:nominal --mode nstage --gamma 0.8").exit_code == 2);
  const auto bad = temp_file("bad_game.json", "{\"num_states\": \"many\"}");
  CHECK(run_cli("solve --game " + bad.string() + " --gamma 0.8").exit_code == 2);
  std::filesystem::remove(bad);
}

TEST_CASE("cli reports unconverged solves with exit code 3") {
  const auto payoff = temp_file(
      "oneshot_payoff.json",
      "[[-1.4625, 1.3897, 1.0551, -0.9797], [-0.0183, -0.202, 0.6064, 1.1549],"
      " [-1.6246, -1.8866, 1.3431, -0.2689], [1.0491, -1.9916, -0.2185, 0.8862]]");
  const RunResult r = run_cli("oneshot --payoff " + payoff.string() +
                              " --beta1 7 --beta2 inf --tol 1e-30 --max-iters 2");
  CHECK(r.exit_code == 3);
  CHECK(r.errors.find("budget") != std::string::npos);
  const Json doc = Json::parse(r.output);
  CHECK(doc.at("converged") == false);
  CHECK(doc.at("sigma").size() == 4);
  std::filesystem::remove(payoff);
}

TEST_CASE("cli flags incompatible boards with exit code 4") {
  const auto tiny = temp_file("tiny_map.txt", "1.G\n.2.\n");
  const RunResult r = run_cli("sweep --betas 6 --solve-map builtin:nominal --eval-maps " +
                              tiny.string() + " --tol 1e-5");
  CHECK(r.exit_code == 4);
  std::filesystem::remove(tiny);
}

TEST_CASE("cli validate distinguishes sound and broken games") {
  CHECK(run_cli("validate --game builtin:nominal").output.rfind("ok:", 0) == 0);
  CHECK(run_cli("validate --game builtin:nominal").exit_code == 0);

  // a kernel row that sums to 2 must be flagged
  Json doc;
  doc["states"] = 1;
  doc["actions_p1"] = 1;
  doc["actions_p2"] = 1;
  doc["transition"] = Json::array({Json::array({0, 0, 0, Json::array({2.0})})});
  doc["payoff"] = Json::array();
  const auto bad = temp_file("broken_game.json", doc.dump());
  const RunResult r = run_cli("validate --game " + bad.string());
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("sum") != std::string::npos);
  std::filesystem::remove(bad);
}
