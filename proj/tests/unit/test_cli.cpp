#include <doctest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

const fs::path kTmp = UEVT_TEST_TMP;

struct Run {
  int code;
  std::string out, err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Run cli(const std::string& args) {
  fs::create_directories(kTmp);
  const auto out = kTmp / "stdout.txt";
  const auto err = kTmp / "stderr.txt";
  const std::string cmd = std::string(UEVT_CLI_PATH) + " " + args + " > " +
                          out.string() + " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

std::size_t data_rows(const fs::path& csv) {
  std::ifstream in(csv);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) ++n;
  return n == 0 ? 0 : n - 1;
}

// Simulated fixture shared by the CLI cases: 625 returns, 626 closes.
const fs::path& fixture() {
  static const fs::path dir = [] {
    const auto d = kTmp / "fixture";
    fs::remove_all(d);
    const auto r = cli("simulate --days 625 --seed 5 --out " + d.string());
    REQUIRE(r.code == 0);
    return d;
  }();
  return dir;
}

std::string data_args(const fs::path& out) {
  return "--daily " + (fixture() / "daily.csv").string() + " --intraday " +
         (fixture() / "intraday.csv").string() + " --out " + out.string();
}

}  // namespace

TEST_CASE("cli: brt rows, target variants and determinism") {
  const auto out = kTmp / "brt";
  fs::remove_all(out);
  REQUIRE(cli("brt " + data_args(out)).code == 0);
  CHECK(data_rows(out / "brt.csv") == 450);
  const auto first = slurp(out / "brt.csv");
  CHECK(first.rfind("date,brt,objective_gap,flag\n", 0) == 0);
  REQUIRE(cli("brt " + data_args(out)).code == 0);
  CHECK(slurp(out / "brt.csv") == first);
  REQUIRE(cli("brt --target nextday " + data_args(out)).code == 0);
  CHECK(data_rows(out / "brt.csv") == 450);
  CHECK(slurp(out / "brt.csv") != first);
}

TEST_CASE("cli: forecast on the minimal fixture") {
  const auto out = kTmp / "forecast";
  fs::remove_all(out);
  const auto r = cli("forecast " + data_args(out));
  REQUIRE(r.code == 0);
  CHECK(data_rows(out / "forecast.csv") == 25);
  CHECK(data_rows(out / "var_uevt.csv") == 25);
  CHECK(slurp(out / "forecast.csv")
            .rfind("date,brt_hat,xi,sigma,n_u,var_loss,var_return,flags\n", 0) == 0);
}

TEST_CASE("cli: missing intraday data is a clean, machine-readable error") {
  const auto out = kTmp / "nointraday";
  const auto r = cli("forecast --daily " + (fixture() / "daily.csv").string() +
                     " --out " + out.string());
  CHECK(r.code != 0);
  const auto j = nlohmann::json::parse(r.err);
  CHECK(j["status"] == "error");
  CHECK(j["command"] == "forecast");
  CHECK(j["kind"] == "data");
  CHECK(j["message"].get<std::string>().find("intraday") != std::string::npos);
}

TEST_CASE("cli: backtest lists absent model outputs") {
  const auto out = kTmp / "absent";
  fs::remove_all(out);
  const auto r = cli("backtest --models uevt,garch,varcov " + data_args(out));
  CHECK(r.code != 0);
  const auto msg = nlohmann::json::parse(r.err)["message"].get<std::string>();
  CHECK(msg.find("uevt, garch, varcov") != std::string::npos);
}

TEST_CASE("cli: config file with flag overrides, single-model backtest") {
  const auto out = kTmp / "cfg";
  fs::remove_all(out);
  fs::create_directories(out);
  const auto cfg = out / "run.cfg";
  {
    std::ofstream c(cfg);
    c << "# test run\n"
      << "daily = " << (fixture() / "daily.csv").string() << "\n"
      << "intraday = " << (fixture() / "intraday.csv").string() << "\n"
      << "models = historical\n"
      << "hist_window = 250\n"
      << "p = 0.99\n"
      << "out = " << (out / "ignored").string() << "\n";
  }
  const std::string base = "--config " + cfg.string() + " --out " + out.string();
  REQUIRE(cli("bench " + base + " --p 0.95").code == 0);
  CHECK_FALSE(fs::exists(out / "ignored"));
  CHECK(data_rows(out / "var_historical.csv") == 375);
  REQUIRE(cli("backtest " + base + " --p 0.95").code == 0);
  CHECK(data_rows(out / "validation.csv") == 1);
  CHECK(slurp(out / "dm_matrix.csv") == "model,historical\nhistorical,0\n");
  CHECK(slurp(out / "dm_pvalues.csv") == "model,historical\nhistorical,1\n");
  REQUIRE(cli("report " + base).code == 0);
  CHECK(fs::exists(out / "report.txt"));

  const auto bad = cli("bench " + base + " --p 1.5");
  CHECK(bad.code != 0);
  CHECK(nlohmann::json::parse(bad.err)["kind"] == "config");
  CHECK(cli("bench " + base + " --models nosuchmodel").code != 0);
}

TEST_CASE("cli: full run is byte-identical across reruns") {
  const auto a = kTmp / "all_a";
  const auto b = kTmp / "all_b";
  fs::remove_all(a);
  fs::remove_all(b);
  const std::string models =
      " --models uevt,historical,varcov,mc_gbm,plain_evt --seed 9 ";
  REQUIRE(cli("all" + models + data_args(a)).code == 0);
  REQUIRE(cli("all" + models + data_args(b)).code == 0);
  for (const auto& f : {"forecast.csv", "var_mc_gbm.csv", "validation.csv",
                        "dm_matrix.csv", "report.txt"}) {
    CHECK(slurp(a / f) == slurp(b / f));
  }
  CHECK(data_rows(a / "dm_matrix.csv") == 5);
}
