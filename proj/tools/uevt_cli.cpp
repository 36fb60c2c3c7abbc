// uevt: threshold-forecast EVT VaR pipeline and benchmarks.

#include <CLI11.hpp>
#include <json.hpp>

#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "uevt/commands.hpp"
#include "uevt/errors.hpp"

namespace {

struct Flags {
  std::string config;
  std::optional<std::string> p, target, models, seed, out, daily, intraday;
  std::size_t days = 2500;
  std::size_t bars = 78;
};

uevt::RunConfig build_config(const Flags& f) {
  uevt::RunConfig cfg;
  if (!f.config.empty()) {
    for (const auto& [k, v] : uevt::read_config_file(f.config)) {
      uevt::apply_setting(cfg, k, v);
    }
  }
  const std::pair<const char*, const std::optional<std::string>*> overrides[] = {
      {"p", &f.p},         {"target", &f.target}, {"models", &f.models},
      {"seed", &f.seed},   {"out", &f.out},       {"daily", &f.daily},
      {"intraday", &f.intraday}};
  for (const auto& [key, val] : overrides) {
    if (*val) uevt::apply_setting(cfg, key, **val);
  }
  cfg.validate();
  return cfg;
}

const char* error_kind(const std::exception& e) {
  if (dynamic_cast<const uevt::DataError*>(&e)) return "data";
  if (dynamic_cast<const uevt::FitError*>(&e)) return "fit";
  if (dynamic_cast<const std::invalid_argument*>(&e)) return "config";
  return "internal";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic-threshold EVT VaR: BRT extraction, ambiguity, "
               "forecasting, benchmarks and backtests"};
  app.require_subcommand(1, 1);
  Flags flags;

  using Cmd = std::function<uevt::CommandResult(const uevt::RunConfig&)>;
  const std::vector<std::tuple<std::string, std::string, Cmd>> commands = {
      {"ingest", "load daily data and write returns.csv", uevt::cmd_ingest},
      {"brt", "realized break-even thresholds -> brt.csv", uevt::cmd_brt},
      {"ambiguity", "monthly ambiguity -> ambiguity.csv", uevt::cmd_ambiguity},
      {"forecast", "rolling threshold-forecast VaR -> forecast.csv",
       uevt::cmd_forecast},
      {"bench", "benchmark VaR models -> var_<model>.csv", uevt::cmd_bench},
      {"backtest", "coverage tests and DM matrix", uevt::cmd_backtest},
      {"report", "summary of the backtest -> report.txt", uevt::cmd_report},
      {"all", "ingest, brt, ambiguity, forecast, bench, backtest, report",
       [](const uevt::RunConfig& cfg) {
         uevt::CommandResult all;
         for (const auto& step :
              {uevt::cmd_ingest, uevt::cmd_brt, uevt::cmd_ambiguity,
               uevt::cmd_forecast, uevt::cmd_bench, uevt::cmd_backtest,
               uevt::cmd_report}) {
           auto r = step(cfg);
           all.written.insert(all.written.end(), r.written.begin(),
                              r.written.end());
           all.summary += (all.summary.empty() ? "" : "\n") + r.summary;
         }
         return all;
       }},
  };

  std::map<CLI::App*, Cmd> handlers;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", flags.config, "key = value config file")
        ->check(CLI::ExistingFile);
    sub->add_option("--p", flags.p, "VaR confidence level (default 0.95)");
    sub->add_option("--target", flags.target,
                    "BRT target: forward, forward-<h> or nextday");
    sub->add_option("--models", flags.models, "comma-separated model list");
    sub->add_option("--seed", flags.seed, "base random seed");
    sub->add_option("--out", flags.out, "output directory");
    sub->add_option("--daily", flags.daily, "daily close CSV (date,close)");
    sub->add_option("--intraday", flags.intraday,
                    "intraday CSV (date,time,return)");
  };
  for (const auto& [name, help, fn] : commands) {
    auto* sub = app.add_subcommand(name, help);
    add_common(sub);
    handlers[sub] = fn;
  }
  auto* sim = app.add_subcommand("simulate",
                                 "write a synthetic GARCH-t daily.csv and "
                                 "intraday.csv into --out");
  add_common(sim);
  sim->add_option("--days", flags.days, "number of daily returns");
  sim->add_option("--bars", flags.bars, "intraday bars per day");
  handlers[sim] = [&flags](const uevt::RunConfig& cfg) {
    return uevt::cmd_simulate(cfg, flags.days, flags.bars);
  };

  CLI11_PARSE(app, argc, argv);

  auto* sub = app.get_subcommands().front();
  try {
    const auto cfg = build_config(flags);
    const auto result = handlers.at(sub)(cfg);
    std::cout << result.summary << '\n';
    for (const auto& p : result.written) std::cout << "wrote " << p.string() << '\n';
    return 0;
  } catch (const std::exception& e) {
    nlohmann::json err = {{"status", "error"},
                          {"command", sub->get_name()},
                          {"kind", error_kind(e)},
                          {"message", e.what()}};
    std::cerr << err.dump() << '\n';
    return 1;
  }
}
