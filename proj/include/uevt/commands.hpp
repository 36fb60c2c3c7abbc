#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "uevt/benchmarks.hpp"
#include "uevt/config.hpp"

namespace uevt {

struct CommandResult {
  std::vector<std::filesystem::path> written;
  std::string summary;  // human-readable, printed by the CLI
};

ReturnSeries load_returns(const RunConfig& cfg);
/// Empty panel when no intraday path is configured.
IntradayPanel load_panel(const RunConfig& cfg);

void write_var_csv(const std::filesystem::path& path, const VarSeries& v);
VarSeries read_var_csv(const std::filesystem::path& path,
                       const std::string& model);

/// Computes one benchmark model (anything but "uevt").
VarSeries run_benchmark(const std::string& model, const ReturnSeries& returns,
                        const RunConfig& cfg);

CommandResult cmd_ingest(const RunConfig& cfg);
CommandResult cmd_brt(const RunConfig& cfg);
CommandResult cmd_ambiguity(const RunConfig& cfg);
CommandResult cmd_forecast(const RunConfig& cfg);
CommandResult cmd_bench(const RunConfig& cfg);
CommandResult cmd_backtest(const RunConfig& cfg);
CommandResult cmd_report(const RunConfig& cfg);
/// Writes a GARCH(1,1)-t daily.csv and a matching intraday.csv into cfg.out.
CommandResult cmd_simulate(const RunConfig& cfg, std::size_t days,
                           std::size_t bars);

}  // namespace uevt
