#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "uevt/brt.hpp"
#include "uevt/csv_io.hpp"
#include "uevt/garch.hpp"
#include "uevt/timeseries.hpp"

namespace uevt {

/// Model names accepted in `models`.
const std::vector<std::string>& known_models();

struct RunConfig {
  std::filesystem::path daily;
  std::filesystem::path intraday;
  IntradayFormat intraday_format = IntradayFormat::ret;
  ReturnKind return_kind = ReturnKind::log;
  WindowSpec spec;
  double p = 0.95;
  BrtTarget target = BrtTarget::forward(50);
  // Target convention for the DM forecast errors.
  BrtTarget dm_target = BrtTarget::next_day();
  std::vector<std::string> models = known_models();
  std::uint64_t seed = 20240101;
  std::filesystem::path out = "out";

  std::size_t hist_window = 250;
  std::size_t mc_paths = 10000;
  std::size_t vol_window = 600;
  std::size_t refit_every = 25;
  Innovation garch_dist = Innovation::normal;
  std::size_t evt_window = 600;
  double evt_percentile = 0.95;

  /// Throws std::invalid_argument naming the offending key.
  void validate() const;
};

/// Parses `key = value` lines; '#' starts a comment. Unknown keys and
/// malformed lines are errors.
std::map<std::string, std::string> read_config_file(
    const std::filesystem::path& path);

/// Applies one setting. Throws std::invalid_argument on unknown keys or
/// unparsable values.
void apply_setting(RunConfig& cfg, const std::string& key,
                   const std::string& value);

BrtTarget parse_target(const std::string& s);
std::string format_target(const BrtTarget& t);
std::vector<std::string> parse_model_list(const std::string& s);

}  // namespace uevt
