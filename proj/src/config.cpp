#include "uevt/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <stdexcept>

namespace uevt {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::size_t to_size(const std::string& key, const std::string& v) {
  std::size_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size()) {
    throw std::invalid_argument(key + ": expected a non-negative integer, got '" +
                                v + "'");
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size()) {
    throw std::invalid_argument(key + ": expected a number, got '" + v + "'");
  }
  return out;
}

}  // namespace

const std::vector<std::string>& known_models() {
  static const std::vector<std::string> models = {
      "uevt",  "historical", "mc_gbm", "varcov",
      "garch", "egarch",     "caviar", "plain_evt"};
  return models;
}

BrtTarget parse_target(const std::string& s) {
  if (s == "forward") return BrtTarget::forward(50);
  if (s == "nextday" || s == "next-day") return BrtTarget::next_day();
  if (s.rfind("forward-", 0) == 0) {
    const auto h = to_size("target", s.substr(8));
    if (h == 0) throw std::invalid_argument("target: horizon must be positive");
    return BrtTarget::forward(h);
  }
  throw std::invalid_argument("target: expected forward, forward-<h> or nextday, got '" +
                              s + "'");
}

std::string format_target(const BrtTarget& t) {
  return t.kind == BrtTarget::Kind::next_day
             ? "nextday"
             : "forward-" + std::to_string(t.horizon);
}

std::vector<std::string> parse_model_list(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto end = s.find(',', start);
    if (end == std::string::npos) end = s.size();
    const auto m = trim(s.substr(start, end - start));
    if (!m.empty()) {
      const auto& known = known_models();
      if (std::find(known.begin(), known.end(), m) == known.end()) {
        throw std::invalid_argument("models: unknown model '" + m + "'");
      }
      if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
    }
    start = end + 1;
  }
  if (out.empty()) throw std::invalid_argument("models: empty list");
  return out;
}

std::map<std::string, std::string> read_config_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config " + path.string());
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(path.string() + ":" + std::to_string(lineno) +
                                  ": expected key = value");
    }
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

void apply_setting(RunConfig& cfg, const std::string& key,
                   const std::string& value) {
  if (key == "daily") {
    cfg.daily = value;
  } else if (key == "intraday") {
    cfg.intraday = value;
  } else if (key == "intraday_format") {
    if (value == "price") cfg.intraday_format = IntradayFormat::price;
    else if (value == "return") cfg.intraday_format = IntradayFormat::ret;
    else throw std::invalid_argument("intraday_format: expected price or return");
  } else if (key == "return_kind") {
    if (value == "log") cfg.return_kind = ReturnKind::log;
    else if (value == "simple") cfg.return_kind = ReturnKind::simple;
    else throw std::invalid_argument("return_kind: expected log or simple");
  } else if (key == "train_len") {
    cfg.spec.train_len = to_size(key, value);
  } else if (key == "evt_len") {
    cfg.spec.evt_len = to_size(key, value);
  } else if (key == "hist_len") {
    cfg.spec.hist_len = to_size(key, value);
  } else if (key == "forecast_len") {
    cfg.spec.forecast_len = to_size(key, value);
  } else if (key == "lag") {
    cfg.spec.lag = to_size(key, value);
  } else if (key == "p") {
    cfg.p = to_double(key, value);
  } else if (key == "target") {
    cfg.target = parse_target(value);
  } else if (key == "dm_target") {
    cfg.dm_target = parse_target(value);
  } else if (key == "models") {
    cfg.models = parse_model_list(value);
  } else if (key == "seed") {
    cfg.seed = to_size(key, value);
  } else if (key == "out") {
    cfg.out = value;
  } else if (key == "hist_window") {
    cfg.hist_window = to_size(key, value);
  } else if (key == "mc_paths") {
    cfg.mc_paths = to_size(key, value);
  } else if (key == "vol_window") {
    cfg.vol_window = to_size(key, value);
  } else if (key == "refit_every") {
    cfg.refit_every = to_size(key, value);
  } else if (key == "garch_dist") {
    if (value == "normal") cfg.garch_dist = Innovation::normal;
    else if (value == "t") cfg.garch_dist = Innovation::student_t;
    else throw std::invalid_argument("garch_dist: expected normal or t");
  } else if (key == "evt_window") {
    cfg.evt_window = to_size(key, value);
  } else if (key == "evt_percentile") {
    cfg.evt_percentile = to_double(key, value);
  } else {
    throw std::invalid_argument("unknown config key '" + key + "'");
  }
}

void RunConfig::validate() const {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p: must lie in (0,1)");
  spec.validate();
  if (hist_window < 2) throw std::invalid_argument("hist_window: must be >= 2");
  if (mc_paths < 1000) throw std::invalid_argument("mc_paths: must be >= 1000");
  if (refit_every == 0) throw std::invalid_argument("refit_every: must be positive");
  if (!(evt_percentile > 0.0 && evt_percentile < 1.0)) {
    throw std::invalid_argument("evt_percentile: must lie in (0,1)");
  }
}

}  // namespace uevt
