#include "uevt/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "uevt/ambiguity.hpp"
#include "uevt/backtest.hpp"
#include "uevt/caviar.hpp"
#include "uevt/csv_io.hpp"
#include "uevt/forecaster.hpp"
#include "uevt/garch.hpp"
#include "uevt/seed.hpp"
#include "uevt/synthetic.hpp"

namespace fs = std::filesystem;

namespace uevt {

namespace {

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

// Free text inside a CSV field.
std::string field(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

std::string fixed(double v, int digits = 6) {
  if (!std::isfinite(v)) return format_double(v);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

double median(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double parse_cell(const std::string& s, const fs::path& path) {
  if (s == "nan") return std::nan("");
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DataError(path.string() + ": cannot parse number '" + s + "'");
  }
}

}  // namespace

ReturnSeries load_returns(const RunConfig& cfg) {
  if (cfg.daily.empty()) throw DataError("no daily data path configured (daily = ...)");
  return compute_returns(read_daily_csv(cfg.daily), cfg.return_kind);
}

IntradayPanel load_panel(const RunConfig& cfg) {
  if (cfg.intraday.empty()) return {};
  return read_intraday_csv(cfg.intraday, cfg.intraday_format);
}

void write_var_csv(const fs::path& path, const VarSeries& v) {
  auto out = open_out(path);
  CsvWriter w(out, {"date", "var_loss", "var_return"});
  for (std::size_t i = 0; i < v.size(); ++i) {
    w << format_date(v.dates[i]) << v.var_loss[i] << v.var_return(i);
    w.end_row();
  }
}

VarSeries read_var_csv(const fs::path& path, const std::string& model) {
  const auto t = read_csv_table(path);
  const auto cd = t.column("date");
  const auto cv = t.column("var_loss");
  VarSeries v;
  v.model = model;
  for (const auto& row : t.rows) {
    v.dates.push_back(parse_date(row[cd]));
    v.var_loss.push_back(parse_cell(row[cv], path));
  }
  return v;
}

VarSeries run_benchmark(const std::string& model, const ReturnSeries& returns,
                        const RunConfig& cfg) {
  VarSeries v;
  if (model == "historical") {
    v = var_historical(returns, cfg.hist_window, cfg.p);
  } else if (model == "varcov") {
    v = var_variance_covariance(returns, cfg.hist_window, cfg.p);
  } else if (model == "mc_gbm") {
    v = var_monte_carlo_gbm(returns, cfg.hist_window, cfg.p, cfg.mc_paths,
                            derive_seed(cfg.seed, "mc_gbm", 0));
  } else if (model == "garch") {
    v = var_garch(returns, cfg.vol_window, cfg.refit_every, cfg.p,
                  cfg.garch_dist);
  } else if (model == "egarch") {
    v = var_egarch(returns, cfg.vol_window, cfg.refit_every, cfg.p,
                   cfg.garch_dist);
  } else if (model == "caviar") {
    v = var_caviar(returns, cfg.vol_window, cfg.refit_every, cfg.p,
                   derive_seed(cfg.seed, "caviar", 0));
  } else if (model == "plain_evt") {
    v = var_plain_evt(returns, cfg.evt_window, cfg.p, cfg.evt_percentile);
  } else {
    throw std::invalid_argument("run_benchmark: unknown model '" + model + "'");
  }
  v.model = model;
  return v;
}

CommandResult cmd_ingest(const RunConfig& cfg) {
  const auto r = load_returns(cfg);
  CommandResult res;
  const auto path = cfg.out / "returns.csv";
  {
    auto out = open_out(path);
    CsvWriter w(out, {"date", "return"});
    for (std::size_t i = 0; i < r.size(); ++i) {
      w << format_date(r.date(i)) << r[i];
      w.end_row();
    }
  }
  res.written.push_back(path);
  std::ostringstream s;
  s << "daily returns: " << r.size();
  if (!r.empty()) {
    s << " (" << format_date(r.date(0)) << " to "
      << format_date(r.date(r.size() - 1)) << ")";
  }
  s << "\nforecasting windows: " << window_starts(r.size(), cfg.spec).size();
  const auto panel = load_panel(cfg);
  if (!panel.empty()) {
    std::size_t bars = 0;
    for (const auto& d : panel.days()) bars += d.returns.size();
    s << "\nintraday days: " << panel.size() << ", returns: " << bars;
  } else {
    s << "\nintraday: none";
  }
  res.summary = s.str();
  return res;
}

CommandResult cmd_brt(const RunConfig& cfg) {
  const auto r = load_returns(cfg);
  const auto series = brt_series(r, cfg.spec, cfg.target, cfg.p);
  CommandResult res;
  const auto path = cfg.out / "brt.csv";
  {
    auto out = open_out(path);
    CsvWriter w(out, {"date", "brt", "objective_gap", "flag"});
    std::size_t ip = 0, ig = 0;
    const auto& pts = series.points;
    const auto& gaps = series.gaps;
    while (ip < pts.size() || ig < gaps.size()) {
      if (ig == gaps.size() || (ip < pts.size() && pts[ip].date < gaps[ig].date)) {
        w << format_date(pts[ip].date) << pts[ip].brt << pts[ip].objective_gap
          << std::string("ok");
        ++ip;
      } else {
        const double nan = std::nan("");
        w << format_date(gaps[ig].date) << nan << nan << field(gaps[ig].reason);
        ++ig;
      }
      w.end_row();
    }
  }
  res.written.push_back(path);
  std::vector<double> b;
  for (const auto& p : series.points) b.push_back(p.brt);
  std::ostringstream s;
  s << "realized BRT (" << format_target(cfg.target) << "): " << b.size()
    << " dates, " << series.gaps.size() << " gaps";
  if (!b.empty()) {
    s << "\n  median " << fixed(median(b)) << ", min "
      << fixed(*std::min_element(b.begin(), b.end())) << ", max "
      << fixed(*std::max_element(b.begin(), b.end()));
  }
  res.summary = s.str();
  return res;
}

CommandResult cmd_ambiguity(const RunConfig& cfg) {
  const auto panel = load_panel(cfg);
  if (panel.empty()) {
    throw DataError("ambiguity requires intraday data (intraday = ...)");
  }
  const auto a = ambiguity_series(panel, build_bins());
  CommandResult res;
  const auto path = cfg.out / "ambiguity.csv";
  {
    auto out = open_out(path);
    CsvWriter w(out, {"month", "mho2", "days_used"});
    for (const auto& v : a.values()) {
      w << format_month(v.month) << v.mho2 << v.days_used;
      w.end_row();
    }
  }
  res.written.push_back(path);
  std::ostringstream s;
  s << "monthly ambiguity: " << a.values().size() << " months, "
    << a.gaps().size() << " months without enough valid days";
  res.summary = s.str();
  return res;
}

CommandResult cmd_forecast(const RunConfig& cfg) {
  const auto r = load_returns(cfg);
  const auto panel = load_panel(cfg);
  PipelineConfig pc;
  pc.spec = cfg.spec;
  pc.target = cfg.target;
  pc.p = cfg.p;
  const auto result = run_pipeline(r, panel, pc);

  CommandResult res;
  const auto path = cfg.out / "forecast.csv";
  VarSeries v;
  v.model = "uevt";
  {
    auto out = open_out(path);
    CsvWriter w(out, {"date", "brt_hat", "xi", "sigma", "n_u", "var_loss",
                      "var_return", "flags"});
    for (const auto& f : result.forecasts) {
      w << format_date(f.date) << f.brt_hat << f.gpd.params.xi
        << f.gpd.params.sigma << f.gpd.n_u << f.var_loss << f.var_return
        << format_flags(f.flags);
      w.end_row();
      v.dates.push_back(f.date);
      v.var_loss.push_back(f.var_loss);
    }
  }
  res.written.push_back(path);
  const auto vpath = cfg.out / "var_uevt.csv";
  write_var_csv(vpath, v);
  res.written.push_back(vpath);

  const auto rpath = cfg.out / "regression.csv";
  std::size_t failed = 0;
  {
    auto out = open_out(rpath);
    CsvWriter w(out, {"window_start", "first_forecast", "ok", "beta0", "beta1",
                      "beta2", "se0", "se1", "se2", "r_squared", "n_obs",
                      "message"});
    for (const auto& rep : result.windows) {
      const auto& f = rep.fit;
      w << format_date(r.date(rep.window_start))
        << format_date(r.date(rep.window_start + cfg.spec.train_len))
        << std::string(rep.ok ? "1" : "0");
      if (rep.ok) {
        w << f.beta[0] << f.beta[1] << f.beta[2] << f.stderrs[0]
          << f.stderrs[1] << f.stderrs[2] << f.r_squared << f.n_obs;
      } else {
        ++failed;
        for (int k = 0; k < 7; ++k) w << std::nan("");
        w << std::size_t{0};
      }
      w << field(rep.message);
      w.end_row();
    }
  }
  res.written.push_back(rpath);
  if (result.forecasts.empty()) {
    throw FitError("forecast: every window failed; see " + rpath.string());
  }
  std::size_t flagged = 0;
  for (const auto& f : result.forecasts) flagged += f.flags != kFlagNone;
  std::ostringstream s;
  s << "forecasts: " << result.forecasts.size() << " days from "
    << result.windows.size() << " windows (" << failed << " failed), "
    << flagged << " flagged";
  res.summary = s.str();
  return res;
}

CommandResult cmd_bench(const RunConfig& cfg) {
  const auto r = load_returns(cfg);
  CommandResult res;
  std::ostringstream s;
  for (const auto& m : cfg.models) {
    if (m == "uevt") continue;
    VarSeries v;
    try {
      v = run_benchmark(m, r, cfg);
    } catch (const std::exception& e) {
      throw FitError("bench " + m + ": " + e.what());
    }
    const auto path = cfg.out / ("var_" + m + ".csv");
    write_var_csv(path, v);
    res.written.push_back(path);
    if (!s.str().empty()) s << '\n';
    s << m << ": " << v.size() << " forecasts";
  }
  res.summary = s.str().empty() ? "no benchmark models requested" : s.str();
  return res;
}

CommandResult cmd_backtest(const RunConfig& cfg) {
  std::vector<std::string> missing;
  for (const auto& m : cfg.models) {
    if (!fs::exists(cfg.out / ("var_" + m + ".csv"))) missing.push_back(m);
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw DataError("backtest: missing model output for " + list +
                    " (run forecast/bench first)");
  }
  const auto r = load_returns(cfg);
  const double rate = 1.0 - cfg.p;

  CommandResult res;
  std::vector<ErrorSeries> errors;
  const auto vpath = cfg.out / "validation.csv";
  {
    auto out = open_out(vpath);
    CsvWriter w(out, {"model", "days", "violations", "ratio", "lr_uc", "p_uc",
                      "reject_uc", "lr_ind", "lr_cc", "p_cc", "reject_cc"});
    for (const auto& m : cfg.models) {
      const auto v = read_var_csv(cfg.out / ("var_" + m + ".csv"), m);
      if (v.size() < 2) throw DataError("backtest: " + m + " has fewer than 2 forecasts");
      const auto viol = violations(r, v);
      const auto uc = kupiec_test(viol.violations(), viol.size(), rate);
      const auto cc = christoffersen_test(viol, rate);
      w << m << viol.size() << viol.violations()
        << static_cast<double>(viol.violations()) /
               static_cast<double>(viol.size())
        << uc.statistic << uc.p_value
        << std::string(uc.reject_at_5pct ? "1" : "0")
        << christoffersen_independence_lr(viol) << cc.statistic << cc.p_value
        << std::string(cc.reject_at_5pct ? "1" : "0");
      w.end_row();
      errors.push_back(forecast_errors(v, r, cfg.dm_target, cfg.p));
    }
  }
  res.written.push_back(vpath);

  const auto dm = dm_matrix(errors, cfg.models);
  const auto write_matrix = [&](const fs::path& path,
                                const std::vector<std::vector<double>>& m) {
    auto out = open_out(path);
    std::vector<std::string> header{"model"};
    header.insert(header.end(), cfg.models.begin(), cfg.models.end());
    CsvWriter w(out, header);
    for (std::size_t i = 0; i < m.size(); ++i) {
      w << cfg.models[i];
      for (double x : m[i]) w << x;
      w.end_row();
    }
    res.written.push_back(path);
  };
  write_matrix(cfg.out / "dm_matrix.csv", dm.s2a);
  write_matrix(cfg.out / "dm_pvalues.csv", dm.p_value);

  std::ostringstream s;
  s << "backtested " << cfg.models.size() << " models; DM on "
    << dm.common_days << " common days (" << format_target(cfg.dm_target)
    << " errors)";
  res.summary = s.str();
  return res;
}

CommandResult cmd_report(const RunConfig& cfg) {
  const auto vpath = cfg.out / "validation.csv";
  const auto dpath = cfg.out / "dm_matrix.csv";
  if (!fs::exists(vpath) || !fs::exists(dpath)) {
    throw DataError("report: run backtest first (" + vpath.string() +
                    " or " + dpath.string() + " missing)");
  }
  const auto val = read_csv_table(vpath);
  const auto dm = read_csv_table(dpath);
  std::ostringstream s;
  s << "VaR backtest, p = " << cfg.p << "\n\n";
  char line[256];
  std::snprintf(line, sizeof line, "%-12s %6s %5s %7s %9s %7s %9s %7s\n",
                "model", "days", "viol", "ratio", "LR_uc", "p_uc", "LR_cc",
                "p_cc");
  s << line;
  for (const auto& row : val.rows) {
    const auto get = [&](const char* c) {
      return parse_cell(row[val.column(c)], vpath);
    };
    std::snprintf(line, sizeof line,
                  "%-12s %6s %5s %7.4f %9.4f %7.4f %9.4f %7.4f%s\n",
                  row[val.column("model")].c_str(),
                  row[val.column("days")].c_str(),
                  row[val.column("violations")].c_str(), get("ratio"),
                  get("lr_uc"), get("p_uc"), get("lr_cc"), get("p_cc"),
                  row[val.column("reject_uc")] == "1" ||
                          row[val.column("reject_cc")] == "1"
                      ? "  rejected"
                      : "");
    s << line;
  }
  s << "\nDM S2a (row vs column; below -" << kDmOneSidedCritical
    << " the row model is more accurate)\n";
  std::snprintf(line, sizeof line, "%-12s", "");
  s << line;
  for (std::size_t j = 1; j < dm.header.size(); ++j) {
    std::snprintf(line, sizeof line, " %10s", dm.header[j].c_str());
    s << line;
  }
  s << '\n';
  for (const auto& row : dm.rows) {
    std::snprintf(line, sizeof line, "%-12s", row[0].c_str());
    s << line;
    for (std::size_t j = 1; j < row.size(); ++j) {
      std::snprintf(line, sizeof line, " %10.3f", parse_cell(row[j], dpath));
      s << line;
    }
    s << '\n';
  }
  CommandResult res;
  const auto path = cfg.out / "report.txt";
  {
    auto out = open_out(path);
    out << s.str();
  }
  res.written.push_back(path);
  res.summary = s.str();
  return res;
}

CommandResult cmd_simulate(const RunConfig& cfg, std::size_t days,
                           std::size_t bars) {
  const auto sim = simulate_garch_t(days, GarchSimParams{}, cfg.seed);
  const auto panel = simulate_intraday(sim, bars, cfg.seed);
  fs::create_directories(cfg.out);
  CommandResult res;
  write_daily_csv(cfg.out / "daily.csv", sim.prices);
  write_intraday_csv(cfg.out / "intraday.csv", panel);
  res.written = {cfg.out / "daily.csv", cfg.out / "intraday.csv"};
  res.summary = "simulated " + std::to_string(days) + " days x " +
                std::to_string(bars) + " bars";
  return res;
}

}  // namespace uevt
