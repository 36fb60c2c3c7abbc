#include "uevt/csv_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>

namespace uevt {

namespace {

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw DataError("line " + std::to_string(line) + ": " + what);
}

double parse_number(const std::string& s, std::size_t line) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || !std::isfinite(v)) {
    fail(line, "cannot parse number '" + s + "'");
  }
  return v;
}

bool is_missing(const std::string& s) {
  const auto l = lower(s);
  return l.empty() || l == "na" || l == "nan" || l == "null";
}

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

void expect_header(std::istream& in, const std::vector<std::string>& want) {
  std::string line;
  if (!std::getline(in, line)) fail(1, "missing header");
  if (!line.empty() && static_cast<unsigned char>(line[0]) == 0xEF) {
    line.erase(0, 3);  // UTF-8 BOM
  }
  auto got = split_csv_line(line);
  for (auto& g : got) g = lower(trim(g));
  if (got != want) {
    std::string w;
    for (const auto& s : want) w += (w.empty() ? "" : ",") + s;
    fail(1, "expected header '" + w + "'");
  }
}

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

PriceSeries read_daily_csv(std::istream& in) {
  expect_header(in, {"date", "close"});
  std::map<Date, double> rows;
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 2) fail(lineno, "expected 2 fields");
    Date d;
    try {
      d = parse_date(f[0]);
    } catch (const DataError& e) {
      fail(lineno, e.what());
    }
    const double close = parse_number(f[1], lineno);
    if (!(close > 0.0)) fail(lineno, "non-positive price");
    if (!rows.emplace(d, close).second) fail(lineno, "duplicate date");
  }
  std::vector<Date> dates;
  std::vector<double> closes;
  for (const auto& [d, c] : rows) {
    dates.push_back(d);
    closes.push_back(c);
  }
  return PriceSeries(std::move(dates), std::move(closes));
}

PriceSeries read_daily_csv(const std::filesystem::path& path) {
  auto in = open(path);
  return read_daily_csv(in);
}

IntradayPanel read_intraday_csv(std::istream& in, IntradayFormat format) {
  expect_header(in, {"date", "time",
                     format == IntradayFormat::price ? "price" : "return"});
  std::vector<IntradayDay> days;
  std::vector<double> prices;  // bars of the current day (price format)
  std::string line;
  std::size_t lineno = 1;

  const auto close_day = [&] {
    if (days.empty() || format != IntradayFormat::price) return;
    auto& r = days.back().returns;
    for (std::size_t i = 1; i < prices.size(); ++i) {
      r.push_back(std::log(prices[i] / prices[i - 1]));
    }
    prices.clear();
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 3) fail(lineno, "expected 3 fields");
    Date d;
    try {
      d = parse_date(f[0]);
    } catch (const DataError& e) {
      fail(lineno, e.what());
    }
    if (f[1].empty()) fail(lineno, "empty time field");
    if (days.empty() || days.back().date != d) {
      if (!days.empty() && d < days.back().date) {
        fail(lineno, "rows not grouped by increasing date");
      }
      close_day();
      days.push_back({d, {}});
    }
    if (is_missing(f[2])) continue;
    const double v = parse_number(f[2], lineno);
    if (format == IntradayFormat::price) {
      if (!(v > 0.0)) fail(lineno, "non-positive price");
      prices.push_back(v);
    } else {
      days.back().returns.push_back(v);
    }
  }
  close_day();
  std::erase_if(days, [](const IntradayDay& d) { return d.returns.empty(); });
  return IntradayPanel(std::move(days));
}

IntradayPanel read_intraday_csv(const std::filesystem::path& path,
                                IntradayFormat format) {
  auto in = open(path);
  return read_intraday_csv(in, format);
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header)
    : out_(out) {
  for (const auto& h : header) *this << h;
  end_row();
}

CsvWriter& CsvWriter::operator<<(const std::string& field) {
  if (!first_) out_ << ',';
  out_ << field;
  first_ = false;
  return *this;
}

CsvWriter& CsvWriter::operator<<(double v) { return *this << format_double(v); }

CsvWriter& CsvWriter::operator<<(std::size_t v) {
  return *this << std::to_string(v);
}

void CsvWriter::end_row() {
  out_ << '\n';
  first_ = true;
}

std::size_t CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw DataError("missing column '" + name + "'");
  return static_cast<std::size_t>(it - header.begin());
}

CsvTable read_csv_table(const std::filesystem::path& path) {
  auto in = open(path);
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw DataError(path.string() + ": empty file");
  t.header = split_csv_line(line);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto f = split_csv_line(line);
    if (f.size() != t.header.size()) {
      throw DataError(path.string() + ": line " + std::to_string(lineno) +
                      ": expected " + std::to_string(t.header.size()) +
                      " fields");
    }
    t.rows.push_back(std::move(f));
  }
  return t;
}

}  // namespace uevt
