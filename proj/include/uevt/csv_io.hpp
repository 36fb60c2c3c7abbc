#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "uevt/timeseries.hpp"

namespace uevt {

/// Shortest round-trip decimal representation; "nan" for NaN.
std::string format_double(double v);

/// Reads a `date,close` file. Rows may come in any date order; duplicate
/// dates and malformed rows abort with the offending line number.
PriceSeries read_daily_csv(std::istream& in);
PriceSeries read_daily_csv(const std::filesystem::path& path);

enum class IntradayFormat { price, ret };

/// Reads `date,time,price` or `date,time,return` rows grouped by date.
/// Empty or NA values are treated as missing bars and dropped. With the
/// price format, returns are log differences of consecutive bars within a
/// day.
IntradayPanel read_intraday_csv(std::istream& in, IntradayFormat format);
IntradayPanel read_intraday_csv(const std::filesystem::path& path,
                                IntradayFormat format);

/// Minimal CSV row writer; the header is written on construction.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header);
  CsvWriter& operator<<(const std::string& field);
  CsvWriter& operator<<(double v);
  CsvWriter& operator<<(std::size_t v);
  void end_row();

 private:
  std::ostream& out_;
  bool first_ = true;
};

/// Parsed CSV with a header row. Used when re-reading our own outputs.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::size_t column(const std::string& name) const;
};
CsvTable read_csv_table(const std::filesystem::path& path);

std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace uevt
