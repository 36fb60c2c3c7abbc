#include <doctest.h>

#include <sstream>

#include "uevt/csv_io.hpp"

using namespace uevt;

TEST_CASE("daily csv: sorted, validated, line-numbered errors") {
  std::istringstream in(
      "date,close\n2020-01-03,101\n2020-01-02,100\n\n2020-01-06,99.5\n");
  const auto px = read_daily_csv(in);
  REQUIRE(px.size() == 3);
  CHECK(format_date(px.date(0)) == "2020-01-02");
  CHECK(px[2] == 99.5);

  const auto err = [](const std::string& text) {
    std::istringstream s(text);
    try {
      read_daily_csv(s);
    } catch (const DataError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(err("date,close\n2020-01-02,100\n2020-01-02,101\n") ==
        "line 3: duplicate date");
  CHECK(err("date,close\n2020-01-02,-1\n") == "line 2: non-positive price");
  CHECK(err("date,close\n2020-01-02,abc\n").find("line 2") == 0);
  CHECK(err("date,close\n2020-01-02\n") == "line 2: expected 2 fields");
  CHECK(err("day,price\n").find("line 1: expected header") == 0);
  CHECK(err("date,close\nxx,1\n").find("line 2") == 0);
}

TEST_CASE("intraday csv in price and return form") {
  std::istringstream px(
      "date,time,price\n"
      "2020-01-02,09:35,100\n2020-01-02,09:40,101\n2020-01-02,09:45,NA\n"
      "2020-01-02,09:50,100\n"
      "2020-01-03,09:35,50\n");
  const auto p = read_intraday_csv(px, IntradayFormat::price);
  // The second day has a single price and so no returns; it is dropped.
  REQUIRE(p.size() == 1);
  REQUIRE(p.days()[0].returns.size() == 2);
  CHECK(p.days()[0].returns[0] == doctest::Approx(std::log(1.01)));
  CHECK(p.days()[0].returns[1] == doctest::Approx(std::log(100.0 / 101.0)));

  std::istringstream rt(
      "date,time,return\n2020-01-02,09:35,0.001\n2020-01-02,09:40,\n"
      "2020-01-03,09:35,-0.002\n");
  const auto r = read_intraday_csv(rt, IntradayFormat::ret);
  REQUIRE(r.size() == 2);
  CHECK(r.days()[0].returns == std::vector<double>{0.001});

  std::istringstream bad(
      "date,time,return\n2020-01-03,09:35,0.1\n2020-01-02,09:35,0.1\n");
  CHECK_THROWS_WITH_AS(read_intraday_csv(bad, IntradayFormat::ret),
                       "line 3: rows not grouped by increasing date",
                       DataError);
}

TEST_CASE("format_double round-trips") {
  for (double v : {0.1, -1e-300, 123456.789, 1.0 / 3.0, 0.0}) {
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(NAN) == "nan");
  CHECK(split_csv_line("a, b ,c\r") == std::vector<std::string>{"a", "b", "c"});
}
