#include <doctest.h>

#include <random>

#include "uevt/ambiguity.hpp"

using namespace uevt;

namespace {

Date day(int y, unsigned m, unsigned d) {
  return Date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
}

std::vector<double> repeat(double v, std::size_t n) {
  return std::vector<double>(n, v);
}

// Textbook estimator with plain two-pass moments.
double oracle_mho2(const std::vector<std::vector<double>>& days,
                   const BinScheme& s) {
  std::vector<std::vector<double>> probs;
  for (const auto& d : days) {
    std::vector<double> p(s.bin_count(), 0.0);
    for (double r : d) {
      std::size_t i = 0;
      while (i < s.edges.size() && r >= s.edges[i]) ++i;
      p[i] += 1.0 / d.size();
    }
    probs.push_back(p);
  }
  double total = 0.0;
  for (std::size_t i = 0; i < s.bin_count(); ++i) {
    double m = 0.0;
    for (const auto& p : probs) m += p[i];
    m /= probs.size();
    double v = 0.0;
    for (const auto& p : probs) v += (p[i] - m) * (p[i] - m);
    v /= probs.size();
    total += v * m / (s.widths[i] * (1.0 - s.widths[i]));
  }
  return total;
}

std::vector<DailyBinProbabilities> to_probs(
    const std::vector<std::vector<double>>& days, const BinScheme& s) {
  std::vector<DailyBinProbabilities> out;
  unsigned k = 1;
  for (const auto& d : days) {
    out.push_back(daily_bin_probabilities({day(2010, 3, k++), d}, s));
  }
  return out;
}

}  // namespace

TEST_CASE("bin scheme layout") {
  const auto s = build_bins();
  CHECK(s.bin_count() == 66);
  CHECK(s.edges.size() == 65);
  CHECK(s.edges.front() == -0.06);
  CHECK(s.edges.back() == 0.06);
  for (std::size_t i = 0; i < s.edges.size(); ++i) {
    CHECK(s.edges[i] == -s.edges[s.edges.size() - 1 - i]);
    if (i > 0) CHECK(s.edges[i] > s.edges[i - 1]);
  }
  // Finite bins have their stated width; band structure from the centre out.
  for (std::size_t i = 1; i + 1 < s.bin_count(); ++i) {
    CHECK(s.widths[i] == doctest::Approx(s.edges[i] - s.edges[i - 1]).epsilon(1e-12));
    const double mid = std::abs(0.5 * (s.edges[i] + s.edges[i - 1]));
    const double want = mid < 0.02 ? 0.001 : mid < 0.03 ? 0.002
                      : mid < 0.04 ? 0.0025 : mid < 0.05 ? 0.005 : 0.01;
    CHECK(s.widths[i] == doctest::Approx(want).epsilon(1e-12));
  }
  CHECK(s.locate(-1.0) == 0);
  CHECK(s.locate(1.0) == 65);
  CHECK(s.locate(0.0) == 33);   // edges sit in the bin to their right
  CHECK(s.locate(-1e-12) == 32);
  CHECK(s.locate(0.06) == 65);
  CHECK(s.locate(-0.06) == 1);
}

TEST_CASE("daily bin probabilities sum to one") {
  const auto s = build_bins();
  std::mt19937_64 rng(1);
  std::normal_distribution<double> z(0.0, 0.02);
  std::vector<double> r(78);
  for (auto& v : r) v = z(rng);
  const auto p = daily_bin_probabilities({day(2010, 1, 4), r}, s);
  double sum = 0.0;
  for (double v : p.probs) {
    CHECK(v >= 0.0);
    sum += v;
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(daily_bin_probabilities({day(2010, 1, 4), {}}, s), DataError);
}

TEST_CASE("two-day flipping-bin hand example") {
  const auto s = build_bins();
  // Day 1 all in [0, 0.001), day 2 all in [0.001, 0.002).
  const auto probs = to_probs({repeat(0.0005, 20), repeat(0.0015, 20)}, s);
  const auto terms = ambiguity_contributions(probs, s);
  const double hand = 0.5 * 0.25 / (0.001 * 0.999);
  CHECK(terms[33] == hand);
  CHECK(terms[34] == hand);
  const auto v = monthly_ambiguity(probs, s);
  CHECK(v.mho2 == 2.0 * hand);
  CHECK(v.days_used == 2);
  CHECK(v.month == Month{2010, 3});
}

TEST_CASE("monthly ambiguity matches the textbook oracle") {
  const auto s = build_bins();
  std::mt19937_64 rng(8);
  for (double sd : {0.001, 0.004, 0.03}) {
    std::vector<std::vector<double>> days;
    for (int d = 0; d < 19; ++d) {
      std::normal_distribution<double> z(0.0, sd * (1.0 + 0.1 * d));
      std::vector<double> r(78);
      for (auto& v : r) v = z(rng);
      days.push_back(r);
    }
    const auto got = monthly_ambiguity(to_probs(days, s), s).mho2;
    CHECK(got == doctest::Approx(oracle_mho2(days, s)).epsilon(1e-12));
  }
}

TEST_CASE("identical days give exactly zero, dispersion raises ambiguity") {
  const auto s = build_bins();
  std::mt19937_64 rng(2);
  std::normal_distribution<double> z(0.0, 0.003);
  std::vector<double> r(78);
  for (auto& v : r) v = z(rng);
  std::vector<std::vector<double>> same(21, r);
  CHECK(monthly_ambiguity(to_probs(same, s), s).mho2 == 0.0);

  std::vector<std::vector<double>> low, high;
  for (int d = 0; d < 21; ++d) {
    std::normal_distribution<double> calm(0.0, 0.002);
    std::normal_distribution<double> wild(0.0, d % 2 ? 0.0005 : 0.008);
    std::vector<double> a(78), b(78);
    for (auto& v : a) v = calm(rng);
    for (auto& v : b) v = wild(rng);
    low.push_back(a);
    high.push_back(b);
  }
  CHECK(monthly_ambiguity(to_probs(high, s), s).mho2 >
        monthly_ambiguity(to_probs(low, s), s).mho2);
  CHECK_THROWS_AS(monthly_ambiguity(to_probs({r}, s), s), DataError);
}

TEST_CASE("ambiguity series: gaps, thin days and lookups") {
  std::vector<IntradayDay> days;
  const auto r = repeat(0.0005, 20);
  auto r2 = repeat(0.0005, 20);
  r2[0] = 0.0015;
  // January: two good days. February: one good day and one thin day.
  // March: none. April: two good days.
  days.push_back({day(2010, 1, 4), r});
  days.push_back({day(2010, 1, 5), r2});
  days.push_back({day(2010, 2, 1), r});
  days.push_back({day(2010, 2, 2), repeat(0.0005, 9)});
  days.push_back({day(2010, 4, 1), r});
  days.push_back({day(2010, 4, 2), r});
  const auto a = ambiguity_series(IntradayPanel(days), build_bins());
  REQUIRE(a.values().size() == 2);
  CHECK(a.values()[0].month == Month{2010, 1});
  CHECK(a.values()[1].month == Month{2010, 4});
  CHECK(a.values()[1].mho2 == 0.0);
  CHECK(a.gaps() == std::vector<Month>{{2010, 2}});

  CHECK_FALSE(a.value_before(day(2010, 1, 20)));
  const auto feb = a.value_before(day(2010, 2, 15));
  REQUIRE(feb);
  CHECK_FALSE(feb->stale);
  CHECK(feb->mho2 == a.values()[0].mho2);
  const auto apr = a.value_before(day(2010, 4, 15));
  REQUIRE(apr);
  CHECK(apr->stale);  // March missing, January carried forward
  CHECK(apr->mho2 == a.values()[0].mho2);
  const auto may = a.value_before(day(2010, 5, 3));
  REQUIRE(may);
  CHECK_FALSE(may->stale);
  CHECK(may->mho2 == 0.0);
}
