#include "uevt/ambiguity.hpp"

#include <algorithm>
#include <map>

namespace uevt {

namespace {

// Edges live on a 0.05% grid so the scheme is exactly symmetric.
constexpr double kUnit = 2000.0;

}  // namespace

std::size_t BinScheme::locate(double r) const {
  return static_cast<std::size_t>(
      std::upper_bound(edges.begin(), edges.end(), r) - edges.begin());
}

BinScheme build_bins() {
  // (band end in grid units, bin width in grid units), walking out from 0.
  constexpr int bands[][2] = {{40, 2}, {60, 4}, {80, 5}, {100, 10}, {120, 20}};
  std::vector<int> positive{0};
  for (const auto& [end, width] : bands) {
    while (positive.back() < end) positive.push_back(positive.back() + width);
  }
  std::vector<int> units;
  for (auto it = positive.rbegin(); it != positive.rend(); ++it) {
    if (*it != 0) units.push_back(-*it);
  }
  units.insert(units.end(), positive.begin(), positive.end());

  BinScheme s;
  s.widths.push_back(20 / kUnit);  // open bin below -6%
  for (std::size_t i = 0; i < units.size(); ++i) {
    s.edges.push_back(units[i] / kUnit);
    if (i > 0) s.widths.push_back((units[i] - units[i - 1]) / kUnit);
  }
  s.widths.push_back(20 / kUnit);  // open bin at or above 6%
  return s;
}

DailyBinProbabilities daily_bin_probabilities(const IntradayDay& day,
                                              const BinScheme& scheme) {
  if (day.returns.empty()) {
    throw DataError("daily_bin_probabilities: no returns on " +
                    format_date(day.date));
  }
  std::vector<std::size_t> counts(scheme.bin_count(), 0);
  for (double r : day.returns) ++counts[scheme.locate(r)];
  DailyBinProbabilities out{day.date, std::vector<double>(counts.size())};
  const double total = static_cast<double>(day.returns.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    out.probs[i] = static_cast<double>(counts[i]) / total;
  }
  return out;
}

std::vector<double> ambiguity_contributions(
    std::span<const DailyBinProbabilities> days, const BinScheme& scheme) {
  if (days.size() < 2) {
    throw DataError("monthly_ambiguity: need at least two days");
  }
  const std::size_t bins = scheme.bin_count();
  for (const auto& d : days) {
    if (d.probs.size() != bins) {
      throw DataError("monthly_ambiguity: bin count mismatch on " +
                      format_date(d.date));
    }
  }
  const double n = static_cast<double>(days.size());
  std::vector<double> out(bins, 0.0);
  for (std::size_t i = 0; i < bins; ++i) {
    // Shift by the first day so identical days give exactly zero variance.
    const double base = days[0].probs[i];
    double m = 0.0;
    for (const auto& d : days) m += d.probs[i] - base;
    m /= n;
    double var = 0.0;
    for (const auto& d : days) {
      const double dev = d.probs[i] - base - m;
      var += dev * dev;
    }
    var /= n;
    const double mean = base + m;
    const double w = scheme.widths[i];
    out[i] = var * mean / (w * (1.0 - w));
  }
  return out;
}

AmbiguityValue monthly_ambiguity(std::span<const DailyBinProbabilities> days,
                                 const BinScheme& scheme) {
  const auto terms = ambiguity_contributions(days, scheme);
  double total = 0.0;
  for (double t : terms) total += t;
  return {month_of(days[0].date), total, days.size()};
}

AmbiguitySeries::AmbiguitySeries(std::vector<AmbiguityValue> values,
                                 std::vector<Month> gaps)
    : values_(std::move(values)), gaps_(std::move(gaps)) {
  for (std::size_t i = 1; i < values_.size(); ++i) {
    if (!(values_[i - 1].month < values_[i].month)) {
      throw DataError("ambiguity series: months not increasing");
    }
  }
}

std::optional<AmbiguitySeries::Lookup> AmbiguitySeries::value_before(
    Date d) const {
  const Month m = month_of(d);
  auto it = std::lower_bound(
      values_.begin(), values_.end(), m,
      [](const AmbiguityValue& v, const Month& key) { return v.month < key; });
  if (it == values_.begin()) return std::nullopt;
  --it;
  return Lookup{it->mho2, it->month != previous_month(m)};
}

AmbiguitySeries ambiguity_series(const IntradayPanel& panel,
                                 const BinScheme& scheme) {
  std::map<Month, std::vector<DailyBinProbabilities>> by_month;
  for (const auto& day : panel.days()) {
    auto& bucket = by_month[month_of(day.date)];
    if (day.returns.size() >= kMinIntradayReturns) {
      bucket.push_back(daily_bin_probabilities(day, scheme));
    }
  }
  std::vector<AmbiguityValue> values;
  std::vector<Month> gaps;
  for (const auto& [month, days] : by_month) {
    if (days.size() < 2) {
      gaps.push_back(month);
      continue;
    }
    values.push_back(monthly_ambiguity(days, scheme));
  }
  return AmbiguitySeries(std::move(values), std::move(gaps));
}

}  // namespace uevt
