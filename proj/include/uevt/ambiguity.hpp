#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "uevt/timeseries.hpp"

namespace uevt {

/// Histogram bins for intraday returns: 0.1% wide on [-2%, 2%], widening to
/// 0.2%, 0.25%, 0.5% and 1% on the successive 1% bands out to +/-6%, plus
/// one open bin on each side.
struct BinScheme {
  std::vector<double> edges;   // finite edges, ascending; bins = edges + 1
  std::vector<double> widths;  // per bin, as return fractions

  std::size_t bin_count() const { return widths.size(); }
  /// Bin index of r; bins are [left, right).
  std::size_t locate(double r) const;
};

BinScheme build_bins();

struct DailyBinProbabilities {
  Date date;
  std::vector<double> probs;
};

struct AmbiguityValue {
  Month month;
  double mho2 = 0.0;
  std::size_t days_used = 0;
};

/// Days with fewer intraday returns are left out of ambiguity estimation.
inline constexpr std::size_t kMinIntradayReturns = 10;

DailyBinProbabilities daily_bin_probabilities(const IntradayDay& day,
                                              const BinScheme& scheme);

/// Per-bin terms var(P_i) * E(P_i) / (w_i (1 - w_i)) with mean and
/// population variance taken across days.
std::vector<double> ambiguity_contributions(
    std::span<const DailyBinProbabilities> days, const BinScheme& scheme);

/// Sum of ambiguity_contributions; the month is that of the first day.
AmbiguityValue monthly_ambiguity(std::span<const DailyBinProbabilities> days,
                                 const BinScheme& scheme);

class AmbiguitySeries {
 public:
  AmbiguitySeries() = default;
  AmbiguitySeries(std::vector<AmbiguityValue> values, std::vector<Month> gaps);

  const std::vector<AmbiguityValue>& values() const { return values_; }
  const std::vector<Month>& gaps() const { return gaps_; }

  struct Lookup {
    double mho2;
    bool stale;  // not the calendar month immediately before
  };
  /// Latest monthly value strictly before the month of `d`.
  std::optional<Lookup> value_before(Date d) const;

 private:
  std::vector<AmbiguityValue> values_;
  std::vector<Month> gaps_;
};

/// One value per calendar month with at least two usable days; other months
/// are recorded as gaps.
AmbiguitySeries ambiguity_series(const IntradayPanel& panel,
                                 const BinScheme& scheme);

}  // namespace uevt
