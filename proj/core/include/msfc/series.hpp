#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace msfc {

// ============================================================================
// Calendar dates
// ============================================================================

/// Calendar date (day precision). Only ordering and formatting are needed;
/// no arithmetic beyond comparisons.
struct Date {
  int year = 0;
  int month = 0;
  int day = 0;

  auto operator<=>(const Date&) const = default;

  /// "YYYY-MM-DD"
  std::string to_string() const;

  /// Accepts ISO-8601 ("2000-01-07"), US ("01/07/2000"), and the
  /// month-name week-ending form used by EIA extracts ("Jan 07, 2000").
  /// Throws DataError on anything else.
  static Date parse(const std::string& text);
};

// ============================================================================
// Series and splitting
// ============================================================================

/// Univariate weekly price series. Dates strictly increasing, values finite.
struct Series {
  std::vector<Date> dates;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }

  /// Validates the invariants; throws DataError on violation.
  void validate() const;
};

/// Estimation/holdout split sizes. Must sum to the series length.
struct SplitSpec {
  std::size_t n_estimation = 0;
  std::size_t n_holdout = 0;
};

struct SplitResult {
  Series estimation;
  Series holdout;
};

/// Chronological split; concatenation of the parts equals the input.
SplitResult split(const Series& series, const SplitSpec& spec);

// ============================================================================
// Min-max normalization
// ============================================================================

/// Linear map [lo, hi] -> [0, 1]. Values outside the fitted range map
/// outside [0, 1]; that is intended when the scaler is fit on the
/// estimation sample and applied to the holdout.
struct MinMaxScaler {
  double lo = 0.0;
  double hi = 1.0;

  double transform(double x) const { return (x - lo) / (hi - lo); }
  double inverse(double y) const { return lo + y * (hi - lo); }

  std::vector<double> transform(const std::vector<double>& xs) const;
  std::vector<double> inverse(const std::vector<double>& ys) const;
};

/// lo = min(values), hi = max(values). Throws NumericError if the sample is
/// constant (degenerate scale).
MinMaxScaler fit_scaler(const std::vector<double>& values);
MinMaxScaler fit_scaler(const Series& estimation);

// ============================================================================
// Lag matrices
// ============================================================================

/// Sorted set of positive lags, bounded by the maximum embedding order.
class LagSet {
 public:
  static constexpr int kMaxEmbeddingOrder = 36;

  LagSet() = default;
  explicit LagSet(std::initializer_list<int> lags);
  explicit LagSet(const std::vector<int>& lags);

  /// Contiguous lags {1..d}.
  static LagSet contiguous(int d);

  const std::vector<int>& lags() const { return lags_; }
  int max_lag() const { return lags_.empty() ? 0 : lags_.back(); }
  std::size_t size() const { return lags_.size(); }
  bool empty() const { return lags_.empty(); }
  bool contains(int lag) const;

  std::string to_string() const;  // e.g. "1,2,5"

 private:
  std::vector<int> lags_;  // sorted, unique
};

enum class TargetMode {
  Single,   // target = value 1 step ahead
  Multi,    // targets = values 1..H steps ahead
  DirectH,  // target = value exactly H steps ahead
};

/// Supervised-learning view of a series: each row pairs lagged inputs with
/// future targets. Row r reads lags relative to origin index origin_indices[r]
/// (the most recent observation used as input); inputs are ordered by
/// ascending lag, i.e. most recent value first.
struct LagMatrix {
  Eigen::MatrixXd inputs;            // n_rows x n_lags
  Eigen::MatrixXd targets;           // n_rows x n_targets
  std::vector<std::size_t> origin_indices;

  std::size_t rows() const { return origin_indices.size(); }
};

/// Builds the lag matrix for the given mode. horizon is H for Multi and
/// DirectH and must be 1 for Single. Throws DataError when the series is too
/// short for a single row.
LagMatrix build_lag_matrix(const std::vector<double>& values,
                           const LagSet& lags, int horizon, TargetMode mode);

/// Input vector (ascending lags, most recent first) read from the tail of a
/// series: the value for lag l is series[n - l]. Throws DataError when the
/// maximum lag reaches before the start.
std::vector<double> lag_window(std::span<const double> series,
                               const LagSet& lags);

}  // namespace msfc
