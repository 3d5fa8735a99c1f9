#pragma once

#include <vector>

namespace msfc::metrics {

/// Aligned holdout evaluation inputs for one model at one lead time.
/// `prev_actual[t]` is the actual observation immediately preceding the
/// target time of `actual[t]`; `estimation` is the estimation sample used by
/// the scaled-error denominator.
struct EvaluationFrame {
  std::vector<double> actual;
  std::vector<double> predicted;
  std::vector<double> prev_actual;
  std::vector<double> estimation;

  void validate() const;  // throws DataError on misalignment/non-finite
};

/// Symmetric mean absolute percentage error, in percent. The default follows
/// the plain-sum denominator |e|/(a+p); `conventional` switches to the
/// textbook 2|e|/(|a|+|p|) form for cross-literature comparison.
double smape(const EvaluationFrame& frame, bool conventional = false);

/// Mean absolute scaled error: mean |error| over the in-sample one-step
/// naive mean absolute difference.
double mase(const EvaluationFrame& frame);

/// Directional symmetry in [0,1]: fraction of targets whose predicted
/// direction of change matches the realized one; zero-change products score
/// as hits (>= 0 convention).
double ds(const EvaluationFrame& frame);

/// In-sample one-step naive mean absolute difference (the MASE denominator).
double naive_scale(const std::vector<double>& estimation);

}  // namespace msfc::metrics
