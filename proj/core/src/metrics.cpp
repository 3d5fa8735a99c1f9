#include "msfc/metrics.hpp"

#include <cmath>
#include <string>

#include "msfc/errors.hpp"

namespace msfc::metrics {

void EvaluationFrame::validate() const {
  const std::size_t m = actual.size();
  if (m == 0) throw DataError("evaluation frame is empty");
  if (predicted.size() != m || prev_actual.size() != m) {
    throw DataError("evaluation frame columns differ in length");
  }
  const auto finite = [](const std::vector<double>& v) {
    for (double x : v) {
      if (!std::isfinite(x)) return false;
    }
    return true;
  };
  if (!finite(actual) || !finite(predicted) || !finite(prev_actual) ||
      !finite(estimation)) {
    throw DataError("evaluation frame contains non-finite values");
  }
}

double smape(const EvaluationFrame& frame, bool conventional) {
  frame.validate();
  double sum = 0.0;
  for (std::size_t t = 0; t < frame.actual.size(); ++t) {
    const double a = frame.actual[t];
    const double p = frame.predicted[t];
    const double den = conventional ? 0.5 * (std::abs(a) + std::abs(p))
                                    : a + p;
    if (den == 0.0) {
      throw NumericError("smape undefined: zero denominator at position " +
                         std::to_string(t));
    }
    sum += std::abs((a - p) / den);
  }
  return sum / static_cast<double>(frame.actual.size()) * 100.0;
}

double naive_scale(const std::vector<double>& estimation) {
  if (estimation.size() < 2) {
    throw DataError("estimation sample too short for the naive scale");
  }
  double sum = 0.0;
  for (std::size_t i = 1; i < estimation.size(); ++i) {
    sum += std::abs(estimation[i] - estimation[i - 1]);
  }
  const double scale = sum / static_cast<double>(estimation.size() - 1);
  if (scale == 0.0) {
    throw NumericError("mase undefined: constant estimation sample");
  }
  return scale;
}

double mase(const EvaluationFrame& frame) {
  frame.validate();
  const double scale = naive_scale(frame.estimation);
  double sum = 0.0;
  for (std::size_t t = 0; t < frame.actual.size(); ++t) {
    sum += std::abs(frame.actual[t] - frame.predicted[t]);
  }
  return sum / static_cast<double>(frame.actual.size()) / scale;
}

double ds(const EvaluationFrame& frame) {
  frame.validate();
  std::size_t hits = 0;
  for (std::size_t t = 0; t < frame.actual.size(); ++t) {
    const double realized = frame.actual[t] - frame.prev_actual[t];
    const double predicted = frame.predicted[t] - frame.prev_actual[t];
    if (realized * predicted >= 0.0) ++hits;
  }
  return static_cast<double>(hits) /
         static_cast<double>(frame.actual.size());
}

}  // namespace msfc::metrics
