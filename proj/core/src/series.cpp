#include "msfc/series.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "msfc/errors.hpp"

namespace msfc {

// ============================================================================
// Date
// ============================================================================

std::string Date::to_string() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
  return buf;
}

namespace {

const std::array<std::string, 12> kMonthNames = {
    "jan", "feb", "mar", "apr", "may", "jun",
    "jul", "aug", "sep", "oct", "nov", "dec"};

bool plausible(const Date& d) {
  return d.year >= 1800 && d.year <= 2200 && d.month >= 1 && d.month <= 12 &&
         d.day >= 1 && d.day <= 31;
}

}  // namespace

Date Date::parse(const std::string& text) {
  Date d;
  // ISO-8601: YYYY-MM-DD
  if (std::sscanf(text.c_str(), "%d-%d-%d", &d.year, &d.month, &d.day) == 3 &&
      plausible(d)) {
    return d;
  }
  // US: MM/DD/YYYY
  if (std::sscanf(text.c_str(), "%d/%d/%d", &d.month, &d.day, &d.year) == 3 &&
      plausible(d)) {
    return d;
  }
  // EIA week-ending extracts: "Jan 07, 2000"
  char mon[16] = {0};
  if (std::sscanf(text.c_str(), "%15s %d, %d", mon, &d.day, &d.year) == 3) {
    std::string m(mon);
    std::transform(m.begin(), m.end(), m.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    for (std::size_t i = 0; i < kMonthNames.size(); ++i) {
      if (m.rfind(kMonthNames[i], 0) == 0) {
        d.month = static_cast<int>(i) + 1;
        if (plausible(d)) return d;
      }
    }
  }
  throw DataError("unparseable date: '" + text + "'");
}

// ============================================================================
// Series
// ============================================================================

void Series::validate() const {
  if (dates.size() != values.size()) {
    throw DataError("series dates and values differ in length");
  }
  if (values.size() < 2) {
    throw DataError("series must contain at least 2 observations");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw DataError("non-finite value at position " + std::to_string(i));
    }
    if (i > 0 && !(dates[i - 1] < dates[i])) {
      throw DataError("dates not strictly increasing at position " +
                      std::to_string(i));
    }
  }
}

SplitResult split(const Series& series, const SplitSpec& spec) {
  if (spec.n_estimation < 1 || spec.n_holdout < 1 ||
      spec.n_estimation + spec.n_holdout != series.size()) {
    std::ostringstream msg;
    msg << "invalid split: " << spec.n_estimation << " + " << spec.n_holdout
        << " != series length " << series.size();
    throw DataError(msg.str());
  }
  SplitResult r;
  const auto cut = static_cast<std::ptrdiff_t>(spec.n_estimation);
  r.estimation.dates.assign(series.dates.begin(), series.dates.begin() + cut);
  r.estimation.values.assign(series.values.begin(),
                             series.values.begin() + cut);
  r.holdout.dates.assign(series.dates.begin() + cut, series.dates.end());
  r.holdout.values.assign(series.values.begin() + cut, series.values.end());
  return r;
}

// ============================================================================
// MinMaxScaler
// ============================================================================

std::vector<double> MinMaxScaler::transform(
    const std::vector<double>& xs) const {
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = transform(xs[i]);
  return out;
}

std::vector<double> MinMaxScaler::inverse(const std::vector<double>& ys) const {
  std::vector<double> out(ys.size());
  for (std::size_t i = 0; i < ys.size(); ++i) out[i] = inverse(ys[i]);
  return out;
}

MinMaxScaler fit_scaler(const std::vector<double>& values) {
  if (values.size() < 2) {
    throw DataError("scaler needs at least 2 observations");
  }
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (!(*hi > *lo)) {
    throw NumericError("degenerate scale: sample is constant");
  }
  return MinMaxScaler{*lo, *hi};
}

MinMaxScaler fit_scaler(const Series& estimation) {
  return fit_scaler(estimation.values);
}

// ============================================================================
// LagSet
// ============================================================================

namespace {

std::vector<int> normalize_lags(std::vector<int> lags) {
  std::sort(lags.begin(), lags.end());
  lags.erase(std::unique(lags.begin(), lags.end()), lags.end());
  for (int lag : lags) {
    if (lag < 1 || lag > LagSet::kMaxEmbeddingOrder) {
      throw DataError("lag " + std::to_string(lag) + " outside 1.." +
                      std::to_string(LagSet::kMaxEmbeddingOrder));
    }
  }
  return lags;
}

}  // namespace

LagSet::LagSet(std::initializer_list<int> lags)
    : lags_(normalize_lags(std::vector<int>(lags))) {}

LagSet::LagSet(const std::vector<int>& lags) : lags_(normalize_lags(lags)) {}

LagSet LagSet::contiguous(int d) {
  std::vector<int> lags(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) lags[static_cast<std::size_t>(i)] = i + 1;
  return LagSet(lags);
}

bool LagSet::contains(int lag) const {
  return std::binary_search(lags_.begin(), lags_.end(), lag);
}

std::string LagSet::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < lags_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(lags_[i]);
  }
  return s;
}

// ============================================================================
// Lag matrices
// ============================================================================

LagMatrix build_lag_matrix(const std::vector<double>& values,
                           const LagSet& lags, int horizon, TargetMode mode) {
  if (lags.empty()) throw DataError("lag set is empty");
  if (horizon < 1) throw DataError("horizon must be >= 1");
  if (mode == TargetMode::Single && horizon != 1) {
    throw DataError("single-target mode requires horizon 1");
  }

  const int max_lag = lags.max_lag();
  const auto n = static_cast<std::ptrdiff_t>(values.size());
  // Origins i carry inputs value[i - l + 1] for each lag l and targets up to
  // horizon steps ahead, so i runs over [max_lag - 1, n - horizon).
  const std::ptrdiff_t first = max_lag - 1;
  const std::ptrdiff_t last = n - horizon;  // exclusive
  const std::ptrdiff_t n_rows = last - first;
  if (n_rows < 1) {
    throw DataError("series of length " + std::to_string(values.size()) +
                    " too short for max lag " + std::to_string(max_lag) +
                    " and horizon " + std::to_string(horizon));
  }

  const auto n_inputs = static_cast<std::ptrdiff_t>(lags.size());
  const std::ptrdiff_t n_targets = (mode == TargetMode::Multi) ? horizon : 1;

  LagMatrix m;
  m.inputs.resize(n_rows, n_inputs);
  m.targets.resize(n_rows, n_targets);
  m.origin_indices.reserve(static_cast<std::size_t>(n_rows));

  for (std::ptrdiff_t r = 0; r < n_rows; ++r) {
    const std::ptrdiff_t origin = first + r;
    m.origin_indices.push_back(static_cast<std::size_t>(origin));
    const auto& ls = lags.lags();
    for (std::ptrdiff_t c = 0; c < n_inputs; ++c) {
      m.inputs(r, c) = values[static_cast<std::size_t>(
          origin - ls[static_cast<std::size_t>(c)] + 1)];
    }
    switch (mode) {
      case TargetMode::Single:
        m.targets(r, 0) = values[static_cast<std::size_t>(origin + 1)];
        break;
      case TargetMode::DirectH:
        m.targets(r, 0) = values[static_cast<std::size_t>(origin + horizon)];
        break;
      case TargetMode::Multi:
        for (std::ptrdiff_t h = 0; h < horizon; ++h) {
          m.targets(r, h) = values[static_cast<std::size_t>(origin + 1 + h)];
        }
        break;
    }
  }
  return m;
}

std::vector<double> lag_window(std::span<const double> series,
                               const LagSet& lags) {
  const auto n = series.size();
  if (lags.empty()) throw DataError("lag set is empty");
  if (static_cast<std::size_t>(lags.max_lag()) > n) {
    throw DataError("history of length " + std::to_string(n) +
                    " too short for max lag " + std::to_string(lags.max_lag()));
  }
  std::vector<double> window(lags.size());
  const auto& ls = lags.lags();
  for (std::size_t i = 0; i < ls.size(); ++i) {
    window[i] = series[n - static_cast<std::size_t>(ls[i])];
  }
  return window;
}

}  // namespace msfc
