#include "msfc/series.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

#include "msfc/errors.hpp"
#include "msfc/rng.hpp"

using namespace msfc;

namespace {

Series ramp_series(int n, double start = 1.0) {
  Series s;
  for (int i = 0; i < n; ++i) {
    s.dates.push_back(Date{2000, 1 + i / 28, 1 + i % 28});
    s.values.push_back(start + i);
  }
  return s;
}

}  // namespace

TEST_CASE("date parsing accepts the three supported formats") {
  CHECK(Date::parse("2000-01-07") == Date{2000, 1, 7});
  CHECK(Date::parse("01/07/2000") == Date{2000, 1, 7});
  CHECK(Date::parse("Jan 07, 2000") == Date{2000, 1, 7});
  CHECK(Date::parse("Dec 30, 2011") == Date{2011, 12, 30});
  CHECK_THROWS_AS(Date::parse("not-a-date"), DataError);
  CHECK(Date{2008, 1, 4} < Date{2008, 1, 11});
}

TEST_CASE("split: two-point series into singletons") {
  Series s;
  s.dates = {Date{2000, 1, 7}, Date{2000, 1, 14}};
  s.values = {10.0, 20.0};
  auto r = split(s, SplitSpec{1, 1});
  CHECK(r.estimation.values == std::vector<double>{10.0});
  CHECK(r.holdout.values == std::vector<double>{20.0});
}

TEST_CASE("split: 10-point ramp at (7,3)") {
  auto s = ramp_series(10);
  auto r = split(s, SplitSpec{7, 3});
  CHECK(r.estimation.values == std::vector<double>{1, 2, 3, 4, 5, 6, 7});
  CHECK(r.holdout.values == std::vector<double>{8, 9, 10});
  CHECK(r.estimation.dates.back() < r.holdout.dates.front());
}

TEST_CASE("split is lossless: re-concatenation bit-equal to input") {
  SplitMix64 rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 2 + static_cast<int>(rng.next_index(60));
    Series s = ramp_series(n);
    for (auto& v : s.values) v = rng.next_double(5.0, 150.0);
    const auto n_est = 1 + rng.next_index(static_cast<std::uint64_t>(n - 1));
    auto r = split(s, SplitSpec{n_est, s.size() - n_est});
    std::vector<double> cat = r.estimation.values;
    cat.insert(cat.end(), r.holdout.values.begin(), r.holdout.values.end());
    CHECK(cat == s.values);
  }
}

TEST_CASE("split rejects inconsistent sizes") {
  auto s = ramp_series(10);
  CHECK_THROWS_AS(split(s, SplitSpec{4, 3}), DataError);
  CHECK_THROWS_AS(split(s, SplitSpec{10, 0}), DataError);
}

TEST_CASE("scaler endpoints and midpoint") {
  MinMaxScaler sc = fit_scaler(std::vector<double>{0.0, 10.0});
  CHECK(sc.lo == 0.0);
  CHECK(sc.hi == 10.0);
  CHECK(sc.transform(5.0) == 0.5);

  MinMaxScaler sc2 = fit_scaler(std::vector<double>{20.0, 30.0, 25.0});
  CHECK(sc2.transform(30.0) == 1.0);
  CHECK(sc2.transform(20.0) == 0.0);
}

TEST_CASE("scaler: constant sample is a degenerate scale") {
  CHECK_THROWS_AS(fit_scaler(std::vector<double>{3.0, 3.0, 3.0}),
                  NumericError);
}

TEST_CASE("scaler: holdout values above the fitted range map above 1") {
  // Fit on a pre-2008-like range, apply to a 2008-peak-like price.
  MinMaxScaler sc = fit_scaler(std::vector<double>{11.0, 99.0, 50.0});
  CHECK(sc.transform(145.0) > 1.0);
}

TEST_CASE("scaler round-trip is identity within 1e-12 relative") {
  SplitMix64 rng(99);
  std::vector<double> vals;
  for (int i = 0; i < 50; ++i) vals.push_back(rng.next_double(11.0, 145.0));
  MinMaxScaler sc = fit_scaler(vals);
  for (double x : vals) {
    CHECK(std::abs(sc.inverse(sc.transform(x)) - x) <= 1e-12 * std::abs(x));
  }
}

TEST_CASE("lag matrix: single-step rows enumerate as expected") {
  std::vector<double> v{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  auto m = build_lag_matrix(v, LagSet{1, 2}, 1, TargetMode::Single);
  REQUIRE(m.rows() == 8);
  CHECK(m.inputs(0, 0) == 2.0);  // lag 1
  CHECK(m.inputs(0, 1) == 1.0);  // lag 2
  CHECK(m.targets(0, 0) == 3.0);
  CHECK(m.origin_indices[0] == 1);
  CHECK(m.inputs(7, 0) == 9.0);
  CHECK(m.targets(7, 0) == 10.0);
}

TEST_CASE("lag matrix: multi-target rows carry H future values") {
  std::vector<double> v{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  auto m = build_lag_matrix(v, LagSet{1}, 3, TargetMode::Multi);
  REQUIRE(m.rows() == 7);
  CHECK(m.inputs(0, 0) == 1.0);
  CHECK(m.targets(0, 0) == 2.0);
  CHECK(m.targets(0, 1) == 3.0);
  CHECK(m.targets(0, 2) == 4.0);
}

TEST_CASE("lag matrix: direct-h target is exactly h steps ahead") {
  std::vector<double> v{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  auto m = build_lag_matrix(v, LagSet{1, 3}, 4, TargetMode::DirectH);
  // origins run from index 2 (max lag 3) to 5 (target 5+4=9 is last index)
  REQUIRE(m.rows() == 4);
  CHECK(m.inputs(0, 0) == 3.0);
  CHECK(m.inputs(0, 1) == 1.0);
  CHECK(m.targets(0, 0) == 7.0);
}

TEST_CASE("lag matrix: boundary count of exactly one row") {
  std::vector<double> v{1, 2, 3, 4, 5, 6, 7};  // maxlag 4 + H 3 = 7
  auto m = build_lag_matrix(v, LagSet{4}, 3, TargetMode::Multi);
  CHECK(m.rows() == 1);
  CHECK_THROWS_AS(
      build_lag_matrix(std::vector<double>{1, 2, 3, 4, 5, 6}, LagSet{4}, 3,
                       TargetMode::Multi),
      DataError);
}

TEST_CASE("lag matrix row count matches the closed formula on random cases") {
  SplitMix64 rng(2024);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 10 + static_cast<int>(rng.next_index(50));
    const int max_lag = 1 + static_cast<int>(rng.next_index(6));
    const int horizon = 1 + static_cast<int>(rng.next_index(4));
    const auto mode = static_cast<TargetMode>(rng.next_index(3));
    const int h = mode == TargetMode::Single ? 1 : horizon;
    if (n - max_lag - h + 1 < 1) continue;

    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = rng.next_double();
    std::vector<int> lags{max_lag};
    for (int l = 1; l < max_lag; ++l) {
      if (rng.next_double() < 0.5) lags.push_back(l);
    }
    auto m = build_lag_matrix(v, LagSet(lags), h, mode);

    // Independent enumeration of admissible origins.
    std::size_t count = 0;
    for (int origin = 0; origin < n; ++origin) {
      if (origin - max_lag + 1 >= 0 && origin + h <= n - 1) ++count;
    }
    CHECK(m.rows() == count);
    CHECK(m.rows() == static_cast<std::size_t>(n - max_lag - h + 1));
  }
}

TEST_CASE("lag window reads the series tail by lag") {
  std::vector<double> v{10, 20, 30, 40, 50};
  auto w = lag_window(v, LagSet{1, 2, 5});
  CHECK(w == std::vector<double>{50, 40, 10});
  CHECK_THROWS_AS(lag_window(std::span<const double>(v.data(), 3), LagSet{5}),
                  DataError);
}

TEST_CASE("non-contiguous lag subsets are first-class") {
  std::vector<double> v{1, 2, 3, 4, 5, 6, 7, 8};
  auto m = build_lag_matrix(v, LagSet{2, 5}, 1, TargetMode::Single);
  REQUIRE(m.rows() == 3);
  // origin 4 (value 5): lag2 -> 4, lag5 -> 1, target 6
  CHECK(m.inputs(0, 0) == 4.0);
  CHECK(m.inputs(0, 1) == 1.0);
  CHECK(m.targets(0, 0) == 6.0);
}

TEST_CASE("series validation flags order and finiteness violations") {
  Series s = ramp_series(5);
  CHECK_NOTHROW(s.validate());
  s.values[2] = std::nan("");
  CHECK_THROWS_AS(s.validate(), DataError);
  s = ramp_series(5);
  std::swap(s.dates[1], s.dates[3]);
  CHECK_THROWS_AS(s.validate(), DataError);
}
