#include "msfc/strategies.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

#include "msfc/errors.hpp"
#include "msfc/rng.hpp"

using namespace msfc;
using namespace msfc::strategies;

namespace {

// Test spy: records every input window it is asked to predict from and
// replays a fixed rule.
class SpyRegressor : public Regressor {
 public:
  struct Trained : TrainedRegressor {
    explicit Trained(std::vector<std::vector<double>>* log) : log_(log) {}
    std::vector<double> predict(std::span<const double> in) const override {
      log_->emplace_back(in.begin(), in.end());
      return {in[0]};  // identity on the most recent value
    }
    int n_outputs() const override { return 1; }
    std::vector<std::vector<double>>* log_;
  };

  std::unique_ptr<TrainedRegressor> train(const LagMatrix&,
                                          std::uint64_t) const override {
    return std::make_unique<Trained>(&windows);
  }

  mutable std::vector<std::vector<double>> windows;
};

std::vector<double> ar1_series(double coef, std::size_t n, double x0 = 1.0) {
  std::vector<double> s(n);
  s[0] = x0;
  for (std::size_t t = 1; t < n; ++t) s[t] = coef * s[t - 1];
  return s;
}

}  // namespace

// ============================================================================
// Iterated strategy
// ============================================================================

TEST_CASE("iterated: constant series fixes a constant model") {
  std::vector<double> s(50, 7.0);
  LinearRegressor reg;
  auto m = train_iterated(s, LagSet{1}, reg, 0);
  auto f = forecast_iterated(m, s, 4);
  for (double v : f) CHECK(v == doctest::Approx(7.0).epsilon(1e-10));
}

TEST_CASE("iterated: noiseless AR(1) coefficient is recovered exactly") {
  auto s = ar1_series(0.8, 40);
  LinearRegressor reg;
  auto m = train_iterated(s, LagSet{1}, reg, 0);
  // One-step prediction from history ending at 1.0 must be 0.8.
  std::vector<double> hist{0.5, 1.0};
  auto f = forecast_iterated(m, hist, 3);
  CHECK(f[0] == doctest::Approx(0.8).epsilon(1e-10));
  CHECK(f[1] == doctest::Approx(0.64).epsilon(1e-10));
  CHECK(f[2] == doctest::Approx(0.512).epsilon(1e-10));
}

TEST_CASE("iterated: identity model repeats the last value") {
  SpyRegressor reg;
  std::vector<double> s{1, 2, 3, 4, 5, 6, 7};
  auto m = train_iterated(s, LagSet{1, 2}, reg, 0);
  auto f = forecast_iterated(m, s, 4);
  CHECK(f == std::vector<double>{7, 7, 7, 7});
}

TEST_CASE("iterated: H=1 equals a single one-step prediction") {
  auto s = ar1_series(0.9, 30);
  LinearRegressor reg;
  auto m = train_iterated(s, LagSet{1}, reg, 0);
  auto f1 = forecast_iterated(m, s, 1);
  const auto window = lag_window(s, LagSet{1});
  CHECK(f1.size() == 1);
  CHECK(f1[0] == m.models[0]->predict(window)[0]);
}

TEST_CASE("iterated input bookkeeping: step h consumes h-1 predictions") {
  SpyRegressor reg;
  std::vector<double> s{10, 11, 12, 13, 14, 15, 16, 17};
  auto m = train_iterated(s, LagSet{1, 2, 3, 4}, reg, 0);
  reg.windows.clear();
  (void)forecast_iterated(m, s, 4);
  REQUIRE(reg.windows.size() == 4);
  // d = 4 lags, windows most-recent-first. The identity spy forecasts 17 at
  // every step, so step h sees h-1 fed-back predictions followed by
  // d-(h-1) observed values.
  CHECK(reg.windows[0] == std::vector<double>{17, 16, 15, 14});
  CHECK(reg.windows[1] == std::vector<double>{17, 17, 16, 15});
  CHECK(reg.windows[2] == std::vector<double>{17, 17, 17, 16});
  CHECK(reg.windows[3] == std::vector<double>{17, 17, 17, 17});
}

// ============================================================================
// Direct strategy
// ============================================================================

TEST_CASE("direct: trend oracle predicts x + h per horizon") {
  std::vector<double> s(60);
  for (std::size_t t = 0; t < s.size(); ++t) {
    s[t] = static_cast<double>(t) + 1.0;  // x_t = t+1
  }
  LinearRegressor reg;
  auto m = train_direct(s, {LagSet{1}}, 3, reg, 0);
  REQUIRE(m.models.size() == 3);
  std::vector<double> hist{99.0, 100.0};
  auto f = forecast_direct(m, hist);
  CHECK(f[0] == doctest::Approx(101.0).epsilon(1e-9));
  CHECK(f[1] == doctest::Approx(102.0).epsilon(1e-9));
  CHECK(f[2] == doctest::Approx(103.0).epsilon(1e-9));
}

TEST_CASE("direct: H=24 stores 24 models") {
  std::vector<double> s(120);
  for (std::size_t t = 0; t < s.size(); ++t) {
    s[t] = std::sin(0.3 * static_cast<double>(t));
  }
  LinearRegressor reg;
  auto m = train_direct(s, {LagSet{1, 2}}, 24, reg, 0);
  CHECK(m.models.size() == 24);
  CHECK(m.lags.size() == 24);
}

TEST_CASE("direct: history beyond the max lag is ignored") {
  std::vector<double> s(50);
  for (std::size_t t = 0; t < s.size(); ++t) {
    s[t] = 2.0 + 0.5 * static_cast<double>(t);
  }
  LinearRegressor reg;
  auto m = train_direct(s, {LagSet{1, 2}}, 2, reg, 0);
  std::vector<double> h1{1.0, 2.0, 26.0, 26.5};
  std::vector<double> h2{-50.0, 99.0, 26.0, 26.5};  // same last two values
  CHECK(forecast_direct(m, h1) == forecast_direct(m, h2));
}

TEST_CASE("direct: per-horizon lag sets are honored") {
  std::vector<double> s(80);
  for (std::size_t t = 0; t < s.size(); ++t) {
    s[t] = static_cast<double>(t % 7);
  }
  LinearRegressor reg;
  std::vector<LagSet> lags{LagSet{1}, LagSet{2, 3}};
  auto m = train_direct(s, lags, 2, reg, 0);
  CHECK(m.lags[0].lags() == std::vector<int>{1});
  CHECK(m.lags[1].lags() == std::vector<int>{2, 3});
}

// ============================================================================
// MIMO strategy
// ============================================================================

TEST_CASE("mimo: constant-output model yields a constant vector") {
  std::vector<double> s(40, 3.5);
  LinearRegressor reg;
  auto m = train_mimo(s, LagSet{1}, 4, reg, 0);
  std::vector<double> hist{3.5, 3.5};
  auto f = forecast_mimo(m, hist);
  REQUIRE(f.size() == 4);
  for (double v : f) CHECK(v == doctest::Approx(3.5).epsilon(1e-9));
}

TEST_CASE("mimo equals direct on noiseless linear data") {
  // Both solve the same least-squares problem per output column.
  std::vector<double> s(100);
  s[0] = 0.3;
  s[1] = 0.7;
  for (std::size_t t = 2; t < s.size(); ++t) {
    s[t] = 0.6 * s[t - 1] + 0.3 * s[t - 2] + 0.05;
  }
  LinearRegressor reg;
  const LagSet lags{1, 2};
  auto md = train_direct(s, {lags}, 3, reg, 0);
  auto mm = train_mimo(s, lags, 3, reg, 0);
  auto fd = forecast_direct(md, s);
  auto fm = forecast_mimo(mm, s);
  REQUIRE(fd.size() == fm.size());
  for (std::size_t h = 0; h < fd.size(); ++h) {
    CHECK(fm[h] == doctest::Approx(fd[h]).epsilon(1e-9));
  }
}

TEST_CASE("mimo output length tracks the configured horizon") {
  std::vector<double> s(200);
  for (std::size_t t = 0; t < s.size(); ++t) {
    s[t] = std::sin(0.17 * static_cast<double>(t)) +
           0.01 * static_cast<double>(t);
  }
  LinearRegressor reg;
  for (int h : {4, 8, 12, 16, 20, 24}) {
    auto m = train_mimo(s, LagSet{1, 2, 3}, h, reg, 0);
    CHECK(forecast_mimo(m, s).size() == static_cast<std::size_t>(h));
  }
}

// ============================================================================
// Cross-strategy properties
// ============================================================================

TEST_CASE("all strategies extrapolate a noiseless AR(2) identically") {
  std::vector<double> s(120);
  s[0] = 1.0;
  s[1] = 0.9;
  for (std::size_t t = 2; t < s.size(); ++t) {
    s[t] = 1.2 * s[t - 1] - 0.4 * s[t - 2];
  }
  LinearRegressor reg;
  const LagSet lags{1, 2};
  const int horizon = 5;

  // Analytic extrapolation of the recursion.
  std::vector<double> truth;
  double a = s[s.size() - 2], b = s.back();
  for (int h = 0; h < horizon; ++h) {
    const double next = 1.2 * b - 0.4 * a;
    truth.push_back(next);
    a = b;
    b = next;
  }

  auto mi = train_iterated(s, lags, reg, 0);
  auto md = train_direct(s, {lags}, horizon, reg, 0);
  auto mm = train_mimo(s, lags, horizon, reg, 0);
  auto fi = forecast_iterated(mi, s, horizon);
  auto fd = forecast_direct(md, s);
  auto fm = forecast_mimo(mm, s);
  for (int h = 0; h < horizon; ++h) {
    CHECK(std::abs(fi[static_cast<std::size_t>(h)] -
                   truth[static_cast<std::size_t>(h)]) <= 1e-6);
    CHECK(std::abs(fd[static_cast<std::size_t>(h)] -
                   truth[static_cast<std::size_t>(h)]) <= 1e-6);
    CHECK(std::abs(fm[static_cast<std::size_t>(h)] -
                   truth[static_cast<std::size_t>(h)]) <= 1e-6);
  }
}

TEST_CASE("H=1: the three strategies coincide bit-for-bit") {
  SplitMix64 rng(9);
  std::vector<double> s(150);
  for (auto& x : s) x = rng.next_double(10, 20);
  LinearRegressor reg;
  const LagSet lags{1, 3};
  auto fi = forecast_iterated(train_iterated(s, lags, reg, 7), s, 1);
  auto fd = forecast_direct(train_direct(s, {lags}, 1, reg, 7), s);
  auto fm = forecast_mimo(train_mimo(s, lags, 1, reg, 7), s);
  CHECK(fi[0] == fd[0]);
  CHECK(fd[0] == fm[0]);
}

TEST_CASE("fnn regressor slots into the strategies") {
  SplitMix64 rng(10);
  std::vector<double> s(80);
  for (std::size_t t = 0; t < s.size(); ++t) {
    s[t] = 0.5 + 0.4 * std::sin(0.2 * static_cast<double>(t));
  }
  FnnRegressor::Options opt;
  opt.n_hidden = 4;
  opt.train.max_epochs = 40;
  opt.train.n_restarts = 1;
  FnnRegressor reg(opt);
  auto m = train_mimo(s, LagSet{1, 2}, 3, reg, 5);
  auto f = forecast_mimo(m, s);
  REQUIRE(f.size() == 3);
  for (double v : f) CHECK(std::abs(v - 0.5) <= 0.6);
}

TEST_CASE("lag row count matches the estimation-sample formula") {
  std::vector<double> s(418);
  SplitMix64 rng(11);
  for (auto& x : s) x = rng.next_double();
  auto data = build_lag_matrix(s, LagSet::contiguous(36), 1,
                               TargetMode::Single);
  CHECK(data.rows() == 418 - 36);
}

TEST_CASE("strategy errors") {
  std::vector<double> s(30, 1.0);
  LinearRegressor reg;
  CHECK_THROWS_AS(train_direct(s, {LagSet{1}, LagSet{2}}, 3, reg, 0),
                  DataError);
  auto m = train_mimo(s, LagSet{1}, 2, reg, 0);
  CHECK_THROWS_AS(forecast(m, s, 3), DataError);
  std::vector<double> empty;
  CHECK_THROWS_AS(forecast_mimo(m, empty), DataError);
}
