#include "msfc/strategies.hpp"

#include <Eigen/Dense>
#include <algorithm>

#include "msfc/errors.hpp"
#include "msfc/rng.hpp"

namespace msfc::strategies {

// ============================================================================
// Linear regressor
// ============================================================================

namespace {

class TrainedLinear : public TrainedRegressor {
 public:
  TrainedLinear(Eigen::MatrixXd coef, Eigen::VectorXd intercept)
      : coef_(std::move(coef)), intercept_(std::move(intercept)) {}

  std::vector<double> predict(std::span<const double> input) const override {
    if (static_cast<Eigen::Index>(input.size()) != coef_.cols()) {
      throw DataError("linear model input length mismatch");
    }
    const Eigen::Map<const Eigen::VectorXd> x(
        input.data(), static_cast<Eigen::Index>(input.size()));
    Eigen::VectorXd y = coef_ * x + intercept_;
    return std::vector<double>(y.data(), y.data() + y.size());
  }

  int n_outputs() const override {
    return static_cast<int>(intercept_.size());
  }

 private:
  Eigen::MatrixXd coef_;      // n_outputs x n_inputs
  Eigen::VectorXd intercept_;
};

class TrainedFnn : public TrainedRegressor {
 public:
  explicit TrainedFnn(nnet::FnnModel model) : model_(std::move(model)) {}

  std::vector<double> predict(std::span<const double> input) const override {
    return nnet::forward(model_,
                         std::vector<double>(input.begin(), input.end()));
  }

  int n_outputs() const override { return model_.n_outputs(); }

 private:
  nnet::FnnModel model_;
};

}  // namespace

std::unique_ptr<TrainedRegressor> LinearRegressor::train(
    const LagMatrix& data, std::uint64_t /*seed*/) const {
  const Eigen::Index n = data.inputs.rows();
  const Eigen::Index d = data.inputs.cols();
  if (n < d + 1) {
    throw DataError("linear fit needs at least n_inputs + 1 rows");
  }
  Eigen::MatrixXd design(n, d + 1);
  design.leftCols(d) = data.inputs;
  design.col(d).setOnes();
  const Eigen::MatrixXd solution =
      design.colPivHouseholderQr().solve(data.targets);
  // solution is (d+1) x n_outputs; split into coefficients and intercept.
  Eigen::MatrixXd coef = solution.topRows(d).transpose();
  Eigen::VectorXd intercept = solution.row(d).transpose();
  return std::make_unique<TrainedLinear>(std::move(coef),
                                         std::move(intercept));
}

std::unique_ptr<TrainedRegressor> FnnRegressor::train(
    const LagMatrix& data, std::uint64_t seed) const {
  nnet::FnnConfig cfg;
  cfg.n_inputs = static_cast<int>(data.inputs.cols());
  cfg.n_outputs = static_cast<int>(data.targets.cols());
  cfg.n_hidden = options_.n_hidden;

  nnet::TrainConfig tc = options_.train;
  tc.seed = seed;

  if (options_.cross_validate) {
    std::vector<nnet::FnnConfig> grid;
    for (int h : options_.hidden_grid) {
      nnet::FnnConfig c = cfg;
      c.n_hidden = h;
      grid.push_back(c);
    }
    const auto plan = nnet::CvPlan::blocked(
        static_cast<std::size_t>(data.inputs.rows()), 5);
    cfg = nnet::cross_validate(data, grid, tc, plan);
  }
  return std::make_unique<TrainedFnn>(nnet::train_lm(data, cfg, tc).model);
}

// ============================================================================
// Strategy training
// ============================================================================

std::string to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::Iterated: return "iterated";
    case StrategyKind::Direct: return "direct";
    case StrategyKind::Mimo: return "mimo";
  }
  return "?";
}

StrategyKind strategy_from_string(const std::string& name) {
  if (name == "iterated") return StrategyKind::Iterated;
  if (name == "direct") return StrategyKind::Direct;
  if (name == "mimo") return StrategyKind::Mimo;
  throw DataError("unknown strategy: '" + name + "'");
}

int StrategyModel::max_lag() const {
  int m = 0;
  for (const auto& l : lags) m = std::max(m, l.max_lag());
  return m;
}

StrategyModel train_iterated(const std::vector<double>& series,
                             const LagSet& lags, const Regressor& regressor,
                             std::uint64_t seed) {
  StrategyModel m;
  m.kind = StrategyKind::Iterated;
  m.horizon = 1;
  m.lags.push_back(lags);
  const auto data = build_lag_matrix(series, lags, 1, TargetMode::Single);
  m.models.push_back(regressor.train(data, seed));
  return m;
}

StrategyModel train_direct(const std::vector<double>& series,
                           const std::vector<LagSet>& lags_per_h, int horizon,
                           const Regressor& regressor, std::uint64_t seed) {
  if (horizon < 1) throw DataError("horizon must be >= 1");
  if (lags_per_h.size() != 1 &&
      lags_per_h.size() != static_cast<std::size_t>(horizon)) {
    throw DataError("direct strategy needs 1 shared or H lag sets");
  }
  StrategyModel m;
  m.kind = StrategyKind::Direct;
  m.horizon = horizon;
  for (int h = 1; h <= horizon; ++h) {
    const LagSet& lags = lags_per_h.size() == 1
                             ? lags_per_h[0]
                             : lags_per_h[static_cast<std::size_t>(h - 1)];
    m.lags.push_back(lags);
    const auto data = build_lag_matrix(series, lags, h, TargetMode::DirectH);
    m.models.push_back(regressor.train(
        data, derive_seed(seed, static_cast<std::uint64_t>(h) ^
                                    hash_label("direct-h"))));
  }
  return m;
}

StrategyModel train_mimo(const std::vector<double>& series, const LagSet& lags,
                         int horizon, const Regressor& regressor,
                         std::uint64_t seed) {
  if (horizon < 1) throw DataError("horizon must be >= 1");
  if (!regressor.supports_multi_output()) {
    throw DataError("regressor lacks multi-output support");
  }
  StrategyModel m;
  m.kind = StrategyKind::Mimo;
  m.horizon = horizon;
  m.lags.push_back(lags);
  const auto data = build_lag_matrix(series, lags, horizon, TargetMode::Multi);
  m.models.push_back(regressor.train(data, seed));
  return m;
}

// ============================================================================
// Forecasting
// ============================================================================

std::vector<double> forecast_iterated(const StrategyModel& model,
                                      std::span<const double> history,
                                      int horizon) {
  if (model.kind != StrategyKind::Iterated) {
    throw DataError("model is not an iterated strategy");
  }
  const LagSet& lags = model.lags[0];
  const auto need = static_cast<std::size_t>(lags.max_lag());
  if (history.size() < need) {
    throw DataError("history shorter than the maximum lag");
  }
  // Working tail: observed values followed by predictions made so far.
  std::vector<double> tail(history.end() - static_cast<std::ptrdiff_t>(need),
                           history.end());
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(horizon));
  for (int h = 0; h < horizon; ++h) {
    const auto window = lag_window(tail, lags);
    const auto y = model.models[0]->predict(window);
    out.push_back(y.at(0));
    tail.push_back(y.at(0));
  }
  return out;
}

std::vector<double> forecast_direct(const StrategyModel& model,
                                    std::span<const double> history) {
  if (model.kind != StrategyKind::Direct) {
    throw DataError("model is not a direct strategy");
  }
  std::vector<double> out;
  out.reserve(model.models.size());
  for (std::size_t h = 0; h < model.models.size(); ++h) {
    const auto window = lag_window(history, model.lags[h]);
    out.push_back(model.models[h]->predict(window).at(0));
  }
  return out;
}

std::vector<double> forecast_mimo(const StrategyModel& model,
                                  std::span<const double> history) {
  if (model.kind != StrategyKind::Mimo) {
    throw DataError("model is not a mimo strategy");
  }
  const auto window = lag_window(history, model.lags[0]);
  auto out = model.models[0]->predict(window);
  if (out.size() != static_cast<std::size_t>(model.horizon)) {
    throw DataError("mimo model output length != horizon");
  }
  return out;
}

std::vector<double> forecast(const StrategyModel& model,
                             std::span<const double> history, int horizon) {
  switch (model.kind) {
    case StrategyKind::Iterated:
      return forecast_iterated(model, history, horizon);
    case StrategyKind::Direct:
      if (horizon != model.horizon) {
        throw DataError("direct strategy trained for a different horizon");
      }
      return forecast_direct(model, history);
    case StrategyKind::Mimo:
      if (horizon != model.horizon) {
        throw DataError("mimo strategy trained for a different horizon");
      }
      return forecast_mimo(model, history);
  }
  throw DataError("unreachable strategy kind");
}

}  // namespace msfc::strategies
