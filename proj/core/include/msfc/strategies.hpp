#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "msfc/nnet.hpp"
#include "msfc/series.hpp"

namespace msfc::strategies {

// ============================================================================
// Regressor interface
// ============================================================================

/// A trained regressor: deterministic vector prediction from a lag window.
class TrainedRegressor {
 public:
  virtual ~TrainedRegressor() = default;
  virtual std::vector<double> predict(std::span<const double> input) const = 0;
  virtual int n_outputs() const = 0;
};

/// Trainable regressor family. Implementations must be deterministic in
/// (data, seed).
class Regressor {
 public:
  virtual ~Regressor() = default;
  virtual std::unique_ptr<TrainedRegressor> train(const LagMatrix& data,
                                                  std::uint64_t seed) const = 0;
  virtual bool supports_multi_output() const { return true; }
};

/// Exact multi-output linear least squares (bias included). Deterministic,
/// noise-free targets are fit to machine precision.
class LinearRegressor : public Regressor {
 public:
  std::unique_ptr<TrainedRegressor> train(const LagMatrix& data,
                                          std::uint64_t seed) const override;
};

/// Feed-forward network trained by Levenberg-Marquardt, with an optional
/// fivefold cross-validation over hidden-layer sizes.
class FnnRegressor : public Regressor {
 public:
  struct Options {
    int n_hidden = 15;
    nnet::TrainConfig train;
    bool cross_validate = false;
    std::vector<int> hidden_grid = {5, 10, 15, 20};
  };

  FnnRegressor() = default;
  explicit FnnRegressor(Options options) : options_(std::move(options)) {}

  std::unique_ptr<TrainedRegressor> train(const LagMatrix& data,
                                          std::uint64_t seed) const override;

 private:
  Options options_;
};

// ============================================================================
// Strategies
// ============================================================================

enum class StrategyKind { Iterated, Direct, Mimo };

std::string to_string(StrategyKind kind);
StrategyKind strategy_from_string(const std::string& name);

/// A trained multi-step forecaster: one model (Iterated, Mimo) or H models
/// indexed by lead time (Direct), each with its own lag set.
struct StrategyModel {
  StrategyKind kind = StrategyKind::Iterated;
  int horizon = 1;
  std::vector<LagSet> lags;  // size 1, or H for Direct
  std::vector<std::unique_ptr<TrainedRegressor>> models;  // aligned with lags

  int max_lag() const;
};

/// One-step model; forecasts any horizon by feeding predictions back.
StrategyModel train_iterated(const std::vector<double>& series,
                             const LagSet& lags, const Regressor& regressor,
                             std::uint64_t seed);

/// H independent models, model h targeting h steps ahead. `lags_per_h` holds
/// either one shared lag set or exactly H of them.
StrategyModel train_direct(const std::vector<double>& series,
                           const std::vector<LagSet>& lags_per_h, int horizon,
                           const Regressor& regressor, std::uint64_t seed);

/// Single model with H joint outputs.
StrategyModel train_mimo(const std::vector<double>& series, const LagSet& lags,
                         int horizon, const Regressor& regressor,
                         std::uint64_t seed);

std::vector<double> forecast_iterated(const StrategyModel& model,
                                      std::span<const double> history,
                                      int horizon);
std::vector<double> forecast_direct(const StrategyModel& model,
                                    std::span<const double> history);
std::vector<double> forecast_mimo(const StrategyModel& model,
                                  std::span<const double> history);

/// Dispatch on model.kind; horizon must match the trained one for Direct and
/// Mimo.
std::vector<double> forecast(const StrategyModel& model,
                             std::span<const double> history, int horizon);

}  // namespace msfc::strategies
