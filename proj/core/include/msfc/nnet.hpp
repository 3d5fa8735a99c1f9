#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "msfc/series.hpp"

namespace msfc::nnet {

// ============================================================================
// Model
// ============================================================================

struct FnnConfig {
  int n_inputs = 1;
  int n_hidden = 15;
  int n_outputs = 1;
};

/// Single-hidden-layer network: logistic hidden units, identity outputs.
struct FnnModel {
  Eigen::MatrixXd w1;  // n_hidden x n_inputs
  Eigen::VectorXd b1;  // n_hidden
  Eigen::MatrixXd w2;  // n_outputs x n_hidden
  Eigen::VectorXd b2;  // n_outputs

  int n_inputs() const { return static_cast<int>(w1.cols()); }
  int n_hidden() const { return static_cast<int>(w1.rows()); }
  int n_outputs() const { return static_cast<int>(w2.rows()); }
  int n_params() const {
    return n_hidden() * (n_inputs() + 1) + n_outputs() * (n_hidden() + 1);
  }

  /// Flat parameter vector in the order [w1 row-major, b1, w2 row-major, b2].
  Eigen::VectorXd pack() const;
  void unpack(const Eigen::VectorXd& params);

  /// Text round-trip: dimensions header plus row-major weights at 17
  /// significant digits.
  void save(std::ostream& out) const;
  static FnnModel load(std::istream& in);
};

/// Deterministic initialization: weights uniform in
/// [-1/sqrt(fan_in), +1/sqrt(fan_in)], biases zero.
FnnModel init_weights(const FnnConfig& config, std::uint64_t seed);

Eigen::VectorXd forward(const FnnModel& model, const Eigen::VectorXd& x);
std::vector<double> forward(const FnnModel& model,
                            const std::vector<double>& x);

/// Rows of d(prediction)/d(theta), one row per (sample, output), stacked
/// sample-major; errors = targets - predictions stacked the same way.
struct JacobianResult {
  Eigen::MatrixXd jacobian;  // (n_samples*n_outputs) x n_params
  Eigen::VectorXd errors;
  double sse = 0.0;
};

JacobianResult jacobian(const FnnModel& model, const Eigen::MatrixXd& inputs,
                        const Eigen::MatrixXd& targets);

// ============================================================================
// Training
// ============================================================================

struct TrainConfig {
  double mu_init = 1e-3;
  double mu_increase = 10.0;
  double mu_decrease = 0.1;
  int max_epochs = 200;
  double sse_tolerance = 1e-8;
  std::uint64_t seed = 0;
  int n_restarts = 3;
};

struct TrainResult {
  FnnModel model;
  double sse = 0.0;
  int epochs = 0;
  bool underdetermined = false;  // fewer rows than n_params/10
  std::vector<double> accepted_sse;  // strictly decreasing trace
};

/// Levenberg-Marquardt batch training; returns the best of n_restarts by
/// training SSE. Throws DataError with fewer than 2 rows and NumericError if
/// every restart diverges.
TrainResult train_lm(const LagMatrix& data, const FnnConfig& config,
                     const TrainConfig& tc);

// ============================================================================
// Model selection
// ============================================================================

/// Blocked contiguous fold assignment over [0, n_rows): folds are disjoint,
/// cover every row, and differ in size by at most 1.
struct CvPlan {
  int k = 5;
  std::vector<std::pair<std::size_t, std::size_t>> fold_bounds;  // [lo, hi)

  static CvPlan blocked(std::size_t n_rows, int k = 5);
};

/// Returns the grid config minimizing mean validation SSE across folds.
/// Ties break toward fewer hidden units, then lower grid index.
FnnConfig cross_validate(const LagMatrix& data,
                         const std::vector<FnnConfig>& config_grid,
                         const TrainConfig& tc, const CvPlan& plan);

}  // namespace msfc::nnet
