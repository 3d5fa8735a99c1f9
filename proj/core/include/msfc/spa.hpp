#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "msfc/metrics.hpp"

namespace msfc::spa {

/// Loss functions under which forecast models are compared. Directional
/// accuracy enters as a loss through 1 - d_t, so smaller is better for all
/// three kinds.
enum class LossKind { Smape, Mase, Ds };

std::string to_string(LossKind kind);

/// Per-observation losses of one model, aligned across all compared models.
struct LossSeries {
  std::string model_id;
  std::vector<double> losses;
};

struct SpaConfig {
  int n_bootstrap = 10000;
  double mean_block_length = 4.0;  // expected block size q, in observations
  std::uint64_t seed = 0;
};

/// Result of the test of superior predictive ability for one base model.
/// p_consistent is the primary p-value; the lower/upper variants bracket it
/// by construction.
struct SpaResult {
  double statistic = 0.0;
  double p_value = 1.0;  // consistent recentring
  double p_lower = 1.0;
  double p_upper = 1.0;
  std::vector<double> per_model_means;  // mean loss differentials f̄_k
};

/// Decomposes a frame into per-observation losses so their mean recovers the
/// aggregate metric (1 - d_t for directional accuracy).
LossSeries per_observation_losses(const metrics::EvaluationFrame& frame,
                                  LossKind kind,
                                  const std::string& model_id = "");

/// Stationary-bootstrap index sequence of length n: circular blocks with
/// geometrically distributed lengths of mean q, started at uniform random
/// positions. Deterministic in the seed. When `new_block` is given it
/// receives one flag per position marking fresh block starts (position 0 is
/// always a start).
std::vector<std::size_t> stationary_bootstrap_indices(
    std::size_t n, double q, std::uint64_t seed,
    std::vector<bool>* new_block = nullptr);

/// Hansen's test of superior predictive ability: is any competitor better
/// than the base model under the given loss series?
SpaResult spa_test(const LossSeries& base,
                   const std::vector<LossSeries>& competitors,
                   const SpaConfig& config);

/// One row per base model: each model in turn is tested against all others.
struct SpaMatrix {
  std::vector<std::string> model_ids;
  std::vector<SpaResult> results;  // aligned with model_ids
};

SpaMatrix spa_matrix(const std::vector<LossSeries>& all_models,
                     const SpaConfig& config);

}  // namespace msfc::spa
