#include "msfc/spa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "msfc/errors.hpp"
#include "msfc/rng.hpp"

namespace msfc::spa {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// sqrt(N) * x / omega with the degenerate-omega convention: a zero-variance
// differential counts as +/- infinity by its sign, 0/0 as 0.
double studentize(double x, double omega, double sqrt_n) {
  if (omega > 0.0) return sqrt_n * x / omega;
  if (x > 0.0) return kInf;
  if (x < 0.0) return -kInf;
  return 0.0;
}

}  // namespace

std::string to_string(LossKind kind) {
  switch (kind) {
    case LossKind::Smape: return "smape";
    case LossKind::Mase: return "mase";
    case LossKind::Ds: return "ds";
  }
  return "?";
}

LossSeries per_observation_losses(const metrics::EvaluationFrame& frame,
                                  LossKind kind,
                                  const std::string& model_id) {
  frame.validate();
  LossSeries out;
  out.model_id = model_id;
  const std::size_t m = frame.actual.size();
  out.losses.resize(m);
  switch (kind) {
    case LossKind::Smape:
      for (std::size_t t = 0; t < m; ++t) {
        const double den = frame.actual[t] + frame.predicted[t];
        if (den == 0.0) throw NumericError("smape loss: zero denominator");
        out.losses[t] =
            std::abs((frame.actual[t] - frame.predicted[t]) / den) * 100.0;
      }
      break;
    case LossKind::Mase: {
      const double scale = metrics::naive_scale(frame.estimation);
      for (std::size_t t = 0; t < m; ++t) {
        out.losses[t] = std::abs(frame.actual[t] - frame.predicted[t]) / scale;
      }
      break;
    }
    case LossKind::Ds:
      for (std::size_t t = 0; t < m; ++t) {
        const double realized = frame.actual[t] - frame.prev_actual[t];
        const double predicted = frame.predicted[t] - frame.prev_actual[t];
        out.losses[t] = (realized * predicted >= 0.0) ? 0.0 : 1.0;
      }
      break;
  }
  return out;
}

std::vector<std::size_t> stationary_bootstrap_indices(
    std::size_t n, double q, std::uint64_t seed,
    std::vector<bool>* new_block) {
  if (n < 1) throw DataError("bootstrap length must be >= 1");
  if (q < 1.0 || q > static_cast<double>(n)) {
    throw DataError("mean block length must lie in [1, n]");
  }
  SplitMix64 rng(seed);
  const double p_new_block = 1.0 / q;
  std::vector<std::size_t> idx(n);
  if (new_block) new_block->assign(n, false);
  idx[0] = static_cast<std::size_t>(rng.next_index(n));
  if (new_block) (*new_block)[0] = true;
  for (std::size_t t = 1; t < n; ++t) {
    if (rng.next_double() < p_new_block) {
      idx[t] = static_cast<std::size_t>(rng.next_index(n));
      if (new_block) (*new_block)[t] = true;
    } else {
      idx[t] = (idx[t - 1] + 1) % n;  // circular continuation
    }
  }
  return idx;
}

SpaResult spa_test(const LossSeries& base,
                   const std::vector<LossSeries>& competitors,
                   const SpaConfig& config) {
  const std::size_t n = base.losses.size();
  const std::size_t l = competitors.size();
  if (l < 1) throw DataError("spa test needs at least one competitor");
  if (n < 2) throw DataError("spa test needs at least 2 observations");
  if (config.n_bootstrap < 100) {
    throw DataError("spa test needs at least 100 bootstrap replicates");
  }
  for (const auto& c : competitors) {
    if (c.losses.size() != n) {
      throw DataError("loss series are not aligned");
    }
  }

  // Loss differentials f[k][t] = L_base(t) - L_k(t) and their means.
  std::vector<std::vector<double>> f(l, std::vector<double>(n));
  std::vector<double> f_bar(l, 0.0);
  for (std::size_t k = 0; k < l; ++k) {
    for (std::size_t t = 0; t < n; ++t) {
      f[k][t] = base.losses[t] - competitors[k].losses[t];
      f_bar[k] += f[k][t];
    }
    f_bar[k] /= static_cast<double>(n);
  }

  SpaResult result;
  result.per_model_means = f_bar;

  const double sqrt_n = std::sqrt(static_cast<double>(n));
  const std::size_t b_count = static_cast<std::size_t>(config.n_bootstrap);

  // Bootstrap means f̄*_{b,k}; replicate streams are derived from
  // (seed, replicate) so parallel evaluation would equal serial.
  std::vector<std::vector<double>> boot_means(
      b_count, std::vector<double>(l, 0.0));
  for (std::size_t b = 0; b < b_count; ++b) {
    const auto idx = stationary_bootstrap_indices(
        n, config.mean_block_length,
        derive_seed(config.seed, static_cast<std::uint64_t>(b)));
    auto& row = boot_means[b];
    for (std::size_t k = 0; k < l; ++k) {
      double sum = 0.0;
      for (std::size_t t = 0; t < n; ++t) sum += f[k][idx[t]];
      row[k] = sum / static_cast<double>(n);
    }
  }

  // omega_k: bootstrap standard deviation of sqrt(N) f̄*_k.
  std::vector<double> omega(l, 0.0);
  for (std::size_t k = 0; k < l; ++k) {
    double mean = 0.0;
    for (std::size_t b = 0; b < b_count; ++b) mean += boot_means[b][k];
    mean /= static_cast<double>(b_count);
    double var = 0.0;
    for (std::size_t b = 0; b < b_count; ++b) {
      const double d = boot_means[b][k] - mean;
      var += d * d;
    }
    var /= static_cast<double>(b_count);
    omega[k] = sqrt_n * std::sqrt(var);
  }

  // Active models: a constant-zero differential carries no evidence.
  std::vector<bool> active(l);
  bool any_active = false;
  for (std::size_t k = 0; k < l; ++k) {
    active[k] = !(omega[k] == 0.0 && f_bar[k] == 0.0);
    any_active = any_active || active[k];
  }
  if (!any_active) {
    result.statistic = 0.0;
    result.p_value = result.p_lower = result.p_upper = 1.0;
    return result;
  }

  double t_stat = 0.0;
  for (std::size_t k = 0; k < l; ++k) {
    if (!active[k]) continue;
    t_stat = std::max(t_stat, studentize(f_bar[k], omega[k], sqrt_n));
  }
  result.statistic = t_stat;

  // Recentring choices: the consistent variant thresholds at
  // -omega*sqrt(2 log log N / N); lower and upper bracket it.
  const double loglog = std::log(std::log(static_cast<double>(n)));
  const double threshold_scale =
      std::sqrt(std::max(0.0, 2.0 * loglog) / static_cast<double>(n));
  std::vector<double> g_lower(l), g_consistent(l), g_upper(l);
  for (std::size_t k = 0; k < l; ++k) {
    g_upper[k] = f_bar[k];
    g_lower[k] = std::max(0.0, f_bar[k]);
    g_consistent[k] =
        (f_bar[k] >= -omega[k] * threshold_scale) ? f_bar[k] : 0.0;
  }

  const auto p_value_for = [&](const std::vector<double>& g) {
    std::size_t count = 0;
    for (std::size_t b = 0; b < b_count; ++b) {
      double t_boot = 0.0;
      for (std::size_t k = 0; k < l; ++k) {
        if (!active[k]) continue;
        t_boot = std::max(
            t_boot, studentize(boot_means[b][k] - g[k], omega[k], sqrt_n));
      }
      if (t_boot >= t_stat) ++count;
    }
    return static_cast<double>(count) / static_cast<double>(b_count);
  };

  result.p_lower = p_value_for(g_lower);
  result.p_value = p_value_for(g_consistent);
  result.p_upper = p_value_for(g_upper);
  return result;
}

SpaMatrix spa_matrix(const std::vector<LossSeries>& all_models,
                     const SpaConfig& config) {
  if (all_models.size() < 2) {
    throw DataError("spa matrix needs at least 2 models");
  }
  SpaMatrix m;
  for (std::size_t i = 0; i < all_models.size(); ++i) {
    m.model_ids.push_back(all_models[i].model_id);
    std::vector<LossSeries> competitors;
    competitors.reserve(all_models.size() - 1);
    for (std::size_t j = 0; j < all_models.size(); ++j) {
      if (j != i) competitors.push_back(all_models[j]);
    }
    m.results.push_back(spa_test(all_models[i], competitors, config));
  }
  return m;
}

}  // namespace msfc::spa
