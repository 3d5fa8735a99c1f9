#include "msfc/feature_select.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <vector>

#include "msfc/errors.hpp"
#include "msfc/rng.hpp"

namespace msfc::feature_select {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sample_std(const Eigen::VectorXd& x) {
  const double mean = x.mean();
  const double ss = (x.array() - mean).square().sum();
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

double reference_bandwidth(const Eigen::VectorXd& x) {
  const double sigma = sample_std(x);
  if (sigma <= 0.0) {
    throw NumericError("degenerate input: zero-variance column");
  }
  return 1.06 * sigma *
         std::pow(static_cast<double>(x.size()), -0.2);
}

/// Unnormalized Gaussian kernel matrix exp(-(xi-xj)^2 / (2 h^2)). The
/// normalization constants cancel in every ratio this module forms.
Eigen::MatrixXd kernel_matrix(const Eigen::VectorXd& x, double h) {
  const auto n = x.size();
  Eigen::MatrixXd g(n, n);
  const double inv = 1.0 / (2.0 * h * h);
  for (Eigen::Index i = 0; i < n; ++i) {
    g(i, i) = 1.0;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double d = x(i) - x(j);
      const double k = std::exp(-d * d * inv);
      g(i, j) = k;
      g(j, i) = k;
    }
  }
  return g;
}

/// Row-normalized Nadaraya-Watson weights over the selected columns with a
/// product Gaussian kernel, one reference bandwidth per column.
Eigen::MatrixXd regression_weights(const Eigen::MatrixXd& selected) {
  const auto n = selected.rows();
  Eigen::MatrixXd w = Eigen::MatrixXd::Ones(n, n);
  for (Eigen::Index c = 0; c < selected.cols(); ++c) {
    const Eigen::VectorXd col = selected.col(c);
    w.array() *= kernel_matrix(col, reference_bandwidth(col)).array();
  }
  const Eigen::VectorXd row_sums = w.rowwise().sum();
  return row_sums.cwiseInverse().asDiagonal() * w;
}

/// MI (nats) from precomputed kernel matrices of the two 1-D samples; the
/// kernel normalization constants cancel between the joint and the marginals.
double mi_from_kernels(const Eigen::MatrixXd& gu, const Eigen::MatrixXd& gv) {
  const auto n = gu.rows();
  const Eigen::VectorXd fu = gu.rowwise().sum();
  const Eigen::VectorXd fv = gv.rowwise().sum();
  const Eigen::VectorXd fuv = (gu.array() * gv.array()).rowwise().sum();
  double mi = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    mi += std::log(static_cast<double>(n) * fuv(i) / (fu(i) * fv(i)));
  }
  return mi / static_cast<double>(n);
}

void check_samples(Eigen::Index n) {
  if (n < 30) {
    throw DataError("pmi needs at least 30 samples, got " +
                    std::to_string(n));
  }
}

struct PmiParts {
  Eigen::VectorXd u;  // candidate residual
  Eigen::VectorXd v;  // target residual
};

PmiParts residualize(const Eigen::VectorXd& candidate,
                     const Eigen::MatrixXd& selected,
                     const Eigen::VectorXd& target) {
  PmiParts p;
  if (selected.cols() == 0) {
    p.u = candidate;
    p.v = target;
  } else {
    const Eigen::MatrixXd w = regression_weights(selected);
    p.u = candidate - w * candidate;
    p.v = target - w * target;
  }
  return p;
}

double mi_of(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  const Eigen::MatrixXd gu = kernel_matrix(u, reference_bandwidth(u));
  const Eigen::MatrixXd gv = kernel_matrix(v, reference_bandwidth(v));
  return mi_from_kernels(gu, gv);
}

}  // namespace

double pmi_score(const Eigen::VectorXd& candidate,
                 const Eigen::MatrixXd& selected,
                 const Eigen::VectorXd& target) {
  check_samples(candidate.size());
  if (target.size() != candidate.size() ||
      (selected.cols() > 0 && selected.rows() != candidate.size())) {
    throw DataError("pmi columns are not aligned");
  }
  const PmiParts parts = residualize(candidate, selected, target);
  return mi_of(parts.u, parts.v);
}

double delta_test(const Eigen::MatrixXd& inputs,
                  const Eigen::MatrixXd& targets, int neighbors) {
  const auto n = inputs.rows();
  if (n < 2) throw DataError("delta test needs at least 2 samples");
  if (inputs.cols() < 1) throw DataError("delta test needs an input column");
  if (targets.rows() != n) throw DataError("delta test misaligned targets");
  if (neighbors < 1 || neighbors >= n) {
    throw DataError("neighbor count out of range");
  }

  // Min-max scale inputs; constant columns carry no distance.
  Eigen::MatrixXd x = inputs;
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    const double lo = x.col(c).minCoeff();
    const double hi = x.col(c).maxCoeff();
    if (hi > lo) {
      x.col(c) = (x.col(c).array() - lo) / (hi - lo);
    } else {
      x.col(c).setZero();
    }
  }

  double acc = 0.0;
  std::vector<std::pair<double, Eigen::Index>> dist(
      static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      dist[static_cast<std::size_t>(j)] = {
          (j == i) ? kInf : (x.row(i) - x.row(j)).squaredNorm(), j};
    }
    // Ties resolve to the lowest index: the pair orders by (distance, index).
    std::partial_sort(dist.begin(), dist.begin() + neighbors, dist.end());
    for (int k = 0; k < neighbors; ++k) {
      const Eigen::Index nn = dist[static_cast<std::size_t>(k)].second;
      acc += (targets.row(i) - targets.row(nn)).squaredNorm() /
             static_cast<double>(neighbors);
    }
  }
  return acc / (2.0 * static_cast<double>(n));
}

// ============================================================================
// Forward-backward search
// ============================================================================

namespace {

Eigen::MatrixXd columns_of(const Eigen::MatrixXd& pool,
                           const std::vector<int>& cols) {
  Eigen::MatrixXd out(pool.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) {
    out.col(static_cast<Eigen::Index>(k)) = pool.col(cols[k]);
  }
  return out;
}

double percentile(std::vector<double> values, double p) {
  std::sort(values.begin(), values.end());
  const auto rank = static_cast<std::size_t>(
      std::ceil(p * static_cast<double>(values.size())));
  return values[std::min(values.size() - 1, std::max<std::size_t>(rank, 1) - 1)];
}

// One PMI evaluation pass: residuals against the current selected set are
// formed once, kernel matrices are cached so the shuffled-surrogate
// threshold reuses the candidate's side.
class PmiPass {
 public:
  PmiPass(const Eigen::MatrixXd& pool, const std::vector<int>& selected,
          const Eigen::VectorXd& target)
      : pool_(pool), target_(target) {
    if (selected.empty()) {
      has_regression_ = false;
    } else {
      has_regression_ = true;
      weights_ = regression_weights(columns_of(pool, selected));
    }
    v_ = residual(target_);
    gv_ = kernel_matrix(v_, reference_bandwidth(v_));
  }

  Eigen::VectorXd residual(const Eigen::VectorXd& col) const {
    return has_regression_ ? (col - weights_ * col).eval() : col;
  }

  double score(int pool_col) const {
    const Eigen::VectorXd u = residual(pool_.col(pool_col));
    const Eigen::MatrixXd gu = kernel_matrix(u, reference_bandwidth(u));
    return mi_from_kernels(gu, gv_);
  }

  /// 95th-percentile PMI of the candidate against shuffled targets.
  double surrogate_threshold(int pool_col, int n_surrogates, double pct,
                             SplitMix64& rng) const {
    const Eigen::VectorXd u = residual(pool_.col(pool_col));
    const Eigen::MatrixXd gu = kernel_matrix(u, reference_bandwidth(u));
    std::vector<double> scores;
    scores.reserve(static_cast<std::size_t>(n_surrogates));
    Eigen::VectorXd shuffled = target_;
    for (int s = 0; s < n_surrogates; ++s) {
      for (Eigen::Index i = shuffled.size() - 1; i > 0; --i) {
        const auto j = static_cast<Eigen::Index>(
            rng.next_index(static_cast<std::uint64_t>(i + 1)));
        std::swap(shuffled(i), shuffled(j));
      }
      const Eigen::VectorXd vs = residual(shuffled);
      const Eigen::MatrixXd gvs = kernel_matrix(vs, reference_bandwidth(vs));
      scores.push_back(mi_from_kernels(gu, gvs));
    }
    return percentile(std::move(scores), pct);
  }

 private:
  const Eigen::MatrixXd& pool_;
  Eigen::VectorXd target_;
  bool has_regression_ = false;
  Eigen::MatrixXd weights_;
  Eigen::VectorXd v_;
  Eigen::MatrixXd gv_;
};

}  // namespace

SelectionResult forward_backward_search(const LagMatrix& pool,
                                        const SearchConfig& config) {
  const auto n_cols = static_cast<int>(pool.inputs.cols());
  if (n_cols < 1 || n_cols > config.d_max) {
    throw DataError("pool must hold one column per lag in 1..d_max");
  }
  if (config.criterion == Criterion::Pmi && pool.targets.cols() != 1) {
    throw DataError("pmi criterion requires a single-output target");
  }

  SplitMix64 rng(derive_seed(config.seed, hash_label("fbsearch")));
  std::vector<int> selected;  // pool column indices, sorted
  const int max_passes = 4 * config.d_max;
  int pass_count = 0;
  bool changed = true;

  const auto delta_of = [&](const std::vector<int>& cols) {
    return delta_test(columns_of(pool.inputs, cols), pool.targets,
                      config.delta_neighbors);
  };

  while (changed) {
    changed = false;

    // ---- forward: add the best candidate if it clears the bar
    if (static_cast<int>(selected.size()) < n_cols) {
      if (config.criterion == Criterion::Pmi) {
        PmiPass pass(pool.inputs, selected, pool.targets.col(0));
        int best_col = -1;
        double best_score = -kInf;
        for (int c = 0; c < n_cols; ++c) {
          if (std::binary_search(selected.begin(), selected.end(), c)) {
            continue;
          }
          const double s = pass.score(c);
          if (s > best_score) {
            best_score = s;
            best_col = c;
          }
        }
        if (best_col >= 0) {
          const double bar = pass.surrogate_threshold(
              best_col, config.pmi_surrogates, config.pmi_percentile, rng);
          if (best_score >= bar) {
            selected.insert(std::upper_bound(selected.begin(), selected.end(),
                                             best_col),
                            best_col);
            changed = true;
          }
        }
      } else {
        const double base =
            selected.empty() ? kInf : delta_of(selected);
        int best_col = -1;
        double best_delta = base;
        for (int c = 0; c < n_cols; ++c) {
          if (std::binary_search(selected.begin(), selected.end(), c)) {
            continue;
          }
          std::vector<int> trial = selected;
          trial.insert(std::upper_bound(trial.begin(), trial.end(), c), c);
          const double d = delta_of(trial);
          if (d < best_delta) {
            best_delta = d;
            best_col = c;
          }
        }
        if (best_col >= 0) {
          selected.insert(
              std::upper_bound(selected.begin(), selected.end(), best_col),
              best_col);
          changed = true;
        }
      }
    }

    // ---- backward: drop the weakest lag that stopped helping
    if (selected.size() >= 2) {
      if (config.criterion == Criterion::Pmi) {
        int worst_col = -1;
        double worst_margin = 0.0;
        for (int col : selected) {
          std::vector<int> rest;
          for (int c : selected) {
            if (c != col) rest.push_back(c);
          }
          PmiPass pass(pool.inputs, rest, pool.targets.col(0));
          const double s = pass.score(col);
          const double bar = pass.surrogate_threshold(
              col, config.pmi_surrogates, config.pmi_percentile, rng);
          const double margin = s - bar;
          if (margin < worst_margin) {
            worst_margin = margin;
            worst_col = col;
          }
        }
        if (worst_col >= 0) {
          std::erase(selected, worst_col);
          changed = true;
        }
      } else {
        const double base = delta_of(selected);
        int drop_col = -1;
        double best_delta = base;
        for (int col : selected) {
          std::vector<int> rest;
          for (int c : selected) {
            if (c != col) rest.push_back(c);
          }
          const double d = delta_of(rest);
          if (d < best_delta) {
            best_delta = d;
            drop_col = col;
          }
        }
        if (drop_col >= 0) {
          std::erase(selected, drop_col);
          changed = true;
        }
      }
    }

    if (++pass_count >= max_passes) break;
  }

  SelectionResult result;
  result.passes = pass_count;
  if (selected.empty()) {
    result.fallback = true;
    result.lags = LagSet{1};
  } else {
    std::vector<int> lags;
    for (int c : selected) lags.push_back(c + 1);  // column c holds lag c+1
    result.lags = LagSet(lags);
  }
  return result;
}

}  // namespace msfc::feature_select
