#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "msfc/series.hpp"

namespace msfc::feature_select {

/// Filter criterion for lag selection. Partial mutual information applies to
/// single-output targets; the Delta test extends to multi-output ones.
enum class Criterion { Pmi, DeltaTest };

/// Partial mutual information (nats) between a candidate column and the
/// target, both residualized on the already-selected columns by Gaussian
/// kernel regression; mutual information is estimated with Gaussian-kernel
/// densities at the Gaussian-reference bandwidth 1.06 sigma n^(-1/5) per
/// dimension. An empty selected set reduces to plain mutual information.
/// Throws NumericError on zero-variance columns, DataError under 30 samples.
double pmi_score(const Eigen::VectorXd& candidate,
                 const Eigen::MatrixXd& selected,
                 const Eigen::VectorXd& target);

/// Delta test: delta = (1/2n) sum_i ||y_nn(i) - y_i||^2 with nearest
/// neighbours in min-max-scaled input space (ties to the lowest index,
/// averaged over `neighbors` nearest when > 1). The squared Euclidean norm
/// over target columns is the multi-output extension.
double delta_test(const Eigen::MatrixXd& inputs,
                  const Eigen::MatrixXd& targets, int neighbors = 1);

struct SearchConfig {
  Criterion criterion = Criterion::Pmi;
  int d_max = LagSet::kMaxEmbeddingOrder;
  std::uint64_t seed = 0;
  int pmi_surrogates = 100;       // target shuffles behind the stop rule
  double pmi_percentile = 0.95;   // forward stop: best PMI must exceed this
  int delta_neighbors = 1;
};

struct SelectionResult {
  LagSet lags;
  bool fallback = false;  // nothing selectable; {1} substituted
  int passes = 0;
};

/// Forward-backward search over the columns of a lag-matrix pool built with
/// lags {1..d_max}: forward adds the best-scoring lag (PMI above the
/// shuffled-surrogate percentile, or a strict Delta decrease), backward drops
/// lags that stopped carrying information. Pass count capped at 4*d_max.
SelectionResult forward_backward_search(const LagMatrix& pool,
                                        const SearchConfig& config);

}  // namespace msfc::feature_select
