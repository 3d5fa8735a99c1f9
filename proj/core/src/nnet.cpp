#include "msfc/nnet.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "msfc/errors.hpp"
#include "msfc/rng.hpp"

namespace msfc::nnet {

namespace {

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

void check_dims(const FnnConfig& c) {
  if (c.n_inputs < 1 || c.n_hidden < 1 || c.n_outputs < 1) {
    throw DataError("network dimensions must all be >= 1");
  }
}

}  // namespace

// ============================================================================
// Model
// ============================================================================

Eigen::VectorXd FnnModel::pack() const {
  Eigen::VectorXd p(n_params());
  Eigen::Index at = 0;
  for (Eigen::Index i = 0; i < w1.rows(); ++i)
    for (Eigen::Index j = 0; j < w1.cols(); ++j) p(at++) = w1(i, j);
  for (Eigen::Index i = 0; i < b1.size(); ++i) p(at++) = b1(i);
  for (Eigen::Index i = 0; i < w2.rows(); ++i)
    for (Eigen::Index j = 0; j < w2.cols(); ++j) p(at++) = w2(i, j);
  for (Eigen::Index i = 0; i < b2.size(); ++i) p(at++) = b2(i);
  return p;
}

void FnnModel::unpack(const Eigen::VectorXd& params) {
  if (params.size() != n_params()) {
    throw DataError("parameter vector length mismatch");
  }
  Eigen::Index at = 0;
  for (Eigen::Index i = 0; i < w1.rows(); ++i)
    for (Eigen::Index j = 0; j < w1.cols(); ++j) w1(i, j) = params(at++);
  for (Eigen::Index i = 0; i < b1.size(); ++i) b1(i) = params(at++);
  for (Eigen::Index i = 0; i < w2.rows(); ++i)
    for (Eigen::Index j = 0; j < w2.cols(); ++j) w2(i, j) = params(at++);
  for (Eigen::Index i = 0; i < b2.size(); ++i) b2(i) = params(at++);
}

void FnnModel::save(std::ostream& out) const {
  out << "fnn 1 " << n_inputs() << ' ' << n_hidden() << ' ' << n_outputs()
      << '\n';
  const Eigen::VectorXd p = pack();
  char buf[40];
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", p(i));
    out << buf << '\n';
  }
}

FnnModel FnnModel::load(std::istream& in) {
  std::string tag;
  int version = 0;
  FnnConfig cfg;
  if (!(in >> tag >> version >> cfg.n_inputs >> cfg.n_hidden >>
        cfg.n_outputs) ||
      tag != "fnn" || version != 1) {
    throw DataError("unrecognized model header");
  }
  check_dims(cfg);
  FnnModel m = init_weights(cfg, 0);
  Eigen::VectorXd p(m.n_params());
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (!(in >> p(i))) throw DataError("truncated model file");
  }
  m.unpack(p);
  return m;
}

FnnModel init_weights(const FnnConfig& config, std::uint64_t seed) {
  check_dims(config);
  FnnModel m;
  m.w1.resize(config.n_hidden, config.n_inputs);
  m.b1 = Eigen::VectorXd::Zero(config.n_hidden);
  m.w2.resize(config.n_outputs, config.n_hidden);
  m.b2 = Eigen::VectorXd::Zero(config.n_outputs);

  SplitMix64 rng(seed);
  const double bound1 = 1.0 / std::sqrt(static_cast<double>(config.n_inputs));
  for (Eigen::Index i = 0; i < m.w1.rows(); ++i)
    for (Eigen::Index j = 0; j < m.w1.cols(); ++j)
      m.w1(i, j) = rng.next_double(-bound1, bound1);
  const double bound2 = 1.0 / std::sqrt(static_cast<double>(config.n_hidden));
  for (Eigen::Index i = 0; i < m.w2.rows(); ++i)
    for (Eigen::Index j = 0; j < m.w2.cols(); ++j)
      m.w2(i, j) = rng.next_double(-bound2, bound2);
  return m;
}

Eigen::VectorXd forward(const FnnModel& model, const Eigen::VectorXd& x) {
  if (x.size() != model.n_inputs()) {
    throw DataError("input length " + std::to_string(x.size()) +
                    " != network inputs " + std::to_string(model.n_inputs()));
  }
  Eigen::VectorXd z = model.w1 * x + model.b1;
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = logistic(z(i));
  return model.w2 * z + model.b2;
}

std::vector<double> forward(const FnnModel& model,
                            const std::vector<double>& x) {
  Eigen::VectorXd xv =
      Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<long>(x.size()));
  Eigen::VectorXd y = forward(model, xv);
  return std::vector<double>(y.data(), y.data() + y.size());
}

// ============================================================================
// Jacobian
// ============================================================================

JacobianResult jacobian(const FnnModel& model, const Eigen::MatrixXd& inputs,
                        const Eigen::MatrixXd& targets) {
  const Eigen::Index n_samples = inputs.rows();
  const Eigen::Index d = model.n_inputs();
  const Eigen::Index m = model.n_hidden();
  const Eigen::Index k = model.n_outputs();
  if (n_samples < 1) throw DataError("jacobian needs a non-empty batch");
  if (inputs.cols() != d || targets.cols() != k ||
      targets.rows() != n_samples) {
    throw DataError("jacobian batch shape mismatch");
  }

  JacobianResult r;
  r.jacobian.setZero(n_samples * k, model.n_params());
  r.errors.resize(n_samples * k);

  // Parameter layout must match pack(): w1 row-major, b1, w2 row-major, b2.
  const Eigen::Index w1_at = 0;
  const Eigen::Index b1_at = m * d;
  const Eigen::Index w2_at = b1_at + m;
  const Eigen::Index b2_at = w2_at + k * m;

  for (Eigen::Index s = 0; s < n_samples; ++s) {
    const Eigen::VectorXd x = inputs.row(s).transpose();
    Eigen::VectorXd z = model.w1 * x + model.b1;
    Eigen::VectorXd a(m), da(m);
    for (Eigen::Index j = 0; j < m; ++j) {
      a(j) = logistic(z(j));
      da(j) = a(j) * (1.0 - a(j));
    }
    const Eigen::VectorXd y = model.w2 * a + model.b2;

    for (Eigen::Index o = 0; o < k; ++o) {
      const Eigen::Index row = s * k + o;
      r.errors(row) = targets(s, o) - y(o);
      r.sse += r.errors(row) * r.errors(row);
      for (Eigen::Index j = 0; j < m; ++j) {
        const double chain = model.w2(o, j) * da(j);
        for (Eigen::Index i = 0; i < d; ++i) {
          r.jacobian(row, w1_at + j * d + i) = chain * x(i);
        }
        r.jacobian(row, b1_at + j) = chain;
        r.jacobian(row, w2_at + o * m + j) = a(j);
      }
      r.jacobian(row, b2_at + o) = 1.0;
    }
  }
  return r;
}

// ============================================================================
// Levenberg-Marquardt
// ============================================================================

namespace {

double batch_sse(const FnnModel& model, const Eigen::MatrixXd& inputs,
                 const Eigen::MatrixXd& targets) {
  double sse = 0.0;
  for (Eigen::Index s = 0; s < inputs.rows(); ++s) {
    const Eigen::VectorXd y = forward(model, inputs.row(s).transpose());
    for (Eigen::Index o = 0; o < targets.cols(); ++o) {
      const double e = targets(s, o) - y(o);
      sse += e * e;
    }
  }
  return sse;
}

constexpr double kMuCeiling = 1e12;
constexpr int kMaxRejections = 20;

TrainResult train_once(const Eigen::MatrixXd& inputs,
                       const Eigen::MatrixXd& targets, const FnnConfig& config,
                       const TrainConfig& tc, std::uint64_t seed) {
  TrainResult r;
  r.model = init_weights(config, seed);
  double mu = tc.mu_init;
  double sse = batch_sse(r.model, inputs, targets);
  r.accepted_sse.push_back(sse);

  for (int epoch = 0; epoch < tc.max_epochs; ++epoch) {
    r.epochs = epoch + 1;
    if (sse <= tc.sse_tolerance) break;

    const JacobianResult jr = jacobian(r.model, inputs, targets);
    const Eigen::MatrixXd jtj =
        jr.jacobian.transpose() * jr.jacobian;
    const Eigen::VectorXd jte = jr.jacobian.transpose() * jr.errors;
    const Eigen::VectorXd theta = r.model.pack();

    bool accepted = false;
    int rejections = 0;
    while (!accepted) {
      Eigen::MatrixXd damped = jtj;
      damped.diagonal().array() += mu;
      const Eigen::VectorXd delta = damped.ldlt().solve(jte);

      FnnModel trial = r.model;
      trial.unpack(theta + delta);
      const double trial_sse = batch_sse(trial, inputs, targets);

      if (std::isfinite(trial_sse) && trial_sse < sse) {
        r.model = trial;
        sse = trial_sse;
        r.accepted_sse.push_back(sse);
        mu = std::max(mu * tc.mu_decrease, 1e-20);
        accepted = true;
      } else {
        mu *= tc.mu_increase;
        ++rejections;
        if (rejections >= kMaxRejections || mu > kMuCeiling) break;
      }
    }
    if (!accepted) break;  // trust region exhausted
  }

  if (!std::isfinite(sse)) {
    throw NumericError("training diverged to a non-finite SSE");
  }
  r.sse = sse;
  return r;
}

}  // namespace

TrainResult train_lm(const LagMatrix& data, const FnnConfig& config,
                     const TrainConfig& tc) {
  check_dims(config);
  if (data.inputs.rows() < 2) {
    throw DataError("training needs at least 2 rows");
  }
  if (data.inputs.cols() != config.n_inputs ||
      data.targets.cols() != config.n_outputs) {
    throw DataError("lag matrix shape does not match the network config");
  }

  TrainResult best;
  bool have_best = false;
  int divergences = 0;
  for (int restart = 0; restart < std::max(1, tc.n_restarts); ++restart) {
    const std::uint64_t seed =
        derive_seed(tc.seed, static_cast<std::uint64_t>(restart) ^
                                 hash_label("lm-restart"));
    try {
      TrainResult r = train_once(data.inputs, data.targets, config, tc, seed);
      if (!have_best || r.sse < best.sse) {
        best = std::move(r);
        have_best = true;
      }
    } catch (const NumericError&) {
      ++divergences;  // a restart consumes the divergence
    }
  }
  if (!have_best) {
    throw NumericError("all " + std::to_string(divergences) +
                       " training restarts diverged");
  }
  best.underdetermined =
      data.inputs.rows() * 10 < best.model.n_params();
  return best;
}

// ============================================================================
// Cross-validation
// ============================================================================

CvPlan CvPlan::blocked(std::size_t n_rows, int k) {
  if (k < 2 || n_rows < static_cast<std::size_t>(k)) {
    throw DataError("cv needs at least k rows");
  }
  CvPlan plan;
  plan.k = k;
  const std::size_t base = n_rows / static_cast<std::size_t>(k);
  const std::size_t extra = n_rows % static_cast<std::size_t>(k);
  std::size_t at = 0;
  for (int f = 0; f < k; ++f) {
    const std::size_t len = base + (static_cast<std::size_t>(f) < extra);
    plan.fold_bounds.emplace_back(at, at + len);
    at += len;
  }
  return plan;
}

FnnConfig cross_validate(const LagMatrix& data,
                         const std::vector<FnnConfig>& config_grid,
                         const TrainConfig& tc, const CvPlan& plan) {
  if (config_grid.empty()) throw DataError("empty config grid");
  if (config_grid.size() == 1) return config_grid.front();

  const auto n = static_cast<std::size_t>(data.inputs.rows());
  if (plan.fold_bounds.empty() || plan.fold_bounds.back().second != n) {
    throw DataError("cv plan does not cover the data");
  }

  double best_sse = std::numeric_limits<double>::infinity();
  std::size_t best_idx = 0;
  for (std::size_t c = 0; c < config_grid.size(); ++c) {
    const FnnConfig& cfg = config_grid[c];
    double mean_val_sse = 0.0;
    for (std::size_t f = 0; f < plan.fold_bounds.size(); ++f) {
      const auto [lo, hi] = plan.fold_bounds[f];
      LagMatrix train;
      const auto n_train = static_cast<Eigen::Index>(n - (hi - lo));
      train.inputs.resize(n_train, data.inputs.cols());
      train.targets.resize(n_train, data.targets.cols());
      Eigen::Index at = 0;
      for (std::size_t row = 0; row < n; ++row) {
        if (row >= lo && row < hi) continue;
        train.inputs.row(at) = data.inputs.row(static_cast<Eigen::Index>(row));
        train.targets.row(at) =
            data.targets.row(static_cast<Eigen::Index>(row));
        train.origin_indices.push_back(row);
        ++at;
      }
      TrainConfig fold_tc = tc;
      fold_tc.seed = derive_seed(
          tc.seed, hash_label("cv") ^ (c * 1000003ULL + f));
      const TrainResult fit = train_lm(train, cfg, fold_tc);
      double val_sse = 0.0;
      for (std::size_t row = lo; row < hi; ++row) {
        const Eigen::VectorXd y = forward(
            fit.model,
            data.inputs.row(static_cast<Eigen::Index>(row)).transpose());
        for (Eigen::Index o = 0; o < data.targets.cols(); ++o) {
          const double e = data.targets(static_cast<Eigen::Index>(row), o) -
                           y(o);
          val_sse += e * e;
        }
      }
      mean_val_sse += val_sse;
    }
    mean_val_sse /= static_cast<double>(plan.fold_bounds.size());

    const bool better =
        mean_val_sse < best_sse ||
        (mean_val_sse == best_sse &&
         cfg.n_hidden < config_grid[best_idx].n_hidden);
    if (better) {
      best_sse = mean_val_sse;
      best_idx = c;
    }
  }
  return config_grid[best_idx];
}

}  // namespace msfc::nnet
