#include "rtpca/learn.hpp"

#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>

#include "rtpca/solver.hpp"

namespace rtpca {

double softplus(double x) {
  // log(1 + e^x) without overflow for large x
  return x > 30.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double inverse_softplus(double y) {
  if (!(y > 0.0)) throw std::invalid_argument("inverse_softplus: y must be positive");
  return y > 30.0 ? y + std::log(-std::expm1(-y)) : std::log(std::expm1(y));
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double logit(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("logit: p must lie in (0, 1)");
  return std::log(p / (1.0 - p));
}

SolverParams to_constrained(const RawParams& raw) {
  return {softplus(raw[0]), softplus(raw[1]), sigmoid(raw[2]), softplus(raw[3])};
}

RawParams to_raw(const SolverParams& p) {
  return {inverse_softplus(p.zeta0), inverse_softplus(p.zeta1), logit(p.tau),
          inverse_softplus(p.eta)};
}

double sll_loss(const Tensor3& y, const Tensor3& l, const Tensor3& r) {
  const double fro = frobenius_norm(y);
  if (fro == 0.0) throw std::invalid_argument("sll_loss: observation is zero");
  return l1_norm(y - compose({l, r})) / (fro * fro);
}

double unrolled_loss(const SolverParams& params, const Tensor3& y, std::size_t rank,
                     std::size_t k_unroll) {
  SgdConfig cfg;
  cfg.rank = rank;
  cfg.iterations = k_unroll;
  cfg.zeta0 = params.zeta0;
  cfg.zeta1 = params.zeta1;
  cfg.tau = params.tau;
  // Softplus can exceed the solver's step-size domain; clamp to its edge.
  cfg.eta = std::min(params.eta, 1.0);
  cfg.early_stop_residual = 0.0;
  SgdState st = spectral_init(y, cfg);
  for (std::size_t k = 0; k < k_unroll; ++k) st = sgd_step(st, y, cfg);
  return sll_loss(y, st.l, st.r);
}

RawParams fd_gradient(const RawLoss& loss, const RawParams& at, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("fd_gradient: step must be positive");
  RawParams g{};
  for (std::size_t i = 0; i < at.size(); ++i) {
    RawParams plus = at;
    RawParams minus = at;
    plus[i] += h;
    minus[i] -= h;
    g[i] = (loss(plus) - loss(minus)) / (2.0 * h);
  }
  return g;
}

RawParams fd_grad(const LearnConfig& cfg, const Tensor3& y) {
  return fd_gradient(
      [&](const RawParams& raw) {
        return unrolled_loss(to_constrained(raw), y, cfg.rank, cfg.k_unroll);
      },
      cfg.raw, cfg.fd_step);
}

double train_loss(const LearnConfig& cfg, const RawParams& raw) {
  if (cfg.train_set.empty()) throw std::invalid_argument("train: empty training set");
  const SolverParams p = to_constrained(raw);
  double total = 0.0;
  for (const auto& y : cfg.train_set) total += unrolled_loss(p, y, cfg.rank, cfg.k_unroll);
  return total / static_cast<double>(cfg.train_set.size());
}

std::vector<double> LearnResult::best_loss_history() const {
  std::vector<double> out;
  double best = std::numeric_limits<double>::infinity();
  for (double v : loss_history) {
    best = std::min(best, v);
    out.push_back(best);
  }
  return out;
}

LearnResult train(const LearnConfig& cfg) {
  if (cfg.train_set.empty()) throw std::invalid_argument("train: empty training set");
  LearnResult res;
  RawParams raw = cfg.raw;
  res.raw = raw;
  res.params = to_constrained(raw);

  const RawLoss loss = [&](const RawParams& p) { return train_loss(cfg, p); };
  double current = loss(raw);
  const double initial = current;
  res.best_loss = current;
  res.best_epoch = 0;

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    res.loss_history.push_back(current);
    if (current < res.best_loss) {
      res.best_loss = current;
      res.best_epoch = epoch;
      res.raw = raw;
      res.params = to_constrained(raw);
    }
    try {
      const RawParams g = fd_gradient(loss, raw, cfg.fd_step);
      for (std::size_t i = 0; i < raw.size(); ++i) raw[i] -= cfg.learn_rate * g[i];
      current = loss(raw);
    } catch (const std::exception& e) {
      res.aborted = true;
      res.abort_reason = e.what();
      return res;
    }
    if (!std::isfinite(current) || current > 10.0 * initial) {
      res.aborted = true;
      res.abort_reason = "loss diverged";
      return res;
    }
  }
  res.loss_history.push_back(current);
  if (current < res.best_loss) {
    res.best_loss = current;
    res.best_epoch = cfg.epochs;
    res.raw = raw;
    res.params = to_constrained(raw);
  }
  return res;
}

}  // namespace rtpca
