#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "rtpca/tensor3.hpp"

namespace rtpca {

/// The four tunable solver scalars.
struct SolverParams {
  double zeta0 = 0.0;
  double zeta1 = 0.0;
  double tau = 0.0;
  double eta = 0.0;
};

/// Unconstrained parameters, ordered (zeta0, zeta1, tau, eta).
using RawParams = std::array<double, 4>;

double softplus(double x);
double inverse_softplus(double y);
double sigmoid(double x);
double logit(double p);

/// zeta0, zeta1, eta = softplus(raw); tau = sigmoid(raw).
SolverParams to_constrained(const RawParams& raw);
RawParams to_raw(const SolverParams& p);

struct LearnConfig {
  RawParams raw{};
  std::size_t rank = 1;
  std::size_t epochs = 100;
  double learn_rate = 1.0;
  double fd_step = 1e-4;
  std::size_t k_unroll = 30;
  std::vector<Tensor3> train_set;
};

/// ||Y - L * R^T||_1 / ||Y||_F^2. Throws std::invalid_argument for Y = 0.
double sll_loss(const Tensor3& y, const Tensor3& l, const Tensor3& r);

/// SLL of the factors produced by k_unroll solver iterations with `params`.
double unrolled_loss(const SolverParams& params, const Tensor3& y, std::size_t rank,
                     std::size_t k_unroll);

using RawLoss = std::function<double(const RawParams&)>;

/// Central differences (f(x + h e_i) - f(x - h e_i)) / 2h.
RawParams fd_gradient(const RawLoss& loss, const RawParams& at, double h);

/// Finite-difference gradient of the unrolled loss on one observation.
RawParams fd_grad(const LearnConfig& cfg, const Tensor3& y);

/// Mean unrolled loss over cfg.train_set at raw parameters `raw`.
double train_loss(const LearnConfig& cfg, const RawParams& raw);

struct LearnResult {
  SolverParams params;  // best iterate, constrained
  RawParams raw{};
  std::vector<double> loss_history;  // loss at the start of every epoch
  double best_loss = 0.0;
  std::size_t best_epoch = 0;
  bool aborted = false;  // divergence or solver failure
  std::string abort_reason;

  /// Running minimum of loss_history.
  std::vector<double> best_loss_history() const;
};

/// Plain gradient descent on the raw parameters. Returns the best iterate
/// seen; aborts (keeping the history) when the loss exceeds 10x its initial
/// value or a probe solve fails.
LearnResult train(const LearnConfig& cfg);

}  // namespace rtpca
