#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "rtpca/tensor3.hpp"
#include "rtpca/tlinalg.hpp"

namespace rtpca {

/// Ground-truth pair used only for instrumentation; never for control flow.
struct GroundTruth {
  Tensor3 x_star;
  Tensor3 s_star;
};

/// Parameters of the scaled gradient descent solver.
struct SgdConfig {
  std::size_t rank = 1;
  std::size_t iterations = 100;
  double eta = 0.5;
  double zeta0 = 0.0;
  double zeta1 = 0.0;
  double tau = 0.7;
  double rank_tol = kRankTol;
  /// Stop once ||Y - X - S||_F / ||Y||_F drops below this (0 disables).
  double early_stop_residual = 1e-14;
  std::shared_ptr<const GroundTruth> truth;

  /// eta in [1/4, 2/3] and tau == 1 - 0.6 eta: the regime covered by the
  /// recovery guarantee.
  bool theorem_mode() const noexcept;

  /// Throws std::invalid_argument for values outside the solver's domain.
  void validate() const;
};

/// Iterate (L_k, R_k, S_k). X_k = L_k * R_k^T.
struct SgdState {
  Tensor3 l;
  Tensor3 r;
  Tensor3 s;
  std::size_t k = 0;

  Tensor3 x() const { return compose({l, r}); }
};

/// One logged iteration. Ground-truth fields are NaN when no truth is
/// attached.
struct IterationRecord {
  std::size_t k = 0;
  double rse = 0.0;
  double err_inf_x = 0.0;
  double err_inf_s = 0.0;
  double zeta = 0.0;
  double residual = 0.0;  // ||Y - X_k - S_k||_F / ||Y||_F
  double ms = 0.0;
  std::size_t support_violations = 0;  // entries with S_k != 0 and S* == 0
  OpCounts ops;
};

/// Per-iteration log shared by the SGD solver and the ADMM baseline.
struct SolveTrace {
  std::string algorithm;
  bool theorem_mode = false;
  std::vector<IterationRecord> iterations;
  double rse_final = 0.0;
  std::size_t iters = 0;
  double wall_ms = 0.0;
  bool early_stopped = false;
};

using SgdTrace = SolveTrace;

struct SolveResult {
  Tensor3 x;
  Tensor3 s;
  SolveTrace trace;
};

/// S_0 = T_zeta0(Y); (L_0, R_0) = top-R approximation of Y - S_0.
SgdState spectral_init(const Tensor3& y, const SgdConfig& cfg);

/// Threshold used at step k -> k+1: tau^k * zeta1.
double step_threshold(const SgdConfig& cfg, std::size_t k);

/// One scaled gradient step. Both factor updates use (L_k, R_k). Throws
/// RankCollapseError if a Gram tensor has a singular Fourier slice.
SgdState sgd_step(const SgdState& state, const Tensor3& y, const SgdConfig& cfg);

/// spectral_init followed by up to cfg.iterations steps.
SolveResult solve_sgd(const Tensor3& y, const SgdConfig& cfg);

/// Statistics of the low-rank component that drive the threshold schedule.
struct LowRankStats {
  double sigma_min = 0.0;
  double mu = 1.0;
  double x_inf = 0.0;  // ||X*||_inf (or an estimate of it)
  std::size_t rank = 1;
  Dims dims;
};

struct Schedule {
  double zeta0 = 0.0;
  double zeta1 = 0.0;
  double tau = 0.0;
  double eta = 0.0;
  /// false when eta lies outside [1/4, 2/3]; the schedule is still returned.
  bool eta_in_theorem_range = true;
};

/// zeta0 = 1.5 ||X*||_inf, zeta1 = 3 mu R sigma_min / sqrt(I1 I2),
/// tau = 1 - 0.6 eta.
Schedule default_schedule(const LowRankStats& stats, double eta);

/// Exact statistics of a known low-rank tensor.
LowRankStats measure_stats(const Tensor3& x_star, std::size_t rank);

/// Statistics estimated from an observation only: one top-R pass on Y, then
/// ||X||_inf is taken over entries whose residual is within three robust
/// (median absolute deviation) standard deviations.
LowRankStats estimate_stats(const Tensor3& y, std::size_t rank);

/// Convenience: a theorem-mode configuration built from `stats`.
SgdConfig theorem_config(const LowRankStats& stats, double eta,
                         std::size_t iterations);

}  // namespace rtpca
