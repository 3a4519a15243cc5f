#pragma once

#include <cstddef>
#include <memory>

#include "rtpca/solver.hpp"

namespace rtpca {

/// Two-block ADMM for  min ||X||_TNN + lambda ||S||_1  s.t.  Y = X + S.
struct AdmmConfig {
  /// <= 0 selects 1 / sqrt(max(I1, I2) * I3).
  double lambda = 0.0;
  double rho0 = 1e-3;
  double rho_growth = 1.1;
  double rho_max = 1e10;
  std::size_t max_iters = 500;
  double tol = 1e-8;
  std::shared_ptr<const GroundTruth> truth;
};

double default_lambda(const Dims& dims);

/// Iterates until the relative primal residual and the relative changes of X
/// and S are all below cfg.tol, or max_iters is reached.
SolveResult solve_tnn_admm(const Tensor3& y, const AdmmConfig& cfg);

}  // namespace rtpca
