#include "rtpca/admm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rtpca/errors.hpp"
#include "rtpca/synth.hpp"

namespace rtpca {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

double default_lambda(const Dims& dims) {
  return 1.0 / std::sqrt(static_cast<double>(std::max(dims.n1, dims.n2)) *
                         static_cast<double>(dims.n3));
}

SolveResult solve_tnn_admm(const Tensor3& y, const AdmmConfig& cfg) {
  const double lambda = cfg.lambda > 0.0 ? cfg.lambda : default_lambda(y.dims());
  if (!(cfg.rho0 > 0.0) || !(cfg.rho_growth >= 1.0)) {
    throw std::invalid_argument("solve_tnn_admm: rho0 must be positive, growth >= 1");
  }
  const GroundTruth* truth = cfg.truth.get();
  if (truth && (truth->x_star.dims() != y.dims() || truth->s_star.dims() != y.dims())) {
    throw DimensionError("solve_tnn_admm: ground truth shape differs from observation");
  }

  const auto t_start = Clock::now();
  const double y_norm = frobenius_norm(y);
  const double scale = y_norm > 0.0 ? y_norm : 1.0;

  Tensor3 x(y.dims()), s(y.dims()), dual(y.dims());
  double rho = cfg.rho0;

  SolveTrace trace;
  trace.algorithm = "tnn";
  for (std::size_t it = 0; it < cfg.max_iters; ++it) {
    const OpCounts before = op_counts();
    const auto t0 = Clock::now();

    // X <- prox_{TNN/rho}(Y - S - Lambda/rho)
    Tensor3 x_new = tsvt(y - s - dual * (1.0 / rho), 1.0 / rho);
    // S <- prox_{lambda ||.||_1 / rho}(Y - X - Lambda/rho)
    Tensor3 s_new = soft_threshold(y - x_new - dual * (1.0 / rho), lambda / rho);
    Tensor3 primal = x_new + s_new - y;
    dual += primal * rho;

    const double change_x = frobenius_norm(x_new - x) / scale;
    const double change_s = frobenius_norm(s_new - s) / scale;
    const double primal_rel = frobenius_norm(primal) / scale;
    x = std::move(x_new);
    s = std::move(s_new);

    IterationRecord rec;
    rec.k = it + 1;
    rec.zeta = lambda / rho;
    rec.residual = primal_rel;
    rec.ms = ms_since(t0);
    rec.ops = op_counts() - before;
    if (truth) {
      rec.rse = rse(x, truth->x_star);
      rec.err_inf_x = max_abs_diff(x, truth->x_star);
      rec.err_inf_s = max_abs_diff(s, truth->s_star);
    } else {
      rec.rse = rec.err_inf_x = rec.err_inf_s = std::numeric_limits<double>::quiet_NaN();
    }
    trace.iterations.push_back(rec);
    trace.iters = it + 1;

    if (std::max({primal_rel, change_x, change_s}) < cfg.tol) {
      trace.early_stopped = true;
      break;
    }
    rho = std::min(rho * cfg.rho_growth, cfg.rho_max);
  }

  trace.rse_final = truth ? rse(x, truth->x_star) : std::numeric_limits<double>::quiet_NaN();
  trace.wall_ms = ms_since(t_start);
  return {std::move(x), std::move(s), std::move(trace)};
}

}  // namespace rtpca
