#include "rtpca/trace_json.hpp"

#include <cmath>

namespace rtpca {

namespace {

nlohmann::json number_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

}  // namespace

nlohmann::json to_json(const SgdConfig& cfg) {
  return {
      {"algo", "sgd"},
      {"rank", cfg.rank},
      {"iterations", cfg.iterations},
      {"eta", cfg.eta},
      {"zeta0", cfg.zeta0},
      {"zeta1", cfg.zeta1},
      {"tau", cfg.tau},
      {"rank_tol", cfg.rank_tol},
      {"theorem_mode", cfg.theorem_mode()},
  };
}

nlohmann::json to_json(const AdmmConfig& cfg, const Dims& dims) {
  return {
      {"algo", "tnn"},
      {"lambda", cfg.lambda > 0.0 ? cfg.lambda : default_lambda(dims)},
      {"rho0", cfg.rho0},
      {"rho_growth", cfg.rho_growth},
      {"rho_max", cfg.rho_max},
      {"iterations", cfg.max_iters},
      {"tol", cfg.tol},
  };
}

nlohmann::json to_json(const OpCounts& ops) {
  return {
      {"slice_matmuls", ops.slice_matmuls},
      {"matmul_flops", ops.matmul_flops},
      {"slice_svds", ops.slice_svds},
      {"svd_flops", ops.svd_flops},
      {"slice_inverses", ops.slice_inverses},
  };
}

nlohmann::json trace_to_json(const SolveTrace& trace, const nlohmann::json& config) {
  nlohmann::json iters = nlohmann::json::array();
  OpCounts total;
  for (const auto& r : trace.iterations) {
    iters.push_back({
        {"k", r.k},
        {"rse", number_or_null(r.rse)},
        {"err_inf_x", number_or_null(r.err_inf_x)},
        {"err_inf_s", number_or_null(r.err_inf_s)},
        {"zeta", r.zeta},
        {"ms", r.ms},
        {"residual", r.residual},
        {"support_violations", r.support_violations},
    });
    total += r.ops;
  }
  return {
      {"config", config},
      {"iterations", std::move(iters)},
      {"result",
       {
           {"rse_final", number_or_null(trace.rse_final)},
           {"iters", trace.iters},
           {"wall_ms", trace.wall_ms},
           {"early_stopped", trace.early_stopped},
           {"theorem_mode", trace.theorem_mode},
           {"ops", to_json(total)},
       }},
  };
}

}  // namespace rtpca
