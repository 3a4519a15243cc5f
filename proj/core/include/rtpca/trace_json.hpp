#pragma once

#include <json.hpp>

#include "rtpca/admm.hpp"
#include "rtpca/solver.hpp"

namespace rtpca {

nlohmann::json to_json(const SgdConfig& cfg);
nlohmann::json to_json(const AdmmConfig& cfg, const Dims& dims);
nlohmann::json to_json(const OpCounts& ops);

/// {config, iterations: [{k, rse, err_inf_x, err_inf_s, zeta, ms, ...}],
///  result: {rse_final, iters, wall_ms, ...}}. NaN metrics become null.
nlohmann::json trace_to_json(const SolveTrace& trace, const nlohmann::json& config);

}  // namespace rtpca
