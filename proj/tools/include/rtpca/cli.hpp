#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rtpca/tensor3.hpp"

namespace rtpca::cli {

namespace fs = std::filesystem;

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitSolver = 2;

/// Parses "I1xI2xI3".
Dims parse_dims(const std::string& text);

/// Parses "a:b:step" (inclusive) or a comma separated list. Empty text gives
/// an empty grid.
std::vector<double> parse_grid(const std::string& text);

struct SynthOptions {
  Dims dims{100, 100, 50};
  std::size_t rank = 5;
  double kappa = 5.0;
  double alpha = 0.1;
  std::uint64_t seed = 1;
  fs::path out = ".";
};

/// Writes y.t3b, x_star.t3b, s_star.t3b and meta.json into opts.out.
void cmd_synth(const SynthOptions& opts, std::ostream& log);

struct SolveOptions {
  fs::path in;
  std::string algo = "sgd";
  std::size_t rank = 5;
  std::size_t iters = 100;
  double eta = 0.5;
  std::optional<double> tau;
  std::optional<double> zeta0;
  std::optional<double> zeta1;
  std::optional<double> lambda;  // tnn only
  std::optional<fs::path> truth;
  std::optional<fs::path> report;
  fs::path out = ".";
};

/// Writes x.t3b and s.t3b into opts.out and the trace JSON to opts.report.
/// Returns kExitSolver when the solver fails.
int cmd_solve(const SolveOptions& opts, std::ostream& log);

struct PhaseOptions {
  Dims dims{100, 100, 50};
  std::vector<double> ranks;
  std::vector<double> alphas;
  double kappa = 5.0;
  std::size_t trials = 10;
  double success_rse = 1e-3;
  std::string algo = "sgd";
  double eta = 0.5;
  std::optional<double> tau;  // sgd only; default 1 - 0.6 eta
  std::size_t iters = 100;
  std::uint64_t seed = 1;
  std::size_t threads = 0;  // 0: hardware concurrency
};

struct PhaseCell {
  std::size_t rank = 0;
  double alpha = 0.0;
  double median_rse = 0.0;
  double success_fraction = 0.0;
};

/// Runs every (R, alpha) cell. Trial t of a cell uses the same instance for
/// every algorithm; a solver failure counts as an unsuccessful trial.
std::vector<PhaseCell> run_phase(const PhaseOptions& opts);

void write_phase_csv(std::ostream& out, const std::vector<PhaseCell>& cells);

struct LearnOptions {
  std::vector<std::string> train;  // glob patterns of .t3b files
  std::size_t rank = 5;
  std::size_t epochs = 100;
  double lr = 1.0;
  double fd_step = 1e-4;
  std::size_t k_unroll = 30;
  std::optional<double> zeta0;
  std::optional<double> zeta1;
  std::optional<double> tau;
  std::optional<double> eta;
  fs::path out = "params.json";
};

/// Expands glob patterns, sorted and deduplicated.
std::vector<fs::path> expand_globs(const std::vector<std::string>& patterns);

int cmd_learn(const LearnOptions& opts, std::ostream& log);

struct DenoiseOptions {
  fs::path frames;
  std::optional<fs::path> clean;
  std::size_t rank = 3;
  std::size_t iters = 50;
  double tau = 0.8;
  double zeta0 = 1.0;
  double zeta1 = 1.0;
  double eta = 0.5;
  fs::path out = "denoised";
};

/// Writes the low-rank frames to opts.out and the sparse magnitudes to
/// opts.out / "sparse"; report.json carries PSNR when a clean directory is
/// given.
int cmd_denoise(const DenoiseOptions& opts, std::ostream& log);

/// Entry point of the rtpca executable.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rtpca::cli
