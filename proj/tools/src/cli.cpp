#include <exception>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>

#include "rtpca/cli.hpp"
#include "rtpca/errors.hpp"

namespace rtpca::cli {

namespace {

// Adds an option that only fills `target` when given on the command line or
// in the config file.
template <typename T>
CLI::Option* add_optional(CLI::App* app, const std::string& name, std::optional<T>& target,
                          const std::string& help) {
  return app->add_option_function<T>(
      name, [&target](const T& v) { target = v; }, help);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robust tensor PCA by scaled gradient descent in the t-SVD framework"};
  app.set_config("--config", "", "TOML file with option values; flags override it");
  app.require_subcommand(1);

  // synth
  SynthOptions synth;
  std::string synth_dims = "100x100x50";
  auto* s = app.add_subcommand("synth", "Generate a low-rank plus sparse instance");
  s->add_option("--dims", synth_dims, "I1xI2xI3")->capture_default_str();
  s->add_option("--rank", synth.rank, "Tubal rank R")->capture_default_str();
  s->add_option("--kappa", synth.kappa, "Condition number")->capture_default_str();
  s->add_option("--alpha", synth.alpha, "Fraction of corrupted entries")->capture_default_str();
  s->add_option("--seed", synth.seed, "Random seed")->capture_default_str();
  s->add_option("--out", synth.out, "Output directory")->required();

  // solve
  SolveOptions solve;
  auto* v = app.add_subcommand("solve", "Recover X and S from an observation");
  v->add_option("--in", solve.in, "Observation y.t3b")->required()->check(CLI::ExistingFile);
  v->add_option("--algo", solve.algo, "sgd or tnn")
      ->check(CLI::IsMember({"sgd", "tnn"}))
      ->capture_default_str();
  v->add_option("--rank", solve.rank, "Tubal rank R")->capture_default_str();
  v->add_option("--iters", solve.iters, "Iteration budget")->capture_default_str();
  v->add_option("--eta", solve.eta, "Step size")->capture_default_str();
  add_optional(v, "--tau", solve.tau, "Threshold decay (default 1 - 0.6 eta)");
  add_optional(v, "--zeta0", solve.zeta0, "Initial threshold");
  add_optional(v, "--zeta1", solve.zeta1, "First iteration threshold");
  add_optional(v, "--lambda", solve.lambda, "Sparsity weight of the tnn baseline");
  add_optional(v, "--truth", solve.truth, "Ground truth x_star.t3b for instrumentation")
      ->check(CLI::ExistingFile);
  add_optional(v, "--report", solve.report, "Trace JSON output");
  v->add_option("--out", solve.out, "Directory for x.t3b and s.t3b")->capture_default_str();

  // phase
  PhaseOptions phase;
  std::string phase_dims = "100x100x50", r_grid, alpha_grid;
  std::string phase_out;
  auto* p = app.add_subcommand("phase", "Phase transition over (R, alpha)");
  p->add_option("--dims", phase_dims, "I1xI2xI3")->capture_default_str();
  p->add_option("--r-grid", r_grid, "lo:hi:step or comma list")->required();
  p->add_option("--alpha-grid", alpha_grid, "lo:hi:step or comma list")->required();
  p->add_option("--kappa", phase.kappa)->capture_default_str();
  p->add_option("--trials", phase.trials)->capture_default_str();
  p->add_option("--success-rse", phase.success_rse)->capture_default_str();
  p->add_option("--algo", phase.algo)->check(CLI::IsMember({"sgd", "tnn"}))->capture_default_str();
  p->add_option("--eta", phase.eta)->capture_default_str();
  add_optional(p, "--tau", phase.tau, "Threshold decay (default 1 - 0.6 eta)");
  p->add_option("--iters", phase.iters)->capture_default_str();
  p->add_option("--seed", phase.seed)->capture_default_str();
  p->add_option("--threads", phase.threads, "Worker threads (0: all cores)")->capture_default_str();
  p->add_option("--out", phase_out, "CSV output")->required();

  // learn
  LearnOptions learn;
  auto* l = app.add_subcommand("learn", "Learn (zeta0, zeta1, tau, eta) on observations");
  l->add_option("--train", learn.train, "Glob patterns of .t3b observations")->required();
  l->add_option("--rank", learn.rank)->capture_default_str();
  l->add_option("--epochs", learn.epochs)->capture_default_str();
  l->add_option("--lr", learn.lr)->capture_default_str();
  l->add_option("--fd-step", learn.fd_step)->capture_default_str();
  l->add_option("--k-unroll", learn.k_unroll)->capture_default_str();
  add_optional(l, "--zeta0", learn.zeta0, "Initial zeta0");
  add_optional(l, "--zeta1", learn.zeta1, "Initial zeta1");
  add_optional(l, "--tau", learn.tau, "Initial tau");
  add_optional(l, "--eta", learn.eta, "Initial eta");
  l->add_option("--out", learn.out, "params.json")->capture_default_str();

  // denoise
  DenoiseOptions denoise;
  auto* d = app.add_subcommand("denoise", "Low-rank recovery of a PGM frame sequence");
  d->add_option("--frames", denoise.frames, "Directory of P5 .pgm frames")
      ->required()
      ->check(CLI::ExistingDirectory);
  add_optional(d, "--clean", denoise.clean, "Directory of clean reference frames")
      ->check(CLI::ExistingDirectory);
  d->add_option("--rank", denoise.rank)->capture_default_str();
  d->add_option("--iters", denoise.iters)->capture_default_str();
  d->add_option("--tau", denoise.tau)->capture_default_str();
  d->add_option("--zeta0", denoise.zeta0)->capture_default_str();
  d->add_option("--zeta1", denoise.zeta1)->capture_default_str();
  d->add_option("--eta", denoise.eta)->capture_default_str();
  d->add_option("--out", denoise.out)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*s) {
      synth.dims = parse_dims(synth_dims);
      cmd_synth(synth, out);
      return kExitOk;
    }
    if (*v) return cmd_solve(solve, err);
    if (*p) {
      phase.dims = parse_dims(phase_dims);
      phase.ranks = parse_grid(r_grid);
      phase.alphas = parse_grid(alpha_grid);
      const auto cells = run_phase(phase);
      std::ofstream csv(phase_out);
      if (!csv) throw std::runtime_error("cannot open " + phase_out);
      write_phase_csv(csv, cells);
      out << "wrote " << cells.size() << " cells to " << phase_out << '\n';
      return kExitOk;
    }
    if (*l) return cmd_learn(learn, err);
    if (*d) return cmd_denoise(denoise, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace rtpca::cli
