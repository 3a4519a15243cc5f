#include <glob.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "rtpca/admm.hpp"
#include "rtpca/cli.hpp"
#include "rtpca/errors.hpp"
#include "rtpca/io.hpp"
#include "rtpca/learn.hpp"
#include "rtpca/solver.hpp"
#include "rtpca/synth.hpp"
#include "rtpca/trace_json.hpp"

namespace rtpca::cli {

namespace {

void write_json(const fs::path& path, const nlohmann::json& j) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
}

nlohmann::json dims_json(const Dims& d) { return {d.n1, d.n2, d.n3}; }

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<fs::path> pgm_files(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".pgm") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace

Dims parse_dims(const std::string& text) {
  Dims d;
  char x1 = 0, x2 = 0;
  std::istringstream in(text);
  if (text.find('-') != std::string::npos || !(in >> d.n1 >> x1 >> d.n2 >> x2 >> d.n3) || x1 != 'x' || x2 != 'x' ||
      in.peek() != std::char_traits<char>::eof() || d.size() == 0) {
    throw std::invalid_argument("dims must look like 100x100x50, got '" + text + "'");
  }
  return d;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  if (text.empty()) return out;
  if (text.find(':') != std::string::npos) {
    double lo = 0, hi = 0, step = 0;
    char c1 = 0, c2 = 0;
    std::istringstream in(text);
    if (!(in >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' || !(step > 0.0)) {
      throw std::invalid_argument("grid must look like lo:hi:step, got '" + text + "'");
    }
    // index based so that 0.05:0.45:0.05 includes its end point
    const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    for (long i = 0; i <= n; ++i) out.push_back(lo + double(i) * step);
    return out;
  }
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad grid value '" + item + "'");
    out.push_back(v);
  }
  return out;
}

// ---------------------------------------------------------------------------

void cmd_synth(const SynthOptions& opts, std::ostream& log) {
  SynthSpec spec;
  spec.dims = opts.dims;
  spec.rank = opts.rank;
  spec.kappa = opts.kappa;
  spec.alpha = opts.alpha;
  spec.seed = opts.seed;
  const SynthInstance inst = make_instance(spec);

  fs::create_directories(opts.out);
  io::save_t3b(opts.out / "y.t3b", inst.y);
  io::save_t3b(opts.out / "x_star.t3b", inst.low_rank.x_star);
  io::save_t3b(opts.out / "s_star.t3b", inst.s_star);

  const LowRankStats st = measure_stats(inst.low_rank.x_star, spec.rank);
  nlohmann::json meta = {
      {"spec",
       {{"dims", dims_json(spec.dims)},
        {"rank", spec.rank},
        {"kappa", spec.kappa},
        {"alpha", spec.alpha},
        {"seed", spec.seed}}},
      {"measured",
       {{"mu", st.mu},
        {"alpha_t", sparsity_alpha_t(inst.s_star)},
        {"kappa", condition_number(inst.low_rank.x_star)},
        {"sigma_min", st.sigma_min},
        {"x_inf", st.x_inf},
        {"tubal_rank", tubal_rank(inst.low_rank.x_star)},
        {"nnz", count_nonzeros(inst.s_star)},
        {"theta", mean_abs_entry(inst.low_rank.x_star)}}},
  };
  write_json(opts.out / "meta.json", meta);
  log << "wrote " << to_string(spec.dims) << " instance to " << opts.out.string() << '\n';
}

// ---------------------------------------------------------------------------

int cmd_solve(const SolveOptions& opts, std::ostream& log) {
  const Tensor3 y = io::load_t3b(opts.in);
  std::shared_ptr<GroundTruth> truth;
  if (opts.truth) {
    const Tensor3 x_star = io::load_t3b(*opts.truth);
    if (x_star.dims() != y.dims()) throw DimensionError("truth shape differs from input");
    truth = std::make_shared<GroundTruth>(GroundTruth{x_star, y - x_star});
  }

  SolveResult res;
  nlohmann::json config;
  try {
    if (opts.algo == "sgd") {
      const LowRankStats st =
          truth ? measure_stats(truth->x_star, opts.rank) : estimate_stats(y, opts.rank);
      SgdConfig cfg = theorem_config(st, opts.eta, opts.iters);
      if (opts.tau) cfg.tau = *opts.tau;
      if (opts.zeta0) cfg.zeta0 = *opts.zeta0;
      if (opts.zeta1) cfg.zeta1 = *opts.zeta1;
      cfg.truth = truth;
      config = to_json(cfg);
      res = solve_sgd(y, cfg);
    } else if (opts.algo == "tnn") {
      AdmmConfig cfg;
      if (opts.lambda) cfg.lambda = *opts.lambda;
      cfg.max_iters = opts.iters;
      cfg.truth = truth;
      config = to_json(cfg, y.dims());
      res = solve_tnn_admm(y, cfg);
    } else {
      throw std::invalid_argument("unknown algorithm '" + opts.algo + "'");
    }
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception& e) {
    log << "solver error: " << e.what() << '\n';
    return kExitSolver;
  }

  fs::create_directories(opts.out);
  io::save_t3b(opts.out / "x.t3b", res.x);
  io::save_t3b(opts.out / "s.t3b", res.s);
  if (opts.report) write_json(*opts.report, trace_to_json(res.trace, config));
  log << opts.algo << ": " << res.trace.iters << " iterations";
  if (truth) log << ", rse " << res.trace.rse_final;
  log << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------

std::vector<PhaseCell> run_phase(const PhaseOptions& opts) {
  if (opts.algo != "sgd" && opts.algo != "tnn") {
    throw std::invalid_argument("unknown algorithm '" + opts.algo + "'");
  }
  struct Job {
    std::size_t cell;
    std::size_t trial;
  };
  std::vector<PhaseCell> cells;
  std::vector<std::uint64_t> cell_seed;
  for (std::size_t ri = 0; ri < opts.ranks.size(); ++ri) {
    for (std::size_t ai = 0; ai < opts.alphas.size(); ++ai) {
      const double r = opts.ranks[ri];
      if (!(r >= 1.0) || r != std::floor(r)) {
        throw std::invalid_argument("phase: ranks must be positive integers");
      }
      PhaseCell c;
      c.rank = static_cast<std::size_t>(r);
      c.alpha = opts.alphas[ai];
      cells.push_back(c);
      cell_seed.push_back(derive_seed(opts.seed, ri * 100003 + ai));
    }
  }
  std::vector<Job> jobs;
  for (std::size_t c = 0; c < cells.size(); ++c)
    for (std::size_t t = 0; t < opts.trials; ++t) jobs.push_back({c, t});

  std::vector<double> rses(jobs.size(), std::numeric_limits<double>::infinity());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      const PhaseCell& cell = cells[jobs[j].cell];
      try {
        SynthSpec spec;
        spec.dims = opts.dims;
        spec.rank = cell.rank;
        spec.kappa = opts.kappa;
        spec.alpha = cell.alpha;
        spec.seed = derive_seed(cell_seed[jobs[j].cell], jobs[j].trial);
        const SynthInstance inst = make_instance(spec);
        SolveResult res;
        if (opts.algo == "sgd") {
          SgdConfig cfg = theorem_config(measure_stats(inst.low_rank.x_star, cell.rank),
                                         opts.eta, opts.iters);
          if (opts.tau) cfg.tau = *opts.tau;
          res = solve_sgd(inst.y, cfg);
        } else {
          AdmmConfig cfg;
          res = solve_tnn_admm(inst.y, cfg);
        }
        const double e = rse(res.x, inst.low_rank.x_star);
        if (std::isfinite(e)) rses[j] = e;
      } catch (const std::exception&) {
        // counted as a failed trial
      }
    }
  };
  std::size_t n_threads = opts.threads ? opts.threads : std::thread::hardware_concurrency();
  n_threads = std::max<std::size_t>(1, std::min(n_threads, jobs.size()));
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
  }

  for (std::size_t c = 0; c < cells.size(); ++c) {
    std::vector<double> v(rses.begin() + static_cast<std::ptrdiff_t>(c * opts.trials),
                          rses.begin() + static_cast<std::ptrdiff_t>((c + 1) * opts.trials));
    const auto ok = std::count_if(v.begin(), v.end(),
                                  [&](double e) { return e <= opts.success_rse; });
    cells[c].median_rse = median(v);
    cells[c].success_fraction = v.empty() ? 0.0 : double(ok) / double(v.size());
  }
  return cells;
}

void write_phase_csv(std::ostream& out, const std::vector<PhaseCell>& cells) {
  out << "R,alpha,median_rse,success_fraction\n";
  for (const auto& c : cells) {
    out << c.rank << ',' << c.alpha << ',' << c.median_rse << ',' << c.success_fraction
        << '\n';
  }
}

// ---------------------------------------------------------------------------

std::vector<fs::path> expand_globs(const std::vector<std::string>& patterns) {
  std::set<fs::path> found;
  for (const auto& p : patterns) {
    glob_t g{};
    const int rc = ::glob(p.c_str(), 0, nullptr, &g);
    if (rc == 0) {
      for (std::size_t i = 0; i < g.gl_pathc; ++i) found.insert(g.gl_pathv[i]);
    }
    ::globfree(&g);
    if (rc != 0 && rc != GLOB_NOMATCH) throw std::runtime_error("glob failed for '" + p + "'");
  }
  return {found.begin(), found.end()};
}

int cmd_learn(const LearnOptions& opts, std::ostream& log) {
  const std::vector<fs::path> files = expand_globs(opts.train);
  if (files.empty()) throw std::invalid_argument("learn: --train matched no files");

  LearnConfig cfg;
  cfg.rank = opts.rank;
  cfg.epochs = opts.epochs;
  cfg.learn_rate = opts.lr;
  cfg.fd_step = opts.fd_step;
  cfg.k_unroll = opts.k_unroll;
  for (const auto& f : files) cfg.train_set.push_back(io::load_t3b(f));

  const double eta = opts.eta.value_or(0.5);
  const Schedule s = default_schedule(estimate_stats(cfg.train_set.front(), opts.rank), eta);
  SolverParams init{opts.zeta0.value_or(s.zeta0), opts.zeta1.value_or(s.zeta1),
                    opts.tau.value_or(s.tau), eta};
  cfg.raw = to_raw(init);

  const LearnResult res = train(cfg);
  nlohmann::json j = {
      {"zeta0", res.params.zeta0},
      {"zeta1", res.params.zeta1},
      {"tau", res.params.tau},
      {"eta", res.params.eta},
      {"raw", res.raw},
      {"loss_history", res.loss_history},
      {"best_loss", res.best_loss},
      {"best_epoch", res.best_epoch},
      {"aborted", res.aborted},
  };
  if (res.aborted) j["abort_reason"] = res.abort_reason;
  write_json(opts.out, j);
  log << "learned zeta0=" << res.params.zeta0 << " zeta1=" << res.params.zeta1
      << " tau=" << res.params.tau << " eta=" << res.params.eta << " (loss "
      << res.loss_history.front() << " -> " << res.best_loss << ")\n";
  if (res.aborted) log << "training stopped early: " << res.abort_reason << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------

int cmd_denoise(const DenoiseOptions& opts, std::ostream& log) {
  const std::vector<fs::path> files = pgm_files(opts.frames);
  if (files.empty()) throw std::invalid_argument("denoise: no .pgm frames in " + opts.frames.string());
  std::vector<io::GrayImage> frames;
  for (const auto& f : files) frames.push_back(io::load_pgm(f));
  const Tensor3 y = io::stack_frames(frames);

  SgdConfig cfg;
  cfg.rank = opts.rank;
  cfg.iterations = opts.iters;
  cfg.tau = opts.tau;
  cfg.zeta0 = opts.zeta0;
  cfg.zeta1 = opts.zeta1;
  cfg.eta = opts.eta;
  SolveResult res;
  try {
    res = solve_sgd(y, cfg);
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception& e) {
    log << "solver error: " << e.what() << '\n';
    return kExitSolver;
  }

  fs::create_directories(opts.out / "sparse");
  Tensor3 mag = res.s;
  for (double& v : mag.data()) v = std::abs(v);
  for (std::size_t k = 0; k < files.size(); ++k) {
    io::save_pgm(opts.out / files[k].filename(), io::frame_from_tensor(res.x, k));
    io::save_pgm(opts.out / "sparse" / files[k].filename(), io::frame_from_tensor(mag, k));
  }

  nlohmann::json report = {
      {"frames", files.size()},
      {"dims", dims_json(y.dims())},
      {"iters", res.trace.iters},
      {"config", to_json(cfg)},
  };
  if (opts.clean) {
    std::vector<io::GrayImage> clean;
    for (const auto& f : files) clean.push_back(io::load_pgm(*opts.clean / f.filename()));
    const Tensor3 ref = io::stack_frames(clean);
    if (ref.dims() != y.dims()) throw DimensionError("clean frames differ in size");
    nlohmann::json per_frame = nlohmann::json::array();
    double total = 0.0;
    for (std::size_t k = 0; k < files.size(); ++k) {
      Tensor3 a(y.n1(), y.n2(), 1), b(y.n1(), y.n2(), 1);
      a.set_slice(0, res.x.slice(k));
      b.set_slice(0, ref.slice(k));
      per_frame.push_back(psnr(a, b));
      total += per_frame.back().get<double>();
    }
    report["psnr"] = per_frame;
    report["mean_psnr"] = total / double(files.size());
    log << "PSNR " << report["mean_psnr"].get<double>() << " dB over " << files.size()
        << " frames\n";
  }
  write_json(opts.out / "report.json", report);
  log << "wrote " << files.size() << " frames to " << opts.out.string() << '\n';
  return kExitOk;
}

}  // namespace rtpca::cli
