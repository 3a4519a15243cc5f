#include "rtpca/solver.hpp"

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

SpectralTensor gram_inverse(const SpectralTensor& f, double tol, const char* name) {
  try {
    return spectral_inverse(spectral_product(f, f, Op::adjoint, Op::none), tol);
  } catch (const SingularSliceError& e) {
    throw RankCollapseError(e.slice(), name);
  }
}

std::size_t support_violations(const Tensor3& s, const Tensor3& s_star) {
  std::size_t n = 0;
  const auto a = s.data();
  const auto b = s_star.data();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != 0.0 && b[i] == 0.0) ++n;
  }
  return n;
}

double residual_ratio(const Tensor3& y, const Tensor3& x, const Tensor3& s,
                      double y_norm) {
  double sq = 0.0;
  const auto yd = y.data();
  const auto xd = x.data();
  const auto sd = s.data();
  for (std::size_t i = 0; i < yd.size(); ++i) {
    const double r = yd[i] - xd[i] - sd[i];
    sq += r * r;
  }
  return y_norm > 0.0 ? std::sqrt(sq) / y_norm : std::sqrt(sq);
}

IterationRecord make_record(std::size_t k, double zeta, const Tensor3& y,
                            const Tensor3& x, const Tensor3& s, double y_norm,
                            const GroundTruth* truth) {
  IterationRecord rec;
  rec.k = k;
  rec.zeta = zeta;
  rec.residual = residual_ratio(y, x, s, y_norm);
  if (truth) {
    rec.rse = rse(x, truth->x_star);
    rec.err_inf_x = max_abs_diff(x, truth->x_star);
    rec.err_inf_s = max_abs_diff(s, truth->s_star);
    rec.support_violations = support_violations(s, truth->s_star);
  } else {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    rec.rse = rec.err_inf_x = rec.err_inf_s = nan;
  }
  return rec;
}

// Scaled gradient step given the current X_k = L_k * R_k^T.
SgdState step_from(const SgdState& state, const Tensor3& x_k, const Tensor3& y,
                   const SgdConfig& cfg) {
  const SpectralTensor lh = fft_mode3(state.l);
  const SpectralTensor rh = fft_mode3(state.r);

  SgdState next;
  next.k = state.k + 1;
  next.s = soft_threshold(y - x_k, step_threshold(cfg, state.k));

  // E = X_k + S_{k+1} - Y
  Tensor3 e = x_k;
  e += next.s;
  e -= y;
  const SpectralTensor eh = fft_mode3(e);

  const SpectralTensor r_gram_inv = gram_inverse(rh, cfg.rank_tol, "R");
  const SpectralTensor l_gram_inv = gram_inverse(lh, cfg.rank_tol, "L");

  const SpectralTensor grad_l =
      spectral_product(spectral_product(eh, rh), r_gram_inv);
  const SpectralTensor grad_r =
      spectral_product(spectral_product(eh, lh, Op::adjoint, Op::none), l_gram_inv);

  SpectralTensor l_new(lh.dims());
  SpectralTensor r_new(rh.dims());
  for (std::size_t k = 0; k < lh.half_count(); ++k) {
    l_new.slice(k) = lh.slice(k) - cfg.eta * grad_l.slice(k);
    r_new.slice(k) = rh.slice(k) - cfg.eta * grad_r.slice(k);
  }
  l_new.mirror_upper_half();
  r_new.mirror_upper_half();
  next.l = ifft_mode3_half(l_new);
  next.r = ifft_mode3_half(r_new);
  return next;
}

}  // namespace

bool SgdConfig::theorem_mode() const noexcept {
  return eta >= 0.25 && eta <= 2.0 / 3.0 && std::abs(tau - (1.0 - 0.6 * eta)) < 1e-12;
}

void SgdConfig::validate() const {
  if (rank < 1) throw std::invalid_argument("SgdConfig: rank must be positive");
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw std::invalid_argument("SgdConfig: eta must lie in [0, 1]");
  }
  if (!(zeta0 >= 0.0) || !(zeta1 >= 0.0)) {
    throw std::invalid_argument("SgdConfig: thresholds must be nonnegative");
  }
  if (!(tau > 0.0 && tau < 1.0)) {
    throw std::invalid_argument("SgdConfig: tau must lie in (0, 1)");
  }
  if (!(rank_tol >= 0.0)) throw std::invalid_argument("SgdConfig: rank_tol < 0");
}

double step_threshold(const SgdConfig& cfg, std::size_t k) {
  return std::pow(cfg.tau, static_cast<double>(k)) * cfg.zeta1;
}

SgdState spectral_init(const Tensor3& y, const SgdConfig& cfg) {
  cfg.validate();
  SgdState st;
  st.s = soft_threshold(y, cfg.zeta0);
  LowRankFactors f = top_r_approx(y - st.s, cfg.rank);
  st.l = std::move(f.l);
  st.r = std::move(f.r);
  st.k = 0;
  return st;
}

SgdState sgd_step(const SgdState& state, const Tensor3& y, const SgdConfig& cfg) {
  if (state.l.n1() != y.n1() || state.r.n1() != y.n2() || state.l.n3() != y.n3()) {
    throw DimensionError("sgd_step: state does not match observation " +
                         to_string(y.dims()));
  }
  return step_from(state, state.x(), y, cfg);
}

SolveResult solve_sgd(const Tensor3& y, const SgdConfig& cfg) {
  const auto t_start = Clock::now();
  const GroundTruth* truth = cfg.truth.get();
  if (truth && (truth->x_star.dims() != y.dims() || truth->s_star.dims() != y.dims())) {
    throw DimensionError("solve_sgd: ground truth shape differs from observation");
  }
  const double y_norm = frobenius_norm(y);

  SolveTrace trace;
  trace.algorithm = "sgd";
  trace.theorem_mode = cfg.theorem_mode();

  OpCounts before = op_counts();
  auto t0 = Clock::now();
  SgdState state = spectral_init(y, cfg);
  Tensor3 x = state.x();
  {
    IterationRecord rec = make_record(0, cfg.zeta0, y, x, state.s, y_norm, truth);
    rec.ms = ms_since(t0);
    rec.ops = op_counts() - before;
    trace.iterations.push_back(rec);
  }

  for (std::size_t k = 0; k < cfg.iterations; ++k) {
    before = op_counts();
    t0 = Clock::now();
    const double zeta = step_threshold(cfg, state.k);
    state = step_from(state, x, y, cfg);
    x = state.x();
    const double step_ms = ms_since(t0);
    IterationRecord rec = make_record(state.k, zeta, y, x, state.s, y_norm, truth);
    rec.ms = step_ms;
    rec.ops = op_counts() - before;
    trace.iterations.push_back(rec);
    if (!x.all_finite() || !state.s.all_finite()) {
      throw std::runtime_error("solve_sgd: iterate became non-finite at step " +
                               std::to_string(state.k));
    }
    if (cfg.early_stop_residual > 0.0 && rec.residual < cfg.early_stop_residual) {
      trace.early_stopped = true;
      break;
    }
  }

  trace.iters = state.k;
  trace.rse_final = truth ? rse(x, truth->x_star) : std::numeric_limits<double>::quiet_NaN();
  trace.wall_ms = ms_since(t_start);
  return {std::move(x), std::move(state.s), std::move(trace)};
}

Schedule default_schedule(const LowRankStats& stats, double eta) {
  Schedule s;
  s.eta = eta;
  s.eta_in_theorem_range = eta >= 0.25 && eta <= 2.0 / 3.0;
  s.zeta0 = 1.5 * stats.x_inf;
  s.zeta1 = 3.0 / std::sqrt(static_cast<double>(stats.dims.n1) *
                            static_cast<double>(stats.dims.n2)) *
            stats.mu * static_cast<double>(stats.rank) * stats.sigma_min;
  s.tau = 1.0 - 0.6 * eta;
  return s;
}

namespace {

LowRankStats stats_from_factors(const TsvdFactors& f, std::size_t rank, Dims dims) {
  LowRankStats st;
  st.rank = rank;
  st.dims = dims;
  st.mu = incoherence_mu(f.u, f.v, rank);
  const double top = f.fourier_sigma.size() > 0 ? f.fourier_sigma.maxCoeff() : 0.0;
  double lo = top;
  for (Eigen::Index i = 0; i < f.fourier_sigma.size(); ++i) {
    const double v = f.fourier_sigma.data()[i];
    if (v > kRankTol * top) lo = std::min(lo, v);
  }
  st.sigma_min = lo;
  return st;
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  return *mid;
}

}  // namespace

LowRankStats measure_stats(const Tensor3& x_star, std::size_t rank) {
  const TsvdFactors f = tsvd(x_star, TsvdMode::skinny, rank);
  LowRankStats st = stats_from_factors(f, rank, x_star.dims());
  st.x_inf = inf_norm(x_star);
  return st;
}

LowRankStats estimate_stats(const Tensor3& y, std::size_t rank) {
  const LowRankFactors pre = top_r_approx(y, rank);
  const Tensor3 x0 = compose(pre);
  const TsvdFactors f = tsvd(x0, TsvdMode::skinny, rank);
  LowRankStats st = stats_from_factors(f, rank, y.dims());

  const Tensor3 resid = y - x0;
  std::vector<double> r(resid.data().begin(), resid.data().end());
  const double med = median_of(r);
  for (double& v : r) v = std::abs(v - med);
  const double robust_sd = 1.4826 * median_of(r);

  double x_inf = 0.0;
  const auto rd = resid.data();
  const auto xd = x0.data();
  for (std::size_t i = 0; i < rd.size(); ++i) {
    if (std::abs(rd[i] - med) <= 3.0 * robust_sd) x_inf = std::max(x_inf, std::abs(xd[i]));
  }
  st.x_inf = x_inf > 0.0 ? x_inf : inf_norm(x0);
  return st;
}

SgdConfig theorem_config(const LowRankStats& stats, double eta, std::size_t iterations) {
  const Schedule s = default_schedule(stats, eta);
  SgdConfig cfg;
  cfg.rank = stats.rank;
  cfg.iterations = iterations;
  cfg.eta = eta;
  cfg.zeta0 = s.zeta0;
  cfg.zeta1 = s.zeta1;
  cfg.tau = s.tau;
  return cfg;
}

}  // namespace rtpca
