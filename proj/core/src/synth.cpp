#include "rtpca/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "rtpca/tlinalg.hpp"

namespace rtpca {

void SynthSpec::validate() const {
  if (dims.size() == 0) throw std::invalid_argument("SynthSpec: zero dimension");
  if (rank < 1 || rank > std::min(dims.n1, dims.n2)) {
    throw std::invalid_argument("SynthSpec: rank must lie in [1, min(I1, I2)]");
  }
  if (!(kappa >= 1.0)) throw std::invalid_argument("SynthSpec: kappa must be >= 1");
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("SynthSpec: alpha must lie in [0, 1)");
  }
}

LowRankInstance gen_lowrank(const SynthSpec& spec) {
  spec.validate();
  const Dims d = spec.dims;
  const std::size_t r = spec.rank;
  Rng rng(spec.seed);
  const Tensor3 lf = Tensor3::random_normal(Dims{d.n1, r, d.n3}, rng);
  const Tensor3 rf = Tensor3::random_normal(Dims{r, d.n2, d.n3}, rng);
  const TsvdFactors f = tsvd(tprod(lf, rf), TsvdMode::skinny, r);

  SpectralTensor sh(Dims{r, r, d.n3});
  const double floor_value = 1.0 / spec.kappa;
  for (std::size_t k = 0; k < sh.half_count(); ++k) {
    const double top = std::max(std::pow(0.5, static_cast<double>(k)), floor_value);
    for (std::size_t i = 0; i < r; ++i) {
      const double t = r == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(r - 1);
      const auto ii = static_cast<Eigen::Index>(i);
      sh.slice(k)(ii, ii) = top + t * (floor_value - top);
    }
  }
  sh.mirror_upper_half();

  LowRankInstance out;
  out.u = f.u;
  out.v = f.v;
  out.sigma = ifft_mode3_half(sh);
  out.x_star = tprod(tprod(out.u, out.sigma), conj_transpose(out.v));
  return out;
}

double mean_abs_entry(const Tensor3& x) {
  return x.size() == 0 ? 0.0 : l1_norm(x) / static_cast<double>(x.size());
}

Tensor3 gen_sparse(const Tensor3& x_star, double alpha, std::uint64_t seed) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("gen_sparse: alpha must lie in [0, 1)");
  }
  Tensor3 s(x_star.dims());
  const std::size_t n = s.size();
  const auto count = static_cast<std::size_t>(std::floor(alpha * static_cast<double>(n)));
  if (count == 0) return s;
  const double theta = mean_abs_entry(x_star);
  Rng rng(seed);
  // Partial Fisher-Yates: the first `count` entries are a uniform sample
  // without replacement.
  std::vector<std::size_t> pos(n);
  std::iota(pos.begin(), pos.end(), std::size_t{0});
  auto data = s.data();
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(pos[i], pos[j]);
    double v = rng.uniform(-theta, theta);
    while (v == 0.0) v = rng.uniform(-theta, theta);
    data[pos[i]] = v;
  }
  return s;
}

double incoherence_mu(const Tensor3& u, const Tensor3& v, std::size_t rank) {
  const double r = static_cast<double>(rank);
  const double lu = l2inf_norm(u);
  const double lv = l2inf_norm(v);
  return std::max(static_cast<double>(u.n1()) / r * lu * lu,
                  static_cast<double>(v.n1()) / r * lv * lv);
}

double sparsity_alpha_t(const Tensor3& s) {
  const Dims d = s.dims();
  if (d.size() == 0) return 0.0;
  std::vector<std::size_t> horiz(d.n1, 0), lat(d.n2, 0), front(d.n3, 0);
  for (std::size_t k = 0; k < d.n3; ++k) {
    for (std::size_t j = 0; j < d.n2; ++j) {
      for (std::size_t i = 0; i < d.n1; ++i) {
        if (s(i, j, k) != 0.0) {
          ++horiz[i];
          ++lat[j];
          ++front[k];
        }
      }
    }
  }
  auto frac = [](const std::vector<std::size_t>& c, std::size_t total) {
    return static_cast<double>(*std::max_element(c.begin(), c.end())) /
           static_cast<double>(total);
  };
  return std::max({frac(horiz, d.n2 * d.n3), frac(lat, d.n1 * d.n3),
                   frac(front, d.n1 * d.n2)});
}

double rse(const Tensor3& x, const Tensor3& x_star) { return relative_error(x, x_star); }

double psnr(const Tensor3& x, const Tensor3& x_star, double peak) {
  const double diff = max_abs_diff(x, x_star);
  if (diff == 0.0) return kPsnrCap;
  const double err = frobenius_norm(x - x_star);
  const double mse = err * err / static_cast<double>(x.size());
  return std::min(kPsnrCap, 10.0 * std::log10(peak * peak / mse));
}

SynthInstance make_instance(const SynthSpec& spec) {
  SynthInstance inst;
  inst.spec = spec;
  SynthSpec lr = spec;
  lr.seed = derive_seed(spec.seed, 0);
  inst.low_rank = gen_lowrank(lr);
  inst.s_star = gen_sparse(inst.low_rank.x_star, spec.alpha, derive_seed(spec.seed, 1));
  inst.y = inst.low_rank.x_star + inst.s_star;
  return inst;
}

}  // namespace rtpca
