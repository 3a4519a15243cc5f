#pragma once

#include <cstddef>
#include <cstdint>

#include "rtpca/tensor3.hpp"

namespace rtpca {

/// Recipe for a synthetic low-rank plus sparse instance.
struct SynthSpec {
  Dims dims{100, 100, 50};
  std::size_t rank = 5;
  double kappa = 5.0;
  double alpha = 0.1;
  std::uint64_t seed = 1;

  void validate() const;
};

struct LowRankInstance {
  Tensor3 x_star;  // U * Sigma * V^T
  Tensor3 u;       // I1 x R x I3, orthogonal columns
  Tensor3 v;       // I2 x R x I3
  Tensor3 sigma;   // R x R x I3, f-diagonal
};

/// Tubal-rank-R tensor with condition number kappa.
///
/// Gaussian factors L (I1 x R x I3) and R (R x I2 x I3) give X0 = L * R, whose
/// skinny t-SVD supplies U and V. Fourier slice i3 of Sigma (for i3 up to
/// ceil((I3+1)/2), zero based k = i3 - 1) has a diagonal linearly spaced from
/// max(2^-k, 1/kappa) down to 1/kappa; the upper slices are conjugate
/// mirrors.
LowRankInstance gen_lowrank(const SynthSpec& spec);

/// floor(alpha * I1 I2 I3) nonzeros at uniformly sampled positions, values
/// uniform on [-theta, theta] with theta = ||X*||_1 / (I1 I2 I3).
Tensor3 gen_sparse(const Tensor3& x_star, double alpha, std::uint64_t seed);

/// Mean absolute entry of x.
double mean_abs_entry(const Tensor3& x);

/// Smallest mu with ||U||_{2,inf}^2 <= mu R / I1 and ||V||_{2,inf}^2 <= mu R / I2.
double incoherence_mu(const Tensor3& u, const Tensor3& v, std::size_t rank);

/// Largest fraction of nonzeros over all horizontal, lateral and frontal
/// slices.
double sparsity_alpha_t(const Tensor3& s);

/// ||x - x_star||_F / ||x_star||_F.
double rse(const Tensor3& x, const Tensor3& x_star);

inline constexpr double kPsnrCap = 999.0;

/// 10 log10(peak^2 / MSE), capped at kPsnrCap for an exact match.
double psnr(const Tensor3& x, const Tensor3& x_star, double peak = 1.0);

struct SynthInstance {
  SynthSpec spec;
  LowRankInstance low_rank;
  Tensor3 s_star;
  Tensor3 y;
};

/// gen_lowrank + gen_sparse with stream seeds derived from spec.seed.
SynthInstance make_instance(const SynthSpec& spec);

}  // namespace rtpca
