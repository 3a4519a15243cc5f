#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "rtpca/tensor3.hpp"

namespace rtpca {

/// Default relative tolerance for rank decisions on Fourier singular values.
inline constexpr double kRankTol = 1e-10;

/// Work counters for Fourier-slice kernels. Kept per thread; solvers read
/// the difference around one iteration.
struct OpCounts {
  std::uint64_t slice_matmuls = 0;
  std::uint64_t matmul_flops = 0;  // sum of m*n*p over slice products
  std::uint64_t slice_svds = 0;
  std::uint64_t svd_flops = 0;  // sum of m*n*min(m, n) over slice SVDs
  std::uint64_t slice_inverses = 0;

  OpCounts& operator+=(const OpCounts& o);
  friend OpCounts operator-(OpCounts a, const OpCounts& b);
};

/// Counters of the calling thread.
OpCounts& op_counts() noexcept;

// ---------------------------------------------------------------------------
// Fourier-domain kernels. Each computes only the lower half of the spectrum
// and mirrors the rest.

enum class Op { none, adjoint };

/// Per-slice product op(A_k) * op(B_k).
SpectralTensor spectral_product(const SpectralTensor& a, const SpectralTensor& b,
                                Op op_a = Op::none, Op op_b = Op::none);

/// Per-slice inverse of a square spectrum. Throws SingularSliceError when a
/// slice has sigma_min <= tol * sigma_max.
SpectralTensor spectral_inverse(const SpectralTensor& a, double tol = 1e-12);

// ---------------------------------------------------------------------------
// t-product algebra.

/// t-product A * B computed slice-wise in the Fourier domain.
Tensor3 tprod(const Tensor3& a, const Tensor3& b);

/// t-product by direct circular convolution of tube fibers. O(I1 I2 J I3^2);
/// reference implementation for small inputs.
Tensor3 tprod_naive(const Tensor3& a, const Tensor3& b);

/// Tensor transpose: transpose every frontal slice, then reverse the order
/// of slices 2..I3.
Tensor3 conj_transpose(const Tensor3& a);

/// n x n x n3 tensor whose first frontal slice is the identity.
Tensor3 identity_tensor(std::size_t n, std::size_t n3);

/// Inverse under the t-product. Throws SingularSliceError naming the first
/// singular Fourier slice.
Tensor3 tinv(const Tensor3& a, double tol = 1e-12);

/// Tensor trace: trace of the first frontal slice, equal to the mean trace
/// of the Fourier slices.
double ttrace(const Tensor3& a);

// ---------------------------------------------------------------------------
// t-SVD.

enum class TsvdMode { full, skinny };

struct TsvdFactors {
  Tensor3 u;      // I1 x k x I3
  Tensor3 sigma;  // k x k x I3, f-diagonal
  Tensor3 v;      // I2 x k x I3
  TsvdMode mode = TsvdMode::full;
  /// Fourier singular values, k x I3; column i3 is the (sorted) diagonal of
  /// the i3-th Fourier slice of sigma.
  Eigen::MatrixXd fourier_sigma;

  std::size_t rank() const noexcept { return u.n2(); }
};

/// t-SVD. Full mode keeps k = min(I1, I2) components. Skinny mode keeps
/// k = `rank` components, or the tubal rank at kRankTol when rank == 0.
TsvdFactors tsvd(const Tensor3& a, TsvdMode mode = TsvdMode::full,
                 std::size_t rank = 0);

/// Singular values of every Fourier slice, min(I1, I2) x I3, each column
/// sorted descending.
Eigen::MatrixXd fourier_singular_values(const Tensor3& a);

/// Number of singular tubes above tol * sigma_max(A).
std::size_t tubal_rank(const Tensor3& a, double tol = kRankTol);

/// Rank of every Fourier slice at the same relative tolerance.
std::vector<std::size_t> multi_rank(const Tensor3& a, double tol = kRankTol);

/// Largest Fourier singular value.
double sigma_max(const Tensor3& a);

/// Smallest Fourier singular value above tol * sigma_max (0 for a zero
/// tensor).
double sigma_min(const Tensor3& a, double tol = kRankTol);

/// sigma_max / sigma_min.
double condition_number(const Tensor3& a, double tol = kRankTol);

struct LowRankFactors {
  Tensor3 l;  // I1 x R x I3
  Tensor3 r;  // I2 x R x I3
};

/// Top-R approximation: L = U_R * Sigma_R^(1/2), R = V_R * Sigma_R^(1/2), so
/// that L * R^T is the truncated t-SVD. Throws std::out_of_range unless
/// 1 <= R <= min(I1, I2).
LowRankFactors top_r_approx(const Tensor3& a, std::size_t rank);

/// L * R^T.
Tensor3 compose(const LowRankFactors& f);

/// Entrywise sign(a) * max(0, |a| - zeta).
Tensor3 soft_threshold(const Tensor3& a, double zeta);

/// Proximal operator of tau * TNN: every Fourier singular value is shrunk by
/// tau (the 1/I3 in the TNN cancels against the one in the Frobenius norm).
Tensor3 tsvt(const Tensor3& a, double tau);

}  // namespace rtpca
