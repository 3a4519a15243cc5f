#include "rtpca/tlinalg.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "rtpca/errors.hpp"

namespace rtpca {

namespace {

using cd = std::complex<double>;
using Eigen::Index;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;

Index idx(std::size_t n) { return static_cast<Index>(n); }

bool is_real_slice(std::size_t k, std::size_t n3) {
  return k == 0 || (n3 % 2 == 0 && k == n3 / 2);
}

struct SliceSvd {
  MatrixXcd u;
  VectorXd s;
  MatrixXcd v;
};

// Thin SVD of one Fourier slice. The DC and Nyquist slices of a real tensor
// are real; decomposing them with the real SVD keeps the inverse transform of
// the factors real.
SliceSvd svd_slice(const MatrixXcd& m, bool real_slice, bool vectors) {
  auto& counts = op_counts();
  counts.slice_svds += 1;
  const auto mn = static_cast<std::uint64_t>(std::min(m.rows(), m.cols()));
  counts.svd_flops += static_cast<std::uint64_t>(m.rows()) *
                      static_cast<std::uint64_t>(m.cols()) * mn;
  SliceSvd out;
  const unsigned opts = vectors ? (Eigen::ComputeThinU | Eigen::ComputeThinV) : 0u;
  if (real_slice) {
    const MatrixXd r = m.real();
    Eigen::BDCSVD<MatrixXd> svd(r, opts);
    out.s = svd.singularValues();
    if (vectors) {
      out.u = svd.matrixU().cast<cd>();
      out.v = svd.matrixV().cast<cd>();
    }
  } else {
    Eigen::BDCSVD<MatrixXcd> svd(m, opts);
    out.s = svd.singularValues();
    if (vectors) {
      out.u = svd.matrixU();
      out.v = svd.matrixV();
    }
  }
  return out;
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw DimensionError(msg);
}

}  // namespace

OpCounts& OpCounts::operator+=(const OpCounts& o) {
  slice_matmuls += o.slice_matmuls;
  matmul_flops += o.matmul_flops;
  slice_svds += o.slice_svds;
  svd_flops += o.svd_flops;
  slice_inverses += o.slice_inverses;
  return *this;
}

OpCounts operator-(OpCounts a, const OpCounts& b) {
  a.slice_matmuls -= b.slice_matmuls;
  a.matmul_flops -= b.matmul_flops;
  a.slice_svds -= b.slice_svds;
  a.svd_flops -= b.svd_flops;
  a.slice_inverses -= b.slice_inverses;
  return a;
}

OpCounts& op_counts() noexcept {
  thread_local OpCounts counts;
  return counts;
}

SpectralTensor spectral_product(const SpectralTensor& a, const SpectralTensor& b,
                                Op op_a, Op op_b) {
  const Dims da = a.dims();
  const Dims db = b.dims();
  require(da.n3 == db.n3, "tprod: tube lengths differ (" + to_string(da) + " vs " +
                              to_string(db) + ")");
  const std::size_t rows = op_a == Op::none ? da.n1 : da.n2;
  const std::size_t inner_a = op_a == Op::none ? da.n2 : da.n1;
  const std::size_t inner_b = op_b == Op::none ? db.n1 : db.n2;
  const std::size_t cols = op_b == Op::none ? db.n2 : db.n1;
  require(inner_a == inner_b, "tprod: inner dimensions differ (" + to_string(da) +
                                  " vs " + to_string(db) + ")");

  SpectralTensor out(Dims{rows, cols, da.n3});
  auto& counts = op_counts();
  for (std::size_t k = 0; k < out.half_count(); ++k) {
    const MatrixXcd& x = a.slice(k);
    const MatrixXcd& y = b.slice(k);
    MatrixXcd& z = out.slice(k);
    if (op_a == Op::none && op_b == Op::none) {
      z.noalias() = x * y;
    } else if (op_a == Op::none) {
      z.noalias() = x * y.adjoint();
    } else if (op_b == Op::none) {
      z.noalias() = x.adjoint() * y;
    } else {
      z.noalias() = x.adjoint() * y.adjoint();
    }
    counts.slice_matmuls += 1;
    counts.matmul_flops += static_cast<std::uint64_t>(rows) * inner_a * cols;
  }
  out.mirror_upper_half();
  return out;
}

SpectralTensor spectral_inverse(const SpectralTensor& a, double tol) {
  const Dims d = a.dims();
  require(d.n1 == d.n2, "tinv: tensor is not square (" + to_string(d) + ")");
  SpectralTensor out(d);
  auto& counts = op_counts();
  for (std::size_t k = 0; k < out.half_count(); ++k) {
    const MatrixXcd& m = a.slice(k);
    if (m.size() > 0) {
      const VectorXd s = Eigen::JacobiSVD<MatrixXcd>(m).singularValues();
      const double smax = s(0);
      const double smin = s(s.size() - 1);
      if (!(smax > 0.0) || !(smin > tol * smax)) {
        throw SingularSliceError(k, "tinv: singular slice, sigma_min/sigma_max = " +
                                        std::to_string(smax > 0 ? smin / smax : 0.0));
      }
    }
    out.slice(k) = m.partialPivLu().inverse();
    if (is_real_slice(k, d.n3)) out.slice(k) = out.slice(k).real().cast<cd>();
    counts.slice_inverses += 1;
  }
  out.mirror_upper_half();
  return out;
}

Tensor3 tprod(const Tensor3& a, const Tensor3& b) {
  return ifft_mode3_half(spectral_product(fft_mode3(a), fft_mode3(b)));
}

Tensor3 tprod_naive(const Tensor3& a, const Tensor3& b) {
  require(a.n2() == b.n1() && a.n3() == b.n3(),
          "tprod_naive: incompatible shapes " + to_string(a.dims()) + " and " +
              to_string(b.dims()));
  const std::size_t n3 = a.n3();
  Tensor3 c(a.n1(), b.n2(), n3);
  for (std::size_t i = 0; i < a.n1(); ++i) {
    for (std::size_t j = 0; j < b.n2(); ++j) {
      for (std::size_t k = 0; k < a.n2(); ++k) {
        // circular convolution of tubes A(i,k,:) and B(k,j,:)
        for (std::size_t t = 0; t < n3; ++t) {
          double acc = 0.0;
          for (std::size_t s = 0; s < n3; ++s) {
            acc += a(i, k, s) * b(k, j, (t + n3 - s) % n3);
          }
          c(i, j, t) += acc;
        }
      }
    }
  }
  return c;
}

Tensor3 conj_transpose(const Tensor3& a) {
  const std::size_t n3 = a.n3();
  Tensor3 t(a.n2(), a.n1(), n3);
  for (std::size_t k = 0; k < n3; ++k) {
    t.slice(k) = a.slice(mirror_index(k, n3)).transpose();
  }
  return t;
}

Tensor3 identity_tensor(std::size_t n, std::size_t n3) {
  Tensor3 t(n, n, n3);
  for (std::size_t i = 0; i < n; ++i) t(i, i, 0) = 1.0;
  return t;
}

Tensor3 tinv(const Tensor3& a, double tol) {
  return ifft_mode3_half(spectral_inverse(fft_mode3(a), tol));
}

double ttrace(const Tensor3& a) {
  require(a.n1() == a.n2(), "ttrace: tensor is not square");
  double t = 0.0;
  for (std::size_t i = 0; i < a.n1(); ++i) t += a(i, i, 0);
  return t;
}

TsvdFactors tsvd(const Tensor3& a, TsvdMode mode, std::size_t rank) {
  const Dims d = a.dims();
  const std::size_t kmax = std::min(d.n1, d.n2);
  const SpectralTensor s = fft_mode3(a);
  const std::size_t half = s.half_count();

  std::vector<SliceSvd> parts(half);
  Eigen::MatrixXd fsig(idx(kmax), idx(d.n3));
  for (std::size_t k = 0; k < half; ++k) {
    parts[k] = svd_slice(s.slice(k), is_real_slice(k, d.n3), true);
    fsig.col(idx(k)) = parts[k].s;
  }
  for (std::size_t k = half; k < d.n3; ++k) {
    fsig.col(idx(k)) = fsig.col(idx(mirror_index(k, d.n3)));
  }

  std::size_t keep = kmax;
  if (mode == TsvdMode::skinny) {
    if (rank == 0) {
      const double top = fsig.size() > 0 ? fsig.maxCoeff() : 0.0;
      keep = 0;
      for (std::size_t i = 0; i < kmax; ++i) {
        if (fsig.row(idx(i)).maxCoeff() > kRankTol * top) keep = i + 1;
      }
    } else {
      if (rank > kmax) {
        throw std::out_of_range("tsvd: rank " + std::to_string(rank) +
                                " exceeds min(I1, I2) = " + std::to_string(kmax));
      }
      keep = rank;
    }
  }

  SpectralTensor su(Dims{d.n1, keep, d.n3});
  SpectralTensor ss(Dims{keep, keep, d.n3});
  SpectralTensor sv(Dims{d.n2, keep, d.n3});
  for (std::size_t k = 0; k < half; ++k) {
    su.slice(k) = parts[k].u.leftCols(idx(keep));
    sv.slice(k) = parts[k].v.leftCols(idx(keep));
    ss.slice(k) = parts[k].s.head(idx(keep)).cast<cd>().asDiagonal();
  }
  su.mirror_upper_half();
  ss.mirror_upper_half();
  sv.mirror_upper_half();

  TsvdFactors f;
  f.u = ifft_mode3_half(su);
  f.sigma = ifft_mode3_half(ss);
  f.v = ifft_mode3_half(sv);
  f.mode = mode;
  f.fourier_sigma = fsig.topRows(idx(keep));
  return f;
}

Eigen::MatrixXd fourier_singular_values(const Tensor3& a) {
  const Dims d = a.dims();
  const SpectralTensor s = fft_mode3(a);
  Eigen::MatrixXd out(idx(std::min(d.n1, d.n2)), idx(d.n3));
  for (std::size_t k = 0; k < s.half_count(); ++k) {
    out.col(idx(k)) = svd_slice(s.slice(k), is_real_slice(k, d.n3), false).s;
  }
  for (std::size_t k = s.half_count(); k < d.n3; ++k) {
    out.col(idx(k)) = out.col(idx(mirror_index(k, d.n3)));
  }
  return out;
}

namespace {

std::vector<std::size_t> ranks_from_sigma(const Eigen::MatrixXd& fsig, double tol) {
  std::vector<std::size_t> ranks(static_cast<std::size_t>(fsig.cols()), 0);
  if (fsig.size() == 0) return ranks;
  const double threshold = tol * fsig.maxCoeff();
  for (Index k = 0; k < fsig.cols(); ++k) {
    std::size_t r = 0;
    for (Index i = 0; i < fsig.rows(); ++i) {
      if (fsig(i, k) > threshold) ++r;
    }
    ranks[static_cast<std::size_t>(k)] = r;
  }
  return ranks;
}

}  // namespace

std::size_t tubal_rank(const Tensor3& a, double tol) {
  const auto ranks = multi_rank(a, tol);
  return ranks.empty() ? 0 : *std::max_element(ranks.begin(), ranks.end());
}

std::vector<std::size_t> multi_rank(const Tensor3& a, double tol) {
  if (tol < 0.0) throw std::invalid_argument("multi_rank: tol must be nonnegative");
  return ranks_from_sigma(fourier_singular_values(a), tol);
}

double sigma_max(const Tensor3& a) {
  const Eigen::MatrixXd fsig = fourier_singular_values(a);
  return fsig.size() > 0 ? fsig.maxCoeff() : 0.0;
}

double sigma_min(const Tensor3& a, double tol) {
  const Eigen::MatrixXd fsig = fourier_singular_values(a);
  if (fsig.size() == 0) return 0.0;
  const double threshold = tol * fsig.maxCoeff();
  double m = 0.0;
  bool found = false;
  for (Index i = 0; i < fsig.size(); ++i) {
    const double v = fsig.data()[i];
    if (v > threshold && (!found || v < m)) {
      m = v;
      found = true;
    }
  }
  return m;
}

double condition_number(const Tensor3& a, double tol) {
  const double lo = sigma_min(a, tol);
  return lo > 0.0 ? sigma_max(a) / lo : 0.0;
}

LowRankFactors top_r_approx(const Tensor3& a, std::size_t rank) {
  const Dims d = a.dims();
  const std::size_t kmax = std::min(d.n1, d.n2);
  if (rank < 1 || rank > kmax) {
    throw std::out_of_range("top_r_approx: rank " + std::to_string(rank) +
                            " outside [1, " + std::to_string(kmax) + "]");
  }
  const SpectralTensor s = fft_mode3(a);
  SpectralTensor sl(Dims{d.n1, rank, d.n3});
  SpectralTensor sr(Dims{d.n2, rank, d.n3});
  for (std::size_t k = 0; k < s.half_count(); ++k) {
    const SliceSvd p = svd_slice(s.slice(k), is_real_slice(k, d.n3), true);
    const Eigen::VectorXcd root = p.s.head(idx(rank)).cwiseSqrt().cast<cd>();
    sl.slice(k) = p.u.leftCols(idx(rank)) * root.asDiagonal();
    sr.slice(k) = p.v.leftCols(idx(rank)) * root.asDiagonal();
  }
  sl.mirror_upper_half();
  sr.mirror_upper_half();
  return {ifft_mode3_half(sl), ifft_mode3_half(sr)};
}

Tensor3 compose(const LowRankFactors& f) {
  return ifft_mode3_half(
      spectral_product(fft_mode3(f.l), fft_mode3(f.r), Op::none, Op::adjoint));
}

Tensor3 soft_threshold(const Tensor3& a, double zeta) {
  if (zeta < 0.0) throw std::invalid_argument("soft_threshold: zeta must be nonnegative");
  Tensor3 out(a.dims());
  const auto in = a.data();
  auto o = out.data();
  for (std::size_t i = 0; i < in.size(); ++i) {
    const double mag = std::abs(in[i]) - zeta;
    o[i] = mag > 0.0 ? std::copysign(mag, in[i]) : 0.0;
  }
  return out;
}

Tensor3 tsvt(const Tensor3& a, double tau) {
  if (tau < 0.0) throw std::invalid_argument("tsvt: tau must be nonnegative");
  const Dims d = a.dims();
  const SpectralTensor s = fft_mode3(a);
  SpectralTensor out(d);
  for (std::size_t k = 0; k < s.half_count(); ++k) {
    const SliceSvd p = svd_slice(s.slice(k), is_real_slice(k, d.n3), true);
    const Eigen::VectorXd shrunk = (p.s.array() - tau).max(0.0).matrix();
    Index keep = 0;
    while (keep < shrunk.size() && shrunk(keep) > 0.0) ++keep;
    if (keep == 0) continue;
    out.slice(k).noalias() = p.u.leftCols(keep) *
                             shrunk.head(keep).cast<cd>().asDiagonal() *
                             p.v.leftCols(keep).adjoint();
  }
  out.mirror_upper_half();
  return ifft_mode3_half(out);
}

}  // namespace rtpca
