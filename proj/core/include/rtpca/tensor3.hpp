#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rtpca/random.hpp"

namespace rtpca {

/// Shape (I1, I2, I3) of an order-3 tensor.
struct Dims {
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  std::size_t n3 = 0;

  std::size_t size() const noexcept { return n1 * n2 * n3; }
  auto operator<=>(const Dims&) const = default;
};

std::string to_string(const Dims& d);

/// Number of Fourier slices that carry independent information for a real
/// tube of length n3, i.e. ceil((n3 + 1) / 2). The remaining slices are
/// complex conjugates of these.
constexpr std::size_t half_spectrum_count(std::size_t n3) noexcept {
  return n3 / 2 + 1;
}

/// Index of the conjugate partner of Fourier slice k (zero based).
constexpr std::size_t mirror_index(std::size_t k, std::size_t n3) noexcept {
  return k == 0 ? 0 : n3 - k;
}

/// Dense real order-3 tensor.
///
/// Entries are stored with i1 fastest, then i2, then i3, so every frontal
/// slice A(:, :, i3) is a contiguous column-major I1 x I2 matrix.
class Tensor3 {
 public:
  using SliceMap = Eigen::Map<Eigen::MatrixXd>;
  using ConstSliceMap = Eigen::Map<const Eigen::MatrixXd>;

  Tensor3() = default;
  Tensor3(std::size_t n1, std::size_t n2, std::size_t n3);
  explicit Tensor3(Dims dims);
  Tensor3(Dims dims, std::vector<double> data);

  static Tensor3 zeros(Dims dims) { return Tensor3(dims); }
  static Tensor3 random_normal(Dims dims, Rng& rng);
  static Tensor3 random_uniform(Dims dims, Rng& rng, double lo = 0.0,
                                double hi = 1.0);

  const Dims& dims() const noexcept { return dims_; }
  std::size_t n1() const noexcept { return dims_.n1; }
  std::size_t n2() const noexcept { return dims_.n2; }
  std::size_t n3() const noexcept { return dims_.n3; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  std::size_t index(std::size_t i1, std::size_t i2,
                    std::size_t i3) const noexcept {
    return i1 + dims_.n1 * (i2 + dims_.n2 * i3);
  }
  double& operator()(std::size_t i1, std::size_t i2, std::size_t i3) noexcept {
    return data_[index(i1, i2, i3)];
  }
  double operator()(std::size_t i1, std::size_t i2,
                    std::size_t i3) const noexcept {
    return data_[index(i1, i2, i3)];
  }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  /// Frontal slice A(:, :, i3) as an I1 x I2 matrix view.
  SliceMap slice(std::size_t i3);
  ConstSliceMap slice(std::size_t i3) const;
  void set_slice(std::size_t i3, const Eigen::Ref<const Eigen::MatrixXd>& m);

  Tensor3& operator+=(const Tensor3& o);
  Tensor3& operator-=(const Tensor3& o);
  Tensor3& operator*=(double c);

  friend Tensor3 operator+(Tensor3 a, const Tensor3& b) { return a += b; }
  friend Tensor3 operator-(Tensor3 a, const Tensor3& b) { return a -= b; }
  friend Tensor3 operator*(Tensor3 a, double c) { return a *= c; }
  friend Tensor3 operator*(double c, Tensor3 a) { return a *= c; }
  friend Tensor3 operator-(Tensor3 a) { return a *= -1.0; }

  bool operator==(const Tensor3&) const = default;

  /// True when every entry is finite.
  bool all_finite() const noexcept;

 private:
  Dims dims_;
  std::vector<double> data_;
};

/// Full mode-3 discrete Fourier transform of a tensor: I3 complex I1 x I2
/// slices. Slices produced from a real tensor are conjugate symmetric.
class SpectralTensor {
 public:
  SpectralTensor() = default;
  explicit SpectralTensor(Dims dims);

  const Dims& dims() const noexcept { return dims_; }
  std::size_t n3() const noexcept { return dims_.n3; }
  std::size_t half_count() const noexcept {
    return half_spectrum_count(dims_.n3);
  }

  Eigen::MatrixXcd& slice(std::size_t k) { return slices_[k]; }
  const Eigen::MatrixXcd& slice(std::size_t k) const { return slices_[k]; }

  /// Overwrite the upper slices with conjugates of the lower half.
  void mirror_upper_half();

  /// Largest deviation from conjugate symmetry, max |A_k - conj(A_{n3-k})|.
  double symmetry_defect() const;

  /// Frobenius norm over all slices.
  double frobenius() const;

 private:
  Dims dims_;
  std::vector<Eigen::MatrixXcd> slices_;
};

/// Unnormalized DFT along mode 3. Only the first half_spectrum_count slices
/// are transformed; the rest are conjugate mirrored.
SpectralTensor fft_mode3(const Tensor3& a);

/// Inverse of fft_mode3 (carries the 1/I3 factor). Imaginary residue below
/// 1e-8 times the spectrum's Frobenius norm is discarded; anything larger
/// raises SymmetryError.
Tensor3 ifft_mode3(const SpectralTensor& s);

/// Inverse transform that reads only the lower half spectrum and assumes
/// conjugate symmetry for the rest. Used on spectra that are symmetric by
/// construction.
Tensor3 ifft_mode3_half(const SpectralTensor& s);

enum class NormKind { fro, inf, l2inf, l1inf, spectral, nuclear };

double norm(const Tensor3& a, NormKind kind);

double frobenius_norm(const Tensor3& a);
double inf_norm(const Tensor3& a);
/// Largest l2 norm over horizontal slices A(i1, :, :).
double l2inf_norm(const Tensor3& a);
/// Largest l1 norm over horizontal slices A(i1, :, :).
double l1inf_norm(const Tensor3& a);
/// Largest singular value over all Fourier slices (= ||bcirc(A)||_2).
double spectral_norm(const Tensor3& a);
/// Tensor nuclear norm: (1/I3) * sum of the nuclear norms of the Fourier
/// slices.
double nuclear_norm(const Tensor3& a);
/// Entrywise l1 sum.
double l1_norm(const Tensor3& a);

/// max |a - b| over all entries. Shapes must match.
double max_abs_diff(const Tensor3& a, const Tensor3& b);

/// ||a - b||_F / ||b||_F (0 when both are zero).
double relative_error(const Tensor3& a, const Tensor3& b);

/// Block circulant unfolding, (I1 I3) x (I2 I3). Small tensors only.
Eigen::MatrixXd bcirc(const Tensor3& a);

/// Number of nonzero entries.
std::size_t count_nonzeros(const Tensor3& a);

}  // namespace rtpca
