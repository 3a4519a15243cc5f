#include "rtpca/tensor3.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include <unsupported/Eigen/FFT>

#include "rtpca/errors.hpp"

namespace rtpca {

namespace {

using cd = std::complex<double>;

void require_same_dims(const Tensor3& a, const Tensor3& b, const char* op) {
  if (a.dims() != b.dims()) {
    throw DimensionError(std::string(op) + ": shape mismatch " +
                         to_string(a.dims()) + " vs " + to_string(b.dims()));
  }
}

// Singular values of one Fourier slice. Slices 0 and n3/2 (even n3) of a
// real tensor are real, so they go through the real SVD.
Eigen::VectorXd slice_singular_values(const Eigen::MatrixXcd& m,
                                      bool real_slice) {
  if (m.size() == 0) return {};
  if (real_slice) {
    Eigen::MatrixXd r = m.real();
    return Eigen::BDCSVD<Eigen::MatrixXd>(r).singularValues();
  }
  return Eigen::BDCSVD<Eigen::MatrixXcd>(m).singularValues();
}

bool is_real_slice(std::size_t k, std::size_t n3) {
  return k == 0 || (n3 % 2 == 0 && k == n3 / 2);
}

// Weight of a lower-half slice when summing over the full spectrum.
double mirror_weight(std::size_t k, std::size_t n3) {
  return is_real_slice(k, n3) ? 1.0 : 2.0;
}

}  // namespace

std::string to_string(const Dims& d) {
  return std::to_string(d.n1) + "x" + std::to_string(d.n2) + "x" +
         std::to_string(d.n3);
}

Tensor3::Tensor3(std::size_t n1, std::size_t n2, std::size_t n3)
    : Tensor3(Dims{n1, n2, n3}) {}

Tensor3::Tensor3(Dims dims) : dims_(dims), data_(dims.size(), 0.0) {}

Tensor3::Tensor3(Dims dims, std::vector<double> data)
    : dims_(dims), data_(std::move(data)) {
  if (data_.size() != dims_.size()) {
    throw DimensionError("Tensor3: data length " +
                         std::to_string(data_.size()) + " does not match " +
                         to_string(dims_));
  }
}

Tensor3 Tensor3::random_normal(Dims dims, Rng& rng) {
  Tensor3 t(dims);
  for (double& x : t.data_) x = rng.normal();
  return t;
}

Tensor3 Tensor3::random_uniform(Dims dims, Rng& rng, double lo, double hi) {
  Tensor3 t(dims);
  for (double& x : t.data_) x = rng.uniform(lo, hi);
  return t;
}

Tensor3::SliceMap Tensor3::slice(std::size_t i3) {
  return SliceMap(data_.data() + i3 * dims_.n1 * dims_.n2,
                  static_cast<Eigen::Index>(dims_.n1),
                  static_cast<Eigen::Index>(dims_.n2));
}

Tensor3::ConstSliceMap Tensor3::slice(std::size_t i3) const {
  return ConstSliceMap(data_.data() + i3 * dims_.n1 * dims_.n2,
                       static_cast<Eigen::Index>(dims_.n1),
                       static_cast<Eigen::Index>(dims_.n2));
}

void Tensor3::set_slice(std::size_t i3,
                        const Eigen::Ref<const Eigen::MatrixXd>& m) {
  if (i3 >= dims_.n3) throw std::out_of_range("set_slice: slice index out of range");
  if (static_cast<std::size_t>(m.rows()) != dims_.n1 ||
      static_cast<std::size_t>(m.cols()) != dims_.n2) {
    throw DimensionError("set_slice: matrix shape does not match slice");
  }
  slice(i3) = m;
}

Tensor3& Tensor3::operator+=(const Tensor3& o) {
  require_same_dims(*this, o, "add");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

Tensor3& Tensor3::operator-=(const Tensor3& o) {
  require_same_dims(*this, o, "sub");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

Tensor3& Tensor3::operator*=(double c) {
  for (double& x : data_) x *= c;
  return *this;
}

bool Tensor3::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(),
                     [](double x) { return std::isfinite(x); });
}

SpectralTensor::SpectralTensor(Dims dims)
    : dims_(dims),
      slices_(dims.n3, Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dims.n1),
                                              static_cast<Eigen::Index>(dims.n2))) {}

void SpectralTensor::mirror_upper_half() {
  for (std::size_t k = half_count(); k < dims_.n3; ++k) {
    slices_[k] = slices_[mirror_index(k, dims_.n3)].conjugate();
  }
}

double SpectralTensor::symmetry_defect() const {
  double defect = 0.0;
  for (std::size_t k = 0; k < dims_.n3; ++k) {
    const auto& partner = slices_[mirror_index(k, dims_.n3)];
    if (slices_[k].size() == 0) continue;
    defect = std::max(defect,
                      (slices_[k] - partner.conjugate()).cwiseAbs().maxCoeff());
  }
  return defect;
}

double SpectralTensor::frobenius() const {
  double sq = 0.0;
  for (const auto& s : slices_) sq += s.squaredNorm();
  return std::sqrt(sq);
}

SpectralTensor fft_mode3(const Tensor3& a) {
  const Dims d = a.dims();
  SpectralTensor out(d);
  const std::size_t half = out.half_count();
  if (d.n3 == 1) {
    out.slice(0) = a.slice(0).cast<cd>();
    return out;
  }
  Eigen::FFT<double> fft;
  std::vector<double> tube(d.n3);
  std::vector<cd> spec(d.n3);
  const std::size_t stride = d.n1 * d.n2;
  const auto data = a.data();
  for (std::size_t j = 0; j < d.n2; ++j) {
    for (std::size_t i = 0; i < d.n1; ++i) {
      const std::size_t base = i + d.n1 * j;
      for (std::size_t t = 0; t < d.n3; ++t) tube[t] = data[base + t * stride];
      fft.fwd(spec.data(), tube.data(), static_cast<Eigen::Index>(d.n3));
      for (std::size_t k = 0; k < half; ++k) {
        out.slice(k)(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            spec[k];
      }
    }
  }
  // The DC and Nyquist bins of a real sequence are real; drop rounding noise.
  out.slice(0) = out.slice(0).real().cast<cd>();
  if (d.n3 % 2 == 0) out.slice(d.n3 / 2) = out.slice(d.n3 / 2).real().cast<cd>();
  out.mirror_upper_half();
  return out;
}

namespace {

Tensor3 inverse_transform(const SpectralTensor& s, bool use_half,
                          double* max_imag) {
  const Dims d = s.dims();
  Tensor3 out(d);
  double imag = 0.0;
  if (d.n3 == 1) {
    const auto& m = s.slice(0);
    out.slice(0) = m.real();
    if (m.size() > 0) imag = m.imag().cwiseAbs().maxCoeff();
    if (max_imag) *max_imag = imag;
    return out;
  }
  Eigen::FFT<double> fft;
  std::vector<cd> spec(d.n3), tube(d.n3);
  const std::size_t stride = d.n1 * d.n2;
  const std::size_t half = s.half_count();
  auto data = out.data();
  for (std::size_t j = 0; j < d.n2; ++j) {
    for (std::size_t i = 0; i < d.n1; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      const auto jj = static_cast<Eigen::Index>(j);
      if (use_half) {
        for (std::size_t k = 0; k < half; ++k) spec[k] = s.slice(k)(ii, jj);
        for (std::size_t k = half; k < d.n3; ++k) {
          spec[k] = std::conj(spec[mirror_index(k, d.n3)]);
        }
      } else {
        for (std::size_t k = 0; k < d.n3; ++k) spec[k] = s.slice(k)(ii, jj);
      }
      fft.inv(tube.data(), spec.data(), static_cast<Eigen::Index>(d.n3));
      const std::size_t base = i + d.n1 * j;
      for (std::size_t t = 0; t < d.n3; ++t) {
        data[base + t * stride] = tube[t].real();
        imag = std::max(imag, std::abs(tube[t].imag()));
      }
    }
  }
  if (max_imag) *max_imag = imag;
  return out;
}

}  // namespace

Tensor3 ifft_mode3(const SpectralTensor& s) {
  double imag = 0.0;
  Tensor3 out = inverse_transform(s, false, &imag);
  const double limit = 1e-8 * s.frobenius();
  if (imag > limit) throw SymmetryError(imag, limit);
  return out;
}

Tensor3 ifft_mode3_half(const SpectralTensor& s) {
  return inverse_transform(s, true, nullptr);
}

double frobenius_norm(const Tensor3& a) {
  double sq = 0.0;
  for (double x : a.data()) sq += x * x;
  return std::sqrt(sq);
}

double inf_norm(const Tensor3& a) {
  double m = 0.0;
  for (double x : a.data()) m = std::max(m, std::abs(x));
  return m;
}

double l1_norm(const Tensor3& a) {
  double s = 0.0;
  for (double x : a.data()) s += std::abs(x);
  return s;
}

namespace {

template <typename Accumulate>
double horizontal_slice_max(const Tensor3& a, Accumulate acc) {
  std::vector<double> rows(a.n1(), 0.0);
  const auto data = a.data();
  for (std::size_t idx = 0; idx < data.size(); ++idx) {
    rows[idx % a.n1()] += acc(data[idx]);
  }
  return rows.empty() ? 0.0 : *std::max_element(rows.begin(), rows.end());
}

}  // namespace

double l2inf_norm(const Tensor3& a) {
  return std::sqrt(horizontal_slice_max(a, [](double x) { return x * x; }));
}

double l1inf_norm(const Tensor3& a) {
  return horizontal_slice_max(a, [](double x) { return std::abs(x); });
}

double spectral_norm(const Tensor3& a) {
  const SpectralTensor s = fft_mode3(a);
  double m = 0.0;
  for (std::size_t k = 0; k < s.half_count(); ++k) {
    const auto sv = slice_singular_values(s.slice(k), is_real_slice(k, s.n3()));
    if (sv.size() > 0) m = std::max(m, sv(0));
  }
  return m;
}

double nuclear_norm(const Tensor3& a) {
  const SpectralTensor s = fft_mode3(a);
  double total = 0.0;
  for (std::size_t k = 0; k < s.half_count(); ++k) {
    const auto sv = slice_singular_values(s.slice(k), is_real_slice(k, s.n3()));
    total += mirror_weight(k, s.n3()) * sv.sum();
  }
  return s.n3() == 0 ? 0.0 : total / static_cast<double>(s.n3());
}

double norm(const Tensor3& a, NormKind kind) {
  switch (kind) {
    case NormKind::fro: return frobenius_norm(a);
    case NormKind::inf: return inf_norm(a);
    case NormKind::l2inf: return l2inf_norm(a);
    case NormKind::l1inf: return l1inf_norm(a);
    case NormKind::spectral: return spectral_norm(a);
    case NormKind::nuclear: return nuclear_norm(a);
  }
  return 0.0;
}

double max_abs_diff(const Tensor3& a, const Tensor3& b) {
  require_same_dims(a, b, "max_abs_diff");
  double m = 0.0;
  const auto x = a.data();
  const auto y = b.data();
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
  return m;
}

double relative_error(const Tensor3& a, const Tensor3& b) {
  require_same_dims(a, b, "relative_error");
  double num = 0.0, den = 0.0;
  const auto x = a.data();
  const auto y = b.data();
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += (x[i] - y[i]) * (x[i] - y[i]);
    den += y[i] * y[i];
  }
  if (den == 0.0) return num == 0.0 ? 0.0 : std::sqrt(num);
  return std::sqrt(num / den);
}

Eigen::MatrixXd bcirc(const Tensor3& a) {
  const Dims d = a.dims();
  const auto r = static_cast<Eigen::Index>(d.n1);
  const auto c = static_cast<Eigen::Index>(d.n2);
  Eigen::MatrixXd m(r * static_cast<Eigen::Index>(d.n3),
                    c * static_cast<Eigen::Index>(d.n3));
  // Block (p, q) holds frontal slice (p - q) mod I3.
  for (std::size_t p = 0; p < d.n3; ++p) {
    for (std::size_t q = 0; q < d.n3; ++q) {
      const std::size_t src = (p + d.n3 - q) % d.n3;
      m.block(static_cast<Eigen::Index>(p) * r, static_cast<Eigen::Index>(q) * c, r, c) =
          a.slice(src);
    }
  }
  return m;
}

std::size_t count_nonzeros(const Tensor3& a) {
  return static_cast<std::size_t>(
      std::count_if(a.data().begin(), a.data().end(), [](double x) { return x != 0.0; }));
}

}  // namespace rtpca
