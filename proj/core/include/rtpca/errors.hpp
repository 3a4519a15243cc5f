#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rtpca {

/// Operand shapes do not fit the requested operation.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A spectrum that should be conjugate symmetric is not.
class SymmetryError : public std::runtime_error {
 public:
  SymmetryError(double residue, double limit);

  double residue() const noexcept { return residue_; }

 private:
  double residue_;
};

/// A Fourier-domain slice that must be inverted is (numerically) singular.
class SingularSliceError : public std::runtime_error {
 public:
  SingularSliceError(std::size_t slice, const std::string& what);

  /// Zero-based frontal slice index in the Fourier domain.
  std::size_t slice() const noexcept { return slice_; }

 private:
  std::size_t slice_;
};

/// The Gram tensor of a factor lost rank during the scaled gradient updates.
class RankCollapseError : public SingularSliceError {
 public:
  RankCollapseError(std::size_t slice, const std::string& factor);
};

/// Malformed on-disk tensor or image data.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rtpca
