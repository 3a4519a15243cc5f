#include "rtpca/errors.hpp"

#include <sstream>

namespace rtpca {

namespace {

std::string symmetry_message(double residue, double limit) {
  std::ostringstream os;
  os << "spectrum is not conjugate symmetric: imaginary residue " << residue
     << " exceeds " << limit;
  return os.str();
}

}  // namespace

SymmetryError::SymmetryError(double residue, double limit)
    : std::runtime_error(symmetry_message(residue, limit)), residue_(residue) {}

SingularSliceError::SingularSliceError(std::size_t slice, const std::string& what)
    : std::runtime_error(what + " (Fourier slice " + std::to_string(slice) + ")"),
      slice_(slice) {}

RankCollapseError::RankCollapseError(std::size_t slice, const std::string& factor)
    : SingularSliceError(slice, "rank collapse: Gram tensor of factor " + factor +
                                    " is singular") {}

}  // namespace rtpca
