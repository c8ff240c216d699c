#include "rigforge/shape_basis.hpp"

#include "rigforge/error.hpp"

namespace rigforge {

void ShapeBasisSet::validate() const {
  if (coefficients.size() != bases.size()) {
    throw ValidationError(ErrorCode::DimensionMismatch,
                          std::to_string(coefficients.size()) +
                              " coefficients for " +
                              std::to_string(bases.size()) + " bases");
  }
  for (const auto& field : bases) {
    if (field.size() != base.size()) {
      throw ValidationError(ErrorCode::DimensionMismatch,
                            "basis field vertex count does not match region");
    }
  }
}

std::vector<Vec3> apply_shape_basis(const ShapeBasisSet& basis,
                                    const std::vector<double>& coefficients) {
  if (coefficients.size() != basis.bases.size()) {
    throw ValidationError(ErrorCode::DimensionMismatch,
                          "coefficient count does not match basis count");
  }
  basis.validate();
  std::vector<Vec3> out = basis.base;
  for (size_t i = 0; i < coefficients.size(); ++i) {
    const double a = coefficients[i];
    if (a == 0.0) continue;
    const auto& field = basis.bases[i];
    for (size_t k = 0; k < out.size(); ++k) {
      out[k] += a * field[k];
    }
  }
  return out;
}

std::vector<Vec3> apply_shape_basis(const ShapeBasisSet& basis) {
  return apply_shape_basis(basis, basis.coefficients);
}

}  // namespace rigforge
