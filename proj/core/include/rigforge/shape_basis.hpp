#pragma once

#include <vector>

#include "rigforge/mesh.hpp"

namespace rigforge {

// Linear shape basis over a vertex region: V[k] = base[k] + sum_i alpha_i * S_i[k].
struct ShapeBasisSet {
  std::vector<Vec3> base;                     // region base geometry
  std::vector<std::vector<Vec3>> bases;       // K displacement fields
  std::vector<double> coefficients;           // K scalars

  int basis_count() const { return static_cast<int>(bases.size()); }
  int region_vertex_count() const { return static_cast<int>(base.size()); }
  void validate() const;
};

// Evaluates the basis at its stored coefficients. Zero coefficients
// reproduce the base geometry bit-exactly.
std::vector<Vec3> apply_shape_basis(const ShapeBasisSet& basis);

std::vector<Vec3> apply_shape_basis(const ShapeBasisSet& basis,
                                    const std::vector<double>& coefficients);

}  // namespace rigforge
