#pragma once

#include <Eigen/Core>
#include <vector>

#include "rigforge/mesh.hpp"

namespace rigforge {

struct RigidTransform {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Vec3 translation = Vec3::Zero();
  double scale = 1.0;

  Vec3 apply(const Vec3& p) const { return scale * (rotation * p) + translation; }
  RigidTransform inverse() const;
  static RigidTransform identity() { return {}; }
};

struct AlignmentResult {
  RigidTransform transform;
  double rmse = 0.0;
};

// Least-squares rigid fit of source onto target (orthogonal Procrustes with
// SVD reflection fix). With with_scale, solves the similarity problem instead.
// Throws ValidationError(AlignmentDegenerate) for collinear/coincident sets.
AlignmentResult rigid_align(const std::vector<Vec3>& source,
                            const std::vector<Vec3>& target,
                            bool with_scale = false);

}  // namespace rigforge
