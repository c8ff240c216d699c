#pragma once

#include <vector>

#include "rigforge/skeleton.hpp"

namespace rigforge {

struct VertexWeight {
  int joint = -1;
  double weight = 0.0;
};

// Linear-blend-skinning binding: sparse per-vertex joint weights plus the
// absolute joint transforms captured at bind time.
struct SkinBinding {
  std::vector<std::vector<VertexWeight>> weights;  // one list per vertex
  std::vector<Transform> rest_pose;                // one per joint

  // Weights non-negative, sum to 1 within 1e-6, joints in range, every
  // vertex bound.
  void validate(int vertex_count, int joint_count) const;
};

// v' = sum_j w_j * (pose_j * rest_j^-1)(v)
std::vector<Vec3> lbs_deform(const std::vector<Vec3>& rest_vertices,
                             const SkinBinding& binding,
                             const std::vector<Transform>& pose);

}  // namespace rigforge
