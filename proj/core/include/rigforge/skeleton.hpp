#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <string>
#include <vector>

#include "rigforge/mesh.hpp"

namespace rigforge {

// Rigid transform as unit quaternion + translation. Composition order matches
// matrix convention: (a * b).apply(p) == a.apply(b.apply(p)).
struct Transform {
  Eigen::Quaterniond rotation = Eigen::Quaterniond::Identity();
  Vec3 translation = Vec3::Zero();

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }

  Transform operator*(const Transform& other) const {
    Transform out;
    out.rotation = rotation * other.rotation;
    out.translation = rotation * other.translation + translation;
    return out;
  }

  Transform inverse() const {
    Transform out;
    out.rotation = rotation.conjugate();
    out.translation = -(out.rotation * translation);
    return out;
  }

  static Transform identity() { return {}; }
};

struct SkeletonNode {
  std::string id;
  int parent = -1;  // -1 for the root
  Transform local;
};

// Hierarchical, loop-free joint tree. Nodes are stored topologically:
// parent index < child index.
struct SkeletonRig {
  std::vector<SkeletonNode> nodes;

  int joint_count() const { return static_cast<int>(nodes.size()); }
  int index_of(const std::string& id) const;
  bool is_leaf(int joint) const;
  std::vector<int> leaf_indices() const;

  // Exactly one root, parent < child, unit quaternions within 1e-9.
  void validate() const;
};

// Absolute transform per joint: abs(root) = local(root),
// abs(child) = abs(parent) * local(child).
std::vector<Transform> forward_kinematics(const SkeletonRig& rig);

}  // namespace rigforge
