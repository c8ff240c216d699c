#include "rigforge/skeleton.hpp"

#include <cmath>

#include "rigforge/error.hpp"

namespace rigforge {

int SkeletonRig::index_of(const std::string& id) const {
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].id == id) return static_cast<int>(i);
  }
  return -1;
}

bool SkeletonRig::is_leaf(int joint) const {
  for (const auto& node : nodes) {
    if (node.parent == joint) return false;
  }
  return true;
}

std::vector<int> SkeletonRig::leaf_indices() const {
  std::vector<bool> has_child(nodes.size(), false);
  for (const auto& node : nodes) {
    if (node.parent >= 0) has_child[node.parent] = true;
  }
  std::vector<int> leaves;
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (!has_child[i]) leaves.push_back(static_cast<int>(i));
  }
  return leaves;
}

void SkeletonRig::validate() const {
  if (nodes.empty()) {
    throw ValidationError(ErrorCode::InvalidTopology, "empty skeleton");
  }
  int roots = 0;
  for (size_t i = 0; i < nodes.size(); ++i) {
    const auto& node = nodes[i];
    if (node.parent < 0) {
      ++roots;
    } else if (node.parent >= static_cast<int>(i)) {
      // parent >= child breaks topological order and covers cycles
      throw ValidationError(ErrorCode::InvalidTopology,
                            "node " + node.id +
                                " appears before its parent (or forms a "
                                "cycle)");
    }
    if (std::abs(node.local.rotation.norm() - 1.0) > 1e-9) {
      throw ValidationError(ErrorCode::InvalidTopology,
                            "node " + node.id +
                                " has a non-unit rotation quaternion");
    }
  }
  if (roots != 1) {
    throw ValidationError(ErrorCode::InvalidTopology,
                          "skeleton must have exactly one root, found " +
                              std::to_string(roots));
  }
}

std::vector<Transform> forward_kinematics(const SkeletonRig& rig) {
  rig.validate();
  std::vector<Transform> abs(rig.nodes.size());
  for (size_t i = 0; i < rig.nodes.size(); ++i) {
    const auto& node = rig.nodes[i];
    abs[i] = node.parent < 0 ? node.local : abs[node.parent] * node.local;
  }
  return abs;
}

}  // namespace rigforge
