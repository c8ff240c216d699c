#include "rigforge/skinning.hpp"

#include <cmath>

#include "rigforge/error.hpp"

namespace rigforge {

void SkinBinding::validate(int vertex_count, int joint_count) const {
  if (static_cast<int>(weights.size()) != vertex_count) {
    throw ValidationError(ErrorCode::BindingError,
                          "binding covers " + std::to_string(weights.size()) +
                              " vertices, mesh has " +
                              std::to_string(vertex_count));
  }
  if (static_cast<int>(rest_pose.size()) != joint_count) {
    throw ValidationError(ErrorCode::BindingError,
                          "rest pose joint count mismatch");
  }
  for (size_t v = 0; v < weights.size(); ++v) {
    if (weights[v].empty()) {
      throw ValidationError(ErrorCode::BindingError,
                            "vertex " + std::to_string(v) + " is unbound");
    }
    double sum = 0.0;
    for (const auto& w : weights[v]) {
      if (w.joint < 0 || w.joint >= joint_count) {
        throw ValidationError(ErrorCode::BindingError,
                              "vertex " + std::to_string(v) +
                                  " references unknown joint " +
                                  std::to_string(w.joint));
      }
      if (w.weight < 0.0) {
        throw ValidationError(ErrorCode::BindingError,
                              "negative skin weight on vertex " +
                                  std::to_string(v));
      }
      sum += w.weight;
    }
    if (std::abs(sum - 1.0) > 1e-6) {
      throw ValidationError(ErrorCode::BindingError,
                            "weights on vertex " + std::to_string(v) +
                                " sum to " + std::to_string(sum));
    }
  }
}

std::vector<Vec3> lbs_deform(const std::vector<Vec3>& rest_vertices,
                             const SkinBinding& binding,
                             const std::vector<Transform>& pose) {
  if (pose.size() != binding.rest_pose.size()) {
    throw ValidationError(ErrorCode::BindingError,
                          "pose does not cover every bound joint");
  }
  binding.validate(static_cast<int>(rest_vertices.size()),
                   static_cast<int>(pose.size()));

  // pose_j * rest_j^-1 per joint, precomposed once
  std::vector<Transform> skin(pose.size());
  for (size_t j = 0; j < pose.size(); ++j) {
    skin[j] = pose[j] * binding.rest_pose[j].inverse();
  }

  std::vector<Vec3> out(rest_vertices.size());
  for (size_t v = 0; v < rest_vertices.size(); ++v) {
    Vec3 acc = Vec3::Zero();
    for (const auto& w : binding.weights[v]) {
      acc += w.weight * skin[w.joint].apply(rest_vertices[v]);
    }
    out[v] = acc;
  }
  return out;
}

}  // namespace rigforge
