#include "rigforge/calibration.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <set>

#include "rigforge/error.hpp"

namespace rigforge {

namespace {

Eigen::Quaterniond axis_angle_exp(const Vec3& r) {
  const double angle = r.norm();
  if (angle < 1e-14) return Eigen::Quaterniond::Identity();
  return Eigen::Quaterniond(Eigen::AngleAxisd(angle, r / angle));
}

int params_per_leaf(bool with_rotations) { return with_rotations ? 6 : 3; }

}  // namespace

void OverlapMap::validate(const SkeletonRig& rig,
                          const std::vector<Vec3>& neutral_vertices) const {
  const auto pose = forward_kinematics(rig);
  std::set<int> seen_vertices;
  for (const auto& [joint, vertex] : entries) {
    if (joint < 0 || joint >= rig.joint_count()) {
      throw ValidationError(ErrorCode::MapError,
                            "overlap joint " + std::to_string(joint) +
                                " out of range");
    }
    if (vertex < 0 || vertex >= static_cast<int>(neutral_vertices.size())) {
      throw ValidationError(ErrorCode::MapError,
                            "overlap vertex " + std::to_string(vertex) +
                                " out of range");
    }
    if (!rig.is_leaf(joint)) {
      throw ValidationError(ErrorCode::MapError,
                            "overlap joint " + rig.nodes[joint].id +
                                " is not a leaf");
    }
    if (!seen_vertices.insert(vertex).second) {
      throw ValidationError(ErrorCode::MapError,
                            "overlap vertex map is not injective");
    }
    const double gap =
        (pose[joint].translation - neutral_vertices[vertex]).norm();
    if (gap > bind_tolerance) {
      throw ValidationError(ErrorCode::MapError,
                            "joint " + rig.nodes[joint].id + " sits " +
                                std::to_string(gap) +
                                " from its mapped vertex (tolerance " +
                                std::to_string(bind_tolerance) + ")");
    }
  }
}

double vertex_loss(const std::vector<Vec3>& current,
                   const std::vector<Vec3>& target) {
  if (current.size() != target.size()) {
    throw ValidationError(ErrorCode::InvalidTopology,
                          "vertex_loss: meshes have different vertex counts");
  }
  double loss = 0.0;
  for (size_t i = 0; i < current.size(); ++i) {
    loss += (current[i] - target[i]).squaredNorm();
  }
  return loss;
}

double overlap_loss(const std::vector<Transform>& pose,
                    const std::vector<Vec3>& deformed_vertices,
                    const OverlapMap& map) {
  double loss = 0.0;
  for (const auto& [joint, vertex] : map.entries) {
    if (joint < 0 || joint >= static_cast<int>(pose.size())) {
      throw ValidationError(ErrorCode::MapError,
                            "overlap joint absent from pose");
    }
    if (vertex < 0 || vertex >= static_cast<int>(deformed_vertices.size())) {
      throw ValidationError(ErrorCode::MapError,
                            "overlap vertex out of range");
    }
    loss +=
        (pose[joint].translation - deformed_vertices[vertex]).squaredNorm();
  }
  return loss;
}

SkeletonRig apply_leaf_parameters(const SkeletonRig& rig,
                                  const std::vector<int>& leaves,
                                  const Eigen::VectorXd& params,
                                  bool with_rotations) {
  const int per = params_per_leaf(with_rotations);
  if (params.size() != static_cast<int>(leaves.size()) * per) {
    throw ValidationError(ErrorCode::DimensionMismatch,
                          "leaf parameter vector has wrong length");
  }
  SkeletonRig out = rig;
  for (size_t k = 0; k < leaves.size(); ++k) {
    auto& node = out.nodes[leaves[k]];
    node.local.translation = params.segment<3>(per * k);
    if (with_rotations) {
      const Vec3 r = params.segment<3>(per * k + 3);
      node.local.rotation = (node.local.rotation * axis_angle_exp(r)).normalized();
    }
  }
  return out;
}

Eigen::VectorXd extract_leaf_parameters(const SkeletonRig& rig,
                                        const std::vector<int>& leaves,
                                        bool with_rotations) {
  const int per = params_per_leaf(with_rotations);
  Eigen::VectorXd params =
      Eigen::VectorXd::Zero(static_cast<int>(leaves.size()) * per);
  for (size_t k = 0; k < leaves.size(); ++k) {
    params.segment<3>(per * k) = rig.nodes[leaves[k]].local.translation;
    // rotation increments sit at 0 by construction
  }
  return params;
}

double total_calibration_loss(const SkeletonRig& rig,
                              const SkinBinding& binding,
                              const std::vector<Vec3>& neutral_vertices,
                              const std::vector<Vec3>& target_vertices,
                              const OverlapMap& map) {
  const auto pose = forward_kinematics(rig);
  const auto deformed = lbs_deform(neutral_vertices, binding, pose);
  return vertex_loss(deformed, target_vertices) +
         overlap_loss(pose, deformed, map);
}

Eigen::VectorXd calibration_gradient(const SkeletonRig& rig,
                                     const SkinBinding& binding,
                                     const std::vector<Vec3>& neutral_vertices,
                                     const std::vector<Vec3>& target_vertices,
                                     const OverlapMap& map,
                                     const std::vector<int>& leaves,
                                     bool with_rotations) {
  const int per = params_per_leaf(with_rotations);
  const int n_joints = rig.joint_count();

  std::vector<int> leaf_slot(n_joints, -1);
  for (size_t k = 0; k < leaves.size(); ++k) leaf_slot[leaves[k]] = static_cast<int>(k);

  const auto pose = forward_kinematics(rig);
  const auto deformed = lbs_deform(neutral_vertices, binding, pose);
  if (deformed.size() != target_vertices.size()) {
    throw ValidationError(ErrorCode::InvalidTopology,
                          "calibration target vertex count mismatch");
  }

  // Parent rotations and full joint rotations as matrices.
  std::vector<Eigen::Matrix3d> abs_rot(n_joints), parent_rot(n_joints);
  for (int j = 0; j < n_joints; ++j) {
    abs_rot[j] = pose[j].rotation.toRotationMatrix();
    const int p = rig.nodes[j].parent;
    parent_rot[j] =
        p < 0 ? Eigen::Matrix3d::Identity() : pose[p].rotation.toRotationMatrix();
  }

  // dL/dv' per vertex: the L_v term plus the mesh side of each L_s term.
  std::vector<Vec3> vgrad(deformed.size());
  for (size_t v = 0; v < deformed.size(); ++v) {
    vgrad[v] = 2.0 * (deformed[v] - target_vertices[v]);
  }
  Eigen::VectorXd grad =
      Eigen::VectorXd::Zero(static_cast<int>(leaves.size()) * per);
  for (const auto& [joint, vertex] : map.entries) {
    const Vec3 d = pose[joint].translation - deformed[vertex];
    vgrad[vertex] -= 2.0 * d;
    const int slot = leaf_slot[joint];
    if (slot >= 0) {
      // s_i = R_parent * t_local + t_parent
      grad.segment<3>(per * slot) += 2.0 * parent_rot[joint].transpose() * d;
    }
  }

  // Chain vgrad through the skinning of each optimized leaf.
  for (size_t v = 0; v < deformed.size(); ++v) {
    for (const auto& w : binding.weights[v]) {
      const int slot = leaf_slot[w.joint];
      if (slot < 0) continue;
      const Vec3 g = w.weight * (parent_rot[w.joint].transpose() * vgrad[v]);
      grad.segment<3>(per * slot) += g;
      if (with_rotations) {
        const Vec3 u =
            binding.rest_pose[w.joint].inverse().apply(neutral_vertices[v]);
        const Vec3 h = abs_rot[w.joint].transpose() * vgrad[v];
        // d(R*exp(r))u / dr_a at r=0 is R*(e_a x u)
        grad(per * slot + 3) += w.weight * h.dot(Vec3::UnitX().cross(u));
        grad(per * slot + 4) += w.weight * h.dot(Vec3::UnitY().cross(u));
        grad(per * slot + 5) += w.weight * h.dot(Vec3::UnitZ().cross(u));
      }
    }
  }
  return grad;
}

CalibrationResult calibrate_skeleton(const SkeletonRig& rig,
                                     const SkinBinding& binding,
                                     const Mesh& neutral_mesh,
                                     const Mesh& target_mesh,
                                     const OverlapMap& map,
                                     const CalibrationConfig& config,
                                     const std::vector<bool>& residual_mask) {
  if (neutral_mesh.vertex_count() != target_mesh.vertex_count()) {
    throw ValidationError(ErrorCode::InvalidTopology,
                          "neutral and target meshes must share topology");
  }
  binding.validate(neutral_mesh.vertex_count(), rig.joint_count());
  map.validate(rig, neutral_mesh.vertices);
  if (!residual_mask.empty() &&
      residual_mask.size() != neutral_mesh.vertices.size()) {
    throw ValidationError(ErrorCode::DimensionMismatch,
                          "residual mask length mismatch");
  }

  const auto& neutral = neutral_mesh.vertices;
  const auto& target = target_mesh.vertices;
  const std::vector<int> leaves = rig.leaf_indices();
  const bool rot = config.optimize_rotations;
  const int per = params_per_leaf(rot);
  const int dim = static_cast<int>(leaves.size()) * per;

  CalibrationResult result;
  result.calibrated_rig = rig;

  SkeletonRig current = rig;
  double loss = total_calibration_loss(current, binding, neutral, target, map);
  result.loss_trace.push_back(loss);

  // Adam over leaf locals; rotation increments re-anchor at 0 each step.
  Eigen::VectorXd m = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
  const double beta1 = 0.9, beta2 = 0.999, adam_eps = 1e-8;

  int iter = 0;
  long adam_t = 0;
  bool moments_fresh = true;
  bool converged = loss < config.abs_floor;
  while (!converged && iter < config.max_iterations) {
    ++iter;
    const Eigen::VectorXd grad = calibration_gradient(
        current, binding, neutral, target, map, leaves, rot);
    m = beta1 * m + (1.0 - beta1) * grad;
    v = beta2 * v + (1.0 - beta2) * grad.cwiseProduct(grad);
    ++adam_t;
    const double bc1 = 1.0 - std::pow(beta1, adam_t);
    const double bc2 = 1.0 - std::pow(beta2, adam_t);
    Eigen::VectorXd step =
        -config.learning_rate *
        (m / bc1).cwiseQuotient(((v / bc2).cwiseSqrt().array() + adam_eps).matrix());

    // per-leaf translation step clamp
    if (config.step_clamp > 0.0) {
      for (size_t k = 0; k < leaves.size(); ++k) {
        const double norm = step.segment<3>(per * k).norm();
        if (norm > config.step_clamp) {
          step.segment<3>(per * k) *= config.step_clamp / norm;
        }
      }
    }

    const Eigen::VectorXd base = extract_leaf_parameters(current, leaves, rot);
    double next_loss = loss;
    SkeletonRig next = current;
    double scale = 1.0;
    for (int halvings = 0;; ++halvings) {
      next = apply_leaf_parameters(current, leaves, base + scale * step, rot);
      next_loss = total_calibration_loss(next, binding, neutral, target, map);
      if (!config.line_search || next_loss <= loss || halvings >= 30) break;
      scale *= 0.5;
    }
    if (config.line_search && next_loss > loss) {
      if (!moments_fresh) {
        // momentum pointed uphill; restart Adam from the raw gradient
        m.setZero();
        v.setZero();
        adam_t = 0;
        moments_fresh = true;
        continue;
      }
      converged = true;  // even the plain gradient direction fails to descend
      break;
    }
    moments_fresh = false;

    const double prev = loss;
    current = next;
    loss = next_loss;
    result.loss_trace.push_back(loss);
    if (loss < config.abs_floor ||
        std::abs(prev - loss) <= config.rel_tol * std::max(prev, 1e-30)) {
      converged = true;
    }
  }

  result.calibrated_rig = current;
  result.iterations = iter;
  result.converged = converged;

  // Residual blendshape in neutral space: solve the per-vertex linear system
  // of the LBS map so that deforming (neutral + residual) lands on target.
  const auto pose = forward_kinematics(current);
  const auto deformed = lbs_deform(neutral, binding, pose);
  std::vector<Eigen::Matrix3d> skin_rot(pose.size());
  for (size_t j = 0; j < pose.size(); ++j) {
    skin_rot[j] = (pose[j] * binding.rest_pose[j].inverse())
                      .rotation.toRotationMatrix();
  }
  result.residual_blendshape.assign(neutral.size(), Vec3::Zero());
  for (size_t i = 0; i < neutral.size(); ++i) {
    if (!residual_mask.empty() && !residual_mask[i]) continue;
    Eigen::Matrix3d blend = Eigen::Matrix3d::Zero();
    for (const auto& w : binding.weights[i]) {
      blend += w.weight * skin_rot[w.joint];
    }
    result.residual_blendshape[i] =
        blend.colPivHouseholderQr().solve(target[i] - deformed[i]);
  }

  result.loss_vertex = vertex_loss(deformed, target);
  result.loss_overlap = overlap_loss(pose, deformed, map);
  result.loss_total = result.loss_vertex + result.loss_overlap;

  // L_v once the blendshape is applied to the neutral and re-skinned.
  std::vector<Vec3> blended = neutral;
  for (size_t i = 0; i < blended.size(); ++i) {
    blended[i] += result.residual_blendshape[i];
  }
  result.blended_loss_vertex =
      vertex_loss(lbs_deform(blended, binding, pose), target);
  return result;
}

}  // namespace rigforge
