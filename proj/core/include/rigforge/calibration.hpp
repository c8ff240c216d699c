#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "rigforge/skinning.hpp"

namespace rigforge {

// Leaf joints spatially coincident with mesh vertices: entries (joint, vertex).
struct OverlapMap {
  std::vector<std::pair<int, int>> entries;
  double bind_tolerance = 1e-4;

  // Injective vertex mapping, leaf joints only, and the neutral-rig joint
  // positions within bind_tolerance of their vertices.
  void validate(const SkeletonRig& rig, const std::vector<Vec3>& neutral_vertices) const;
};

// L_v = sum_n ||v_n^current - v_n^target||^2
double vertex_loss(const std::vector<Vec3>& current,
                   const std::vector<Vec3>& target);

// L_s = sum_{i in Phi} ||s_i^current - v_{M(i)}^current||^2, where s_i is the
// current joint position and v_{M(i)} the current deformed vertex.
double overlap_loss(const std::vector<Transform>& pose,
                    const std::vector<Vec3>& deformed_vertices,
                    const OverlapMap& map);

struct CalibrationConfig {
  bool optimize_rotations = false;
  double learning_rate = 1e-2;
  int max_iterations = 2000;
  double rel_tol = 1e-6;
  double abs_floor = 1e-14;
  // Per-step translation displacement clamp (model units); guards against
  // exaggerated leaf excursions.
  double step_clamp = 0.02;
  // Halve a step that would increase the loss; keeps the trace non-increasing.
  bool line_search = true;
  uint64_t seed = 0;
};

struct CalibrationResult {
  SkeletonRig calibrated_rig;
  std::vector<Vec3> residual_blendshape;  // per-vertex, zero outside the mask
  // Skeleton-fit losses (what the optimizer minimized, before the residual
  // blendshape absorbs the remainder).
  double loss_vertex = 0.0;
  double loss_overlap = 0.0;
  double loss_total = 0.0;
  // L_v re-measured after applying the residual blendshape.
  double blended_loss_vertex = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> loss_trace;
};

// Leaf parameterization shared by the optimizer and the finite-difference
// oracle in tests: per leaf, 3 translation entries and (when rotations are
// optimized) 3 axis-angle increment entries, flattened in leaf order.
// Translations are absolute local values; rotation increments are applied as
// local.q * exp(r) and are evaluated around r = 0.
SkeletonRig apply_leaf_parameters(const SkeletonRig& rig,
                                  const std::vector<int>& leaves,
                                  const Eigen::VectorXd& params,
                                  bool with_rotations);

Eigen::VectorXd extract_leaf_parameters(const SkeletonRig& rig,
                                        const std::vector<int>& leaves,
                                        bool with_rotations);

double total_calibration_loss(const SkeletonRig& rig,
                              const SkinBinding& binding,
                              const std::vector<Vec3>& neutral_vertices,
                              const std::vector<Vec3>& target_vertices,
                              const OverlapMap& map);

// Analytic gradient of L_total with respect to the leaf parameter vector,
// evaluated at the rig's current locals (rotation increments at 0).
Eigen::VectorXd calibration_gradient(const SkeletonRig& rig,
                                     const SkinBinding& binding,
                                     const std::vector<Vec3>& neutral_vertices,
                                     const std::vector<Vec3>& target_vertices,
                                     const OverlapMap& map,
                                     const std::vector<int>& leaves,
                                     bool with_rotations);

// Two-step calibration: gradient descent (Adam) over leaf-node locals
// minimizing L_v + L_s, then a residual blendshape in neutral space that
// absorbs whatever the skeleton cannot express. residual_mask (optional,
// per-vertex) restricts the blendshape to the face region.
CalibrationResult calibrate_skeleton(const SkeletonRig& rig,
                                     const SkinBinding& binding,
                                     const Mesh& neutral_mesh,
                                     const Mesh& target_mesh,
                                     const OverlapMap& map,
                                     const CalibrationConfig& config,
                                     const std::vector<bool>& residual_mask = {});

}  // namespace rigforge
