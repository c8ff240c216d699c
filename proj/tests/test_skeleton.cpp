#include <doctest.h>

#include "test_util.hpp"

#include <Eigen/Geometry>
#include <cmath>
#include <random>

#include "rigforge/calibration.hpp"
#include "rigforge/error.hpp"
#include "rigforge/synthetic.hpp"

using namespace rigforge;

namespace {

SkeletonRig two_joint_chain(const Transform& parent_local,
                            const Transform& child_local) {
  SkeletonRig rig;
  rig.nodes.push_back({"root", -1, parent_local});
  rig.nodes.push_back({"child", 0, child_local});
  return rig;
}

}  // namespace

TEST_CASE("forward_kinematics: identity locals give identity absolutes") {
  SkeletonRig rig;
  rig.nodes.push_back({"a", -1, Transform::identity()});
  rig.nodes.push_back({"b", 0, Transform::identity()});
  rig.nodes.push_back({"c", 1, Transform::identity()});
  const auto pose = forward_kinematics(rig);
  for (const auto& t : pose) {
    CHECK(t.translation.norm() == 0.0);
    CHECK(t.rotation.isApprox(Eigen::Quaterniond::Identity()));
  }
}

TEST_CASE("forward_kinematics: translations accumulate along a chain") {
  Transform parent, child;
  parent.translation = Vec3(1, 0, 0);
  child.translation = Vec3(1, 0, 0);
  const auto pose = forward_kinematics(two_joint_chain(parent, child));
  CHECK((pose[1].translation - Vec3(2, 0, 0)).norm() < 1e-15);
}

TEST_CASE("forward_kinematics: parent rotation turns the child offset") {
  Transform parent, child;
  parent.rotation = Eigen::Quaterniond(Eigen::AngleAxisd(M_PI / 2, Vec3::UnitZ()));
  child.translation = Vec3(1, 0, 0);
  const auto pose = forward_kinematics(two_joint_chain(parent, child));
  CHECK((pose[1].translation - Vec3(0, 1, 0)).norm() < 1e-12);
}

TEST_CASE("forward_kinematics: flattened identity-rotation chain sums offsets") {
  SkeletonRig rig;
  Vec3 expect = Vec3::Zero();
  for (int j = 0; j < 6; ++j) {
    Transform local;
    local.translation = Vec3(0.1 * j, 0.2, -0.05 * j);
    expect += local.translation;
    rig.nodes.push_back({"j" + std::to_string(j), j - 1, local});
  }
  const auto pose = forward_kinematics(rig);
  CHECK((pose.back().translation - expect).norm() < 1e-12);
}

TEST_CASE("rig validation catches structural problems") {
  SkeletonRig two_roots;
  two_roots.nodes.push_back({"a", -1, {}});
  two_roots.nodes.push_back({"b", -1, {}});
  CHECK_THROWS_AS(two_roots.validate(), ValidationError);

  SkeletonRig bad_order;
  bad_order.nodes.push_back({"a", 1, {}});
  bad_order.nodes.push_back({"b", -1, {}});
  CHECK_THROWS_AS(bad_order.validate(), ValidationError);

  SkeletonRig bad_quat;
  bad_quat.nodes.push_back({"a", -1, {}});
  bad_quat.nodes[0].local.rotation.coeffs() *= 1.5;
  CHECK_THROWS_AS(bad_quat.validate(), ValidationError);
}

TEST_CASE("lbs_deform: bind pose reproduces the rest mesh exactly") {
  const auto fx = make_calibration_fixture(11);
  const auto pose = forward_kinematics(fx.rig);
  const auto deformed = lbs_deform(fx.neutral.vertices, fx.binding, pose);
  for (size_t v = 0; v < deformed.size(); ++v) {
    CHECK((deformed[v] - fx.neutral.vertices[v]).norm() < 1e-12);
  }
}

TEST_CASE("lbs_deform: single-joint rigid translation moves all vertices") {
  SkeletonRig rig;
  rig.nodes.push_back({"only", -1, {}});
  SkinBinding binding;
  binding.rest_pose = forward_kinematics(rig);
  std::vector<Vec3> verts = {{0, 0, 0}, {1, 2, 3}, {-1, 0.5, 4}};
  binding.weights.assign(verts.size(), {{0, 1.0}});

  auto posed = rig;
  posed.nodes[0].local.translation = Vec3(0, 0, 5);
  const auto deformed = lbs_deform(verts, binding, forward_kinematics(posed));
  for (size_t v = 0; v < verts.size(); ++v) {
    CHECK((deformed[v] - (verts[v] + Vec3(0, 0, 5))).norm() < 1e-15);
  }
}

TEST_CASE("lbs_deform: half/half weights average joint motions") {
  SkeletonRig rig;
  rig.nodes.push_back({"root", -1, {}});
  rig.nodes.push_back({"moving", 0, {}});
  SkinBinding binding;
  binding.rest_pose = forward_kinematics(rig);
  std::vector<Vec3> verts = {{0.5, 0, 0}};
  binding.weights = {{{0, 0.5}, {1, 0.5}}};

  auto posed = rig;
  posed.nodes[1].local.translation = Vec3(2, 0, 0);
  const auto deformed = lbs_deform(verts, binding, forward_kinematics(posed));
  CHECK((deformed[0] - Vec3(1.5, 0, 0)).norm() < 1e-15);
}

TEST_CASE("binding validation enforces the weight contract") {
  SkinBinding b;
  b.rest_pose.resize(1);
  b.weights = {{{0, 1.0}}};
  CHECK_NOTHROW(b.validate(1, 1));
  b.weights = {{{0, 0.5}}};  // sums to 0.5
  CHECK_THROWS_AS(b.validate(1, 1), ValidationError);
  b.weights = {{{0, 1.5}, {0, -0.5}}};  // negative weight
  CHECK_THROWS_AS(b.validate(1, 1), ValidationError);
  b.weights = {{{3, 1.0}}};  // joint out of range
  CHECK_THROWS_AS(b.validate(1, 1), ValidationError);
  b.weights = {};  // unbound vertex
  CHECK_THROWS_AS(b.validate(1, 1), ValidationError);
}

TEST_CASE("vertex_loss matches closed forms") {
  std::vector<Vec3> a = {{0, 0, 0}, {1, 1, 1}, {2, 2, 2}};
  CHECK(vertex_loss(a, a) == 0.0);

  auto b = a;
  b[1] += Vec3(3, 4, 0);
  CHECK(vertex_loss(a, b) == doctest::Approx(25.0).epsilon(1e-15));

  const Vec3 d(0.1, -0.2, 0.3);
  std::vector<Vec3> c;
  for (const auto& p : a) c.push_back(p + d);
  CHECK(vertex_loss(a, c) ==
        doctest::Approx(3.0 * d.squaredNorm()).epsilon(1e-12));

  std::vector<Vec3> shorter = {{0, 0, 0}};
  CHECK_THROWS_AS(vertex_loss(a, shorter), ValidationError);
}

TEST_CASE("overlap_loss matches closed forms") {
  std::vector<Transform> pose(2);
  pose[1].translation = Vec3(1, 0, 0);
  std::vector<Vec3> verts = {{1, 0, 0}};
  OverlapMap map;
  map.entries = {{1, 0}};
  CHECK(overlap_loss(pose, verts, map) == 0.0);

  pose[1].translation = Vec3(1, 0.1, 0);
  CHECK(overlap_loss(pose, verts, map) == doctest::Approx(0.01).epsilon(1e-12));

  OverlapMap empty;
  CHECK(overlap_loss(pose, verts, empty) == 0.0);

  OverlapMap bad;
  bad.entries = {{5, 0}};
  CHECK_THROWS_AS(overlap_loss(pose, verts, bad), ValidationError);
}

TEST_CASE("overlap map validation: leaves only, injective, bind tolerance") {
  const auto fx = make_calibration_fixture(3);
  CHECK_NOTHROW(fx.overlap.validate(fx.rig, fx.neutral.vertices));

  auto non_leaf = fx.overlap;
  non_leaf.entries[0].first = 0;  // root is not a leaf
  CHECK_THROWS_AS(non_leaf.validate(fx.rig, fx.neutral.vertices),
                  ValidationError);

  auto dup = fx.overlap;
  dup.entries[1].second = dup.entries[0].second;
  CHECK_THROWS_AS(dup.validate(fx.rig, fx.neutral.vertices), ValidationError);

  auto gap = fx.overlap;
  auto shifted = fx.neutral.vertices;
  shifted[gap.entries[0].second] += Vec3(0.01, 0, 0);
  CHECK_THROWS_AS(gap.validate(fx.rig, shifted), ValidationError);
}

TEST_CASE("calibration gradient matches central finite differences") {
  // relative error < 1e-4 per parameter, h = 1e-5, over 10 seeded rigs
  for (uint64_t seed = 0; seed < 10; ++seed) {
    auto fx = make_calibration_fixture(seed, 0.05, seed % 2 == 1);
    const bool with_rot = seed % 3 == 0;
    const auto leaves = fx.rig.leaf_indices();

    // evaluate away from the optimum so gradients are non-trivial
    std::mt19937_64 gen(seed * 77 + 5);
    std::uniform_real_distribution<double> jitter(-0.03, 0.03);
    Eigen::VectorXd params =
        extract_leaf_parameters(fx.rig, leaves, with_rot);
    for (int i = 0; i < params.size(); ++i) params[i] += jitter(gen);
    const auto rig = apply_leaf_parameters(fx.rig, leaves, params, with_rot);

    const auto analytic =
        calibration_gradient(rig, fx.binding, fx.neutral.vertices,
                             fx.target.vertices, fx.overlap, leaves, with_rot);

    const double h = 1e-5;
    const Eigen::VectorXd base =
        extract_leaf_parameters(rig, leaves, with_rot);
    for (int i = 0; i < base.size(); ++i) {
      Eigen::VectorXd plus = base, minus = base;
      plus[i] += h;
      minus[i] -= h;
      const double fp = total_calibration_loss(
          apply_leaf_parameters(rig, leaves, plus, with_rot), fx.binding,
          fx.neutral.vertices, fx.target.vertices, fx.overlap);
      const double fm = total_calibration_loss(
          apply_leaf_parameters(rig, leaves, minus, with_rot), fx.binding,
          fx.neutral.vertices, fx.target.vertices, fx.overlap);
      const double fd = (fp - fm) / (2.0 * h);
      const double scale = std::max({std::abs(fd), std::abs(analytic[i]), 1e-8});
      CHECK(std::abs(analytic[i] - fd) / scale < 1e-4);
    }
  }
}

TEST_CASE("calibrate_skeleton: target equal to neutral is a fixed point") {
  const auto fx = make_calibration_fixture(21);
  CalibrationConfig cfg;
  const auto res = calibrate_skeleton(fx.rig, fx.binding, fx.neutral,
                                      fx.neutral, fx.overlap, cfg);
  CHECK(res.loss_total < 1e-10);
  CHECK(res.converged);
  for (const auto& d : res.residual_blendshape) CHECK(d.norm() < 1e-9);
  for (int j = 0; j < fx.rig.joint_count(); ++j) {
    CHECK((res.calibrated_rig.nodes[j].local.translation -
           fx.rig.nodes[j].local.translation)
              .norm() < 1e-9);
  }
}

TEST_CASE("calibrate_skeleton: recovers known leaf displacements") {
  const auto fx = make_calibration_fixture(42, 0.05, false);
  CalibrationConfig cfg;
  cfg.seed = 42;
  const auto res = calibrate_skeleton(fx.rig, fx.binding, fx.neutral,
                                      fx.target, fx.overlap, cfg);

  const double initial = res.loss_trace.front();
  CHECK(res.loss_vertex < 1e-6 * initial);
  for (const auto& [joint, truth] : fx.true_leaf_translations) {
    const Vec3 got = res.calibrated_rig.nodes[joint].local.translation;
    CHECK((got - truth).norm() < 1e-3);
  }

  // leaf-only constraint: non-leaf locals bit-identical to input
  for (int j = 0; j < fx.rig.joint_count(); ++j) {
    if (fx.rig.is_leaf(j)) continue;
    CHECK(same_bits(res.calibrated_rig.nodes[j].local.translation,
                    fx.rig.nodes[j].local.translation));
    CHECK(same_bits(res.calibrated_rig.nodes[j].local.rotation.coeffs(),
                    fx.rig.nodes[j].local.rotation.coeffs()));
  }

  // line search keeps the trace non-increasing
  for (size_t i = 1; i < res.loss_trace.size(); ++i) {
    CHECK(res.loss_trace[i] <= res.loss_trace[i - 1] + 1e-12);
  }
}

TEST_CASE("calibrate_skeleton: residual blendshape absorbs a non-skeletal bump") {
  const auto fx = make_calibration_fixture(13, 0.05, true);
  CalibrationConfig cfg;
  const auto res = calibrate_skeleton(fx.rig, fx.binding, fx.neutral,
                                      fx.target, fx.overlap, cfg);
  // the skeleton alone cannot express the bump; the blendshape must
  CHECK(res.blended_loss_vertex < 1e-6);

  // applying residual then the calibrated pose reproduces the target
  auto blended = fx.neutral.vertices;
  for (size_t v = 0; v < blended.size(); ++v) {
    blended[v] += res.residual_blendshape[v];
  }
  const auto deformed = lbs_deform(blended, fx.binding,
                                   forward_kinematics(res.calibrated_rig));
  CHECK(vertex_loss(deformed, fx.target.vertices) < 1e-6);
}

TEST_CASE("calibrate_skeleton: deterministic under a fixed seed") {
  const auto fx = make_calibration_fixture(5, 0.05, false);
  CalibrationConfig cfg;
  cfg.seed = 9;
  const auto a = calibrate_skeleton(fx.rig, fx.binding, fx.neutral, fx.target,
                                    fx.overlap, cfg);
  const auto b = calibrate_skeleton(fx.rig, fx.binding, fx.neutral, fx.target,
                                    fx.overlap, cfg);
  REQUIRE(a.loss_trace.size() == b.loss_trace.size());
  for (size_t i = 0; i < a.loss_trace.size(); ++i) {
    CHECK(a.loss_trace[i] == b.loss_trace[i]);
  }
  for (int j = 0; j < fx.rig.joint_count(); ++j) {
    CHECK(same_bits(a.calibrated_rig.nodes[j].local.translation,
                    b.calibrated_rig.nodes[j].local.translation));
  }
}
