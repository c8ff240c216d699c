#include <doctest.h>

#include "test_util.hpp"

#include <Eigen/Geometry>
#include <cmath>
#include <random>

#include "rigforge/detail_transfer.hpp"
#include "rigforge/error.hpp"
#include "rigforge/rigid.hpp"
#include "rigforge/shape_basis.hpp"
#include "rigforge/synthetic.hpp"

using namespace rigforge;

namespace {

std::vector<Vec3> seven_points() {
  return {{0, 0, 0},    {1, 0, 0},   {0, 1, 0},     {0, 0, 1},
          {1, 1, 0.5},  {0.3, 0.7, 0.2}, {-0.4, 0.2, 0.9}};
}

}  // namespace

TEST_CASE("rigid_align: identical sets give the identity") {
  const auto pts = seven_points();
  const auto res = rigid_align(pts, pts);
  CHECK(res.rmse == doctest::Approx(0.0).epsilon(1e-15));
  CHECK((res.transform.rotation - Eigen::Matrix3d::Identity()).norm() < 1e-12);
  CHECK(res.transform.translation.norm() < 1e-12);
  CHECK(res.transform.scale == 1.0);
}

TEST_CASE("rigid_align: exact recovery of a known transform") {
  const auto src = seven_points();
  Eigen::Matrix3d rot =
      Eigen::AngleAxisd(M_PI / 2, Vec3::UnitZ()).toRotationMatrix();
  const Vec3 t(1, 0, 0);
  std::vector<Vec3> dst;
  for (const auto& p : src) dst.push_back(rot * p + t);

  const auto res = rigid_align(src, dst);
  CHECK(res.rmse < 1e-9);
  CHECK((res.transform.rotation - rot).norm() < 1e-9);
  CHECK((res.transform.translation - t).norm() < 1e-9);
}

TEST_CASE("rigid_align: noisy sets stay within 3 sigma over 100 trials") {
  const auto src = seven_points();
  const double sigma = 0.01;
  std::mt19937_64 gen(41);
  std::normal_distribution<double> noise(0.0, sigma);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::Quaterniond q = Eigen::Quaterniond::UnitRandom();
    std::vector<Vec3> dst;
    for (const auto& p : src) {
      dst.push_back(q * p + Vec3(0.3, -0.1, 0.7) +
                    Vec3(noise(gen), noise(gen), noise(gen)));
    }
    const auto res = rigid_align(src, dst);
    CHECK(res.rmse <= 3.0 * sigma);
  }
}

TEST_CASE("rigid_align: recovers uniform scale when enabled") {
  const auto src = seven_points();
  std::vector<Vec3> dst;
  for (const auto& p : src) dst.push_back(1.7 * p + Vec3(0, 2, 0));
  const auto res = rigid_align(src, dst, true);
  CHECK(res.transform.scale == doctest::Approx(1.7).epsilon(1e-9));
  CHECK(res.rmse < 1e-9);
}

TEST_CASE("rigid_align: degenerate sets are rejected") {
  std::vector<Vec3> line = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {3, 0, 0}};
  CHECK_THROWS_AS(rigid_align(line, line), ValidationError);
  std::vector<Vec3> pair = {{0, 0, 0}, {1, 0, 0}};
  CHECK_THROWS_AS(rigid_align(pair, pair), ValidationError);
}

TEST_CASE("closest_point_on_triangle: vertex regions give exact barycentrics") {
  const Vec3 a(0, 0, 0), b(1, 0, 0), c(0, 1, 0);
  double b0, b1, b2;
  closest_point_on_triangle(Vec3(-1, -1, 0.5), a, b, c, b0, b1, b2);
  CHECK(b0 == 1.0);
  CHECK(b1 == 0.0);
  CHECK(b2 == 0.0);
  closest_point_on_triangle(Vec3(2, 0, 0), a, b, c, b0, b1, b2);
  CHECK(b1 == 1.0);
  // interior point
  closest_point_on_triangle(Vec3(0.25, 0.25, 3.0), a, b, c, b0, b1, b2);
  CHECK(b0 == doctest::Approx(0.5));
  CHECK(b1 == doctest::Approx(0.25));
  CHECK(b2 == doctest::Approx(0.25));
}

TEST_CASE("transfer_details: identical detail mesh is the identity") {
  const auto fx = make_bump_fixture(7);
  const auto corr = build_correspondence(fx.initial, fx.initial, fx.mask);
  const auto out = transfer_details(fx.initial, fx.initial, fx.mask, corr);
  REQUIRE(out.vertex_count() == fx.initial.vertex_count());
  for (int v = 0; v < out.vertex_count(); ++v) {
    CHECK(same_bits(out.vertices[v], fx.initial.vertices[v]));
  }
  CHECK(out.faces == fx.initial.faces);
}

TEST_CASE("transfer_details: uniform displacement moves only replaceables") {
  const auto fx = make_bump_fixture(7);
  const Vec3 d(0, 0, 0.001);  // 1 mm along the patch normal
  Mesh detail = fx.initial;
  for (auto& v : detail.vertices) v += d;
  // correspondence computed against the undisplaced geometry so anchors are
  // the vertices themselves
  const auto corr = build_correspondence(fx.initial, fx.initial, fx.mask);
  const auto out = transfer_details(fx.initial, detail, fx.mask, corr);
  for (int v = 0; v < out.vertex_count(); ++v) {
    if (fx.mask.labels[v] == RegionLabel::Replaceable) {
      CHECK((out.vertices[v] - (fx.initial.vertices[v] + d)).norm() < 1e-12);
    } else {
      CHECK(same_bits(out.vertices[v], fx.initial.vertices[v]));  // bit-identical
    }
  }
}

TEST_CASE("transfer_details: empty replaceable region is the identity") {
  const auto fx = make_bump_fixture(7);
  RegionMask all_fixed;
  all_fixed.labels.assign(fx.initial.vertex_count(), RegionLabel::Fixed);
  const auto out = transfer_details(fx.initial, fx.detail, all_fixed, {});
  for (int v = 0; v < out.vertex_count(); ++v) {
    CHECK(same_bits(out.vertices[v], fx.initial.vertices[v]));
  }
}

TEST_CASE("transfer_details: missing correspondence entry is an error") {
  const auto fx = make_bump_fixture(7);
  auto corr = build_correspondence(fx.initial, fx.detail, fx.mask);
  corr.pop_back();
  CHECK_THROWS_AS(transfer_details(fx.initial, fx.detail, fx.mask, corr),
                  ValidationError);
}

TEST_CASE("smooth_transition: zero iterations is the identity") {
  const auto fx = make_bump_fixture(7);
  const auto out = smooth_transition(fx.detail, fx.mask, 0, 0.5);
  for (int v = 0; v < out.vertex_count(); ++v) {
    CHECK(same_bits(out.vertices[v], fx.detail.vertices[v]));
  }
}

TEST_CASE("smooth_transition: lone spike flattens in one full step") {
  // 3x3 grid, center vertex raised to height 1 and labeled transition;
  // umbrella operator with lambda=1 pulls it to the neighbor mean 0.
  Mesh m = make_grid_mesh(3, 3, 1.0);
  const int center = 4;
  m.vertices[center].z() = 1.0;
  RegionMask mask;
  mask.labels.assign(9, RegionLabel::Fixed);
  mask.labels[center] = RegionLabel::Transition;
  const auto out = smooth_transition(m, mask, 1, 1.0);
  CHECK(out.vertices[center].z() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(out.vertices[center].x() == doctest::Approx(m.vertices[center].x()));
  for (int v = 0; v < 9; ++v) {
    if (v != center) CHECK(same_bits(out.vertices[v], m.vertices[v]));
  }
}

TEST_CASE("smooth_transition: transition Laplacian is monotone non-increasing") {
  const auto fx = make_bump_fixture(11);
  const auto corr = build_correspondence(fx.initial, fx.detail, fx.mask);
  Mesh cur = transfer_details(fx.initial, fx.detail, fx.mask, corr);
  double prev = max_transition_laplacian(cur, fx.mask);
  for (int it = 0; it < 10; ++it) {
    cur = smooth_transition(cur, fx.mask, 1, 0.5);
    const double next = max_transition_laplacian(cur, fx.mask);
    CHECK(next <= prev + 1e-15);
    prev = next;
  }
}

TEST_CASE("smooth_transition: only transition vertices move") {
  const auto fx = make_bump_fixture(7);
  const auto out = smooth_transition(fx.detail, fx.mask, 5, 0.5);
  for (int v = 0; v < out.vertex_count(); ++v) {
    if (fx.mask.labels[v] != RegionLabel::Transition) {
      CHECK(same_bits(out.vertices[v], fx.detail.vertices[v]));
    }
  }
}

TEST_CASE("apply_shape_basis: zero coefficients reproduce the base exactly") {
  auto basis = make_synthetic_shape_basis(50, 80, 3);
  std::fill(basis.coefficients.begin(), basis.coefficients.end(), 0.0);
  const auto v = apply_shape_basis(basis);
  REQUIRE(v.size() == basis.base.size());
  for (size_t k = 0; k < v.size(); ++k) {
    CHECK(same_bits(v[k], basis.base[k]));  // bit-exact
  }
}

TEST_CASE("apply_shape_basis: single basis scales linearly") {
  ShapeBasisSet basis;
  basis.base = {{0, 0, 0}, {1, 1, 1}};
  basis.bases = {{{0.1, 0, 0}, {0, 0.2, 0}}};
  basis.coefficients = {2.0};
  const auto v = apply_shape_basis(basis);
  CHECK((v[0] - Vec3(0.2, 0, 0)).norm() < 1e-15);
  CHECK((v[1] - Vec3(1, 1.4, 1)).norm() < 1e-15);
}

TEST_CASE("apply_shape_basis: linearity holds to 1e-12") {
  auto basis = make_synthetic_shape_basis(60, 80, 5);
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::vector<double> alpha(80), beta(80), sum(80), twice(80);
  for (int i = 0; i < 80; ++i) {
    alpha[i] = coeff(gen);
    beta[i] = coeff(gen);
    sum[i] = alpha[i] + beta[i];
    twice[i] = 2.0 * alpha[i];
  }
  const auto v0 = apply_shape_basis(basis, std::vector<double>(80, 0.0));
  const auto va = apply_shape_basis(basis, alpha);
  const auto vb = apply_shape_basis(basis, beta);
  const auto vs = apply_shape_basis(basis, sum);
  const auto v2 = apply_shape_basis(basis, twice);
  for (size_t k = 0; k < v0.size(); ++k) {
    const Vec3 lhs = vs[k] - v0[k];
    const Vec3 rhs = (va[k] - v0[k]) + (vb[k] - v0[k]);
    CHECK((lhs - rhs).norm() < 1e-12);
    CHECK(((v2[k] - v0[k]) - 2.0 * (va[k] - v0[k])).norm() < 1e-12);
  }
}

TEST_CASE("apply_shape_basis: coefficient count mismatch is an error") {
  auto basis = make_synthetic_shape_basis(10, 4, 1);
  CHECK_THROWS_AS(apply_shape_basis(basis, std::vector<double>(3, 0.0)),
                  ValidationError);
}

TEST_CASE("mesh validation rejects bad faces") {
  Mesh m = make_grid_mesh(2, 2, 1.0);
  CHECK_NOTHROW(m.validate());
  Mesh out_of_range = m;
  out_of_range.faces[0][1] = 99;
  CHECK_THROWS_AS(out_of_range.validate(), ValidationError);
  Mesh degenerate = m;
  degenerate.faces[0][1] = degenerate.faces[0][0];
  CHECK_THROWS_AS(degenerate.validate(), ValidationError);
}

TEST_CASE("landmark sets enforce role cardinality") {
  Mesh m = make_grid_mesh(8, 8, 0.1);
  LandmarkSet set;
  set.role = LandmarkRole::Alignment7;
  set.indices = {0, 1, 2, 3, 4, 5, 6};
  CHECK_NOTHROW(set.validate(m));
  set.indices.push_back(7);
  CHECK_THROWS_AS(set.validate(m), ValidationError);
}
