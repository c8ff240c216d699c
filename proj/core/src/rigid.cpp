#include "rigforge/rigid.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "rigforge/error.hpp"

namespace rigforge {

RigidTransform RigidTransform::inverse() const {
  RigidTransform inv;
  inv.scale = 1.0 / scale;
  inv.rotation = rotation.transpose();
  inv.translation = -inv.scale * (inv.rotation * translation);
  return inv;
}

AlignmentResult rigid_align(const std::vector<Vec3>& source,
                            const std::vector<Vec3>& target,
                            bool with_scale) {
  if (source.size() != target.size() || source.size() < 3) {
    throw ValidationError(ErrorCode::AlignmentDegenerate,
                          "rigid_align needs two equal-length point sets of "
                          "at least 3 points");
  }
  const int n = static_cast<int>(source.size());

  Vec3 src_mean = Vec3::Zero(), tgt_mean = Vec3::Zero();
  for (int i = 0; i < n; ++i) {
    src_mean += source[i];
    tgt_mean += target[i];
  }
  src_mean /= n;
  tgt_mean /= n;

  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  double src_var = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vec3 s = source[i] - src_mean;
    const Vec3 t = target[i] - tgt_mean;
    cov += t * s.transpose();
    src_var += s.squaredNorm();
  }
  cov /= n;
  src_var /= n;

  Eigen::JacobiSVD<Eigen::Matrix3d> svd(
      cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Vector3d sv = svd.singularValues();

  // Rank < 2 means the points are collinear or coincident and the rotation
  // is not determined.
  const double eps = 1e-12 * std::max(1.0, sv(0));
  if (sv(1) <= eps) {
    throw ValidationError(ErrorCode::AlignmentDegenerate,
                          "point set is collinear or coincident");
  }

  Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
  if ((svd.matrixU() * svd.matrixV().transpose()).determinant() < 0) {
    d(2, 2) = -1.0;
  }
  RigidTransform xf;
  xf.rotation = svd.matrixU() * d * svd.matrixV().transpose();
  if (with_scale) {
    if (src_var <= 0.0) {
      throw ValidationError(ErrorCode::AlignmentDegenerate,
                            "zero-variance source point set");
    }
    xf.scale = (sv.asDiagonal() * d).trace() / src_var;
  }
  xf.translation = tgt_mean - xf.scale * (xf.rotation * src_mean);

  double sq_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    sq_sum += (xf.apply(source[i]) - target[i]).squaredNorm();
  }
  return {xf, std::sqrt(sq_sum / n)};
}

}  // namespace rigforge
