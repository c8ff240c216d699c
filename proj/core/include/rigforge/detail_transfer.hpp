#pragma once

#include <vector>

#include "rigforge/mesh.hpp"

namespace rigforge {

// Barycentric anchor on a detail-mesh triangle for one replaceable vertex.
struct BarycentricAnchor {
  int vertex = -1;  // vertex index on the initial mesh
  int face = -1;    // triangle index on the detail mesh
  double b0 = 0, b1 = 0, b2 = 0;

  Vec3 evaluate(const Mesh& detail) const {
    const auto& f = detail.faces[face];
    return b0 * detail.vertices[f[0]] + b1 * detail.vertices[f[1]] +
           b2 * detail.vertices[f[2]];
  }
};

using Correspondence = std::vector<BarycentricAnchor>;

// Closest point on a triangle, returned as barycentric coordinates. Exact
// (1,0,0)-style results in vertex regions.
void closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b,
                               const Vec3& c, double& b0, double& b1,
                               double& b2);

// Nearest-point-on-surface projection of every replaceable vertex onto the
// detail mesh. Brute force over triangles; computed once and reusable.
Correspondence build_correspondence(const Mesh& initial, const Mesh& detail,
                                    const RegionMask& mask);

// Replaceable vertices take their corresponded detail-surface position;
// fixed and transition vertices are copied untouched. The detail mesh must
// already be rigidly aligned to the initial mesh.
Mesh transfer_details(const Mesh& initial, const Mesh& detail,
                      const RegionMask& mask,
                      const Correspondence& correspondence);

// Umbrella-operator Laplacian relaxation v <- v + lambda*(mean(nbrs) - v),
// applied to transition-region vertices only (Jacobi sweep per iteration).
Mesh smooth_transition(const Mesh& mesh, const RegionMask& mask,
                       int iterations, double lambda);

// Max |mean(neighbors) - v| over the transition region; the seam metric the
// smoothing pass is expected to shrink.
double max_transition_laplacian(const Mesh& mesh, const RegionMask& mask);

// Grows the transition band: `rings` edge-rings on each side of the
// replaceable-region boundary are relabeled Transition.
RegionMask grow_transition_rings(const Mesh& mesh, const RegionMask& mask,
                                 int rings);

}  // namespace rigforge
