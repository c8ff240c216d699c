#include "rigforge/detail_transfer.hpp"

#include <cmath>
#include <limits>

#include "rigforge/error.hpp"

namespace rigforge {

// Ericson, "Real-Time Collision Detection", 5.1.5. Vertex/edge regions
// return exact 0/1 barycentrics.
void closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b,
                               const Vec3& c, double& b0, double& b1,
                               double& b2) {
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) { b0 = 1; b1 = 0; b2 = 0; return; }

  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) { b0 = 0; b1 = 1; b2 = 0; return; }

  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
    const double v = d1 / (d1 - d3);
    b0 = 1 - v; b1 = v; b2 = 0;
    return;
  }

  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) { b0 = 0; b1 = 0; b2 = 1; return; }

  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
    const double w = d2 / (d2 - d6);
    b0 = 1 - w; b1 = 0; b2 = w;
    return;
  }

  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    b0 = 0; b1 = 1 - w; b2 = w;
    return;
  }

  const double denom = 1.0 / (va + vb + vc);
  b1 = vb * denom;
  b2 = vc * denom;
  b0 = 1.0 - b1 - b2;
}

Correspondence build_correspondence(const Mesh& initial, const Mesh& detail,
                                    const RegionMask& mask) {
  mask.validate(initial);
  detail.validate();
  Correspondence corr;
  for (int v : mask.vertices_with(RegionLabel::Replaceable)) {
    const Vec3& p = initial.vertices[v];
    BarycentricAnchor best;
    best.vertex = v;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (int f = 0; f < detail.face_count(); ++f) {
      const auto& face = detail.faces[f];
      double b0, b1, b2;
      closest_point_on_triangle(p, detail.vertices[face[0]],
                                detail.vertices[face[1]],
                                detail.vertices[face[2]], b0, b1, b2);
      const Vec3 q = b0 * detail.vertices[face[0]] +
                     b1 * detail.vertices[face[1]] +
                     b2 * detail.vertices[face[2]];
      const double d2 = (q - p).squaredNorm();
      if (d2 < best_d2) {
        best_d2 = d2;
        best.face = f;
        best.b0 = b0;
        best.b1 = b1;
        best.b2 = b2;
      }
    }
    corr.push_back(best);
  }
  return corr;
}

Mesh transfer_details(const Mesh& initial, const Mesh& detail,
                      const RegionMask& mask,
                      const Correspondence& correspondence) {
  mask.validate(initial);
  Mesh out = initial;

  std::vector<const BarycentricAnchor*> by_vertex(initial.vertices.size(),
                                                  nullptr);
  for (const auto& anchor : correspondence) {
    if (anchor.vertex < 0 || anchor.vertex >= initial.vertex_count() ||
        anchor.face < 0 || anchor.face >= detail.face_count()) {
      throw ValidationError(ErrorCode::IncompleteCorrespondence,
                            "correspondence anchor out of range");
    }
    by_vertex[anchor.vertex] = &anchor;
  }

  for (int v : mask.vertices_with(RegionLabel::Replaceable)) {
    const BarycentricAnchor* anchor = by_vertex[v];
    if (!anchor) {
      throw ValidationError(ErrorCode::IncompleteCorrespondence,
                            "no correspondence for replaceable vertex " +
                                std::to_string(v));
    }
    out.vertices[v] = anchor->evaluate(detail);
  }
  return out;
}

Mesh smooth_transition(const Mesh& mesh, const RegionMask& mask,
                       int iterations, double lambda) {
  mask.validate(mesh);
  if (lambda <= 0.0 || lambda > 1.0) {
    throw ValidationError(ErrorCode::ConfigError,
                          "smoothing lambda must be in (0, 1]");
  }
  Mesh out = mesh;
  const auto transition = mask.vertices_with(RegionLabel::Transition);
  if (transition.empty() || iterations <= 0) return out;

  const auto adj = mesh.vertex_adjacency();
  std::vector<Vec3> next = out.vertices;
  for (int it = 0; it < iterations; ++it) {
    for (int v : transition) {
      if (adj[v].empty()) continue;
      Vec3 mean = Vec3::Zero();
      for (int nb : adj[v]) mean += out.vertices[nb];
      mean /= static_cast<double>(adj[v].size());
      next[v] = out.vertices[v] + lambda * (mean - out.vertices[v]);
    }
    for (int v : transition) out.vertices[v] = next[v];
  }
  return out;
}

double max_transition_laplacian(const Mesh& mesh, const RegionMask& mask) {
  mask.validate(mesh);
  const auto adj = mesh.vertex_adjacency();
  double worst = 0.0;
  for (int v : mask.vertices_with(RegionLabel::Transition)) {
    if (adj[v].empty()) continue;
    Vec3 mean = Vec3::Zero();
    for (int nb : adj[v]) mean += mesh.vertices[nb];
    mean /= static_cast<double>(adj[v].size());
    worst = std::max(worst, (mean - mesh.vertices[v]).norm());
  }
  return worst;
}

RegionMask grow_transition_rings(const Mesh& mesh, const RegionMask& mask,
                                 int rings) {
  mask.validate(mesh);
  RegionMask out = mask;
  const auto adj = mesh.vertex_adjacency();
  for (int r = 0; r < rings; ++r) {
    std::vector<int> promote;
    for (int v = 0; v < mesh.vertex_count(); ++v) {
      if (out.labels[v] == RegionLabel::Transition) continue;
      for (int nb : adj[v]) {
        const bool boundary =
            out.labels[nb] == RegionLabel::Transition ||
            (r == 0 && out.labels[nb] != out.labels[v]);
        if (boundary) {
          promote.push_back(v);
          break;
        }
      }
    }
    for (int v : promote) out.labels[v] = RegionLabel::Transition;
  }
  return out;
}

}  // namespace rigforge
