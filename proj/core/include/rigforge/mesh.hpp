#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace rigforge {

using Vec3 = Eigen::Vector3d;

// Indexed triangle mesh with fixed vertex topology. Deformation operations
// move vertices but never touch the face list.
struct Mesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;
  std::vector<Vec3> normals;  // optional, empty or one per vertex

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int face_count() const { return static_cast<int>(faces.size()); }

  // Throws ValidationError on out-of-range face indices or degenerate faces.
  void validate() const;

  // One-ring vertex adjacency (sorted, deduplicated).
  std::vector<std::vector<int>> vertex_adjacency() const;
};

enum class RegionLabel : uint8_t { Fixed = 0, Replaceable = 1, Transition = 2 };

// Per-vertex partition of a mesh into fixed / replaceable / transition.
struct RegionMask {
  std::vector<RegionLabel> labels;

  int count(RegionLabel l) const;
  std::vector<int> vertices_with(RegionLabel l) const;
  void validate(const Mesh& mesh) const;
};

enum class LandmarkRole { Alignment7, Eyes20, Mouth28 };

struct LandmarkSet {
  std::vector<int> indices;
  LandmarkRole role = LandmarkRole::Alignment7;

  // Checks cardinality for the role and index validity for the mesh.
  void validate(const Mesh& mesh) const;
  std::vector<Vec3> points(const Mesh& mesh) const;
};

int landmark_role_cardinality(LandmarkRole role);
std::string landmark_role_name(LandmarkRole role);
LandmarkRole landmark_role_from_name(const std::string& name);

// Wavefront OBJ subset: v/f lines, triangles only.
Mesh load_obj(const std::string& path);
void save_obj(const Mesh& mesh, const std::string& path);

}  // namespace rigforge
