#include "rigforge/mesh.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rigforge/error.hpp"

namespace rigforge {

void Mesh::validate() const {
  const int n = vertex_count();
  for (size_t f = 0; f < faces.size(); ++f) {
    const auto& face = faces[f];
    for (int k = 0; k < 3; ++k) {
      if (face[k] < 0 || face[k] >= n) {
        throw ValidationError(ErrorCode::InvalidTopology,
                              "face " + std::to_string(f) +
                                  " references vertex " +
                                  std::to_string(face[k]) + " out of range");
      }
    }
    if (face[0] == face[1] || face[1] == face[2] || face[0] == face[2]) {
      throw ValidationError(ErrorCode::InvalidTopology,
                            "degenerate face " + std::to_string(f));
    }
  }
  if (!normals.empty() && normals.size() != vertices.size()) {
    throw ValidationError(ErrorCode::InvalidTopology,
                          "normal count does not match vertex count");
  }
}

std::vector<std::vector<int>> Mesh::vertex_adjacency() const {
  std::vector<std::vector<int>> adj(vertices.size());
  for (const auto& f : faces) {
    for (int k = 0; k < 3; ++k) {
      adj[f[k]].push_back(f[(k + 1) % 3]);
      adj[f[k]].push_back(f[(k + 2) % 3]);
    }
  }
  for (auto& ring : adj) {
    std::sort(ring.begin(), ring.end());
    ring.erase(std::unique(ring.begin(), ring.end()), ring.end());
  }
  return adj;
}

int RegionMask::count(RegionLabel l) const {
  return static_cast<int>(std::count(labels.begin(), labels.end(), l));
}

std::vector<int> RegionMask::vertices_with(RegionLabel l) const {
  std::vector<int> out;
  for (size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == l) out.push_back(static_cast<int>(i));
  }
  return out;
}

void RegionMask::validate(const Mesh& mesh) const {
  if (labels.size() != mesh.vertices.size()) {
    throw ValidationError(ErrorCode::DimensionMismatch,
                          "region mask has " + std::to_string(labels.size()) +
                              " labels for " +
                              std::to_string(mesh.vertices.size()) +
                              " vertices");
  }
}

int landmark_role_cardinality(LandmarkRole role) {
  switch (role) {
    case LandmarkRole::Alignment7: return 7;
    case LandmarkRole::Eyes20: return 20;
    case LandmarkRole::Mouth28: return 28;
  }
  return 0;
}

std::string landmark_role_name(LandmarkRole role) {
  switch (role) {
    case LandmarkRole::Alignment7: return "alignment-7";
    case LandmarkRole::Eyes20: return "eyes-20";
    case LandmarkRole::Mouth28: return "mouth-28";
  }
  return "unknown";
}

LandmarkRole landmark_role_from_name(const std::string& name) {
  if (name == "alignment-7") return LandmarkRole::Alignment7;
  if (name == "eyes-20") return LandmarkRole::Eyes20;
  if (name == "mouth-28") return LandmarkRole::Mouth28;
  throw ValidationError(ErrorCode::SchemaError,
                        "unknown landmark role '" + name + "'");
}

void LandmarkSet::validate(const Mesh& mesh) const {
  const int expected = landmark_role_cardinality(role);
  if (static_cast<int>(indices.size()) != expected) {
    throw ValidationError(
        ErrorCode::DimensionMismatch,
        landmark_role_name(role) + " set must contain " +
            std::to_string(expected) + " indices, got " +
            std::to_string(indices.size()));
  }
  for (int idx : indices) {
    if (idx < 0 || idx >= mesh.vertex_count()) {
      throw ValidationError(ErrorCode::DimensionMismatch,
                            "landmark index " + std::to_string(idx) +
                                " out of range");
    }
  }
}

std::vector<Vec3> LandmarkSet::points(const Mesh& mesh) const {
  std::vector<Vec3> pts;
  pts.reserve(indices.size());
  for (int idx : indices) pts.push_back(mesh.vertices[idx]);
  return pts;
}

Mesh load_obj(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError(ErrorCode::IoError, "cannot open mesh file " + path);
  }
  Mesh mesh;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "v") {
      Vec3 v;
      ss >> v.x() >> v.y() >> v.z();
      if (ss.fail()) {
        throw ValidationError(ErrorCode::FormatError,
                              "malformed vertex line in " + path);
      }
      mesh.vertices.push_back(v);
    } else if (tag == "f") {
      std::array<int, 3> face;
      std::string tok;
      int k = 0;
      while (ss >> tok) {
        if (k >= 3) {
          throw ValidationError(ErrorCode::FormatError,
                                "non-triangle face in " + path);
        }
        // accept "i", "i/..", "i//.." forms, use the vertex index only
        face[k++] = std::stoi(tok.substr(0, tok.find('/'))) - 1;
      }
      if (k != 3) {
        throw ValidationError(ErrorCode::FormatError,
                              "non-triangle face in " + path);
      }
      mesh.faces.push_back(face);
    }
    // vn/vt/usemtl etc. are ignored
  }
  mesh.validate();
  return mesh;
}

void save_obj(const Mesh& mesh, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) {
    throw ValidationError(ErrorCode::IoError, "cannot write mesh file " + path);
  }
  for (const auto& v : mesh.vertices) {
    std::fprintf(f, "v %.17g %.17g %.17g\n", v.x(), v.y(), v.z());
  }
  for (const auto& face : mesh.faces) {
    std::fprintf(f, "f %d %d %d\n", face[0] + 1, face[1] + 1, face[2] + 1);
  }
  std::fclose(f);
}

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::AlignmentDegenerate: return "alignment-degenerate";
    case ErrorCode::IncompleteCorrespondence: return "incomplete-correspondence";
    case ErrorCode::DimensionMismatch: return "dimension-mismatch";
    case ErrorCode::InvalidTopology: return "invalid-topology";
    case ErrorCode::BindingError: return "binding-error";
    case ErrorCode::MapError: return "map-error";
    case ErrorCode::GraphError: return "graph-error";
    case ErrorCode::InfeasiblePath: return "infeasible-path";
    case ErrorCode::CompositionError: return "composition-error";
    case ErrorCode::SkeletonMismatch: return "skeleton-mismatch";
    case ErrorCode::FormatError: return "format-error";
    case ErrorCode::SchemaError: return "schema-error";
    case ErrorCode::IoError: return "io-error";
    case ErrorCode::TrainingFailure: return "training-failure";
    case ErrorCode::ConfigError: return "config-error";
  }
  return "unknown";
}

}  // namespace rigforge
