#pragma once

#include <cstdint>

#include "rigforge/calibration.hpp"
#include "rigforge/detail_transfer.hpp"
#include "rigforge/face.hpp"
#include "rigforge/motion.hpp"
#include "rigforge/shape_basis.hpp"

namespace rigforge {

// Seeded generators producing the desk-scale stand-ins for the production
// assets (scan meshes, mocap libraries, capture data). Everything here is
// deterministic in the seed.

// Regular grid patch in the z=0 plane, nx*ny vertices.
Mesh make_grid_mesh(int nx, int ny, double spacing = 0.05);

// Detail-transfer fixture: flat initial patch, detail patch with a smooth
// bump inside the replaceable disc, and a fixed/replaceable/transition mask.
struct BumpFixture {
  Mesh initial;
  Mesh detail;
  RegionMask mask;
  LandmarkSet landmarks;  // 7 alignment points on the initial mesh
};
BumpFixture make_bump_fixture(uint64_t seed, int grid = 24);

// Seeded smooth displacement fields standing in for licensed face-model
// basis data.
ShapeBasisSet make_synthetic_shape_basis(int region_vertices, int basis_count,
                                         uint64_t seed);

// Calibration fixture: 13-joint 5-leaf rig skinned to a 576-vertex patch;
// the target mesh comes from displacing leaf locals by at most
// max_displacement (plus an optional non-skeletal bump).
struct CalibrationFixture {
  SkeletonRig rig;
  SkinBinding binding;
  OverlapMap overlap;
  Mesh neutral;
  Mesh target;
  // ground-truth displaced local translation per leaf joint
  std::vector<std::pair<int, Vec3>> true_leaf_translations;
};
CalibrationFixture make_calibration_fixture(uint64_t seed,
                                            double max_displacement = 0.05,
                                            bool add_bump = false);

// 5 categories x clips_per_category clips sharing per-category canonical
// poses, dense in-category adjacency (self-edges included), and transition
// clips for every ordered category pair.
ClipLibrary make_clip_library(uint64_t seed, int categories = 5,
                              int clips_per_category = 20,
                              int embedding_dim = 8, int joint_count = 10,
                              int frames_per_clip = 8);

// Audio windows biased toward randomly chosen node embeddings of the
// requested category.
AudioEmbeddingSequence make_audio_sequence(const ClipLibrary& library,
                                           int category, int length,
                                           uint64_t seed);

// Face-training fixture: coefficients are a fixed clamped linear map of the
// per-frame features, so the windowed decoder can represent them exactly.
struct FaceFixture {
  std::vector<AudioFeatureTrack> features;
  std::vector<RigCoefficientTrack> targets;
};
FaceFixture make_face_fixture(uint64_t seed, int tracks = 4, int frames = 200,
                              int feature_dim = 16, int controls = 20);

}  // namespace rigforge
