#include "rigforge/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rigforge/error.hpp"

namespace rigforge {

Mesh make_grid_mesh(int nx, int ny, double spacing) {
  Mesh mesh;
  for (int y = 0; y < ny; ++y) {
    for (int x = 0; x < nx; ++x) {
      mesh.vertices.push_back(Vec3(x * spacing, y * spacing, 0.0));
    }
  }
  for (int y = 0; y + 1 < ny; ++y) {
    for (int x = 0; x + 1 < nx; ++x) {
      const int a = y * nx + x;
      const int b = a + 1;
      const int c = a + nx;
      const int d = c + 1;
      mesh.faces.push_back({a, b, d});
      mesh.faces.push_back({a, d, c});
    }
  }
  return mesh;
}

BumpFixture make_bump_fixture(uint64_t seed, int grid) {
  BumpFixture fx;
  const double spacing = 1.0 / (grid - 1);
  fx.initial = make_grid_mesh(grid, grid, spacing);
  fx.detail = fx.initial;

  const Vec3 center(0.5, 0.5, 0.0);
  const double replace_radius = 0.28;
  const double transition_width = 3.0 * spacing;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> height(0.03, 0.06);
  const double bump_height = height(rng);
  const double bump_sigma = 0.12;

  fx.mask.labels.assign(fx.initial.vertices.size(), RegionLabel::Fixed);
  for (int v = 0; v < fx.initial.vertex_count(); ++v) {
    const double r = (fx.initial.vertices[v] - center).norm();
    if (r < replace_radius) {
      fx.mask.labels[v] = RegionLabel::Replaceable;
      fx.detail.vertices[v].z() +=
          bump_height * std::exp(-(r * r) / (bump_sigma * bump_sigma));
    } else if (r < replace_radius + transition_width) {
      fx.mask.labels[v] = RegionLabel::Transition;
    }
  }

  fx.landmarks.role = LandmarkRole::Alignment7;
  const int n = grid;
  fx.landmarks.indices = {0,
                          n - 1,
                          n * (n - 1),
                          n * n - 1,
                          n / 2,
                          n * (n / 2),
                          n * (n / 2) + n - 1};
  return fx;
}

ShapeBasisSet make_synthetic_shape_basis(int region_vertices, int basis_count,
                                         uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);

  ShapeBasisSet basis;
  basis.base.resize(region_vertices);
  for (int v = 0; v < region_vertices; ++v) {
    const double t = static_cast<double>(v) / std::max(1, region_vertices - 1);
    basis.base[v] = Vec3(t, 0.5 * std::sin(6.28318 * t), 0.0);
  }
  for (int i = 0; i < basis_count; ++i) {
    // smooth low-frequency displacement field over the region parameter
    const double freq = 1.0 + (i % 7);
    const Vec3 amp(0.01 * uni(rng), 0.01 * uni(rng), 0.01 * uni(rng));
    const double phase = 3.14159 * uni(rng);
    std::vector<Vec3> field(region_vertices);
    for (int v = 0; v < region_vertices; ++v) {
      const double t = static_cast<double>(v) / std::max(1, region_vertices - 1);
      field[v] = amp * std::sin(freq * 6.28318 * t + phase);
    }
    basis.bases.push_back(std::move(field));
  }
  basis.coefficients.assign(basis_count, 0.0);
  return basis;
}

CalibrationFixture make_calibration_fixture(uint64_t seed,
                                            double max_displacement,
                                            bool add_bump) {
  CalibrationFixture fx;

  auto add_node = [&fx](const std::string& id, int parent, const Vec3& t) {
    SkeletonNode node;
    node.id = id;
    node.parent = parent;
    node.local.translation = t;
    fx.rig.nodes.push_back(node);
    return static_cast<int>(fx.rig.nodes.size()) - 1;
  };

  const int root = add_node("root", -1, Vec3(0, 0, 0));
  const int spine1 = add_node("spine1", root, Vec3(0, 0.2, 0));
  const int spine2 = add_node("spine2", spine1, Vec3(0, 0.2, 0));
  std::vector<int> leaves;
  for (int b = 0; b < 5; ++b) {
    const double x = -0.4 + 0.2 * b;
    const int elbow = add_node("elbow" + std::to_string(b), spine2,
                               Vec3(x, 0.15, 0));
    leaves.push_back(
        add_node("leaf" + std::to_string(b), elbow, Vec3(0, 0.15, 0)));
  }

  // 24x24 patch over the rig's working area
  fx.neutral = make_grid_mesh(24, 24, 0.05);
  for (auto& v : fx.neutral.vertices) {
    v -= Vec3(0.575, 0.175, 0.0);  // center x, shift y to cover [-0.175, 0.975]
  }

  const auto pose = forward_kinematics(fx.rig);

  // snap one vertex onto each leaf joint and map it in the overlap table
  for (int leaf : leaves) {
    const Vec3 target = pose[leaf].translation;
    int best = 0;
    double best_d = (fx.neutral.vertices[0] - target).squaredNorm();
    for (int v = 1; v < fx.neutral.vertex_count(); ++v) {
      const double d = (fx.neutral.vertices[v] - target).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = v;
      }
    }
    fx.neutral.vertices[best] = target;
    fx.overlap.entries.push_back({leaf, best});
  }

  // RBF skin weights over all joints, 4 strongest influences per vertex
  fx.binding.rest_pose = pose;
  fx.binding.weights.resize(fx.neutral.vertices.size());
  const double sigma = 0.18;
  for (int v = 0; v < fx.neutral.vertex_count(); ++v) {
    std::vector<VertexWeight> cand;
    for (int j = 0; j < fx.rig.joint_count(); ++j) {
      const double d2 =
          (fx.neutral.vertices[v] - pose[j].translation).squaredNorm();
      cand.push_back({j, std::exp(-d2 / (sigma * sigma))});
    }
    std::sort(cand.begin(), cand.end(), [](const auto& a, const auto& b) {
      return a.weight > b.weight || (a.weight == b.weight && a.joint < b.joint);
    });
    cand.resize(4);
    double sum = 0.0;
    for (const auto& w : cand) sum += w.weight;
    for (auto& w : cand) w.weight /= sum;
    fx.binding.weights[v] = cand;
  }
  // overlap vertices ride their leaf rigidly
  for (const auto& [joint, vertex] : fx.overlap.entries) {
    fx.binding.weights[vertex] = {{joint, 1.0}};
  }

  // displaced rig -> target mesh
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  SkeletonRig displaced = fx.rig;
  for (int leaf : leaves) {
    Vec3 delta(uni(rng), uni(rng), uni(rng));
    delta *= max_displacement / std::sqrt(3.0);
    displaced.nodes[leaf].local.translation += delta;
    fx.true_leaf_translations.push_back(
        {leaf, displaced.nodes[leaf].local.translation});
  }
  const auto displaced_pose = forward_kinematics(displaced);
  fx.target = fx.neutral;
  fx.target.vertices = lbs_deform(fx.neutral.vertices, fx.binding, displaced_pose);

  if (add_bump) {
    // non-skeletal detail in a root-dominated area, below the branch joints
    const Vec3 bump_center(0.0, -0.1, 0.0);
    for (int v = 0; v < fx.target.vertex_count(); ++v) {
      const double r2 = (fx.neutral.vertices[v] - bump_center).squaredNorm();
      fx.target.vertices[v].z() += 0.03 * std::exp(-r2 / (0.01));
    }
  }
  return fx;
}

ClipLibrary make_clip_library(uint64_t seed, int categories,
                              int clips_per_category, int embedding_dim,
                              int joint_count, int frames_per_clip) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);

  ClipLibrary library;
  library.embedding_dim = embedding_dim;

  // canonical pose and embedding center per category
  std::vector<PoseFrame> canonical(categories);
  std::vector<Eigen::VectorXd> centers(categories);
  for (int c = 0; c < categories; ++c) {
    PoseFrame pose;
    for (int j = 0; j < joint_count; ++j) {
      const double angle = 0.3 * std::sin(1.7 * c + 0.9 * j);
      pose.joint_rotations.push_back(
          Eigen::Quaterniond(Eigen::AngleAxisd(angle, Vec3::UnitZ())));
      pose.joint_positions.push_back(
          Vec3(0.1 * j, 0.2 * std::cos(c + 0.5 * j), 0.05 * c));
    }
    pose.root_translation = Vec3(0, 0, 0);
    canonical[c] = pose;
    centers[c] = Eigen::VectorXd(embedding_dim);
    for (int d = 0; d < embedding_dim; ++d) {
      centers[c](d) = std::sin(0.8 * c + 1.3 * d);
    }
  }

  auto make_frames = [&](const PoseFrame& start, const PoseFrame& end) {
    std::vector<PoseFrame> frames;
    for (int f = 0; f < frames_per_clip; ++f) {
      const double t = static_cast<double>(f) / (frames_per_clip - 1);
      // raised-cosine wander that vanishes at both ends
      const double wiggle = 0.5 * (1.0 - std::cos(2.0 * 3.14159265 * t));
      PoseFrame frame;
      for (int j = 0; j < static_cast<int>(start.joint_rotations.size()); ++j) {
        frame.joint_rotations.push_back(
            start.joint_rotations[j]
                .slerp(t, end.joint_rotations[j])
                .slerp(0.05 * wiggle,
                       Eigen::Quaterniond(Eigen::AngleAxisd(
                           0.3 * uni(rng), Vec3::UnitY()))));
        frame.joint_positions.push_back(
            (1 - t) * start.joint_positions[j] + t * end.joint_positions[j] +
            wiggle * 0.02 * Vec3(uni(rng), uni(rng), uni(rng)));
      }
      frame.root_translation =
          (1 - t) * start.root_translation + t * end.root_translation;
      frames.push_back(std::move(frame));
    }
    // exact canonical endpoints
    frames.front() = start;
    frames.back() = end;
    return frames;
  };

  int next_id = 0;
  std::uniform_real_distribution<double> duration(2.0, 3.0);
  for (int c = 0; c < categories; ++c) {
    for (int k = 0; k < clips_per_category; ++k) {
      MotionClip clip;
      clip.id = next_id++;
      clip.category = {c + 1, c + 1};
      clip.duration = duration(rng);
      clip.frame_rate = frames_per_clip / clip.duration;
      clip.frames = make_frames(canonical[c], canonical[c]);
      clip.embedding = centers[c];
      for (int d = 0; d < embedding_dim; ++d) {
        clip.embedding(d) += 0.3 * uni(rng);
      }
      library.clips.push_back(std::move(clip));
    }
  }
  // transitions, two per ordered category pair
  for (int a = 0; a < categories; ++a) {
    for (int b = 0; b < categories; ++b) {
      if (a == b) continue;
      for (int k = 0; k < 2; ++k) {
        MotionClip clip;
        clip.id = next_id++;
        clip.category = {a + 1, b + 1};
        clip.duration = duration(rng);
        clip.frame_rate = frames_per_clip / clip.duration;
        clip.frames = make_frames(canonical[a], canonical[b]);
        clip.embedding = 0.5 * (centers[a] + centers[b]);
        library.clips.push_back(std::move(clip));
      }
    }
  }

  // dense in-category adjacency, self-edges included
  for (int c = 0; c < categories; ++c) {
    const auto ids = library.category_clip_ids(c + 1);
    for (int from : ids) {
      for (int to : ids) {
        library.adjacency.push_back({from, to});
      }
    }
  }
  return library;
}

AudioEmbeddingSequence make_audio_sequence(const ClipLibrary& library,
                                           int category, int length,
                                           uint64_t seed) {
  const auto ids = library.category_clip_ids(category);
  if (ids.empty()) {
    throw ValidationError(ErrorCode::GraphError,
                          "no clips in category " + std::to_string(category));
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<size_t> pick(0, ids.size() - 1);
  std::normal_distribution<double> noise(0.0, 0.1);

  AudioEmbeddingSequence seq;
  seq.window_seconds = 2.5;
  for (int i = 0; i < length; ++i) {
    Eigen::VectorXd e = library.clip(ids[pick(rng)]).embedding;
    for (int d = 0; d < e.size(); ++d) e(d) += noise(rng);
    seq.embeddings.push_back(std::move(e));
  }
  return seq;
}

FaceFixture make_face_fixture(uint64_t seed, int tracks, int frames,
                              int feature_dim, int controls) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  // fixed ground-truth linear map, scaled to keep outputs inside (0,1)
  Eigen::MatrixXd map(controls, feature_dim);
  for (int r = 0; r < controls; ++r) {
    for (int c = 0; c < feature_dim; ++c) map(r, c) = gauss(rng);
  }
  map *= 0.4 / std::sqrt(static_cast<double>(feature_dim));
  Eigen::VectorXd offset(controls);
  for (int r = 0; r < controls; ++r) offset(r) = 0.3 + 0.2 * uni(rng);

  FaceFixture fx;
  for (int k = 0; k < tracks; ++k) {
    AudioFeatureTrack feat;
    feat.frame_rate = 50.0;
    feat.values.resize(frames, feature_dim);
    // smooth features: seeded random walk squashed to [0,1]
    Eigen::VectorXd state = Eigen::VectorXd::Zero(feature_dim);
    for (int t = 0; t < frames; ++t) {
      for (int d = 0; d < feature_dim; ++d) {
        state(d) = 0.9 * state(d) + 0.1 * gauss(rng);
        feat.values(t, d) = 0.5 + 0.5 * std::tanh(state(d));
      }
    }

    RigCoefficientTrack target;
    target.frame_rate = 50.0;
    target.values.resize(frames, controls);
    for (int t = 0; t < frames; ++t) {
      const Eigen::VectorXd y =
          map * feat.values.row(t).transpose() + offset;
      target.values.row(t) = y.cwiseMax(0.0).cwiseMin(1.0).transpose();
    }
    fx.features.push_back(std::move(feat));
    fx.targets.push_back(std::move(target));
  }
  return fx;
}

}  // namespace rigforge
