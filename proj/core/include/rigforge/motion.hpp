#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rigforge/mesh.hpp"

namespace rigforge {

// One animation frame: per-joint rotation and root-relative position, plus
// the root translation.
struct PoseFrame {
  std::vector<Eigen::Quaterniond> joint_rotations;
  std::vector<Vec3> joint_positions;  // root-relative
  Vec3 root_translation = Vec3::Zero();

  int joint_count() const { return static_cast<int>(joint_rotations.size()); }
};

// Geodesic quaternion angle in [0, pi].
double quaternion_angle(const Eigen::Quaterniond& a, const Eigen::Quaterniond& b);

// T_p = sum_j ||p_end(j) - p_start(j)||^2 over root-relative positions,
// T_r = sum_j theta(q_end(j), q_start(j))^2.
struct PoseCosts {
  double translation = 0.0;
  double rotation = 0.0;
};
PoseCosts pose_costs(const PoseFrame& end_pose, const PoseFrame& start_pose);

// category: from == to for plain clips, from != to for transition clips.
struct ClipCategory {
  int from = 1;
  int to = 1;
  bool is_transition() const { return from != to; }
};

struct MotionClip {
  int id = -1;
  ClipCategory category;
  double duration = 0.0;  // seconds
  double frame_rate = 30.0;
  std::vector<PoseFrame> frames;
  Eigen::VectorXd embedding;  // node audio embedding

  const PoseFrame& start_pose() const { return frames.front(); }
  const PoseFrame& end_pose() const { return frames.back(); }
};

struct ClipLibrary {
  std::vector<MotionClip> clips;
  // observed continuation pairs (clip id -> clip id); edge criterion for the graph
  std::vector<std::pair<int, int>> adjacency;
  int embedding_dim = 768;

  const MotionClip& clip(int id) const;
  std::vector<int> category_clip_ids(int category) const;
  std::vector<int> transition_clip_ids(int from, int to) const;
};

// Same-pose lint thresholds for "clips within a category share the canonical
// start/end pose".
struct PoseToleranceConfig {
  double max_joint_angle = 0.02;  // radians
  double max_root_offset = 0.01;  // model units
};

struct LintIssue {
  int clip_id = -1;
  std::string message;
};

// Checks embedding dimensions, adjacency references, durations, and the
// canonical-pose contract per category. Empty result means a clean library.
std::vector<LintIssue> lint_clip_library(const ClipLibrary& library,
                                         const PoseToleranceConfig& tol = {});

enum class EmbeddingMetric { SquaredEuclidean, Cosine };

struct MotionGraphEdge {
  int from = -1;
  int to = -1;
  double weight = 0.0;
};

struct MotionGraph {
  ClipLibrary library;
  std::vector<MotionGraphEdge> edges;
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  EmbeddingMetric metric = EmbeddingMetric::SquaredEuclidean;
};

// One edge per adjacency pair with weight lambda1*T_p + lambda2*T_r between
// the source end pose and the destination start pose.
MotionGraph build_graph(const ClipLibrary& library, double lambda1,
                        double lambda2,
                        EmbeddingMetric metric = EmbeddingMetric::SquaredEuclidean);

struct AudioEmbeddingSequence {
  std::vector<Eigen::VectorXd> embeddings;
  double window_seconds = 2.5;
};

double embedding_cost(const Eigen::VectorXd& audio,
                      const Eigen::VectorXd& node, EmbeddingMetric metric);

struct ViterbiResult {
  std::vector<int> path;  // clip ids, one per audio window
  double total_cost = 0.0;
  std::vector<double> emission_costs;    // per step
  std::vector<double> transition_costs;  // per consecutive pair
  long relaxations = 0;  // edge relaxation count, O(n * E)
};

// Minimum-cost node sequence over the category subgraph for the audio
// sequence; ties broken toward the lowest clip id. Throws
// RuntimeFailure(InfeasiblePath) naming the failing step when the subgraph
// cannot support a path of the requested length.
ViterbiResult viterbi_path(const MotionGraph& graph,
                           const AudioEmbeddingSequence& audio, int category);

struct MotionTrack {
  double frame_rate = 30.0;
  double duration = 0.0;
  std::vector<PoseFrame> frames;
  std::vector<int> clip_sequence;  // clip ids actually concatenated
};

// Concatenates path clips in order. Wherever consecutive clips belong to
// different categories, a seeded-random (a -> b) transition clip is inserted.
MotionTrack compose_track(const ClipLibrary& library,
                          const std::vector<int>& path, uint64_t seed);

}  // namespace rigforge
