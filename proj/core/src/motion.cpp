#include "rigforge/motion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "rigforge/error.hpp"

namespace rigforge {

double quaternion_angle(const Eigen::Quaterniond& a,
                        const Eigen::Quaterniond& b) {
  const Eigen::Quaterniond d = a.conjugate() * b;
  return 2.0 * std::atan2(d.vec().norm(), std::abs(d.w()));
}

PoseCosts pose_costs(const PoseFrame& end_pose, const PoseFrame& start_pose) {
  if (end_pose.joint_count() != start_pose.joint_count() ||
      end_pose.joint_positions.size() != start_pose.joint_positions.size()) {
    throw ValidationError(ErrorCode::SkeletonMismatch,
                          "pose_costs: poses have different joint sets");
  }
  PoseCosts costs;
  for (size_t j = 0; j < end_pose.joint_positions.size(); ++j) {
    costs.translation +=
        (end_pose.joint_positions[j] - start_pose.joint_positions[j])
            .squaredNorm();
  }
  for (size_t j = 0; j < end_pose.joint_rotations.size(); ++j) {
    const double theta =
        quaternion_angle(end_pose.joint_rotations[j], start_pose.joint_rotations[j]);
    costs.rotation += theta * theta;
  }
  return costs;
}

const MotionClip& ClipLibrary::clip(int id) const {
  for (const auto& c : clips) {
    if (c.id == id) return c;
  }
  throw ValidationError(ErrorCode::GraphError,
                        "unknown clip id " + std::to_string(id));
}

std::vector<int> ClipLibrary::category_clip_ids(int category) const {
  std::vector<int> ids;
  for (const auto& c : clips) {
    if (!c.category.is_transition() && c.category.from == category) {
      ids.push_back(c.id);
    }
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::vector<int> ClipLibrary::transition_clip_ids(int from, int to) const {
  std::vector<int> ids;
  for (const auto& c : clips) {
    if (c.category.from == from && c.category.to == to &&
        c.category.is_transition()) {
      ids.push_back(c.id);
    }
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::vector<LintIssue> lint_clip_library(const ClipLibrary& library,
                                         const PoseToleranceConfig& tol) {
  std::vector<LintIssue> issues;
  auto report = [&issues](int id, std::string msg) {
    issues.push_back({id, std::move(msg)});
  };

  for (const auto& c : library.clips) {
    if (c.frames.empty()) {
      report(c.id, "clip has no frames");
      continue;
    }
    if (c.duration <= 0.0) report(c.id, "non-positive duration");
    if (c.embedding.size() != library.embedding_dim) {
      report(c.id, "embedding dimension " + std::to_string(c.embedding.size()) +
                       " != library dimension " +
                       std::to_string(library.embedding_dim));
    }
  }

  // canonical pose per category: taken from the lowest-id clip
  std::map<int, const MotionClip*> canonical;
  for (const auto& c : library.clips) {
    if (c.category.is_transition() || c.frames.empty()) continue;
    auto it = canonical.find(c.category.from);
    if (it == canonical.end() || c.id < it->second->id) {
      canonical[c.category.from] = &c;
    }
  }
  auto check_pose = [&](int id, const PoseFrame& pose, const PoseFrame& ref,
                        const char* which) {
    if (pose.joint_count() != ref.joint_count()) {
      report(id, std::string(which) + " pose joint count mismatch");
      return;
    }
    for (int j = 0; j < pose.joint_count(); ++j) {
      if (quaternion_angle(pose.joint_rotations[j], ref.joint_rotations[j]) >
          tol.max_joint_angle) {
        report(id, std::string(which) + " pose joint " + std::to_string(j) +
                       " off the canonical pose");
        return;
      }
    }
    if ((pose.root_translation - ref.root_translation).norm() >
        tol.max_root_offset) {
      report(id, std::string(which) + " pose root off the canonical pose");
    }
  };
  for (const auto& c : library.clips) {
    if (c.frames.empty()) continue;
    if (!c.category.is_transition()) {
      const PoseFrame& ref = canonical[c.category.from]->start_pose();
      check_pose(c.id, c.start_pose(), ref, "start");
      check_pose(c.id, c.end_pose(), ref, "end");
    } else {
      auto from_it = canonical.find(c.category.from);
      auto to_it = canonical.find(c.category.to);
      if (from_it != canonical.end()) {
        check_pose(c.id, c.start_pose(), from_it->second->start_pose(), "start");
      }
      if (to_it != canonical.end()) {
        check_pose(c.id, c.end_pose(), to_it->second->start_pose(), "end");
      }
    }
  }

  for (const auto& [from, to] : library.adjacency) {
    bool from_ok = false, to_ok = false;
    for (const auto& c : library.clips) {
      from_ok |= c.id == from;
      to_ok |= c.id == to;
    }
    if (!from_ok || !to_ok) {
      report(from_ok ? to : from, "adjacency references unknown clip");
    }
  }
  return issues;
}

MotionGraph build_graph(const ClipLibrary& library, double lambda1,
                        double lambda2, EmbeddingMetric metric) {
  if (lambda1 < 0.0 || lambda2 < 0.0) {
    throw ValidationError(ErrorCode::ConfigError,
                          "edge-cost mixing weights must be non-negative");
  }
  MotionGraph graph;
  graph.library = library;
  graph.lambda1 = lambda1;
  graph.lambda2 = lambda2;
  graph.metric = metric;
  for (const auto& [from, to] : library.adjacency) {
    const MotionClip& a = library.clip(from);  // throws on unknown ids
    const MotionClip& b = library.clip(to);
    const PoseCosts costs = pose_costs(a.end_pose(), b.start_pose());
    graph.edges.push_back(
        {from, to, lambda1 * costs.translation + lambda2 * costs.rotation});
  }
  return graph;
}

double embedding_cost(const Eigen::VectorXd& audio,
                      const Eigen::VectorXd& node, EmbeddingMetric metric) {
  if (audio.size() != node.size()) {
    throw ValidationError(ErrorCode::DimensionMismatch,
                          "embedding dimension mismatch");
  }
  if (metric == EmbeddingMetric::SquaredEuclidean) {
    return (audio - node).squaredNorm();
  }
  const double denom = audio.norm() * node.norm();
  if (denom < 1e-30) return 1.0;
  return 1.0 - audio.dot(node) / denom;
}

ViterbiResult viterbi_path(const MotionGraph& graph,
                           const AudioEmbeddingSequence& audio, int category) {
  const std::vector<int> node_ids = graph.library.category_clip_ids(category);
  if (node_ids.empty()) {
    throw RuntimeFailure(ErrorCode::InfeasiblePath,
                         "category " + std::to_string(category) +
                             " has no clips");
  }
  const int n = static_cast<int>(audio.embeddings.size());
  if (n < 1) {
    throw ValidationError(ErrorCode::ConfigError,
                          "audio sequence must contain at least one window");
  }
  const int k = static_cast<int>(node_ids.size());
  std::map<int, int> slot_of;  // clip id -> dense slot
  for (int s = 0; s < k; ++s) slot_of[node_ids[s]] = s;

  // category-subgraph edges, predecessors sorted by id for canonical ties
  std::vector<std::vector<std::pair<int, double>>> in_edges(k);
  for (const auto& e : graph.edges) {
    auto fi = slot_of.find(e.from);
    auto ti = slot_of.find(e.to);
    if (fi != slot_of.end() && ti != slot_of.end()) {
      in_edges[ti->second].push_back({fi->second, e.weight});
    }
  }
  for (auto& preds : in_edges) {
    std::sort(preds.begin(), preds.end());
  }

  constexpr double kInf = std::numeric_limits<double>::infinity();
  ViterbiResult result;
  std::vector<std::vector<double>> cost(n, std::vector<double>(k, kInf));
  std::vector<std::vector<int>> back(n, std::vector<int>(k, -1));

  std::vector<double> emission(k);
  for (int s = 0; s < k; ++s) {
    cost[0][s] = embedding_cost(audio.embeddings[0],
                                graph.library.clip(node_ids[s]).embedding,
                                graph.metric);
  }
  for (int t = 1; t < n; ++t) {
    for (int s = 0; s < k; ++s) {
      emission[s] = embedding_cost(audio.embeddings[t],
                                   graph.library.clip(node_ids[s]).embedding,
                                   graph.metric);
    }
    bool any = false;
    for (int s = 0; s < k; ++s) {
      for (const auto& [pred, weight] : in_edges[s]) {
        ++result.relaxations;
        const double c = cost[t - 1][pred] + weight + emission[s];
        // strict < with id-sorted predecessors keeps the lowest-id tie
        if (c < cost[t][s]) {
          cost[t][s] = c;
          back[t][s] = pred;
        }
      }
      any |= cost[t][s] < kInf;
    }
    if (!any) {
      throw RuntimeFailure(ErrorCode::InfeasiblePath,
                           "no feasible path at step " + std::to_string(t));
    }
  }

  int best = 0;
  for (int s = 1; s < k; ++s) {
    if (cost[n - 1][s] < cost[n - 1][best]) best = s;
  }
  if (cost[n - 1][best] == kInf) {
    throw RuntimeFailure(ErrorCode::InfeasiblePath,
                         "no feasible path at step " + std::to_string(n - 1));
  }
  result.total_cost = cost[n - 1][best];

  std::vector<int> slots(n);
  slots[n - 1] = best;
  for (int t = n - 1; t > 0; --t) {
    slots[t - 1] = back[t][slots[t]];
  }
  result.path.resize(n);
  result.emission_costs.resize(n);
  for (int t = 0; t < n; ++t) {
    result.path[t] = node_ids[slots[t]];
    result.emission_costs[t] =
        embedding_cost(audio.embeddings[t],
                       graph.library.clip(result.path[t]).embedding,
                       graph.metric);
  }
  result.transition_costs.resize(n > 1 ? n - 1 : 0);
  for (int t = 0; t + 1 < n; ++t) {
    for (const auto& [pred, weight] : in_edges[slots[t + 1]]) {
      if (pred == slots[t]) {
        result.transition_costs[t] = weight;
        break;
      }
    }
  }
  return result;
}

MotionTrack compose_track(const ClipLibrary& library,
                          const std::vector<int>& path, uint64_t seed) {
  if (path.empty()) {
    throw ValidationError(ErrorCode::CompositionError, "empty clip path");
  }
  std::mt19937_64 rng(seed);

  std::vector<int> expanded;
  for (size_t i = 0; i < path.size(); ++i) {
    if (i > 0) {
      const ClipCategory prev = library.clip(path[i - 1]).category;
      const ClipCategory next = library.clip(path[i]).category;
      if (prev.to != next.from) {
        const auto options = library.transition_clip_ids(prev.to, next.from);
        if (options.empty()) {
          throw ValidationError(
              ErrorCode::CompositionError,
              "no transition clip for category " + std::to_string(prev.to) +
                  " -> " + std::to_string(next.from));
        }
        std::uniform_int_distribution<size_t> pick(0, options.size() - 1);
        expanded.push_back(options[pick(rng)]);
      }
    }
    expanded.push_back(path[i]);
  }

  MotionTrack track;
  track.frame_rate = library.clip(expanded.front()).frame_rate;
  for (int id : expanded) {
    const MotionClip& clip = library.clip(id);
    track.frames.insert(track.frames.end(), clip.frames.begin(),
                        clip.frames.end());
    track.duration += clip.duration;
    track.clip_sequence.push_back(id);
  }
  return track;
}

}  // namespace rigforge
