#include <doctest.h>

#include "test_util.hpp"

#include <Eigen/Geometry>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <random>

#include "rigforge/error.hpp"
#include "rigforge/motion.hpp"
#include "rigforge/synthetic.hpp"

using namespace rigforge;

namespace {

PoseFrame simple_pose(int joints) {
  PoseFrame f;
  f.joint_rotations.assign(joints, Eigen::Quaterniond::Identity());
  f.joint_positions.assign(joints, Vec3::Zero());
  for (int j = 0; j < joints; ++j) f.joint_positions[j] = Vec3(j, 0, 0);
  return f;
}

// Exhaustive minimum of emission + edge costs over all clip sequences of
// length n within the category subgraph. Independent of the DP implementation.
double brute_force_min_cost(const MotionGraph& graph,
                            const AudioEmbeddingSequence& audio, int category,
                            std::vector<int>* best_path = nullptr) {
  const auto ids = graph.library.category_clip_ids(category);
  std::map<std::pair<int, int>, double> edge;
  for (const auto& e : graph.edges) edge[{e.from, e.to}] = e.weight;

  const int n = static_cast<int>(audio.embeddings.size());
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> seq(n), best_seq;
  std::function<void(int, double)> rec = [&](int step, double cost) {
    if (cost >= best) {
      // no pruning: costs are non-negative but keep exploration exact anyway
    }
    if (step == n) {
      if (cost < best) {
        best = cost;
        best_seq = seq;
      }
      return;
    }
    for (int id : ids) {
      if (step > 0) {
        auto it = edge.find({seq[step - 1], id});
        if (it == edge.end()) continue;
        const double c =
            cost + it->second +
            embedding_cost(audio.embeddings[step],
                           graph.library.clip(id).embedding, graph.metric);
        seq[step] = id;
        rec(step + 1, c);
      } else {
        seq[step] = id;
        rec(step + 1,
            cost + embedding_cost(audio.embeddings[0],
                                  graph.library.clip(id).embedding,
                                  graph.metric));
      }
    }
  };
  rec(0, 0.0);
  if (best_path) *best_path = best_seq;
  return best;
}

}  // namespace

TEST_CASE("quaternion_angle: geodesic angle basics") {
  const Eigen::Quaterniond id = Eigen::Quaterniond::Identity();
  CHECK(quaternion_angle(id, id) == 0.0);
  const Eigen::Quaterniond quarter(Eigen::AngleAxisd(M_PI / 2, Vec3::UnitY()));
  CHECK(quaternion_angle(id, quarter) == doctest::Approx(M_PI / 2).epsilon(1e-12));
  // q and -q are the same rotation
  Eigen::Quaterniond neg = quarter;
  neg.coeffs() *= -1.0;
  CHECK(quaternion_angle(id, neg) == doctest::Approx(M_PI / 2).epsilon(1e-12));
}

TEST_CASE("pose_costs: closed-form micro-cases") {
  const auto a = simple_pose(4);
  auto b = a;
  auto costs = pose_costs(a, b);
  CHECK(costs.translation == 0.0);
  CHECK(costs.rotation == 0.0);

  b.joint_positions[2] += Vec3(0, 0.3, 0);
  costs = pose_costs(a, b);
  CHECK(costs.translation == doctest::Approx(0.09).epsilon(1e-12));
  CHECK(costs.rotation == 0.0);

  b = a;
  b.joint_rotations[1] =
      Eigen::Quaterniond(Eigen::AngleAxisd(M_PI / 2, Vec3::UnitX()));
  costs = pose_costs(a, b);
  CHECK(costs.translation == 0.0);
  CHECK(costs.rotation ==
        doctest::Approx((M_PI / 2) * (M_PI / 2)).epsilon(1e-12));

  auto c = simple_pose(3);
  CHECK_THROWS_AS(pose_costs(a, c), ValidationError);
}

TEST_CASE("build_graph: edge weights follow lambda mixing") {
  const auto lib = make_clip_library(4, 3, 4, 8, 6, 8);

  const auto g11 = build_graph(lib, 1.0, 1.0);
  CHECK(g11.edges.size() == lib.adjacency.size());
  for (const auto& e : g11.edges) {
    CHECK(e.weight >= 0.0);
    CHECK(std::isfinite(e.weight));
  }

  // lambda1 = 0 leaves only the rotation term
  const auto g01 = build_graph(lib, 0.0, 1.0);
  const auto g10 = build_graph(lib, 1.0, 0.0);
  const auto g21 = build_graph(lib, 2.0, 1.0);
  for (size_t i = 0; i < g11.edges.size(); ++i) {
    const double tp = g10.edges[i].weight;
    const double tr = g01.edges[i].weight;
    CHECK(g11.edges[i].weight == doctest::Approx(tp + tr).epsilon(1e-12));
    // linear in lambda1
    CHECK(g21.edges[i].weight - g01.edges[i].weight ==
          doctest::Approx(2.0 * (g11.edges[i].weight - g01.edges[i].weight))
              .epsilon(1e-9));
  }
}

TEST_CASE("build_graph: identical shared poses give zero-weight edges") {
  // clips within a category share the canonical endpoints exactly
  const auto lib = make_clip_library(9, 2, 3, 4, 5, 6);
  const auto g = build_graph(lib, 1.0, 1.0);
  for (const auto& e : g.edges) {
    const auto& from = g.library.clip(e.from);
    const auto& to = g.library.clip(e.to);
    if (!from.category.is_transition() && !to.category.is_transition() &&
        from.category.to == to.category.from) {
      CHECK(e.weight < 1e-9);
    }
  }
}

TEST_CASE("build_graph: unknown adjacency clip is an error") {
  auto lib = make_clip_library(1, 2, 2, 4, 4, 4);
  lib.adjacency.push_back({0, 9999});
  CHECK_THROWS_AS(build_graph(lib, 1.0, 1.0), ValidationError);
}

TEST_CASE("viterbi_path: n=1 returns the emission argmin") {
  const auto lib = make_clip_library(2, 3, 5, 8, 6, 8);
  const auto g = build_graph(lib, 1.0, 1.0);
  AudioEmbeddingSequence audio;
  audio.embeddings.push_back(lib.clip(lib.category_clip_ids(1)[2]).embedding);
  const auto res = viterbi_path(g, audio, 1);
  REQUIRE(res.path.size() == 1);

  double best = std::numeric_limits<double>::infinity();
  int best_id = -1;
  for (int id : lib.category_clip_ids(1)) {
    const double c =
        embedding_cost(audio.embeddings[0], lib.clip(id).embedding, g.metric);
    if (c < best) {
      best = c;
      best_id = id;
    }
  }
  CHECK(res.path[0] == best_id);
  CHECK(res.total_cost == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("viterbi_path: exact match with exhaustive enumeration") {
  // seeded random graphs, <= 6 nodes per category, n <= 5
  for (uint64_t seed = 0; seed < 12; ++seed) {
    const int clips = 2 + static_cast<int>(seed % 5);  // 2..6 per category
    const auto lib = make_clip_library(seed, 3, clips, 8, 5, 6);
    const auto g = build_graph(lib, 1.0, 1.0);
    const int n = 1 + static_cast<int>(seed % 5);
    const int category = 1 + static_cast<int>(seed % 3);
    const auto audio = make_audio_sequence(lib, category, n, seed + 100);

    const auto res = viterbi_path(g, audio, category);
    std::vector<int> oracle_path;
    const double oracle = brute_force_min_cost(g, audio, category, &oracle_path);
    CHECK(std::abs(res.total_cost - oracle) < 1e-9);

    // bookkeeping identity: emissions + transitions sum to the total
    double sum = 0.0;
    for (double c : res.emission_costs) sum += c;
    for (double c : res.transition_costs) sum += c;
    CHECK(res.total_cost == doctest::Approx(sum).epsilon(1e-12));
  }
}

TEST_CASE("viterbi_path: canonical tie-break under full symmetry") {
  // all embeddings identical and all edge weights equal: lowest ids win
  auto lib = make_clip_library(3, 1, 4, 4, 4, 5);
  const Eigen::VectorXd shared = lib.clips[0].embedding;
  for (auto& c : lib.clips) c.embedding = shared;
  const auto g = build_graph(lib, 1.0, 1.0);  // canonical poses: weights 0

  AudioEmbeddingSequence audio;
  for (int i = 0; i < 3; ++i) audio.embeddings.push_back(shared);
  const auto res = viterbi_path(g, audio, 1);
  const double oracle = brute_force_min_cost(g, audio, 1);
  CHECK(std::abs(res.total_cost - oracle) < 1e-9);

  const auto ids = lib.category_clip_ids(1);
  for (int id : res.path) CHECK(id == ids.front());
}

TEST_CASE("viterbi_path: relaxation count grows linearly in n") {
  const auto lib = make_clip_library(6, 3, 6, 8, 6, 8);
  const auto g = build_graph(lib, 1.0, 1.0);
  const auto a2 = make_audio_sequence(lib, 2, 2, 1);
  const auto a4 = make_audio_sequence(lib, 2, 4, 1);
  const auto a8 = make_audio_sequence(lib, 2, 8, 1);
  const long r2 = viterbi_path(g, a2, 2).relaxations;
  const long r4 = viterbi_path(g, a4, 2).relaxations;
  const long r8 = viterbi_path(g, a8, 2).relaxations;
  CHECK(r4 - r2 > 0);
  CHECK(r8 - r4 == 2 * (r4 - r2));  // linear in n on a fixed graph
}

TEST_CASE("viterbi_path: infeasible subgraph raises a runtime failure") {
  auto lib = make_clip_library(8, 2, 3, 4, 4, 4);
  // strip all in-category edges for category 1 so length-2 paths cannot exist
  std::vector<std::pair<int, int>> kept;
  for (const auto& [a, b] : lib.adjacency) {
    const auto& ca = lib.clip(a).category;
    const auto& cb = lib.clip(b).category;
    if (!ca.is_transition() && !cb.is_transition() && ca.to == 1 && cb.from == 1)
      continue;
    kept.push_back({a, b});
  }
  lib.adjacency = kept;
  const auto g = build_graph(lib, 1.0, 1.0);
  const auto audio = make_audio_sequence(lib, 1, 3, 2);
  CHECK_THROWS_AS(viterbi_path(g, audio, 1), RuntimeFailure);
}

TEST_CASE("lint_clip_library: clean fixture and injected violation") {
  const auto lib = make_clip_library(5, 3, 4, 8, 6, 8);
  CHECK(lint_clip_library(lib).empty());

  auto broken = lib;
  const auto ids = broken.category_clip_ids(2);
  broken.clips[ids[1]].frames.back().joint_rotations[0] =
      Eigen::Quaterniond(Eigen::AngleAxisd(0.5, Vec3::UnitZ()));
  const auto issues = lint_clip_library(broken);
  CHECK(!issues.empty());
}

TEST_CASE("compose_track: single clip path reproduces the clip") {
  const auto lib = make_clip_library(2, 2, 3, 4, 5, 7);
  const int id = lib.category_clip_ids(1)[0];
  const auto track = compose_track(lib, {id}, 0);
  REQUIRE(track.frames.size() == lib.clip(id).frames.size());
  CHECK(track.clip_sequence == std::vector<int>{id});
  for (size_t f = 0; f < track.frames.size(); ++f) {
    for (int j = 0; j < track.frames[f].joint_count(); ++j) {
      CHECK(same_bits(track.frames[f].joint_positions[j],
                      lib.clip(id).frames[f].joint_positions[j]));
    }
  }
}

TEST_CASE("compose_track: junction discontinuity within pose tolerance") {
  const auto lib = make_clip_library(4, 2, 4, 8, 6, 8);
  const auto ids = lib.category_clip_ids(1);
  const auto track = compose_track(lib, {ids[0], ids[1]}, 0);
  const int junction = static_cast<int>(lib.clip(ids[0]).frames.size());
  const auto& before = track.frames[junction - 1];
  const auto& after = track.frames[junction];
  PoseToleranceConfig tol;
  for (int j = 0; j < before.joint_count(); ++j) {
    CHECK(quaternion_angle(before.joint_rotations[j],
                           after.joint_rotations[j]) <= tol.max_joint_angle);
  }
  // frame-count bookkeeping
  CHECK(track.frames.size() ==
        lib.clip(ids[0]).frames.size() + lib.clip(ids[1]).frames.size());
}

TEST_CASE("compose_track: category switches insert transition clips") {
  const auto lib = make_clip_library(7, 3, 4, 8, 6, 8);
  const int a = lib.category_clip_ids(1)[0];
  const int b = lib.category_clip_ids(2)[0];
  const auto track = compose_track(lib, {a, b}, 5);
  REQUIRE(track.clip_sequence.size() == 3);
  CHECK(track.clip_sequence[0] == a);
  CHECK(track.clip_sequence[2] == b);
  const auto& mid = lib.clip(track.clip_sequence[1]);
  CHECK(mid.category.is_transition());
  CHECK(mid.category.from == 1);
  CHECK(mid.category.to == 2);

  // category closure: no adjacent clips from different categories without a
  // transition between them
  for (size_t i = 1; i < track.clip_sequence.size(); ++i) {
    const auto& prev = lib.clip(track.clip_sequence[i - 1]).category;
    const auto& cur = lib.clip(track.clip_sequence[i]).category;
    CHECK(prev.to == cur.from);
  }

  size_t total = 0;
  for (int id : track.clip_sequence) total += lib.clip(id).frames.size();
  CHECK(track.frames.size() == total);

  // determinism contract
  const auto again = compose_track(lib, {a, b}, 5);
  CHECK(again.clip_sequence == track.clip_sequence);
}
