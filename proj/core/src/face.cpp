#include "rigforge/face.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "rigforge/error.hpp"

namespace rigforge {

void RigCoefficientTrack::validate() const {
  if (frame_count() < 1 || control_count() < 1) {
    throw ValidationError(ErrorCode::DimensionMismatch,
                          "coefficient track must be at least 1x1");
  }
  if (!control_names.empty() &&
      static_cast<int>(control_names.size()) != control_count()) {
    throw ValidationError(ErrorCode::DimensionMismatch,
                          "control-name table length mismatch");
  }
  if ((values.array() < -1e-12).any() || (values.array() > 1.0 + 1e-12).any()) {
    throw ValidationError(ErrorCode::DimensionMismatch,
                          "coefficient values must lie in [0,1]");
  }
}

namespace {

void check_same_shape(const RigCoefficientTrack& a,
                      const RigCoefficientTrack& b) {
  if (a.frame_count() != b.frame_count() ||
      a.control_count() != b.control_count()) {
    throw ValidationError(
        ErrorCode::DimensionMismatch,
        "track shapes differ: " + std::to_string(a.frame_count()) + "x" +
            std::to_string(a.control_count()) + " vs " +
            std::to_string(b.frame_count()) + "x" +
            std::to_string(b.control_count()));
  }
}

// Feature window around frame t, edge-replicated, flattened frame-major.
Eigen::VectorXd window_features(const AudioFeatureTrack& features, int t,
                                int w) {
  const int dim = features.feature_dim();
  const int T = features.frame_count();
  Eigen::VectorXd out((2 * w + 1) * dim);
  for (int k = -w; k <= w; ++k) {
    const int src = std::clamp(t + k, 0, T - 1);
    out.segment((k + w) * dim, dim) = features.values.row(src).transpose();
  }
  return out;
}

}  // namespace

double rec_loss(const RigCoefficientTrack& predicted,
                const RigCoefficientTrack& truth) {
  check_same_shape(predicted, truth);
  return (predicted.values - truth.values).squaredNorm();
}

double vel_loss(const RigCoefficientTrack& predicted,
                const RigCoefficientTrack& truth) {
  check_same_shape(predicted, truth);
  const int T = predicted.frame_count();
  if (T < 2) return 0.0;
  const Eigen::MatrixXd dp =
      predicted.values.bottomRows(T - 1) - predicted.values.topRows(T - 1);
  const Eigen::MatrixXd dt =
      truth.values.bottomRows(T - 1) - truth.values.topRows(T - 1);
  return (dp - dt).squaredNorm();
}

FaceRegressor train_face_model(const std::vector<AudioFeatureTrack>& features,
                               const std::vector<RigCoefficientTrack>& targets,
                               const FaceTrainConfig& config) {
  if (features.empty() || features.size() != targets.size()) {
    throw ValidationError(ErrorCode::DimensionMismatch,
                          "need at least one matched feature/target pair");
  }
  const int dim = features.front().feature_dim();
  const int n_controls = targets.front().control_count();
  const int w = config.window;

  // Flatten all tracks into windowed frame samples; consecutive-frame pairs
  // never cross a track boundary.
  std::vector<Eigen::VectorXd> xs;
  std::vector<Eigen::VectorXd> ys;
  std::vector<std::pair<int, int>> pairs;  // (t-1, t) sample indices
  for (size_t p = 0; p < features.size(); ++p) {
    const auto& f = features[p];
    const auto& y = targets[p];
    y.validate();
    if (f.frame_count() != y.frame_count()) {
      throw ValidationError(ErrorCode::DimensionMismatch,
                            "feature/target frame counts differ in pair " +
                                std::to_string(p));
    }
    if (f.feature_dim() != dim || y.control_count() != n_controls) {
      throw ValidationError(ErrorCode::DimensionMismatch,
                            "inconsistent dimensions across training pairs");
    }
    const int base = static_cast<int>(xs.size());
    for (int t = 0; t < f.frame_count(); ++t) {
      xs.push_back(window_features(f, t, w));
      ys.push_back(y.values.row(t).transpose());
      if (t > 0) pairs.push_back({base + t - 1, base + t});
    }
  }
  if (pairs.empty()) pairs.push_back({0, 0});

  std::mt19937_64 rng(config.seed);
  std::shuffle(pairs.begin(), pairs.end(), rng);
  const int n_pairs = static_cast<int>(pairs.size());
  const int n_holdout =
      std::max(1, static_cast<int>(n_pairs * config.holdout_fraction));
  const int n_train = std::max(1, n_pairs - n_holdout);
  std::vector<std::pair<int, int>> train_pairs(pairs.begin(),
                                               pairs.begin() + n_train);
  std::vector<std::pair<int, int>> hold_pairs(pairs.begin() + n_train,
                                              pairs.end());

  FaceRegressor model;
  model.window = w;
  model.feature_dim = dim;
  model.control_count = n_controls;
  model.seed = config.seed;
  std::vector<int> sizes{(2 * w + 1) * dim};
  sizes.insert(sizes.end(), config.hidden.begin(), config.hidden.end());
  sizes.push_back(n_controls);
  model.network = Mlp::random_init(sizes, config.seed);

  AdamOptimizer optimizer(model.network, config.learning_rate);

  auto holdout_rec = [&]() {
    double acc = 0.0;
    long entries = 0;
    for (const auto& [a, b] : hold_pairs) {
      for (int s : {a, b}) {
        acc += (model.network.forward(Eigen::VectorXd(xs[s])) - ys[s])
                   .squaredNorm();
        entries += n_controls;
      }
    }
    return entries > 0 ? acc / entries : 0.0;
  };

  double best_monitor = std::numeric_limits<double>::infinity();
  auto best_w = model.network.weights();
  auto best_b = model.network.biases();
  int since_best = 0;

  FaceRegressor* out = &model;
  const double vw = config.velocity_weight;
  for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
    std::shuffle(train_pairs.begin(), train_pairs.end(), rng);
    double epoch_loss = 0.0;
    for (int start = 0; start < n_train; start += config.batch_size) {
      const int bs = std::min(config.batch_size, n_train - start);
      Eigen::MatrixXd xb(sizes.front(), 2 * bs);
      Eigen::MatrixXd yb(n_controls, 2 * bs);
      for (int k = 0; k < bs; ++k) {
        const auto& [a, b] = train_pairs[start + k];
        xb.col(2 * k) = xs[a];
        xb.col(2 * k + 1) = xs[b];
        yb.col(2 * k) = ys[a];
        yb.col(2 * k + 1) = ys[b];
      }
      const auto activations = mlp_forward_cached(model.network, xb);
      const Eigen::MatrixXd& pred = activations.back();

      // per pair: 0.5*rec(t-1) + 0.5*rec(t) + vw*velocity term
      Eigen::MatrixXd delta(n_controls, 2 * bs);
      for (int k = 0; k < bs; ++k) {
        const Eigen::VectorXd ra = pred.col(2 * k) - yb.col(2 * k);
        const Eigen::VectorXd rb = pred.col(2 * k + 1) - yb.col(2 * k + 1);
        const Eigen::VectorXd rv = rb - ra;  // (pred delta) - (truth delta)
        epoch_loss += 0.5 * ra.squaredNorm() + 0.5 * rb.squaredNorm() +
                      vw * rv.squaredNorm();
        delta.col(2 * k) = ra - 2.0 * vw * rv;
        delta.col(2 * k + 1) = rb + 2.0 * vw * rv;
      }
      optimizer.step(model.network,
                     mlp_backward(model.network, activations, delta / bs));
    }
    if (!std::isfinite(epoch_loss)) {
      throw RuntimeFailure(ErrorCode::TrainingFailure,
                           "face training diverged at epoch " +
                               std::to_string(epoch));
    }
    out->epochs_run = epoch + 1;
    out->final_train_loss = epoch_loss / n_train;

    const double monitor = holdout_rec();
    if (monitor < best_monitor * (1.0 - 1e-6)) {
      best_monitor = monitor;
      best_w = model.network.weights();
      best_b = model.network.biases();
      since_best = 0;
    } else if (config.patience > 0 && ++since_best >= config.patience) {
      break;
    }
  }
  model.network.weights() = best_w;
  model.network.biases() = best_b;
  model.holdout_rec_per_entry = holdout_rec();
  return model;
}

RigCoefficientTrack drive_face(const FaceRegressor& model,
                               const AudioFeatureTrack& features) {
  if (features.feature_dim() != model.feature_dim) {
    throw ValidationError(ErrorCode::DimensionMismatch,
                          "feature dimension " +
                              std::to_string(features.feature_dim()) +
                              " does not match model (" +
                              std::to_string(model.feature_dim) + ")");
  }
  const int T = features.frame_count();
  Eigen::MatrixXd batch((2 * model.window + 1) * model.feature_dim, T);
  for (int t = 0; t < T; ++t) {
    batch.col(t) = window_features(features, t, model.window);
  }
  const Eigen::MatrixXd pred = model.network.forward(batch);

  RigCoefficientTrack track;
  track.frame_rate = features.frame_rate;
  track.values = pred.transpose().cwiseMax(0.0).cwiseMin(1.0);
  return track;
}

void InterjectionTemplate::validate() const {
  clip.validate();
  const double duration = clip.frame_count() / clip.frame_rate;
  if (blend_in_seconds < 0.0 || blend_out_seconds < 0.0 ||
      blend_in_seconds >= duration || blend_out_seconds >= duration) {
    throw ValidationError(ErrorCode::ConfigError,
                          "blend windows must be >= 0 and shorter than the "
                          "template");
  }
}

RigCoefficientTrack apply_interjections(
    const RigCoefficientTrack& track,
    const std::vector<InterjectionEvent>& events,
    const std::vector<InterjectionTemplate>& templates,
    std::vector<InterjectionWarning>* warnings) {
  track.validate();
  RigCoefficientTrack out = track;
  const double fps = track.frame_rate;
  const double track_duration = track.frame_count() / fps;

  std::vector<InterjectionEvent> ordered = events;
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto& a, const auto& b) {
                     return a.time_seconds < b.time_seconds;
                   });

  for (const auto& event : ordered) {
    if (event.time_seconds < 0.0 || event.time_seconds > track_duration) {
      throw ValidationError(ErrorCode::ConfigError,
                            "event time " + std::to_string(event.time_seconds) +
                                " outside track duration");
    }
    const InterjectionTemplate* tpl = nullptr;
    for (const auto& t : templates) {
      if (t.trigger == event.trigger) {
        tpl = &t;
        break;
      }
    }
    if (!tpl) {
      if (warnings) warnings->push_back({event.trigger, event.time_seconds});
      continue;
    }
    tpl->validate();
    if (tpl->clip.control_count() != track.control_count()) {
      throw ValidationError(ErrorCode::DimensionMismatch,
                            "template control count mismatch");
    }

    const int start = static_cast<int>(std::lround(event.time_seconds * fps));
    const int len = tpl->clip.frame_count();
    const double bi = tpl->blend_in_seconds * fps;
    const double bo = tpl->blend_out_seconds * fps;
    for (int k = 0; k < len; ++k) {
      const int t = start + k;
      if (t < 0 || t >= track.frame_count()) continue;
      double weight = 1.0;
      if (bi > 0.0) weight = std::min(weight, k / bi);
      if (bo > 0.0) weight = std::min(weight, (len - 1 - k) / bo);
      out.values.row(t) = (1.0 - weight) * out.values.row(t) +
                          weight * tpl->clip.values.row(k);
    }
  }
  out.values = out.values.cwiseMax(0.0).cwiseMin(1.0);
  return out;
}

}  // namespace rigforge
