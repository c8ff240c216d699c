#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "rigforge/mlp.hpp"

namespace rigforge {

// T frames x N controls, values in [0,1], rows = frames.
struct RigCoefficientTrack {
  Eigen::MatrixXd values;
  double frame_rate = 50.0;
  std::vector<std::string> control_names;  // optional, size N or empty

  int frame_count() const { return static_cast<int>(values.rows()); }
  int control_count() const { return static_cast<int>(values.cols()); }
  void validate() const;
};

// Per-frame feature vectors aligned to the coefficient track, rows = frames.
struct AudioFeatureTrack {
  Eigen::MatrixXd values;
  double frame_rate = 50.0;

  int frame_count() const { return static_cast<int>(values.rows()); }
  int feature_dim() const { return static_cast<int>(values.cols()); }
};

// L_rec = sum_t sum_i (b_{t,i} - bhat_{t,i})^2
double rec_loss(const RigCoefficientTrack& predicted,
                const RigCoefficientTrack& truth);

// L_vel = sum_{t=2..T} sum_i ((b_t - b_{t-1}) - (bhat_t - bhat_{t-1}))^2;
// defined as 0 for T < 2.
double vel_loss(const RigCoefficientTrack& predicted,
                const RigCoefficientTrack& truth);

// Non-autoregressive windowed decoder: each output frame is a pure function
// of the features in [t-w, t+w] (edge-replicated at the track boundaries).
struct FaceRegressor {
  Mlp network;
  int window = 4;  // half-window w
  int feature_dim = 0;
  int control_count = 0;
  uint64_t seed = 0;
  int epochs_run = 0;
  double final_train_loss = 0.0;
  double holdout_rec_per_entry = 0.0;  // held-out L_rec / (T*N)
};

struct FaceTrainConfig {
  int window = 4;
  std::vector<int> hidden = {128, 128};
  double learning_rate = 1e-3;
  int batch_size = 256;
  int max_epochs = 2000;
  int patience = 100;
  double velocity_weight = 1.0;  // weight on the L_vel surrogate term
  double holdout_fraction = 0.1;
  uint64_t seed = 0;
};

// Minimizes L_rec + L_vel over the paired tracks; seeded and reproducible.
FaceRegressor train_face_model(const std::vector<AudioFeatureTrack>& features,
                               const std::vector<RigCoefficientTrack>& targets,
                               const FaceTrainConfig& config);

// One batched forward pass over all frames; output clamped to [0,1], frame
// count equal to the input frame count.
RigCoefficientTrack drive_face(const FaceRegressor& model,
                               const AudioFeatureTrack& features);

struct InterjectionTemplate {
  std::string trigger;
  RigCoefficientTrack clip;
  double blend_in_seconds = 0.2;
  double blend_out_seconds = 0.2;

  void validate() const;
};

struct InterjectionEvent {
  std::string trigger;
  double time_seconds = 0.0;
};

// Record of triggers that had no matching template.
struct InterjectionWarning {
  std::string trigger;
  double time_seconds = 0.0;
};

// Crossfades matched templates over the base track (linear blend-in, full
// template mid-section, blend-out); overlaps resolve latest-event-wins.
RigCoefficientTrack apply_interjections(
    const RigCoefficientTrack& track, const std::vector<InterjectionEvent>& events,
    const std::vector<InterjectionTemplate>& templates,
    std::vector<InterjectionWarning>* warnings = nullptr);

}  // namespace rigforge
