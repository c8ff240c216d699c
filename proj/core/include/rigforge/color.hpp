#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rigforge/image.hpp"
#include "rigforge/mlp.hpp"

namespace rigforge {

using Rgb = Eigen::Vector3d;

// (input color, rendered color), all channels in [0,1].
struct ColorSample {
  Rgb input;     // C'
  Rgb rendered;  // C = render(C')
};

// Deterministic stand-in for the engine's color response.
struct RendererOracle {
  std::string name;
  std::function<Rgb(const Rgb&)> render;
};

// Built-in presets: "identity", "affine" (0.8*c + 0.1), "gamma-matrix"
// (per-channel gamma 2.2 followed by a near-identity 3x3 mix, clamped).
RendererOracle make_oracle(const std::string& preset);

// Stratified RGB-cube lattice with seeded jitter; pairs are (C', oracle(C')).
std::vector<ColorSample> generate_training_pairs(const RendererOracle& oracle,
                                                 int count, uint64_t seed);

// Pairs captured offline (CSV rows r',g',b',r,g,b).
std::vector<ColorSample> load_pair_file(const std::string& path);

// Learned inverse of the renderer: maps rendered C back to source C'.
struct ColorCorrector {
  Mlp network;  // 3 -> 32 -> 32 -> 3
  uint64_t seed = 0;
  int epochs_run = 0;
  double final_train_mse = 0.0;
  double holdout_mae = 0.0;
};

struct CorrectorTrainConfig {
  double learning_rate = 1e-3;
  int batch_size = 256;
  int max_epochs = 2000;
  int patience = 100;
  double holdout_fraction = 0.1;
  uint64_t seed = 0;
  std::vector<int> hidden = {32, 32};
};

// Trains N to minimize sum_i ||C'_i - N(C_i)||; needs >= 100 pairs.
ColorCorrector train_corrector(const std::vector<ColorSample>& pairs,
                               const CorrectorTrainConfig& config);

// Forward pass clamped to [0,1].
Rgb correct_color(const ColorCorrector& model, const Rgb& rendered);

// Per-pixel correct_color; alpha channel untouched.
Image correct_texture(const ColorCorrector& model, const Image& texture);

// out = alpha*relit + (1-alpha)*original
Image blend_relit(const Image& original, const Image& relit, double alpha);

}  // namespace rigforge
