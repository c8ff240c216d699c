#include "rigforge/color.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "rigforge/error.hpp"

namespace rigforge {

namespace {

Rgb clamp01(const Rgb& c) {
  return c.cwiseMax(0.0).cwiseMin(1.0);
}

}  // namespace

RendererOracle make_oracle(const std::string& preset) {
  if (preset == "identity") {
    return {"identity", [](const Rgb& c) { return c; }};
  }
  if (preset == "affine") {
    return {"affine", [](const Rgb& c) { return clamp01(0.8 * c + Rgb::Constant(0.1)); }};
  }
  if (preset == "gamma-matrix") {
    // per-channel gamma 2.2, then a near-identity channel mix; invertible on
    // the interior of the cube
    Eigen::Matrix3d mix;
    mix << 0.92, 0.05, 0.03,
           0.04, 0.90, 0.06,
           0.02, 0.05, 0.93;
    return {"gamma-matrix", [mix](const Rgb& c) {
              Rgb g = c.array().max(0.0).pow(2.2).matrix();
              return clamp01(mix * g);
            }};
  }
  throw ValidationError(ErrorCode::ConfigError,
                        "unknown renderer oracle preset '" + preset + "'");
}

std::vector<ColorSample> generate_training_pairs(const RendererOracle& oracle,
                                                 int count, uint64_t seed) {
  if (count < 1) {
    throw ValidationError(ErrorCode::ConfigError,
                          "pair count must be at least 1");
  }
  // lattice resolution: smallest k with k^3 >= count
  int k = 1;
  while (k * k * k < count) ++k;
  const double cell = 1.0 / k;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(0.0, 1.0);

  std::vector<ColorSample> pairs;
  pairs.reserve(count);
  for (int r = 0; r < k && static_cast<int>(pairs.size()) < count; ++r) {
    for (int g = 0; g < k && static_cast<int>(pairs.size()) < count; ++g) {
      for (int b = 0; b < k && static_cast<int>(pairs.size()) < count; ++b) {
        Rgb c;
        if (k == 1) {
          c = Rgb(jitter(rng), jitter(rng), jitter(rng));
        } else if (count <= 8 && k == 2) {
          // corner lattice, no jitter
          c = Rgb(r, g, b);
        } else {
          c = Rgb((r + jitter(rng)) * cell, (g + jitter(rng)) * cell,
                  (b + jitter(rng)) * cell);
        }
        pairs.push_back({c, oracle.render(c)});
      }
    }
  }
  return pairs;
}

std::vector<ColorSample> load_pair_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError(ErrorCode::IoError, "cannot open pair file " + path);
  }
  std::vector<ColorSample> pairs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    ColorSample s;
    char comma;
    ss >> s.input.x() >> comma >> s.input.y() >> comma >> s.input.z() >>
        comma >> s.rendered.x() >> comma >> s.rendered.y() >> comma >>
        s.rendered.z();
    if (ss.fail()) {
      throw ValidationError(ErrorCode::FormatError,
                            "malformed pair row in " + path);
    }
    pairs.push_back(s);
  }
  return pairs;
}

ColorCorrector train_corrector(const std::vector<ColorSample>& pairs,
                               const CorrectorTrainConfig& config) {
  if (pairs.size() < 100) {
    throw ValidationError(ErrorCode::ConfigError,
                          "corrector training needs at least 100 pairs, got " +
                              std::to_string(pairs.size()));
  }
  const int n = static_cast<int>(pairs.size());
  const int n_holdout =
      std::max(1, static_cast<int>(n * config.holdout_fraction));

  // seeded split
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::mt19937_64 rng(config.seed ^ 0x9e3779b97f4a7c15ull);
  std::shuffle(order.begin(), order.end(), rng);

  const int n_train = n - n_holdout;
  Eigen::MatrixXd x_train(3, n_train), y_train(3, n_train);
  Eigen::MatrixXd x_hold(3, n_holdout), y_hold(3, n_holdout);
  for (int i = 0; i < n; ++i) {
    const ColorSample& s = pairs[order[i]];
    // direction: rendered C in, source C' out
    if (i < n_train) {
      x_train.col(i) = s.rendered;
      y_train.col(i) = s.input;
    } else {
      x_hold.col(i - n_train) = s.rendered;
      y_hold.col(i - n_train) = s.input;
    }
  }

  std::vector<int> sizes{3};
  sizes.insert(sizes.end(), config.hidden.begin(), config.hidden.end());
  sizes.push_back(3);

  ColorCorrector model;
  model.seed = config.seed;
  model.network = Mlp::random_init(sizes, config.seed);

  MlpTrainConfig tc;
  tc.learning_rate = config.learning_rate;
  tc.batch_size = config.batch_size;
  tc.max_epochs = config.max_epochs;
  tc.patience = config.patience;
  tc.seed = config.seed;
  const MlpTrainReport report =
      train_mlp(model.network, x_train, y_train, x_hold, y_hold, tc);

  model.epochs_run = report.epochs_run;
  model.final_train_mse = report.final_train_mse;
  model.holdout_mae = report.holdout_mae;
  return model;
}

Rgb correct_color(const ColorCorrector& model, const Rgb& rendered) {
  return clamp01(model.network.forward(Eigen::VectorXd(rendered)));
}

Image correct_texture(const ColorCorrector& model, const Image& texture) {
  if (texture.channels != 3 && texture.channels != 4) {
    throw ValidationError(ErrorCode::FormatError,
                          "correct_texture expects an RGB or RGBA image");
  }
  Image out = texture;
  const size_t n_pixels = static_cast<size_t>(texture.width) * texture.height;

  // batch all pixels through one forward pass
  Eigen::MatrixXd batch(3, n_pixels);
  for (size_t p = 0; p < n_pixels; ++p) {
    const size_t base = p * texture.channels;
    batch.col(p) = Rgb(texture.pixels[base], texture.pixels[base + 1],
                       texture.pixels[base + 2]);
  }
  const Eigen::MatrixXd corrected = model.network.forward(batch);
  for (size_t p = 0; p < n_pixels; ++p) {
    const size_t base = p * texture.channels;
    for (int c = 0; c < 3; ++c) {
      out.pixels[base + c] = static_cast<float>(
          std::min(1.0, std::max(0.0, corrected(c, p))));
    }
  }
  return out;
}

Image blend_relit(const Image& original, const Image& relit, double alpha) {
  if (original.width != relit.width || original.height != relit.height ||
      original.channels != relit.channels) {
    throw ValidationError(ErrorCode::FormatError,
                          "blend_relit images must have equal dimensions");
  }
  if (alpha < 0.0 || alpha > 1.0) {
    throw ValidationError(ErrorCode::ConfigError,
                          "blend alpha must be in [0,1]");
  }
  Image out = original;
  for (size_t i = 0; i < out.pixels.size(); ++i) {
    out.pixels[i] = static_cast<float>(alpha * relit.pixels[i] +
                                       (1.0 - alpha) * original.pixels[i]);
  }
  return out;
}

}  // namespace rigforge
