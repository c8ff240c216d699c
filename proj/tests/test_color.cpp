#include <doctest.h>

#include "test_util.hpp"

#include <cmath>

#include "rigforge/color.hpp"
#include "rigforge/error.hpp"

using namespace rigforge;

TEST_CASE("make_oracle: presets behave as documented") {
  const auto identity = make_oracle("identity");
  const Rgb c(0.25, 0.5, 0.75);
  CHECK((identity.render(c) - c).norm() == 0.0);

  const auto affine = make_oracle("affine");
  const Rgb a = affine.render(c);
  CHECK(a[0] == doctest::Approx(0.8 * 0.25 + 0.1).epsilon(1e-12));
  CHECK(a[2] == doctest::Approx(0.8 * 0.75 + 0.1).epsilon(1e-12));

  // gamma 2.2 on mid gray: 0.5^2.2 ~ 0.2176, then the near-identity mix
  const auto gm = make_oracle("gamma-matrix");
  const Rgb g = gm.render(Rgb(0.5, 0.5, 0.5));
  const double gamma = std::pow(0.5, 2.2);
  CHECK(gamma == doctest::Approx(0.2176).epsilon(1e-3));
  // rows of the mix matrix sum to 1, so a gray input stays at the gamma value
  for (int i = 0; i < 3; ++i) {
    CHECK(g[i] == doctest::Approx(gamma).epsilon(1e-9));
  }

  CHECK_THROWS_AS(make_oracle("nope"), ValidationError);
}

TEST_CASE("generate_training_pairs: corner lattice and identity oracle") {
  const auto identity = make_oracle("identity");
  const auto corners = generate_training_pairs(identity, 8, 1);
  REQUIRE(corners.size() == 8);
  for (const auto& s : corners) {
    for (int i = 0; i < 3; ++i) {
      CHECK((s.input[i] == 0.0 || s.input[i] == 1.0));
    }
    CHECK((s.rendered - s.input).norm() == 0.0);
  }

  const auto many = generate_training_pairs(identity, 500, 2);
  CHECK(many.size() >= 500);
  for (const auto& s : many) {
    for (int i = 0; i < 3; ++i) {
      CHECK(s.input[i] >= 0.0);
      CHECK(s.input[i] <= 1.0);
    }
    CHECK((s.rendered - s.input).norm() == 0.0);
  }

  // seeded: same seed reproduces, different seed jitters differently
  const auto again = generate_training_pairs(identity, 500, 2);
  CHECK(same_bits(again[13].input, many[13].input));
  const auto other = generate_training_pairs(identity, 500, 3);
  CHECK(!same_bits(other[13].input, many[13].input));
}

TEST_CASE("train_corrector: identity oracle learns below 1/255") {
  const auto oracle = make_oracle("identity");
  const auto pairs = generate_training_pairs(oracle, 2000, 7);
  CorrectorTrainConfig cfg;
  cfg.seed = 7;
  cfg.max_epochs = 1500;
  const auto model = train_corrector(pairs, cfg);
  CHECK(model.holdout_mae < 1.0 / 255.0);

  const Rgb mid = correct_color(model, Rgb(0.5, 0.5, 0.5));
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(mid[i] - 0.5) < 1.0 / 255.0);
  }
}

TEST_CASE("train_corrector: affine oracle learns the inverse below 1/255") {
  const auto oracle = make_oracle("affine");
  const auto pairs = generate_training_pairs(oracle, 2000, 11);
  CorrectorTrainConfig cfg;
  cfg.seed = 11;
  cfg.max_epochs = 400;
  const auto model = train_corrector(pairs, cfg);
  CHECK(model.holdout_mae < 1.0 / 255.0);

  // round trip: oracle(N(C)) ~ C on an interior color
  const Rgb c = oracle.render(Rgb(0.4, 0.6, 0.5));
  const Rgb back = oracle.render(correct_color(model, c));
  CHECK((back - c).lpNorm<Eigen::Infinity>() < 2.0 / 255.0);
}

TEST_CASE("train_corrector: rejects tiny pair sets and is reproducible") {
  const auto oracle = make_oracle("identity");
  const auto tiny = generate_training_pairs(oracle, 50, 1);
  CHECK_THROWS_AS(train_corrector(tiny, {}), ValidationError);

  const auto pairs = generate_training_pairs(oracle, 300, 5);
  CorrectorTrainConfig cfg;
  cfg.seed = 5;
  cfg.max_epochs = 50;
  const auto a = train_corrector(pairs, cfg);
  const auto b = train_corrector(pairs, cfg);
  CHECK(a.final_train_mse == b.final_train_mse);
  CHECK(a.holdout_mae == b.holdout_mae);
  for (size_t l = 0; l < a.network.weights().size(); ++l) {
    CHECK(same_bits(a.network.weights()[l], b.network.weights()[l]));
  }
}

TEST_CASE("correct_color: clamp contract at the cube corners") {
  ColorCorrector model;
  model.network = Mlp::random_init({3, 32, 32, 3}, 3);
  const Rgb black = correct_color(model, Rgb(0, 0, 0));
  const Rgb white = correct_color(model, Rgb(1, 1, 1));
  for (int i = 0; i < 3; ++i) {
    CHECK(black[i] >= 0.0);
    CHECK(black[i] <= 1.0);
    CHECK(white[i] >= 0.0);
    CHECK(white[i] <= 1.0);
  }
}

TEST_CASE("correct_texture: per-pixel map, alpha untouched") {
  const auto oracle = make_oracle("identity");
  const auto pairs = generate_training_pairs(oracle, 300, 2);
  CorrectorTrainConfig cfg;
  cfg.seed = 2;
  cfg.max_epochs = 30;
  const auto model = train_corrector(pairs, cfg);

  Image one = Image::create(1, 1, 3);
  one.at(0, 0, 0) = 0.2f;
  one.at(0, 0, 1) = 0.4f;
  one.at(0, 0, 2) = 0.6f;
  const auto out1 = correct_texture(model, one);
  const Rgb direct = correct_color(model, Rgb(0.2f, 0.4f, 0.6f));
  for (int c = 0; c < 3; ++c) {
    CHECK(out1.at(0, 0, c) == doctest::Approx(direct[c]).epsilon(1e-6));
  }

  Image rgba = Image::create(4, 2, 4);
  for (int y = 0; y < 2; ++y)
    for (int x = 0; x < 4; ++x) {
      rgba.at(x, y, 0) = 0.3f;
      rgba.at(x, y, 1) = 0.5f;
      rgba.at(x, y, 2) = 0.7f;
      rgba.at(x, y, 3) = 0.25f * x;
    }
  const auto out2 = correct_texture(model, rgba);
  CHECK(out2.width == 4);
  CHECK(out2.channels == 4);
  for (int y = 0; y < 2; ++y)
    for (int x = 0; x < 4; ++x) {
      CHECK(out2.at(x, y, 3) == rgba.at(x, y, 3));  // alpha untouched
      // uniform rgb stays uniform
      CHECK(out2.at(x, y, 0) == out2.at(0, 0, 0));
    }

  Image gray;
  gray.width = 2;
  gray.height = 2;
  gray.channels = 1;
  gray.pixels.assign(4, 0.5f);
  CHECK_THROWS_AS(correct_texture(model, gray), ValidationError);
}

TEST_CASE("blend_relit: endpoints and midpoint") {
  Image black = Image::create(3, 2, 3);
  Image white = Image::create(3, 2, 3);
  std::fill(white.pixels.begin(), white.pixels.end(), 1.0f);

  const auto zero = blend_relit(black, white, 0.0);
  CHECK(zero.pixels == black.pixels);
  const auto one = blend_relit(black, white, 1.0);
  CHECK(one.pixels == white.pixels);
  const auto mid = blend_relit(black, white, 0.5);
  for (float p : mid.pixels) CHECK(p == doctest::Approx(0.5f));

  Image other = Image::create(2, 2, 3);
  CHECK_THROWS_AS(blend_relit(black, other, 0.5), ValidationError);
}
