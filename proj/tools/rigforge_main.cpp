// rigforge: file-based pipeline runner for the rigging and animation
// toolkit. One subcommand per pipeline stage; every run is deterministic
// given (inputs, config, seed).

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <string>

#include "rigforge/error.hpp"
#include "rigforge/io.hpp"
#include "rigforge/rigid.hpp"
#include "rigforge/synthetic.hpp"

namespace fs = std::filesystem;
using rigforge::json;

namespace {

constexpr const char* kToolVersion = "0.1.0";

int log_level() {
  const char* env = std::getenv("RIGFORGE_LOG");
  if (!env) return 1;
  const std::string v(env);
  if (v == "quiet") return 0;
  if (v == "debug") return 2;
  return 1;
}

void log_info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "[rigforge] " << msg << "\n";
}

uint64_t fnv1a(const std::string& data) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// Hash of the semantic config: the output location does not change what a
// command computes, so it stays out of the hash and reruns into different
// directories remain byte-identical.
std::string config_hash(const json& config) {
  json semantic = config;
  semantic.erase("out");
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a(semantic.dump())));
  return buf;
}

struct RunContext {
  json config;
  fs::path out_dir;
  uint64_t seed = 0;

  json provenance() const {
    return json{{"tool_version", kToolVersion},
                {"config_hash", config_hash(config)},
                {"seed", seed}};
  }

  void write_json(json doc, const std::string& name) const {
    doc["provenance"] = provenance();
    rigforge::save_json_file(doc, (out_dir / name).string());
  }

  void write_mesh(const rigforge::Mesh& mesh, const std::string& name) const {
    const fs::path path = out_dir / name;
    rigforge::save_obj(mesh, path.string());
    // provenance comment prepended; OBJ parsers skip it
    std::ifstream in(path);
    std::string body((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    in.close();
    std::ofstream out(path);
    out << "# rigforge " << kToolVersion << " config=" << config_hash(config)
        << " seed=" << seed << "\n"
        << body;
  }

  void write_image(const rigforge::Image& image, const std::string& name) const {
    rigforge::save_png(image, (out_dir / name).string());
    rigforge::save_json_file(json{{"schema", "rigforge/provenance/1"},
                                  {"provenance", provenance()}},
                             (out_dir / (name + ".provenance.json")).string());
  }
};

void check_keys(const json& config, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : config.items()) {
    if (!allowed.count(key)) {
      throw rigforge::ValidationError(rigforge::ErrorCode::ConfigError,
                                      "unknown config key '" + key + "'");
    }
  }
}

// dotted-path override; value parsed as JSON when possible, else a string
void apply_override(json& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw rigforge::ValidationError(rigforge::ErrorCode::ConfigError,
                                    "override must be key=value: " + assignment);
  }
  std::string path = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(raw);
  } catch (const nlohmann::json::parse_error&) {
    value = raw;
  }
  json* node = &config;
  size_t start = 0;
  for (size_t dot = path.find('.'); dot != std::string::npos;
       start = dot + 1, dot = path.find('.', start)) {
    node = &(*node)[path.substr(start, dot - start)];
  }
  (*node)[path.substr(start)] = value;
}

RunContext make_context(const std::string& config_path,
                        const std::vector<std::string>& overrides,
                        const std::string& out_flag, long long seed_flag) {
  RunContext ctx;
  ctx.config = rigforge::load_json_file(config_path);
  for (const auto& o : overrides) apply_override(ctx.config, o);

  ctx.seed = ctx.config.value("seed", 0ull);
  if (seed_flag >= 0) ctx.seed = static_cast<uint64_t>(seed_flag);
  ctx.config["seed"] = ctx.seed;

  std::string out = ctx.config.value("out", std::string("."));
  if (!out_flag.empty()) out = out_flag;
  ctx.config["out"] = out;
  ctx.out_dir = out;
  fs::create_directories(ctx.out_dir);
  return ctx;
}

fs::path resolve(const RunContext& ctx, const std::string& key) {
  if (!ctx.config.contains(key)) {
    throw rigforge::ValidationError(rigforge::ErrorCode::ConfigError,
                                    "config is missing required key '" + key +
                                        "'");
  }
  return fs::path(ctx.config.at(key).get<std::string>());
}

// ---------------------------------------------------------------- transfer

int cmd_transfer(const RunContext& ctx) {
  using namespace rigforge;
  check_keys(ctx.config,
             {"seed", "out", "initial_mesh", "detail_mesh", "initial_landmarks",
              "detail_landmarks", "mask", "correspondence", "with_scale",
              "smoothing"});

  const Mesh initial = load_obj(resolve(ctx, "initial_mesh").string());
  Mesh detail = load_obj(resolve(ctx, "detail_mesh").string());
  const LandmarkSet lm_initial =
      load_landmarks(resolve(ctx, "initial_landmarks").string());
  const LandmarkSet lm_detail =
      load_landmarks(resolve(ctx, "detail_landmarks").string());
  RegionMask mask = load_region_mask(resolve(ctx, "mask").string());
  lm_initial.validate(initial);
  lm_detail.validate(detail);
  mask.validate(initial);

  const bool with_scale = ctx.config.value("with_scale", false);
  const AlignmentResult alignment = rigid_align(
      lm_detail.points(detail), lm_initial.points(initial), with_scale);
  for (auto& v : detail.vertices) v = alignment.transform.apply(v);
  log_info("aligned detail mesh, RMSE " + std::to_string(alignment.rmse));

  Correspondence corr;
  if (ctx.config.contains("correspondence")) {
    corr = load_correspondence(resolve(ctx, "correspondence").string());
  } else {
    corr = build_correspondence(initial, detail, mask);
  }

  const Mesh transferred = transfer_details(initial, detail, mask, corr);

  const json smoothing = ctx.config.value("smoothing", json::object());
  const int iterations = smoothing.value("iterations", 10);
  const double lambda = smoothing.value("lambda", 0.5);
  const double lap_before = max_transition_laplacian(transferred, mask);
  const Mesh result = smooth_transition(transferred, mask, iterations, lambda);
  const double lap_after = max_transition_laplacian(result, mask);

  double fixed_max_move = 0.0, replaceable_max_move = 0.0;
  int moved = 0;
  for (int v = 0; v < initial.vertex_count(); ++v) {
    const double d = (result.vertices[v] - initial.vertices[v]).norm();
    if (d > 0.0) ++moved;
    if (mask.labels[v] == RegionLabel::Fixed) {
      fixed_max_move = std::max(fixed_max_move, d);
    } else if (mask.labels[v] == RegionLabel::Replaceable) {
      replaceable_max_move = std::max(replaceable_max_move, d);
    }
  }

  ctx.write_mesh(result, "result.obj");
  ctx.write_json(
      json{{"schema", "rigforge/transfer-report/1"},
           {"alignment_rmse", alignment.rmse},
           {"moved_vertices", moved},
           {"fixed_region_max_displacement", fixed_max_move},
           {"replaceable_region_max_displacement", replaceable_max_move},
           {"transition_laplacian_before", lap_before},
           {"transition_laplacian_after", lap_after}},
      "transfer_report.json");
  return 0;
}

// --------------------------------------------------------------- calibrate

int cmd_calibrate(const RunContext& ctx) {
  using namespace rigforge;
  check_keys(ctx.config, {"seed", "out", "rig", "neutral_mesh", "target_mesh",
                          "residual_mask", "optimizer"});

  const RigDocument doc = load_rig_document(resolve(ctx, "rig").string());
  const Mesh neutral = load_obj(resolve(ctx, "neutral_mesh").string());
  const Mesh target = load_obj(resolve(ctx, "target_mesh").string());

  CalibrationConfig config;
  config.seed = ctx.seed;
  const json opt = ctx.config.value("optimizer", json::object());
  config.optimize_rotations = opt.value("optimize_rotations", false);
  config.learning_rate = opt.value("learning_rate", 1e-2);
  config.max_iterations = opt.value("max_iterations", 2000);
  config.rel_tol = opt.value("rel_tol", 1e-6);
  config.step_clamp = opt.value("step_clamp", 0.02);
  config.line_search = opt.value("line_search", true);

  std::vector<bool> residual_mask;
  if (ctx.config.contains("residual_mask")) {
    const RegionMask mask =
        load_region_mask(resolve(ctx, "residual_mask").string());
    mask.validate(neutral);
    residual_mask.resize(mask.labels.size());
    for (size_t i = 0; i < mask.labels.size(); ++i) {
      residual_mask[i] = mask.labels[i] != RegionLabel::Fixed;
    }
  }

  const CalibrationResult result =
      calibrate_skeleton(doc.rig, doc.binding, neutral, target, doc.overlap,
                         config, residual_mask);
  log_info("calibration: " + std::to_string(result.iterations) +
           " iterations, L_total " + std::to_string(result.loss_total) +
           (result.converged ? "" : " (non-converged)"));

  json out = calibration_result_to_json(result);
  out["initial_loss_total"] = result.loss_trace.front();
  ctx.write_json(out, "calibration_result.json");
  save_loss_trace_csv(result.loss_trace,
                      (ctx.out_dir / "loss_trace.csv").string());
  return 0;
}

// ------------------------------------------------------------------- color

int cmd_color_train(const RunContext& ctx) {
  using namespace rigforge;
  check_keys(ctx.config,
             {"seed", "out", "oracle", "pair_file", "pairs", "training"});

  std::vector<ColorSample> samples;
  if (ctx.config.contains("pair_file")) {
    samples = load_pair_file(resolve(ctx, "pair_file").string());
  } else {
    const RendererOracle oracle =
        make_oracle(ctx.config.value("oracle", std::string("gamma-matrix")));
    const int n = ctx.config.value("pairs", 10000);
    samples = generate_training_pairs(oracle, n, ctx.seed);
  }

  CorrectorTrainConfig config;
  config.seed = ctx.seed;
  const json training = ctx.config.value("training", json::object());
  config.learning_rate = training.value("learning_rate", 1e-3);
  config.batch_size = training.value("batch_size", 256);
  config.max_epochs = training.value("max_epochs", 2000);
  config.patience = training.value("patience", 100);

  const ColorCorrector model = train_corrector(samples, config);
  log_info("corrector trained, held-out MAE " +
           std::to_string(model.holdout_mae));

  ctx.write_json(color_model_to_json(model), "color_model.json");
  ctx.write_json(json{{"schema", "rigforge/color-report/1"},
                      {"pairs", samples.size()},
                      {"epochs_run", model.epochs_run},
                      {"final_train_mse", model.final_train_mse},
                      {"holdout_mae", model.holdout_mae}},
                 "color_report.json");
  return 0;
}

int cmd_color_correct(const RunContext& ctx) {
  using namespace rigforge;
  check_keys(ctx.config, {"seed", "out", "model", "texture"});
  const ColorCorrector model = load_color_model(resolve(ctx, "model").string());
  const Image texture = load_png(resolve(ctx, "texture").string());
  ctx.write_image(correct_texture(model, texture), "corrected.png");
  return 0;
}

int cmd_color_blend(const RunContext& ctx) {
  using namespace rigforge;
  check_keys(ctx.config, {"seed", "out", "original", "relit", "alpha"});
  const Image original = load_png(resolve(ctx, "original").string());
  const Image relit = load_png(resolve(ctx, "relit").string());
  const double alpha = ctx.config.value("alpha", 0.7);
  ctx.write_image(blend_relit(original, relit, alpha), "blended.png");
  return 0;
}

// ----------------------------------------------------------------- compose

int cmd_compose(const RunContext& ctx) {
  using namespace rigforge;
  check_keys(ctx.config, {"seed", "out", "clips", "audio", "category",
                          "lambda1", "lambda2", "metric"});

  const ClipLibrary library = load_clip_library(resolve(ctx, "clips").string());
  const auto issues = lint_clip_library(library);
  if (!issues.empty()) {
    std::string detail;
    for (const auto& issue : issues) {
      detail += "clip " + std::to_string(issue.clip_id) + ": " +
                issue.message + "; ";
    }
    throw ValidationError(ErrorCode::GraphError,
                          "clip library failed lint: " + detail);
  }
  const AudioEmbeddingSequence audio =
      load_audio_sequence(resolve(ctx, "audio").string());
  const int category = ctx.config.value("category", 1);
  const double lambda1 = ctx.config.value("lambda1", 1.0);
  const double lambda2 = ctx.config.value("lambda2", 1.0);
  const EmbeddingMetric metric =
      ctx.config.value("metric", std::string("squared-euclidean")) == "cosine"
          ? EmbeddingMetric::Cosine
          : EmbeddingMetric::SquaredEuclidean;

  const MotionGraph graph = build_graph(library, lambda1, lambda2, metric);
  const ViterbiResult path = viterbi_path(graph, audio, category);
  const MotionTrack track = compose_track(library, path.path, ctx.seed);
  log_info("composed " + std::to_string(track.frames.size()) + " frames, cost " +
           std::to_string(path.total_cost));

  ctx.write_json(motion_track_to_json(track), "track.json");

  double check = 0.0;
  for (double c : path.emission_costs) check += c;
  for (double c : path.transition_costs) check += c;
  ctx.write_json(json{{"schema", "rigforge/cost-breakdown/1"},
                      {"path", path.path},
                      {"total_cost", path.total_cost},
                      {"emission_costs", path.emission_costs},
                      {"transition_costs", path.transition_costs},
                      {"terms_sum", check}},
                 "cost_breakdown.json");
  return 0;
}

// -------------------------------------------------------------------- face

int cmd_face_train(const RunContext& ctx) {
  using namespace rigforge;
  check_keys(ctx.config, {"seed", "out", "features", "targets", "training"});

  std::vector<AudioFeatureTrack> features;
  for (const auto& p : ctx.config.at("features")) {
    features.push_back(load_feature_track(p.get<std::string>()));
  }
  std::vector<RigCoefficientTrack> targets;
  for (const auto& p : ctx.config.at("targets")) {
    targets.push_back(load_coefficient_track(p.get<std::string>()));
  }

  FaceTrainConfig config;
  config.seed = ctx.seed;
  const json training = ctx.config.value("training", json::object());
  config.window = training.value("window", 4);
  config.learning_rate = training.value("learning_rate", 1e-3);
  config.batch_size = training.value("batch_size", 256);
  config.max_epochs = training.value("max_epochs", 2000);
  config.patience = training.value("patience", 100);
  config.velocity_weight = training.value("velocity_weight", 1.0);
  if (training.contains("hidden")) {
    config.hidden = training.at("hidden").get<std::vector<int>>();
  }

  const FaceRegressor model = train_face_model(features, targets, config);
  log_info("face model trained, held-out L_rec/entry " +
           std::to_string(model.holdout_rec_per_entry));

  ctx.write_json(face_model_to_json(model), "face_model.json");
  ctx.write_json(json{{"schema", "rigforge/face-report/1"},
                      {"epochs_run", model.epochs_run},
                      {"final_train_loss", model.final_train_loss},
                      {"holdout_rec_per_entry", model.holdout_rec_per_entry}},
                 "face_report.json");
  return 0;
}

int cmd_face_drive(const RunContext& ctx) {
  using namespace rigforge;
  check_keys(ctx.config,
             {"seed", "out", "model", "features", "events", "templates"});
  const FaceRegressor model = load_face_model(resolve(ctx, "model").string());
  const AudioFeatureTrack features =
      load_feature_track(resolve(ctx, "features").string());

  RigCoefficientTrack track = drive_face(model, features);
  json warnings_json = json::array();
  if (ctx.config.contains("events")) {
    const auto events = load_events(resolve(ctx, "events").string());
    std::vector<InterjectionTemplate> templates;
    if (ctx.config.contains("templates")) {
      templates = load_templates(resolve(ctx, "templates").string());
    }
    std::vector<InterjectionWarning> warnings;
    track = apply_interjections(track, events, templates, &warnings);
    for (const auto& w : warnings) {
      warnings_json.push_back(
          json{{"trigger", w.trigger}, {"time", w.time_seconds}});
    }
  }

  json out = coefficient_track_to_json(track);
  out["warnings"] = warnings_json;
  ctx.write_json(out, "coefficients.json");
  return 0;
}

// ---------------------------------------------------------------- fixtures

int cmd_fixtures(const RunContext& ctx) {
  using namespace rigforge;
  check_keys(ctx.config, {"seed", "out"});
  const fs::path dir = ctx.out_dir;
  const uint64_t seed = ctx.seed;

  // detail-transfer inputs
  const BumpFixture bump = make_bump_fixture(seed);
  save_obj(bump.initial, (dir / "initial.obj").string());
  save_obj(bump.detail, (dir / "detail.obj").string());
  save_json_file(region_mask_to_json(bump.mask), (dir / "mask.json").string());
  save_json_file(landmarks_to_json(bump.landmarks),
                 (dir / "landmarks.json").string());
  save_json_file(json{{"initial_mesh", (dir / "initial.obj").string()},
                      {"detail_mesh", (dir / "detail.obj").string()},
                      {"initial_landmarks", (dir / "landmarks.json").string()},
                      {"detail_landmarks", (dir / "landmarks.json").string()},
                      {"mask", (dir / "mask.json").string()},
                      {"smoothing", json{{"iterations", 10}, {"lambda", 0.5}}},
                      {"seed", seed}},
                 (dir / "transfer_config.json").string());

  // calibration inputs
  const CalibrationFixture cal = make_calibration_fixture(seed + 1);
  save_obj(cal.neutral, (dir / "neutral.obj").string());
  save_obj(cal.target, (dir / "target.obj").string());
  save_json_file(rig_document_to_json({cal.rig, cal.binding, cal.overlap}),
                 (dir / "rig.json").string());
  json truth = json::array();
  for (const auto& [leaf, t] : cal.true_leaf_translations) {
    truth.push_back(json{{"joint", leaf},
                         {"translation", json::array({t.x(), t.y(), t.z()})}});
  }
  save_json_file(json{{"schema", "rigforge/fixture-truth/1"},
                      {"leaf_translations", truth}},
                 (dir / "calibration_truth.json").string());
  save_json_file(json{{"rig", (dir / "rig.json").string()},
                      {"neutral_mesh", (dir / "neutral.obj").string()},
                      {"target_mesh", (dir / "target.obj").string()},
                      {"seed", seed}},
                 (dir / "calibrate_config.json").string());

  // color inputs
  save_json_file(json{{"oracle", "gamma-matrix"},
                      {"pairs", 10000},
                      {"training",
                       json{{"learning_rate", 5e-3}, {"patience", 300}}},
                      {"seed", seed}},
                 (dir / "color_train_config.json").string());
  {
    Image texture = Image::create(64, 64, 3);
    std::mt19937_64 rng(seed + 2);
    std::uniform_real_distribution<float> uni(0.1f, 0.9f);
    for (auto& p : texture.pixels) p = uni(rng);
    save_png(texture, (dir / "texture.png").string());
  }

  // compose inputs
  const ClipLibrary library = make_clip_library(seed + 3, 5, 8, 8, 6, 6);
  save_json_file(clip_library_to_json(library), (dir / "clips.json").string());
  const AudioEmbeddingSequence audio =
      make_audio_sequence(library, 1, 4, seed + 4);
  save_json_file(audio_sequence_to_json(audio), (dir / "audio.json").string());
  save_json_file(json{{"clips", (dir / "clips.json").string()},
                      {"audio", (dir / "audio.json").string()},
                      {"category", 1},
                      {"lambda1", 1.0},
                      {"lambda2", 1.0},
                      {"seed", seed}},
                 (dir / "compose_config.json").string());

  // face inputs
  const FaceFixture face = make_face_fixture(seed + 5, 4, 200, 16, 20);
  json feature_paths = json::array(), target_paths = json::array();
  for (size_t i = 0; i < face.features.size(); ++i) {
    const std::string f = "features_" + std::to_string(i) + ".json";
    const std::string t = "targets_" + std::to_string(i) + ".json";
    save_json_file(feature_track_to_json(face.features[i]), (dir / f).string());
    save_json_file(coefficient_track_to_json(face.targets[i]),
                   (dir / t).string());
    feature_paths.push_back((dir / f).string());
    target_paths.push_back((dir / t).string());
  }
  save_json_file(json{{"features", feature_paths},
                      {"targets", target_paths},
                      {"training", json{{"max_epochs", 400}, {"patience", 60}}},
                      {"seed", seed}},
                 (dir / "face_train_config.json").string());

  // interjection templates + events
  {
    std::vector<InterjectionTemplate> templates(1);
    templates[0].trigger = "wow";
    templates[0].clip.frame_rate = 50.0;
    templates[0].clip.values = Eigen::MatrixXd::Constant(30, 20, 0.8);
    templates[0].blend_in_seconds = 0.2;
    templates[0].blend_out_seconds = 0.2;
    save_json_file(templates_to_json(templates),
                   (dir / "templates.json").string());
    save_json_file(events_to_json({{"wow", 1.0}}),
                   (dir / "events.json").string());
  }

  log_info("fixture pack written to " + dir.string());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rigging and animation-composition toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_flag;
  long long seed_flag = -1;
  std::vector<std::string> overrides;

  auto add_common = [&](CLI::App* cmd, bool config_required = true) {
    auto* opt = cmd->add_option("--config", config_path, "config JSON file");
    if (config_required) opt->required();
    cmd->add_option("--seed", seed_flag, "seed override");
    cmd->add_option("--out", out_flag, "output directory override");
    cmd->add_option("--set", overrides,
                    "config override key=value (dotted paths)");
  };

  auto* transfer = app.add_subcommand("transfer", "facial detail transfer");
  add_common(transfer);
  auto* calibrate = app.add_subcommand("calibrate", "skeleton calibration");
  add_common(calibrate);

  auto* color = app.add_subcommand("color", "color correction");
  color->require_subcommand(1);
  auto* color_train = color->add_subcommand("train", "train the corrector");
  add_common(color_train);
  auto* color_correct = color->add_subcommand("correct", "correct a texture");
  add_common(color_correct);
  auto* color_blend = color->add_subcommand("blend", "blend a relit image");
  add_common(color_blend);

  auto* compose = app.add_subcommand("compose", "motion-graph composition");
  add_common(compose);

  auto* face = app.add_subcommand("face", "speech-driven facial animation");
  face->require_subcommand(1);
  auto* face_train = face->add_subcommand("train", "train the regressor");
  add_common(face_train);
  auto* face_drive = face->add_subcommand("drive", "drive coefficients");
  add_common(face_drive);

  auto* fixtures =
      app.add_subcommand("fixtures", "write the synthetic fixture pack");
  fixtures->add_option("--seed", seed_flag, "fixture seed");
  fixtures->add_option("--out", out_flag, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    RunContext ctx;
    if (fixtures->parsed()) {
      ctx.config = json{{"seed", seed_flag >= 0 ? seed_flag : 0},
                        {"out", out_flag}};
      ctx.seed = seed_flag >= 0 ? static_cast<uint64_t>(seed_flag) : 0;
      ctx.out_dir = out_flag;
      fs::create_directories(ctx.out_dir);
      return cmd_fixtures(ctx);
    }
    ctx = make_context(config_path, overrides, out_flag, seed_flag);
    if (transfer->parsed()) return cmd_transfer(ctx);
    if (calibrate->parsed()) return cmd_calibrate(ctx);
    if (color_train->parsed()) return cmd_color_train(ctx);
    if (color_correct->parsed()) return cmd_color_correct(ctx);
    if (color_blend->parsed()) return cmd_color_blend(ctx);
    if (compose->parsed()) return cmd_compose(ctx);
    if (face_train->parsed()) return cmd_face_train(ctx);
    if (face_drive->parsed()) return cmd_face_drive(ctx);
    return 1;
  } catch (const rigforge::RuntimeFailure& e) {
    std::cerr << json{{"error", rigforge::error_code_name(e.code())},
                      {"message", e.what()}}
                     .dump()
              << "\n";
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const rigforge::Error& e) {
    std::cerr << json{{"error", rigforge::error_code_name(e.code())},
                      {"message", e.what()}}
                     .dump()
              << "\n";
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "internal"}, {"message", e.what()}}.dump()
              << "\n";
    return 3;
  }
}
