#include "rigforge/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "rigforge/error.hpp"

namespace rigforge {

namespace {

json vec3_to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Vec3 vec3_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3) {
    throw ValidationError(ErrorCode::SchemaError, "expected a 3-vector");
  }
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

json quat_to_json(const Eigen::Quaterniond& q) {
  return json::array({q.w(), q.x(), q.y(), q.z()});
}

Eigen::Quaterniond quat_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4) {
    throw ValidationError(ErrorCode::SchemaError,
                          "expected a quaternion [w,x,y,z]");
  }
  return Eigen::Quaterniond(j[0].get<double>(), j[1].get<double>(),
                            j[2].get<double>(), j[3].get<double>());
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) {
    throw ValidationError(ErrorCode::SchemaError, "expected a matrix");
  }
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j[0].size());
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (static_cast<int>(j[r].size()) != cols) {
      throw ValidationError(ErrorCode::SchemaError, "ragged matrix rows");
    }
    for (int c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
  }
  return m;
}

// rows read from a CSV file, all the same width
Eigen::MatrixXd load_csv_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError(ErrorCode::IoError, "cannot open CSV " + path);
  }
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ValidationError(ErrorCode::FormatError,
                            "ragged CSV rows in " + path);
    }
    rows.push_back(std::move(row));
  }
  Eigen::MatrixXd m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (size_t r = 0; r < rows.size(); ++r) {
    for (size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
  }
  return m;
}

// header documents may inline rows or point at a sidecar CSV
Eigen::MatrixXd load_body_matrix(const json& doc, const std::string& header_path) {
  if (doc.contains("rows")) return matrix_from_json(doc.at("rows"));
  if (doc.contains("csv")) {
    const auto csv = std::filesystem::path(header_path).parent_path() /
                     doc.at("csv").get<std::string>();
    return load_csv_matrix(csv.string());
  }
  throw ValidationError(ErrorCode::SchemaError,
                        header_path + " has neither 'rows' nor 'csv'");
}

const char* region_label_name(RegionLabel l) {
  switch (l) {
    case RegionLabel::Fixed: return "fixed";
    case RegionLabel::Replaceable: return "replaceable";
    case RegionLabel::Transition: return "transition";
  }
  return "fixed";
}

RegionLabel region_label_from_name(const std::string& name) {
  if (name == "fixed") return RegionLabel::Fixed;
  if (name == "replaceable") return RegionLabel::Replaceable;
  if (name == "transition") return RegionLabel::Transition;
  throw ValidationError(ErrorCode::SchemaError,
                        "unknown region label '" + name + "'");
}

}  // namespace

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError(ErrorCode::IoError, "cannot open " + path);
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(ErrorCode::SchemaError,
                          path + ": " + std::string(e.what()));
  }
  return doc;
}

void save_json_file(const json& doc, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw ValidationError(ErrorCode::IoError, "cannot write " + path);
  }
  out << doc.dump(2) << "\n";
}

void require_schema(const json& doc, const std::string& kind) {
  const std::string expected = "rigforge/" + kind + "/1";
  if (!doc.contains("schema") || doc.at("schema") != expected) {
    throw ValidationError(ErrorCode::SchemaError,
                          "expected schema '" + expected + "'");
  }
}

LandmarkSet load_landmarks(const std::string& path) {
  const json doc = load_json_file(path);
  require_schema(doc, "landmarks");
  LandmarkSet set;
  set.role = landmark_role_from_name(doc.at("role").get<std::string>());
  set.indices = doc.at("indices").get<std::vector<int>>();
  return set;
}

json landmarks_to_json(const LandmarkSet& set) {
  return json{{"schema", "rigforge/landmarks/1"},
              {"role", landmark_role_name(set.role)},
              {"indices", set.indices}};
}

RegionMask load_region_mask(const std::string& path) {
  const json doc = load_json_file(path);
  require_schema(doc, "region-mask");
  RegionMask mask;
  for (const auto& label : doc.at("labels")) {
    mask.labels.push_back(region_label_from_name(label.get<std::string>()));
  }
  return mask;
}

json region_mask_to_json(const RegionMask& mask) {
  json labels = json::array();
  for (RegionLabel l : mask.labels) labels.push_back(region_label_name(l));
  return json{{"schema", "rigforge/region-mask/1"}, {"labels", labels}};
}

Correspondence load_correspondence(const std::string& path) {
  const json doc = load_json_file(path);
  require_schema(doc, "correspondence");
  Correspondence corr;
  for (const auto& a : doc.at("anchors")) {
    BarycentricAnchor anchor;
    anchor.vertex = a.at("vertex").get<int>();
    anchor.face = a.at("face").get<int>();
    anchor.b0 = a.at("bary")[0].get<double>();
    anchor.b1 = a.at("bary")[1].get<double>();
    anchor.b2 = a.at("bary")[2].get<double>();
    corr.push_back(anchor);
  }
  return corr;
}

json correspondence_to_json(const Correspondence& corr) {
  json anchors = json::array();
  for (const auto& a : corr) {
    anchors.push_back(json{{"vertex", a.vertex},
                           {"face", a.face},
                           {"bary", json::array({a.b0, a.b1, a.b2})}});
  }
  return json{{"schema", "rigforge/correspondence/1"}, {"anchors", anchors}};
}

ShapeBasisSet load_shape_basis(const std::string& path) {
  const json doc = load_json_file(path);
  require_schema(doc, "shape-basis");
  ShapeBasisSet basis;
  for (const auto& v : doc.at("base")) basis.base.push_back(vec3_from_json(v));
  for (const auto& field : doc.at("bases")) {
    std::vector<Vec3> displacements;
    for (const auto& v : field) displacements.push_back(vec3_from_json(v));
    basis.bases.push_back(std::move(displacements));
  }
  basis.coefficients = doc.at("coefficients").get<std::vector<double>>();
  basis.validate();
  return basis;
}

json shape_basis_to_json(const ShapeBasisSet& basis) {
  json base = json::array();
  for (const auto& v : basis.base) base.push_back(vec3_to_json(v));
  json bases = json::array();
  for (const auto& field : basis.bases) {
    json f = json::array();
    for (const auto& v : field) f.push_back(vec3_to_json(v));
    bases.push_back(std::move(f));
  }
  return json{{"schema", "rigforge/shape-basis/1"},
              {"base", base},
              {"bases", bases},
              {"coefficients", basis.coefficients}};
}

RigDocument load_rig_document(const std::string& path) {
  const json doc = load_json_file(path);
  require_schema(doc, "rig");
  RigDocument out;
  for (const auto& n : doc.at("nodes")) {
    SkeletonNode node;
    node.id = n.at("id").get<std::string>();
    node.parent = n.at("parent").get<int>();
    node.local.translation = vec3_from_json(n.at("translation"));
    node.local.rotation = quat_from_json(n.at("rotation"));
    out.rig.nodes.push_back(std::move(node));
  }
  out.rig.validate();
  for (const auto& t : doc.at("rest_pose")) {
    Transform xf;
    xf.translation = vec3_from_json(t.at("translation"));
    xf.rotation = quat_from_json(t.at("rotation"));
    out.binding.rest_pose.push_back(xf);
  }
  for (const auto& vw : doc.at("weights")) {
    std::vector<VertexWeight> list;
    for (const auto& entry : vw) {
      list.push_back({entry[0].get<int>(), entry[1].get<double>()});
    }
    out.binding.weights.push_back(std::move(list));
  }
  const json& overlap = doc.at("overlap");
  out.overlap.bind_tolerance = overlap.at("bind_tolerance").get<double>();
  for (const auto& e : overlap.at("entries")) {
    out.overlap.entries.push_back({e[0].get<int>(), e[1].get<int>()});
  }
  return out;
}

json rig_document_to_json(const RigDocument& doc) {
  json nodes = json::array();
  for (const auto& n : doc.rig.nodes) {
    nodes.push_back(json{{"id", n.id},
                         {"parent", n.parent},
                         {"translation", vec3_to_json(n.local.translation)},
                         {"rotation", quat_to_json(n.local.rotation)}});
  }
  json rest = json::array();
  for (const auto& t : doc.binding.rest_pose) {
    rest.push_back(json{{"translation", vec3_to_json(t.translation)},
                        {"rotation", quat_to_json(t.rotation)}});
  }
  json weights = json::array();
  for (const auto& vw : doc.binding.weights) {
    json list = json::array();
    for (const auto& w : vw) list.push_back(json::array({w.joint, w.weight}));
    weights.push_back(std::move(list));
  }
  json entries = json::array();
  for (const auto& [joint, vertex] : doc.overlap.entries) {
    entries.push_back(json::array({joint, vertex}));
  }
  return json{{"schema", "rigforge/rig/1"},
              {"nodes", nodes},
              {"rest_pose", rest},
              {"weights", weights},
              {"overlap",
               json{{"bind_tolerance", doc.overlap.bind_tolerance},
                    {"entries", entries}}}};
}

json calibration_result_to_json(const CalibrationResult& result) {
  json locals = json::array();
  for (const auto& n : result.calibrated_rig.nodes) {
    locals.push_back(json{{"id", n.id},
                          {"translation", vec3_to_json(n.local.translation)},
                          {"rotation", quat_to_json(n.local.rotation)}});
  }
  json residual = json::array();
  for (size_t i = 0; i < result.residual_blendshape.size(); ++i) {
    const Vec3& d = result.residual_blendshape[i];
    if (d.squaredNorm() > 0.0) {
      residual.push_back(json{{"vertex", static_cast<int>(i)},
                              {"offset", vec3_to_json(d)}});
    }
  }
  return json{{"schema", "rigforge/calibration-result/1"},
              {"calibrated_locals", locals},
              {"residual_blendshape", residual},
              {"loss_vertex", result.loss_vertex},
              {"loss_overlap", result.loss_overlap},
              {"loss_total", result.loss_total},
              {"blended_loss_vertex", result.blended_loss_vertex},
              {"iterations", result.iterations},
              {"converged", result.converged}};
}

void save_loss_trace_csv(const std::vector<double>& trace,
                         const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw ValidationError(ErrorCode::IoError, "cannot write " + path);
  }
  out << "iteration,loss_total\n";
  char buf[64];
  for (size_t i = 0; i < trace.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", i, trace[i]);
    out << buf;
  }
}

ColorCorrector load_color_model(const std::string& path) {
  const json doc = load_json_file(path);
  require_schema(doc, "color-model");
  ColorCorrector model;
  model.network = Mlp(doc.at("layer_sizes").get<std::vector<int>>());
  const json& layers = doc.at("layers");
  if (layers.size() != model.network.weights().size()) {
    throw ValidationError(ErrorCode::SchemaError, "layer count mismatch");
  }
  for (size_t l = 0; l < model.network.weights().size(); ++l) {
    const Eigen::MatrixXd w = matrix_from_json(layers[l].at("weights"));
    if (w.rows() != model.network.weights()[l].rows() ||
        w.cols() != model.network.weights()[l].cols()) {
      throw ValidationError(ErrorCode::SchemaError, "weight shape mismatch");
    }
    model.network.weights()[l] = w;
    const auto b = layers[l].at("biases").get<std::vector<double>>();
    model.network.biases()[l] =
        Eigen::Map<const Eigen::VectorXd>(b.data(), b.size());
  }
  const json& meta = doc.at("metadata");
  model.seed = meta.at("seed").get<uint64_t>();
  model.epochs_run = meta.at("epochs_run").get<int>();
  model.final_train_mse = meta.at("final_train_mse").get<double>();
  model.holdout_mae = meta.at("holdout_mae").get<double>();
  return model;
}

json color_model_to_json(const ColorCorrector& model) {
  json layers = json::array();
  for (size_t l = 0; l < model.network.weights().size(); ++l) {
    const auto& b = model.network.biases()[l];
    layers.push_back(
        json{{"weights", matrix_to_json(model.network.weights()[l])},
             {"biases", std::vector<double>(b.data(), b.data() + b.size())}});
  }
  return json{{"schema", "rigforge/color-model/1"},
              {"layer_sizes", model.network.layer_sizes()},
              {"layers", layers},
              {"metadata",
               json{{"seed", model.seed},
                    {"epochs_run", model.epochs_run},
                    {"final_train_mse", model.final_train_mse},
                    {"holdout_mae", model.holdout_mae}}}};
}

namespace {

json pose_frame_to_json(const PoseFrame& frame) {
  json rotations = json::array();
  for (const auto& q : frame.joint_rotations) rotations.push_back(quat_to_json(q));
  json positions = json::array();
  for (const auto& p : frame.joint_positions) positions.push_back(vec3_to_json(p));
  return json{{"rotations", rotations},
              {"positions", positions},
              {"root", vec3_to_json(frame.root_translation)}};
}

PoseFrame pose_frame_from_json(const json& j) {
  PoseFrame frame;
  for (const auto& q : j.at("rotations")) {
    frame.joint_rotations.push_back(quat_from_json(q));
  }
  for (const auto& p : j.at("positions")) {
    frame.joint_positions.push_back(vec3_from_json(p));
  }
  frame.root_translation = vec3_from_json(j.at("root"));
  return frame;
}

}  // namespace

ClipLibrary load_clip_library(const std::string& path) {
  const json doc = load_json_file(path);
  require_schema(doc, "clip-library");
  ClipLibrary library;
  library.embedding_dim = doc.at("embedding_dim").get<int>();
  for (const auto& c : doc.at("clips")) {
    MotionClip clip;
    clip.id = c.at("id").get<int>();
    clip.category.from = c.at("category")[0].get<int>();
    clip.category.to = c.at("category")[1].get<int>();
    clip.duration = c.at("duration").get<double>();
    clip.frame_rate = c.at("frame_rate").get<double>();
    for (const auto& f : c.at("frames")) {
      clip.frames.push_back(pose_frame_from_json(f));
    }
    const auto emb = c.at("embedding").get<std::vector<double>>();
    clip.embedding = Eigen::Map<const Eigen::VectorXd>(emb.data(), emb.size());
    library.clips.push_back(std::move(clip));
  }
  for (const auto& e : doc.at("adjacency")) {
    library.adjacency.push_back({e[0].get<int>(), e[1].get<int>()});
  }
  return library;
}

json clip_library_to_json(const ClipLibrary& library) {
  json clips = json::array();
  for (const auto& c : library.clips) {
    json frames = json::array();
    for (const auto& f : c.frames) frames.push_back(pose_frame_to_json(f));
    clips.push_back(json{
        {"id", c.id},
        {"category", json::array({c.category.from, c.category.to})},
        {"duration", c.duration},
        {"frame_rate", c.frame_rate},
        {"embedding",
         std::vector<double>(c.embedding.data(),
                             c.embedding.data() + c.embedding.size())},
        {"frames", frames}});
  }
  json adjacency = json::array();
  for (const auto& [from, to] : library.adjacency) {
    adjacency.push_back(json::array({from, to}));
  }
  return json{{"schema", "rigforge/clip-library/1"},
              {"embedding_dim", library.embedding_dim},
              {"clips", clips},
              {"adjacency", adjacency}};
}

AudioEmbeddingSequence load_audio_sequence(const std::string& path) {
  const json doc = load_json_file(path);
  require_schema(doc, "audio-embeddings");
  AudioEmbeddingSequence seq;
  seq.window_seconds = doc.at("window_seconds").get<double>();
  const int dim = doc.at("dimension").get<int>();
  const Eigen::MatrixXd rows = load_body_matrix(doc, path);
  if (rows.cols() != dim) {
    throw ValidationError(ErrorCode::SchemaError,
                          "embedding rows have width " +
                              std::to_string(rows.cols()) + ", header says " +
                              std::to_string(dim));
  }
  for (int r = 0; r < rows.rows(); ++r) {
    seq.embeddings.push_back(rows.row(r).transpose());
  }
  return seq;
}

json audio_sequence_to_json(const AudioEmbeddingSequence& seq) {
  json rows = json::array();
  for (const auto& e : seq.embeddings) {
    rows.push_back(std::vector<double>(e.data(), e.data() + e.size()));
  }
  return json{{"schema", "rigforge/audio-embeddings/1"},
              {"dimension", seq.embeddings.empty()
                                ? 0
                                : static_cast<int>(seq.embeddings[0].size())},
              {"window_seconds", seq.window_seconds},
              {"rows", rows}};
}

json motion_track_to_json(const MotionTrack& track) {
  json frames = json::array();
  for (const auto& f : track.frames) frames.push_back(pose_frame_to_json(f));
  return json{{"schema", "rigforge/motion-track/1"},
              {"frame_rate", track.frame_rate},
              {"duration", track.duration},
              {"clip_sequence", track.clip_sequence},
              {"frames", frames}};
}

AudioFeatureTrack load_feature_track(const std::string& path) {
  const json doc = load_json_file(path);
  require_schema(doc, "feature-track");
  AudioFeatureTrack track;
  track.frame_rate = doc.at("frame_rate").get<double>();
  track.values = load_body_matrix(doc, path);
  const int dim = doc.at("dimension").get<int>();
  if (track.values.cols() != dim) {
    throw ValidationError(ErrorCode::SchemaError,
                          "feature rows have width " +
                              std::to_string(track.values.cols()) +
                              ", header says " + std::to_string(dim));
  }
  return track;
}

json feature_track_to_json(const AudioFeatureTrack& track) {
  return json{{"schema", "rigforge/feature-track/1"},
              {"frame_rate", track.frame_rate},
              {"dimension", track.feature_dim()},
              {"rows", matrix_to_json(track.values)}};
}

RigCoefficientTrack load_coefficient_track(const std::string& path) {
  const json doc = load_json_file(path);
  require_schema(doc, "coefficient-track");
  RigCoefficientTrack track;
  track.frame_rate = doc.at("frame_rate").get<double>();
  if (doc.contains("control_names")) {
    track.control_names = doc.at("control_names").get<std::vector<std::string>>();
  }
  track.values = load_body_matrix(doc, path);
  track.validate();
  return track;
}

json coefficient_track_to_json(const RigCoefficientTrack& track) {
  json doc{{"schema", "rigforge/coefficient-track/1"},
           {"frame_rate", track.frame_rate},
           {"controls", track.control_count()},
           {"rows", matrix_to_json(track.values)}};
  if (!track.control_names.empty()) doc["control_names"] = track.control_names;
  return doc;
}

FaceRegressor load_face_model(const std::string& path) {
  const json doc = load_json_file(path);
  require_schema(doc, "face-model");
  FaceRegressor model;
  model.window = doc.at("window").get<int>();
  model.feature_dim = doc.at("feature_dim").get<int>();
  model.control_count = doc.at("control_count").get<int>();
  model.network = Mlp(doc.at("layer_sizes").get<std::vector<int>>());
  const json& layers = doc.at("layers");
  for (size_t l = 0; l < model.network.weights().size(); ++l) {
    model.network.weights()[l] = matrix_from_json(layers[l].at("weights"));
    const auto b = layers[l].at("biases").get<std::vector<double>>();
    model.network.biases()[l] =
        Eigen::Map<const Eigen::VectorXd>(b.data(), b.size());
  }
  const json& meta = doc.at("metadata");
  model.seed = meta.at("seed").get<uint64_t>();
  model.epochs_run = meta.at("epochs_run").get<int>();
  model.holdout_rec_per_entry = meta.at("holdout_rec_per_entry").get<double>();
  return model;
}

json face_model_to_json(const FaceRegressor& model) {
  json layers = json::array();
  for (size_t l = 0; l < model.network.weights().size(); ++l) {
    const auto& b = model.network.biases()[l];
    layers.push_back(
        json{{"weights", matrix_to_json(model.network.weights()[l])},
             {"biases", std::vector<double>(b.data(), b.data() + b.size())}});
  }
  return json{{"schema", "rigforge/face-model/1"},
              {"window", model.window},
              {"feature_dim", model.feature_dim},
              {"control_count", model.control_count},
              {"layer_sizes", model.network.layer_sizes()},
              {"layers", layers},
              {"metadata",
               json{{"seed", model.seed},
                    {"epochs_run", model.epochs_run},
                    {"holdout_rec_per_entry", model.holdout_rec_per_entry}}}};
}

std::vector<InterjectionTemplate> load_templates(const std::string& path) {
  const json doc = load_json_file(path);
  require_schema(doc, "interjection-templates");
  std::vector<InterjectionTemplate> templates;
  for (const auto& t : doc.at("templates")) {
    InterjectionTemplate tpl;
    tpl.trigger = t.at("trigger").get<std::string>();
    tpl.blend_in_seconds = t.at("blend_in_seconds").get<double>();
    tpl.blend_out_seconds = t.at("blend_out_seconds").get<double>();
    tpl.clip.frame_rate = t.at("frame_rate").get<double>();
    tpl.clip.values = matrix_from_json(t.at("rows"));
    tpl.validate();
    templates.push_back(std::move(tpl));
  }
  return templates;
}

json templates_to_json(const std::vector<InterjectionTemplate>& templates) {
  json list = json::array();
  for (const auto& t : templates) {
    list.push_back(json{{"trigger", t.trigger},
                        {"blend_in_seconds", t.blend_in_seconds},
                        {"blend_out_seconds", t.blend_out_seconds},
                        {"frame_rate", t.clip.frame_rate},
                        {"rows", matrix_to_json(t.clip.values)}});
  }
  return json{{"schema", "rigforge/interjection-templates/1"},
              {"templates", list}};
}

std::vector<InterjectionEvent> load_events(const std::string& path) {
  const json doc = load_json_file(path);
  require_schema(doc, "events");
  std::vector<InterjectionEvent> events;
  for (const auto& e : doc.at("events")) {
    events.push_back(
        {e.at("trigger").get<std::string>(), e.at("time").get<double>()});
  }
  return events;
}

json events_to_json(const std::vector<InterjectionEvent>& events) {
  json list = json::array();
  for (const auto& e : events) {
    list.push_back(json{{"trigger", e.trigger}, {"time", e.time_seconds}});
  }
  return json{{"schema", "rigforge/events/1"}, {"events", list}};
}

}  // namespace rigforge
