#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "rigforge/calibration.hpp"
#include "rigforge/color.hpp"
#include "rigforge/detail_transfer.hpp"
#include "rigforge/face.hpp"
#include "rigforge/motion.hpp"
#include "rigforge/shape_basis.hpp"

namespace rigforge {

using json = nlohmann::ordered_json;

// All document schemas are versioned "rigforge/<kind>/1". Loaders reject
// unknown schemas with a schema-error.
json load_json_file(const std::string& path);
void save_json_file(const json& doc, const std::string& path);
void require_schema(const json& doc, const std::string& kind);

// --- mesh-core documents ---
LandmarkSet load_landmarks(const std::string& path);
json landmarks_to_json(const LandmarkSet& set);

RegionMask load_region_mask(const std::string& path);
json region_mask_to_json(const RegionMask& mask);

Correspondence load_correspondence(const std::string& path);
json correspondence_to_json(const Correspondence& corr);

ShapeBasisSet load_shape_basis(const std::string& path);
json shape_basis_to_json(const ShapeBasisSet& basis);

// --- skeleton-rig documents ---
// One document: nodes + skin binding + overlap map.
struct RigDocument {
  SkeletonRig rig;
  SkinBinding binding;
  OverlapMap overlap;
};
RigDocument load_rig_document(const std::string& path);
json rig_document_to_json(const RigDocument& doc);

json calibration_result_to_json(const CalibrationResult& result);
void save_loss_trace_csv(const std::vector<double>& trace,
                         const std::string& path);

// --- color-correct documents ---
ColorCorrector load_color_model(const std::string& path);
json color_model_to_json(const ColorCorrector& model);

// --- motion-graph documents ---
ClipLibrary load_clip_library(const std::string& path);
json clip_library_to_json(const ClipLibrary& library);

// JSON header {dimension, window_seconds} with inline rows or a sidecar CSV
// (path resolved relative to the header file).
AudioEmbeddingSequence load_audio_sequence(const std::string& path);
json audio_sequence_to_json(const AudioEmbeddingSequence& seq);

json motion_track_to_json(const MotionTrack& track);

// --- face-anim documents ---
// Track headers carry rate/dims and either inline rows or a sidecar CSV.
AudioFeatureTrack load_feature_track(const std::string& path);
json feature_track_to_json(const AudioFeatureTrack& track);

RigCoefficientTrack load_coefficient_track(const std::string& path);
json coefficient_track_to_json(const RigCoefficientTrack& track);

FaceRegressor load_face_model(const std::string& path);
json face_model_to_json(const FaceRegressor& model);

std::vector<InterjectionTemplate> load_templates(const std::string& path);
json templates_to_json(const std::vector<InterjectionTemplate>& templates);

std::vector<InterjectionEvent> load_events(const std::string& path);
json events_to_json(const std::vector<InterjectionEvent>& events);

}  // namespace rigforge
