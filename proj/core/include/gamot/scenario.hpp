#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gamot/assoc.hpp"

namespace gamot {

// Synthetic world: constant-velocity objects in a unit-ish arena with
// position noise, per-frame births and deaths, and a detector that jitters
// boxes, drops detections, adds clutter, and attaches noisy appearance
// descriptors drawn around a fixed per-identity latent.
struct ScenarioConfig {
  double arena_w = 1.0;
  double arena_h = 1.0;
  int min_objects = 4;
  int max_objects = 10;
  double min_box = 0.04;  // box side range, arena units
  double max_box = 0.10;
  double velocity_scale = 0.01;   // per-axis stddev of initial velocity, per frame
  double motion_noise = 0.005;    // per-frame position perturbation stddev
  double birth_prob = 0.02;       // chance per frame of one new object
  double death_prob = 0.02;       // chance per object per frame of removal
  int descriptor_dim = 16;
  double descriptor_scale = 1.0;  // stddev of per-identity latents
  double descriptor_noise = 0.2;  // per-observation descriptor noise stddev
  double detection_jitter = 0.01; // detector box noise stddev
  double miss_rate = 0.05;        // chance a true object goes undetected
  double clutter_rate = 0.05;     // expected false detections per frame
  int length = 100;
  double fps = 10.0;
  std::uint64_t seed = 1;
};

struct GtObject {
  std::int64_t id = 0;
  BoundingBox box;
  std::vector<double> descriptor;  // clean latent
};

struct DetectionRecord {
  BoundingBox box;
  std::vector<double> descriptor;  // noisy observation
  bool clutter = false;

  Detection as_detection() const { return Detection{box, descriptor}; }
};

// One frame: true objects, detector output, and which object index produced
// which detection index (clutter and missed objects are absent from it).
struct FrameRecord {
  int frame = 0;
  std::vector<GtObject> objects;
  std::vector<DetectionRecord> detections;
  std::vector<std::pair<int, int>> matches;  // object index -> detection index
};

std::vector<FrameRecord> generate_sequence(const ScenarioConfig& cfg);

// Sequence file: one JSON object per line, in frame order. See the README
// for the field-by-field schema. Serialization is deterministic and doubles
// round-trip exactly.
void write_sequence(std::ostream& out, const std::vector<FrameRecord>& frames);
void write_sequence(const std::string& path, const std::vector<FrameRecord>& frames);
std::vector<FrameRecord> read_sequence(std::istream& in);
std::vector<FrameRecord> read_sequence(const std::string& path);

// One association training instance per consecutive frame pair. Trajectories
// are the identities alive in the earlier frame: box history from the true
// tracks (padded to tracklet_len), descriptor from that frame's observation
// when the identity was detected, else its clean latent. Detections are the
// later frame's full detector output. The target pairs a trajectory with a
// detection when the identity survived and was detected.
struct TrainingInstance {
  int frame = 0;  // index of the detection-side frame
  std::vector<TrackSnapshot> trajectories;
  std::vector<Detection> detections;
  GroundTruthMatrix target;
};

struct TrainingSet {
  std::vector<TrainingInstance> instances;
  int skipped_one_sided = 0;  // frame pairs with an empty side
};

TrainingSet to_training_problems(const std::vector<FrameRecord>& frames, int tracklet_len);

// True tracks flattened to rows, for metric evaluation.
std::vector<TrackRow> gt_rows(const std::vector<FrameRecord>& frames);

}  // namespace gamot
