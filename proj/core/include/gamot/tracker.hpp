#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gamot/model.hpp"
#include "gamot/scenario.hpp"

namespace gamot {

// Learned:           relation-stage logits drive the assignment.
// AffinityDirect:    fused affinity scores drive it (no relation stage).
// HungarianBaseline: exact matching on predicted-box overlap, thresholded.
enum class SolverKind { Learned, AffinityDirect, HungarianBaseline };

enum class TrackStatus { Confirmed, PendingBirth, Dummy };

struct TrackerConfig {
  double fps = 10.0;
  // Zero derives the window from fps: confirmation after round(fps/2)
  // further sightings, termination after round(fps/6) missed rounds. Both
  // are clamped to at least one frame.
  int birth_frames = 0;
  int death_frames = 0;
  bool backfill_births = true;  // emit a confirmed track's pre-window boxes
  SolverKind solver = SolverKind::Learned;
  double overlap_threshold = 0.5;  // baseline: matches below this split

  int resolved_birth_frames() const;
  int resolved_death_frames() const;
};

// Test/inspection view of one live track.
struct TrackInfo {
  std::int64_t id = 0;
  TrackStatus status = TrackStatus::PendingBirth;
  int dummy_rounds = 0;         // consecutive missed rounds while dormant
  int pending_appearances = 0;  // sightings while unconfirmed, creation included
  BoundingBox box;              // newest history entry
};

// Straight-line fit through the centers of the newest `window` boxes; the
// returned (vx, vy) is the per-frame slope. One box fits a zero velocity.
std::pair<double, double> least_squares_velocity(std::span<const BoundingBox> history, int window);

// Frame-by-frame track management over an association solver. New detections
// open provisional tracks that confirm once they have been sighted on
// birth-window consecutive rounds, the opening detection included; one miss
// while provisional discards them. Confirmed tracks
// that miss go dormant and coast on their fitted velocity; they reclaim
// their identity if re-associated within the death window and are dropped
// otherwise. Only confirmed tracks emit rows; confirmation retroactively
// emits the provisional window when backfill is on. Identifiers are
// monotonically increasing and never reused.
class Tracker {
 public:
  Tracker(AssociationModel* model, TrackerConfig cfg);

  const TrackerConfig& config() const { return cfg_; }

  // Processes one frame (indices must be strictly increasing) and returns
  // the rows emitted by this call, including any backfill.
  std::vector<TrackRow> step(int frame, std::span<const Detection> detections);

  // All rows emitted so far, sorted by frame then id.
  std::vector<TrackRow> rows() const;

  std::vector<TrackInfo> active() const;
  std::int64_t next_id() const { return next_id_; }

 private:
  struct Track {
    std::int64_t id = 0;
    TrackStatus status = TrackStatus::PendingBirth;
    std::vector<BoundingBox> history;  // real boxes, plus coasted ones while dormant
    std::vector<double> descriptor;    // from the latest sighting
    int dummy_rounds = 0;
    int pending_appearances = 0;
    std::vector<TrackRow> pending_rows;  // buffered for backfill
  };

  AssociationResult associate(std::span<const Detection> detections);
  TrackSnapshot snapshot(const Track& t) const;
  BoundingBox predicted_box(const Track& t) const;

  AssociationModel* model_;
  TrackerConfig cfg_;
  std::vector<Track> tracks_;
  std::vector<TrackRow> emitted_;
  std::int64_t next_id_ = 1;
  int last_frame_ = -1;
  bool started_ = false;
};

// Convenience: run a fresh tracker over per-frame detection lists.
std::vector<TrackRow> run_tracker(AssociationModel* model, const TrackerConfig& cfg,
                                  const std::vector<FrameRecord>& frames);

// frame,id,x,y,w,h with a header row; doubles in round-trip form.
void write_tracks(const std::string& path, std::span<const TrackRow> rows);
std::vector<TrackRow> read_tracks(const std::string& path);

}  // namespace gamot
