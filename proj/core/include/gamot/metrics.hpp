#pragma once

#include <span>
#include <string>

#include "gamot/assoc.hpp"

namespace gamot {

// Multi-object tracking quality summary. Counting conventions:
//  - Per frame, ground-truth and output boxes are matched one-to-one by an
//    exact maximum-overlap assignment; pairs below the overlap threshold do
//    not count as matches.
//  - An identity switch is a matched ground-truth box whose output id
//    differs from the last output id that ground truth was ever matched to,
//    however long ago.
//  - A fragmentation is a resumption: a covered ground-truth frame that
//    follows an uncovered stretch which itself followed covered frames.
//  - A ground-truth identity covered on at least 80% of its frames counts as
//    mostly tracked, at most 20% as mostly lost.
//  - accuracy = 1 - (misses + false_positives + id_switches) / gt_boxes.
//  - overlap_mean averages the overlap of matched pairs.
//  - identity_f1 scores the best global one-to-one pairing of ground-truth
//    ids with output ids: 2*IDTP / (gt_boxes + output_boxes).
struct MetricsReport {
  int gt_boxes = 0;
  int output_boxes = 0;
  int matched_boxes = 0;
  int misses = 0;           // FN
  int false_positives = 0;  // FP
  int id_switches = 0;
  int fragmentations = 0;
  int gt_identities = 0;
  int mostly_tracked = 0;
  int partially_tracked = 0;
  int mostly_lost = 0;
  int identity_true_positives = 0;
  double accuracy = 0.0;             // MOTA
  double overlap_mean = 0.0;         // MOTP
  double identity_f1 = 0.0;          // IDF1
  double mostly_tracked_ratio = 0.0;  // of gt identities, in [0, 1]
  double mostly_lost_ratio = 0.0;
};

// Both inputs are flat (frame, id, box) rows; order is irrelevant. A frame
// may appear in either input alone. Duplicate (frame, id) rows are rejected.
MetricsReport evaluate_tracking(std::span<const TrackRow> ground_truth,
                                std::span<const TrackRow> output,
                                double overlap_threshold = 0.5);

// Fixed-width human-readable summary.
std::string metrics_table(const MetricsReport& report);

// Flat JSON object, keys in the struct's order.
std::string metrics_json(const MetricsReport& report);

}  // namespace gamot
