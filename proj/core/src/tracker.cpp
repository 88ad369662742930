#include "gamot/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "gamot/solvers.hpp"
#include "gamot/text.hpp"

namespace gamot {

namespace {
int derive_window(double fps, double divisor) {
  int w = static_cast<int>(std::lround(fps / divisor));
  return std::max(1, w);
}
}  // namespace

int TrackerConfig::resolved_birth_frames() const {
  return birth_frames > 0 ? birth_frames : derive_window(fps, 2.0);
}

int TrackerConfig::resolved_death_frames() const {
  return death_frames > 0 ? death_frames : derive_window(fps, 6.0);
}

std::pair<double, double> least_squares_velocity(std::span<const BoundingBox> history,
                                                 int window) {
  if (history.empty()) return {0.0, 0.0};
  std::size_t n = history.size();
  if (window > 0 && static_cast<std::size_t>(window) < n) n = static_cast<std::size_t>(window);
  std::span<const BoundingBox> recent = history.subspan(history.size() - n);
  if (n < 2) return {0.0, 0.0};

  double mean_k = 0.5 * static_cast<double>(n - 1);
  double sxx = 0.0, sxy_x = 0.0, sxy_y = 0.0;
  double mean_x = 0.0, mean_y = 0.0;
  for (const BoundingBox& b : recent) {
    mean_x += b.cx();
    mean_y += b.cy();
  }
  mean_x /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    double dk = static_cast<double>(k) - mean_k;
    sxx += dk * dk;
    sxy_x += dk * (recent[k].cx() - mean_x);
    sxy_y += dk * (recent[k].cy() - mean_y);
  }
  return {sxy_x / sxx, sxy_y / sxx};
}

Tracker::Tracker(AssociationModel* model, TrackerConfig cfg) : model_(model), cfg_(cfg) {
  if (cfg_.fps <= 0) throw std::invalid_argument("tracker: fps must be positive");
  if (cfg_.solver != SolverKind::HungarianBaseline && model_ == nullptr)
    throw std::invalid_argument("tracker: learned solvers need a model");
}

TrackSnapshot Tracker::snapshot(const Track& t) const {
  int window = model_ ? model_->config().tracklet_len : 5;
  std::span<const BoundingBox> h(t.history);
  if (static_cast<int>(h.size()) > window) h = h.subspan(h.size() - static_cast<std::size_t>(window));
  return TrackSnapshot{Tracklet::padded(h, window), t.descriptor};
}

BoundingBox Tracker::predicted_box(const Track& t) const {
  int window = model_ ? model_->config().tracklet_len : 5;
  auto [vx, vy] = least_squares_velocity(t.history, window);
  BoundingBox b = t.history.back();
  b.x += vx;
  b.y += vy;
  return b;
}

AssociationResult Tracker::associate(std::span<const Detection> detections) {
  std::vector<TrackSnapshot> snaps;
  snaps.reserve(tracks_.size());
  for (const Track& t : tracks_) snaps.push_back(snapshot(t));

  switch (cfg_.solver) {
    case SolverKind::Learned:
      return interpret_association(model_->association_matrix(snaps, detections));
    case SolverKind::AffinityDirect:
      return interpret_association(model_->affinity_matrix(snaps, detections));
    case SolverKind::HungarianBaseline: {
      Tensor overlap = Tensor::zeros(static_cast<int>(tracks_.size()),
                                     static_cast<int>(detections.size()));
      for (std::size_t i = 0; i < tracks_.size(); ++i) {
        BoundingBox p = predicted_box(tracks_[i]);
        for (std::size_t j = 0; j < detections.size(); ++j)
          overlap.at(static_cast<int>(i), static_cast<int>(j)) = iou(p, detections[j].box);
      }
      return solve_with_birth_death(overlap, cfg_.overlap_threshold);
    }
  }
  throw std::logic_error("tracker: unknown solver");
}

std::vector<TrackRow> Tracker::step(int frame, std::span<const Detection> detections) {
  if (started_ && frame <= last_frame_)
    throw std::invalid_argument("tracker: frames must be strictly increasing");
  started_ = true;
  last_frame_ = frame;

  AssociationResult result;
  if (tracks_.empty()) {
    result.births.resize(detections.size());
    for (std::size_t j = 0; j < detections.size(); ++j) result.births[j] = static_cast<int>(j);
  } else if (detections.empty()) {
    result.deaths.resize(tracks_.size());
    for (std::size_t i = 0; i < tracks_.size(); ++i) result.deaths[i] = static_cast<int>(i);
  } else {
    result = associate(detections);
    result.validate(static_cast<int>(tracks_.size()), static_cast<int>(detections.size()));
  }

  int birth_window = cfg_.resolved_birth_frames();
  int death_window = cfg_.resolved_death_frames();
  std::vector<TrackRow> out;

  for (auto [i, j] : result.matches) {
    Track& t = tracks_[static_cast<std::size_t>(i)];
    const Detection& det = detections[static_cast<std::size_t>(j)];
    t.history.push_back(det.box);
    t.descriptor = det.descriptor;
    switch (t.status) {
      case TrackStatus::Confirmed:
        out.push_back(TrackRow{frame, t.id, det.box});
        break;
      case TrackStatus::PendingBirth:
        if (++t.pending_appearances >= birth_window) {
          t.status = TrackStatus::Confirmed;
          if (cfg_.backfill_births)
            out.insert(out.end(), t.pending_rows.begin(), t.pending_rows.end());
          t.pending_rows.clear();
          out.push_back(TrackRow{frame, t.id, det.box});
        } else {
          t.pending_rows.push_back(TrackRow{frame, t.id, det.box});
        }
        break;
      case TrackStatus::Dummy:
        t.status = TrackStatus::Confirmed;
        t.dummy_rounds = 0;
        out.push_back(TrackRow{frame, t.id, det.box});
        break;
    }
  }

  std::vector<bool> drop(tracks_.size(), false);
  for (int i : result.deaths) {
    Track& t = tracks_[static_cast<std::size_t>(i)];
    switch (t.status) {
      case TrackStatus::PendingBirth:
        drop[static_cast<std::size_t>(i)] = true;  // one miss cancels a provisional track
        break;
      case TrackStatus::Confirmed:
        t.status = TrackStatus::Dummy;
        t.dummy_rounds = 1;
        break;
      case TrackStatus::Dummy:
        ++t.dummy_rounds;
        break;
    }
    if (t.status == TrackStatus::Dummy) {
      if (t.dummy_rounds >= death_window) {
        drop[static_cast<std::size_t>(i)] = true;
      } else {
        t.history.push_back(predicted_box(t));  // coast so the motion window stays honest
      }
    }
  }

  if (std::find(drop.begin(), drop.end(), true) != drop.end()) {
    std::vector<Track> kept;
    kept.reserve(tracks_.size());
    for (std::size_t i = 0; i < tracks_.size(); ++i)
      if (!drop[i]) kept.push_back(std::move(tracks_[i]));
    tracks_ = std::move(kept);
  }

  for (int j : result.births) {
    const Detection& det = detections[static_cast<std::size_t>(j)];
    Track t;
    t.id = next_id_++;
    t.history.push_back(det.box);
    t.descriptor = det.descriptor;
    t.pending_appearances = 1;  // the opening sighting counts toward the window
    if (t.pending_appearances >= birth_window) {
      t.status = TrackStatus::Confirmed;
      out.push_back(TrackRow{frame, t.id, det.box});
    } else {
      t.status = TrackStatus::PendingBirth;
      t.pending_rows.push_back(TrackRow{frame, t.id, det.box});
    }
    tracks_.push_back(std::move(t));
  }

  emitted_.insert(emitted_.end(), out.begin(), out.end());
  return out;
}

std::vector<TrackRow> Tracker::rows() const {
  std::vector<TrackRow> sorted = emitted_;
  std::sort(sorted.begin(), sorted.end(), [](const TrackRow& a, const TrackRow& b) {
    return a.frame != b.frame ? a.frame < b.frame : a.id < b.id;
  });
  return sorted;
}

std::vector<TrackInfo> Tracker::active() const {
  std::vector<TrackInfo> out;
  out.reserve(tracks_.size());
  for (const Track& t : tracks_)
    out.push_back(TrackInfo{t.id, t.status, t.dummy_rounds, t.pending_appearances,
                            t.history.back()});
  return out;
}

std::vector<TrackRow> run_tracker(AssociationModel* model, const TrackerConfig& cfg,
                                  const std::vector<FrameRecord>& frames) {
  Tracker tracker(model, cfg);
  for (const FrameRecord& f : frames) {
    std::vector<Detection> dets;
    dets.reserve(f.detections.size());
    for (const DetectionRecord& d : f.detections) dets.push_back(d.as_detection());
    tracker.step(f.frame, dets);
  }
  return tracker.rows();
}

void write_tracks(const std::string& path, std::span<const TrackRow> rows) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("write_tracks: cannot open " + path);
  out << "frame,id,x,y,w,h\n";
  for (const TrackRow& r : rows)
    out << r.frame << ',' << r.id << ',' << format_double(r.box.x) << ','
        << format_double(r.box.y) << ',' << format_double(r.box.w) << ','
        << format_double(r.box.h) << "\n";
  if (!out) throw std::runtime_error("write_tracks: write failed for " + path);
}

std::vector<TrackRow> read_tracks(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_tracks: cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != "frame,id,x,y,w,h")
    throw std::runtime_error("read_tracks: missing header in " + path);
  std::vector<TrackRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 6)
      throw std::runtime_error("read_tracks: line " + std::to_string(lineno) +
                               ": expected 6 fields");
    TrackRow r;
    r.frame = static_cast<int>(parse_long(fields[0]));
    r.id = parse_long(fields[1]);
    r.box = BoundingBox{parse_double(fields[2]), parse_double(fields[3]),
                        parse_double(fields[4]), parse_double(fields[5])};
    rows.push_back(r);
  }
  return rows;
}

}  // namespace gamot
