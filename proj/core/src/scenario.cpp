#include "gamot/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "gamot/rng.hpp"

namespace gamot {

namespace {

struct LiveObject {
  std::int64_t id;
  double cx, cy, vx, vy, w, h;
  std::vector<double> latent;

  BoundingBox box() const { return BoundingBox{cx - 0.5 * w, cy - 0.5 * h, w, h}; }
};

// Draw order per spawn: w, h, cx, cy, vx, vy, latent[0..D).
LiveObject spawn(const ScenarioConfig& cfg, Rng& rng, std::int64_t id) {
  LiveObject o;
  o.id = id;
  o.w = rng.uniform(cfg.min_box, cfg.max_box);
  o.h = rng.uniform(cfg.min_box, cfg.max_box);
  o.cx = rng.uniform(0.5 * o.w, cfg.arena_w - 0.5 * o.w);
  o.cy = rng.uniform(0.5 * o.h, cfg.arena_h - 0.5 * o.h);
  o.vx = rng.normal(0.0, cfg.velocity_scale);
  o.vy = rng.normal(0.0, cfg.velocity_scale);
  o.latent.resize(cfg.descriptor_dim);
  for (double& v : o.latent) v = rng.normal(0.0, cfg.descriptor_scale);
  return o;
}

void validate(const ScenarioConfig& cfg) {
  if (cfg.arena_w <= 0 || cfg.arena_h <= 0) throw std::invalid_argument("scenario: bad arena");
  if (cfg.min_objects < 0 || cfg.max_objects < cfg.min_objects)
    throw std::invalid_argument("scenario: bad object count range");
  if (cfg.min_box <= 0 || cfg.max_box < cfg.min_box || cfg.max_box > std::min(cfg.arena_w, cfg.arena_h))
    throw std::invalid_argument("scenario: bad box size range");
  if (cfg.descriptor_dim < 1) throw std::invalid_argument("scenario: descriptor_dim < 1");
  if (cfg.length < 1) throw std::invalid_argument("scenario: length < 1");
  if (cfg.fps <= 0) throw std::invalid_argument("scenario: fps <= 0");
}

}  // namespace

std::vector<FrameRecord> generate_sequence(const ScenarioConfig& cfg) {
  validate(cfg);
  Rng rng(cfg.seed);
  std::vector<LiveObject> objects;
  std::int64_t next_id = 1;

  int initial = cfg.min_objects +
                static_cast<int>(rng.below(static_cast<std::uint64_t>(cfg.max_objects - cfg.min_objects + 1)));
  for (int i = 0; i < initial; ++i) objects.push_back(spawn(cfg, rng, next_id++));

  std::vector<FrameRecord> frames;
  frames.reserve(cfg.length);
  for (int t = 0; t < cfg.length; ++t) {
    if (t > 0) {
      // Constant velocity plus position noise.
      for (LiveObject& o : objects) {
        o.cx += o.vx + rng.normal(0.0, cfg.motion_noise);
        o.cy += o.vy + rng.normal(0.0, cfg.motion_noise);
      }
      // Deaths: configured probability, plus leaving the arena.
      std::vector<LiveObject> alive;
      alive.reserve(objects.size());
      for (LiveObject& o : objects) {
        bool dies = rng.bernoulli(cfg.death_prob);
        bool outside = o.cx < 0.0 || o.cx > cfg.arena_w || o.cy < 0.0 || o.cy > cfg.arena_h;
        if (!dies && !outside) alive.push_back(std::move(o));
      }
      objects = std::move(alive);
      if (rng.bernoulli(cfg.birth_prob)) objects.push_back(spawn(cfg, rng, next_id++));
    }

    FrameRecord frame;
    frame.frame = t;
    for (const LiveObject& o : objects)
      frame.objects.push_back(GtObject{o.id, o.box(), o.latent});

    // Detector pass, object order: miss draw, then 4 box-noise draws and
    // descriptor_dim descriptor-noise draws when detected.
    for (std::size_t p = 0; p < objects.size(); ++p) {
      if (rng.bernoulli(cfg.miss_rate)) continue;
      const LiveObject& o = objects[p];
      DetectionRecord det;
      BoundingBox b = o.box();
      b.x += rng.normal(0.0, cfg.detection_jitter);
      b.y += rng.normal(0.0, cfg.detection_jitter);
      b.w = std::max(1e-3, b.w + rng.normal(0.0, cfg.detection_jitter));
      b.h = std::max(1e-3, b.h + rng.normal(0.0, cfg.detection_jitter));
      det.box = b;
      det.descriptor.resize(cfg.descriptor_dim);
      for (int d = 0; d < cfg.descriptor_dim; ++d)
        det.descriptor[d] = o.latent[d] + rng.normal(0.0, cfg.descriptor_noise);
      det.clutter = false;
      frame.matches.emplace_back(static_cast<int>(p), static_cast<int>(frame.detections.size()));
      frame.detections.push_back(std::move(det));
    }

    // Clutter: fresh latent plus observation noise, spawn-like box.
    int clutter_count = rng.poisson(cfg.clutter_rate);
    for (int c = 0; c < clutter_count; ++c) {
      DetectionRecord det;
      det.clutter = true;
      double w = rng.uniform(cfg.min_box, cfg.max_box);
      double h = rng.uniform(cfg.min_box, cfg.max_box);
      double cx = rng.uniform(0.5 * w, cfg.arena_w - 0.5 * w);
      double cy = rng.uniform(0.5 * h, cfg.arena_h - 0.5 * h);
      det.box = BoundingBox{cx - 0.5 * w, cy - 0.5 * h, w, h};
      det.descriptor.resize(cfg.descriptor_dim);
      for (int d = 0; d < cfg.descriptor_dim; ++d)
        det.descriptor[d] = rng.normal(0.0, cfg.descriptor_scale) + rng.normal(0.0, cfg.descriptor_noise);
      frame.detections.push_back(std::move(det));
    }

    frames.push_back(std::move(frame));
  }
  return frames;
}

// ---- serialization ----------------------------------------------------------

namespace {

using nlohmann::json;

json box_to_json(const BoundingBox& b) { return json::array({b.x, b.y, b.w, b.h}); }

BoundingBox box_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4) throw std::runtime_error("sequence: box must be [x,y,w,h]");
  return BoundingBox{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

}  // namespace

void write_sequence(std::ostream& out, const std::vector<FrameRecord>& frames) {
  for (const FrameRecord& f : frames) {
    json j;
    j["frame"] = f.frame;
    json gt = json::array();
    for (const GtObject& o : f.objects)
      gt.push_back(json{{"id", o.id}, {"box", box_to_json(o.box)}, {"descriptor", o.descriptor}});
    j["gt"] = std::move(gt);
    json dets = json::array();
    for (const DetectionRecord& d : f.detections)
      dets.push_back(json{{"box", box_to_json(d.box)},
                          {"descriptor", d.descriptor},
                          {"clutter", d.clutter}});
    j["detections"] = std::move(dets);
    json matches = json::array();
    for (auto [a, b] : f.matches) matches.push_back(json::array({a, b}));
    j["matches"] = std::move(matches);
    out << j.dump() << "\n";
  }
}

void write_sequence(const std::string& path, const std::vector<FrameRecord>& frames) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("write_sequence: cannot open " + path);
  write_sequence(out, frames);
  if (!out) throw std::runtime_error("write_sequence: write failed for " + path);
}

std::vector<FrameRecord> read_sequence(std::istream& in) {
  std::vector<FrameRecord> frames;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw std::runtime_error("sequence line " + std::to_string(lineno) + ": " + e.what());
    }
    FrameRecord f;
    f.frame = j.at("frame").get<int>();
    for (const json& o : j.at("gt")) {
      GtObject g;
      g.id = o.at("id").get<std::int64_t>();
      g.box = box_from_json(o.at("box"));
      g.descriptor = o.at("descriptor").get<std::vector<double>>();
      f.objects.push_back(std::move(g));
    }
    for (const json& d : j.at("detections")) {
      DetectionRecord det;
      det.box = box_from_json(d.at("box"));
      det.descriptor = d.at("descriptor").get<std::vector<double>>();
      det.clutter = d.at("clutter").get<bool>();
      f.detections.push_back(std::move(det));
    }
    for (const json& m : j.at("matches")) {
      if (!m.is_array() || m.size() != 2)
        throw std::runtime_error("sequence line " + std::to_string(lineno) + ": bad match entry");
      int a = m[0].get<int>(), b = m[1].get<int>();
      if (a < 0 || a >= static_cast<int>(f.objects.size()) || b < 0 ||
          b >= static_cast<int>(f.detections.size()))
        throw std::runtime_error("sequence line " + std::to_string(lineno) + ": match out of range");
      f.matches.emplace_back(a, b);
    }
    frames.push_back(std::move(f));
  }
  return frames;
}

std::vector<FrameRecord> read_sequence(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_sequence: cannot open " + path);
  return read_sequence(in);
}

// ---- training instances -----------------------------------------------------

TrainingSet to_training_problems(const std::vector<FrameRecord>& frames, int tracklet_len) {
  if (tracklet_len < 1) throw std::invalid_argument("to_training_problems: tracklet_len < 1");
  TrainingSet set;

  // id -> object index per frame, for history walks.
  std::vector<std::map<std::int64_t, int>> index(frames.size());
  for (std::size_t t = 0; t < frames.size(); ++t)
    for (std::size_t p = 0; p < frames[t].objects.size(); ++p)
      index[t].emplace(frames[t].objects[p].id, static_cast<int>(p));

  for (std::size_t t = 1; t < frames.size(); ++t) {
    const FrameRecord& prev = frames[t - 1];
    const FrameRecord& cur = frames[t];
    if (prev.objects.empty() || cur.detections.empty()) {
      ++set.skipped_one_sided;
      continue;
    }

    std::vector<TrackSnapshot> trajectories;
    trajectories.reserve(prev.objects.size());
    for (std::size_t p = 0; p < prev.objects.size(); ++p) {
      const GtObject& o = prev.objects[p];
      // True-box history ending at the earlier frame, newest last.
      std::vector<BoundingBox> history;
      int from = std::max(0, static_cast<int>(t) - tracklet_len);
      for (int s = from; s < static_cast<int>(t); ++s) {
        auto it = index[s].find(o.id);
        if (it != index[s].end()) history.push_back(frames[s].objects[it->second].box);
      }
      // Observed descriptor when the identity was detected, clean otherwise.
      std::vector<double> descriptor = o.descriptor;
      for (auto [a, b] : prev.matches)
        if (a == static_cast<int>(p)) {
          descriptor = prev.detections[b].descriptor;
          break;
        }
      trajectories.push_back(
          TrackSnapshot{Tracklet::padded(history, tracklet_len), std::move(descriptor)});
    }

    std::vector<Detection> detections;
    detections.reserve(cur.detections.size());
    for (const DetectionRecord& d : cur.detections) detections.push_back(d.as_detection());

    std::vector<std::pair<int, int>> pairs;
    for (std::size_t p = 0; p < prev.objects.size(); ++p) {
      auto it = index[t].find(prev.objects[p].id);
      if (it == index[t].end()) continue;  // died between the frames
      for (auto [a, b] : cur.matches)
        if (a == it->second) {
          pairs.emplace_back(static_cast<int>(p), b);
          break;
        }
    }

    GroundTruthMatrix target = build_ground_truth(std::move(pairs),
                                                  static_cast<int>(trajectories.size()),
                                                  static_cast<int>(detections.size()));
    set.instances.push_back(TrainingInstance{static_cast<int>(t), std::move(trajectories),
                                             std::move(detections), std::move(target)});
  }
  return set;
}

std::vector<TrackRow> gt_rows(const std::vector<FrameRecord>& frames) {
  std::vector<TrackRow> rows;
  for (const FrameRecord& f : frames)
    for (const GtObject& o : f.objects) rows.push_back(TrackRow{f.frame, o.id, o.box});
  return rows;
}

}  // namespace gamot
