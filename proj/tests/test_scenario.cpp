#include <cmath>
#include <set>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "gamot/scenario.hpp"

using namespace gamot;

namespace {

std::string serialized(const std::vector<FrameRecord>& frames) {
  std::ostringstream out;
  write_sequence(out, frames);
  return out.str();
}

}  // namespace

TEST_CASE("same seed gives a bit-identical sequence") {
  ScenarioConfig cfg;
  cfg.length = 30;
  cfg.seed = 77;
  CHECK(serialized(generate_sequence(cfg)) == serialized(generate_sequence(cfg)));

  cfg.seed = 78;
  CHECK(serialized(generate_sequence(ScenarioConfig{})) != serialized(generate_sequence(cfg)));
}

TEST_CASE("a noiseless world matches identically every frame") {
  ScenarioConfig cfg;
  cfg.motion_noise = 0.0;
  cfg.detection_jitter = 0.0;
  cfg.miss_rate = 0.0;
  cfg.clutter_rate = 0.0;
  cfg.birth_prob = 0.0;
  cfg.death_prob = 0.0;
  cfg.velocity_scale = 0.001;
  cfg.length = 40;
  cfg.seed = 5;

  std::vector<FrameRecord> frames = generate_sequence(cfg);
  REQUIRE(frames.size() == 40);
  for (const FrameRecord& f : frames) {
    REQUIRE(f.objects.size() == f.detections.size());
    REQUIRE(f.matches.size() == f.objects.size());
    for (std::size_t k = 0; k < f.matches.size(); ++k) {
      CHECK(f.matches[k].first == static_cast<int>(k));
      CHECK(f.matches[k].second == static_cast<int>(k));
      CHECK_FALSE(f.detections[k].clutter);
      // No jitter: the detection is the truth.
      CHECK(f.detections[k].box.x == f.objects[k].box.x);
      CHECK(f.detections[k].box.w == f.objects[k].box.w);
    }
  }
}

TEST_CASE("objects leaving the arena die") {
  ScenarioConfig cfg;
  cfg.min_objects = cfg.max_objects = 8;
  cfg.birth_prob = 0.0;
  cfg.death_prob = 0.0;
  cfg.velocity_scale = 0.05;  // fast enough to guarantee wall exits
  cfg.length = 60;
  cfg.seed = 3;
  std::vector<FrameRecord> frames = generate_sequence(cfg);
  CHECK(frames.back().objects.size() < frames.front().objects.size());
  for (const FrameRecord& f : frames)
    for (const GtObject& o : f.objects) {
      CHECK(o.box.cx() >= 0.0);
      CHECK(o.box.cx() <= cfg.arena_w);
    }
}

TEST_CASE("empirical birth frequency tracks the configured probability") {
  ScenarioConfig cfg;
  cfg.birth_prob = 0.1;
  cfg.death_prob = 0.05;
  cfg.length = 100;

  int births = 0;
  long trials = 0;
  for (int run = 0; run < 100; ++run) {
    cfg.seed = 1000 + run;
    std::vector<FrameRecord> frames = generate_sequence(cfg);
    std::set<std::int64_t> initial;
    for (const GtObject& o : frames[0].objects) initial.insert(o.id);
    std::set<std::int64_t> all;
    for (const FrameRecord& f : frames)
      for (const GtObject& o : f.objects) all.insert(o.id);
    births += static_cast<int>(all.size() - initial.size());
    trials += cfg.length - 1;  // one birth draw per frame after the first
  }
  double expected = cfg.birth_prob * static_cast<double>(trials);
  double sigma = std::sqrt(static_cast<double>(trials) * cfg.birth_prob * (1 - cfg.birth_prob));
  CHECK(std::abs(static_cast<double>(births) - expected) <= 3.0 * sigma);
}

TEST_CASE("detections stay finite and inside sane bounds") {
  ScenarioConfig cfg;
  cfg.length = 60;
  cfg.seed = 12;
  for (const FrameRecord& f : generate_sequence(cfg)) {
    for (const DetectionRecord& d : f.detections) {
      CHECK(d.box.valid());
      for (double v : d.descriptor) CHECK(std::isfinite(v));
    }
    for (auto [oi, di] : f.matches) {
      CHECK(oi >= 0);
      CHECK(oi < static_cast<int>(f.objects.size()));
      CHECK(di >= 0);
      CHECK(di < static_cast<int>(f.detections.size()));
      CHECK_FALSE(f.detections[static_cast<std::size_t>(di)].clutter);
    }
  }
}

TEST_CASE("sequence files round-trip exactly") {
  ScenarioConfig cfg;
  cfg.length = 20;
  cfg.seed = 9;
  std::vector<FrameRecord> frames = generate_sequence(cfg);

  std::string text = serialized(frames);
  std::istringstream in(text);
  std::vector<FrameRecord> back = read_sequence(in);
  CHECK(serialized(back) == text);
  REQUIRE(back.size() == frames.size());
  CHECK(back[7].frame == frames[7].frame);
  CHECK(back[7].matches == frames[7].matches);
}

TEST_CASE("malformed sequence lines report the line number") {
  std::istringstream in("{\"frame\":0,\"gt\":[],\"detections\":[],\"matches\":[]}\nnot json\n");
  try {
    read_sequence(in);
    FAIL("expected a parse error");
  } catch (const std::exception& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("training problems cover every eligible frame pair") {
  ScenarioConfig cfg;
  cfg.motion_noise = 0.0;
  cfg.detection_jitter = 0.0;
  cfg.miss_rate = 0.0;
  cfg.clutter_rate = 0.0;
  cfg.birth_prob = 0.0;
  cfg.death_prob = 0.0;
  cfg.velocity_scale = 0.001;
  cfg.length = 25;
  cfg.seed = 5;
  TrainingSet set = to_training_problems(generate_sequence(cfg), 5);
  CHECK(set.instances.size() == 24);
  CHECK(set.skipped_one_sided == 0);

  for (const TrainingInstance& inst : set.instances) {
    CHECK(inst.target.rows() == static_cast<int>(inst.trajectories.size()));
    CHECK(inst.target.cols() == static_cast<int>(inst.detections.size()));
    // Type invariant: at most one match per row and per column.
    std::set<int> rows_used, cols_used;
    for (auto [i, j] : inst.target.matches()) {
      CHECK(rows_used.insert(i).second);
      CHECK(cols_used.insert(j).second);
    }
    for (const TrackSnapshot& t : inst.trajectories) CHECK(t.tracklet.length() == 5);
  }
}

TEST_CASE("default-config instances match their golden recording") {
  ScenarioConfig cfg;  // seed 1 default
  TrainingSet set = to_training_problems(generate_sequence(cfg), 5);
  REQUIRE(set.instances.size() == 99);
  CHECK(set.skipped_one_sided == 0);

  const TrainingInstance& inst = set.instances.front();
  CHECK(inst.frame == 1);
  REQUIRE(inst.target.rows() == 6);
  REQUIRE(inst.target.cols() == 6);
  std::vector<std::pair<int, int>> expect = {{0, 0}, {1, 1}, {2, 2}, {3, 3}, {4, 4}, {5, 5}};
  CHECK(inst.target.matches() == expect);
  CHECK(inst.trajectories[0].tracklet.newest().x == 0.02001118811864523);
  CHECK(inst.detections[0].box.x == 0.008782799859516698);
  CHECK(inst.detections[0].descriptor[0] == -2.097757853539399);
}

TEST_CASE("one-sided frame pairs are skipped and counted") {
  // Hand-build two frames where the first has no objects.
  FrameRecord empty_first;
  empty_first.frame = 0;
  FrameRecord second;
  second.frame = 1;
  DetectionRecord det;
  det.box = BoundingBox{0.1, 0.1, 0.05, 0.05};
  det.descriptor.assign(16, 0.0);
  second.detections.push_back(det);
  TrainingSet set = to_training_problems({empty_first, second}, 5);
  CHECK(set.instances.empty());
  CHECK(set.skipped_one_sided == 1);
}

TEST_CASE("ground-truth rows flatten every object sighting") {
  ScenarioConfig cfg;
  cfg.length = 15;
  cfg.seed = 4;
  std::vector<FrameRecord> frames = generate_sequence(cfg);
  std::vector<TrackRow> rows = gt_rows(frames);
  std::size_t total = 0;
  for (const FrameRecord& f : frames) total += f.objects.size();
  CHECK(rows.size() == total);
  for (std::size_t k = 1; k < rows.size(); ++k) {
    bool ordered = rows[k - 1].frame < rows[k].frame ||
                   (rows[k - 1].frame == rows[k].frame && rows[k - 1].id < rows[k].id);
    CHECK(ordered);
  }
}

TEST_CASE("invalid configurations are rejected") {
  ScenarioConfig bad;
  bad.length = 0;
  CHECK_THROWS(generate_sequence(bad));
  ScenarioConfig bad2;
  bad2.min_objects = 5;
  bad2.max_objects = 2;
  CHECK_THROWS(generate_sequence(bad2));
  ScenarioConfig bad3;
  bad3.min_box = 0.2;
  bad3.max_box = 0.1;
  CHECK_THROWS(generate_sequence(bad3));
  ScenarioConfig bad4;
  bad4.fps = 0.0;
  CHECK_THROWS(generate_sequence(bad4));
}
