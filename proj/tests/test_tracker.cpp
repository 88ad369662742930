#include <cmath>
#include <filesystem>
#include <set>
#include <vector>

#include "doctest.h"
#include "gamot/tracker.hpp"

using namespace gamot;

namespace {

Detection det_at(double cx, double cy, double side = 0.05) {
  return Detection{BoundingBox{cx - 0.5 * side, cy - 0.5 * side, side, side}, {}};
}

BoundingBox box_at(double cx, double cy, double side = 0.05) {
  return BoundingBox{cx - 0.5 * side, cy - 0.5 * side, side, side};
}

TrackerConfig baseline_config(int birth, int death) {
  TrackerConfig cfg;
  cfg.solver = SolverKind::HungarianBaseline;
  cfg.birth_frames = birth;
  cfg.death_frames = death;
  return cfg;
}

}  // namespace

TEST_CASE("window sizes derive from the frame rate") {
  TrackerConfig cfg;  // fps 10
  CHECK(cfg.resolved_birth_frames() == 5);
  CHECK(cfg.resolved_death_frames() == 2);

  cfg.fps = 30.0;
  CHECK(cfg.resolved_birth_frames() == 15);
  CHECK(cfg.resolved_death_frames() == 5);

  cfg.fps = 1.0;  // tiny rates clamp to one frame
  CHECK(cfg.resolved_birth_frames() == 1);
  CHECK(cfg.resolved_death_frames() == 1);

  cfg.birth_frames = 7;
  cfg.death_frames = 4;
  CHECK(cfg.resolved_birth_frames() == 7);
  CHECK(cfg.resolved_death_frames() == 4);
}

TEST_CASE("velocity fit recovers a straight line exactly") {
  std::vector<BoundingBox> history;
  for (int t = 0; t < 5; ++t) history.push_back(box_at(0.1 + 0.03 * t, 0.4 - 0.01 * t));
  auto [vx, vy] = least_squares_velocity(history, 5);
  CHECK(vx == doctest::Approx(0.03).epsilon(1e-12));
  CHECK(vy == doctest::Approx(-0.01).epsilon(1e-12));

  // Only the newest `window` boxes participate.
  std::vector<BoundingBox> bent = {box_at(0.9, 0.9), box_at(0.5, 0.5), box_at(0.55, 0.5),
                                   box_at(0.6, 0.5)};
  auto [wx, wy] = least_squares_velocity(bent, 3);
  CHECK(wx == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(wy == doctest::Approx(0.0).epsilon(1e-12));

  CHECK(least_squares_velocity({history.data(), 1}, 5) == std::pair{0.0, 0.0});
  std::vector<BoundingBox> two = {box_at(0.2, 0.3), box_at(0.26, 0.31)};
  auto [tx, ty] = least_squares_velocity(two, 5);
  CHECK(tx == doctest::Approx(0.06).epsilon(1e-12));
  CHECK(ty == doctest::Approx(0.01).epsilon(1e-12));
}

TEST_CASE("fresh detections open provisional tracks without emitting") {
  Tracker tracker(nullptr, baseline_config(3, 2));
  std::vector<Detection> dets = {det_at(0.2, 0.2), det_at(0.5, 0.5), det_at(0.8, 0.8)};
  std::vector<TrackRow> emitted = tracker.step(0, dets);

  CHECK(emitted.empty());
  CHECK(tracker.rows().empty());
  CHECK(tracker.next_id() == 4);
  std::vector<TrackInfo> live = tracker.active();
  REQUIRE(live.size() == 3);
  for (const TrackInfo& t : live) {
    CHECK(t.status == TrackStatus::PendingBirth);
    CHECK(t.pending_appearances == 1);
  }
}

TEST_CASE("a one-frame birth window confirms immediately") {
  Tracker tracker(nullptr, baseline_config(1, 2));
  std::vector<Detection> dets = {det_at(0.3, 0.3)};
  std::vector<TrackRow> emitted = tracker.step(0, dets);
  REQUIRE(emitted.size() == 1);
  CHECK(emitted[0].frame == 0);
  CHECK(emitted[0].id == 1);
  CHECK(tracker.active()[0].status == TrackStatus::Confirmed);
}

TEST_CASE("one sighting short of the window leaves no trace") {
  Tracker tracker(nullptr, baseline_config(3, 2));
  tracker.step(0, std::vector<Detection>{det_at(0.3, 0.3)});
  tracker.step(1, std::vector<Detection>{det_at(0.3, 0.3)});
  // Two sightings, window is three; the miss discards the provisional track.
  tracker.step(2, std::vector<Detection>{});
  CHECK(tracker.rows().empty());
  CHECK(tracker.active().empty());

  // And it never comes back on its own.
  tracker.step(3, std::vector<Detection>{});
  CHECK(tracker.rows().empty());
}

TEST_CASE("confirmation backfills the provisional window when asked") {
  TrackerConfig cfg = baseline_config(3, 2);
  Tracker tracker(nullptr, cfg);
  tracker.step(0, std::vector<Detection>{det_at(0.3, 0.3)});
  tracker.step(1, std::vector<Detection>{det_at(0.31, 0.3)});
  std::vector<TrackRow> third = tracker.step(2, std::vector<Detection>{det_at(0.32, 0.3)});

  REQUIRE(third.size() == 3);  // the confirming call replays frames 0 and 1
  std::vector<TrackRow> all = tracker.rows();
  REQUIRE(all.size() == 3);
  for (int k = 0; k < 3; ++k) {
    CHECK(all[static_cast<std::size_t>(k)].frame == k);
    CHECK(all[static_cast<std::size_t>(k)].id == 1);
  }

  cfg.backfill_births = false;
  Tracker quiet(nullptr, cfg);
  quiet.step(0, std::vector<Detection>{det_at(0.3, 0.3)});
  quiet.step(1, std::vector<Detection>{det_at(0.31, 0.3)});
  std::vector<TrackRow> confirm = quiet.step(2, std::vector<Detection>{det_at(0.32, 0.3)});
  REQUIRE(confirm.size() == 1);
  CHECK(confirm[0].frame == 2);
  CHECK(quiet.rows().size() == 1);
}

TEST_CASE("an occlusion one frame shorter than the death window keeps the id") {
  Tracker tracker(nullptr, baseline_config(1, 3));
  auto place = [](int t) { return det_at(0.1 + 0.01 * t, 0.2); };

  for (int t = 0; t <= 4; ++t) tracker.step(t, std::vector<Detection>{place(t)});
  REQUIRE(tracker.rows().size() == 5);

  tracker.step(5, std::vector<Detection>{});
  std::vector<TrackInfo> live = tracker.active();
  REQUIRE(live.size() == 1);
  CHECK(live[0].status == TrackStatus::Dummy);
  CHECK(live[0].dummy_rounds == 1);

  tracker.step(6, std::vector<Detection>{});
  CHECK(tracker.active()[0].dummy_rounds == 2);

  // Reappears exactly where the straight-line coast predicts.
  std::vector<TrackRow> back = tracker.step(7, std::vector<Detection>{place(7)});
  REQUIRE(back.size() == 1);
  CHECK(back[0].id == 1);
  CHECK(tracker.next_id() == 2);  // nothing new was ever opened
  CHECK(tracker.active()[0].status == TrackStatus::Confirmed);
  CHECK(tracker.active()[0].dummy_rounds == 0);

  // Dormant frames emit nothing.
  for (const TrackRow& row : tracker.rows()) {
    CHECK(row.frame != 5);
    CHECK(row.frame != 6);
  }
}

TEST_CASE("an occlusion reaching the death window retires the id for good") {
  Tracker tracker(nullptr, baseline_config(1, 2));
  auto place = [](int t) { return det_at(0.1 + 0.01 * t, 0.2); };

  for (int t = 0; t <= 4; ++t) tracker.step(t, std::vector<Detection>{place(t)});
  tracker.step(5, std::vector<Detection>{});
  tracker.step(6, std::vector<Detection>{});  // second miss hits the window
  CHECK(tracker.active().empty());

  std::vector<TrackRow> back = tracker.step(7, std::vector<Detection>{place(7)});
  REQUIRE(back.size() == 1);  // one-frame birth window confirms the newcomer
  CHECK(back[0].id == 2);     // identifiers are never reused
  CHECK(tracker.next_id() == 3);
}

TEST_CASE("emitted rows are unique per frame and sorted") {
  Tracker tracker(nullptr, baseline_config(1, 2));
  for (int t = 0; t < 6; ++t) {
    std::vector<Detection> dets = {det_at(0.2 + 0.01 * t, 0.2), det_at(0.7 - 0.01 * t, 0.6)};
    tracker.step(t, dets);
  }
  std::vector<TrackRow> rows = tracker.rows();
  REQUIRE(rows.size() == 12);
  std::set<std::pair<int, std::int64_t>> keys;
  for (const TrackRow& r : rows) CHECK(keys.insert({r.frame, r.id}).second);
  for (std::size_t k = 1; k < rows.size(); ++k) {
    bool ordered = rows[k - 1].frame < rows[k].frame ||
                   (rows[k - 1].frame == rows[k].frame && rows[k - 1].id < rows[k].id);
    CHECK(ordered);
  }
}

TEST_CASE("frame indices must increase strictly") {
  Tracker tracker(nullptr, baseline_config(1, 2));
  tracker.step(3, std::vector<Detection>{det_at(0.2, 0.2)});
  CHECK_THROWS(tracker.step(3, std::vector<Detection>{det_at(0.2, 0.2)}));
  CHECK_THROWS(tracker.step(1, std::vector<Detection>{det_at(0.2, 0.2)}));
  // Gaps are fine.
  CHECK_NOTHROW(tracker.step(9, std::vector<Detection>{det_at(0.2, 0.2)}));
}

TEST_CASE("learned solvers refuse to run without a model") {
  TrackerConfig cfg;
  cfg.solver = SolverKind::Learned;
  CHECK_THROWS(Tracker(nullptr, cfg));
  cfg.solver = SolverKind::AffinityDirect;
  CHECK_THROWS(Tracker(nullptr, cfg));
  cfg.solver = SolverKind::HungarianBaseline;
  CHECK_NOTHROW(Tracker(nullptr, cfg));
}

TEST_CASE("track files round-trip every field exactly") {
  std::vector<TrackRow> rows = {
      {0, 1, BoundingBox{0.1 + 0.2, 1.0 / 3.0, 0.05, 0.07}},
      {1, 1, BoundingBox{0.30000000000000004, 0.333, 0.05, 0.07}},
      {1, 42, BoundingBox{1e-9, 0.9999999999999999, 0.04, 0.04}},
  };
  std::filesystem::path path = std::filesystem::temp_directory_path() / "gamot_tracks_test.csv";
  write_tracks(path.string(), rows);
  std::vector<TrackRow> back = read_tracks(path.string());
  std::filesystem::remove(path);

  REQUIRE(back.size() == rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CHECK(back[k].frame == rows[k].frame);
    CHECK(back[k].id == rows[k].id);
    CHECK(back[k].box.x == rows[k].box.x);
    CHECK(back[k].box.y == rows[k].box.y);
    CHECK(back[k].box.w == rows[k].box.w);
    CHECK(back[k].box.h == rows[k].box.h);
  }
}
