#include "gamot/metrics.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "json.hpp"

#include "gamot/solvers.hpp"

namespace gamot {

namespace {

struct FrameBoxes {
  std::vector<std::int64_t> ids;
  std::vector<BoundingBox> boxes;
};

std::map<int, FrameBoxes> by_frame(std::span<const TrackRow> rows, const char* what) {
  std::map<int, FrameBoxes> out;
  std::set<std::pair<int, std::int64_t>> seen;
  for (const TrackRow& r : rows) {
    if (!r.box.valid()) throw std::invalid_argument(std::string(what) + ": invalid box");
    if (!seen.emplace(r.frame, r.id).second)
      throw std::invalid_argument(std::string(what) + ": duplicate (frame, id) row");
    FrameBoxes& f = out[r.frame];
    f.ids.push_back(r.id);
    f.boxes.push_back(r.box);
  }
  return out;
}

}  // namespace

MetricsReport evaluate_tracking(std::span<const TrackRow> ground_truth,
                                std::span<const TrackRow> output, double overlap_threshold) {
  if (overlap_threshold <= 0.0 || overlap_threshold > 1.0)
    throw std::invalid_argument("evaluate_tracking: threshold must be in (0, 1]");

  std::map<int, FrameBoxes> gt = by_frame(ground_truth, "ground truth");
  std::map<int, FrameBoxes> pred = by_frame(output, "output");

  MetricsReport rep;
  rep.gt_boxes = static_cast<int>(ground_truth.size());
  rep.output_boxes = static_cast<int>(output.size());

  std::set<int> frames;
  for (const auto& [f, _] : gt) frames.insert(f);
  for (const auto& [f, _] : pred) frames.insert(f);

  double overlap_sum = 0.0;
  std::map<std::int64_t, std::int64_t> last_match;        // gt id -> last matched output id
  std::map<std::int64_t, std::vector<char>> coverage;     // gt id -> per-own-frame hit flags
  std::map<std::pair<std::int64_t, std::int64_t>, int> colocated;  // (gt id, output id) -> frames

  for (int f : frames) {
    auto git = gt.find(f);
    auto pit = pred.find(f);
    const FrameBoxes* g = git == gt.end() ? nullptr : &git->second;
    const FrameBoxes* p = pit == pred.end() ? nullptr : &pit->second;
    int gn = g ? static_cast<int>(g->ids.size()) : 0;
    int pn = p ? static_cast<int>(p->ids.size()) : 0;

    std::vector<char> g_hit(static_cast<std::size_t>(gn), 0);
    if (gn > 0 && pn > 0) {
      Tensor weights = Tensor::zeros(gn, pn);
      for (int i = 0; i < gn; ++i)
        for (int j = 0; j < pn; ++j) {
          double v = iou(g->boxes[static_cast<std::size_t>(i)],
                         p->boxes[static_cast<std::size_t>(j)]);
          if (v >= overlap_threshold) {
            weights.at(i, j) = v;
            colocated[{g->ids[static_cast<std::size_t>(i)],
                       p->ids[static_cast<std::size_t>(j)]}] += 1;
          }
        }
      ExactAssignment assignment = hungarian(weights);
      int matched_here = 0;
      for (auto [i, j] : assignment.pairs) {
        double v = weights.at(i, j);
        if (v < overlap_threshold) continue;  // gated-out pair the padding matched anyway
        ++matched_here;
        overlap_sum += v;
        g_hit[static_cast<std::size_t>(i)] = 1;
        std::int64_t gid = g->ids[static_cast<std::size_t>(i)];
        std::int64_t pid = p->ids[static_cast<std::size_t>(j)];
        auto it = last_match.find(gid);
        if (it != last_match.end() && it->second != pid) ++rep.id_switches;
        last_match[gid] = pid;
      }
      rep.matched_boxes += matched_here;
      rep.misses += gn - matched_here;
      rep.false_positives += pn - matched_here;
    } else {
      rep.misses += gn;
      rep.false_positives += pn;
    }
    if (g)
      for (int i = 0; i < gn; ++i)
        coverage[g->ids[static_cast<std::size_t>(i)]].push_back(g_hit[static_cast<std::size_t>(i)]);
  }

  rep.gt_identities = static_cast<int>(coverage.size());
  for (const auto& [gid, hits] : coverage) {
    int covered = static_cast<int>(std::count(hits.begin(), hits.end(), char{1}));
    double ratio = hits.empty() ? 0.0 : static_cast<double>(covered) / static_cast<double>(hits.size());
    if (ratio >= 0.8)
      ++rep.mostly_tracked;
    else if (ratio <= 0.2)
      ++rep.mostly_lost;
    else
      ++rep.partially_tracked;
    // Resumptions: covered after an uncovered stretch that followed coverage.
    bool ever_covered = false, in_gap = false;
    for (char h : hits) {
      if (h) {
        if (ever_covered && in_gap) ++rep.fragmentations;
        ever_covered = true;
        in_gap = false;
      } else if (ever_covered) {
        in_gap = true;
      }
    }
  }

  if (rep.gt_boxes > 0)
    rep.accuracy = 1.0 - static_cast<double>(rep.misses + rep.false_positives + rep.id_switches) /
                             static_cast<double>(rep.gt_boxes);
  rep.overlap_mean = rep.matched_boxes > 0 ? overlap_sum / rep.matched_boxes : 0.0;

  // Best global identity pairing on co-location counts.
  if (!colocated.empty()) {
    std::vector<std::int64_t> gids, pids;
    for (const auto& [key, _] : colocated) {
      gids.push_back(key.first);
      pids.push_back(key.second);
    }
    std::sort(gids.begin(), gids.end());
    gids.erase(std::unique(gids.begin(), gids.end()), gids.end());
    std::sort(pids.begin(), pids.end());
    pids.erase(std::unique(pids.begin(), pids.end()), pids.end());
    Tensor counts = Tensor::zeros(static_cast<int>(gids.size()), static_cast<int>(pids.size()));
    for (const auto& [key, n] : colocated) {
      int i = static_cast<int>(std::lower_bound(gids.begin(), gids.end(), key.first) - gids.begin());
      int j = static_cast<int>(std::lower_bound(pids.begin(), pids.end(), key.second) - pids.begin());
      counts.at(i, j) = static_cast<double>(n);
    }
    rep.identity_true_positives = static_cast<int>(hungarian(counts).objective + 0.5);
  }
  if (rep.gt_boxes + rep.output_boxes > 0)
    rep.identity_f1 = 2.0 * static_cast<double>(rep.identity_true_positives) /
                      static_cast<double>(rep.gt_boxes + rep.output_boxes);
  if (rep.gt_identities > 0) {
    rep.mostly_tracked_ratio =
        static_cast<double>(rep.mostly_tracked) / static_cast<double>(rep.gt_identities);
    rep.mostly_lost_ratio =
        static_cast<double>(rep.mostly_lost) / static_cast<double>(rep.gt_identities);
  }

  return rep;
}

std::string metrics_table(const MetricsReport& r) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(4);
  out << "accuracy       " << r.accuracy << "\n"
      << "overlap_mean   " << r.overlap_mean << "\n"
      << "identity_f1    " << r.identity_f1 << "\n"
      << "gt_boxes       " << r.gt_boxes << "\n"
      << "output_boxes   " << r.output_boxes << "\n"
      << "matched_boxes  " << r.matched_boxes << "\n"
      << "misses         " << r.misses << "\n"
      << "false_pos      " << r.false_positives << "\n"
      << "id_switches    " << r.id_switches << "\n"
      << "fragmentations " << r.fragmentations << "\n"
      << "gt_identities  " << r.gt_identities << "\n"
      << "mostly_tracked " << r.mostly_tracked << " (" << r.mostly_tracked_ratio << ")\n"
      << "partial        " << r.partially_tracked << "\n"
      << "mostly_lost    " << r.mostly_lost << " (" << r.mostly_lost_ratio << ")\n";
  return out.str();
}

std::string metrics_json(const MetricsReport& r) {
  nlohmann::ordered_json j;
  j["gt_boxes"] = r.gt_boxes;
  j["output_boxes"] = r.output_boxes;
  j["matched_boxes"] = r.matched_boxes;
  j["misses"] = r.misses;
  j["false_positives"] = r.false_positives;
  j["id_switches"] = r.id_switches;
  j["fragmentations"] = r.fragmentations;
  j["gt_identities"] = r.gt_identities;
  j["mostly_tracked"] = r.mostly_tracked;
  j["partially_tracked"] = r.partially_tracked;
  j["mostly_lost"] = r.mostly_lost;
  j["identity_true_positives"] = r.identity_true_positives;
  j["accuracy"] = r.accuracy;
  j["overlap_mean"] = r.overlap_mean;
  j["identity_f1"] = r.identity_f1;
  j["mostly_tracked_ratio"] = r.mostly_tracked_ratio;
  j["mostly_lost_ratio"] = r.mostly_lost_ratio;
  return j.dump(2);
}

}  // namespace gamot
