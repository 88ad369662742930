// gamot: synthetic multi-object tracking workbench.
//
// Subcommands: generate | train | solve | gradcheck | track | eval | ablate
// | plot. Every run is deterministic given its config, seeds, and inputs;
// commands that write a primary output also write the fully materialized
// config next to it as <output>.config.json.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gamot/loss.hpp"
#include "gamot/metrics.hpp"
#include "gamot/model.hpp"
#include "gamot/scenario.hpp"
#include "gamot/solvers.hpp"
#include "gamot/text.hpp"
#include "gamot/tracker.hpp"
#include "gamot/trainer.hpp"

namespace {

using nlohmann::json;
using namespace gamot;

// ---- configuration ----------------------------------------------------------

struct AppConfig {
  ScenarioConfig scenario;
  ModelConfig model;
  std::uint64_t model_seed = 7;
  LossConfig loss;
  TrainerConfig trainer;
  TrackerConfig tracker;
  double eval_overlap = 0.5;
};

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

void check_keys(const json& j, const std::string& section,
                const std::set<std::string>& allowed) {
  if (!j.is_object()) fail("config: section '" + section + "' must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.contains(it.key()))
      fail("config: unknown key '" + (section.empty() ? "" : section + ".") + it.key() + "'");
}

template <typename T>
void fetch(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

TrainMode parse_mode(const std::string& s) {
  if (s == "full") return TrainMode::Full;
  if (s == "no-assembly") return TrainMode::NoAssembly;
  if (s == "no-gnn") return TrainMode::NoGnn;
  fail("unknown training mode '" + s + "' (full | no-assembly | no-gnn)");
}

std::string mode_name(TrainMode m) {
  switch (m) {
    case TrainMode::Full: return "full";
    case TrainMode::NoAssembly: return "no-assembly";
    case TrainMode::NoGnn: return "no-gnn";
  }
  return "?";
}

SolverKind parse_solver(const std::string& s) {
  if (s == "learned") return SolverKind::Learned;
  if (s == "affinity-direct") return SolverKind::AffinityDirect;
  if (s == "hungarian-baseline") return SolverKind::HungarianBaseline;
  fail("unknown solver '" + s + "' (learned | affinity-direct | hungarian-baseline)");
}

std::string solver_name(SolverKind k) {
  switch (k) {
    case SolverKind::Learned: return "learned";
    case SolverKind::AffinityDirect: return "affinity-direct";
    case SolverKind::HungarianBaseline: return "hungarian-baseline";
  }
  return "?";
}

void apply_scenario(const json& j, ScenarioConfig& c) {
  check_keys(j, "scenario",
             {"arena_w", "arena_h", "min_objects", "max_objects", "min_box", "max_box",
              "velocity_scale", "motion_noise", "birth_prob", "death_prob", "descriptor_dim",
              "descriptor_scale", "descriptor_noise", "detection_jitter", "miss_rate",
              "clutter_rate", "length", "fps", "seed"});
  fetch(j, "arena_w", c.arena_w);
  fetch(j, "arena_h", c.arena_h);
  fetch(j, "min_objects", c.min_objects);
  fetch(j, "max_objects", c.max_objects);
  fetch(j, "min_box", c.min_box);
  fetch(j, "max_box", c.max_box);
  fetch(j, "velocity_scale", c.velocity_scale);
  fetch(j, "motion_noise", c.motion_noise);
  fetch(j, "birth_prob", c.birth_prob);
  fetch(j, "death_prob", c.death_prob);
  fetch(j, "descriptor_dim", c.descriptor_dim);
  fetch(j, "descriptor_scale", c.descriptor_scale);
  fetch(j, "descriptor_noise", c.descriptor_noise);
  fetch(j, "detection_jitter", c.detection_jitter);
  fetch(j, "miss_rate", c.miss_rate);
  fetch(j, "clutter_rate", c.clutter_rate);
  fetch(j, "length", c.length);
  fetch(j, "fps", c.fps);
  fetch(j, "seed", c.seed);
}

void apply_model(const json& j, ModelConfig& c, std::uint64_t& seed) {
  check_keys(j, "model",
             {"descriptor_dim", "appearance_dim", "motion_dim", "head_hidden", "embed_dim",
              "relation_hidden", "tracklet_len", "arena_w", "arena_h", "shared_embedding",
              "seed"});
  fetch(j, "descriptor_dim", c.descriptor_dim);
  fetch(j, "appearance_dim", c.appearance_dim);
  fetch(j, "motion_dim", c.motion_dim);
  fetch(j, "head_hidden", c.head_hidden);
  fetch(j, "embed_dim", c.embed_dim);
  fetch(j, "relation_hidden", c.relation_hidden);
  fetch(j, "tracklet_len", c.tracklet_len);
  fetch(j, "arena_w", c.arena_w);
  fetch(j, "arena_h", c.arena_h);
  fetch(j, "shared_embedding", c.shared_embedding);
  fetch(j, "seed", seed);
}

void apply_loss(const json& j, LossConfig& c) {
  check_keys(j, "loss",
             {"positive_weight", "lambda_appearance", "lambda_motion", "lambda_fused",
              "lambda_association", "one_to_one_columns"});
  fetch(j, "positive_weight", c.positive_weight);
  fetch(j, "lambda_appearance", c.lambda_appearance);
  fetch(j, "lambda_motion", c.lambda_motion);
  fetch(j, "lambda_fused", c.lambda_fused);
  fetch(j, "lambda_association", c.lambda_association);
  fetch(j, "one_to_one_columns", c.one_to_one_columns);
}

void apply_trainer(const json& j, TrainerConfig& c) {
  check_keys(j, "train",
             {"learning_rate", "decay_factor", "decay_interval", "iterations", "clip_norm",
              "weight_decay", "shuffle_seed", "mode"});
  fetch(j, "learning_rate", c.learning_rate);
  fetch(j, "decay_factor", c.decay_factor);
  fetch(j, "decay_interval", c.decay_interval);
  fetch(j, "iterations", c.iterations);
  fetch(j, "clip_norm", c.clip_norm);
  fetch(j, "weight_decay", c.weight_decay);
  fetch(j, "shuffle_seed", c.shuffle_seed);
  if (j.contains("mode")) c.mode = parse_mode(j.at("mode").get<std::string>());
}

void apply_tracker(const json& j, TrackerConfig& c) {
  check_keys(j, "tracker",
             {"fps", "birth_frames", "death_frames", "backfill_births", "solver",
              "overlap_threshold"});
  fetch(j, "fps", c.fps);
  fetch(j, "birth_frames", c.birth_frames);
  fetch(j, "death_frames", c.death_frames);
  fetch(j, "backfill_births", c.backfill_births);
  if (j.contains("solver")) c.solver = parse_solver(j.at("solver").get<std::string>());
  fetch(j, "overlap_threshold", c.overlap_threshold);
}

void apply_eval(const json& j, AppConfig& cfg) {
  check_keys(j, "eval", {"overlap_threshold"});
  fetch(j, "overlap_threshold", cfg.eval_overlap);
}

AppConfig load_config(const std::string& path) {
  AppConfig cfg;
  if (path.empty()) return cfg;
  std::ifstream in(path);
  if (!in) fail("cannot open config file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    fail("config parse error in " + path + ": " + e.what());
  }
  check_keys(j, "", {"scenario", "model", "loss", "train", "tracker", "eval"});
  if (j.contains("scenario")) apply_scenario(j["scenario"], cfg.scenario);
  if (j.contains("model")) apply_model(j["model"], cfg.model, cfg.model_seed);
  if (j.contains("loss")) apply_loss(j["loss"], cfg.loss);
  if (j.contains("train")) apply_trainer(j["train"], cfg.trainer);
  if (j.contains("tracker")) apply_tracker(j["tracker"], cfg.tracker);
  if (j.contains("eval")) apply_eval(j["eval"], cfg);
  return cfg;
}

json materialize(const AppConfig& cfg) {
  json j;
  j["scenario"] = {{"arena_w", cfg.scenario.arena_w},
                   {"arena_h", cfg.scenario.arena_h},
                   {"min_objects", cfg.scenario.min_objects},
                   {"max_objects", cfg.scenario.max_objects},
                   {"min_box", cfg.scenario.min_box},
                   {"max_box", cfg.scenario.max_box},
                   {"velocity_scale", cfg.scenario.velocity_scale},
                   {"motion_noise", cfg.scenario.motion_noise},
                   {"birth_prob", cfg.scenario.birth_prob},
                   {"death_prob", cfg.scenario.death_prob},
                   {"descriptor_dim", cfg.scenario.descriptor_dim},
                   {"descriptor_scale", cfg.scenario.descriptor_scale},
                   {"descriptor_noise", cfg.scenario.descriptor_noise},
                   {"detection_jitter", cfg.scenario.detection_jitter},
                   {"miss_rate", cfg.scenario.miss_rate},
                   {"clutter_rate", cfg.scenario.clutter_rate},
                   {"length", cfg.scenario.length},
                   {"fps", cfg.scenario.fps},
                   {"seed", cfg.scenario.seed}};
  j["model"] = {{"descriptor_dim", cfg.model.descriptor_dim},
                {"appearance_dim", cfg.model.appearance_dim},
                {"motion_dim", cfg.model.motion_dim},
                {"head_hidden", cfg.model.head_hidden},
                {"embed_dim", cfg.model.embed_dim},
                {"relation_hidden", cfg.model.relation_hidden},
                {"tracklet_len", cfg.model.tracklet_len},
                {"arena_w", cfg.model.arena_w},
                {"arena_h", cfg.model.arena_h},
                {"shared_embedding", cfg.model.shared_embedding},
                {"seed", cfg.model_seed}};
  j["loss"] = {{"positive_weight", cfg.loss.positive_weight},
               {"lambda_appearance", cfg.loss.lambda_appearance},
               {"lambda_motion", cfg.loss.lambda_motion},
               {"lambda_fused", cfg.loss.lambda_fused},
               {"lambda_association", cfg.loss.lambda_association},
               {"one_to_one_columns", cfg.loss.one_to_one_columns}};
  j["train"] = {{"learning_rate", cfg.trainer.learning_rate},
                {"decay_factor", cfg.trainer.decay_factor},
                {"decay_interval", cfg.trainer.decay_interval},
                {"iterations", cfg.trainer.iterations},
                {"clip_norm", cfg.trainer.clip_norm},
                {"weight_decay", cfg.trainer.weight_decay},
                {"shuffle_seed", cfg.trainer.shuffle_seed},
                {"mode", mode_name(cfg.trainer.mode)}};
  j["tracker"] = {{"fps", cfg.tracker.fps},
                  {"birth_frames", cfg.tracker.birth_frames},
                  {"death_frames", cfg.tracker.death_frames},
                  {"backfill_births", cfg.tracker.backfill_births},
                  {"solver", solver_name(cfg.tracker.solver)},
                  {"overlap_threshold", cfg.tracker.overlap_threshold}};
  j["eval"] = {{"overlap_threshold", cfg.eval_overlap}};
  return j;
}

void echo_config(const AppConfig& cfg, const std::string& primary_output) {
  std::filesystem::path p(primary_output);
  p += ".config.json";
  std::ofstream out(p);
  if (!out) fail("cannot write " + p.string());
  out << materialize(cfg).dump(2) << "\n";
}

// ---- small shared helpers ----------------------------------------------------

Tensor weights_from_json(const json& j) {
  if (!j.is_array() || j.empty()) fail("problem file: 'weights' must be a non-empty array of rows");
  std::vector<std::vector<double>> rows;
  for (const json& r : j) {
    if (!r.is_array() || r.empty()) fail("problem file: each row must be a non-empty array");
    rows.push_back(r.get<std::vector<double>>());
    if (rows.back().size() != rows.front().size())
      fail("problem file: ragged rows in 'weights'");
  }
  Tensor t = Tensor::zeros(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t k = 0; k < rows[i].size(); ++k)
      t.at(static_cast<int>(i), static_cast<int>(k)) = rows[i][k];
  return t;
}

json assignment_to_json(const ExactAssignment& a) {
  json pairs = json::array();
  for (auto [i, k] : a.pairs) pairs.push_back(json::array({i, k}));
  return json{{"pairs", std::move(pairs)}, {"objective", a.objective}};
}

json result_to_json(const AssociationResult& r) {
  json matches = json::array();
  for (auto [i, k] : r.matches) matches.push_back(json::array({i, k}));
  return json{{"matches", std::move(matches)}, {"births", r.births}, {"deaths", r.deaths}};
}

TrainResult train_model(AssociationModel& model, const AppConfig& cfg,
                        const std::vector<FrameRecord>& frames,
                        std::vector<HistoryRow>* history_out = nullptr) {
  TrainingSet set = to_training_problems(frames, model.config().tracklet_len);
  if (set.instances.empty()) fail("training data yields no two-sided frame pairs");
  TrainerConfig tc = cfg.trainer;
  tc.loss = cfg.loss;
  Trainer trainer(model, tc);
  TrainResult result = trainer.run(set.instances);
  if (history_out) *history_out = result.history;
  return result;
}

// ---- svg emitters -------------------------------------------------------------

const char* kPalette[] = {"#d64550", "#2d7dd2", "#1b998b", "#e9a319",
                          "#7768ae", "#d1603d", "#4e937a", "#b5446e"};

std::string color_for(std::int64_t id) {
  return kPalette[static_cast<std::size_t>(id) % (sizeof(kPalette) / sizeof(kPalette[0]))];
}

void write_loss_svg(const std::string& history_path, const std::string& out_path) {
  std::ifstream in(history_path);
  if (!in) fail("cannot open history file " + history_path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("iteration,lr,", 0) != 0)
    fail("history file " + history_path + " has an unexpected header");
  std::vector<double> iters, totals;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> f;
    while (std::getline(ss, field, ',')) f.push_back(field);
    if (f.size() != 7) fail("history file: malformed row '" + line + "'");
    iters.push_back(static_cast<double>(parse_long(f[0])));
    totals.push_back(parse_double(f[2]));
  }
  if (iters.empty()) fail("history file has no rows");

  const double W = 720, H = 420, ml = 60, mr = 15, mt = 15, mb = 40;
  double x_max = std::max(1.0, iters.back());
  double y_max = *std::max_element(totals.begin(), totals.end());
  if (y_max <= 0) y_max = 1.0;
  auto px = [&](double it) { return ml + (W - ml - mr) * it / x_max; };
  auto py = [&](double v) { return H - mb - (H - mt - mb) * v / y_max; };

  std::ostringstream svg;
  svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H
      << "' viewBox='0 0 " << W << " " << H << "'>\n"
      << "<rect width='100%' height='100%' fill='white'/>\n"
      << "<line x1='" << ml << "' y1='" << H - mb << "' x2='" << W - mr << "' y2='" << H - mb
      << "' stroke='#333'/>\n"
      << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='" << H - mb
      << "' stroke='#333'/>\n";
  svg << "<polyline fill='none' stroke='#2d7dd2' stroke-width='1.5' points='";
  for (std::size_t i = 0; i < iters.size(); ++i)
    svg << px(iters[i]) << ',' << py(totals[i]) << ' ';
  svg << "'/>\n";
  svg << "<text x='" << (W / 2) << "' y='" << (H - 8)
      << "' font-family='sans-serif' font-size='13' text-anchor='middle'>iteration</text>\n"
      << "<text x='14' y='" << (H / 2)
      << "' font-family='sans-serif' font-size='13' text-anchor='middle' transform='rotate(-90 "
         "14 "
      << (H / 2) << ")'>total loss</text>\n"
      << "<text x='" << (ml - 6) << "' y='" << (py(y_max) + 4)
      << "' font-family='sans-serif' font-size='11' text-anchor='end'>" << format_double(y_max)
      << "</text>\n"
      << "<text x='" << (ml - 6) << "' y='" << (py(0) + 4)
      << "' font-family='sans-serif' font-size='11' text-anchor='end'>0</text>\n"
      << "<text x='" << px(x_max) << "' y='" << (H - mb + 16)
      << "' font-family='sans-serif' font-size='11' text-anchor='end'>"
      << static_cast<long>(x_max) << "</text>\n";
  svg << "</svg>\n";

  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) fail("cannot write " + out_path);
  out << svg.str();
}

void write_overlay_svgs(const std::vector<FrameRecord>& frames,
                        const std::vector<TrackRow>& tracks, const std::string& out_dir,
                        int every) {
  std::filesystem::create_directories(out_dir);
  std::map<int, std::vector<TrackRow>> by_frame;
  for (const TrackRow& r : tracks) by_frame[r.frame].push_back(r);

  double arena_w = 1.0, arena_h = 1.0;
  for (const FrameRecord& f : frames)
    for (const GtObject& o : f.objects) {
      arena_w = std::max(arena_w, o.box.x + o.box.w);
      arena_h = std::max(arena_h, o.box.y + o.box.h);
    }
  const double S = 600.0 / std::max(arena_w, arena_h);

  for (const FrameRecord& f : frames) {
    if (every > 1 && f.frame % every != 0) continue;
    std::ostringstream svg;
    double W = arena_w * S, H = arena_h * S;
    svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H
        << "' viewBox='0 0 " << W << " " << H << "'>\n"
        << "<rect width='100%' height='100%' fill='white' stroke='#999'/>\n"
        << "<text x='8' y='18' font-family='sans-serif' font-size='14' fill='#666'>frame "
        << f.frame << "</text>\n";
    for (const GtObject& o : f.objects)
      svg << "<rect x='" << o.box.x * S << "' y='" << o.box.y * S << "' width='" << o.box.w * S
          << "' height='" << o.box.h * S
          << "' fill='none' stroke='#bbbbbb' stroke-dasharray='4 3'/>\n";
    auto it = by_frame.find(f.frame);
    if (it != by_frame.end())
      for (const TrackRow& r : it->second) {
        std::string c = color_for(r.id);
        svg << "<rect x='" << r.box.x * S << "' y='" << r.box.y * S << "' width='" << r.box.w * S
            << "' height='" << r.box.h * S << "' fill='none' stroke='" << c
            << "' stroke-width='2'/>\n"
            << "<text x='" << r.box.x * S + 2 << "' y='" << r.box.y * S - 3
            << "' font-family='sans-serif' font-size='11' fill='" << c << "'>" << r.id
            << "</text>\n";
      }
    svg << "</svg>\n";

    char name[32];
    std::snprintf(name, sizeof(name), "frame_%05d.svg", f.frame);
    std::filesystem::path p = std::filesystem::path(out_dir) / name;
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) fail("cannot write " + p.string());
    out << svg.str();
  }
}

// ---- subcommands ---------------------------------------------------------------

int cmd_generate(const std::string& config_path, const std::string& out_path,
                 std::int64_t seed_override) {
  AppConfig cfg = load_config(config_path);
  if (seed_override >= 0) cfg.scenario.seed = static_cast<std::uint64_t>(seed_override);
  std::vector<FrameRecord> frames = generate_sequence(cfg.scenario);
  write_sequence(out_path, frames);
  echo_config(cfg, out_path);
  std::size_t objects = 0, detections = 0;
  for (const FrameRecord& f : frames) {
    objects += f.objects.size();
    detections += f.detections.size();
  }
  std::cout << "wrote " << frames.size() << " frames, " << objects << " ground-truth boxes, "
            << detections << " detections to " << out_path << "\n";
  return 0;
}

int cmd_train(const std::string& config_path, const std::string& data_path,
              const std::string& checkpoint_path, const std::string& history_path,
              const std::string& mode, std::int64_t seed_override) {
  AppConfig cfg = load_config(config_path);
  if (!mode.empty()) cfg.trainer.mode = parse_mode(mode);
  if (seed_override >= 0) cfg.model_seed = static_cast<std::uint64_t>(seed_override);
  std::vector<FrameRecord> frames = read_sequence(data_path);
  AssociationModel model(cfg.model, cfg.model_seed);
  TrainResult result = train_model(model, cfg, frames);
  model.save(checkpoint_path);
  if (!history_path.empty()) write_history_csv(history_path, result.history);
  echo_config(cfg, checkpoint_path);
  std::cout << "trained " << cfg.trainer.iterations << " iterations (" << mode_name(cfg.trainer.mode)
            << "): loss " << format_double(result.initial_loss) << " -> "
            << format_double(result.final_loss) << "\ncheckpoint: " << checkpoint_path << "\n";
  return 0;
}

int cmd_solve(const std::string& input_path, const std::string& method, double theta,
              const std::string& out_path) {
  std::ifstream in(input_path);
  if (!in) fail("cannot open problem file " + input_path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    fail("problem file parse error: " + std::string(e.what()));
  }
  check_keys(j, "", {"weights"});
  if (!j.contains("weights")) fail("problem file: missing 'weights'");
  Tensor weights = weights_from_json(j["weights"]);

  json out;
  if (method == "hungarian")
    out = assignment_to_json(hungarian(weights));
  else if (method == "brute-force")
    out = assignment_to_json(brute_force(weights));
  else if (method == "greedy")
    out = assignment_to_json(greedy(weights));
  else if (method == "birth-death")
    out = result_to_json(solve_with_birth_death(weights, theta));
  else if (method == "interpret")
    out = result_to_json(interpret_association(weights));
  else
    fail("unknown method '" + method +
         "' (hungarian | brute-force | greedy | birth-death | interpret)");

  std::string text = out.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream os(out_path, std::ios::binary | std::ios::trunc);
    if (!os) fail("cannot write " + out_path);
    os << text;
    std::cout << "wrote " << out_path << "\n";
  }
  return 0;
}

int cmd_gradcheck(double tolerance, std::uint64_t seed, int instances);

int cmd_track(const std::string& config_path, const std::string& data_path,
              const std::string& checkpoint_path, const std::string& out_path,
              const std::string& solver) {
  AppConfig cfg = load_config(config_path);
  if (!solver.empty()) cfg.tracker.solver = parse_solver(solver);
  std::vector<FrameRecord> frames = read_sequence(data_path);

  std::optional<AssociationModel> model;
  if (cfg.tracker.solver != SolverKind::HungarianBaseline) {
    if (checkpoint_path.empty()) fail("the learned solvers need --checkpoint");
    model.emplace(cfg.model, cfg.model_seed);
    model->load(checkpoint_path);
  }
  std::vector<TrackRow> rows = run_tracker(model ? &*model : nullptr, cfg.tracker, frames);
  write_tracks(out_path, rows);
  echo_config(cfg, out_path);
  std::cout << "wrote " << rows.size() << " track rows (" << solver_name(cfg.tracker.solver)
            << ") to " << out_path << "\n";
  return 0;
}

int cmd_eval(const std::string& data_path, const std::string& tracks_path, double threshold,
             const std::string& json_path) {
  std::vector<FrameRecord> frames = read_sequence(data_path);
  std::vector<TrackRow> tracks = read_tracks(tracks_path);
  MetricsReport report = evaluate_tracking(gt_rows(frames), tracks, threshold);
  std::cout << metrics_table(report);
  if (!json_path.empty()) {
    std::ofstream out(json_path, std::ios::binary | std::ios::trunc);
    if (!out) fail("cannot write " + json_path);
    out << metrics_json(report) << "\n";
    std::cout << "report: " << json_path << "\n";
  }
  return 0;
}

struct AblationRow {
  std::string name;
  TrainMode mode;
  SolverKind solver;
  double final_loss = 0.0;
  MetricsReport report;
};

int cmd_ablate(const std::string& config_path, std::int64_t seed_override, int iterations,
               const std::string& out_path) {
  AppConfig cfg = load_config(config_path);
  if (seed_override >= 0) {
    cfg.scenario.seed = static_cast<std::uint64_t>(seed_override);
    cfg.model_seed = static_cast<std::uint64_t>(seed_override);
  }
  if (iterations > 0) cfg.trainer.iterations = iterations;

  std::vector<FrameRecord> train_frames = generate_sequence(cfg.scenario);
  ScenarioConfig test_cfg = cfg.scenario;
  test_cfg.seed = cfg.scenario.seed + 1;  // held-out world, same statistics
  std::vector<FrameRecord> test_frames = generate_sequence(test_cfg);
  std::vector<TrackRow> gt = gt_rows(test_frames);

  std::vector<AblationRow> rows = {
      {"full", TrainMode::Full, SolverKind::Learned, 0.0, {}},
      {"no-gnn", TrainMode::NoGnn, SolverKind::AffinityDirect, 0.0, {}},
      {"no-assembly", TrainMode::NoAssembly, SolverKind::Learned, 0.0, {}},
  };
  for (AblationRow& row : rows) {
    AppConfig run = cfg;
    run.trainer.mode = row.mode;
    AssociationModel model(run.model, run.model_seed);
    TrainResult tr = train_model(model, run, train_frames);
    row.final_loss = tr.final_loss;
    TrackerConfig tk = run.tracker;
    tk.solver = row.solver;
    std::vector<TrackRow> tracks = run_tracker(&model, tk, test_frames);
    row.report = evaluate_tracking(gt, tracks, cfg.eval_overlap);
    std::cout << "[" << row.name << "] trained, accuracy " << row.report.accuracy
              << ", id_switches " << row.report.id_switches << "\n";
  }

  std::ostringstream table;
  table.setf(std::ios::fixed);
  table.precision(4);
  table << "\nconfiguration  accuracy  id_switches  identity_f1  misses  false_pos  final_loss\n";
  for (const AblationRow& r : rows)
    table << r.name << std::string(r.name.size() < 15 ? 15 - r.name.size() : 1, ' ')
          << r.report.accuracy << "    " << r.report.id_switches << "           "
          << r.report.identity_f1 << "       " << r.report.misses << "      "
          << r.report.false_positives << "        " << format_double(r.final_loss) << "\n";
  std::cout << table.str();

  if (!out_path.empty()) {
    json j = json::array();
    for (const AblationRow& r : rows)
      j.push_back(json{{"configuration", r.name},
                       {"train_mode", mode_name(r.mode)},
                       {"solver", solver_name(r.solver)},
                       {"final_loss", r.final_loss},
                       {"metrics", json::parse(metrics_json(r.report))}});
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) fail("cannot write " + out_path);
    out << j.dump(2) << "\n";
    echo_config(cfg, out_path);
    std::cout << "report: " << out_path << "\n";
  }
  return 0;
}

int cmd_plot(const std::string& history_path, const std::string& loss_out,
             const std::string& data_path, const std::string& tracks_path,
             const std::string& overlay_dir, int every) {
  bool did = false;
  if (!history_path.empty()) {
    if (loss_out.empty()) fail("--history needs --out for the curve file");
    write_loss_svg(history_path, loss_out);
    std::cout << "wrote " << loss_out << "\n";
    did = true;
  }
  if (!overlay_dir.empty()) {
    if (data_path.empty()) fail("--overlay-dir needs --data");
    std::vector<FrameRecord> frames = read_sequence(data_path);
    std::vector<TrackRow> tracks;
    if (!tracks_path.empty()) tracks = read_tracks(tracks_path);
    write_overlay_svgs(frames, tracks, overlay_dir, every);
    std::cout << "wrote overlays to " << overlay_dir << "\n";
    did = true;
  }
  if (!did) fail("nothing to plot: pass --history/--out and/or --overlay-dir/--data");
  return 0;
}

// ---- gradcheck ------------------------------------------------------------------

struct OpCheck {
  std::string name;
  FiniteDiffReport report;
};

Tensor random_tensor(Rng& rng, int r, int c, double lo = -1.0, double hi = 1.0) {
  Tensor t = Tensor::zeros(r, c);
  for (double& v : t.data()) v = rng.uniform(lo, hi);
  return t;
}

// Keeps relu inputs away from the kink so the finite difference is two-sided.
Tensor random_tensor_off_zero(Rng& rng, int r, int c) {
  Tensor t = Tensor::zeros(r, c);
  for (double& v : t.data()) {
    double m = rng.uniform(0.05, 1.0);
    v = rng.bernoulli(0.5) ? m : -m;
  }
  return t;
}

int cmd_gradcheck(double tolerance, std::uint64_t seed, int instances) {
  using Build = std::function<Tape::Id(Tape&, const std::vector<Tape::Id>&)>;
  struct Case {
    std::string name;
    Build build;
    std::function<std::vector<Tensor>(Rng&)> inputs;
  };

  std::vector<Case> cases = {
      {"add", [](Tape& t, const std::vector<Tape::Id>& in) { return t.add(in[0], in[1]); },
       [](Rng& r) { return std::vector<Tensor>{random_tensor(r, 3, 4), random_tensor(r, 3, 4)}; }},
      {"subtract",
       [](Tape& t, const std::vector<Tape::Id>& in) { return t.subtract(in[0], in[1]); },
       [](Rng& r) { return std::vector<Tensor>{random_tensor(r, 3, 4), random_tensor(r, 3, 4)}; }},
      {"hadamard",
       [](Tape& t, const std::vector<Tape::Id>& in) { return t.hadamard(in[0], in[1]); },
       [](Rng& r) { return std::vector<Tensor>{random_tensor(r, 3, 4), random_tensor(r, 3, 4)}; }},
      {"scale", [](Tape& t, const std::vector<Tape::Id>& in) { return t.scale(in[0], -1.7); },
       [](Rng& r) { return std::vector<Tensor>{random_tensor(r, 3, 4)}; }},
      {"relu", [](Tape& t, const std::vector<Tape::Id>& in) { return t.relu(in[0]); },
       [](Rng& r) { return std::vector<Tensor>{random_tensor_off_zero(r, 3, 4)}; }},
      {"sigmoid", [](Tape& t, const std::vector<Tape::Id>& in) { return t.sigmoid(in[0]); },
       [](Rng& r) { return std::vector<Tensor>{random_tensor(r, 3, 4, -4, 4)}; }},
      {"tanh", [](Tape& t, const std::vector<Tape::Id>& in) { return t.tanh(in[0]); },
       [](Rng& r) { return std::vector<Tensor>{random_tensor(r, 3, 4, -3, 3)}; }},
      {"softplus", [](Tape& t, const std::vector<Tape::Id>& in) { return t.softplus(in[0]); },
       [](Rng& r) { return std::vector<Tensor>{random_tensor(r, 3, 4, -5, 5)}; }},
      {"transpose", [](Tape& t, const std::vector<Tape::Id>& in) { return t.transpose(in[0]); },
       [](Rng& r) { return std::vector<Tensor>{random_tensor(r, 3, 4)}; }},
      {"concat_rows",
       [](Tape& t, const std::vector<Tape::Id>& in) { return t.concat(in[0], in[1], 0); },
       [](Rng& r) { return std::vector<Tensor>{random_tensor(r, 2, 4), random_tensor(r, 3, 4)}; }},
      {"concat_cols",
       [](Tape& t, const std::vector<Tape::Id>& in) { return t.concat(in[0], in[1], 1); },
       [](Rng& r) { return std::vector<Tensor>{random_tensor(r, 3, 2), random_tensor(r, 3, 4)}; }},
      {"slice_cols",
       [](Tape& t, const std::vector<Tape::Id>& in) { return t.slice_cols(in[0], 1, 4); },
       [](Rng& r) { return std::vector<Tensor>{random_tensor(r, 3, 5)}; }},
      {"index_rows",
       [](Tape& t, const std::vector<Tape::Id>& in) {
         return t.index_rows(in[0], {2, 0, 2, 1});
       },
       [](Rng& r) { return std::vector<Tensor>{random_tensor(r, 3, 4)}; }},
      {"reshape",
       [](Tape& t, const std::vector<Tape::Id>& in) { return t.reshape(in[0], 2, 6); },
       [](Rng& r) { return std::vector<Tensor>{random_tensor(r, 3, 4)}; }},
      {"matmul", [](Tape& t, const std::vector<Tape::Id>& in) { return t.matmul(in[0], in[1]); },
       [](Rng& r) { return std::vector<Tensor>{random_tensor(r, 3, 4), random_tensor(r, 4, 2)}; }},
      {"add_row_broadcast",
       [](Tape& t, const std::vector<Tape::Id>& in) { return t.add_row_broadcast(in[0], in[1]); },
       [](Rng& r) { return std::vector<Tensor>{random_tensor(r, 3, 4), random_tensor(r, 1, 4)}; }},
      {"aggregate",
       [](Tape& t, const std::vector<Tape::Id>& in) { return t.aggregate(in[0], in[1]); },
       [](Rng& r) { return std::vector<Tensor>{random_tensor(r, 3, 4), random_tensor(r, 4, 2)}; }},
      {"row_softmax",
       [](Tape& t, const std::vector<Tape::Id>& in) { return t.row_softmax(in[0]); },
       [](Rng& r) { return std::vector<Tensor>{random_tensor(r, 3, 4, -3, 3)}; }},
      {"logsumexp_rows",
       [](Tape& t, const std::vector<Tape::Id>& in) { return t.logsumexp_rows(in[0]); },
       [](Rng& r) { return std::vector<Tensor>{random_tensor(r, 3, 4, -3, 3)}; }},
      {"row_sum", [](Tape& t, const std::vector<Tape::Id>& in) { return t.row_sum(in[0]); },
       [](Rng& r) { return std::vector<Tensor>{random_tensor(r, 3, 4)}; }},
      {"sum_all", [](Tape& t, const std::vector<Tape::Id>& in) { return t.sum_all(in[0]); },
       [](Rng& r) { return std::vector<Tensor>{random_tensor(r, 3, 4)}; }},
      {"linear",
       [](Tape& t, const std::vector<Tape::Id>& in) { return t.linear(in[0], in[1], in[2]); },
       [](Rng& r) {
         return std::vector<Tensor>{random_tensor(r, 3, 4), random_tensor(r, 4, 2),
                                    random_tensor(r, 1, 2)};
       }},
  };

  Rng rng(seed);
  std::vector<OpCheck> results;
  bool all_pass = true;
  for (const Case& c : cases) {
    FiniteDiffReport worst;
    for (int k = 0; k < instances; ++k) {
      FiniteDiffReport rep = finite_diff_check(c.build, c.inputs(rng), tolerance);
      if (rep.max_rel_error > worst.max_rel_error || k == 0) {
        bool pass = worst.pass && rep.pass;
        worst = rep;
        worst.pass = pass;
      } else if (!rep.pass) {
        worst.pass = false;
      }
    }
    results.push_back({c.name, worst});
    all_pass = all_pass && worst.pass;
  }

  // Whole pipeline: assembled loss through the relation stage and both
  // affinity streams, sampled parameter coordinates.
  {
    ScenarioConfig sc;
    sc.length = 8;
    sc.seed = seed;
    ModelConfig mc;
    mc.descriptor_dim = sc.descriptor_dim;
    std::vector<FrameRecord> frames = generate_sequence(sc);
    TrainingSet set = to_training_problems(frames, mc.tracklet_len);
    if (set.instances.empty()) fail("gradcheck: seeded scenario produced no instances");
    AssociationModel model(mc, seed);
    ModelGradCheckReport rep = check_model_gradients(model, set.instances.front(), LossConfig{},
                                                     64, tolerance, seed + 1);
    FiniteDiffReport as_fd;
    as_fd.max_rel_error = rep.max_rel_error;
    as_fd.coords_checked = rep.coords_checked;
    as_fd.failures = rep.failures;
    as_fd.pass = rep.pass;
    results.push_back({"full_pipeline", as_fd});
    all_pass = all_pass && rep.pass;
  }

  std::cout << "op                 max_rel_error  coords  result\n";
  for (const OpCheck& r : results) {
    std::cout << r.name << std::string(r.name.size() < 19 ? 19 - r.name.size() : 1, ' ')
              << format_double(r.report.max_rel_error)
              << std::string(r.report.max_rel_error < 1 ? 7 : 1, ' ') << r.report.coords_checked
              << "     " << (r.report.pass ? "pass" : "FAIL") << "\n";
  }
  std::cout << (all_pass ? "all checks passed" : "FAILURES present") << " (tolerance "
            << format_double(tolerance) << ")\n";
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"synthetic multi-object tracking workbench"};
  app.require_subcommand(1);

  std::string config_path, data_path, out_path, checkpoint_path, history_path;
  std::string mode, solver, method = "hungarian", tracks_path, json_path, overlay_dir, loss_out;
  std::int64_t seed_override = -1;
  double theta = 0.5, tolerance = 1e-4, threshold = 0.5;
  std::uint64_t gc_seed = 1234;
  int gc_instances = 20, iterations = -1, every = 1;

  CLI::App* generate = app.add_subcommand("generate", "write a synthetic sequence file");
  generate->add_option("--config", config_path, "JSON config file");
  generate->add_option("--out", out_path, "output sequence file")->required();
  generate->add_option("--seed", seed_override, "override scenario seed");

  CLI::App* train = app.add_subcommand("train", "train a model on a sequence file");
  train->add_option("--config", config_path, "JSON config file");
  train->add_option("--data", data_path, "input sequence file")->required();
  train->add_option("--checkpoint", checkpoint_path, "output checkpoint")->required();
  train->add_option("--history", history_path, "output loss-history CSV");
  train->add_option("--mode", mode, "full | no-assembly | no-gnn");
  train->add_option("--seed", seed_override, "override model seed");

  CLI::App* solve = app.add_subcommand("solve", "run an assignment solver on a problem file");
  solve->add_option("--input", data_path, "problem JSON with a 'weights' matrix")->required();
  solve->add_option("--method", method,
                    "hungarian | brute-force | greedy | birth-death | interpret");
  solve->add_option("--theta", theta, "birth-death threshold");
  solve->add_option("--out", out_path, "write result JSON here instead of stdout");

  CLI::App* gradcheck = app.add_subcommand("gradcheck", "finite-difference check of every op");
  gradcheck->add_option("--tolerance", tolerance, "relative-error tolerance");
  gradcheck->add_option("--seed", gc_seed, "input sampling seed");
  gradcheck->add_option("--instances", gc_instances, "random instances per op");

  CLI::App* track = app.add_subcommand("track", "run the tracker over a sequence file");
  track->add_option("--config", config_path, "JSON config file");
  track->add_option("--data", data_path, "input sequence file")->required();
  track->add_option("--checkpoint", checkpoint_path, "model checkpoint (learned solvers)");
  track->add_option("--out", out_path, "output track CSV")->required();
  track->add_option("--solver", solver, "learned | affinity-direct | hungarian-baseline");

  CLI::App* eval = app.add_subcommand("eval", "score a track file against ground truth");
  eval->add_option("--data", data_path, "sequence file with ground truth")->required();
  eval->add_option("--tracks", tracks_path, "track CSV to score")->required();
  eval->add_option("--threshold", threshold, "overlap gate");
  eval->add_option("--json", json_path, "also write a JSON report");

  CLI::App* ablate = app.add_subcommand("ablate", "train and score full / no-gnn / no-assembly");
  ablate->add_option("--config", config_path, "JSON config file");
  ablate->add_option("--seed", seed_override, "base seed for data and model");
  ablate->add_option("--iterations", iterations, "override training iterations");
  ablate->add_option("--out", out_path, "write comparison JSON here");

  CLI::App* plot = app.add_subcommand("plot", "render loss curves and frame overlays as SVG");
  plot->add_option("--history", history_path, "loss-history CSV");
  plot->add_option("--out", loss_out, "loss-curve SVG path");
  plot->add_option("--data", data_path, "sequence file for overlays");
  plot->add_option("--tracks", tracks_path, "track CSV drawn over the ground truth");
  plot->add_option("--overlay-dir", overlay_dir, "directory for per-frame SVGs");
  plot->add_option("--every", every, "render every Nth frame");

  CLI11_PARSE(app, argc, argv);

  try {
    if (generate->parsed()) return cmd_generate(config_path, out_path, seed_override);
    if (train->parsed())
      return cmd_train(config_path, data_path, checkpoint_path, history_path, mode,
                       seed_override);
    if (solve->parsed()) return cmd_solve(data_path, method, theta, out_path);
    if (gradcheck->parsed()) return cmd_gradcheck(tolerance, gc_seed, gc_instances);
    if (track->parsed())
      return cmd_track(config_path, data_path, checkpoint_path, out_path, solver);
    if (eval->parsed()) return cmd_eval(data_path, tracks_path, threshold, json_path);
    if (ablate->parsed()) return cmd_ablate(config_path, seed_override, iterations, out_path);
    if (plot->parsed())
      return cmd_plot(history_path, loss_out, data_path, tracks_path, overlay_dir, every);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::cerr << "error: no subcommand\n";
  return 1;
}
