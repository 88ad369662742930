#include "gamot/affinity.hpp"

#include <cmath>
#include <stdexcept>

namespace gamot {

namespace {

Tensor xavier_uniform(int in, int out, Rng& rng) {
  double bound = std::sqrt(6.0 / (in + out));
  std::vector<double> data(static_cast<std::size_t>(in) * out);
  for (double& v : data) v = rng.uniform(-bound, bound);
  return Tensor::matrix(in, out, std::move(data));
}

}  // namespace

LinearLayer::LinearLayer(const std::string& name, int in, int out, Rng& rng)
    : weight(name + ".weight", xavier_uniform(in, out, rng)),
      bias(name + ".bias", Tensor::zeros(1, out)) {}

Tape::Id LinearLayer::apply(Tape& tape, Tape::Id x) {
  return tape.linear(x, tape.param(weight), tape.param(bias));
}

AffinityNet::AffinityNet(const ModelConfig& cfg, Rng& rng)
    : cfg_(cfg),
      lstm_w_in("affinity.motion.recurrent.w_in", xavier_uniform(4, 4 * cfg.motion_dim, rng)),
      lstm_w_rec("affinity.motion.recurrent.w_rec",
                 xavier_uniform(cfg.motion_dim, 4 * cfg.motion_dim, rng)),
      lstm_bias("affinity.motion.recurrent.bias", Tensor::zeros(1, 4 * cfg.motion_dim)),
      box_fc1("affinity.motion.box.fc1", 4, cfg.motion_dim, rng),
      box_fc2("affinity.motion.box.fc2", cfg.motion_dim, cfg.motion_dim, rng),
      app_fc1("affinity.appearance.fc1", cfg.descriptor_dim, cfg.appearance_dim, rng),
      app_fc2("affinity.appearance.fc2", cfg.appearance_dim, cfg.appearance_dim, rng),
      head_app1("affinity.head.appearance.fc1", 2 * cfg.appearance_dim, cfg.head_hidden, rng),
      head_app2("affinity.head.appearance.fc2", cfg.head_hidden, 1, rng),
      head_mot1("affinity.head.motion.fc1", 2 * cfg.motion_dim, cfg.head_hidden, rng),
      head_mot2("affinity.head.motion.fc2", cfg.head_hidden, 1, rng),
      head_fuse1("affinity.head.fused.fc1", 2, cfg.head_hidden, rng),
      head_fuse2("affinity.head.fused.fc2", cfg.head_hidden, 1, rng) {
  // Forget-gate bias starts positive so early training does not wipe the
  // recurrent state.
  for (int j = 0; j < cfg.motion_dim; ++j) lstm_bias.value.at(0, cfg.motion_dim + j) = 1.0;
}

std::vector<Parameter*> AffinityNet::parameters() {
  std::vector<Parameter*> out = {&lstm_w_in, &lstm_w_rec, &lstm_bias};
  for (LinearLayer* l : {&box_fc1, &box_fc2, &app_fc1, &app_fc2, &head_app1, &head_app2,
                         &head_mot1, &head_mot2, &head_fuse1, &head_fuse2}) {
    out.push_back(&l->weight);
    out.push_back(&l->bias);
  }
  return out;
}

std::vector<const Parameter*> AffinityNet::parameters() const {
  auto mut = const_cast<AffinityNet*>(this)->parameters();
  return std::vector<const Parameter*>(mut.begin(), mut.end());
}

Tensor AffinityNet::normalized_boxes(std::span<const BoundingBox> boxes) const {
  Tensor t = Tensor::zeros(static_cast<int>(boxes.size()), 4);
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const BoundingBox& b = boxes[i];
    if (!b.valid()) throw std::invalid_argument("AffinityNet: invalid box");
    int r = static_cast<int>(i);
    t.at(r, 0) = b.x / cfg_.arena_w;
    t.at(r, 1) = b.y / cfg_.arena_h;
    t.at(r, 2) = b.w / cfg_.arena_w;
    t.at(r, 3) = b.h / cfg_.arena_h;
  }
  return t;
}

// One recurrent pass over the stacked tracklets: step t feeds box t of every
// trajectory as a row batch. Returns the final hidden state, I x H.
Tape::Id AffinityNet::motion_states(Tape& tape, std::span<const TrackSnapshot> trajectories) {
  int count = static_cast<int>(trajectories.size());
  int steps = cfg_.tracklet_len;
  int H = cfg_.motion_dim;
  for (const TrackSnapshot& t : trajectories)
    if (t.tracklet.length() != steps)
      throw std::invalid_argument("AffinityNet: tracklet length mismatch");

  Tape::Id w_in = tape.param(lstm_w_in);
  Tape::Id w_rec = tape.param(lstm_w_rec);
  Tape::Id bias = tape.param(lstm_bias);
  Tape::Id h = tape.constant(Tensor::zeros(count, H));
  Tape::Id c = tape.constant(Tensor::zeros(count, H));
  std::vector<BoundingBox> step_boxes(static_cast<std::size_t>(count));
  for (int s = 0; s < steps; ++s) {
    for (int i = 0; i < count; ++i) step_boxes[i] = trajectories[i].tracklet.boxes()[s];
    Tape::Id x = tape.constant(normalized_boxes(step_boxes));
    Tape::Id gates = tape.add_row_broadcast(
        tape.add(tape.matmul(x, w_in), tape.matmul(h, w_rec)), bias);
    Tape::Id gi = tape.sigmoid(tape.slice_cols(gates, 0, H));
    Tape::Id gf = tape.sigmoid(tape.slice_cols(gates, H, 2 * H));
    Tape::Id gc = tape.tanh(tape.slice_cols(gates, 2 * H, 3 * H));
    Tape::Id go = tape.sigmoid(tape.slice_cols(gates, 3 * H, 4 * H));
    c = tape.add(tape.hadamard(gf, c), tape.hadamard(gi, gc));
    h = tape.hadamard(go, tape.tanh(c));
  }
  return h;
}

Tape::Id AffinityNet::box_encoder(Tape& tape, Tape::Id boxes) {
  return box_fc2.apply(tape, tape.relu(box_fc1.apply(tape, boxes)));
}

Tape::Id AffinityNet::appearance_encoder(Tape& tape, Tape::Id descriptors) {
  return app_fc2.apply(tape, tape.relu(app_fc1.apply(tape, descriptors)));
}

Tape::Id AffinityNet::head(Tape& tape, LinearLayer& h1, LinearLayer& h2, Tape::Id pair_rows) {
  return h2.apply(tape, tape.relu(h1.apply(tape, pair_rows)));
}

AffinityNet::Forward AffinityNet::forward(Tape& tape, std::span<const TrackSnapshot> trajectories,
                                          std::span<const Detection> detections) {
  int I = static_cast<int>(trajectories.size());
  int J = static_cast<int>(detections.size());
  if (I < 1 || J < 1) throw std::invalid_argument("AffinityNet::forward: empty side");
  for (const TrackSnapshot& t : trajectories)
    if (static_cast<int>(t.descriptor.size()) != cfg_.descriptor_dim)
      throw std::invalid_argument("AffinityNet::forward: trajectory descriptor width");
  for (const Detection& d : detections)
    if (static_cast<int>(d.descriptor.size()) != cfg_.descriptor_dim)
      throw std::invalid_argument("AffinityNet::forward: detection descriptor width");

  // Motion features.
  Tape::Id traj_motion = motion_states(tape, trajectories);  // I x H
  std::vector<BoundingBox> det_boxes(detections.size());
  for (std::size_t j = 0; j < detections.size(); ++j) det_boxes[j] = detections[j].box;
  Tape::Id det_motion = box_encoder(tape, tape.constant(normalized_boxes(det_boxes)));  // J x H

  // Appearance features (one encoder, both sides).
  Tensor traj_desc = Tensor::zeros(I, cfg_.descriptor_dim);
  for (int i = 0; i < I; ++i)
    for (int d = 0; d < cfg_.descriptor_dim; ++d) traj_desc.at(i, d) = trajectories[i].descriptor[d];
  Tensor det_desc = Tensor::zeros(J, cfg_.descriptor_dim);
  for (int j = 0; j < J; ++j)
    for (int d = 0; d < cfg_.descriptor_dim; ++d) det_desc.at(j, d) = detections[j].descriptor[d];
  Tape::Id traj_app = appearance_encoder(tape, tape.constant(std::move(traj_desc)));  // I x A
  Tape::Id det_app = appearance_encoder(tape, tape.constant(std::move(det_desc)));    // J x A

  // All (i, j) pairs as rows, trajectory-major.
  std::vector<int> traj_index(static_cast<std::size_t>(I) * J);
  std::vector<int> det_index(static_cast<std::size_t>(I) * J);
  for (int i = 0; i < I; ++i)
    for (int j = 0; j < J; ++j) {
      traj_index[static_cast<std::size_t>(i) * J + j] = i;
      det_index[static_cast<std::size_t>(i) * J + j] = j;
    }

  Tape::Id app_pairs = tape.concat(tape.index_rows(traj_app, traj_index),
                                   tape.index_rows(det_app, det_index), 1);
  Tape::Id appearance = tape.reshape(head(tape, head_app1, head_app2, app_pairs), I, J);

  Tape::Id mot_pairs = tape.concat(tape.index_rows(traj_motion, traj_index),
                                   tape.index_rows(det_motion, det_index), 1);
  Tape::Id motion = tape.reshape(head(tape, head_mot1, head_mot2, mot_pairs), I, J);

  Tape::Id score_pairs = tape.concat(tape.reshape(appearance, I * J, 1),
                                     tape.reshape(motion, I * J, 1), 1);
  Tape::Id fused = tape.reshape(head(tape, head_fuse1, head_fuse2, score_pairs), I, J);

  Forward out;
  out.appearance = appearance;
  out.motion = motion;
  out.fused = fused;
  out.traj_features = tape.concat(traj_app, traj_motion, 1);
  out.det_features = tape.concat(det_app, det_motion, 1);
  return out;
}

Tensor AffinityNet::encode_motion(const Tracklet& tracklet) {
  Tape tape;
  TrackSnapshot snap{tracklet, std::vector<double>(static_cast<std::size_t>(cfg_.descriptor_dim), 0.0)};
  return tape.value(motion_states(tape, std::span<const TrackSnapshot>(&snap, 1)));
}

Tensor AffinityNet::encode_detection_box(const BoundingBox& box) {
  Tape tape;
  return tape.value(box_encoder(tape, tape.constant(normalized_boxes({&box, 1}))));
}

Tensor AffinityNet::encode_appearance(std::span<const double> descriptor) {
  if (static_cast<int>(descriptor.size()) != cfg_.descriptor_dim)
    throw std::invalid_argument("encode_appearance: descriptor width");
  Tape tape;
  Tensor d = Tensor::zeros(1, cfg_.descriptor_dim);
  for (std::size_t i = 0; i < descriptor.size(); ++i) d.at(0, static_cast<int>(i)) = descriptor[i];
  return tape.value(appearance_encoder(tape, tape.constant(std::move(d))));
}

double AffinityNet::pairwise_affinity(const Tensor& fi, const Tensor& fj, StreamHead which) {
  int width = which == StreamHead::Appearance ? cfg_.appearance_dim : cfg_.motion_dim;
  if (fi.rows() != 1 || fj.rows() != 1 || fi.cols() != width || fj.cols() != width)
    throw std::invalid_argument("pairwise_affinity: feature shape");
  Tape tape;
  Tape::Id pair = tape.concat(tape.constant(fi), tape.constant(fj), 1);
  Tape::Id score = which == StreamHead::Appearance ? head(tape, head_app1, head_app2, pair)
                                                   : head(tape, head_mot1, head_mot2, pair);
  return tape.value(score).item();
}

double AffinityNet::fuse(double appearance_score, double motion_score) {
  Tape tape;
  Tape::Id pair = tape.constant(Tensor::matrix(1, 2, {appearance_score, motion_score}));
  return tape.value(head(tape, head_fuse1, head_fuse2, pair)).item();
}

std::optional<AssociationProblem> AffinityNet::build_problem(
    std::span<const TrackSnapshot> trajectories, std::span<const Detection> detections) {
  if (trajectories.empty() || detections.empty()) return std::nullopt;
  Tape tape;
  Forward f = forward(tape, trajectories, detections);
  AssociationProblem problem;
  problem.trajectory_count = static_cast<int>(trajectories.size());
  problem.detection_count = static_cast<int>(detections.size());
  problem.appearance = tape.value(f.appearance);
  problem.motion = tape.value(f.motion);
  problem.fused = tape.value(f.fused);
  problem.traj_features = tape.value(f.traj_features);
  problem.det_features = tape.value(f.det_features);
  problem.validate();
  return problem;
}

}  // namespace gamot
