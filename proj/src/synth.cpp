#include "egosum/synth.hpp"

#include "egosum/rng.hpp"
#include "json_util.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace egosum {

using detail::json;

namespace {

// Stream ids keep every random quantity independent of generation order.
constexpr std::uint64_t kFrameStream = 1'000;
constexpr std::uint64_t kObjectStream = 5'000'000;
constexpr std::uint64_t kSignatureStream = 6'000'000;

constexpr int kBackgroundSide[2] = {200, 150};
constexpr int kClutterSignatureBase = 150;
constexpr int kClutterSignatureCount = 150;
constexpr double kObjectFlowMass = 100.0;

Eigen::Matrix<double, kSignatureBins, 1> signature_weights(std::uint64_t seed, int signature) {
  Rng rng(seed, kSignatureStream + static_cast<std::uint64_t>(signature));
  Eigen::Matrix<double, kSignatureBins, 1> w;
  for (int i = 0; i < kSignatureBins; ++i) w[i] = rng.uniform(0.5, 1.5);
  return w / w.sum();
}

Histogram signature_hist(std::uint64_t seed, int signature, double mass_total, double noise, Rng& rng) {
  const auto w = signature_weights(seed, signature);
  Histogram h(kColorBins);
  for (int i = 0; i < kSignatureBins; ++i) {
    const double jitter = noise > 0 ? 1.0 + rng.uniform(-noise, noise) : 1.0;
    const double count = std::floor(mass_total * w[i] * jitter / (noise > 0 ? 1.0 + noise : 1.0));
    if (count > 0) h.insertBack(signature * kSignatureStride + i) = count;
  }
  return h;
}

Histogram flow_hist(int first_bin) {
  Histogram h(kFlowBins);
  for (int i = 0; i < 4; ++i) h.insertBack(first_bin + i) = kObjectFlowMass / 4;
  return h;
}

double distance(const Point& a, const Point& b) { return (a - b).norm(); }

struct Instance {
  int object = 0;
  Box box;
  bool prominent = false;
};

}  // namespace

int ScenarioSpec::n_frames() const {
  int n = 0;
  for (const auto& b : blocks) n += b.length;
  return n;
}

void ScenarioSpec::check() const {
  if (blocks.empty()) throw std::invalid_argument("scenario: no event blocks");
  for (const auto& b : blocks) {
    if (b.length <= 0) throw std::invalid_argument("scenario: block length must be > 0");
    if (b.signature < 0 || b.signature >= 50)
      throw std::invalid_argument("scenario: block signatures must be in [0, 50)");
  }
  if (frame_width <= 0 || frame_height <= 0 || !(fps > 0))
    throw std::invalid_argument("scenario: bad frame geometry or fps");
  if (hist_noise < 0 || hist_noise > 0.1) throw std::invalid_argument("scenario: hist_noise must be in [0, 0.1]");
  if (clutter_per_frame < 0) throw std::invalid_argument("scenario: clutter_per_frame must be >= 0");
  if (frame_width < 300 || frame_height < 200)
    throw std::invalid_argument("scenario: frames smaller than 300x200 cannot hold the planted regions");
  const int F = n_frames();
  std::set<std::string> labels;
  for (const auto& o : objects) {
    if (o.label.empty() || !labels.insert(o.label).second)
      throw std::invalid_argument("scenario: object labels must be unique and non-empty");
    if (o.signature < 50 || o.signature >= kClutterSignatureBase)
      throw std::invalid_argument("scenario: object signatures must be in [50, 150)");
    // Below 110 px two disjoint signatures could fall within theta_r.
    if (o.side < 110 || o.side > std::min(frame_width, frame_height))
      throw std::invalid_argument("scenario: object '" + o.label + "' does not fit the frame");
    for (int f : o.frames)
      if (f < 0 || f >= F) throw std::invalid_argument("scenario: object frame out of range");
    if (o.prominent_frame >= 0 &&
        std::find(o.frames.begin(), o.frames.end(), o.prominent_frame) == o.frames.end())
      throw std::invalid_argument("scenario: prominent frame not in the object's pattern");
    if (o.points > 0 && descriptor_dim <= 0)
      throw std::invalid_argument("scenario: interest points need descriptor_dim > 0");
  }
  cue_config.check();
}

SynthResult generate(const ScenarioSpec& spec) {
  spec.check();
  const int F = spec.n_frames();
  const double W = spec.frame_width, H = spec.frame_height;
  const Point center(W / 2, H / 2);

  SynthResult out;
  VideoBundle& b = out.bundle;
  SynthOracle& oracle = out.oracle;
  b.video_id = spec.video_id.empty() ? "synth-" + std::to_string(spec.seed) : spec.video_id;
  b.source_fps = spec.fps;
  b.frame_width = spec.frame_width;
  b.frame_height = spec.frame_height;
  b.descriptor_dim = spec.descriptor_dim;

  std::vector<int> block_of(static_cast<std::size_t>(F));
  for (int f = 0, k = 0; k < static_cast<int>(spec.blocks.size()); ++k) {
    oracle.event_starts.push_back(f);
    for (int i = 0; i < spec.blocks[static_cast<std::size_t>(k)].length; ++i)
      block_of[static_cast<std::size_t>(f++)] = k;
  }

  // Instances per frame and per-object base descriptors.
  std::vector<std::vector<Instance>> instances(static_cast<std::size_t>(F));
  std::vector<Eigen::MatrixXd> base_desc;
  for (std::size_t o = 0; o < spec.objects.size(); ++o) {
    const PlantedObject& obj = spec.objects[o];
    Rng rng(spec.seed, kObjectStream + o);
    Eigen::MatrixXd d(spec.descriptor_dim, obj.points);
    for (Eigen::Index c = 0; c < d.cols(); ++c)
      for (Eigen::Index r = 0; r < d.rows(); ++r) d(r, c) = rng.normal();
    base_desc.push_back(std::move(d));
    oracle.tiers[obj.label] = obj.tier;

    std::vector<int> frames = obj.frames;
    std::sort(frames.begin(), frames.end());
    frames.erase(std::unique(frames.begin(), frames.end()), frames.end());
    const int prominent = obj.prominent_frame >= 0 ? obj.prominent_frame
                                                   : (frames.empty() ? -1 : frames.front());
    for (int f : frames) {
      Point c = center;
      if (f != prominent) {
        const double radius = rng.uniform(spec.offset_radius / 3, spec.offset_radius);
        const double angle = rng.uniform(0, 2 * std::numbers::pi);
        c += radius * Point(std::cos(angle), std::sin(angle));
      }
      Box box{c.x() - obj.side / 2, c.y() - obj.side / 2, obj.side, obj.side};
      box.x = std::clamp(box.x, 0.0, W - obj.side);
      box.y = std::clamp(box.y, 0.0, H - obj.side);
      instances[static_cast<std::size_t>(f)].push_back({static_cast<int>(o), box, f == prominent});
    }
  }

  struct FrameExtras {
    std::vector<Point> hands;
  };
  std::vector<FrameExtras> extras(static_cast<std::size_t>(F));
  std::vector<std::vector<int>> signatures(static_cast<std::size_t>(F));  // per region
  std::vector<std::vector<int>> owners(static_cast<std::size_t>(F));      // object index or -1

  for (int f = 0; f < F; ++f) {
    Rng rng(spec.seed, kFrameStream + static_cast<std::uint64_t>(f));
    const int block = block_of[static_cast<std::size_t>(f)];
    const int bg_sig = spec.blocks[static_cast<std::size_t>(block)].signature;
    FrameRecord fr;
    fr.index = f;
    std::vector<Eigen::Vector2d> xy;
    std::vector<Eigen::VectorXd> desc;
    double object_area = 0.0;
    std::vector<Histogram> object_hists;

    int next_id = 0;
    for (const Instance& inst : instances[static_cast<std::size_t>(f)]) {
      const PlantedObject& obj = spec.objects[static_cast<std::size_t>(inst.object)];
      RegionRecord r;
      r.region_id = next_id++;
      r.bbox = inst.box;
      r.area = inst.box.area();
      r.centroid = inst.box.center();
      r.color_hist = signature_hist(spec.seed, obj.signature, r.area, spec.hist_noise, rng);
      r.objectness = std::clamp(obj.objectness + rng.uniform(-0.05, 0.05), 0.0, 1.0);
      r.region_flow_hist = flow_hist(0);
      r.surround_flow_hist = flow_hist(kFlowBinsPerDirection);
      for (int p = 0; p < obj.points; ++p) {
        r.member_point_ids.push_back(static_cast<int>(xy.size()));
        xy.emplace_back(inst.box.x + rng.uniform() * (inst.box.w - 1),
                        inst.box.y + rng.uniform() * (inst.box.h - 1));
        Eigen::VectorXd d = base_desc[static_cast<std::size_t>(inst.object)].col(p);
        for (Eigen::Index k = 0; k < d.size(); ++k) d[k] += rng.normal(0.0, 0.02);
        desc.push_back(std::move(d));
      }
      if (obj.has_face)
        fr.face_boxes.push_back({inst.box.x + inst.box.w / 4, inst.box.y, inst.box.w / 2, inst.box.h / 2});
      if (obj.near_hand) {
        const Point h(std::clamp(r.centroid.x() + 0.3 * obj.side, 0.0, W - 1),
                      std::clamp(r.centroid.y() + 0.35 * obj.side, 0.0, H - 1));
        extras[static_cast<std::size_t>(f)].hands.push_back(h);
      }
      if (obj.tier >= 0.5) b.ground_truth.push_back({f, inst.box, obj.label});
      object_area += r.area;
      object_hists.push_back(r.color_hist);
      signatures[static_cast<std::size_t>(f)].push_back(obj.signature);
      owners[static_cast<std::size_t>(f)].push_back(inst.object);
      oracle.clusters[obj.label].push_back({f, r.region_id});
      if (inst.prominent) oracle.prominent[obj.label] = {f, r.region_id};
      fr.regions.push_back(std::move(r));
    }

    if (extras[static_cast<std::size_t>(f)].hands.empty() && rng.uniform() < 0.5)
      extras[static_cast<std::size_t>(f)].hands.emplace_back(rng.uniform(0, W - 1),
                                                             rng.uniform(H / 2, H - 1));

    if (spec.background_region) {
      RegionRecord r;
      r.region_id = next_id++;
      const int corner = block % 4;
      const double bw = kBackgroundSide[0], bh = kBackgroundSide[1];
      r.bbox = {corner % 2 ? W - bw : 0.0, corner / 2 ? H - bh : 0.0, bw, bh};
      r.area = r.bbox.area();
      r.centroid = r.bbox.center();
      r.color_hist = signature_hist(spec.seed, bg_sig, r.area, spec.hist_noise, rng);
      r.objectness = rng.uniform(0.05, 0.3);
      signatures[static_cast<std::size_t>(f)].push_back(bg_sig);
      owners[static_cast<std::size_t>(f)].push_back(-1);
      fr.regions.push_back(std::move(r));
    }
    for (int c = 0; c < spec.clutter_per_frame; ++c) {
      RegionRecord r;
      r.region_id = next_id++;
      const int sig = kClutterSignatureBase + rng.uniform_int(0, kClutterSignatureCount - 1);
      const double side = std::floor(rng.uniform(110, 150));
      r.bbox = {std::floor(rng.uniform(0, W - side)), std::floor(rng.uniform(0, H - side)), side, side};
      r.area = r.bbox.area();
      r.centroid = r.bbox.center();
      r.color_hist = signature_hist(spec.seed, sig, r.area, spec.hist_noise, rng);
      r.objectness = rng.uniform(0.1, 0.5);
      signatures[static_cast<std::size_t>(f)].push_back(sig);
      owners[static_cast<std::size_t>(f)].push_back(-1);
      fr.regions.push_back(std::move(r));
    }

    // Global histogram: background fills whatever the objects do not cover.
    Histogram global = signature_hist(spec.seed, bg_sig, std::max(0.0, W * H - object_area),
                                      spec.hist_noise, rng);
    for (const Histogram& h : object_hists) global += h;
    fr.global_color_hist = global;

    const auto& hands = extras[static_cast<std::size_t>(f)].hands;
    if (spec.skin_superpixels) {
      SkinSuperpixels sp;
      sp.label_map = "synth";
      for (const Point& h : hands) sp.superpixels.push_back({h, rng.uniform(0.3, 0.9)});
      for (int k = 0; k < 3; ++k)
        sp.superpixels.push_back({Point(rng.uniform(0, W - 1), rng.uniform(0, H - 1)),
                                  k == 0 ? 0.25 : rng.uniform(0.0, 0.25)});
      fr.skin_superpixels = std::move(sp);
    } else {
      fr.hand_centroids = hands;
    }

    fr.point_xy.resize(2, static_cast<Eigen::Index>(xy.size()));
    fr.descriptors.resize(spec.descriptor_dim, static_cast<Eigen::Index>(xy.size()));
    for (std::size_t i = 0; i < xy.size(); ++i) {
      fr.point_xy.col(static_cast<Eigen::Index>(i)) = xy[i];
      fr.descriptors.col(static_cast<Eigen::Index>(i)) = desc[i];
    }
    b.frames.push_back(std::move(fr));
  }

  // Planted cue values. Frequencies follow from the signature / object
  // recurrence pattern: same-signature regions are within theta_r of each
  // other and distinct signatures are disjoint with mass above 2 theta_r.
  for (int f = 0; f < F; ++f) {
    const FrameRecord& fr = b.frames[static_cast<std::size_t>(f)];
    const auto window = frequency_window(f, F, b.fps_effective(), spec.cue_config);
    const auto& hands = extras[static_cast<std::size_t>(f)].hands;
    for (std::size_t i = 0; i < fr.regions.size(); ++i) {
      const RegionRecord& r = fr.regions[i];
      const int sig = signatures[static_cast<std::size_t>(f)][i];
      const int owner = owners[static_cast<std::size_t>(f)][i];
      PlantedRegion pr;
      pr.key = {f, r.region_id};
      pr.signature = sig;
      if (owner >= 0) {
        pr.kind = "object";
        pr.label = spec.objects[static_cast<std::size_t>(owner)].label;
        pr.prominent = oracle.prominent.count(pr.label) && oracle.prominent[pr.label] == pr.key;
      } else {
        pr.kind = sig < 50 ? "background" : "clutter";
      }
      CueVector& x = pr.cues;
      double hand = b.frame_diagonal();
      if (!hands.empty()) {
        hand = std::numeric_limits<double>::infinity();
        for (const Point& h : hands) hand = std::min(hand, distance(h, r.centroid));
      }
      x[kHandDist] = hand;
      x[kGazeDist] = distance(r.centroid, center);
      int region_matches = 0, point_matches = 0;
      for (int g : window) {
        const auto& sigs = signatures[static_cast<std::size_t>(g)];
        const auto& own = owners[static_cast<std::size_t>(g)];
        if (std::find(sigs.begin(), sigs.end(), sig) != sigs.end()) ++region_matches;
        if (owner >= 0 && std::find(own.begin(), own.end(), owner) != own.end()) ++point_matches;
      }
      x[kFreqRegion] = region_matches;
      const bool has_points = owner >= 0 && spec.objects[static_cast<std::size_t>(owner)].points > 0;
      x[kFreqPoint] = has_points ? point_matches : 0.0;
      x[kObjectness] = r.objectness;
      x[kMotionDistinct] = owner >= 0 ? kObjectFlowMass : 0.0;
      double face = 0.0;
      for (const Box& q : fr.face_boxes) face = std::max(face, iou(r.bbox, q));
      x[kFaceOverlap] = face;
      x[kSize] = r.area;
      x[kCentroidX] = r.centroid.x();
      x[kCentroidY] = r.centroid.y();
      x[kBboxCx] = r.bbox.x + r.bbox.w / 2;
      x[kBboxCy] = r.bbox.y + r.bbox.h / 2;
      x[kBboxW] = r.bbox.w;
      x[kBboxH] = r.bbox.h;
      oracle.regions.push_back(std::move(pr));
    }
  }
  return out;
}

ScenarioSpec make_day_scenario(std::uint64_t seed, int n_events, int block_length, int objects_per_event) {
  if (n_events < 1 || objects_per_event < 0 || block_length < 4 * std::max(1, objects_per_event))
    throw std::invalid_argument("make_day_scenario: blocks too short for the requested objects");
  ScenarioSpec s;
  s.seed = seed;
  s.hist_noise = 0.03;
  s.offset_radius = 160.0;
  Rng rng(seed, 42);
  const int part = block_length / std::max(1, objects_per_event);
  for (int e = 0; e < n_events; ++e) {
    s.blocks.push_back({block_length, e % 50});
    for (int j = 0; j < objects_per_event; ++j) {
      PlantedObject o;
      o.label = "object-" + std::to_string(e) + "-" + std::to_string(j);
      o.signature = 50 + static_cast<int>(s.objects.size()) % 100;
      const int len = std::min(rng.uniform_int(6, 10), part - 2);
      const int first = e * block_length + j * part + rng.uniform_int(1, part - len - 1);
      for (int f = first; f < first + len; ++f) o.frames.push_back(f);
      o.prominent_frame = o.frames[static_cast<std::size_t>(rng.uniform_int(0, len - 1))];
      o.has_face = rng.uniform() < 0.3;
      o.near_hand = rng.uniform() < 0.5;
      o.side = std::floor(rng.uniform(130, 170));
      o.objectness = rng.uniform(0.65, 0.9);
      s.objects.push_back(std::move(o));
    }
  }
  return s;
}

ScenarioSpec make_block_scenario(std::uint64_t seed, const std::vector<int>& block_lengths) {
  ScenarioSpec s;
  s.seed = seed;
  s.clutter_per_frame = 2;
  for (std::size_t i = 0; i < block_lengths.size(); ++i)
    s.blocks.push_back({block_lengths[i], static_cast<int>(i % 50)});
  return s;
}

std::vector<CueVector> draw_cues(std::uint64_t seed, int n) {
  Rng rng(seed, 7);
  std::vector<CueVector> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    CueVector x;
    x[kHandDist] = rng.uniform(0, 800);
    x[kGazeDist] = rng.uniform(0, 400);
    x[kFreqRegion] = std::floor(rng.uniform(0, 600));
    x[kFreqPoint] = rng.uniform(0, 50);
    x[kObjectness] = rng.uniform();
    x[kMotionDistinct] = rng.uniform(0, 200);
    x[kFaceOverlap] = rng.uniform() < 0.7 ? 0.0 : rng.uniform();
    x[kSize] = rng.uniform(500, 60000);
    x[kCentroidX] = rng.uniform(0, 640);
    x[kCentroidY] = rng.uniform(0, 480);
    x[kBboxCx] = x[kCentroidX] + rng.normal(0, 5);
    x[kBboxCy] = x[kCentroidY] + rng.normal(0, 5);
    x[kBboxW] = rng.uniform(20, 300);
    x[kBboxH] = rng.uniform(20, 300);
    out.push_back(x);
  }
  return out;
}

namespace {

// Population mean and std of a cue sample (std 1 for a constant cue).
std::pair<CueVector, CueVector> sample_stats(const std::vector<CueVector>& xs) {
  CueVector mean = CueVector::Zero(), sd = CueVector::Zero();
  for (const auto& x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  for (const auto& x : xs) sd += (x - mean).cwiseAbs2();
  sd = (sd / static_cast<double>(xs.size())).cwiseSqrt();
  for (int i = 0; i < kCueCount; ++i)
    if (sd[i] == 0) sd[i] = 1;
  return {mean, sd};
}

}  // namespace

std::vector<TrainingSample> plant_regression_set(const FeatureVector& beta, double beta0, int n,
                                                 std::uint64_t seed, double noise_sigma) {
  const auto xs = draw_cues(seed, n);
  const auto [mean, sd] = sample_stats(xs);
  Rng noise(seed, 8);
  std::vector<TrainingSample> out;
  out.reserve(xs.size());
  for (const auto& x : xs) {
    double y = beta0 + beta.dot(expand(x, mean, sd));
    if (noise_sigma > 0) y += noise.normal(0.0, noise_sigma);
    out.push_back({x, y});
  }
  return out;
}

std::vector<TrainingSample> plant_interaction_benchmark(std::uint64_t seed, int n) {
  const auto xs = draw_cues(seed, n);
  const auto [mean, sd] = sample_stats(xs);
  std::vector<TrainingSample> out;
  out.reserve(xs.size());
  for (const auto& x : xs) {
    const CueVector z = (x - mean).cwiseQuotient(sd);
    // Important when large, and either object-like *and* moving, or close to
    // the hand *and* looked at.
    const double score = 0.25 + 0.12 * z[kSize] + 0.18 * z[kObjectness] * z[kMotionDistinct] +
                         0.18 * z[kHandDist] * z[kGazeDist] - 0.05 * z[kFreqRegion];
    out.push_back({x, std::clamp(score, 0.0, 1.0)});
  }
  return out;
}

namespace {

json object_to_json(const PlantedObject& o) {
  return {{"label", o.label},         {"tier", o.tier},         {"signature", o.signature},
          {"frames", o.frames},       {"prominent_frame", o.prominent_frame},
          {"has_face", o.has_face},   {"near_hand", o.near_hand}, {"side", o.side},
          {"points", o.points},       {"objectness", o.objectness}};
}

}  // namespace

std::string scenario_to_json(const ScenarioSpec& s) {
  json j;
  j["seed"] = s.seed;
  j["video_id"] = s.video_id;
  j["fps"] = s.fps;
  j["frame_width"] = s.frame_width;
  j["frame_height"] = s.frame_height;
  j["descriptor_dim"] = s.descriptor_dim;
  j["blocks"] = json::array();
  for (const auto& b : s.blocks) j["blocks"].push_back({{"length", b.length}, {"signature", b.signature}});
  j["objects"] = json::array();
  for (const auto& o : s.objects) j["objects"].push_back(object_to_json(o));
  j["clutter_per_frame"] = s.clutter_per_frame;
  j["background_region"] = s.background_region;
  j["hist_noise"] = s.hist_noise;
  j["offset_radius"] = s.offset_radius;
  j["skin_superpixels"] = s.skin_superpixels;
  j["window_minutes"] = s.cue_config.window_minutes;
  return j.dump(2) + "\n";
}

ScenarioSpec scenario_from_json(const std::string& text) {
  const json j = json::parse(text);
  ScenarioSpec s;
  s.seed = j.value("seed", std::uint64_t{1});
  s.video_id = j.value("video_id", std::string());
  s.fps = j.value("fps", 1.0);
  s.frame_width = j.value("frame_width", 640);
  s.frame_height = j.value("frame_height", 480);
  s.descriptor_dim = j.value("descriptor_dim", 64);
  s.clutter_per_frame = j.value("clutter_per_frame", 3);
  s.background_region = j.value("background_region", true);
  s.hist_noise = j.value("hist_noise", 0.0);
  s.offset_radius = j.value("offset_radius", 120.0);
  s.skin_superpixels = j.value("skin_superpixels", false);
  s.cue_config.window_minutes = j.value("window_minutes", s.cue_config.window_minutes);
  for (const json& b : j.at("blocks")) s.blocks.push_back({b.at("length").get<int>(), b.at("signature").get<int>()});
  if (auto it = j.find("objects"); it != j.end())
    for (const json& o : *it) {
      PlantedObject p;
      p.label = o.at("label").get<std::string>();
      p.tier = o.value("tier", 1.0);
      p.signature = o.value("signature", 50);
      p.frames = o.at("frames").get<std::vector<int>>();
      p.prominent_frame = o.value("prominent_frame", -1);
      p.has_face = o.value("has_face", false);
      p.near_hand = o.value("near_hand", false);
      p.side = o.value("side", 150.0);
      p.points = o.value("points", 4);
      p.objectness = o.value("objectness", 0.8);
      s.objects.push_back(std::move(p));
    }
  return s;
}

std::string oracle_to_json(const SynthOracle& o) {
  json j;
  j["event_starts"] = o.event_starts;
  auto key = [](const RegionKey& k) { return json::array({k.frame, k.region_id}); };
  json clusters = json::object();
  for (const auto& [label, keys] : o.clusters) {
    json list = json::array();
    for (const auto& k : keys) list.push_back(key(k));
    clusters[label] = std::move(list);
  }
  j["clusters"] = std::move(clusters);
  json prominent = json::object();
  for (const auto& [label, k] : o.prominent) prominent[label] = key(k);
  j["prominent"] = std::move(prominent);
  j["tiers"] = o.tiers;
  json regions = json::array();
  for (const auto& r : o.regions) {
    json cues = json::object();
    for (int c = 0; c < kCueCount; ++c) cues[std::string(kCueNames[static_cast<std::size_t>(c)])] = r.cues[c];
    regions.push_back({{"frame", r.key.frame},
                       {"region_id", r.key.region_id},
                       {"kind", r.kind},
                       {"label", r.label},
                       {"signature", r.signature},
                       {"prominent", r.prominent},
                       {"cues", std::move(cues)}});
  }
  j["regions"] = std::move(regions);
  return j.dump(2) + "\n";
}

}  // namespace egosum
