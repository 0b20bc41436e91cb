// egosum: command-line front end.

#include "egosum/bundle.hpp"
#include "egosum/config.hpp"
#include "egosum/eval.hpp"
#include "egosum/log.hpp"
#include "egosum/pipeline.hpp"
#include "egosum/synth.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace egosum;
using nlohmann::json;

namespace {

struct Overrides {
  std::string config_path;
  std::optional<int> stride;
  std::optional<int> t_window;
  std::optional<std::string> threshold_space;
  std::optional<double> threshold;
  std::optional<std::string> mode;
  std::optional<double> tau;
  std::optional<int> k;
  bool no_events = false;
  std::optional<std::string> stats;
  std::optional<std::uint64_t> seed;
};

void add_config_flags(CLI::App* app, Overrides& o) {
  app->add_option("--config", o.config_path, "Pipeline config (JSON); flags override its fields")
      ->check(CLI::ExistingFile);
  app->add_option("--stride", o.stride, "Keep every n-th stored frame")->check(CLI::PositiveNumber);
}

void add_event_flags(CLI::App* app, Overrides& o) {
  app->add_option("--t-window", o.t_window, "Temporal weight span t in frames")->check(CLI::PositiveNumber);
  app->add_option("--threshold-space", o.threshold_space, "Event stopping rule")
      ->check(CLI::IsMember({"chi2", "distance"}));
  app->add_option("--threshold", o.threshold, "Fixed stopping threshold in distance units");
}

PipelineConfig resolve(const Overrides& o) {
  PipelineConfig c = o.config_path.empty() ? PipelineConfig{} : load_config(o.config_path);
  if (o.stride) c.stride = *o.stride;
  if (o.t_window) c.events.t_window = *o.t_window;
  if (o.threshold_space)
    c.events.threshold_space = *o.threshold_space == "chi2" ? ThresholdSpace::ChiSquare : ThresholdSpace::Distance;
  if (o.threshold) c.events.threshold_override = *o.threshold;
  if (o.mode) c.mode = *o.mode == "budget" ? SummaryMode::Budget : SummaryMode::Criterion;
  if (o.tau) c.tau = *o.tau;
  if (o.k) c.k = *o.k;
  if (o.no_events) c.no_events = true;
  if (o.stats) c.stats_from_model = *o.stats == "model";
  if (o.seed) c.seed = *o.seed;
  c.check();
  return c;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void refuse_overlap(const ImportanceModel& m, const VideoBundle& b, bool allow) {
  if (allow) return;
  if (std::find(m.training_videos.begin(), m.training_videos.end(), b.video_id) != m.training_videos.end())
    throw std::runtime_error("video '" + b.video_id +
                             "' was used to train this model (pass --allow-overlap to proceed anyway)");
}

std::string event_table(const std::vector<Event>& events) {
  std::ostringstream out;
  out << "event_id\tstart\tend\tn_frames\n";
  for (const Event& e : events)
    out << e.event_id << '\t' << e.start << '\t' << e.end << '\t' << e.member_frames.size() << '\n';
  return out.str();
}

// Dense row-major float64 matrix preceded by its dimension as uint64.
void write_matrix(const std::string& path, const Eigen::MatrixXd& d) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  const std::uint64_t n = static_cast<std::uint64_t>(d.rows());
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = d;
  out.write(reinterpret_cast<const char*>(rm.data()), static_cast<std::streamsize>(rm.size() * sizeof(double)));
}

std::string cluster_dump(const VideoBundle& b, const VideoAnalysis& a, const PipelineConfig& cfg) {
  json out = json::array();
  for (const Event& e : a.events) {
    std::optional<double> filter;
    if (cfg.mode == SummaryMode::Criterion) filter = cfg.tau;
    auto candidates = event_candidates(b, a, e, filter);
    for (const ObjectCluster& c : group_event(candidates, cfg.grouping)) {
      json members = json::array();
      for (int i : c.members) {
        const auto& key = candidates[static_cast<std::size_t>(i)].key;
        members.push_back({key.frame, key.region_id});
      }
      const auto& rep = candidates[static_cast<std::size_t>(c.representative)].key;
      out.push_back({{"event_id", e.event_id},
                     {"avg_importance", c.avg_importance},
                     {"representative", {rep.frame, rep.region_id}},
                     {"members", std::move(members)}});
    }
  }
  return out.dump(2) + "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Storyboard summaries of egocentric video from per-frame region feature bundles"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "Suppress warnings");

  Overrides o;

  // train
  auto* train = app.add_subcommand("train", "Fit the importance model on labelled bundles");
  std::vector<std::string> train_inputs;
  std::string model_out;
  bool linear_only = false;
  train->add_option("bundles", train_inputs, "Training bundles (disjoint camera wearers)")
      ->required()->check(CLI::ExistingFile);
  train->add_option("-o,--output", model_out, "Model file")->required();
  train->add_flag("--linear-only", linear_only, "Drop the pairwise interaction terms");
  add_config_flags(train, o);
  add_event_flags(train, o);

  // summarize
  auto* summ = app.add_subcommand("summarize", "Build a storyboard manifest");
  std::string bundle_path, model_path, out_path, clusters_path;
  bool allow_overlap = false;
  summ->add_option("bundle", bundle_path, "Input bundle")->required()->check(CLI::ExistingFile);
  summ->add_option("-m,--model", model_path, "Model file")->required()->check(CLI::ExistingFile);
  summ->add_option("-o,--output", out_path, "Manifest path (default stdout)");
  summ->add_option("--mode", o.mode, "criterion or budget")->check(CLI::IsMember({"criterion", "budget"}));
  summ->add_option("--tau", o.tau, "Importance criterion (raw prediction units)");
  summ->add_option("-k", o.k, "Frame budget")->check(CLI::PositiveNumber);
  summ->add_flag("--no-events", o.no_events, "Budget mode over all frames instead of representatives");
  summ->add_option("--stats", o.stats, "Energy standardisation source")->check(CLI::IsMember({"model", "self"}));
  summ->add_flag("--allow-overlap", allow_overlap, "Permit summarising a training video");
  summ->add_option("--dump-clusters", clusters_path, "Write grouping clusters as JSON");
  add_config_flags(summ, o);
  add_event_flags(summ, o);

  // events
  auto* events = app.add_subcommand("events", "Segment a bundle into events");
  std::string matrix_path;
  events->add_option("bundle", bundle_path, "Input bundle")->required()->check(CLI::ExistingFile);
  events->add_option("-o,--output", out_path, "Event table (default stdout)");
  events->add_option("--matrix", matrix_path, "Also write the distance matrix (binary)");
  add_config_flags(events, o);
  add_event_flags(events, o);

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "AP, recall and prominence report");
  std::string manifest_path, pr_path;
  evaluate->add_option("bundle", bundle_path, "Bundle with ground truth")->required()->check(CLI::ExistingFile);
  evaluate->add_option("-m,--model", model_path, "Model file")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--manifest", manifest_path, "Storyboard manifest to score")->check(CLI::ExistingFile);
  evaluate->add_option("--pr", pr_path, "Write recall/precision points as a two-column table");
  evaluate->add_option("-o,--output", out_path, "Report path (default stdout)");
  evaluate->add_flag("--allow-overlap", allow_overlap, "Permit evaluating on a training video");
  add_config_flags(evaluate, o);
  add_event_flags(evaluate, o);

  // weights
  auto* weights = app.add_subcommand("weights", "Rank the learned terms by |weight|");
  int top = 28;
  weights->add_option("-m,--model", model_path, "Model file")->required()->check(CLI::ExistingFile);
  weights->add_option("--top", top, "Number of terms to print (0 = all)")->check(CLI::NonNegativeNumber);

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic bundle with its oracle");
  std::string spec_path, oracle_path;
  std::optional<std::uint64_t> day_seed;
  int day_events = 5, day_length = 50, day_objects = 2;
  synth->add_option("--spec", spec_path, "Scenario spec (JSON)")->check(CLI::ExistingFile);
  synth->add_option("--day", day_seed, "Planted multi-event day with this seed");
  synth->add_option("--events", day_events, "Events in a --day scenario")->check(CLI::PositiveNumber);
  synth->add_option("--block-length", day_length, "Frames per event in a --day scenario");
  synth->add_option("--objects", day_objects, "Objects per event in a --day scenario");
  synth->add_option("-o,--output", out_path, "Bundle path")->required();
  synth->add_option("--oracle", oracle_path, "Oracle path");

  // validate
  auto* validate = app.add_subcommand("validate", "Check bundle invariants; exit status = violation count");
  validate->add_option("bundle", bundle_path, "Input bundle")->required()->check(CLI::ExistingFile);

  // cues
  auto* cues = app.add_subcommand("cues", "Export the per-region cue table");
  cues->add_option("bundle", bundle_path, "Input bundle")->required()->check(CLI::ExistingFile);
  cues->add_option("-o,--output", out_path, "TSV path (default stdout)");
  add_config_flags(cues, o);

  // config
  auto* show = app.add_subcommand("config", "Print the effective configuration");
  add_config_flags(show, o);
  add_event_flags(show, o);

  CLI11_PARSE(app, argc, argv);
  set_warnings_enabled(!quiet);
  // validate reserves small exit codes for violation counts
  const int failure = *validate ? 126 : 1;

  try {
    if (*train) {
      const PipelineConfig cfg = resolve(o);
      std::vector<VideoBundle> bundles;
      for (const auto& p : train_inputs) bundles.push_back(load_bundle(p, cfg.stride));
      const ImportanceModel m = train_model(bundles, cfg, FitOptions{!linear_only});
      save_model(m, model_out, reproducibility_header(cfg, "train"));
      std::cerr << "trained on " << bundles.size() << " video(s)\n";
    } else if (*summ) {
      const PipelineConfig cfg = resolve(o);
      const VideoBundle b = load_bundle(bundle_path, cfg.stride);
      const ImportanceModel m = load_model(model_path);
      refuse_overlap(m, b, allow_overlap);
      const VideoAnalysis a = analyze(b, m, cfg);
      const Storyboard s = summarize(b, a, m, cfg);
      if (!clusters_path.empty()) write_text(clusters_path, cluster_dump(b, a, cfg));
      write_text(out_path, render_manifest(s, b, a.events, reproducibility_header(cfg, "summarize")));
    } else if (*events) {
      const PipelineConfig cfg = resolve(o);
      const VideoBundle b = load_bundle(bundle_path, cfg.stride);
      const FrameDistanceMatrix dm = build_distance_matrix(b, cfg.events.t_window);
      const auto ev = segment_events(dm, cfg.events);
      if (!matrix_path.empty()) write_matrix(matrix_path, dm.d);
      write_text(out_path, event_table(ev));
    } else if (*evaluate) {
      const PipelineConfig cfg = resolve(o);
      const VideoBundle b = load_bundle(bundle_path, cfg.stride);
      const ImportanceModel m = load_model(model_path);
      refuse_overlap(m, b, allow_overlap);
      const VideoAnalysis a = analyze(b, m, cfg);
      json report;
      report["header"] = json::parse(reproducibility_header(cfg, "evaluate"));
      report["video_id"] = b.video_id;

      std::vector<ScoredRegion> scored;
      for (Eigen::Index i = 0; i < a.cues.rows(); ++i) {
        const auto& key = a.cues.keys[static_cast<std::size_t>(i)];
        const auto& regions = b.frames[static_cast<std::size_t>(key.frame)].regions;
        const auto it = std::find_if(regions.begin(), regions.end(),
                                     [&](const RegionRecord& r) { return r.region_id == key.region_id; });
        scored.push_back({key.frame, it->bbox, a.importance[i]});
      }
      const auto labeled = label_regions(scored, b.ground_truth);
      const bool any_positive =
          std::any_of(labeled.begin(), labeled.end(), [](const LabeledScore& l) { return l.positive; });
      if (any_positive) {
        const PrCurve pr = pr_curve(labeled);
        report["average_precision"] = pr.average_precision;
        if (!pr_path.empty()) {
          std::ostringstream t;
          t << std::setprecision(17) << "recall\tprecision\n";
          for (const auto& p : pr.points) t << p.recall << '\t' << p.precision << '\n';
          write_text(pr_path, t.str());
        }
      } else {
        report["average_precision"] = nullptr;
        warn("no region overlaps ground truth; AP undefined");
      }

      if (!manifest_path.empty() && !b.ground_truth.empty()) {
        const Manifest mf = parse_manifest(read_text(manifest_path));
        if (mf.video_id != b.video_id) throw std::runtime_error("manifest belongs to video '" + mf.video_id + "'");
        std::vector<int> ours;
        for (const auto& e : mf.entries) ours.push_back(e.frame);
        const int n = static_cast<int>(ours.size());
        auto summary = [&](const std::vector<int>& frames) {
          const auto p = prominence(frames, b);
          const double mp = mean_prominence(p);
          return json{{"frames", frames},
                      {"object_recall", object_recall(frames, b)},
                      {"mean_prominence", std::isnan(mp) ? json(nullptr) : json(mp)}};
        };
        json s;
        s["summary"] = summary(ours);
        if (n >= 1) {
          s["uniform"] = summary(uniform_baseline(static_cast<int>(b.frames.size()), n));
          s["event_adaptive"] = summary(event_adaptive_baseline(a.events, n));
        }
        json curve = json::array();
        for (int len = 1; len <= static_cast<int>(b.frames.size()) && len <= std::max(n, 1) * 2; ++len)
          curve.push_back({{"n", len},
                           {"uniform", object_recall(uniform_baseline(static_cast<int>(b.frames.size()), len), b)},
                           {"event_adaptive", object_recall(event_adaptive_baseline(a.events, len), b)}});
        s["baseline_recall_by_length"] = std::move(curve);
        report["storyboard"] = std::move(s);
      }
      write_text(out_path, report.dump(2) + "\n");
    } else if (*weights) {
      const ImportanceModel m = load_model(model_path);
      const auto ranked = rank_weights(m);
      const std::size_t n = top == 0 ? ranked.size() : std::min<std::size_t>(ranked.size(), top);
      std::cout << "rank\tweight\tterm\n";
      const FeatureVector w = m.weights();
      for (std::size_t i = 0; i < n; ++i)
        std::cout << i + 1 << '\t' << std::setprecision(6) << w[ranked[i].term] << '\t' << ranked[i].name << '\n';
    } else if (*synth) {
      if (spec_path.empty() == !day_seed)
        throw std::runtime_error("synth: give exactly one of --spec or --day");
      const ScenarioSpec spec = day_seed ? make_day_scenario(*day_seed, day_events, day_length, day_objects)
                                         : scenario_from_json(read_text(spec_path));
      const SynthResult r = generate(spec);
      save_bundle(r.bundle, out_path);
      if (!oracle_path.empty()) write_text(oracle_path, oracle_to_json(r.oracle));
    } else if (*validate) {
      const VideoBundle b = read_bundle(bundle_path);
      const auto violations = validate_bundle(b);
      for (const auto& v : violations) std::cout << v.to_string() << '\n';
      std::cerr << violations.size() << " violation(s)\n";
      return static_cast<int>(std::min<std::size_t>(violations.size(), 125));
    } else if (*cues) {
      const PipelineConfig cfg = resolve(o);
      const VideoBundle b = load_bundle(bundle_path, cfg.stride);
      std::ostringstream t;
      write_cue_table(extract_cues(b, cfg.cues), b.video_id, t);
      write_text(out_path, t.str());
    } else if (*show) {
      std::cout << config_to_json(resolve(o));
    }
  } catch (const BundleError& e) {
    std::cerr << "error: " << e.what() << " [field " << e.field_path() << ", frame " << e.frame() << "]\n";
    return failure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return failure;
  }
  return 0;
}
