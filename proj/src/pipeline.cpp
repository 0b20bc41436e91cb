#include "egosum/pipeline.hpp"

#include "egosum/log.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace egosum {

namespace {

// Row of (frame position, region id) in the cue table.
Eigen::Index region_row(const CueTable& t, int frame, std::size_t region_pos) {
  return t.frame_offset[static_cast<std::size_t>(frame)] + static_cast<Eigen::Index>(region_pos);
}

Eigen::VectorXd frame_scores(const VideoBundle& b, const CueTable& t, const Eigen::VectorXd& importance) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(b.frames.size()));
  for (std::size_t f = 0; f < b.frames.size(); ++f) {
    const Eigen::Index lo = t.frame_offset[f], hi = t.frame_offset[f + 1];
    out[static_cast<Eigen::Index>(f)] = frame_importance(importance.segment(lo, hi - lo));
  }
  return out;
}

FrameDistanceMatrix distances_for(const VideoBundle& b, int t_window) {
  if (b.frames.size() >= 2) return build_distance_matrix(b, t_window);
  FrameDistanceMatrix dm;
  dm.d = Eigen::MatrixXd::Zero(1, 1);
  dm.chi2 = Eigen::MatrixXd::Zero(1, 1);
  dm.t_window = t_window;
  return dm;
}

// Highest-importance region of a frame; region id -1 when it has none.
std::pair<int, double> best_region(const VideoBundle& b, const VideoAnalysis& a, int frame) {
  const FrameRecord& f = b.frames[static_cast<std::size_t>(frame)];
  int id = -1;
  double best = 0.0;
  for (std::size_t i = 0; i < f.regions.size(); ++i) {
    const double s = a.importance[region_row(a.cues, frame, i)];
    if (id < 0 || s > best) {
      id = f.regions[i].region_id;
      best = s;
    }
  }
  return {id, best};
}

// Grouped representatives of every event, one entry per frame.
std::vector<StoryEntry> representatives(const VideoBundle& b, const VideoAnalysis& a,
                                        std::optional<double> min_importance, const GroupingConfig& g) {
  std::map<int, StoryEntry> by_frame;
  for (const Event& e : a.events) {
    auto candidates = event_candidates(b, a, e, min_importance);
    for (const ObjectCluster& c : group_event(candidates, g)) {
      const Candidate& rep = candidates[static_cast<std::size_t>(c.representative)];
      const StoryEntry entry{rep.key.frame, e.event_id, rep.key.region_id, rep.importance};
      auto [it, inserted] = by_frame.emplace(entry.frame, entry);
      if (!inserted && entry.importance > it->second.importance) it->second = entry;
    }
  }
  std::vector<StoryEntry> out;
  for (const auto& [frame, entry] : by_frame) out.push_back(entry);
  return out;
}

}  // namespace

VideoAnalysis analyze(const VideoBundle& b, const ImportanceModel& m, const PipelineConfig& cfg) {
  if (b.frames.empty()) throw std::invalid_argument("analyze: bundle has no frames");
  VideoAnalysis a;
  a.cues = extract_cues(b, cfg.cues);
  a.importance = predict(m, a.cues);
  a.frame_importance = frame_scores(b, a.cues, a.importance);
  a.distances = distances_for(b, cfg.events.t_window);
  if (b.frames.size() >= 2) {
    a.events = segment_events(a.distances, cfg.events);
  } else {
    a.events = {Event{0, {0}, 0, 0}};
  }
  return a;
}

std::vector<Candidate> event_candidates(const VideoBundle& b, const VideoAnalysis& a, const Event& e,
                                        std::optional<double> min_importance) {
  std::vector<Candidate> out;
  for (int f : e.member_frames) {
    const FrameRecord& fr = b.frames[static_cast<std::size_t>(f)];
    for (std::size_t i = 0; i < fr.regions.size(); ++i) {
      const double s = a.importance[region_row(a.cues, f, i)];
      if (min_importance && !(s > *min_importance)) continue;
      out.push_back({{f, fr.regions[i].region_id}, &fr.regions[i].color_hist, s});
    }
  }
  return out;
}

Storyboard summarize_by_criterion(const VideoBundle& b, const VideoAnalysis& a, double tau,
                                  const GroupingConfig& g) {
  Storyboard s;
  s.mode = SummaryMode::Criterion;
  s.tau = tau;
  s.entries = representatives(b, a, tau, g);
  return s;
}

Storyboard summarize_by_budget(const VideoBundle& b, const VideoAnalysis& a, int k,
                               const ImportanceModel& m, const PipelineConfig& cfg) {
  std::vector<StoryEntry> pool;
  if (cfg.no_events) {
    const auto event_of = event_of_frame(a.events, static_cast<int>(b.frames.size()));
    for (int f = 0; f < static_cast<int>(b.frames.size()); ++f) {
      const auto [id, score] = best_region(b, a, f);
      pool.push_back({f, event_of[static_cast<std::size_t>(f)], id, score});
    }
  } else {
    pool = representatives(b, a, std::nullopt, cfg.grouping);
  }
  if (k < 1 || k > static_cast<int>(pool.size()))
    throw std::invalid_argument("summarize: k = " + std::to_string(k) + " but only " +
                                std::to_string(pool.size()) + " candidate frames");

  std::vector<int> frames;
  for (const auto& e : pool) frames.push_back(e.frame);
  BudgetProblem problem =
      make_budget_problem(frames, a.frame_importance, a.distances.chi2, a.distances.omega, EnergyStats{});
  if (cfg.stats_from_model && m.energy_stats) {
    problem.stats = *m.energy_stats;
  } else {
    if (cfg.stats_from_model) warn("model carries no energy statistics; standardising from this video");
    problem.stats = energy_stats_from(problem);
  }

  const Selection sel = select_k_frames(problem, k);
  Storyboard s;
  s.mode = SummaryMode::Budget;
  s.k = k;
  s.energy = sel.energy;
  for (int p : sel.positions) {
    StoryEntry e = pool[static_cast<std::size_t>(p)];
    e.importance = a.frame_importance[e.frame];
    s.entries.push_back(e);
  }
  return s;
}

Storyboard summarize(const VideoBundle& b, const VideoAnalysis& a, const ImportanceModel& m,
                     const PipelineConfig& cfg) {
  return cfg.mode == SummaryMode::Budget ? summarize_by_budget(b, a, cfg.k, m, cfg)
                                         : summarize_by_criterion(b, a, cfg.tau, cfg.grouping);
}

ImportanceModel train_model(const std::vector<VideoBundle>& bundles, const PipelineConfig& cfg,
                            const FitOptions& opts) {
  if (bundles.empty()) throw std::invalid_argument("train: no training bundles");
  std::set<std::string> ids;
  std::vector<CueTable> tables;
  std::vector<TrainingSample> samples;
  for (const VideoBundle& b : bundles) {
    if (!ids.insert(b.video_id).second)
      throw std::invalid_argument("train: video_id '" + b.video_id + "' given twice");
    tables.push_back(extract_cues(b, cfg.cues));
    auto s = training_samples(b, tables.back());
    samples.insert(samples.end(), s.begin(), s.end());
  }
  ImportanceModel m = fit(samples, opts);
  for (const VideoBundle& b : bundles) m.training_videos.push_back(b.video_id);

  // Energy-term statistics pooled over every frame (importance) and every
  // frame pair (similarity, spread) of the training videos.
  double n1 = 0, s1 = 0, q1 = 0, n2 = 0, s2 = 0, q2 = 0, s3 = 0, q3 = 0;
  for (std::size_t v = 0; v < bundles.size(); ++v) {
    const VideoBundle& b = bundles[v];
    const Eigen::VectorXd fi = frame_scores(b, tables[v], predict(m, tables[v]));
    n1 += static_cast<double>(fi.size());
    s1 += fi.sum();
    q1 += fi.squaredNorm();
    if (b.frames.size() < 2) continue;
    const FrameDistanceMatrix dm = build_distance_matrix(b, cfg.events.t_window);
    for (Eigen::Index i = 0; i < dm.size(); ++i)
      for (Eigen::Index j = i + 1; j < dm.size(); ++j) {
        const double sim = std::exp(dm.omega > 0 ? -dm.chi2(i, j) / dm.omega : 0.0);
        const double gap = std::sqrt(static_cast<double>(j - i));
        n2 += 1;
        s2 += sim;
        q2 += sim * sim;
        s3 += gap;
        q3 += gap * gap;
      }
  }
  auto finish = [](double n, double s, double q) {
    MeanStd r;
    if (n == 0) return r;
    r.mean = s / n;
    const double var = std::max(0.0, q / n - r.mean * r.mean);
    r.std = var > 0 ? std::sqrt(var) : 1.0;
    return r;
  };
  m.energy_stats = EnergyStats{finish(n1, s1, q1), finish(n2, s2, q2), finish(n2, s3, q3)};
  return m;
}

}  // namespace egosum
