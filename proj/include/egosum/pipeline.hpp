#pragma once

#include "egosum/bundle.hpp"
#include "egosum/config.hpp"
#include "egosum/cues.hpp"
#include "egosum/events.hpp"
#include "egosum/grouping.hpp"
#include "egosum/importance.hpp"
#include "egosum/storyboard.hpp"

#include <Eigen/Dense>

#include <vector>

namespace egosum {

/// Everything summarisation needs from one video, computed once.
struct VideoAnalysis {
  CueTable cues;
  Eigen::VectorXd importance;        // per cue-table row
  Eigen::VectorXd frame_importance;  // per frame position
  FrameDistanceMatrix distances;     // 1x1 zero matrix for a single frame
  std::vector<Event> events;
};

VideoAnalysis analyze(const VideoBundle& b, const ImportanceModel& m, const PipelineConfig& cfg);

/// Regions of one event as grouping candidates, optionally only those
/// scoring strictly above `min_importance`.
std::vector<Candidate> event_candidates(const VideoBundle& b, const VideoAnalysis& a, const Event& e,
                                        std::optional<double> min_importance);

/// Keyframes of the representatives of every event, one entry per frame
/// (a frame chosen by several clusters keeps the highest-scoring one).
Storyboard summarize_by_criterion(const VideoBundle& b, const VideoAnalysis& a, double tau,
                                  const GroupingConfig& g);

/// Exactly k frames minimising the budget energy over the representative
/// frames (or over all frames when no_events is set).
Storyboard summarize_by_budget(const VideoBundle& b, const VideoAnalysis& a, int k,
                               const ImportanceModel& m, const PipelineConfig& cfg);

Storyboard summarize(const VideoBundle& b, const VideoAnalysis& a, const ImportanceModel& m,
                     const PipelineConfig& cfg);

/// Pools region samples over the bundles, fits, and records energy-term
/// statistics over every frame and frame pair of the training videos.
ImportanceModel train_model(const std::vector<VideoBundle>& bundles, const PipelineConfig& cfg,
                            const FitOptions& opts = {});

}  // namespace egosum
