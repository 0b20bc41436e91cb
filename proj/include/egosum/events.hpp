#pragma once

#include "egosum/bundle.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace egosum {

/// Frame-level distance matrix with its normalisers.
struct FrameDistanceMatrix {
  Eigen::MatrixXd d;
  Eigen::MatrixXd chi2;  // raw chi-square between frame histograms
  double omega = 0.0;    // mean chi-square over unordered pairs
  int t_window = 1;

  Eigen::Index size() const { return d.rows(); }
};

struct Event {
  int event_id = 0;
  std::vector<int> member_frames;  // sorted
  int start = 0;
  int end = 0;
};

enum class ThresholdSpace { ChiSquare, Distance };

struct EventConfig {
  int t_window = 27000;
  ThresholdSpace threshold_space = ThresholdSpace::ChiSquare;
  std::optional<double> threshold_override;  // D-space value; bypasses both rules
};

/// Temporal weight w = max(0, t - |m - n|) / t.
double temporal_weight(int m, int n, int t);

/// 1 - w * exp(-chi2 / omega). omega == 0 means every chi2 is zero.
double frame_distance(int m, int n, double chi2, int t, double omega);

FrameDistanceMatrix build_distance_matrix(const VideoBundle& b, int t_window);

/// Stopping threshold in D-space for the configured rule.
double stopping_threshold(const FrameDistanceMatrix& dm, const EventConfig& cfg);

/// Complete-link agglomeration until the cheapest merge exceeds the threshold.
std::vector<Event> segment_events(const FrameDistanceMatrix& dm, const EventConfig& cfg);

/// Event id per frame position.
std::vector<int> event_of_frame(const std::vector<Event>& events, int n_frames);

}  // namespace egosum
