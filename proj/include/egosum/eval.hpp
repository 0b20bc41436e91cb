#pragma once

#include "egosum/bundle.hpp"
#include "egosum/events.hpp"
#include "egosum/storyboard.hpp"

#include <map>
#include <string>
#include <vector>

namespace egosum {

struct ScoredRegion {
  int frame = 0;
  Box bbox;
  double score = 0.0;
};

struct LabeledScore {
  double score = 0.0;
  bool positive = false;
};

/// Positive iff IoU with some GT box in the same frame is strictly above 0.5.
std::vector<LabeledScore> label_regions(const std::vector<ScoredRegion>& predictions,
                                        const std::vector<GtRegion>& gt);

struct PrPoint {
  double recall = 0.0;
  double precision = 0.0;
};

struct PrCurve {
  std::vector<PrPoint> points;  // one per distinct score, descending threshold
  double average_precision = 0.0;
};

/// Threshold sweep over distinct scores with non-interpolated step AP.
/// Throws when there is no positive.
PrCurve pr_curve(const std::vector<LabeledScore>& labeled);

/// Main GT label of a frame: the largest-area GT region ("" when none).
std::string main_label(const VideoBundle& b, int frame);

/// Fraction of distinct GT labels that are the main label of a selected frame.
double object_recall(const std::vector<int>& frames, const VideoBundle& b);

/// For each covered label, the smallest centroid-to-centre distance of its
/// GT box over the selected frames where it is the main label.
std::map<std::string, double> prominence(const std::vector<int>& frames, const VideoBundle& b);

double mean_prominence(const std::map<std::string, double>& p);

/// Frames round(i (F - 1) / (n - 1)); n == 1 picks frame 0. Throws unless 1 <= n <= F.
std::vector<int> uniform_baseline(int n_frames, int n);

/// Balanced allocation (at most ceil(n / #events) per event, handed out
/// round-robin in event order), uniform inside each event over its member
/// frames. Throws unless 1 <= n <= total frame count.
std::vector<int> event_adaptive_baseline(const std::vector<Event>& events, int n);

}  // namespace egosum
