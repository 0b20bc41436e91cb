#pragma once

#include "egosum/bundle.hpp"

#include <Eigen/Dense>

#include <array>
#include <filesystem>
#include <string_view>
#include <vector>

namespace egosum {

inline constexpr int kCueCount = 14;

/// Canonical cue order. Model files record this order and refuse to load
/// against a different one.
enum Cue : int {
  kHandDist = 0,
  kGazeDist,
  kFreqRegion,
  kFreqPoint,
  kObjectness,
  kMotionDistinct,
  kFaceOverlap,
  kSize,
  kCentroidX,
  kCentroidY,
  kBboxCx,
  kBboxCy,
  kBboxW,
  kBboxH,
};

inline constexpr std::array<std::string_view, kCueCount> kCueNames = {
    "hand_dist",       "gaze_dist",   "freq_region", "freq_point", "objectness",
    "motion_distinct", "face_overlap", "size",       "centroid_x", "centroid_y",
    "bbox_cx",         "bbox_cy",     "bbox_w",      "bbox_h"};

/// Readable labels used in weight rankings.
inline constexpr std::array<std::string_view, kCueCount> kCueLabels = {
    "interaction",   "gaze",  "frequency (region)", "frequency (points)", "object-like appearance",
    "object-like motion", "face", "size", "x-position", "y-position",
    "bbox x-center", "bbox y-center", "bbox width", "bbox height"};

using CueVector = Eigen::Matrix<double, kCueCount, 1>;

enum class WindowAnchor { Centered, Trailing, Leading };

struct CueConfig {
  double theta_r = 10000.0;  // chi-square match threshold on raw colour counts
  double theta_p = 0.7;      // ratio-test threshold
  double window_minutes = 10.0;
  double skin_fraction = 0.25;
  WindowAnchor anchor = WindowAnchor::Centered;

  void check() const;
};

struct RegionKey {
  int frame = 0;
  int region_id = 0;
  friend bool operator==(const RegionKey&, const RegionKey&) = default;
  friend auto operator<=>(const RegionKey&, const RegionKey&) = default;
};

/// One row per region, frames in order and regions in bundle order.
struct CueTable {
  std::vector<RegionKey> keys;
  Eigen::Matrix<double, Eigen::Dynamic, kCueCount, Eigen::RowMajor> values;
  std::vector<Eigen::Index> frame_offset;  // first row of each frame, size F + 1

  Eigen::Index rows() const { return static_cast<Eigen::Index>(keys.size()); }
  CueVector row(Eigen::Index i) const { return values.row(i).transpose(); }
};

/// Frames (by position) that make up the frequency window of `frame`,
/// truncated at the video ends and excluding `frame` itself.
std::vector<int> frequency_window(int frame, int n_frames, double fps, const CueConfig& cfg);

/// Number of window frames whose closest region (chi-square) is within theta_r.
int region_frequency(const RegionRecord& r, const VideoBundle& b, const std::vector<int>& window,
                     const CueConfig& cfg);

/// Mean over the region's interest points of the number of window frames
/// where the point passes the nearest / second-nearest ratio test.
double point_frequency(const RegionRecord& r, const FrameRecord& own, const VideoBundle& b,
                       const std::vector<int>& window, const CueConfig& cfg);

/// Hand candidates: superpixels whose skin fraction is strictly above the rule.
std::vector<Point> detect_hands(const FrameRecord& f, const CueConfig& cfg);

/// Hands used for the interaction cue: explicit centroids when present,
/// otherwise the superpixel rule.
std::vector<Point> frame_hands(const FrameRecord& f, const CueConfig& cfg);

double hand_distance(const Point& centroid, const std::vector<Point>& hands, double frame_diagonal);
double gaze_distance(const Point& centroid, int frame_width, int frame_height);
double motion_distinctness(const RegionRecord& r);
double face_overlap(const Box& region, const std::vector<Box>& faces);

CueTable extract_cues(const VideoBundle& b, const CueConfig& cfg);

/// Tab-separated export: video_id, frame, region_id, then the 14 cues.
void write_cue_table(const CueTable& t, const std::string& video_id, std::ostream& out);

}  // namespace egosum
