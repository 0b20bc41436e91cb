#include "egosum/cues.hpp"

#include "egosum/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace egosum {

void CueConfig::check() const {
  if (!(theta_p > 0 && theta_p < 1)) throw std::invalid_argument("theta_p must be in (0, 1)");
  if (!(window_minutes > 0)) throw std::invalid_argument("window_minutes must be > 0");
  if (!(skin_fraction > 0 && skin_fraction < 1))
    throw std::invalid_argument("skin_fraction must be in (0, 1)");
  if (!(theta_r >= 0)) throw std::invalid_argument("theta_r must be >= 0");
}

std::vector<int> frequency_window(int frame, int n_frames, double fps, const CueConfig& cfg) {
  const int span = static_cast<int>(std::lround(cfg.window_minutes * 60.0 * fps));
  int lo = frame, hi = frame;
  switch (cfg.anchor) {
    case WindowAnchor::Centered:
      lo = frame - span / 2;
      hi = frame + (span - span / 2);
      break;
    case WindowAnchor::Trailing:
      lo = frame - span;
      break;
    case WindowAnchor::Leading:
      hi = frame + span;
      break;
  }
  lo = std::max(lo, 0);
  hi = std::min(hi, n_frames - 1);
  std::vector<int> out;
  for (int f = lo; f <= hi; ++f)
    if (f != frame) out.push_back(f);
  return out;
}

int region_frequency(const RegionRecord& r, const VideoBundle& b, const std::vector<int>& window,
                     const CueConfig& cfg) {
  int count = 0;
  for (int f : window) {
    double best = std::numeric_limits<double>::infinity();
    for (const RegionRecord& other : b.frames[static_cast<std::size_t>(f)].regions)
      best = std::min(best, chi_square(r.color_hist, other.color_hist));
    if (best <= cfg.theta_r) ++count;
  }
  return count;
}

double point_frequency(const RegionRecord& r, const FrameRecord& own, const VideoBundle& b,
                       const std::vector<int>& window, const CueConfig& cfg) {
  if (r.member_point_ids.empty()) return 0.0;
  long matches = 0;
  for (int pid : r.member_point_ids) {
    const auto query = own.descriptors.col(pid);
    for (int f : window) {
      const FrameRecord& frame = b.frames[static_cast<std::size_t>(f)];
      if (frame.point_count() < 2) continue;
      double d1 = std::numeric_limits<double>::infinity(), d2 = d1;
      for (Eigen::Index j = 0; j < frame.point_count(); ++j) {
        const double d = (frame.descriptors.col(j) - query).norm();
        if (d < d1) {
          d2 = d1;
          d1 = d;
        } else if (d < d2) {
          d2 = d;
        }
      }
      // A zero second distance is an ambiguous match.
      if (d2 > 0 && d1 / d2 <= cfg.theta_p) ++matches;
    }
  }
  return static_cast<double>(matches) / static_cast<double>(r.member_point_ids.size());
}

std::vector<Point> detect_hands(const FrameRecord& f, const CueConfig& cfg) {
  std::vector<Point> out;
  if (!f.skin_superpixels) return out;
  for (const auto& s : f.skin_superpixels->superpixels)
    if (s.skin_fraction > cfg.skin_fraction) out.push_back(s.centroid);
  return out;
}

std::vector<Point> frame_hands(const FrameRecord& f, const CueConfig& cfg) {
  if (!f.hand_centroids.empty()) return f.hand_centroids;
  return detect_hands(f, cfg);
}

double hand_distance(const Point& centroid, const std::vector<Point>& hands, double frame_diagonal) {
  if (hands.empty()) return frame_diagonal;
  double best = std::numeric_limits<double>::infinity();
  for (const Point& h : hands) best = std::min(best, (h - centroid).norm());
  return best;
}

double gaze_distance(const Point& centroid, int frame_width, int frame_height) {
  return (centroid - Point(frame_width / 2.0, frame_height / 2.0)).norm();
}

double motion_distinctness(const RegionRecord& r) {
  if (!r.region_flow_hist || !r.surround_flow_hist) return 0.0;
  return chi_square(*r.region_flow_hist, *r.surround_flow_hist);
}

double face_overlap(const Box& region, const std::vector<Box>& faces) {
  return max_iou(region, faces);
}

CueTable extract_cues(const VideoBundle& b, const CueConfig& cfg) {
  cfg.check();
  CueTable t;
  const int F = static_cast<int>(b.frames.size());
  t.frame_offset.reserve(static_cast<std::size_t>(F) + 1);
  for (const FrameRecord& f : b.frames) {
    t.frame_offset.push_back(t.rows());
    for (const RegionRecord& r : f.regions) t.keys.push_back({f.index, r.region_id});
  }
  t.frame_offset.push_back(t.rows());
  t.values.resize(t.rows(), kCueCount);

  const double fps = b.fps_effective();
  parallel_for(static_cast<std::size_t>(F), [&](std::size_t fi) {
    const FrameRecord& f = b.frames[fi];
    const auto window = frequency_window(static_cast<int>(fi), F, fps, cfg);
    const auto hands = frame_hands(f, cfg);
    Eigen::Index row = t.frame_offset[fi];
    for (const RegionRecord& r : f.regions) {
      CueVector x;
      x[kHandDist] = hand_distance(r.centroid, hands, b.frame_diagonal());
      x[kGazeDist] = gaze_distance(r.centroid, b.frame_width, b.frame_height);
      x[kFreqRegion] = region_frequency(r, b, window, cfg);
      x[kFreqPoint] = point_frequency(r, f, b, window, cfg);
      x[kObjectness] = r.objectness;
      x[kMotionDistinct] = motion_distinctness(r);
      x[kFaceOverlap] = face_overlap(r.bbox, f.face_boxes);
      x[kSize] = r.area;
      x[kCentroidX] = r.centroid.x();
      x[kCentroidY] = r.centroid.y();
      const Point c = r.bbox.center();
      x[kBboxCx] = c.x();
      x[kBboxCy] = c.y();
      x[kBboxW] = r.bbox.w;
      x[kBboxH] = r.bbox.h;
      t.values.row(row++) = x.transpose();
    }
  });
  return t;
}

void write_cue_table(const CueTable& t, const std::string& video_id, std::ostream& out) {
  out << "video_id\tframe\tregion_id";
  for (auto name : kCueNames) out << '\t' << name;
  out << '\n';
  const auto old_precision = out.precision(17);
  for (Eigen::Index i = 0; i < t.rows(); ++i) {
    const auto& k = t.keys[static_cast<std::size_t>(i)];
    out << video_id << '\t' << k.frame << '\t' << k.region_id;
    for (int c = 0; c < kCueCount; ++c) out << '\t' << t.values(i, c);
    out << '\n';
  }
  out.precision(old_precision);
}

}  // namespace egosum
