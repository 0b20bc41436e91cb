#pragma once

#include "egosum/geometry.hpp"
#include "egosum/histogram.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace egosum {

/// One superpixel's output from the upstream pixel skin classifier.
struct SkinSuperpixel {
  Point centroid = Point::Zero();
  double skin_fraction = 0.0;
};

struct SkinSuperpixels {
  std::string label_map;  // reference to the label map image, informational only
  std::vector<SkinSuperpixel> superpixels;
};

struct RegionRecord {
  int region_id = 0;
  double area = 0;
  Point centroid = Point::Zero();
  Box bbox;
  Histogram color_hist{kColorBins};
  double objectness = 0;
  std::optional<Histogram> region_flow_hist;
  std::optional<Histogram> surround_flow_hist;
  std::vector<int> member_point_ids;
};

/// Instance-labelled ground-truth geometry (bounding box).
struct GtRegion {
  int frame_index = 0;
  Box bbox;
  std::string object_label;
};

struct FrameRecord {
  int index = 0;
  Histogram global_color_hist{kColorBins};
  std::vector<RegionRecord> regions;
  std::vector<Box> face_boxes;
  std::vector<Point> hand_centroids;
  std::optional<SkinSuperpixels> skin_superpixels;
  Eigen::Matrix2Xd point_xy;     // one column per interest point
  Eigen::MatrixXd descriptors;   // descriptor_dim x n_points

  Eigen::Index point_count() const { return point_xy.cols(); }
};

struct VideoBundle {
  std::string video_id;
  double source_fps = 1.0;  // frame rate of the stored frames
  int stride = 1;           // cumulative subsampling applied since ingestion
  int frame_width = 0;
  int frame_height = 0;
  int descriptor_dim = 0;
  std::string border_policy = "clipped";
  std::vector<FrameRecord> frames;
  std::vector<GtRegion> ground_truth;

  double fps_effective() const { return source_fps / stride; }
  double frame_diagonal() const { return std::hypot(double(frame_width), double(frame_height)); }
  double pixel_count() const { return double(frame_width) * double(frame_height); }
  std::vector<const GtRegion*> ground_truth_for(int frame_index) const;
};

/// Schema or I/O failure while reading a bundle. `frame` is -1 for manifest errors.
class BundleError : public std::runtime_error {
 public:
  BundleError(const std::string& what, std::string field_path, int frame)
      : std::runtime_error(what), field_path_(std::move(field_path)), frame_(frame) {}
  const std::string& field_path() const { return field_path_; }
  int frame() const { return frame_; }

 private:
  std::string field_path_;
  int frame_;
};

struct Violation {
  int frame = -1;
  std::string entity;  // e.g. "region 4", "face 0", "frame"
  std::string rule;

  std::string to_string() const;
};

/// Parse a bundle file without checking data invariants beyond the schema.
VideoBundle read_bundle(const std::filesystem::path& path);
VideoBundle parse_bundle(std::istream& in);

/// Read, subsample, and validate. Throws BundleError naming the first violation.
VideoBundle load_bundle(const std::filesystem::path& path, int subsample_stride = 1);

void save_bundle(const VideoBundle& b, const std::filesystem::path& path);
void write_bundle(const VideoBundle& b, std::ostream& out);

std::vector<Violation> validate_bundle(const VideoBundle& b);

/// Keep every `stride`-th frame and re-index contiguously; GT follows its frame.
VideoBundle subsample(const VideoBundle& b, int stride);

bool same_bundle(const VideoBundle& a, const VideoBundle& b);

}  // namespace egosum
