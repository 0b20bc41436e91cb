#pragma once

#include "egosum/bundle.hpp"
#include "egosum/log.hpp"
#include "egosum/rng.hpp"

#include <initializer_list>
#include <utility>

namespace fixture {

inline egosum::Histogram hist(int size, std::initializer_list<std::pair<int, double>> entries) {
  egosum::Histogram h(size);
  for (auto [bin, count] : entries) h.coeffRef(bin) = count;
  return h;
}

inline egosum::Histogram color(std::initializer_list<std::pair<int, double>> entries) {
  return hist(egosum::kColorBins, entries);
}

inline egosum::RegionRecord region(int id, egosum::Box box, egosum::Histogram h, double objectness = 0.5) {
  egosum::RegionRecord r;
  r.region_id = id;
  r.bbox = box;
  r.area = box.area();
  r.centroid = box.center();
  r.color_hist = std::move(h);
  r.objectness = objectness;
  return r;
}

/// A small valid bundle: 320x240, n frames, two regions each, a few points.
inline egosum::VideoBundle small_bundle(int n_frames, std::uint64_t seed = 3) {
  egosum::Rng rng(seed);
  egosum::VideoBundle b;
  b.video_id = "small";
  b.source_fps = 15;
  b.frame_width = 320;
  b.frame_height = 240;
  b.descriptor_dim = 8;
  for (int f = 0; f < n_frames; ++f) {
    egosum::FrameRecord fr;
    fr.index = f;
    fr.global_color_hist = color({{f % 7, 5000.0 + f}, {100, 200}});
    fr.regions.push_back(region(0, {10, 10, 50, 40}, color({{3, 1000}, {4, 500}}), 0.7));
    fr.regions.push_back(region(7, {100.5, 80, 60, 60}, color({{9, 2000.0 + f}}), 0.2));
    fr.regions[0].region_flow_hist = hist(egosum::kFlowBins, {{1, 10}});
    fr.regions[0].surround_flow_hist = hist(egosum::kFlowBins, {{70, 10}});
    fr.face_boxes.push_back({100, 80, 30, 30});
    if (f % 2 == 0) fr.hand_centroids.push_back({50.25, 200});
    fr.point_xy.resize(2, 3);
    fr.descriptors.resize(8, 3);
    for (int p = 0; p < 3; ++p) {
      fr.point_xy.col(p) = egosum::Point(20 + 10 * p, 20 + p);
      for (int k = 0; k < 8; ++k) fr.descriptors(k, p) = rng.normal();
    }
    fr.regions[0].member_point_ids = {0, 1, 2};
    b.frames.push_back(std::move(fr));
    if (f % 3 == 0) b.ground_truth.push_back({f, {10, 10, 50, 40}, "mug"});
  }
  return b;
}

struct QuietWarnings {
  QuietWarnings() { egosum::set_warnings_enabled(false); }
  ~QuietWarnings() { egosum::set_warnings_enabled(true); }
};

}  // namespace fixture
