#include "egosum/bundle.hpp"

#include "json_util.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace egosum {

using detail::FieldError;
using detail::json;

namespace {

constexpr const char* kFormat = "egosum-bundle";
constexpr int kVersion = 1;

RegionRecord region_from_json(const json& j, const std::string& path) {
  using namespace detail;
  RegionRecord r;
  r.region_id = get_int(field(j, "id", path), path + ".id");
  r.area = get_number(field(j, "area", path), path + ".area");
  r.centroid = point_from_json(field(j, "centroid", path), path + ".centroid");
  r.bbox = box_from_json(field(j, "bbox", path), path + ".bbox");
  r.color_hist = histogram_from_json(field(j, "color_hist", path), kColorBins, path + ".color_hist");
  r.objectness = get_number(field(j, "objectness", path), path + ".objectness");
  if (auto it = j.find("flow"); it != j.end() && !it->is_null()) {
    const std::string fp = path + ".flow";
    r.region_flow_hist = histogram_from_json(field(*it, "region", fp), kFlowBins, fp + ".region");
    r.surround_flow_hist =
        histogram_from_json(field(*it, "surround", fp), kFlowBins, fp + ".surround");
  }
  if (auto it = j.find("points"); it != j.end()) {
    get_array(*it, path + ".points");
    for (std::size_t i = 0; i < it->size(); ++i)
      r.member_point_ids.push_back(
          get_int((*it)[i], path + ".points[" + std::to_string(i) + "]"));
  }
  return r;
}

json region_to_json(const RegionRecord& r) {
  using namespace detail;
  json j;
  j["id"] = r.region_id;
  j["area"] = r.area;
  j["centroid"] = point_to_json(r.centroid);
  j["bbox"] = box_to_json(r.bbox);
  j["color_hist"] = histogram_to_json(r.color_hist);
  j["objectness"] = r.objectness;
  if (r.region_flow_hist && r.surround_flow_hist)
    j["flow"] = {{"region", histogram_to_json(*r.region_flow_hist)},
                 {"surround", histogram_to_json(*r.surround_flow_hist)}};
  j["points"] = r.member_point_ids;
  return j;
}

FrameRecord frame_from_json(const json& j, int descriptor_dim, std::vector<GtRegion>& gt) {
  using namespace detail;
  const std::string path = "frame";
  FrameRecord f;
  f.index = get_int(field(j, "index", path), path + ".index");
  f.global_color_hist =
      histogram_from_json(field(j, "color_hist", path), kColorBins, path + ".color_hist");

  const json& regions = get_array(field(j, "regions", path), path + ".regions");
  for (std::size_t i = 0; i < regions.size(); ++i)
    f.regions.push_back(region_from_json(regions[i], path + ".regions[" + std::to_string(i) + "]"));

  if (auto it = j.find("faces"); it != j.end()) {
    get_array(*it, path + ".faces");
    for (std::size_t i = 0; i < it->size(); ++i)
      f.face_boxes.push_back(box_from_json((*it)[i], path + ".faces[" + std::to_string(i) + "]"));
  }
  if (auto it = j.find("hands"); it != j.end()) {
    get_array(*it, path + ".hands");
    for (std::size_t i = 0; i < it->size(); ++i)
      f.hand_centroids.push_back(
          point_from_json((*it)[i], path + ".hands[" + std::to_string(i) + "]"));
  }
  if (auto it = j.find("skin_superpixels"); it != j.end() && !it->is_null()) {
    const std::string sp = path + ".skin_superpixels";
    SkinSuperpixels s;
    if (auto lm = it->find("label_map"); lm != it->end()) s.label_map = get_string(*lm, sp + ".label_map");
    const json& list = get_array(field(*it, "superpixels", sp), sp + ".superpixels");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string ep = sp + ".superpixels[" + std::to_string(i) + "]";
      s.superpixels.push_back({point_from_json(field(list[i], "centroid", ep), ep + ".centroid"),
                               get_number(field(list[i], "skin_fraction", ep), ep + ".skin_fraction")});
    }
    f.skin_superpixels = std::move(s);
  }

  const json* points = nullptr;
  if (auto it = j.find("points"); it != j.end()) points = &get_array(*it, path + ".points");
  const Eigen::Index n = points ? static_cast<Eigen::Index>(points->size()) : 0;
  f.point_xy.resize(2, n);
  f.descriptors.resize(descriptor_dim, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::string pp = path + ".points[" + std::to_string(i) + "]";
    const json& p = (*points)[static_cast<std::size_t>(i)];
    f.point_xy.col(i) = point_from_json(field(p, "xy", pp), pp + ".xy");
    const json& d = get_array(field(p, "desc", pp), pp + ".desc");
    if (static_cast<int>(d.size()) != descriptor_dim)
      throw FieldError(pp + ".desc", "descriptor dimension " + std::to_string(d.size()) +
                                         " != " + std::to_string(descriptor_dim));
    for (int k = 0; k < descriptor_dim; ++k)
      f.descriptors(k, i) = get_number(d[static_cast<std::size_t>(k)], pp + ".desc");
  }

  if (auto it = j.find("ground_truth"); it != j.end()) {
    get_array(*it, path + ".ground_truth");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string gp = path + ".ground_truth[" + std::to_string(i) + "]";
      GtRegion g;
      g.frame_index = f.index;
      g.bbox = box_from_json(field((*it)[i], "bbox", gp), gp + ".bbox");
      g.object_label = get_string(field((*it)[i], "label", gp), gp + ".label");
      gt.push_back(std::move(g));
    }
  }
  return f;
}

json frame_to_json(const FrameRecord& f, const VideoBundle& b) {
  using namespace detail;
  json j;
  j["index"] = f.index;
  j["color_hist"] = histogram_to_json(f.global_color_hist);
  json regions = json::array();
  for (const auto& r : f.regions) regions.push_back(region_to_json(r));
  j["regions"] = std::move(regions);
  json faces = json::array();
  for (const auto& box : f.face_boxes) faces.push_back(box_to_json(box));
  j["faces"] = std::move(faces);
  json hands = json::array();
  for (const auto& h : f.hand_centroids) hands.push_back(point_to_json(h));
  j["hands"] = std::move(hands);
  if (f.skin_superpixels) {
    json list = json::array();
    for (const auto& s : f.skin_superpixels->superpixels)
      list.push_back({{"centroid", point_to_json(s.centroid)}, {"skin_fraction", s.skin_fraction}});
    j["skin_superpixels"] = {{"label_map", f.skin_superpixels->label_map}, {"superpixels", list}};
  }
  json points = json::array();
  for (Eigen::Index i = 0; i < f.point_count(); ++i) {
    json desc = json::array();
    for (Eigen::Index k = 0; k < f.descriptors.rows(); ++k) desc.push_back(f.descriptors(k, i));
    points.push_back({{"xy", point_to_json(f.point_xy.col(i))}, {"desc", std::move(desc)}});
  }
  j["points"] = std::move(points);
  json gt = json::array();
  for (const GtRegion* g : b.ground_truth_for(f.index))
    gt.push_back({{"label", g->object_label}, {"bbox", box_to_json(g->bbox)}});
  j["ground_truth"] = std::move(gt);
  return j;
}

bool same_optional_hist(const std::optional<Histogram>& a, const std::optional<Histogram>& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || same_histogram(*a, *b);
}

bool finite_nonnegative(const Histogram& h) {
  for (Histogram::InnerIterator it(h); it; ++it)
    if (!(it.value() >= 0)) return false;
  return true;
}

}  // namespace

std::vector<const GtRegion*> VideoBundle::ground_truth_for(int frame_index) const {
  std::vector<const GtRegion*> out;
  for (const auto& g : ground_truth)
    if (g.frame_index == frame_index) out.push_back(&g);
  return out;
}

std::string Violation::to_string() const {
  return "frame " + std::to_string(frame) + ", " + entity + ": " + rule;
}

VideoBundle parse_bundle(std::istream& in) {
  using namespace detail;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line) && line.find_first_not_of(" \t\r") == std::string::npos) ++line_no;
  if (!in && line.empty()) throw BundleError("empty bundle", "manifest", -1);

  VideoBundle b;
  try {
    const json m = json::parse(line);
    const std::string format = get_string(field(m, "format", "manifest"), "manifest.format");
    if (format != kFormat) throw FieldError("manifest.format", "unknown format '" + format + "'");
    if (get_int(field(m, "version", "manifest"), "manifest.version") != kVersion)
      throw FieldError("manifest.version", "unsupported version");
    b.video_id = get_string(field(m, "video_id", "manifest"), "manifest.video_id");
    b.source_fps = get_number(field(m, "fps", "manifest"), "manifest.fps");
    if (auto it = m.find("stride"); it != m.end()) b.stride = get_int(*it, "manifest.stride");
    b.frame_width = get_int(field(m, "frame_width", "manifest"), "manifest.frame_width");
    b.frame_height = get_int(field(m, "frame_height", "manifest"), "manifest.frame_height");
    b.descriptor_dim = get_int(field(m, "descriptor_dim", "manifest"), "manifest.descriptor_dim");
    if (auto it = m.find("border_policy"); it != m.end())
      b.border_policy = get_string(*it, "manifest.border_policy");
    if (auto it = m.find("color_bins"); it != m.end() && get_int(*it, "manifest.color_bins") != kColorBins)
      throw FieldError("manifest.color_bins", "expected " + std::to_string(kColorBins));
    if (auto it = m.find("flow_bins"); it != m.end() && get_int(*it, "manifest.flow_bins") != kFlowBins)
      throw FieldError("manifest.flow_bins", "expected " + std::to_string(kFlowBins));
    if (!(b.source_fps > 0)) throw FieldError("manifest.fps", "must be > 0");
    if (b.stride < 1) throw FieldError("manifest.stride", "must be >= 1");
    if (b.frame_width <= 0 || b.frame_height <= 0)
      throw FieldError("manifest.frame_width", "frame dimensions must be > 0");
    if (b.descriptor_dim < 0) throw FieldError("manifest.descriptor_dim", "must be >= 0");
  } catch (const FieldError& e) {
    throw BundleError(e.what(), e.path, -1);
  } catch (const json::exception& e) {
    throw BundleError(std::string("manifest: ") + e.what(), "manifest", -1);
  }

  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const int ordinal = static_cast<int>(b.frames.size());
    try {
      b.frames.push_back(frame_from_json(json::parse(line), b.descriptor_dim, b.ground_truth));
    } catch (const FieldError& e) {
      throw BundleError("frame record " + std::to_string(ordinal) + ": " + e.what(), e.path, ordinal);
    } catch (const json::exception& e) {
      throw BundleError("frame record " + std::to_string(ordinal) + ": " + e.what(), "frame",
                        ordinal);
    }
  }
  return b;
}

VideoBundle read_bundle(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw BundleError("cannot open bundle '" + path.string() + "'", "", -1);
  return parse_bundle(in);
}

VideoBundle load_bundle(const std::filesystem::path& path, int subsample_stride) {
  if (subsample_stride < 1) throw std::invalid_argument("subsample stride must be >= 1");
  VideoBundle raw = read_bundle(path);
  if (auto v = validate_bundle(raw); !v.empty())
    throw BundleError("invalid bundle: " + v.front().to_string(), v.front().entity, v.front().frame);
  return subsample(raw, subsample_stride);
}

void write_bundle(const VideoBundle& b, std::ostream& out) {
  json m;
  m["format"] = kFormat;
  m["version"] = kVersion;
  m["video_id"] = b.video_id;
  m["fps"] = b.source_fps;
  m["stride"] = b.stride;
  m["frame_width"] = b.frame_width;
  m["frame_height"] = b.frame_height;
  m["descriptor_dim"] = b.descriptor_dim;
  m["color_bins"] = kColorBins;
  m["flow_bins"] = kFlowBins;
  m["border_policy"] = b.border_policy;
  m["n_frames"] = b.frames.size();
  out << m.dump() << '\n';
  for (const auto& f : b.frames) out << frame_to_json(f, b).dump() << '\n';
}

void save_bundle(const VideoBundle& b, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw BundleError("cannot write bundle '" + path.string() + "'", "", -1);
  write_bundle(b, out);
}

std::vector<Violation> validate_bundle(const VideoBundle& b) {
  std::vector<Violation> out;
  const double W = b.frame_width, H = b.frame_height;
  auto in_frame = [&](const Point& p) {
    return p.x() >= 0 && p.x() < W && p.y() >= 0 && p.y() < H;
  };
  auto box_in_frame = [&](const Box& r) {
    return r.w > 0 && r.h > 0 && r.x >= 0 && r.y >= 0 && r.x + r.w <= W && r.y + r.h <= H;
  };

  for (std::size_t fi = 0; fi < b.frames.size(); ++fi) {
    const FrameRecord& f = b.frames[fi];
    auto report = [&](std::string entity, std::string rule) {
      out.push_back({f.index, std::move(entity), std::move(rule)});
    };
    if (f.index != static_cast<int>(fi)) report("frame", "contiguous-frames");
    if (!finite_nonnegative(f.global_color_hist)) report("frame", "nonnegative-hist");
    else if (mass(f.global_color_hist) > b.pixel_count()) report("frame", "hist-mass");

    if (f.descriptors.rows() != b.descriptor_dim || f.descriptors.cols() != f.point_xy.cols())
      report("frame", "descriptor-dim");
    for (Eigen::Index i = 0; i < f.point_count(); ++i)
      if (!in_frame(f.point_xy.col(i))) report("point " + std::to_string(i), "point-in-frame");
    for (std::size_t i = 0; i < f.hand_centroids.size(); ++i)
      if (!in_frame(f.hand_centroids[i])) report("hand " + std::to_string(i), "point-in-frame");
    for (std::size_t i = 0; i < f.face_boxes.size(); ++i)
      if (!box_in_frame(f.face_boxes[i])) report("face " + std::to_string(i), "bbox-in-frame");
    if (f.skin_superpixels) {
      for (std::size_t i = 0; i < f.skin_superpixels->superpixels.size(); ++i) {
        const auto& s = f.skin_superpixels->superpixels[i];
        if (!in_frame(s.centroid)) report("superpixel " + std::to_string(i), "point-in-frame");
        if (!(s.skin_fraction >= 0 && s.skin_fraction <= 1))
          report("superpixel " + std::to_string(i), "skin-fraction-range");
      }
    }

    std::set<int> ids;
    for (const RegionRecord& r : f.regions) {
      const std::string who = "region " + std::to_string(r.region_id);
      if (!ids.insert(r.region_id).second) report(who, "unique-region-id");
      if (!(r.area > 0)) report(who, "area-positive");
      if (!box_in_frame(r.bbox)) report(who, "bbox-in-frame");
      if (!r.bbox.contains(r.centroid)) report(who, "centroid-in-bbox");
      if (!finite_nonnegative(r.color_hist)) report(who, "nonnegative-hist");
      else if (mass(r.color_hist) > b.pixel_count()) report(who, "hist-mass");
      if ((r.region_flow_hist && !finite_nonnegative(*r.region_flow_hist)) ||
          (r.surround_flow_hist && !finite_nonnegative(*r.surround_flow_hist)))
        report(who, "nonnegative-hist");
      for (int pid : r.member_point_ids)
        if (pid < 0 || pid >= f.point_count()) {
          report(who, "member-point-range");
          break;
        }
    }
  }

  for (const GtRegion& g : b.ground_truth) {
    if (!box_in_frame(g.bbox)) out.push_back({g.frame_index, "gt " + g.object_label, "bbox-in-frame"});
    if (g.object_label.empty()) out.push_back({g.frame_index, "gt", "gt-label"});
  }
  return out;
}

VideoBundle subsample(const VideoBundle& b, int stride) {
  if (stride < 1) throw std::invalid_argument("subsample stride must be >= 1");
  VideoBundle out;
  out.video_id = b.video_id;
  out.source_fps = b.source_fps;
  out.stride = b.stride * stride;
  out.frame_width = b.frame_width;
  out.frame_height = b.frame_height;
  out.descriptor_dim = b.descriptor_dim;
  out.border_policy = b.border_policy;
  for (std::size_t i = 0; i < b.frames.size(); i += static_cast<std::size_t>(stride)) {
    FrameRecord f = b.frames[i];
    const int old_index = f.index;
    f.index = static_cast<int>(out.frames.size());
    for (const GtRegion* g : b.ground_truth_for(old_index)) {
      GtRegion copy = *g;
      copy.frame_index = f.index;
      out.ground_truth.push_back(std::move(copy));
    }
    out.frames.push_back(std::move(f));
  }
  return out;
}

bool same_bundle(const VideoBundle& a, const VideoBundle& b) {
  if (a.video_id != b.video_id || a.source_fps != b.source_fps || a.stride != b.stride ||
      a.frame_width != b.frame_width || a.frame_height != b.frame_height ||
      a.descriptor_dim != b.descriptor_dim || a.border_policy != b.border_policy ||
      a.frames.size() != b.frames.size() || a.ground_truth.size() != b.ground_truth.size())
    return false;
  for (std::size_t i = 0; i < a.ground_truth.size(); ++i) {
    const auto &x = a.ground_truth[i], &y = b.ground_truth[i];
    if (x.frame_index != y.frame_index || !(x.bbox == y.bbox) || x.object_label != y.object_label)
      return false;
  }
  for (std::size_t i = 0; i < a.frames.size(); ++i) {
    const FrameRecord &f = a.frames[i], &g = b.frames[i];
    if (f.index != g.index || !same_histogram(f.global_color_hist, g.global_color_hist) ||
        f.face_boxes != g.face_boxes || f.hand_centroids != g.hand_centroids ||
        f.point_xy != g.point_xy || f.descriptors.rows() != g.descriptors.rows() ||
        f.descriptors != g.descriptors || f.regions.size() != g.regions.size() ||
        f.skin_superpixels.has_value() != g.skin_superpixels.has_value())
      return false;
    if (f.skin_superpixels) {
      const auto &s = *f.skin_superpixels, &t = *g.skin_superpixels;
      if (s.label_map != t.label_map || s.superpixels.size() != t.superpixels.size()) return false;
      for (std::size_t k = 0; k < s.superpixels.size(); ++k)
        if (s.superpixels[k].centroid != t.superpixels[k].centroid ||
            s.superpixels[k].skin_fraction != t.superpixels[k].skin_fraction)
          return false;
    }
    for (std::size_t k = 0; k < f.regions.size(); ++k) {
      const RegionRecord &r = f.regions[k], &q = g.regions[k];
      if (r.region_id != q.region_id || r.area != q.area || r.centroid != q.centroid ||
          !(r.bbox == q.bbox) || !same_histogram(r.color_hist, q.color_hist) ||
          r.objectness != q.objectness || !same_optional_hist(r.region_flow_hist, q.region_flow_hist) ||
          !same_optional_hist(r.surround_flow_hist, q.surround_flow_hist) ||
          r.member_point_ids != q.member_point_ids)
        return false;
    }
  }
  return true;
}

}  // namespace egosum
