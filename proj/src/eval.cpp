#include "egosum/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

namespace egosum {

std::vector<LabeledScore> label_regions(const std::vector<ScoredRegion>& predictions,
                                        const std::vector<GtRegion>& gt) {
  std::vector<LabeledScore> out;
  out.reserve(predictions.size());
  for (const auto& p : predictions) {
    double best = 0.0;
    for (const auto& g : gt)
      if (g.frame_index == p.frame) best = std::max(best, iou(p.bbox, g.bbox));
    out.push_back({p.score, best > 0.5});
  }
  return out;
}

PrCurve pr_curve(const std::vector<LabeledScore>& labeled) {
  const auto positives = std::count_if(labeled.begin(), labeled.end(),
                                       [](const LabeledScore& l) { return l.positive; });
  if (positives == 0) throw std::invalid_argument("pr_curve: no positive examples");

  std::vector<std::size_t> order(labeled.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return labeled[a].score > labeled[b].score;
  });

  PrCurve c;
  double tp = 0, fp = 0, prev_recall = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double s = labeled[order[i]].score;
    for (; i < order.size() && labeled[order[i]].score == s; ++i)
      (labeled[order[i]].positive ? tp : fp) += 1;
    const PrPoint p{tp / static_cast<double>(positives), tp / (tp + fp)};
    c.average_precision += (p.recall - prev_recall) * p.precision;
    prev_recall = p.recall;
    c.points.push_back(p);
  }
  return c;
}

std::string main_label(const VideoBundle& b, int frame) {
  const GtRegion* best = nullptr;
  for (const GtRegion* g : b.ground_truth_for(frame))
    if (!best || g->bbox.area() > best->bbox.area()) best = g;
  return best ? best->object_label : std::string();
}

double object_recall(const std::vector<int>& frames, const VideoBundle& b) {
  std::set<std::string> all;
  for (const auto& g : b.ground_truth) all.insert(g.object_label);
  if (all.empty()) throw std::invalid_argument("object_recall: no ground truth");
  std::set<std::string> covered;
  for (int f : frames)
    if (auto label = main_label(b, f); !label.empty()) covered.insert(label);
  return static_cast<double>(covered.size()) / static_cast<double>(all.size());
}

std::map<std::string, double> prominence(const std::vector<int>& frames, const VideoBundle& b) {
  const Point center(b.frame_width / 2.0, b.frame_height / 2.0);
  std::map<std::string, double> out;
  for (int f : frames) {
    const std::string label = main_label(b, f);
    if (label.empty()) continue;
    double best = std::numeric_limits<double>::infinity();
    for (const GtRegion* g : b.ground_truth_for(f))
      if (g->object_label == label) best = std::min(best, (g->bbox.center() - center).norm());
    auto [it, inserted] = out.emplace(label, best);
    if (!inserted) it->second = std::min(it->second, best);
  }
  return out;
}

double mean_prominence(const std::map<std::string, double>& p) {
  if (p.empty()) return std::numeric_limits<double>::quiet_NaN();
  double s = 0;
  for (const auto& [label, d] : p) s += d;
  return s / static_cast<double>(p.size());
}

namespace {

std::vector<int> spread(int count, int n) {
  std::vector<int> out;
  if (n == 1) return {0};
  for (int i = 0; i < n; ++i)
    out.push_back(static_cast<int>(std::lround(static_cast<double>(i) * (count - 1) / (n - 1))));
  return out;
}

}  // namespace

std::vector<int> uniform_baseline(int n_frames, int n) {
  if (n < 1 || n > n_frames) throw std::invalid_argument("uniform_baseline: n out of range");
  return spread(n_frames, n);
}

std::vector<int> event_adaptive_baseline(const std::vector<Event>& events, int n) {
  int total = 0;
  for (const auto& e : events) total += static_cast<int>(e.member_frames.size());
  if (n < 1 || n > total) throw std::invalid_argument("event_adaptive_baseline: n out of range");

  std::vector<int> alloc(events.size(), 0);
  for (int given = 0; given < n;) {
    for (std::size_t e = 0; e < events.size() && given < n; ++e)
      if (alloc[e] < static_cast<int>(events[e].member_frames.size())) {
        ++alloc[e];
        ++given;
      }
  }
  std::vector<int> out;
  for (std::size_t e = 0; e < events.size(); ++e) {
    if (alloc[e] == 0) continue;
    const auto& members = events[e].member_frames;
    for (int pos : spread(static_cast<int>(members.size()), alloc[e]))
      out.push_back(members[static_cast<std::size_t>(pos)]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace egosum
