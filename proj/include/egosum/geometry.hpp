#pragma once

#include <Eigen/Dense>

#include <algorithm>

namespace egosum {

using Point = Eigen::Vector2d;

/// Axis-aligned rectangle in pixels, (x, y) is the top-left corner.
struct Box {
  double x = 0, y = 0, w = 0, h = 0;

  double area() const { return w * h; }
  Point center() const { return {x + w / 2, y + h / 2}; }
  bool contains(const Point& p) const {
    return p.x() >= x && p.x() <= x + w && p.y() >= y && p.y() <= y + h;
  }
  friend bool operator==(const Box&, const Box&) = default;
};

inline double intersection_area(const Box& a, const Box& b) {
  const double ix = std::max(0.0, std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x));
  const double iy = std::max(0.0, std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y));
  return ix * iy;
}

/// |a ∩ b| / |a ∪ b|; 0 when both boxes are empty.
inline double iou(const Box& a, const Box& b) {
  const double inter = intersection_area(a, b);
  const double uni = a.area() + b.area() - inter;
  return uni > 0 ? inter / uni : 0.0;
}

/// Largest IoU of `r` against any box in `others`; 0 for an empty range.
template <typename Range>
double max_iou(const Box& r, const Range& others) {
  double best = 0.0;
  for (const Box& o : others) best = std::max(best, iou(r, o));
  return best;
}

}  // namespace egosum
