#include "egosum/events.hpp"

#include "egosum/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

namespace egosum {

double temporal_weight(int m, int n, int t) {
  return std::max(0, t - std::abs(m - n)) / static_cast<double>(t);
}

double frame_distance(int m, int n, double chi2, int t, double omega) {
  if (t <= 0) throw std::invalid_argument("frame_distance: t must be > 0");
  const double ratio = omega > 0 ? chi2 / omega : 0.0;
  return 1.0 - temporal_weight(m, n, t) * std::exp(-ratio);
}

FrameDistanceMatrix build_distance_matrix(const VideoBundle& b, int t_window) {
  const Eigen::Index F = static_cast<Eigen::Index>(b.frames.size());
  if (F < 2) throw std::invalid_argument("build_distance_matrix: need at least two frames");
  if (t_window <= 0) throw std::invalid_argument("build_distance_matrix: t must be > 0");

  FrameDistanceMatrix dm;
  dm.t_window = t_window;
  dm.chi2 = Eigen::MatrixXd::Zero(F, F);
  parallel_for(static_cast<std::size_t>(F), [&](std::size_t m) {
    const auto& hm = b.frames[m].global_color_hist;
    for (Eigen::Index n = static_cast<Eigen::Index>(m) + 1; n < F; ++n)
      dm.chi2(static_cast<Eigen::Index>(m), n) =
          chi_square(hm, b.frames[static_cast<std::size_t>(n)].global_color_hist);
  });
  dm.chi2.triangularView<Eigen::StrictlyLower>() = dm.chi2.transpose();

  const double pairs = static_cast<double>(F) * static_cast<double>(F - 1) / 2.0;
  dm.omega = dm.chi2.sum() / 2.0 / pairs;  // symmetric, zero diagonal

  dm.d.resize(F, F);
  for (Eigen::Index m = 0; m < F; ++m) {
    dm.d(m, m) = 0.0;
    for (Eigen::Index n = m + 1; n < F; ++n) {
      const double v = frame_distance(static_cast<int>(m), static_cast<int>(n), dm.chi2(m, n),
                                      t_window, dm.omega);
      dm.d(m, n) = v;
      dm.d(n, m) = v;
    }
  }
  return dm;
}

namespace {

// Mean and population standard deviation of the strict upper triangle.
std::pair<double, double> upper_stats(const Eigen::MatrixXd& a) {
  const Eigen::Index F = a.rows();
  double sum = 0, sq = 0, count = 0;
  for (Eigen::Index m = 0; m < F; ++m)
    for (Eigen::Index n = m + 1; n < F; ++n) {
      sum += a(m, n);
      count += 1;
    }
  const double mean = count > 0 ? sum / count : 0.0;
  for (Eigen::Index m = 0; m < F; ++m)
    for (Eigen::Index n = m + 1; n < F; ++n) sq += (a(m, n) - mean) * (a(m, n) - mean);
  return {mean, count > 0 ? std::sqrt(sq / count) : 0.0};
}

}  // namespace

double stopping_threshold(const FrameDistanceMatrix& dm, const EventConfig& cfg) {
  if (cfg.threshold_override) return *cfg.threshold_override;
  if (cfg.threshold_space == ThresholdSpace::Distance) {
    const auto [mean, sd] = upper_stats(dm.d);
    return mean + 2.0 * sd;
  }
  // Omega + 2 sigma in chi-square space, mapped through exp(-x / Omega) at w = 1.
  if (!(dm.omega > 0)) return 1.0;
  const auto [mean, sd] = upper_stats(dm.chi2);
  return 1.0 - std::exp(-(mean + 2.0 * sd) / dm.omega);
}

std::vector<Event> segment_events(const FrameDistanceMatrix& dm, const EventConfig& cfg) {
  const Eigen::Index F = dm.size();
  const double tau = stopping_threshold(dm, cfg);

  struct Cluster {
    std::vector<int> members;
    int start;
    int id;
  };
  std::vector<Cluster> clusters;
  clusters.reserve(static_cast<std::size_t>(F));
  for (int i = 0; i < F; ++i) clusters.push_back({{i}, i, i});

  // link(a, b) = max member distance, kept for the active cluster slots.
  Eigen::MatrixXd link = dm.d;
  std::vector<bool> active(static_cast<std::size_t>(F), true);
  int next_id = static_cast<int>(F);

  auto before = [&](std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
    // Pair (a, b) vs (c, d): smaller start of the pair, then smaller cluster id.
    const int s1 = std::min(clusters[a].start, clusters[b].start);
    const int s2 = std::min(clusters[c].start, clusters[d].start);
    if (s1 != s2) return s1 < s2;
    return std::min(clusters[a].id, clusters[b].id) < std::min(clusters[c].id, clusters[d].id);
  };

  for (Eigen::Index remaining = F; remaining > 1; --remaining) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t ba = 0, bb = 0;
    for (std::size_t a = 0; a < clusters.size(); ++a) {
      if (!active[a]) continue;
      for (std::size_t b = a + 1; b < clusters.size(); ++b) {
        if (!active[b]) continue;
        const double v = link(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
        if (v < best || (v == best && before(a, b, ba, bb))) {
          best = v;
          ba = a;
          bb = b;
        }
      }
    }
    if (best > tau) break;

    auto& keep = clusters[ba];
    auto& gone = clusters[bb];
    keep.members.insert(keep.members.end(), gone.members.begin(), gone.members.end());
    std::sort(keep.members.begin(), keep.members.end());
    keep.start = keep.members.front();
    keep.id = next_id++;
    active[bb] = false;
    for (std::size_t c = 0; c < clusters.size(); ++c) {
      if (!active[c] || c == ba) continue;
      const auto ia = static_cast<Eigen::Index>(ba), ib = static_cast<Eigen::Index>(bb),
                 ic = static_cast<Eigen::Index>(c);
      const double v = std::max(link(ia, ic), link(ib, ic));
      link(ia, ic) = v;
      link(ic, ia) = v;
    }
  }

  std::vector<Event> events;
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    if (!active[c]) continue;
    Event e;
    e.member_frames = clusters[c].members;
    e.start = e.member_frames.front();
    e.end = e.member_frames.back();
    events.push_back(std::move(e));
  }
  std::sort(events.begin(), events.end(),
            [](const Event& a, const Event& b) { return a.start < b.start; });
  for (std::size_t i = 0; i < events.size(); ++i) events[i].event_id = static_cast<int>(i);
  return events;
}

std::vector<int> event_of_frame(const std::vector<Event>& events, int n_frames) {
  std::vector<int> out(static_cast<std::size_t>(n_frames), -1);
  for (const Event& e : events)
    for (int f : e.member_frames)
      if (f >= 0 && f < n_frames) out[static_cast<std::size_t>(f)] = e.event_id;
  return out;
}

}  // namespace egosum
