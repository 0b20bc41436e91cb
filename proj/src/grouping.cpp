#include "egosum/grouping.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace egosum {

RegionAffinity build_affinity(const std::vector<Candidate>& candidates) {
  const Eigen::Index n = static_cast<Eigen::Index>(candidates.size());
  RegionAffinity a;
  a.member_refs.reserve(candidates.size());
  for (const auto& c : candidates) a.member_refs.push_back(c.key);

  Eigen::MatrixXd chi2 = Eigen::MatrixXd::Zero(n, n);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = chi_square(*candidates[static_cast<std::size_t>(i)].color_hist,
                                  *candidates[static_cast<std::size_t>(j)].color_hist);
      chi2(i, j) = chi2(j, i) = v;
      sum += v;
    }
  a.gamma = n > 1 ? sum / (static_cast<double>(n) * static_cast<double>(n - 1) / 2.0) : 1.0;
  // All-identical candidates: every chi-square is zero and so is gamma.
  const double scale = a.gamma > 0 ? 1.0 / a.gamma : 0.0;
  a.k = (-scale * chi2).array().exp().matrix();
  return a;
}

Eigen::VectorXd leading_eigenvector(const Eigen::MatrixXd& a, int max_iterations, double tolerance) {
  const Eigen::Index n = a.rows();
  if (n == 0) return {};
  // Start from the column of the strongest row so degenerate spectra (e.g.
  // disconnected identical blocks) resolve to one component.
  Eigen::Index start = 0;
  a.rowwise().sum().maxCoeff(&start);
  Eigen::VectorXd v = a.col(start);
  if (v.norm() == 0) v = Eigen::VectorXd::Unit(n, start);
  v.normalize();
  for (int it = 0; it < max_iterations; ++it) {
    Eigen::VectorXd w = a * v;
    const double norm = w.norm();
    if (norm == 0) break;
    w /= norm;
    const double change = (w - v).norm();
    v = std::move(w);
    if (change < tolerance) break;
  }
  Eigen::Index peak = 0;
  v.cwiseAbs().maxCoeff(&peak);
  if (v[peak] < 0) v = -v;
  return v;
}

std::vector<std::vector<int>> factorize_clusters(const RegionAffinity& a, const GroupingConfig& cfg) {
  std::vector<std::vector<int>> out;
  std::vector<int> remaining(static_cast<std::size_t>(a.k.rows()));
  std::iota(remaining.begin(), remaining.end(), 0);

  while (!remaining.empty() && static_cast<int>(out.size()) < cfg.max_clusters) {
    const Eigen::Index m = static_cast<Eigen::Index>(remaining.size());
    Eigen::MatrixXd sub(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < m; ++j)
        sub(i, j) = a.k(remaining[static_cast<std::size_t>(i)], remaining[static_cast<std::size_t>(j)]);
    if (sub.mean() < cfg.mass_floor) break;

    const Eigen::VectorXd v = leading_eigenvector(sub, cfg.power_iterations, cfg.power_tolerance);
    Eigen::Index anchor = 0;
    const double cut = cfg.membership_fraction * v.maxCoeff(&anchor);
    // Cross-object affinities sit near exp(-1) under the mean-chi2 scale, so
    // the eigenvector alone cannot split equal-sized components; members must
    // also be inliers of the component's anchor.
    std::vector<int> cluster, rest;
    for (Eigen::Index i = 0; i < m; ++i) {
      const bool member = v[i] >= cut && sub(i, anchor) >= cfg.anchor_affinity;
      (member ? cluster : rest).push_back(remaining[static_cast<std::size_t>(i)]);
    }
    out.push_back(std::move(cluster));
    remaining = std::move(rest);
  }
  return out;
}

namespace {

double mean_importance(const std::vector<int>& members, const std::vector<Candidate>& candidates) {
  double s = 0.0;
  for (int i : members) s += candidates[static_cast<std::size_t>(i)].importance;
  return s / static_cast<double>(members.size());
}

double cross_affinity(const std::vector<int>& x, const std::vector<int>& y, const Eigen::MatrixXd& k) {
  double s = 0.0;
  for (int i : x)
    for (int j : y) s += k(i, j);
  return s / (static_cast<double>(x.size()) * static_cast<double>(y.size()));
}

}  // namespace

std::vector<ObjectCluster> prune_redundant(const std::vector<std::vector<int>>& clusters,
                                           const RegionAffinity& a,
                                           const std::vector<Candidate>& candidates,
                                           const GroupingConfig& cfg) {
  std::vector<ObjectCluster> sorted;
  for (const auto& c : clusters) {
    if (c.empty()) continue;
    sorted.push_back({c, mean_importance(c, candidates), -1});
  }
  std::stable_sort(sorted.begin(), sorted.end(), [](const ObjectCluster& x, const ObjectCluster& y) {
    return x.avg_importance > y.avg_importance;
  });

  std::vector<ObjectCluster> kept;
  for (auto& c : sorted) {
    const bool redundant = std::any_of(kept.begin(), kept.end(), [&](const ObjectCluster& k) {
      return cross_affinity(c.members, k.members, a.k) >= cfg.redundancy;
    });
    if (!redundant) kept.push_back(std::move(c));
  }
  return kept;
}

void select_representatives(std::vector<ObjectCluster>& clusters,
                            const std::vector<Candidate>& candidates) {
  for (auto& c : clusters) {
    if (c.members.empty()) throw std::invalid_argument("select_representatives: empty cluster");
    int best = c.members.front();
    for (int i : c.members) {
      const Candidate& x = candidates[static_cast<std::size_t>(i)];
      const Candidate& b = candidates[static_cast<std::size_t>(best)];
      if (x.importance > b.importance ||
          (x.importance == b.importance && x.key < b.key))
        best = i;
    }
    c.representative = best;
  }
}

std::vector<ObjectCluster> group_event(std::vector<Candidate>& candidates, const GroupingConfig& cfg) {
  if (candidates.empty()) return {};
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& x, const Candidate& y) { return x.importance > y.importance; });
  if (static_cast<int>(candidates.size()) > cfg.max_candidates)
    candidates.resize(static_cast<std::size_t>(cfg.max_candidates));

  const RegionAffinity a = build_affinity(candidates);
  auto clusters = prune_redundant(factorize_clusters(a, cfg), a, candidates, cfg);
  select_representatives(clusters, candidates);
  return clusters;
}

}  // namespace egosum
