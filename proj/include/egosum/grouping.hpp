#pragma once

#include "egosum/bundle.hpp"
#include "egosum/cues.hpp"

#include <Eigen/Dense>

#include <vector>

namespace egosum {

/// Candidate region within an event: location plus the pieces grouping needs.
struct Candidate {
  RegionKey key;
  const Histogram* color_hist = nullptr;
  double importance = 0.0;
};

struct RegionAffinity {
  Eigen::MatrixXd k;
  double gamma = 1.0;  // mean pairwise chi-square (1 for a single region)
  std::vector<RegionKey> member_refs;
};

struct ObjectCluster {
  std::vector<int> members;  // indices into the candidate list / affinity rows
  double avg_importance = 0.0;
  int representative = -1;   // candidate index
};

struct GroupingConfig {
  double membership_fraction = 0.5;  // v_i >= fraction * max(v)
  double anchor_affinity = 0.5;      // and K(i, anchor) >= this
  double mass_floor = 1e-3;          // stop when mean remaining affinity < floor
  int max_clusters = 20;
  double redundancy = 0.5;           // drop clusters with cross-affinity >= this
  int max_candidates = 500;          // top-M regions by importance per event
  int power_iterations = 1000;
  double power_tolerance = 1e-12;
};

RegionAffinity build_affinity(const std::vector<Candidate>& candidates);

/// Leading eigenvector of a symmetric non-negative matrix by power iteration,
/// unit length, sign chosen so the largest-magnitude entry is positive.
Eigen::VectorXd leading_eigenvector(const Eigen::MatrixXd& a, int max_iterations, double tolerance);

/// Iterated dominant-component extraction; returns disjoint index sets.
std::vector<std::vector<int>> factorize_clusters(const RegionAffinity& a, const GroupingConfig& cfg);

/// Orders clusters by mean member importance and drops those whose mean
/// cross-affinity to an already retained cluster reaches the redundancy level.
std::vector<ObjectCluster> prune_redundant(const std::vector<std::vector<int>>& clusters,
                                           const RegionAffinity& a,
                                           const std::vector<Candidate>& candidates,
                                           const GroupingConfig& cfg);

/// Representative = highest importance; ties go to the earliest frame, then
/// the smallest region id.
void select_representatives(std::vector<ObjectCluster>& clusters,
                            const std::vector<Candidate>& candidates);

/// Caps to the top-M by importance (stable), then runs the full grouping.
std::vector<ObjectCluster> group_event(std::vector<Candidate>& candidates,
                                       const GroupingConfig& cfg);

}  // namespace egosum
