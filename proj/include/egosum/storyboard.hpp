#pragma once

#include "egosum/bundle.hpp"
#include "egosum/events.hpp"
#include "egosum/importance.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace egosum {

enum class SummaryMode { Criterion, Budget };

struct StoryEntry {
  int frame = 0;
  int event_id = -1;
  int region_id = -1;
  double importance = 0.0;
  friend bool operator==(const StoryEntry&, const StoryEntry&) = default;
};

struct Storyboard {
  std::vector<StoryEntry> entries;  // strictly increasing frame
  SummaryMode mode = SummaryMode::Criterion;
  double tau = 0.0;                 // criterion mode
  int k = 0;                        // budget mode
  std::optional<double> energy;     // budget mode

  std::vector<int> frames() const;
};

/// Highest region importance in a frame; 0 for a frame without regions.
double frame_importance(const Eigen::Ref<const Eigen::VectorXd>& region_importance);

/// The k-frame selection instance over a candidate list V.
struct BudgetProblem {
  std::vector<int> frames;      // frame indices of V, strictly increasing
  Eigen::VectorXd importance;   // I(f) per candidate
  Eigen::MatrixXd similarity;   // exp(-chi2 / Omega) between candidates
  EnergyStats stats;

  int size() const { return static_cast<int>(frames.size()); }
  double node_cost(int i) const;
  double edge_cost(int i, int j) const;
};

/// Builds V from frame indices; similarity from the video-level chi-square
/// matrix and Omega (Omega == 0 gives similarity 1).
BudgetProblem make_budget_problem(const std::vector<int>& frames,
                                  const Eigen::VectorXd& frame_importance,
                                  const Eigen::MatrixXd& frame_chi2, double omega,
                                  const EnergyStats& stats);

/// Per-term statistics over a candidate set: importance over V, similarity
/// and spread over every pair in V. Zero spread falls back to std 1.
EnergyStats energy_stats_from(const BudgetProblem& problem);

/// Energy of a selection given as positions into V (sorted, no duplicates).
double energy(const BudgetProblem& problem, const std::vector<int>& selection);

struct Selection {
  std::vector<int> positions;  // into V
  double energy = 0.0;
};

/// Exact minimiser by dynamic programming in O(|V|^2 k); ties resolve to the
/// lexicographically smallest sequence.
Selection select_k_frames(const BudgetProblem& problem, int k);

/// Exhaustive reference; refuses instances with more than 1e7 subsets.
Selection brute_force_select(const BudgetProblem& problem, int k);

/// Structured manifest of a storyboard.
struct ManifestEvent {
  int event_id = 0, start = 0, end = 0, n_frames = 0;
  friend bool operator==(const ManifestEvent&, const ManifestEvent&) = default;
};

struct Manifest {
  std::string video_id;
  SummaryMode mode = SummaryMode::Criterion;
  double tau = 0.0;
  int k = 0;
  std::optional<double> energy;
  double fps_effective = 1.0;
  std::vector<ManifestEvent> events;
  std::vector<StoryEntry> entries;
  std::vector<double> timestamps;  // seconds, one per entry
};

std::string render_manifest(const Storyboard& s, const VideoBundle& b,
                            const std::vector<Event>& events, const std::string& header_json = {});
Manifest parse_manifest(const std::string& text);

}  // namespace egosum
