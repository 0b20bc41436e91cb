#pragma once

#include "egosum/bundle.hpp"
#include "egosum/cues.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace egosum {

inline constexpr int kPairCount = kCueCount * (kCueCount - 1) / 2;  // 91
inline constexpr int kFeatureCount = kCueCount + kPairCount;         // 105

using FeatureVector = Eigen::Matrix<double, kFeatureCount, 1>;

/// Index of the (i, j), i < j, interaction term inside the pairwise block.
constexpr int pair_index(int i, int j) {
  return i * (2 * kCueCount - i - 1) / 2 + (j - i - 1);
}

struct MeanStd {
  double mean = 0.0;
  double std = 1.0;
};

/// Per-term standardisation of the budget energy: importance, adjacent
/// similarity, temporal spread.
struct EnergyStats {
  MeanStd importance, similarity, spread;
};

struct ImportanceModel {
  double beta0 = 0.0;
  CueVector beta_linear = CueVector::Zero();
  Eigen::Matrix<double, kPairCount, 1> beta_pair = Eigen::Matrix<double, kPairCount, 1>::Zero();
  CueVector cue_means = CueVector::Zero();
  CueVector cue_stds = CueVector::Ones();
  std::optional<EnergyStats> energy_stats;
  std::vector<std::string> training_videos;
  bool linear_only = false;

  FeatureVector weights() const;
};

struct TrainingSample {
  CueVector cues;
  double target = 0.0;
};

struct FitOptions {
  bool pairwise = true;  // false reproduces the linear-only ablation
};

/// Max IoU of `region` with any GT box in the same frame; 0 without GT.
double target_importance(const Box& region, const std::vector<const GtRegion*>& gts);

/// Standardised cues followed by the upper-triangle products z_i z_j.
FeatureVector expand(const CueVector& x, const CueVector& means, const CueVector& stds);

ImportanceModel fit(const std::vector<TrainingSample>& samples, const FitOptions& opts = {});

double predict(const ImportanceModel& m, const CueVector& x);
Eigen::VectorXd predict(const ImportanceModel& m, const CueTable& t);

struct RankedTerm {
  std::string name;
  double magnitude = 0.0;
  int term = 0;  // 0..104, canonical feature index
};

std::vector<RankedTerm> rank_weights(const ImportanceModel& m);
std::string term_name(int term);

/// Training samples for every region of a bundle (targets from its GT).
std::vector<TrainingSample> training_samples(const VideoBundle& b, const CueTable& t);

void save_model(const ImportanceModel& m, const std::filesystem::path& path,
                const std::string& header_json = {});
std::string model_to_string(const ImportanceModel& m, const std::string& header_json = {});
ImportanceModel load_model(const std::filesystem::path& path);
ImportanceModel model_from_string(const std::string& text);

}  // namespace egosum
