#pragma once

#include "egosum/bundle.hpp"
#include "egosum/cues.hpp"
#include "egosum/importance.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace egosum {

/// A contiguous run of frames sharing one background colour signature.
struct EventBlock {
  int length = 0;
  int signature = 0;
};

/// An object instance recurring over `frames` (frame positions). Objects with
/// tier >= 0.5 are labelled in the ground truth.
struct PlantedObject {
  std::string label;
  double tier = 1.0;
  int signature = 50;
  std::vector<int> frames;
  int prominent_frame = -1;  // instance placed at the frame centre; -1 = first frame
  bool has_face = false;
  bool near_hand = false;
  double side = 150.0;       // square box side in pixels
  int points = 4;
  double objectness = 0.8;
};

struct ScenarioSpec {
  std::uint64_t seed = 1;
  std::string video_id;  // defaults to "synth-<seed>"
  double fps = 1.0;
  int frame_width = 640;
  int frame_height = 480;
  int descriptor_dim = 64;
  std::vector<EventBlock> blocks;
  std::vector<PlantedObject> objects;
  int clutter_per_frame = 3;
  bool background_region = true;
  double hist_noise = 0.0;      // multiplicative, uniform in [-h, h] per bin
  double offset_radius = 120.0; // max centre offset of non-prominent instances
  bool skin_superpixels = false;
  CueConfig cue_config;         // window used for the planted frequency values

  int n_frames() const;
  void check() const;
};

struct PlantedRegion {
  RegionKey key;
  std::string kind;   // "object", "background" or "clutter"
  std::string label;  // object label, empty otherwise
  int signature = 0;
  CueVector cues = CueVector::Zero();
  bool prominent = false;
};

struct SynthOracle {
  std::vector<int> event_starts;
  std::vector<PlantedRegion> regions;                       // bundle order
  std::map<std::string, std::vector<RegionKey>> clusters;   // object label -> instances
  std::map<std::string, RegionKey> prominent;               // object label -> instance
  std::map<std::string, double> tiers;
};

struct SynthResult {
  VideoBundle bundle;
  SynthOracle oracle;
};

/// Colour signature bins: signature s owns 24 bins starting at 40 s.
inline constexpr int kSignatureBins = 24;
inline constexpr int kSignatureStride = 40;
inline constexpr int kMaxSignature = (kColorBins - kSignatureBins) / kSignatureStride;

SynthResult generate(const ScenarioSpec& spec);

/// A planted "day": `n_events` blocks of `block_length` frames, two labelled
/// objects per block in disjoint bursts, background plus clutter regions.
ScenarioSpec make_day_scenario(std::uint64_t seed, int n_events = 5, int block_length = 50,
                               int objects_per_event = 2);

/// Colour-disjoint blocks without objects (event segmentation checks).
ScenarioSpec make_block_scenario(std::uint64_t seed, const std::vector<int>& block_lengths);

/// Seeded cue draws with a fixed, roughly realistic distribution per cue.
std::vector<CueVector> draw_cues(std::uint64_t seed, int n);

/// Cues plus targets computed exactly from the linear-with-interactions model
/// on sample-standardised cues; optional Gaussian target noise.
std::vector<TrainingSample> plant_regression_set(const FeatureVector& beta, double beta0, int n,
                                                 std::uint64_t seed, double noise_sigma = 0.0);

/// Importance benchmark whose planted score has strong interaction terms;
/// targets are clamped to [0, 1] and positives are targets above 0.5.
std::vector<TrainingSample> plant_interaction_benchmark(std::uint64_t seed, int n);

ScenarioSpec scenario_from_json(const std::string& text);
std::string scenario_to_json(const ScenarioSpec& spec);
std::string oracle_to_json(const SynthOracle& oracle);

}  // namespace egosum
