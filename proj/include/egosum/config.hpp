#pragma once

#include "egosum/cues.hpp"
#include "egosum/events.hpp"
#include "egosum/grouping.hpp"
#include "egosum/storyboard.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

namespace egosum {

inline constexpr const char* kVersion = "1.0.0";

/// Every tunable constant of the pipeline. Defaults are the published
/// settings where one exists; config/default.json spells them all out.
struct PipelineConfig {
  CueConfig cues;
  EventConfig events;
  GroupingConfig grouping;
  int stride = 15;
  SummaryMode mode = SummaryMode::Criterion;
  double tau = 0.5;  // raw prediction units
  int k = 10;
  bool no_events = false;
  bool stats_from_model = true;  // false: always standardise from the video itself
  std::uint64_t seed = 1;

  void check() const;
};

/// Parses a (possibly partial) config; missing keys keep their defaults,
/// unknown keys are an error so typos cannot silently fall back.
PipelineConfig config_from_json(const std::string& text, const PipelineConfig& base = {});
PipelineConfig load_config(const std::filesystem::path& path, const PipelineConfig& base = {});
std::string config_to_json(const PipelineConfig& cfg);

/// FNV-1a over the canonical JSON dump, as 16 hex digits.
std::string config_hash(const PipelineConfig& cfg);

/// Deterministic header embedded in every artifact (no clock, no host).
std::string reproducibility_header(const PipelineConfig& cfg, const std::string& command);

}  // namespace egosum
