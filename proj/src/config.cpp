#include "egosum/config.hpp"

#include "json_util.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace egosum {

using detail::json;

namespace {

std::string anchor_name(WindowAnchor a) {
  switch (a) {
    case WindowAnchor::Trailing: return "trailing";
    case WindowAnchor::Leading: return "leading";
    default: return "centered";
  }
}

WindowAnchor anchor_from(const std::string& s) {
  if (s == "centered") return WindowAnchor::Centered;
  if (s == "trailing") return WindowAnchor::Trailing;
  if (s == "leading") return WindowAnchor::Leading;
  throw std::invalid_argument("config: cues.window_anchor must be centered, trailing or leading");
}

json to_json(const PipelineConfig& c) {
  json j;
  j["cues"] = {{"theta_r", c.cues.theta_r},
               {"theta_p", c.cues.theta_p},
               {"window_minutes", c.cues.window_minutes},
               {"window_anchor", anchor_name(c.cues.anchor)},
               {"skin_fraction", c.cues.skin_fraction},
               {"color_bins", kColorBins},
               {"flow_bins", kFlowBins}};
  j["events"] = {{"t_window", c.events.t_window},
                 {"threshold_space",
                  c.events.threshold_space == ThresholdSpace::ChiSquare ? "chi2" : "distance"},
                 {"threshold_override", c.events.threshold_override
                                            ? json(*c.events.threshold_override)
                                            : json(nullptr)}};
  const GroupingConfig& g = c.grouping;
  j["grouping"] = {{"membership_fraction", g.membership_fraction},
                   {"anchor_affinity", g.anchor_affinity},
                   {"mass_floor", g.mass_floor},
                   {"max_clusters", g.max_clusters},
                   {"redundancy", g.redundancy},
                   {"max_candidates", g.max_candidates},
                   {"power_iterations", g.power_iterations},
                   {"power_tolerance", g.power_tolerance}};
  j["summary"] = {{"mode", c.mode == SummaryMode::Budget ? "budget" : "criterion"},
                  {"tau", c.tau},
                  {"k", c.k},
                  {"no_events", c.no_events},
                  {"stats", c.stats_from_model ? "model" : "self"}};
  j["stride"] = c.stride;
  j["seed"] = c.seed;
  return j;
}

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
  if (!obj.is_object()) throw std::invalid_argument("config: " + where + " must be an object");
  for (const auto& [key, value] : obj.items())
    if (!known.count(key)) throw std::invalid_argument("config: unknown key " + where + "." + key);
}

template <class T>
void take(const json& obj, const char* key, T& out) {
  if (auto it = obj.find(key); it != obj.end()) out = it->get<T>();
}

}  // namespace

void PipelineConfig::check() const {
  cues.check();
  if (events.t_window <= 0) throw std::invalid_argument("config: events.t_window must be > 0");
  if (stride < 1) throw std::invalid_argument("config: stride must be >= 1");
  if (k < 1) throw std::invalid_argument("config: summary.k must be >= 1");
  const GroupingConfig& g = grouping;
  if (!(g.membership_fraction > 0 && g.membership_fraction <= 1))
    throw std::invalid_argument("config: grouping.membership_fraction must be in (0, 1]");
  if (!(g.anchor_affinity >= 0 && g.anchor_affinity <= 1))
    throw std::invalid_argument("config: grouping.anchor_affinity must be in [0, 1]");
  if (g.max_clusters < 1 || g.max_candidates < 1 || g.power_iterations < 1)
    throw std::invalid_argument("config: grouping counts must be >= 1");
}

PipelineConfig config_from_json(const std::string& text, const PipelineConfig& base) {
  const json j = json::parse(text);
  reject_unknown(j, {"cues", "events", "grouping", "summary", "stride", "seed"}, "config");
  PipelineConfig c = base;
  if (auto it = j.find("cues"); it != j.end()) {
    reject_unknown(*it, {"theta_r", "theta_p", "window_minutes", "window_anchor", "skin_fraction",
                         "color_bins", "flow_bins"},
                   "cues");
    take(*it, "theta_r", c.cues.theta_r);
    take(*it, "theta_p", c.cues.theta_p);
    take(*it, "window_minutes", c.cues.window_minutes);
    take(*it, "skin_fraction", c.cues.skin_fraction);
    if (it->contains("window_anchor")) c.cues.anchor = anchor_from(it->at("window_anchor").get<std::string>());
    // Binning is fixed by the bundle format; a config can only confirm it.
    if (it->value("color_bins", kColorBins) != kColorBins || it->value("flow_bins", kFlowBins) != kFlowBins)
      throw std::invalid_argument("config: color_bins / flow_bins differ from the bundle format");
  }
  if (auto it = j.find("events"); it != j.end()) {
    reject_unknown(*it, {"t_window", "threshold_space", "threshold_override"}, "events");
    take(*it, "t_window", c.events.t_window);
    if (it->contains("threshold_space")) {
      const auto s = it->at("threshold_space").get<std::string>();
      if (s == "chi2") c.events.threshold_space = ThresholdSpace::ChiSquare;
      else if (s == "distance") c.events.threshold_space = ThresholdSpace::Distance;
      else throw std::invalid_argument("config: events.threshold_space must be chi2 or distance");
    }
    if (auto o = it->find("threshold_override"); o != it->end())
      c.events.threshold_override = o->is_null() ? std::nullopt : std::optional<double>(o->get<double>());
  }
  if (auto it = j.find("grouping"); it != j.end()) {
    reject_unknown(*it, {"membership_fraction", "anchor_affinity", "mass_floor", "max_clusters",
                         "redundancy", "max_candidates", "power_iterations", "power_tolerance"},
                   "grouping");
    GroupingConfig& g = c.grouping;
    take(*it, "membership_fraction", g.membership_fraction);
    take(*it, "anchor_affinity", g.anchor_affinity);
    take(*it, "mass_floor", g.mass_floor);
    take(*it, "max_clusters", g.max_clusters);
    take(*it, "redundancy", g.redundancy);
    take(*it, "max_candidates", g.max_candidates);
    take(*it, "power_iterations", g.power_iterations);
    take(*it, "power_tolerance", g.power_tolerance);
  }
  if (auto it = j.find("summary"); it != j.end()) {
    reject_unknown(*it, {"mode", "tau", "k", "no_events", "stats"}, "summary");
    if (it->contains("mode")) {
      const auto m = it->at("mode").get<std::string>();
      if (m == "criterion") c.mode = SummaryMode::Criterion;
      else if (m == "budget") c.mode = SummaryMode::Budget;
      else throw std::invalid_argument("config: summary.mode must be criterion or budget");
    }
    take(*it, "tau", c.tau);
    take(*it, "k", c.k);
    take(*it, "no_events", c.no_events);
    if (it->contains("stats")) {
      const auto s = it->at("stats").get<std::string>();
      if (s != "model" && s != "self") throw std::invalid_argument("config: summary.stats must be model or self");
      c.stats_from_model = s == "model";
    }
  }
  take(j, "stride", c.stride);
  take(j, "seed", c.seed);
  c.check();
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path, const PipelineConfig& base) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str(), base);
}

std::string config_to_json(const PipelineConfig& cfg) { return to_json(cfg).dump(2) + "\n"; }

std::string config_hash(const PipelineConfig& cfg) {
  const std::string text = to_json(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string reproducibility_header(const PipelineConfig& cfg, const std::string& command) {
  json j;
  j["tool"] = "egosum";
  j["version"] = kVersion;
  j["command"] = command;
  j["config_hash"] = config_hash(cfg);
  j["seed"] = cfg.seed;
  j["parameters"] = to_json(cfg);
  return j.dump();
}

}  // namespace egosum
