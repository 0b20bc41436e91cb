#include "egosum/storyboard.hpp"

#include "json_util.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace egosum {

using detail::json;

std::vector<int> Storyboard::frames() const {
  std::vector<int> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.frame);
  return out;
}

double frame_importance(const Eigen::Ref<const Eigen::VectorXd>& region_importance) {
  return region_importance.size() == 0 ? 0.0 : region_importance.maxCoeff();
}

double BudgetProblem::node_cost(int i) const {
  return -(importance[i] - stats.importance.mean) / stats.importance.std;
}

double BudgetProblem::edge_cost(int i, int j) const {
  const double gap = std::sqrt(std::abs(static_cast<double>(frames[static_cast<std::size_t>(j)] -
                                                          frames[static_cast<std::size_t>(i)])));
  return (similarity(i, j) - stats.similarity.mean) / stats.similarity.std -
         (gap - stats.spread.mean) / stats.spread.std;
}

BudgetProblem make_budget_problem(const std::vector<int>& frames,
                                  const Eigen::VectorXd& frame_importance,
                                  const Eigen::MatrixXd& frame_chi2, double omega,
                                  const EnergyStats& stats) {
  BudgetProblem p;
  p.frames = frames;
  p.stats = stats;
  const Eigen::Index n = static_cast<Eigen::Index>(frames.size());
  p.importance.resize(n);
  p.similarity.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int fi = frames[static_cast<std::size_t>(i)];
    if (i > 0 && fi <= frames[static_cast<std::size_t>(i - 1)])
      throw std::invalid_argument("make_budget_problem: frames must be strictly increasing");
    p.importance[i] = frame_importance[fi];
    for (Eigen::Index j = 0; j < n; ++j) {
      const double chi2 = frame_chi2(fi, frames[static_cast<std::size_t>(j)]);
      p.similarity(i, j) = std::exp(omega > 0 ? -chi2 / omega : 0.0);
    }
  }
  return p;
}

EnergyStats energy_stats_from(const BudgetProblem& problem) {
  auto finish = [](double sum, double sq, double count) {
    MeanStd s;
    if (count == 0) return s;
    s.mean = sum / count;
    const double var = std::max(0.0, sq / count - s.mean * s.mean);
    s.std = var > 0 ? std::sqrt(var) : 1.0;
    return s;
  };
  const int n = problem.size();
  EnergyStats out;
  out.importance = finish(problem.importance.sum(), problem.importance.squaredNorm(), n);
  double s_sum = 0, s_sq = 0, g_sum = 0, g_sq = 0, count = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double s = problem.similarity(i, j);
      const double g = std::sqrt(static_cast<double>(problem.frames[static_cast<std::size_t>(j)] -
                                                     problem.frames[static_cast<std::size_t>(i)]));
      s_sum += s;
      s_sq += s * s;
      g_sum += g;
      g_sq += g * g;
      count += 1;
    }
  out.similarity = finish(s_sum, s_sq, count);
  out.spread = finish(g_sum, g_sq, count);
  return out;
}

double energy(const BudgetProblem& problem, const std::vector<int>& selection) {
  if (selection.empty()) throw std::invalid_argument("energy: empty selection");
  for (std::size_t i = 0; i < selection.size(); ++i) {
    if (selection[i] < 0 || selection[i] >= problem.size())
      throw std::out_of_range("energy: selection outside the candidate set");
    if (i > 0 && selection[i] <= selection[i - 1])
      throw std::invalid_argument("energy: selection must be sorted without duplicates");
  }
  double e = 0.0;
  for (std::size_t i = 0; i < selection.size(); ++i) {
    e += problem.node_cost(selection[i]);
    if (i + 1 < selection.size()) e += problem.edge_cost(selection[i], selection[i + 1]);
  }
  return e;
}

namespace {

double tie_tolerance(double v) { return 1e-12 * (1.0 + std::abs(v)); }

void check_k(const BudgetProblem& problem, int k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (k > problem.size())
    throw std::invalid_argument("k = " + std::to_string(k) + " exceeds the " +
                                std::to_string(problem.size()) + " candidate frames");
}

}  // namespace

Selection select_k_frames(const BudgetProblem& problem, int k) {
  check_k(problem, k);
  const int F = problem.size();
  const double inf = std::numeric_limits<double>::infinity();

  // suffix(t, n): least energy of steps t..k-1 given position n at step t.
  // best(t, n) is the minimised continuation so reconstruction can compare
  // exactly the same quantities.
  Eigen::MatrixXd suffix = Eigen::MatrixXd::Constant(k, F, inf);
  Eigen::MatrixXd best = Eigen::MatrixXd::Constant(k, F, inf);
  for (int n = k - 1; n < F; ++n) suffix(k - 1, n) = problem.node_cost(n);
  for (int t = k - 2; t >= 0; --t) {
    const int hi = F - k + t;  // last admissible position at step t
    for (int n = t; n <= hi; ++n) {
      double b = inf;
      for (int m = n + 1; m <= hi + 1; ++m) b = std::min(b, problem.edge_cost(n, m) + suffix(t + 1, m));
      best(t, n) = b;
      suffix(t, n) = problem.node_cost(n) + b;
    }
  }

  Selection out;
  double opt = inf;
  for (int n = 0; n <= F - k; ++n) opt = std::min(opt, suffix(0, n));
  int cur = 0;
  while (suffix(0, cur) > opt + tie_tolerance(opt)) ++cur;
  out.positions.push_back(cur);
  out.energy = suffix(0, cur);
  for (int t = 0; t + 1 < k; ++t) {
    const double target = best(t, cur);
    int m = cur + 1;
    while (problem.edge_cost(cur, m) + suffix(t + 1, m) > target + tie_tolerance(target)) ++m;
    out.positions.push_back(m);
    cur = m;
  }
  return out;
}

Selection brute_force_select(const BudgetProblem& problem, int k) {
  check_k(problem, k);
  const int F = problem.size();
  double subsets = 1.0;
  for (int i = 0; i < k; ++i) subsets = subsets * (F - i) / (i + 1);
  if (subsets > 1e7) throw std::invalid_argument("brute_force_select: instance too large");

  std::vector<int> s(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) s[static_cast<std::size_t>(i)] = i;
  Selection out;
  out.energy = std::numeric_limits<double>::infinity();
  while (true) {
    const double e = energy(problem, s);
    if (out.positions.empty() || e < out.energy - tie_tolerance(out.energy)) {
      out.energy = e;
      out.positions = s;
    }
    int i = k - 1;
    while (i >= 0 && s[static_cast<std::size_t>(i)] == F - k + i) --i;
    if (i < 0) break;
    ++s[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) s[static_cast<std::size_t>(j)] = s[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

std::string render_manifest(const Storyboard& s, const VideoBundle& b,
                            const std::vector<Event>& events, const std::string& header_json) {
  json j;
  j["format"] = "egosum-storyboard";
  j["version"] = 1;
  if (!header_json.empty()) j["header"] = json::parse(header_json);
  j["video_id"] = b.video_id;
  j["fps_effective"] = b.fps_effective();
  if (s.mode == SummaryMode::Criterion) {
    j["mode"] = "criterion";
    j["tau"] = s.tau;
  } else {
    j["mode"] = "budget";
    j["k"] = s.k;
  }
  j["energy"] = s.energy ? json(*s.energy) : json(nullptr);
  json ev = json::array();
  for (const Event& e : events)
    ev.push_back({{"event_id", e.event_id},
                  {"start", e.start},
                  {"end", e.end},
                  {"n_frames", e.member_frames.size()}});
  j["events"] = std::move(ev);
  json entries = json::array();
  for (const StoryEntry& e : s.entries)
    entries.push_back({{"frame", e.frame},
                       {"event_id", e.event_id},
                       {"region_id", e.region_id},
                       {"importance", e.importance},
                       {"timestamp_s", e.frame / b.fps_effective()}});
  j["entries"] = std::move(entries);
  return j.dump(2) + "\n";
}

Manifest parse_manifest(const std::string& text) {
  using namespace detail;
  Manifest m;
  try {
    const json j = json::parse(text);
    if (get_string(field(j, "format", "manifest"), "manifest.format") != "egosum-storyboard")
      throw FieldError("manifest.format", "not a storyboard manifest");
    m.video_id = get_string(field(j, "video_id", "manifest"), "manifest.video_id");
    m.fps_effective = get_number(field(j, "fps_effective", "manifest"), "manifest.fps_effective");
    const std::string mode = get_string(field(j, "mode", "manifest"), "manifest.mode");
    if (mode == "criterion") {
      m.mode = SummaryMode::Criterion;
      m.tau = get_number(field(j, "tau", "manifest"), "manifest.tau");
    } else if (mode == "budget") {
      m.mode = SummaryMode::Budget;
      m.k = get_int(field(j, "k", "manifest"), "manifest.k");
    } else {
      throw FieldError("manifest.mode", "unknown mode '" + mode + "'");
    }
    if (auto it = j.find("energy"); it != j.end() && !it->is_null())
      m.energy = get_number(*it, "manifest.energy");
    for (const json& e : get_array(field(j, "events", "manifest"), "manifest.events"))
      m.events.push_back({get_int(field(e, "event_id", "manifest.events"), "event_id"),
                          get_int(field(e, "start", "manifest.events"), "start"),
                          get_int(field(e, "end", "manifest.events"), "end"),
                          get_int(field(e, "n_frames", "manifest.events"), "n_frames")});
    for (const json& e : get_array(field(j, "entries", "manifest"), "manifest.entries")) {
      m.entries.push_back({get_int(field(e, "frame", "manifest.entries"), "frame"),
                           get_int(field(e, "event_id", "manifest.entries"), "event_id"),
                           get_int(field(e, "region_id", "manifest.entries"), "region_id"),
                           get_number(field(e, "importance", "manifest.entries"), "importance")});
      m.timestamps.push_back(get_number(field(e, "timestamp_s", "manifest.entries"), "timestamp_s"));
    }
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("manifest: ") + e.what());
  }
  return m;
}

}  // namespace egosum
