#include "egosum/importance.hpp"

#include "egosum/log.hpp"
#include "json_util.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace egosum {

using detail::json;

FeatureVector ImportanceModel::weights() const {
  FeatureVector w;
  w << beta_linear, beta_pair;
  return w;
}

double target_importance(const Box& region, const std::vector<const GtRegion*>& gts) {
  double best = 0.0;
  for (const GtRegion* g : gts) best = std::max(best, iou(region, g->bbox));
  return best;
}

FeatureVector expand(const CueVector& x, const CueVector& means, const CueVector& stds) {
  const CueVector z = (x - means).cwiseQuotient(stds);
  FeatureVector out;
  out.head<kCueCount>() = z;
  int k = kCueCount;
  for (int i = 0; i < kCueCount; ++i)
    for (int j = i + 1; j < kCueCount; ++j) out[k++] = z[i] * z[j];
  return out;
}

ImportanceModel fit(const std::vector<TrainingSample>& samples, const FitOptions& opts) {
  if (samples.empty()) throw std::invalid_argument("fit: empty sample set");
  const Eigen::Index n = static_cast<Eigen::Index>(samples.size());
  const int features = opts.pairwise ? kFeatureCount : kCueCount;
  if (n < features + 1)
    throw std::invalid_argument("fit: need at least " + std::to_string(features + 1) +
                                " samples, got " + std::to_string(n));

  Eigen::Matrix<double, Eigen::Dynamic, kCueCount> X(n, kCueCount);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    X.row(i) = samples[static_cast<std::size_t>(i)].cues.transpose();
    y[i] = samples[static_cast<std::size_t>(i)].target;
  }

  ImportanceModel m;
  m.linear_only = !opts.pairwise;
  m.cue_means = X.colwise().mean().transpose();
  for (int c = 0; c < kCueCount; ++c) {
    const double var = (X.col(c).array() - m.cue_means[c]).square().mean();
    if (var > 0) {
      m.cue_stds[c] = std::sqrt(var);
    } else {
      m.cue_stds[c] = 1.0;
      warn("cue '" + std::string(kCueNames[static_cast<std::size_t>(c)]) +
           "' is constant in the training set; std clamped to 1");
    }
  }

  Eigen::MatrixXd design(n, features + 1);
  design.col(0).setOnes();
  for (Eigen::Index i = 0; i < n; ++i)
    design.row(i).tail(features) =
        expand(X.row(i).transpose(), m.cue_means, m.cue_stds).head(features).transpose();

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> feature_rank(design.rightCols(features));
  if (feature_rank.rank() == 0) throw std::invalid_argument("fit: all cues identical (rank 0)");

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(design);
  if (cod.rank() < features + 1)
    warn("fit: design is rank deficient (" + std::to_string(cod.rank()) + " of " +
         std::to_string(features + 1) + "); using the minimum-norm solution");
  const Eigen::VectorXd beta = cod.solve(y);

  m.beta0 = beta[0];
  m.beta_linear = beta.segment<kCueCount>(1);
  if (opts.pairwise) m.beta_pair = beta.tail<kPairCount>();
  return m;
}

double predict(const ImportanceModel& m, const CueVector& x) {
  return m.beta0 + m.weights().dot(expand(x, m.cue_means, m.cue_stds));
}

Eigen::VectorXd predict(const ImportanceModel& m, const CueTable& t) {
  Eigen::VectorXd out(t.rows());
  for (Eigen::Index i = 0; i < t.rows(); ++i) out[i] = predict(m, t.row(i));
  return out;
}

std::string term_name(int term) {
  if (term < 0 || term >= kFeatureCount) throw std::out_of_range("term index");
  if (term < kCueCount) return std::string(kCueLabels[static_cast<std::size_t>(term)]);
  int k = kCueCount;
  for (int i = 0; i < kCueCount; ++i)
    for (int j = i + 1; j < kCueCount; ++j, ++k)
      if (k == term)
        return std::string(kCueLabels[static_cast<std::size_t>(i)]) + " × " +
               std::string(kCueLabels[static_cast<std::size_t>(j)]);
  return {};
}

std::vector<RankedTerm> rank_weights(const ImportanceModel& m) {
  const FeatureVector w = m.weights();
  std::vector<RankedTerm> out;
  out.reserve(kFeatureCount);
  for (int k = 0; k < kFeatureCount; ++k) out.push_back({term_name(k), std::abs(w[k]), k});
  std::stable_sort(out.begin(), out.end(),
                   [](const RankedTerm& a, const RankedTerm& b) { return a.magnitude > b.magnitude; });
  return out;
}

std::vector<TrainingSample> training_samples(const VideoBundle& b, const CueTable& t) {
  std::vector<TrainingSample> out;
  out.reserve(static_cast<std::size_t>(t.rows()));
  Eigen::Index row = 0;
  for (const FrameRecord& f : b.frames) {
    const auto gts = b.ground_truth_for(f.index);
    for (const RegionRecord& r : f.regions) out.push_back({t.row(row++), target_importance(r.bbox, gts)});
  }
  return out;
}

namespace {

template <typename Vec>
json vec_to_json(const Vec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

template <typename Vec>
void vec_from_json(const json& j, Vec& v, const std::string& path) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != v.size())
    throw detail::FieldError(path, "expected array of " + std::to_string(v.size()) + " numbers");
  for (Eigen::Index i = 0; i < v.size(); ++i)
    v[i] = detail::get_number(j[static_cast<std::size_t>(i)], path);
}

json mean_std_to_json(const MeanStd& s) { return {{"mean", s.mean}, {"std", s.std}}; }

MeanStd mean_std_from_json(const json& j, const std::string& path) {
  return {detail::get_number(detail::field(j, "mean", path), path + ".mean"),
          detail::get_number(detail::field(j, "std", path), path + ".std")};
}

}  // namespace

std::string model_to_string(const ImportanceModel& m, const std::string& header_json) {
  json j;
  j["format"] = "egosum-model";
  j["version"] = 1;
  if (!header_json.empty()) j["header"] = json::parse(header_json);
  j["cue_order"] = json::array();
  for (auto name : kCueNames) j["cue_order"].push_back(std::string(name));
  j["linear_only"] = m.linear_only;
  j["training_videos"] = m.training_videos;
  j["beta0"] = m.beta0;
  j["beta_linear"] = vec_to_json(m.beta_linear);
  j["beta_pair"] = vec_to_json(m.beta_pair);
  j["cue_means"] = vec_to_json(m.cue_means);
  j["cue_stds"] = vec_to_json(m.cue_stds);
  if (m.energy_stats)
    j["energy_stats"] = {{"importance", mean_std_to_json(m.energy_stats->importance)},
                         {"similarity", mean_std_to_json(m.energy_stats->similarity)},
                         {"spread", mean_std_to_json(m.energy_stats->spread)}};
  else
    j["energy_stats"] = nullptr;
  return j.dump(2) + "\n";
}

void save_model(const ImportanceModel& m, const std::filesystem::path& path,
                const std::string& header_json) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write model '" + path.string() + "'");
  out << model_to_string(m, header_json);
}

ImportanceModel model_from_string(const std::string& text) {
  using namespace detail;
  ImportanceModel m;
  try {
    const json j = json::parse(text);
    if (get_string(field(j, "format", "model"), "model.format") != "egosum-model")
      throw FieldError("model.format", "not an egosum model");
    const json& order = get_array(field(j, "cue_order", "model"), "model.cue_order");
    if (order.size() != kCueNames.size())
      throw FieldError("model.cue_order", "cue count mismatch");
    for (std::size_t i = 0; i < order.size(); ++i)
      if (get_string(order[i], "model.cue_order") != kCueNames[i])
        throw FieldError("model.cue_order", "cue order differs from this build");
    if (auto it = j.find("linear_only"); it != j.end()) m.linear_only = it->get<bool>();
    if (auto it = j.find("training_videos"); it != j.end())
      m.training_videos = it->get<std::vector<std::string>>();
    m.beta0 = get_number(field(j, "beta0", "model"), "model.beta0");
    vec_from_json(field(j, "beta_linear", "model"), m.beta_linear, "model.beta_linear");
    vec_from_json(field(j, "beta_pair", "model"), m.beta_pair, "model.beta_pair");
    vec_from_json(field(j, "cue_means", "model"), m.cue_means, "model.cue_means");
    vec_from_json(field(j, "cue_stds", "model"), m.cue_stds, "model.cue_stds");
    if ((m.cue_stds.array() <= 0).any()) throw FieldError("model.cue_stds", "must be > 0");
    if (auto it = j.find("energy_stats"); it != j.end() && !it->is_null()) {
      EnergyStats s;
      s.importance = mean_std_from_json(field(*it, "importance", "model.energy_stats"),
                                        "model.energy_stats.importance");
      s.similarity = mean_std_from_json(field(*it, "similarity", "model.energy_stats"),
                                        "model.energy_stats.similarity");
      s.spread = mean_std_from_json(field(*it, "spread", "model.energy_stats"),
                                    "model.energy_stats.spread");
      m.energy_stats = s;
    }
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("model: ") + e.what());
  }
  return m;
}

ImportanceModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open model '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return model_from_string(ss.str());
}

}  // namespace egosum
