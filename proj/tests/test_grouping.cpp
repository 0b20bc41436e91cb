#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "egosum/grouping.hpp"
#include "egosum/rng.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <set>

using namespace egosum;

namespace {

// Histogram of "object" o: a block of 6 bins with per-instance jitter.
Histogram object_hist(int o, Rng& rng, double jitter = 0.05) {
  Histogram h(kColorBins);
  for (int k = 0; k < 6; ++k) h.coeffRef(30 * o + k) = std::floor(500 * (1 + rng.uniform(-jitter, jitter)));
  return h;
}

struct Pool {
  std::vector<Histogram> hists;
  std::vector<Candidate> candidates;
  std::vector<int> truth;
};

Pool make_pool(const std::vector<int>& sizes, std::uint64_t seed) {
  Rng rng(seed, 9);
  Pool p;
  for (std::size_t o = 0; o < sizes.size(); ++o)
    for (int i = 0; i < sizes[o]; ++i) {
      p.hists.push_back(object_hist(static_cast<int>(o), rng));
      p.truth.push_back(static_cast<int>(o));
    }
  // shuffle the order so clusters are not contiguous
  std::vector<int> order(p.hists.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(i) - 1))]);
  std::vector<Histogram> h;
  std::vector<int> t;
  for (int i : order) {
    h.push_back(p.hists[static_cast<std::size_t>(i)]);
    t.push_back(p.truth[static_cast<std::size_t>(i)]);
  }
  p.hists = std::move(h);
  p.truth = std::move(t);
  for (std::size_t i = 0; i < p.hists.size(); ++i)
    p.candidates.push_back({RegionKey{static_cast<int>(i), 0}, &p.hists[i], rng.uniform()});
  return p;
}

// Clusters as a label-free partition (set of sorted member sets).
std::set<std::vector<int>> partition_of(const std::vector<std::vector<int>>& clusters) {
  std::set<std::vector<int>> out;
  for (auto c : clusters) {
    std::sort(c.begin(), c.end());
    out.insert(c);
  }
  return out;
}

std::set<std::vector<int>> partition_from_labels(const std::vector<int>& labels) {
  std::map<int, std::vector<int>> m;
  for (std::size_t i = 0; i < labels.size(); ++i) m[labels[i]].push_back(static_cast<int>(i));
  std::set<std::vector<int>> out;
  for (auto& [k, v] : m) out.insert(v);
  return out;
}

}  // namespace

TEST_CASE("affinity: unit diagonal, symmetric, gamma is the mean chi-square") {
  Pool p = make_pool({3, 4}, 1);
  const RegionAffinity a = build_affinity(p.candidates);
  double sum = 0;
  const int n = 7;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) sum += oracle::chi2(p.hists[i], p.hists[j]);
  CHECK(a.gamma == doctest::Approx(sum / 21).epsilon(1e-12));
  for (int i = 0; i < n; ++i) {
    CHECK(a.k(i, i) == 1.0);
    for (int j = 0; j < n; ++j) {
      CHECK(a.k(i, j) == a.k(j, i));
      CHECK(a.k(i, j) > 0.0);
      CHECK(a.k(i, j) <= 1.0);
      if (i != j)
        CHECK(a.k(i, j) == doctest::Approx(std::exp(-oracle::chi2(p.hists[i], p.hists[j]) / a.gamma)).epsilon(1e-12));
    }
  }
  CHECK(a.member_refs.size() == 7);

  // a single candidate, and identical candidates
  Histogram h = fixture::color({{2, 10}});
  std::vector<Candidate> one{{RegionKey{0, 0}, &h, 1.0}};
  CHECK(build_affinity(one).gamma == 1.0);
  std::vector<Candidate> same{{RegionKey{0, 0}, &h, 1.0}, {RegionKey{1, 0}, &h, 0.5}};
  CHECK(build_affinity(same).k.isOnes());
}

TEST_CASE("power iteration matches a direct eigensolver") {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + trial % 8;
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) a(i, j) = a(j, i) = i == j ? 1.0 : rng.uniform();
    const Eigen::VectorXd v = leading_eigenvector(a, 5000, 1e-14);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    Eigen::VectorXd ref = es.eigenvectors().col(n - 1);
    if (ref.sum() < 0) ref = -ref;
    CHECK(v.norm() == doctest::Approx(1.0));
    CHECK((v - ref).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("two disconnected blocks split into their blocks") {
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(5, 5);
  k.topLeftCorner(2, 2).setOnes();
  k.bottomRightCorner(3, 3).setOnes();
  RegionAffinity a{k, 1.0, {}};
  const auto c = factorize_clusters(a, GroupingConfig{});
  REQUIRE(c.size() == 2);
  CHECK(partition_of(c) == std::set<std::vector<int>>{{0, 1}, {2, 3, 4}});
  // the larger block dominates and comes out first
  CHECK(c[0].size() == 3);
}

TEST_CASE("factorisation stops at the mass floor and the cluster cap") {
  RegionAffinity a{Eigen::MatrixXd::Identity(6, 6) * 1e-4, 1.0, {}};
  CHECK(factorize_clusters(a, GroupingConfig{}).empty());

  a.k = Eigen::MatrixXd::Identity(30, 30);
  const auto c = factorize_clusters(a, GroupingConfig{});
  // identity: mean 1/m stays above 1e-3 so the cap decides
  CHECK(c.size() == 20);
  for (const auto& x : c) CHECK(x.size() == 1);
}

TEST_CASE("planted groups are recovered exactly") {
  const std::vector<std::vector<int>> layouts{{4, 4}, {5, 3}, {3, 3, 3}, {6, 2, 4}, {2, 2, 2, 2}, {8, 8}};
  for (std::size_t l = 0; l < layouts.size(); ++l)
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      CAPTURE(l);
      CAPTURE(seed);
      Pool p = make_pool(layouts[l], seed);
      const RegionAffinity a = build_affinity(p.candidates);
      CHECK(partition_of(factorize_clusters(a, GroupingConfig{})) == partition_from_labels(p.truth));
    }
}

TEST_CASE("small pools agree with the exhaustive best partition") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Pool p = make_pool({3, 2, 3}, seed + 50);
    const RegionAffinity a = build_affinity(p.candidates);
    std::vector<std::vector<double>> k(8, std::vector<double>(8));
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) k[i][j] = a.k(i, j) - 0.5;  // signed: split below 0.5
    CHECK(partition_of(factorize_clusters(a, GroupingConfig{})) == partition_from_labels(oracle::best_partition(k)));
  }
}

TEST_CASE("redundant clusters are pruned, importance order kept") {
  // three clusters; the third is a near copy of the first
  Eigen::MatrixXd k = Eigen::MatrixXd::Constant(6, 6, 0.05);
  for (auto [x, y] : {std::pair{0, 1}, {2, 3}, {4, 5}, {0, 4}, {0, 5}, {1, 4}, {1, 5}}) k(x, y) = k(y, x) = 0.9;
  k.diagonal().setOnes();
  RegionAffinity a{k, 1.0, {}};
  std::vector<Histogram> h(6, fixture::color({{0, 1}}));
  std::vector<Candidate> c;
  const double imp[] = {0.9, 0.8, 0.5, 0.5, 0.95, 0.1};
  for (int i = 0; i < 6; ++i) c.push_back({RegionKey{i, 0}, &h[i], imp[i]});
  const auto kept = prune_redundant({{0, 1}, {2, 3}, {4, 5}}, a, c, GroupingConfig{});
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].members == std::vector<int>{0, 1});  // mean 0.85 beats 0.525
  CHECK(kept[0].avg_importance == doctest::Approx(0.85));
  CHECK(kept[1].members == std::vector<int>{2, 3});

  // just below the level survives
  GroupingConfig loose;
  loose.redundancy = 0.91;
  CHECK(prune_redundant({{0, 1}, {2, 3}, {4, 5}}, a, c, loose).size() == 3);
}

TEST_CASE("representative is the importance argmax, ties to the earlier key") {
  std::vector<Histogram> h(4, fixture::color({{0, 1}}));
  std::vector<Candidate> c{{RegionKey{5, 2}, &h[0], 0.7},
                           {RegionKey{3, 9}, &h[1], 0.7},
                           {RegionKey{3, 1}, &h[2], 0.7},
                           {RegionKey{1, 1}, &h[3], 0.2}};
  std::vector<ObjectCluster> clusters{{{0, 1, 2, 3}, 0, -1}};
  select_representatives(clusters, c);
  CHECK(clusters[0].representative == 2);
  c[0].importance = 0.8;
  select_representatives(clusters, c);
  CHECK(clusters[0].representative == 0);
}

TEST_CASE("group_event caps candidates to the top M") {
  Pool p = make_pool({6, 6}, 3);
  GroupingConfig cfg;
  cfg.max_candidates = 5;
  auto cand = p.candidates;
  const auto clusters = group_event(cand, cfg);
  CHECK(cand.size() == 5);
  for (std::size_t i = 1; i < cand.size(); ++i) CHECK(cand[i - 1].importance >= cand[i].importance);
  int total = 0;
  for (const auto& c : clusters) total += static_cast<int>(c.members.size());
  CHECK(total <= 5);

  std::vector<Candidate> empty;
  CHECK(group_event(empty, cfg).empty());
}

TEST_CASE("grouping is invariant to candidate order") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Pool p = make_pool({4, 3, 5}, seed + 70);
    auto a = p.candidates;
    auto b = p.candidates;
    std::reverse(b.begin(), b.end());
    auto keys = [](const std::vector<ObjectCluster>& cl, const std::vector<Candidate>& c) {
      std::set<std::pair<std::vector<RegionKey>, RegionKey>> out;
      for (const auto& x : cl) {
        std::vector<RegionKey> m;
        for (int i : x.members) m.push_back(c[static_cast<std::size_t>(i)].key);
        std::sort(m.begin(), m.end());
        out.insert({m, c[static_cast<std::size_t>(x.representative)].key});
      }
      return out;
    };
    const auto ca = group_event(a, GroupingConfig{});
    const auto cb = group_event(b, GroupingConfig{});
    CHECK(keys(ca, a) == keys(cb, b));
  }
}
