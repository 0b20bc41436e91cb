#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "egosum/eval.hpp"
#include "egosum/rng.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

#include <cmath>
#include <set>

using namespace egosum;

namespace {

VideoBundle gt_video(int n_frames, std::vector<GtRegion> gt) {
  VideoBundle b;
  b.video_id = "gt";
  b.frame_width = 200;
  b.frame_height = 100;
  for (int f = 0; f < n_frames; ++f) {
    FrameRecord fr;
    fr.index = f;
    b.frames.push_back(fr);
  }
  b.ground_truth = std::move(gt);
  return b;
}

}  // namespace

TEST_CASE("labelling uses a strict IoU above one half") {
  const std::vector<GtRegion> gt{{0, {0, 0, 10, 10}, "a"}, {1, {50, 50, 10, 10}, "b"}};
  const std::vector<ScoredRegion> p{
      {0, {0, 0, 10, 10}, 0.9},   // IoU 1
      {0, {0, 0, 20, 10}, 0.8},   // IoU exactly 0.5
      {0, {0, 0, 19, 10}, 0.7},   // IoU 10/19
      {1, {0, 0, 10, 10}, 0.6},   // other frame's box does not count
      {2, {50, 50, 10, 10}, 0.5}  // frame without GT
  };
  const auto l = label_regions(p, gt);
  REQUIRE(l.size() == 5);
  CHECK(l[0].positive);
  CHECK(!l[1].positive);
  CHECK(l[2].positive);
  CHECK(!l[3].positive);
  CHECK(!l[4].positive);
  CHECK(l[2].score == 0.7);
}

TEST_CASE("perfect ranking has AP 1, worst ranking its closed form") {
  std::vector<LabeledScore> s;
  for (int i = 0; i < 10; ++i) s.push_back({10.0 - i, i < 3});
  CHECK(pr_curve(s).average_precision == doctest::Approx(1.0));
  for (auto& x : s) x.score = -x.score;
  // positives at ranks 8, 9, 10
  CHECK(pr_curve(s).average_precision == doctest::Approx((1.0 / 8 + 2.0 / 9 + 3.0 / 10) / 3));
}

TEST_CASE("AP equals the rank formula on distinct scores") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<LabeledScore> s;
    std::vector<std::pair<double, bool>> o;
    bool any = false;
    for (int i = 0; i < 40; ++i) {
      const double score = rng.uniform();
      const bool pos = rng.uniform() < 0.3;
      any |= pos;
      s.push_back({score, pos});
      o.push_back({score, pos});
    }
    if (!any) continue;
    CHECK(pr_curve(s).average_precision == doctest::Approx(oracle::ap_by_rank(o)).epsilon(1e-12));
  }
}

TEST_CASE("tied scores form one threshold step") {
  const std::vector<LabeledScore> s{{1.0, true}, {0.5, true}, {0.5, false}, {0.1, false}};
  const PrCurve c = pr_curve(s);
  REQUIRE(c.points.size() == 3);
  CHECK(c.points[1].recall == 1.0);
  CHECK(c.points[1].precision == doctest::Approx(2.0 / 3));
  CHECK(c.average_precision == doctest::Approx(0.5 * 1.0 + 0.5 * 2.0 / 3));
  // the curve is monotone in recall
  for (std::size_t i = 1; i < c.points.size(); ++i) CHECK(c.points[i].recall >= c.points[i - 1].recall);
}

TEST_CASE("no positives is an error") {
  CHECK_THROWS_AS(pr_curve({{0.3, false}}), std::invalid_argument);
  CHECK_THROWS_AS(pr_curve({}), std::invalid_argument);
}

TEST_CASE("main label is the largest GT box of the frame") {
  const VideoBundle b = gt_video(3, {{0, {0, 0, 10, 10}, "small"}, {0, {0, 0, 30, 30}, "big"}, {1, {0, 0, 5, 5}, "small"}});
  CHECK(main_label(b, 0) == "big");
  CHECK(main_label(b, 1) == "small");
  CHECK(main_label(b, 2).empty());
}

TEST_CASE("object recall counts main labels over the selection") {
  const VideoBundle b = gt_video(4, {{0, {0, 0, 10, 10}, "a"},
                                      {0, {0, 0, 30, 30}, "b"},
                                      {1, {0, 0, 5, 5}, "a"},
                                      {3, {0, 0, 5, 5}, "c"}});
  CHECK(object_recall({0}, b) == doctest::Approx(1.0 / 3));
  CHECK(object_recall({0, 1}, b) == doctest::Approx(2.0 / 3));
  CHECK(object_recall({0, 1, 2, 3}, b) == 1.0);
  CHECK(object_recall({2}, b) == 0.0);
  CHECK(object_recall({}, b) == 0.0);
  CHECK_THROWS_AS(object_recall({0}, gt_video(2, {})), std::invalid_argument);
}

TEST_CASE("prominence takes the most central appearance of each covered label") {
  // frame centre is (100, 50)
  const VideoBundle b = gt_video(3, {{0, {0, 0, 20, 20}, "a"},
                                      {1, {90, 40, 20, 20}, "a"},
                                      {2, {100, 50, 60, 40}, "b"}});
  const auto p = prominence({0, 1, 2}, b);
  REQUIRE(p.size() == 2);
  CHECK(p.at("a") == 0.0);
  CHECK(p.at("b") == doctest::Approx(std::hypot(30.0, 20.0)));
  CHECK(mean_prominence(p) == doctest::Approx(std::hypot(30.0, 20.0) / 2));
  CHECK(prominence({0}, b).at("a") == doctest::Approx(std::hypot(90.0, 40.0)));
  CHECK(std::isnan(mean_prominence({})));
}

TEST_CASE("uniform baseline") {
  CHECK(uniform_baseline(10, 1) == std::vector<int>{0});
  CHECK(uniform_baseline(10, 2) == std::vector<int>{0, 9});
  CHECK(uniform_baseline(10, 4) == std::vector<int>{0, 3, 6, 9});
  CHECK(uniform_baseline(5, 5) == std::vector<int>{0, 1, 2, 3, 4});
  CHECK(uniform_baseline(100, 3) == std::vector<int>{0, 50, 99});  // 49.5 rounds away from zero
  CHECK_THROWS_AS(uniform_baseline(5, 6), std::invalid_argument);
  CHECK_THROWS_AS(uniform_baseline(5, 0), std::invalid_argument);
  for (int F = 1; F < 40; ++F)
    for (int n = 1; n <= F; ++n) {
      const auto u = uniform_baseline(F, n);
      CHECK(std::set<int>(u.begin(), u.end()).size() == static_cast<std::size_t>(n));
      CHECK(u.back() == (n == 1 ? 0 : F - 1));
    }
}

TEST_CASE("event-adaptive baseline") {
  const std::vector<Event> ev{{0, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9}, 0, 9}, {1, {10, 11}, 10, 11}, {2, {12, 13, 14, 15, 16}, 12, 16}};
  CHECK(event_adaptive_baseline(ev, 3) == std::vector<int>{0, 10, 12});
  CHECK(event_adaptive_baseline(ev, 2) == std::vector<int>{0, 10});
  // event 1 saturates at 2 and the rest go round-robin to the others
  CHECK(event_adaptive_baseline(ev, 8) == std::vector<int>{0, 5, 9, 10, 11, 12, 14, 16});
  CHECK(event_adaptive_baseline(ev, 17).size() == 17);
  CHECK_THROWS_AS(event_adaptive_baseline(ev, 18), std::invalid_argument);
  CHECK_THROWS_AS(event_adaptive_baseline(ev, 0), std::invalid_argument);
}
