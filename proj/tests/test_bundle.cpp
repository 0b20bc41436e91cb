#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "egosum/bundle.hpp"
#include "egosum/synth.hpp"
#include "fixtures.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace egosum;

namespace {

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("egosum_test_" + name);
}

std::vector<std::string> rules(const std::vector<Violation>& v) {
  std::vector<std::string> out;
  for (const auto& x : v) out.push_back(x.rule);
  return out;
}

}  // namespace

TEST_CASE("stride 15 over 150 frames keeps 10, re-indexed") {
  const VideoBundle b = fixture::small_bundle(150);
  const VideoBundle s = subsample(b, 15);
  REQUIRE(s.frames.size() == 10);
  for (int i = 0; i < 10; ++i) CHECK(s.frames[i].index == i);
  CHECK(s.fps_effective() == doctest::Approx(1.0));
  CHECK(same_histogram(s.frames[3].global_color_hist, b.frames[45].global_color_hist));
  // GT of frame 45 follows it to index 3
  CHECK(s.ground_truth_for(3).size() == 1);
  CHECK(validate_bundle(s).empty());
}

TEST_CASE("stride 1 is the identity") {
  const VideoBundle b = fixture::small_bundle(12);
  CHECK(same_bundle(subsample(b, 1), b));
}

TEST_CASE("stride s then t equals stride s*t") {
  const VideoBundle b = fixture::small_bundle(50);
  for (int s : {1, 2, 3})
    for (int t : {1, 2, 4}) CHECK(same_bundle(subsample(subsample(b, s), t), subsample(b, s * t)));
}

TEST_CASE("save then load reproduces the bundle exactly") {
  const VideoBundle b = fixture::small_bundle(9);
  const auto path = temp_path("roundtrip.jsonl");
  save_bundle(b, path);
  CHECK(same_bundle(load_bundle(path, 1), b));

  // synthetic bundle with skin superpixels and optional flow absent
  ScenarioSpec spec = make_block_scenario(5, {4, 4});
  spec.skin_superpixels = true;
  const VideoBundle g = generate(spec).bundle;
  save_bundle(g, path);
  CHECK(same_bundle(load_bundle(path, 1), g));
  std::filesystem::remove(path);
}

TEST_CASE("well-formed bundle validates clean") {
  CHECK(validate_bundle(fixture::small_bundle(5)).empty());
  CHECK(validate_bundle(generate(make_day_scenario(2, 2, 20, 2)).bundle).empty());
}

TEST_CASE("negative histogram entry is one nonnegative-hist report") {
  VideoBundle b = fixture::small_bundle(4);
  b.frames[2].regions[1].color_hist.coeffRef(9) = -1;
  const auto v = validate_bundle(b);
  REQUIRE(v.size() == 1);
  CHECK(v[0].rule == "nonnegative-hist");
  CHECK(v[0].frame == 2);
  CHECK(v[0].entity == "region 7");
}

TEST_CASE("non-contiguous frame indices are one contiguous-frames report") {
  VideoBundle b = fixture::small_bundle(4);
  b.frames[3].index = 5;
  const auto v = validate_bundle(b);
  REQUIRE(v.size() == 1);
  CHECK(v[0].rule == "contiguous-frames");
}

TEST_CASE("other invariants are reported by rule name") {
  VideoBundle b = fixture::small_bundle(3);
  b.frames[0].regions[0].bbox.w = 400;  // past frame_width
  CHECK(rules(validate_bundle(b)) == std::vector<std::string>{"bbox-in-frame"});

  b = fixture::small_bundle(3);
  b.frames[1].regions[1].region_id = 0;
  CHECK(rules(validate_bundle(b)) == std::vector<std::string>{"unique-region-id"});

  b = fixture::small_bundle(3);
  b.frames[1].regions[0].centroid = {200, 200};
  CHECK(rules(validate_bundle(b)) == std::vector<std::string>{"centroid-in-bbox"});

  b = fixture::small_bundle(3);
  b.frames[1].point_xy(0, 1) = 320;  // x must be < width
  CHECK(rules(validate_bundle(b)) == std::vector<std::string>{"point-in-frame"});

  b = fixture::small_bundle(3);
  b.frames[0].regions[0].member_point_ids.push_back(3);
  CHECK(rules(validate_bundle(b)) == std::vector<std::string>{"member-point-range"});

  b = fixture::small_bundle(3);
  b.frames[2].regions[0].color_hist.coeffRef(5) = 320.0 * 240.0;
  CHECK(rules(validate_bundle(b)) == std::vector<std::string>{"hist-mass"});

  b = fixture::small_bundle(3);
  b.frames[2].regions[0].area = 0;
  CHECK(rules(validate_bundle(b)) == std::vector<std::string>{"area-positive"});

  b = fixture::small_bundle(3);
  b.ground_truth[0].object_label.clear();
  CHECK(rules(validate_bundle(b)) == std::vector<std::string>{"gt-label"});

  b = fixture::small_bundle(3);
  b.frames[1].descriptors.conservativeResize(7, Eigen::NoChange);
  CHECK(rules(validate_bundle(b)) == std::vector<std::string>{"descriptor-dim"});
}

TEST_CASE("load refuses a bbox past the frame and names the region") {
  VideoBundle b = fixture::small_bundle(3);
  b.frames[1].regions[1].bbox.x = 300;
  b.frames[1].regions[1].centroid = b.frames[1].regions[1].bbox.center();
  const auto path = temp_path("bad.jsonl");
  save_bundle(b, path);
  try {
    load_bundle(path, 1);
    FAIL("expected BundleError");
  } catch (const BundleError& e) {
    CHECK(e.frame() == 1);
    CHECK(e.field_path() == "region 7");
    CHECK(std::string(e.what()).find("bbox-in-frame") != std::string::npos);
  }
  std::filesystem::remove(path);
}

TEST_CASE("schema errors carry the field path and frame") {
  std::ostringstream out;
  write_bundle(fixture::small_bundle(2), out);
  std::string text = out.str();
  // break the second frame's first region area
  const auto second = text.find('\n', text.find('\n') + 1) + 1;
  const auto pos = text.find("\"area\":", second);
  text.replace(pos, 7, "\"arae\":");
  std::istringstream in(text);
  try {
    parse_bundle(in);
    FAIL("expected BundleError");
  } catch (const BundleError& e) {
    CHECK(e.frame() == 1);
    CHECK(e.field_path().find("area") != std::string::npos);
  }

  std::istringstream mismatch(R"({"format":"egosum-bundle","version":1,"video_id":"x","fps":1,"frame_width":10,"frame_height":10,"descriptor_dim":2}
{"index":0,"color_hist":[],"regions":[],"points":[{"xy":[1,1],"desc":[1,2,3]}]})");
  CHECK_THROWS_AS(parse_bundle(mismatch), BundleError);

  std::istringstream wrong_format(R"({"format":"other","version":1})");
  CHECK_THROWS_AS(parse_bundle(wrong_format), BundleError);
}

TEST_CASE("missing file is an I/O error") {
  CHECK_THROWS_AS(load_bundle("/nonexistent/bundle.jsonl", 1), BundleError);
  CHECK_THROWS(load_bundle("/nonexistent/bundle.jsonl", 0));
}

TEST_CASE("checked-in example bundles load and validate") {
  for (const char* name : {"tiny.jsonl", "synth_day.jsonl"}) {
    const auto path = std::filesystem::path(EGOSUM_SOURCE_DIR) / "data" / name;
    CAPTURE(name);
    REQUIRE(std::filesystem::exists(path));
    const VideoBundle b = load_bundle(path, 1);
    CHECK(!b.frames.empty());
    CHECK(validate_bundle(b).empty());
  }
}
