#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "json.hpp"

#include "scribble/scene_io.hpp"
#include "support/errors.hpp"
#include "support/oracles.hpp"
#include "support/scene_fuzz.hpp"

using namespace scribble;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("scribble_io_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string pose_doc(int frames, int keypoints = 33, int skip = -1) {
    json doc = {{"frame_rate", 30}, {"frames", json::array()}};
    for (int i = 0; i < frames; ++i) {
        if (i == skip) continue;
        json kps = json::array();
        for (int k = 0; k < keypoints; ++k) kps.push_back({k, i, true});
        doc["frames"].push_back({{"index", i}, {"keypoints", kps}});
    }
    return doc.dump();
}

}  // namespace

TEST_CASE("minimal document") {
    const Scene s = parse_scene(R"({"version": 1, "frame_size": {"width": 640, "height": 480}, "seed": 0})");
    CHECK(s == Scene{});
}

TEST_CASE("malformed documents") {
    CHECK(error_code([] { parse_scene("{\"version\": 1,"); }) == "syntax");
    CHECK(error_code([] { parse_scene("[]"); }) == "schema(document)");
    CHECK(error_code([] { parse_scene(R"({"frame_size": {"width": 1, "height": 1}})"); }) == "schema(version)");
    CHECK(error_code([] { parse_scene(R"({"version": 2, "frame_size": {"width": 1, "height": 1}})"); }) ==
          "schema(version)");
    CHECK(error_code([] {
              parse_scene(R"({"version": 1, "frame_size": {"width": 8, "height": 8},
                 "trackers": [{"id": "k", "kind": "keypoint", "index": 33}]})");
          }) == "schema(keypoint-index)");
    CHECK(error_code([] {
              parse_scene(R"({"version": 1, "frame_size": {"width": 8, "height": 8},
                 "effects": [{"id": "f", "kind": "binding", "params": {"speed": 3}}]})");
          }) == "schema(params.speed)");
    CHECK(error_code([] {
              parse_scene(R"({"version": 1, "frame_size": {"width": 8, "height": 8},
                 "effects": [{"id": "f", "kind": "wiggle"}]})");
          }) == "schema(kind)");
    CHECK(error_code([] {
              parse_scene(R"({"version": 1, "frame_size": {"width": 8, "height": 8},
                 "elements": [{"id": "e", "strokes": [{"points": [[0, 0], [1, 1]], "color": "red"}]}]})");
          }) == "schema(color)");

    const std::string dangling = R"({"version": 1, "frame_size": {"width": 8, "height": 8},
        "elements": [{"id": "e", "strokes": [{"points": [[0, 0], [1, 1]]}]}],
        "effects": [{"id": "b", "kind": "binding", "elements": ["e"], "trackers": ["nope"]}]})";
    try {
        parse_scene(dangling);
        FAIL("expected invalid-scene");
    } catch (const Error& e) {
        CHECK(e.code() == "invalid-scene");
        REQUIRE(!e.diagnostics().empty());
        CHECK(e.diagnostics()[0].rule == "dangling-tracker");
    }
}

TEST_CASE("serialization is canonical and round-trips") {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 20; ++i) {
        const Scene s = fuzz::scene(rng);
        const std::string text = serialize_scene(s);
        CHECK(serialize_scene(s) == text);
        const Scene back = parse_scene(text);
        CHECK(back == s);
        CHECK(serialize_scene(back) == text);

        // Reordering keys and reformatting does not change the canonical form.
        const std::string compact = json::parse(text).dump();
        CHECK(serialize_scene(parse_scene(compact)) == text);
    }
}

TEST_CASE("scenes differing only in seed differ only in the seed line") {
    std::mt19937_64 rng(9);
    Scene a = fuzz::scene(rng);
    Scene b = a;
    a.seed = 1;
    b.seed = 2;
    const std::string sa = serialize_scene(a), sb = serialize_scene(b);
    std::istringstream ia(sa), ib(sb);
    std::string la, lb;
    int differing = 0;
    while (std::getline(ia, la) && std::getline(ib, lb)) {
        if (la != lb) {
            ++differing;
            CHECK(la.find("\"seed\"") != std::string::npos);
        }
    }
    CHECK(differing == 1);
}

TEST_CASE("canonical_number keeps 6 significant digits") {
    CHECK(canonical_number(1.23456789) == 1.23457);
    CHECK(canonical_number(123456.7) == 123457);
    CHECK(canonical_number(0.25) == 0.25);
    CHECK(canonical_number(canonical_number(3.14159265)) == canonical_number(3.14159265));
    CHECK(format_rgba({1, 2, 255, 16}) == "#0102ff10");
    CHECK(parse_rgba("#0102ff10") == Rgba{1, 2, 255, 16});
    CHECK(parse_rgba("#0102ff") == Rgba{1, 2, 255, 255});
    CHECK_FALSE(parse_rgba("#0102f"));
    CHECK_FALSE(parse_rgba("0102ff10"));
}

TEST_CASE("pose tracks") {
    // Circling wrist written by a generator with known positions.
    PoseTrack track;
    for (int i = 0; i < 10; ++i) {
        PoseFrame f;
        const double a = i * 0.6283185307179586;
        f.keypoints[15] = {{canonical_number(100 + 20 * std::cos(a)), canonical_number(80 + 20 * std::sin(a))}, true};
        track.frames.push_back(f);
    }
    const PoseTrack back = parse_pose_track(serialize_pose_track(track));
    REQUIRE(back.frames.size() == 10);
    for (int i = 0; i < 10; ++i) {
        const Point2 p = back.frames[i].keypoints[15].position;
        CHECK(std::hypot(p.x - 100, p.y - 80) == doctest::Approx(20).epsilon(1e-4));
        CHECK(back.frames[i] == track.frames[i]);
    }

    CHECK(parse_pose_track(pose_doc(3)).frames.size() == 3);
    CHECK(error_code([] { parse_pose_track(pose_doc(3, 32)); }) == "pose-arity(0)");
    CHECK(error_code([] { parse_pose_track(pose_doc(3, 33, 1)); }) == "pose-gap");
    CHECK(error_code([] { parse_pose_track(""); }) == "pose-gap");
    CHECK(error_code([] { parse_pose_track(pose_doc(0)); }) == "pose-gap");
    CHECK(error_code([] { parse_pose_track("{"); }) == "syntax");
}

TEST_CASE("mask sidecar") {
    std::mt19937_64 rng(6);
    std::vector<BinaryMask> masks;
    for (int i = 0; i < 10; ++i) masks.push_back(oracle::random_mask(rng, 40));
    masks.push_back(BinaryMask(5, 3));
    const auto bytes = encode_masks(masks);
    CHECK(decode_masks(bytes) == masks);

    // 2x2 mask with only the last pixel set: runs [3 unset, 1 set].
    BinaryMask m(2, 2);
    m.set(1, 1);
    const std::vector<std::uint8_t> want = {2, 0, 0, 0, 2, 0, 0, 0, 3, 0, 0, 0, 1, 0, 0, 0};
    CHECK(encode_masks({m}) == want);

    auto truncated = want;
    truncated.pop_back();
    CHECK(error_code([&] { decode_masks(truncated); }) == "mask-format");
    auto overflow = want;
    overflow[12] = 2;
    CHECK(error_code([&] { decode_masks(overflow); }) == "mask-format");
}

TEST_CASE("images and frame sequences") {
    const fs::path dir = scratch("frames");
    RgbImage a(6, 4, {1, 2, 3});
    a.set(5, 3, {200, 100, 50});
    write_png(dir / "frame_000000.png", a);
    write_ppm(dir / "frame_000001.ppm", a);
    write_png(dir / "frame_000002.png", a);
    CHECK(read_image(dir / "frame_000000.png") == a);
    CHECK(read_image(dir / "frame_000001.ppm") == a);

    FrameSequence seq(dir);
    CHECK(seq.size() == 3);
    int n = 0;
    while (auto f = seq.next()) {
        CHECK(*f == a);
        ++n;
    }
    CHECK(n == 3);

    const fs::path gap = scratch("gap");
    write_png(gap / "frame_000000.png", a);
    write_png(gap / "frame_000002.png", a);
    CHECK(error_code([&] { FrameSequence s(gap); }) == "frame-gap");

    const fs::path sizes = scratch("sizes");
    write_png(sizes / "frame_000000.png", RgbImage(640, 480));
    write_png(sizes / "frame_000001.png", RgbImage(320, 240));
    FrameSequence mixed(sizes);
    CHECK(mixed.next());
    CHECK(error_code([&] { mixed.next(); }) == "size-mismatch(1)");

    CHECK(frame_stem(42) == "frame_000042");
    CHECK(error_code([&] { read_image(dir / "missing.png"); }) == "image-read");
}
