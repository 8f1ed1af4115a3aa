#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "scribble/engine.hpp"
#include "scribble/render.hpp"
#include "support/errors.hpp"
#include "support/oracles.hpp"

using namespace scribble;

namespace {

std::size_t count_paths(const std::string& svg) {
    std::size_t n = 0;
    for (auto pos = svg.find("<path"); pos != std::string::npos; pos = svg.find("<path", pos + 1)) ++n;
    return n;
}

PathDrawable line(Point2 a, Point2 b, double width, Rgba color = {255, 0, 0, 255}) {
    PathDrawable d;
    d.points = {a, b};
    d.style = {color, width, 1.0};
    return d;
}

Scene one_bound_element() {
    Scene s;
    s.elements.push_back({"u", {{{{0, 0}, {10, 0}}, {}}}, {0, 0}});
    s.trackers.push_back({"hand", KeypointSource{15}});
    BindingParams p;
    p.anchor = Point2{100, 100};
    s.effects.push_back({"bind", {"u"}, {"hand"}, p});
    return s;
}

}  // namespace

TEST_CASE("emit_svg basics") {
    FrameOverlay empty;
    empty.frame_size = {320, 200};
    const std::string svg = emit_svg(empty);
    CHECK(count_paths(svg) == 0);
    CHECK(svg.find("width=\"320\" height=\"200\"") != std::string::npos);

    FrameOverlay one = empty;
    one.drawables.push_back(line({0, 0}, {10, 10}, 3));
    const std::string s1 = emit_svg(one);
    CHECK(count_paths(s1) == 1);
    CHECK(s1.find("d=\"M 0 0 L 10 10\"") != std::string::npos);
    CHECK(s1.find("stroke-width=\"3\"") != std::string::npos);
    CHECK(emit_svg(one) == s1);
}

TEST_CASE("format_number") {
    CHECK(format_number(0.0) == "0");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(-0.0001) == "0");
    CHECK(format_number(1.5) == "1.5");
    CHECK(format_number(2.12345) == "2.123");
    CHECK(format_number(100.0) == "100");
}

TEST_CASE("composite") {
    const RgbImage gray(20, 10, {128, 128, 128});
    FrameOverlay ov;
    ov.frame_size = {20, 10};
    CHECK(composite(gray, ov) == gray);

    SUBCASE("opaque full-frame fill") {
        BinaryMask all(20, 10);
        for (auto& b : all.bits()) b = 1;
        ov.drawables.push_back(RasterFill{all, {10, 200, 30, 255}});
        CHECK(composite(gray, ov) == RgbImage(20, 10, {10, 200, 30}));
    }
    SUBCASE("half-alpha red over gray follows source-over") {
        BinaryMask all(20, 10);
        for (auto& b : all.bits()) b = 1;
        ov.drawables.push_back(RasterFill{all, {255, 0, 0, 128}});
        const RgbImage out = composite(gray, ov);
        const double a = 128 / 255.0;
        CHECK(out.pixel(3, 3)[0] == oracle::over(128, 255, a));
        CHECK(out.pixel(3, 3)[1] == oracle::over(128, 0, a));
        CHECK(out.pixel(3, 3)[2] == oracle::over(128, 0, a));
    }
    SUBCASE("zero-alpha fill is a no-op") {
        BinaryMask all(20, 10);
        for (auto& b : all.bits()) b = 1;
        ov.drawables.push_back(RasterFill{all, {255, 0, 0, 0}});
        CHECK(composite(gray, ov) == gray);
    }
    SUBCASE("size mismatch") {
        CHECK(error_code([&] { composite(RgbImage(5, 5), ov); }) == "size-mismatch");
    }
}

TEST_CASE("composite is a monoid action and strokes stay in their padded box") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0, 40);
    std::uniform_real_distribution<double> w(0.5, 6);
    std::uniform_int_distribution<int> c(0, 255);
    auto color = [&] {
        return Rgba{static_cast<std::uint8_t>(c(rng)), static_cast<std::uint8_t>(c(rng)),
                    static_cast<std::uint8_t>(c(rng)), static_cast<std::uint8_t>(c(rng))};
    };
    for (int trial = 0; trial < 30; ++trial) {
        RgbImage base(40, 40);
        for (auto& b : base.bytes()) b = static_cast<std::uint8_t>(c(rng));
        FrameOverlay a, b;
        a.frame_size = b.frame_size = {40, 40};
        for (int i = 0; i < 3; ++i) a.drawables.push_back(line({u(rng), u(rng)}, {u(rng), u(rng)}, w(rng), color()));
        BinaryMask m(40, 40);
        for (auto& bit : m.bits()) bit = static_cast<std::uint8_t>(c(rng) & 1);
        b.drawables.push_back(RasterFill{m, color()});
        b.drawables.push_back(line({u(rng), u(rng)}, {u(rng), u(rng)}, w(rng), color()));
        FrameOverlay ab = a;
        ab.drawables.insert(ab.drawables.end(), b.drawables.begin(), b.drawables.end());
        CHECK(composite(composite(base, a), b) == composite(base, ab));

        const PathDrawable d = line({u(rng), u(rng)}, {u(rng), u(rng)}, w(rng), {255, 255, 255, 255});
        RgbImage canvas(40, 40);
        composite_drawable(canvas, d);
        const double pad = d.style.width / 2 + 1;
        const double x0 = std::min(d.points[0].x, d.points[1].x) - pad, x1 = std::max(d.points[0].x, d.points[1].x) + pad;
        const double y0 = std::min(d.points[0].y, d.points[1].y) - pad, y1 = std::max(d.points[0].y, d.points[1].y) + pad;
        for (int y = 0; y < 40; ++y)
            for (int x = 0; x < 40; ++x) {
                if (canvas.pixel(x, y)[0] == 0) continue;
                CHECK(x >= x0);
                CHECK(x <= x1);
                CHECK(y >= y0);
                CHECK(y <= y1);
            }
    }
}

TEST_CASE("stroke coverage") {
    RgbImage canvas(20, 20);
    composite_drawable(canvas, line({2, 10}, {17, 10}, 4, {200, 200, 200, 255}));
    CHECK(canvas.pixel(10, 10)[0] == 200);  // fully covered
    CHECK(canvas.pixel(10, 2)[0] == 0);     // far away
    // Row 12 sits on the edge: distance 2 from the axis, so about half covered.
    CHECK(canvas.pixel(10, 12)[0] == oracle::over(0, 200, 8 / 16.0));
}

TEST_CASE("resolve_frame") {
    const Scene s = one_bound_element();
    Engine e(s);
    PoseFrame pose;
    pose.keypoints[15] = {{110, 100}, true};
    const FrameOverlay ov = e.step({nullptr, &pose, nullptr});
    REQUIRE(ov.drawables.size() == 1);
    const auto& d = std::get<PathDrawable>(ov.drawables[0]);
    CHECK(d.transform == Transform::translation({10, 0}));

    SUBCASE("state-desync") {
        CHECK(error_code([&] { resolve_frame(s, {}, e.effect_states(), 0); }) == "state-desync");
        auto wrong = e.effect_states();
        wrong[0].effect_id = "other";
        CHECK(error_code([&] { resolve_frame(s, e.tracker_states(), wrong, 0); }) == "state-desync");
    }
    SUBCASE("un-fired trigger hides its payload") {
        Scene t = s;
        t.elements.push_back({"splash", {{{{0, 0}, {4, 4}}, {}}}, {0, 0}});
        t.trackers.push_back({"foot", KeypointSource{28}});
        TriggerParams p;
        p.threshold = 5;
        t.effects.push_back({"trig", {"splash"}, {"hand", "foot"}, p});
        Engine te(t);
        pose.keypoints[28] = {{300, 300}, true};
        const FrameOverlay o = te.step({nullptr, &pose, nullptr});
        CHECK(o.instance_count("splash") == 0);
        CHECK(o.instance_count("u") == 1);
    }
}

TEST_CASE("trajectory of 30 clones gives 30 instances") {
    Scene s;
    s.elements.push_back({"dot", {{{{0, 0}, {1, 1}}, {}}}, {0, 0}});
    s.trackers.push_back({"hand", KeypointSource{15}});
    s.effects.push_back({"trail", {"dot"}, {"hand"}, TrajectoryParams{}});
    Engine e(s);
    PoseFrame pose;
    FrameOverlay ov;
    for (int i = 0; i < 45; ++i) {
        pose.keypoints[15] = {{double(i), 0}, true};
        ov = e.step({nullptr, &pose, nullptr});
    }
    CHECK(ov.instance_count("dot") == 30);
    // Oldest first, newest last at full opacity.
    const auto& first = std::get<PathDrawable>(ov.drawables.front());
    const auto& last = std::get<PathDrawable>(ov.drawables.back());
    CHECK(first.transform.offset == Point2{15, 0});
    CHECK(last.transform.offset == Point2{44, 0});
    CHECK(last.opacity == 1.0);
    CHECK(first.opacity == doctest::Approx(std::pow(0.95, 29)));
}
