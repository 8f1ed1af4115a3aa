#include "scribble/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

namespace scribble::synthetic {

namespace {

constexpr double kTau = 2.0 * std::numbers::pi;

Point2 lerp(Point2 a, Point2 b, double u) { return a + (b - a) * u; }

Point2 rounded(Point2 p) { return {std::round(p.x), std::round(p.y)}; }

void stamp_capsule(BinaryMask& m, Point2 a, Point2 b, double r) {
    const int x0 = std::max(0, static_cast<int>(std::floor(std::min(a.x, b.x) - r)));
    const int x1 = std::min(m.width() - 1, static_cast<int>(std::ceil(std::max(a.x, b.x) + r)));
    const int y0 = std::max(0, static_cast<int>(std::floor(std::min(a.y, b.y) - r)));
    const int y1 = std::min(m.height() - 1, static_cast<int>(std::ceil(std::max(a.y, b.y) + r)));
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            if (point_segment_distance({static_cast<double>(x), static_cast<double>(y)}, a, b) <= r) m.set(x, y);
        }
    }
}

Stroke stroke(Polyline pts, Rgba color, double width) { return {std::move(pts), {color, width, 1.0}}; }

Polyline arc(Point2 c, double r, double from_deg, double to_deg, int steps) {
    Polyline pts;
    for (int k = 0; k <= steps; ++k) {
        const double a = (from_deg + (to_deg - from_deg) * k / steps) * std::numbers::pi / 180.0;
        pts.push_back(rounded({c.x + r * std::cos(a), c.y + r * std::sin(a)}));
    }
    return pts;
}

}  // namespace

Point2 ball_center(FrameSize size, std::int64_t i) {
    const double t = static_cast<double>(i);
    return {size.width * (0.2 + 0.6 * (0.5 + 0.5 * std::sin(kTau * t / 240.0))),
            size.height * (0.2 + 0.1 * std::cos(kTau * t / 120.0))};
}

RgbImage frame(FrameSize size, std::int64_t i) {
    RgbImage img(size.width, size.height, kBackground);

    const int side = std::max(4, size.width / 20);
    const int sx = static_cast<int>(size.width * 0.8);
    const int sy = static_cast<int>(size.height * 0.7);
    for (int y = sy; y < std::min(size.height, sy + side); ++y) {
        for (int x = sx; x < std::min(size.width, sx + side); ++x) img.set(x, y, kDistractorColor);
    }

    const Point2 c = ball_center(size, i);
    const int r = kBallRadius;
    for (int y = static_cast<int>(c.y) - r - 1; y <= static_cast<int>(c.y) + r + 1; ++y) {
        for (int x = static_cast<int>(c.x) - r - 1; x <= static_cast<int>(c.x) + r + 1; ++x) {
            if (img.contains(x, y) && distance({static_cast<double>(x), static_cast<double>(y)}, c) <= r) {
                img.set(x, y, kBallColor);
            }
        }
    }
    return img;
}

PoseFrame pose(FrameSize size, std::int64_t i) {
    const double s = size.height / 480.0;
    const double cx = size.width * 0.5;
    const double h = size.height;
    PoseFrame p;
    auto put = [&](int k, Point2 at) { p.keypoints[static_cast<std::size_t>(k)] = {at, true}; };

    const Point2 nose{cx, 0.25 * h};
    put(0, nose);
    for (int k = 1; k <= 10; ++k) {
        const double a = kTau * k / 10.0;
        put(k, {nose.x + 14 * s * std::cos(a), nose.y + 10 * s * std::sin(a)});
    }
    put(11, {cx + 40 * s, 0.35 * h});
    put(12, {cx - 40 * s, 0.35 * h});
    put(13, {cx + 70 * s, 0.42 * h});
    put(14, {cx - 70 * s, 0.45 * h});

    const Point2 raised{cx + 110 * s, 0.30 * h};
    const Point2 lowered{cx - 20 * s, 0.85 * h};
    const double u = 0.5 - 0.5 * std::cos(kTau * static_cast<double>(i) / 60.0);
    const Point2 left_wrist = lerp(raised, lowered, u * u);
    const Point2 right_wrist{cx - 90 * s, 0.55 * h};
    put(15, left_wrist);
    put(16, right_wrist);
    put(17, left_wrist + Point2{6 * s, 4 * s});
    put(19, left_wrist + Point2{8 * s, 0});
    put(21, left_wrist + Point2{4 * s, -4 * s});
    put(18, right_wrist + Point2{-6 * s, 4 * s});
    put(20, right_wrist + Point2{-8 * s, 0});
    put(22, right_wrist + Point2{-4 * s, -4 * s});

    put(23, {cx + 25 * s, 0.60 * h});
    put(24, {cx - 25 * s, 0.60 * h});
    put(25, {cx + 28 * s, 0.75 * h});
    put(26, {cx - 28 * s, 0.75 * h});
    put(27, {cx + 30 * s, 0.90 * h});
    put(28, {cx - 30 * s, 0.90 * h});
    put(29, {cx + 26 * s, 0.92 * h});
    put(30, {cx - 26 * s, 0.92 * h});
    put(31, {cx + 42 * s, 0.92 * h});
    put(32, {cx - 42 * s, 0.92 * h});
    return p;
}

BinaryMask body_mask(const PoseFrame& pose, FrameSize size) {
    BinaryMask m(size.width, size.height);
    const double s = size.height / 480.0;
    auto kp = [&](int k) { return pose.keypoints[static_cast<std::size_t>(k)].position; };
    auto mid = [&](int a, int b) { return (kp(a) + kp(b)) * 0.5; };

    stamp_capsule(m, kp(0), kp(0), 26 * s);
    stamp_capsule(m, mid(11, 12), mid(23, 24), 34 * s);
    stamp_capsule(m, kp(0), mid(11, 12), 10 * s);
    const int bones[][2] = {{11, 12}, {11, 13}, {13, 15}, {12, 14}, {14, 16}, {23, 24},
                            {23, 25}, {25, 27}, {24, 26}, {26, 28}, {27, 31}, {28, 32}};
    for (const auto& b : bones) stamp_capsule(m, kp(b[0]), kp(b[1]), 9 * s);
    return m;
}

Scene teaser_scene(FrameSize size, std::uint64_t seed) {
    Scene scene;
    scene.frame_size = size;
    scene.frame_rate = 30.0;
    scene.seed = seed;

    const Point2 ball0 = rounded(ball_center(size, 0));
    const PoseFrame pose0 = pose(size, 0);
    const Point2 hand0 = rounded(pose0.keypoints[kHandKeypoint].position);
    const Point2 foot0 = rounded(pose0.keypoints[kFootKeypoint].position);

    ColorWindow w{static_cast<std::uint8_t>(kBallColor.r - 10), static_cast<std::uint8_t>(kBallColor.r + 10),
                  static_cast<std::uint8_t>(kBallColor.g - 10), static_cast<std::uint8_t>(kBallColor.g + 10),
                  static_cast<std::uint8_t>(kBallColor.b - 10), static_cast<std::uint8_t>(kBallColor.b + 10)};
    scene.trackers.push_back({"ball", ColorBlobSource{ball0, w}});
    scene.trackers.push_back({"hand", KeypointSource{kHandKeypoint}});
    scene.trackers.push_back({"foot", KeypointSource{kFootKeypoint}});

    const Rgba ink{30, 30, 30, 255};
    const Rgba blue{40, 110, 230, 255};
    const Rgba white{245, 245, 245, 255};

    SketchElement umbrella{"umbrella", {}, hand0};
    umbrella.strokes.push_back(stroke(arc(hand0 + Point2{0, -60}, 40, 180, 360, 12), blue, 5));
    umbrella.strokes.push_back(stroke({hand0 + Point2{0, -60}, hand0}, ink, 3));
    scene.elements.push_back(umbrella);

    SketchElement cloud{"cloud", {}, ball0};
    cloud.strokes.push_back(stroke(arc(ball0 + Point2{-18, 0}, 16, 90, 270, 8), white, 4));
    cloud.strokes.push_back(stroke(arc(ball0 + Point2{0, -10}, 18, 180, 360, 8), white, 4));
    cloud.strokes.push_back(stroke(arc(ball0 + Point2{18, 0}, 16, 270, 450, 8), white, 4));
    scene.elements.push_back(cloud);

    const Point2 drop0{40, 40};
    scene.elements.push_back({"raindrop", {stroke({drop0, drop0 + Point2{0, 8}}, blue, 2)}, drop0});

    for (int k = 1; k <= 3; ++k) {
        const double spread = 10.0 * k;
        SketchElement page{"splash" + std::to_string(k), {}, foot0};
        page.strokes.push_back(stroke({foot0 + Point2{-spread, -4.0 * k}, foot0 + Point2{-spread / 2, 0}}, blue, 3));
        page.strokes.push_back(stroke({foot0 + Point2{spread, -4.0 * k}, foot0 + Point2{spread / 2, 0}}, blue, 3));
        scene.elements.push_back(page);
    }

    const Point2 dot0{20, 20};
    scene.elements.push_back({"dot", {stroke(arc(dot0, 3, 0, 360, 6), Rgba{255, 200, 0, 255}, 2)}, dot0});

    scene.effects.push_back({"bind-umbrella", {"umbrella"}, {"hand"}, BindingParams{hand0}});
    scene.effects.push_back({"bind-cloud", {"cloud"}, {"ball"}, BindingParams{ball0}});
    scene.effects.push_back({"splash", {"splash1", "splash2", "splash3"}, {}, FlipBookParams{8.0}});
    TriggerParams stomp;
    stomp.threshold = 60;
    stomp.payload_effect = "splash";
    scene.effects.push_back({"stomp", {}, {"hand", "foot"}, stomp});

    ParticleParams rain;
    rain.emitter = {ball0 + Point2{-30, 16}, ball0 + Point2{30, 16}};
    rain.spawn_rate = 12;
    rain.speed = 120;
    rain.lifetime = 1.5;
    rain.anchor = ball0;
    scene.effects.push_back({"rain", {"raindrop"}, {"ball"}, rain});

    scene.effects.push_back({"trail", {"dot"}, {"ball"}, TrajectoryParams{}});

    ContourParams outline;
    outline.source = ContourSource::BodyMask;
    outline.animated = true;
    outline.fill = Rgba{255, 213, 74, 64};
    outline.stroke = {white, 3.0, 1.0};
    scene.effects.push_back({"outline", {}, {}, outline});
    return scene;
}

void write_clip(const std::filesystem::path& dir, FrameSize size, std::int64_t count, const Scene& scene) {
    std::filesystem::create_directories(dir / "frames");
    PoseTrack track;
    track.frame_rate = scene.frame_rate;
    std::vector<BinaryMask> masks;
    for (std::int64_t i = 0; i < count; ++i) {
        write_png(dir / "frames" / (frame_stem(i) + ".png"), frame(size, i));
        track.frames.push_back(pose(size, i));
        masks.push_back(body_mask(track.frames.back(), size));
    }
    std::ofstream(dir / "pose.json") << serialize_pose_track(track);
    save_masks(dir / "masks.bin", masks);
    save_scene_file(dir / "scene.json", scene);
}

}  // namespace scribble::synthetic
