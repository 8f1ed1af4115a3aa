#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "scribble/error.hpp"
#include "scribble/geometry.hpp"

namespace scribble {

inline constexpr int kPoseKeypointCount = 33;

struct StrokeStyle {
    Rgba color{0, 0, 0, 255};
    double width = 4.0;
    double opacity = 1.0;

    friend bool operator==(const StrokeStyle&, const StrokeStyle&) = default;
};

struct Stroke {
    Polyline points;
    StrokeStyle style;

    friend bool operator==(const Stroke&, const Stroke&) = default;
};

/// A group of strokes that effects bind, clone and show/hide as one unit.
struct SketchElement {
    std::string id;
    std::vector<Stroke> strokes;
    Point2 local_origin{};

    friend bool operator==(const SketchElement&, const SketchElement&) = default;
};

/// Inclusive per-channel RGB bounds.
struct ColorWindow {
    std::uint8_t r_lo = 0, r_hi = 255;
    std::uint8_t g_lo = 0, g_hi = 255;
    std::uint8_t b_lo = 0, b_hi = 255;

    bool contains(std::uint8_t r, std::uint8_t g, std::uint8_t b) const {
        return r >= r_lo && r <= r_hi && g >= g_lo && g <= g_hi && b >= b_lo && b <= b_hi;
    }

    friend bool operator==(const ColorWindow&, const ColorWindow&) = default;
};

struct ColorBlobSource {
    Point2 seed_point;
    ColorWindow window;

    friend bool operator==(const ColorBlobSource&, const ColorBlobSource&) = default;
};

struct KeypointSource {
    int index = 0;

    friend bool operator==(const KeypointSource&, const KeypointSource&) = default;
};

struct TrackerSpec {
    std::string id;
    std::variant<ColorBlobSource, KeypointSource> source;

    bool is_color() const { return std::holds_alternative<ColorBlobSource>(source); }

    friend bool operator==(const TrackerSpec&, const TrackerSpec&) = default;
};

enum class EffectKind { Binding, FlipBook, Trigger, Particles, Trajectory, Contour };

std::string_view to_string(EffectKind k);
std::optional<EffectKind> effect_kind_from_string(std::string_view s);

struct BindingParams {
    /// Tracker position the element was drawn against. Filled from the first
    /// resolved frame when absent.
    std::optional<Point2> anchor;

    friend bool operator==(const BindingParams&, const BindingParams&) = default;
};

struct FlipBookParams {
    double fps = 8.0;

    friend bool operator==(const FlipBookParams&, const FlipBookParams&) = default;
};

enum class TriggerDirection { Decrease, Increase };

struct TriggerParams {
    double threshold = 60.0;
    TriggerDirection direction = TriggerDirection::Decrease;
    /// Playback length for payload elements; a payload flip-book plays one cycle instead.
    double duration = 1.0;
    std::optional<std::string> payload_effect;

    friend bool operator==(const TriggerParams&, const TriggerParams&) = default;
};

struct ParticleParams {
    Polyline emitter;  // authoring-time frame coordinates, follows the tracker
    double spawn_rate = 10.0;
    double speed = 60.0;
    double lifetime = 2.0;
    double direction_deg = 90.0;  // used without a motion path; 90 is straight down
    Polyline motion_path;         // empty: straight line along direction_deg
    bool loop_path = false;
    std::optional<Point2> anchor;

    friend bool operator==(const ParticleParams&, const ParticleParams&) = default;
};

struct TrajectoryParams {
    int max_elements = 30;
    double fade = 0.95;
    double scale_step = 1.0;
    int stride = 1;

    friend bool operator==(const TrajectoryParams&, const TrajectoryParams&) = default;
};

enum class ContourSource { Tracker, BodyMask };

struct ContourParams {
    ContourSource source = ContourSource::Tracker;
    double epsilon = 2.0;
    bool animated = false;
    double window_fraction = 0.25;
    double cycles_per_second = 0.5;
    std::optional<Rgba> fill;
    StrokeStyle stroke{{255, 255, 255, 255}, 4.0, 1.0};

    friend bool operator==(const ContourParams&, const ContourParams&) = default;
};

using EffectParams = std::variant<BindingParams, FlipBookParams, TriggerParams, ParticleParams,
                                  TrajectoryParams, ContourParams>;

/// Parameters with every field at its default for `kind`.
EffectParams default_params(EffectKind kind);

struct EffectSpec {
    std::string id;
    std::vector<std::string> element_ids;
    std::vector<std::string> tracker_ids;
    EffectParams params;

    EffectKind kind() const { return static_cast<EffectKind>(params.index()); }

    friend bool operator==(const EffectSpec&, const EffectSpec&) = default;
};

struct FrameSize {
    int width = 640;
    int height = 480;

    friend bool operator==(const FrameSize&, const FrameSize&) = default;
};

struct Scene {
    FrameSize frame_size;
    double frame_rate = 30.0;
    std::vector<SketchElement> elements;
    std::vector<TrackerSpec> trackers;
    std::vector<EffectSpec> effects;
    std::uint64_t seed = 0;

    const SketchElement* find_element(std::string_view id) const;
    const TrackerSpec* find_tracker(std::string_view id) const;
    const EffectSpec* find_effect(std::string_view id) const;

    friend bool operator==(const Scene&, const Scene&) = default;
};

/// Checks every scene invariant. Empty result means the scene can be stepped.
std::vector<Diagnostic> validate_scene(const Scene& scene);

}  // namespace scribble
