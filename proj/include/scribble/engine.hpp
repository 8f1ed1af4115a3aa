#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

#include "scribble/model.hpp"
#include "scribble/raster.hpp"
#include "scribble/render.hpp"
#include "scribble/state.hpp"
#include "scribble/tracking.hpp"

namespace scribble {

/// Inputs for one engine step. Any of them may be absent: color trackers then
/// count a miss, keypoint trackers likewise, body-mask contours draw nothing.
struct FrameInputs {
    const RgbImage* image = nullptr;
    const PoseFrame* pose = nullptr;
    const BinaryMask* body_mask = nullptr;
};

/// Accumulated wall time per pipeline stage, in seconds.
struct StageTimings {
    double tracking = 0.0;
    std::array<double, 6> effects{};  // indexed by EffectKind
    double resolve = 0.0;
    double total = 0.0;

    double sections() const;
};

/// Frames the trigger payload stays visible after a fire.
std::int64_t trigger_play_frames(const Scene& scene, const TriggerParams& params);

/// Steps a validated scene frame by frame: trackers, then effects in
/// declaration order, then overlay resolution.
class Engine {
public:
    /// Throws Error("invalid-scene") with the diagnostics when validation fails.
    explicit Engine(Scene scene);

    FrameOverlay step(const FrameInputs& inputs);

    /// Replaces the scene, keeping runtime state of trackers and effects whose
    /// ids survive. Throws like the constructor.
    void set_scene(Scene scene);

    /// Records a fix for a tracker outside of step(), e.g. the confirmed click
    /// position when a tracker is created mid-session.
    void set_tracker_position(const std::string& id, Point2 p);

    const Scene& scene() const { return scene_; }
    const std::vector<TrackerState>& tracker_states() const { return trackers_; }
    const std::vector<EffectState>& effect_states() const { return effects_; }
    std::int64_t frame_index() const { return frame_; }
    const StageTimings& timings() const { return timings_; }

    /// Overlay for the current states without stepping.
    FrameOverlay current_overlay() const;

private:
    void step_trackers(const FrameInputs& inputs);
    void step_effects(const FrameInputs& inputs);
    const TrackerState& tracker(const std::string& id) const;
    std::size_t tracker_slot(const std::string& id) const;

    Scene scene_;
    std::vector<TrackerState> trackers_;
    std::vector<EffectState> effects_;
    std::vector<std::optional<BinaryMask>> masks_;  // this frame's segmentation per tracker
    std::int64_t frame_ = 0;                          // index of the next frame to step
    StageTimings timings_;
};

TrackerState initial_tracker_state(const TrackerSpec& spec);

}  // namespace scribble
