#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "scribble/model.hpp"

namespace scribble {

// ---------------------------------------------------------------------------
// Object binding

struct BindingState {
    Point2 anchor_at_bind;

    friend bool operator==(const BindingState&, const BindingState&) = default;
};

/// Pure translation by the anchor's displacement since bind time.
Transform update_binding(const BindingState& state, const SketchElement& element, Point2 anchor_now);

// ---------------------------------------------------------------------------
// Flip-book

struct FlipBookSpec {
    std::size_t frame_count = 1;
    double fps = 8.0;
};

/// floor(t * fps) mod frame_count.
std::size_t flipbook_frame(const FlipBookSpec& spec, double t);

/// Seconds for one pass over every page.
double flipbook_cycle(const FlipBookSpec& spec);

// ---------------------------------------------------------------------------
// Action trigger

struct TriggerSpec {
    double threshold = 60.0;
    TriggerDirection direction = TriggerDirection::Decrease;
    /// Frames the payload plays after a fire; the trigger cannot re-arm before it ends.
    std::int64_t play_frames = 1;
};

struct TriggerState {
    bool armed = true;
    bool playing = false;
    std::optional<std::int64_t> play_started_at;

    friend bool operator==(const TriggerState&, const TriggerState&) = default;
};

struct TriggerResult {
    TriggerState state;
    bool fire = false;
};

/// One frame of the one-shot trigger. Decrease fires on distance < threshold and
/// re-arms once distance >= threshold with playback finished; Increase mirrors it
/// with > and <=.
TriggerResult evaluate_trigger(const TriggerSpec& spec, const TriggerState& state, double distance,
                               std::int64_t frame);

// ---------------------------------------------------------------------------
// Particles

/// Counter-based generator (splitmix64). Identical sequences on every platform.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next();
    /// Uniform in [0, 1).
    double uniform();

private:
    std::uint64_t state_;
};

std::uint64_t mix64(std::uint64_t x);
std::uint64_t hash_id(std::string_view id);

/// Stream seed for one effect at one frame. Depends only on its arguments, so
/// adding an effect never shifts another effect's random draws.
std::uint64_t effect_frame_seed(std::uint64_t scene_seed, std::string_view effect_id, std::int64_t frame);

struct Particle {
    std::int64_t birth_frame = 0;
    Point2 origin;
    double progress = 0.0;  // pixels traveled
    double age = 0.0;       // seconds

    friend bool operator==(const Particle&, const Particle&) = default;
};

struct ParticleSystem {
    std::vector<Particle> particles;  // oldest first
    double spawn_accumulator = 0.0;

    friend bool operator==(const ParticleSystem&, const ParticleSystem&) = default;
};

/// Ages and advances live particles, drops those past their lifetime (or past
/// the motion path end unless looping), then spawns the accumulated whole count
/// at uniform arc-length positions on `emitter_world`.
ParticleSystem step_particles(const ParticleParams& spec, const ParticleSystem& system,
                              const Polyline& emitter_world, double dt, SplitMix64& rng,
                              std::int64_t frame);

/// Where a particle is drawn: origin plus its offset along the motion path or
/// default direction.
Point2 particle_position(const ParticleParams& spec, const Particle& p);

// ---------------------------------------------------------------------------
// Motion trajectory

struct TrajectoryClone {
    Point2 anchor;

    friend bool operator==(const TrajectoryClone&, const TrajectoryClone&) = default;
};

/// Appends a clone at `anchor_now` and drops the oldest beyond max_elements.
/// Clones are ordered oldest first.
std::vector<TrajectoryClone> update_trajectory(const TrajectoryParams& spec,
                                               const std::vector<TrajectoryClone>& clones, Point2 anchor_now);

/// Opacity and scale multipliers of the clone `age_from_newest` steps back (0 is newest).
double trajectory_opacity(const TrajectoryParams& spec, std::size_t age_from_newest);
double trajectory_scale(const TrajectoryParams& spec, std::size_t age_from_newest);

/// Places an element so its local origin sits on `anchor`, scaled about that origin.
Transform clone_transform(const SketchElement& element, Point2 anchor, double scale);

}  // namespace scribble
