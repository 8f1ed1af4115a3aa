#include "scribble/effects.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace scribble {

Transform update_binding(const BindingState& state, const SketchElement& /*element*/, Point2 anchor_now) {
    return Transform::translation(anchor_now - state.anchor_at_bind);
}

std::size_t flipbook_frame(const FlipBookSpec& spec, double t) {
    if (spec.frame_count == 0) return 0;
    // Small slack so t = k / fps lands on page k despite rounding in t.
    const double ticks = std::floor(std::max(0.0, t) * spec.fps + 1e-9);
    return static_cast<std::size_t>(std::fmod(ticks, static_cast<double>(spec.frame_count)));
}

double flipbook_cycle(const FlipBookSpec& spec) { return static_cast<double>(spec.frame_count) / spec.fps; }

TriggerResult evaluate_trigger(const TriggerSpec& spec, const TriggerState& state, double distance,
                               std::int64_t frame) {
    TriggerResult out{state, false};
    TriggerState& s = out.state;

    if (s.playing && s.play_started_at && frame - *s.play_started_at >= spec.play_frames) {
        s.playing = false;
    }

    const bool decrease = spec.direction == TriggerDirection::Decrease;
    const bool condition = decrease ? distance < spec.threshold : distance > spec.threshold;

    if (!s.armed && !s.playing && !condition) {
        s.armed = true;
    }
    if (s.armed && condition) {
        s.armed = false;
        s.playing = true;
        s.play_started_at = frame;
        out.fire = true;
    }
    return out;
}

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t SplitMix64::next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t hash_id(std::string_view id) {
    // FNV-1a
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : id) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t effect_frame_seed(std::uint64_t scene_seed, std::string_view effect_id, std::int64_t frame) {
    return mix64(mix64(scene_seed ^ hash_id(effect_id)) ^ static_cast<std::uint64_t>(frame));
}

ParticleSystem step_particles(const ParticleParams& spec, const ParticleSystem& system,
                              const Polyline& emitter_world, double dt, SplitMix64& rng, std::int64_t frame) {
    ParticleSystem next;
    next.particles.reserve(system.particles.size());

    const double path_length = spec.motion_path.size() >= 2 ? polyline_length(spec.motion_path) : 0.0;
    const bool on_path = spec.motion_path.size() >= 2;

    for (Particle p : system.particles) {
        p.age += dt;
        p.progress += spec.speed * dt;
        if (p.age > spec.lifetime) continue;
        if (on_path && !spec.loop_path && p.progress > path_length) continue;
        next.particles.push_back(p);
    }

    double acc = system.spawn_accumulator + spec.spawn_rate * dt;
    const double whole = std::floor(acc + 1e-9);
    acc = std::max(0.0, acc - whole);
    next.spawn_accumulator = acc;

    const double emitter_length = polyline_length(emitter_world);
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(whole); ++i) {
        const double u = rng.uniform();
        next.particles.push_back({frame, point_at_length(emitter_world, u * emitter_length), 0.0, 0.0});
    }
    return next;
}

Point2 particle_position(const ParticleParams& spec, const Particle& p) {
    if (spec.motion_path.size() >= 2) {
        double s = p.progress;
        const double length = polyline_length(spec.motion_path);
        if (spec.loop_path && length > 0.0) {
            s = std::fmod(s, length);
        }
        return p.origin + (point_at_length(spec.motion_path, s) - spec.motion_path.front());
    }
    const double rad = spec.direction_deg * std::numbers::pi / 180.0;
    return p.origin + Point2{std::cos(rad), std::sin(rad)} * p.progress;
}

std::vector<TrajectoryClone> update_trajectory(const TrajectoryParams& spec,
                                               const std::vector<TrajectoryClone>& clones, Point2 anchor_now) {
    std::vector<TrajectoryClone> out = clones;
    out.push_back({anchor_now});
    const auto cap = static_cast<std::size_t>(std::max(1, spec.max_elements));
    if (out.size() > cap) {
        out.erase(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(out.size() - cap));
    }
    return out;
}

double trajectory_opacity(const TrajectoryParams& spec, std::size_t age_from_newest) {
    return std::pow(spec.fade, static_cast<double>(age_from_newest));
}

double trajectory_scale(const TrajectoryParams& spec, std::size_t age_from_newest) {
    return std::pow(spec.scale_step, static_cast<double>(age_from_newest));
}

Transform clone_transform(const SketchElement& element, Point2 anchor, double scale) {
    return {scale, anchor - element.local_origin * scale};
}

}  // namespace scribble
