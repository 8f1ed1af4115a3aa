#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "scribble/contour.hpp"
#include "scribble/effects.hpp"

namespace scribble {

// Per-effect runtime state, one alternative per effect kind (same order as EffectKind).

struct BindingRuntime {
    std::optional<BindingState> bind;

    friend bool operator==(const BindingRuntime&, const BindingRuntime&) = default;
};

struct FlipBookRuntime {
    std::optional<std::int64_t> start_frame;

    friend bool operator==(const FlipBookRuntime&, const FlipBookRuntime&) = default;
};

struct TriggerRuntime {
    TriggerState state;
    std::int64_t fires = 0;

    friend bool operator==(const TriggerRuntime&, const TriggerRuntime&) = default;
};

struct ParticleRuntime {
    std::optional<Point2> anchor_at_bind;
    ParticleSystem system;

    friend bool operator==(const ParticleRuntime&, const ParticleRuntime&) = default;
};

struct TrajectoryRuntime {
    std::vector<TrajectoryClone> clones;  // oldest first
    std::int64_t samples = 0;

    friend bool operator==(const TrajectoryRuntime&, const TrajectoryRuntime&) = default;
};

struct ContourRuntime {
    std::optional<ContourPolyline> ring;
    std::optional<RasterFill> fill;

    friend bool operator==(const ContourRuntime&, const ContourRuntime&) = default;
};

using EffectRuntime =
    std::variant<BindingRuntime, FlipBookRuntime, TriggerRuntime, ParticleRuntime, TrajectoryRuntime, ContourRuntime>;

struct EffectState {
    std::string effect_id;
    EffectRuntime runtime;

    friend bool operator==(const EffectState&, const EffectState&) = default;
};

EffectState initial_effect_state(const EffectSpec& spec);

}  // namespace scribble
