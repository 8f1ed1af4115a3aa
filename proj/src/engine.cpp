#include "scribble/engine.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace scribble {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Scene checked(Scene scene) {
    auto diags = validate_scene(scene);
    if (!diags.empty()) {
        std::string message = diags.front().rule + " (" + diags.front().subject + ")";
        throw Error("invalid-scene", message, std::move(diags));
    }
    return scene;
}

Polyline shifted(const Polyline& pts, Point2 d) {
    Polyline out;
    out.reserve(pts.size());
    for (const Point2& p : pts) out.push_back(p + d);
    return out;
}

}  // namespace

double StageTimings::sections() const {
    double s = tracking + resolve;
    for (double e : effects) s += e;
    return s;
}

EffectState initial_effect_state(const EffectSpec& spec) {
    EffectState st{spec.id, BindingRuntime{}};
    switch (spec.kind()) {
        case EffectKind::Binding: st.runtime = BindingRuntime{}; break;
        case EffectKind::FlipBook: st.runtime = FlipBookRuntime{}; break;
        case EffectKind::Trigger: st.runtime = TriggerRuntime{}; break;
        case EffectKind::Particles: st.runtime = ParticleRuntime{}; break;
        case EffectKind::Trajectory: st.runtime = TrajectoryRuntime{}; break;
        case EffectKind::Contour: st.runtime = ContourRuntime{}; break;
    }
    return st;
}

TrackerState initial_tracker_state(const TrackerSpec& spec) {
    TrackerState st;
    st.tracker_id = spec.id;
    if (const auto* cb = std::get_if<ColorBlobSource>(&spec.source)) {
        st.last_position = cb->seed_point;
    }
    return st;
}

std::int64_t trigger_play_frames(const Scene& scene, const TriggerParams& params) {
    double seconds = params.duration;
    if (params.payload_effect) {
        if (const EffectSpec* fb = scene.find_effect(*params.payload_effect); fb && fb->kind() == EffectKind::FlipBook) {
            seconds = flipbook_cycle({fb->element_ids.size(), std::get<FlipBookParams>(fb->params).fps});
        }
    }
    return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(seconds * scene.frame_rate - 1e-9)));
}

Engine::Engine(Scene scene) : scene_(checked(std::move(scene))) {
    for (const auto& t : scene_.trackers) trackers_.push_back(initial_tracker_state(t));
    for (const auto& e : scene_.effects) effects_.push_back(initial_effect_state(e));
    masks_.resize(trackers_.size());
}

void Engine::set_scene(Scene scene) {
    Scene next = checked(std::move(scene));

    std::map<std::string, TrackerState> old_trackers;
    for (auto& t : trackers_) old_trackers.emplace(t.tracker_id, std::move(t));
    std::map<std::string, EffectState> old_effects;
    for (auto& e : effects_) old_effects.emplace(e.effect_id, std::move(e));

    trackers_.clear();
    effects_.clear();
    for (const auto& t : next.trackers) {
        auto it = old_trackers.find(t.id);
        const TrackerSpec* prev = scene_.find_tracker(t.id);
        if (it != old_trackers.end() && prev && *prev == t) {
            trackers_.push_back(std::move(it->second));
        } else {
            trackers_.push_back(initial_tracker_state(t));
        }
    }
    for (const auto& e : next.effects) {
        auto it = old_effects.find(e.id);
        if (it != old_effects.end() && it->second.runtime.index() == e.params.index()) {
            effects_.push_back(std::move(it->second));
        } else {
            effects_.push_back(initial_effect_state(e));
        }
    }
    scene_ = std::move(next);
    masks_.assign(trackers_.size(), std::nullopt);
}

std::size_t Engine::tracker_slot(const std::string& id) const {
    for (std::size_t i = 0; i < scene_.trackers.size(); ++i) {
        if (scene_.trackers[i].id == id) return i;
    }
    throw Error("state-desync", id);
}

void Engine::set_tracker_position(const std::string& id, Point2 p) { trackers_[tracker_slot(id)].record_fix(p); }

const TrackerState& Engine::tracker(const std::string& id) const { return trackers_[tracker_slot(id)]; }

void Engine::step_trackers(const FrameInputs& inputs) {
    for (std::size_t i = 0; i < scene_.trackers.size(); ++i) {
        const TrackerSpec& spec = scene_.trackers[i];
        masks_[i].reset();
        if (const auto* cb = std::get_if<ColorBlobSource>(&spec.source)) {
            if (inputs.image) {
                masks_[i] = segment_by_window(*inputs.image, cb->window);
                trackers_[i] = track_mask(*masks_[i], trackers_[i]);
            } else {
                trackers_[i].record_miss();
            }
        } else {
            const int index = std::get<KeypointSource>(spec.source).index;
            if (inputs.pose) {
                trackers_[i] = track_keypoint(*inputs.pose, trackers_[i], index);
            } else {
                trackers_[i].record_miss();
            }
        }
    }
}

void Engine::step_effects(const FrameInputs& inputs) {
    const double dt = 1.0 / scene_.frame_rate;
    for (std::size_t i = 0; i < scene_.effects.size(); ++i) {
        const auto t0 = Clock::now();
        const EffectSpec& fx = scene_.effects[i];
        EffectRuntime& rt = effects_[i].runtime;

        switch (fx.kind()) {
            case EffectKind::Binding: {
                auto& st = std::get<BindingRuntime>(rt);
                if (!st.bind) {
                    const auto& p = std::get<BindingParams>(fx.params);
                    st.bind = BindingState{p.anchor.value_or(tracker(fx.tracker_ids[0]).last_position)};
                }
                break;
            }
            case EffectKind::FlipBook: {
                auto& st = std::get<FlipBookRuntime>(rt);
                if (!st.start_frame) st.start_frame = frame_;
                break;
            }
            case EffectKind::Trigger: {
                const auto& p = std::get<TriggerParams>(fx.params);
                auto& st = std::get<TriggerRuntime>(rt);
                const TriggerSpec spec{p.threshold, p.direction, trigger_play_frames(scene_, p)};
                const double d = pair_distance(tracker(fx.tracker_ids[0]), tracker(fx.tracker_ids[1]));
                const TriggerResult r = evaluate_trigger(spec, st.state, d, frame_);
                st.state = r.state;
                if (r.fire) ++st.fires;
                break;
            }
            case EffectKind::Particles: {
                const auto& p = std::get<ParticleParams>(fx.params);
                auto& st = std::get<ParticleRuntime>(rt);
                const Point2 anchor = tracker(fx.tracker_ids[0]).last_position;
                if (!st.anchor_at_bind) st.anchor_at_bind = p.anchor.value_or(anchor);
                const Polyline emitter = shifted(p.emitter, anchor - *st.anchor_at_bind);
                SplitMix64 rng(effect_frame_seed(scene_.seed, fx.id, frame_));
                st.system = step_particles(p, st.system, emitter, dt, rng, frame_);
                break;
            }
            case EffectKind::Trajectory: {
                const auto& p = std::get<TrajectoryParams>(fx.params);
                auto& st = std::get<TrajectoryRuntime>(rt);
                if (st.samples % p.stride == 0) {
                    st.clones = update_trajectory(p, st.clones, tracker(fx.tracker_ids[0]).last_position);
                }
                ++st.samples;
                break;
            }
            case EffectKind::Contour: {
                const auto& p = std::get<ContourParams>(fx.params);
                auto& st = std::get<ContourRuntime>(rt);
                st.ring.reset();
                st.fill.reset();
                const BinaryMask* mask = nullptr;
                if (p.source == ContourSource::BodyMask) {
                    mask = inputs.body_mask;
                } else if (const auto& m = masks_[tracker_slot(fx.tracker_ids[0])]; m) {
                    mask = &*m;
                }
                if (mask && mask->width() == scene_.frame_size.width && mask->height() == scene_.frame_size.height &&
                    !mask->empty()) {
                    st.ring = simplify_polyline(extract_outer_contour(*mask, frame_), p.epsilon);
                    if (p.fill) st.fill = fill_region(*mask, *p.fill);
                }
                break;
            }
        }
        timings_.effects[static_cast<std::size_t>(fx.kind())] += seconds_since(t0);
    }
}

FrameOverlay Engine::step(const FrameInputs& inputs) {
    const auto start = Clock::now();

    auto t0 = Clock::now();
    step_trackers(inputs);
    timings_.tracking += seconds_since(t0);

    step_effects(inputs);

    t0 = Clock::now();
    FrameOverlay overlay = resolve_frame(scene_, trackers_, effects_, frame_);
    timings_.resolve += seconds_since(t0);

    ++frame_;
    timings_.total += seconds_since(start);
    return overlay;
}

FrameOverlay Engine::current_overlay() const {
    return resolve_frame(scene_, trackers_, effects_, std::max<std::int64_t>(0, frame_ - 1));
}

}  // namespace scribble
