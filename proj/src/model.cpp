#include "scribble/model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

namespace scribble {

namespace {

constexpr std::array<std::string_view, 6> kKindNames = {"binding",   "flipbook",   "trigger",
                                                        "particles", "trajectory", "contour"};

template <typename T>
const T* find_by_id(const std::vector<T>& items, std::string_view id) {
    auto it = std::find_if(items.begin(), items.end(), [&](const T& t) { return t.id == id; });
    return it == items.end() ? nullptr : &*it;
}

class Collector {
public:
    void add(std::string rule, std::string subject, std::string detail = {}) {
        out_.push_back({std::move(rule), std::move(subject), std::move(detail)});
    }
    std::vector<Diagnostic> take() { return std::move(out_); }

private:
    std::vector<Diagnostic> out_;
};

bool finite_all(const Polyline& pts) {
    return std::all_of(pts.begin(), pts.end(), [](Point2 p) { return is_finite(p); });
}

void check_style(const StrokeStyle& s, const std::string& owner, Collector& diags) {
    if (!(s.width > 0.0) || !std::isfinite(s.width)) {
        diags.add("stroke-width", owner);
    }
    if (!(s.opacity >= 0.0 && s.opacity <= 1.0)) {
        diags.add("stroke-opacity", owner);
    }
}

void check_positive(double v, const char* name, const std::string& owner, Collector& diags) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        diags.add("param-range", owner, name);
    }
}

void check_unit_interval(double v, const char* name, const std::string& owner, Collector& diags) {
    if (!(v > 0.0 && v <= 1.0)) {
        diags.add("param-range", owner, name);
    }
}

void check_effect(const Scene& scene, const EffectSpec& fx, Collector& diags) {
    for (const auto& eid : fx.element_ids) {
        if (!scene.find_element(eid)) {
            diags.add("dangling-element", fx.id, eid);
        }
    }
    for (const auto& tid : fx.tracker_ids) {
        if (!scene.find_tracker(tid)) {
            diags.add("dangling-tracker", fx.id, tid);
        }
    }

    const auto n_trackers = fx.tracker_ids.size();
    const auto n_elements = fx.element_ids.size();

    switch (fx.kind()) {
        case EffectKind::Binding: {
            if (n_trackers != 1) diags.add("tracker-arity", fx.id);
            if (n_elements < 1) diags.add("element-arity", fx.id);
            const auto& p = std::get<BindingParams>(fx.params);
            if (p.anchor && !is_finite(*p.anchor)) diags.add("non-finite", fx.id, "anchor");
            break;
        }
        case EffectKind::FlipBook: {
            if (n_trackers != 0) diags.add("tracker-arity", fx.id);
            if (n_elements < 1) diags.add("element-arity", fx.id);
            check_positive(std::get<FlipBookParams>(fx.params).fps, "fps", fx.id, diags);
            break;
        }
        case EffectKind::Trigger: {
            const auto& p = std::get<TriggerParams>(fx.params);
            if (n_trackers != 2) diags.add("trigger-arity", fx.id);
            check_positive(p.threshold, "threshold", fx.id, diags);
            check_positive(p.duration, "duration", fx.id, diags);
            if (p.payload_effect) {
                const EffectSpec* payload = scene.find_effect(*p.payload_effect);
                if (!payload) {
                    diags.add("dangling-effect", fx.id, *p.payload_effect);
                } else if (payload->kind() != EffectKind::FlipBook) {
                    diags.add("payload-kind", fx.id, *p.payload_effect);
                }
            } else if (n_elements == 0) {
                diags.add("element-arity", fx.id, "trigger needs payload elements or a payload effect");
            }
            break;
        }
        case EffectKind::Particles: {
            const auto& p = std::get<ParticleParams>(fx.params);
            if (n_trackers != 1) diags.add("tracker-arity", fx.id);
            if (n_elements != 1) diags.add("element-arity", fx.id);
            check_positive(p.spawn_rate, "spawn_rate", fx.id, diags);
            check_positive(p.speed, "speed", fx.id, diags);
            check_positive(p.lifetime, "lifetime", fx.id, diags);
            if (p.emitter.size() < 2) diags.add("emitter-points", fx.id);
            if (!std::isfinite(p.direction_deg) || !finite_all(p.emitter) || !finite_all(p.motion_path) ||
                (p.anchor && !is_finite(*p.anchor))) {
                diags.add("non-finite", fx.id);
            }
            if (p.motion_path.size() == 1) diags.add("motion-path-points", fx.id);
            break;
        }
        case EffectKind::Trajectory: {
            const auto& p = std::get<TrajectoryParams>(fx.params);
            if (n_trackers != 1) diags.add("tracker-arity", fx.id);
            if (n_elements != 1) diags.add("element-arity", fx.id);
            if (p.max_elements < 1) diags.add("param-range", fx.id, "max_elements");
            if (p.stride < 1) diags.add("param-range", fx.id, "stride");
            check_unit_interval(p.fade, "fade", fx.id, diags);
            check_unit_interval(p.scale_step, "scale_step", fx.id, diags);
            break;
        }
        case EffectKind::Contour: {
            const auto& p = std::get<ContourParams>(fx.params);
            if (n_elements != 0) diags.add("element-arity", fx.id);
            if (p.source == ContourSource::Tracker) {
                if (n_trackers != 1) {
                    diags.add("tracker-arity", fx.id);
                } else if (const TrackerSpec* t = scene.find_tracker(fx.tracker_ids[0]); t && !t->is_color()) {
                    diags.add("contour-source", fx.id, "contour tracker must be a color tracker");
                }
            } else if (n_trackers != 0) {
                diags.add("tracker-arity", fx.id);
            }
            if (!(p.epsilon >= 0.0) || !std::isfinite(p.epsilon)) diags.add("param-range", fx.id, "epsilon");
            if (p.animated) {
                check_unit_interval(p.window_fraction, "window_fraction", fx.id, diags);
                check_positive(p.cycles_per_second, "cycles_per_second", fx.id, diags);
            }
            check_style(p.stroke, fx.id, diags);
            break;
        }
    }
}

}  // namespace

std::string_view to_string(EffectKind k) { return kKindNames[static_cast<std::size_t>(k)]; }

std::optional<EffectKind> effect_kind_from_string(std::string_view s) {
    for (std::size_t i = 0; i < kKindNames.size(); ++i) {
        if (kKindNames[i] == s) return static_cast<EffectKind>(i);
    }
    return std::nullopt;
}

EffectParams default_params(EffectKind kind) {
    switch (kind) {
        case EffectKind::Binding: return BindingParams{};
        case EffectKind::FlipBook: return FlipBookParams{};
        case EffectKind::Trigger: return TriggerParams{};
        case EffectKind::Particles: return ParticleParams{};
        case EffectKind::Trajectory: return TrajectoryParams{};
        case EffectKind::Contour: return ContourParams{};
    }
    return BindingParams{};
}

const SketchElement* Scene::find_element(std::string_view id) const { return find_by_id(elements, id); }
const TrackerSpec* Scene::find_tracker(std::string_view id) const { return find_by_id(trackers, id); }
const EffectSpec* Scene::find_effect(std::string_view id) const { return find_by_id(effects, id); }

std::vector<Diagnostic> validate_scene(const Scene& scene) {
    Collector diags;

    if (scene.frame_size.width <= 0 || scene.frame_size.height <= 0) {
        diags.add("frame-size", "");
    }
    if (!(scene.frame_rate > 0.0) || !std::isfinite(scene.frame_rate)) {
        diags.add("frame-rate", "");
    }

    // Ids share one namespace across elements, trackers and effects.
    std::set<std::string> seen;
    auto claim = [&](const std::string& id) {
        if (id.empty()) {
            diags.add("empty-id", id);
        } else if (!seen.insert(id).second) {
            diags.add("duplicate-id", id);
        }
    };

    for (const auto& el : scene.elements) {
        claim(el.id);
        if (el.strokes.empty()) diags.add("empty-element", el.id);
        if (!is_finite(el.local_origin)) diags.add("non-finite", el.id, "local_origin");
        for (const auto& s : el.strokes) {
            if (s.points.size() < 2) diags.add("stroke-points", el.id);
            if (!finite_all(s.points)) diags.add("non-finite", el.id, "stroke point");
            check_style(s.style, el.id, diags);
        }
    }

    for (const auto& tr : scene.trackers) {
        claim(tr.id);
        if (const auto* kp = std::get_if<KeypointSource>(&tr.source)) {
            if (kp->index < 0 || kp->index >= kPoseKeypointCount) diags.add("keypoint-index", tr.id);
        } else {
            const auto& cb = std::get<ColorBlobSource>(tr.source);
            const auto& w = cb.window;
            if (w.r_lo > w.r_hi || w.g_lo > w.g_hi || w.b_lo > w.b_hi) diags.add("window-order", tr.id);
            const Point2 p = cb.seed_point;
            if (!is_finite(p) || p.x < 0 || p.y < 0 || p.x >= scene.frame_size.width ||
                p.y >= scene.frame_size.height) {
                diags.add("seed-outside-frame", tr.id);
            }
        }
    }

    for (const auto& fx : scene.effects) {
        claim(fx.id);
        check_effect(scene, fx, diags);
    }

    return diags.take();
}

}  // namespace scribble
