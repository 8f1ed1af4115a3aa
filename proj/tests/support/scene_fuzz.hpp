#pragma once

#include <random>
#include <string>

#include "scribble/model.hpp"

namespace fuzz {

using namespace scribble;

// Values on a quarter-pixel grid survive 6-significant-digit serialization.
inline double grid(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_int_distribution<long> d(static_cast<long>(lo * 4), static_cast<long>(hi * 4));
    return static_cast<double>(d(rng)) / 4.0;
}

inline Point2 point(std::mt19937_64& rng, FrameSize fs) {
    return {grid(rng, 0, fs.width - 1), grid(rng, 0, fs.height - 1)};
}

inline Polyline polyline(std::mt19937_64& rng, FrameSize fs, int min_pts, int max_pts) {
    std::uniform_int_distribution<int> n(min_pts, max_pts);
    Polyline p;
    for (int i = n(rng); i > 0; --i) p.push_back(point(rng, fs));
    return p;
}

inline Rgba color(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> c(0, 255);
    return {static_cast<std::uint8_t>(c(rng)), static_cast<std::uint8_t>(c(rng)), static_cast<std::uint8_t>(c(rng)),
            static_cast<std::uint8_t>(c(rng))};
}

inline StrokeStyle style(std::mt19937_64& rng) { return {color(rng), grid(rng, 0.25, 12), grid(rng, 0, 1)}; }

/// A random scene that passes validate_scene, with every effect kind reachable.
inline Scene scene(std::mt19937_64& rng, FrameSize fs = {64, 48}) {
    std::uniform_int_distribution<int> small(0, 4);
    std::uniform_int_distribution<int> coin(0, 1);
    Scene s;
    s.frame_size = fs;
    s.frame_rate = grid(rng, 1, 60);
    s.seed = rng() >> 1;

    const int n_el = 1 + small(rng);
    for (int i = 0; i < n_el; ++i) {
        SketchElement el{"el" + std::to_string(i), {}, point(rng, fs)};
        for (int k = 1 + small(rng) / 2; k > 0; --k) el.strokes.push_back({polyline(rng, fs, 2, 6), style(rng)});
        s.elements.push_back(el);
    }
    const int n_tr = 2 + small(rng) / 2;
    for (int i = 0; i < n_tr; ++i) {
        if (coin(rng)) {
            std::uniform_int_distribution<int> kp(0, 32);
            s.trackers.push_back({"tr" + std::to_string(i), KeypointSource{kp(rng)}});
        } else {
            std::uniform_int_distribution<int> c(0, 255);
            const int r = c(rng), g = c(rng), b = c(rng);
            auto lo = [](int v) { return static_cast<std::uint8_t>(std::max(0, v - 10)); };
            auto hi = [](int v) { return static_cast<std::uint8_t>(std::min(255, v + 10)); };
            Point2 seed{std::floor(grid(rng, 0, fs.width - 1)), std::floor(grid(rng, 0, fs.height - 1))};
            s.trackers.push_back({"tr" + std::to_string(i), ColorBlobSource{seed, {lo(r), hi(r), lo(g), hi(g), lo(b), hi(b)}}});
        }
    }

    auto element = [&] {
        std::uniform_int_distribution<int> d(0, n_el - 1);
        return s.elements[static_cast<std::size_t>(d(rng))].id;
    };
    auto tracker = [&] {
        std::uniform_int_distribution<int> d(0, n_tr - 1);
        return s.trackers[static_cast<std::size_t>(d(rng))].id;
    };
    auto color_tracker = [&]() -> std::optional<std::string> {
        for (const auto& t : s.trackers) {
            if (t.is_color()) return t.id;
        }
        return std::nullopt;
    };

    std::uniform_int_distribution<int> kinds(0, 5);
    const int n_fx = small(rng) + 1;
    std::optional<std::string> flipbook;
    for (int i = 0; i < n_fx; ++i) {
        EffectSpec fx;
        fx.id = "fx" + std::to_string(i);
        switch (static_cast<EffectKind>(kinds(rng))) {
            case EffectKind::Binding: {
                BindingParams p;
                if (coin(rng)) p.anchor = point(rng, fs);
                fx.params = p;
                fx.element_ids = {element()};
                fx.tracker_ids = {tracker()};
                break;
            }
            case EffectKind::FlipBook: {
                fx.params = FlipBookParams{grid(rng, 0.25, 24)};
                for (int k = 1 + small(rng); k > 0; --k) fx.element_ids.push_back(element());
                flipbook = fx.id;
                break;
            }
            case EffectKind::Trigger: {
                TriggerParams p;
                p.threshold = grid(rng, 1, 80);
                p.direction = coin(rng) ? TriggerDirection::Increase : TriggerDirection::Decrease;
                p.duration = grid(rng, 0.25, 3);
                if (flipbook && coin(rng)) {
                    p.payload_effect = flipbook;
                } else {
                    fx.element_ids = {element()};
                }
                fx.params = p;
                fx.tracker_ids = {tracker(), tracker()};
                break;
            }
            case EffectKind::Particles: {
                ParticleParams p;
                p.emitter = polyline(rng, fs, 2, 4);
                p.spawn_rate = grid(rng, 0.25, 40);
                p.speed = grid(rng, 0.25, 200);
                p.lifetime = grid(rng, 0.25, 3);
                p.direction_deg = grid(rng, -180, 180);
                if (coin(rng)) p.motion_path = polyline(rng, fs, 2, 5);
                p.loop_path = coin(rng);
                if (coin(rng)) p.anchor = point(rng, fs);
                fx.params = p;
                fx.element_ids = {element()};
                fx.tracker_ids = {tracker()};
                break;
            }
            case EffectKind::Trajectory: {
                TrajectoryParams p;
                std::uniform_int_distribution<int> cap(1, 40), stride(1, 4);
                p.max_elements = cap(rng);
                p.stride = stride(rng);
                p.fade = grid(rng, 0.25, 1);
                p.scale_step = grid(rng, 0.25, 1);
                fx.params = p;
                fx.element_ids = {element()};
                fx.tracker_ids = {tracker()};
                break;
            }
            case EffectKind::Contour: {
                ContourParams p;
                auto ct = color_tracker();
                if (ct && coin(rng)) {
                    fx.tracker_ids = {*ct};
                } else {
                    p.source = ContourSource::BodyMask;
                }
                p.epsilon = grid(rng, 0, 5);
                p.animated = coin(rng);
                p.window_fraction = grid(rng, 0.25, 1);
                p.cycles_per_second = grid(rng, 0.25, 2);
                if (coin(rng)) p.fill = color(rng);
                p.stroke = style(rng);
                fx.params = p;
                break;
            }
        }
        s.effects.push_back(fx);
    }
    return s;
}

}  // namespace fuzz
