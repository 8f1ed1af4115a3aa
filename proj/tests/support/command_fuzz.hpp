#pragma once

#include <random>
#include <string>
#include <vector>

#include "scribble/session.hpp"
#include "scribble/synthetic.hpp"

namespace fuzz {

using namespace scribble;

inline std::vector<SessionFrame> clip(FrameSize fs, int count) {
    std::vector<SessionFrame> frames;
    for (int i = 0; i < count; ++i) {
        SessionFrame f{synthetic::frame(fs, i), synthetic::pose(fs, i), std::nullopt};
        f.body_mask = synthetic::body_mask(*f.pose, fs);
        frames.push_back(std::move(f));
    }
    return frames;
}

/// Any command, valid or not, with ids drawn from the ones the session has
/// handed out so far plus a few that never exist.
inline SessionCommand command(std::mt19937_64& rng, const Session& session) {
    const FrameSize fs = session.scene().frame_size;
    std::uniform_int_distribution<int> pick(0, 15);
    std::uniform_real_distribution<double> x(-20, fs.width + 20), y(-20, fs.height + 20);
    std::uniform_real_distribution<double> unit(0, 1);
    auto some_ids = [&](auto&& list) {
        std::vector<std::string> ids;
        std::uniform_int_distribution<int> n(0, 2);
        for (int k = n(rng); k > 0; --k) {
            if (list.empty() || unit(rng) < 0.1) {
                ids.push_back("ghost");
                continue;
            }
            std::uniform_int_distribution<std::size_t> i(0, list.size() - 1);
            ids.push_back(list[i(rng)].id);
        }
        return ids;
    };
    const Scene& s = session.scene();

    // Mostly follow the authoring grammar so that commands tend to succeed.
    if (unit(rng) < 0.7) {
        if (session.mode() == SessionMode::Playing && unit(rng) < 0.7) return PauseVideo{};
        if (session.has_open_stroke()) {
            if (unit(rng) < 0.6) return AppendPoints{{{x(rng), y(rng)}, {x(rng), y(rng)}}};
            return EndStroke{};
        }
        std::uniform_int_distribution<int> guided(0, 7);
        switch (guided(rng)) {
            case 0: return BeginStroke{};
            case 1: return GroupElement{};
            case 2: return AddFlipbookFrame{};
            case 3: return SaveFlipbook{};
            case 4: return SelectTrackPoint{synthetic::ball_center(fs, session.current_frame()), TrackKind::Color};
            case 5: return SelectTrackPoint{{x(rng), y(rng)}, TrackKind::Body};
            default: {
                static const EffectKind kinds[] = {EffectKind::Binding, EffectKind::Trajectory, EffectKind::Particles,
                                                   EffectKind::Trigger};
                std::uniform_int_distribution<int> k(0, 3);
                ApplyEffect c;
                c.kind = kinds[k(rng)];
                if (c.kind == EffectKind::Particles) c.params = {{"emitter", {{x(rng), y(rng)}, {x(rng), y(rng)}}}};
                if (c.kind == EffectKind::Trigger) c.params = {{"threshold", unit(rng) * 100}};
                return c;
            }
        }
    }

    switch (pick(rng)) {
        case 0: return PauseVideo{};
        case 1: return ResumeVideo{};
        case 2: {
            // Aim at the ball most of the time so color trackers get created.
            const Point2 c = synthetic::ball_center(fs, session.current_frame());
            const Point2 at = unit(rng) < 0.6 ? c : Point2{x(rng), y(rng)};
            return SelectTrackPoint{at, unit(rng) < 0.5 ? TrackKind::Color : TrackKind::Body};
        }
        case 3: return BeginStroke{{{255, 255, 255, 255}, 0.25 + unit(rng) * 8, unit(rng)}};
        case 4:
        case 5: {
            AppendPoints c;
            std::uniform_int_distribution<int> n(0, 5);
            for (int k = n(rng); k > 0; --k) c.points.push_back({x(rng), y(rng)});
            if (unit(rng) < 0.03) c.points.push_back({std::nan(""), 0});
            return c;
        }
        case 6: return EndStroke{};
        case 7: return GroupElement{};
        case 8:
        case 9: {
            std::uniform_int_distribution<int> k(0, 5);
            ApplyEffect c;
            c.kind = static_cast<EffectKind>(k(rng));
            if (c.kind == EffectKind::Particles) {
                c.params = {{"emitter", {{x(rng), y(rng)}, {x(rng), y(rng)}}}, {"spawn_rate", unit(rng) * 30}};
            } else if (c.kind == EffectKind::Trigger) {
                c.params = {{"threshold", unit(rng) * 200}};
            } else if (c.kind == EffectKind::Contour) {
                c.params = {{"source", unit(rng) < 0.5 ? "body_mask" : "tracker"}};
            }
            if (unit(rng) < 0.05) c.params["bogus"] = 1;
            if (unit(rng) < 0.3) c.elements = some_ids(s.elements);
            if (unit(rng) < 0.3) c.trackers = some_ids(s.trackers);
            return c;
        }
        case 10: {
            SetParam c;
            auto ids = some_ids(s.effects);
            c.effect_id = ids.empty() ? "ghost" : ids.front();
            static const char* keys[] = {"fps", "threshold", "speed", "fade", "epsilon", "spawn_rate", "nope"};
            std::uniform_int_distribution<int> k(0, 6);
            c.key = keys[k(rng)];
            c.value = unit(rng) < 0.1 ? nlohmann::json("text") : nlohmann::json(unit(rng) * 4 - 1);
            return c;
        }
        case 11: return AddFlipbookFrame{};
        case 12: {
            SaveFlipbook c;
            if (unit(rng) < 0.5) c.fps = unit(rng) * 24 - 2;
            return c;
        }
        default: return Undo{};
    }
}

}  // namespace fuzz
