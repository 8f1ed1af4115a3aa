#include "scribble/session.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "scribble/json_codec.hpp"
#include "scribble/scene_io.hpp"

namespace scribble {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Event make_event(EventType type, std::string id = {}) {
    Event e;
    e.type = type;
    e.id = std::move(id);
    return e;
}

Point2 bbox_center(const std::vector<Stroke>& strokes) {
    double min_x = std::numeric_limits<double>::infinity(), min_y = min_x;
    double max_x = -min_x, max_y = -min_x;
    for (const Stroke& s : strokes) {
        for (const Point2& p : s.points) {
            min_x = std::min(min_x, p.x);
            max_x = std::max(max_x, p.x);
            min_y = std::min(min_y, p.y);
            max_y = std::max(max_y, p.y);
        }
    }
    return {canonical_number((min_x + max_x) / 2.0), canonical_number((min_y + max_y) / 2.0)};
}

Point2 canonical(Point2 p) { return {canonical_number(p.x), canonical_number(p.y)}; }

}  // namespace

bool mutates_scene(const SessionCommand& cmd) {
    return std::holds_alternative<SelectTrackPoint>(cmd) || std::holds_alternative<GroupElement>(cmd) ||
           std::holds_alternative<ApplyEffect>(cmd) || std::holds_alternative<SetParam>(cmd) ||
           std::holds_alternative<AddFlipbookFrame>(cmd) || std::holds_alternative<SaveFlipbook>(cmd);
}

Event error_event(std::string rule, std::string detail) {
    Event e = make_event(EventType::Error);
    e.rule = std::move(rule);
    e.detail = std::move(detail);
    return e;
}

Session::Session(Scene scene, SessionOptions options) : options_(options), engine_(std::move(scene)) {
    last_overlay_ = engine_.current_overlay();
}

void Session::show(SessionFrame frame) { shown_ = std::move(frame); }

std::string Session::next_id(const char* prefix) {
    for (;;) {
        std::string id = prefix + std::to_string(++id_counter_);
        const Scene& s = engine_.scene();
        if (!s.find_element(id) && !s.find_tracker(id) && !s.find_effect(id)) return id;
    }
}

Session::Snapshot Session::snapshot() const {
    return {engine_.scene(), selection_, flipbook_pages_, last_element_};
}

void Session::commit(Scene next, Snapshot before) {
    engine_.set_scene(std::move(next));
    undo_.push_back(std::move(before));
    while (undo_.size() > options_.undo_depth) undo_.pop_front();
    last_overlay_ = engine_.current_overlay();
}

std::optional<std::string> Session::make_element(std::vector<Event>& events) {
    if (open_stroke_) {
        events.push_back(error_event("stroke-open"));
        return std::nullopt;
    }
    if (pending_strokes_.empty()) {
        events.push_back(error_event("no-strokes"));
        return std::nullopt;
    }
    Scene next = engine_.scene();
    SketchElement el;
    el.id = next_id("e");
    el.strokes = pending_strokes_;
    el.local_origin = bbox_center(el.strokes);
    next.elements.push_back(el);
    if (auto diags = validate_scene(next); !diags.empty()) {
        events.push_back(error_event(diags.front().rule, diags.front().subject));
        return std::nullopt;
    }
    commit(std::move(next), snapshot());
    pending_strokes_.clear();
    events.push_back(make_event(EventType::ElementCreated, el.id));
    return el.id;
}

std::vector<Event> Session::apply(const SessionCommand& cmd) {
    const bool authoring = !std::holds_alternative<PauseVideo>(cmd) && !std::holds_alternative<ResumeVideo>(cmd);
    if (authoring && mode_ == SessionMode::Playing) {
        if (!options_.live) return {error_event("not-paused")};
        deferred_.push_back(cmd);
        return {};
    }
    return apply_now(cmd);
}

std::vector<Event> Session::apply_now(const SessionCommand& cmd) {
    std::vector<Event> events;

    std::visit(
        overloaded{
            [&](const PauseVideo&) {
                mode_ = SessionMode::Paused;
                Event e = make_event(EventType::ModeChanged);
                e.rule = "paused";
                events.push_back(e);
            },
            [&](const ResumeVideo&) {
                mode_ = SessionMode::Playing;
                Event e = make_event(EventType::ModeChanged);
                e.rule = "playing";
                events.push_back(e);
            },
            [&](const SelectTrackPoint& c) {
                if (!shown_) {
                    events.push_back(error_event("no-frame"));
                    return;
                }
                TrackerSpec spec;
                Point2 confirmed;
                try {
                    if (c.kind == TrackKind::Color) {
                        const Point2 seed{std::floor(c.at.x), std::floor(c.at.y)};
                        const ColorWindow w = sample_color_window(shown_->image, seed);
                        const auto centroid = largest_component_centroid(segment_by_window(shown_->image, w));
                        confirmed = centroid.value_or(seed);
                        spec.source = ColorBlobSource{seed, w};
                    } else {
                        if (!shown_->pose) {
                            events.push_back(error_event("no-pose"));
                            return;
                        }
                        const int index = nearest_keypoint(*shown_->pose, c.at);
                        confirmed = shown_->pose->keypoints[static_cast<std::size_t>(index)].position;
                        spec.source = KeypointSource{index};
                    }
                } catch (const Error& e) {
                    events.push_back(error_event(e.code()));
                    return;
                }
                Snapshot before = snapshot();
                Scene next = engine_.scene();
                spec.id = next_id("t");
                next.trackers.push_back(spec);
                if (auto diags = validate_scene(next); !diags.empty()) {
                    events.push_back(error_event(diags.front().rule, diags.front().subject));
                    return;
                }
                commit(std::move(next), std::move(before));
                engine_.set_tracker_position(spec.id, confirmed);
                selection_.push_back(spec.id);
                Event e = make_event(EventType::TrackPointConfirmed, spec.id);
                e.position = confirmed;
                events.push_back(e);
            },
            [&](const BeginStroke& c) {
                if (open_stroke_) {
                    events.push_back(error_event("stroke-open"));
                    return;
                }
                open_stroke_ = Stroke{{}, c.style};
            },
            [&](const AppendPoints& c) {
                if (!open_stroke_) {
                    events.push_back(error_event("no-open-stroke"));
                    return;
                }
                if (!std::all_of(c.points.begin(), c.points.end(), [](Point2 p) { return is_finite(p); })) {
                    events.push_back(error_event("non-finite"));
                    return;
                }
                for (Point2 p : c.points) open_stroke_->points.push_back(canonical(p));
            },
            [&](const EndStroke&) {
                if (!open_stroke_) {
                    events.push_back(error_event("no-open-stroke"));
                    return;
                }
                Stroke s = std::move(*open_stroke_);
                open_stroke_.reset();
                if (s.points.size() < 2) {
                    events.push_back(error_event("stroke-points"));
                    return;
                }
                pending_strokes_.push_back(std::move(s));
            },
            [&](const GroupElement&) {
                if (auto id = make_element(events)) last_element_ = *id;
            },
            [&](const AddFlipbookFrame&) {
                if (auto id = make_element(events)) flipbook_pages_.push_back(*id);
            },
            [&](const SaveFlipbook& c) {
                if (flipbook_pages_.empty()) {
                    events.push_back(error_event("empty-flipbook"));
                    return;
                }
                Snapshot before = snapshot();
                Scene next = engine_.scene();
                EffectSpec fx;
                fx.id = next_id("fx");
                fx.element_ids = flipbook_pages_;
                FlipBookParams p;
                if (c.fps) p.fps = canonical_number(*c.fps);
                fx.params = p;
                next.effects.push_back(fx);
                if (auto diags = validate_scene(next); !diags.empty()) {
                    events.push_back(error_event(diags.front().rule, diags.front().subject));
                    return;
                }
                commit(std::move(next), std::move(before));
                flipbook_pages_.clear();
                events.push_back(make_event(EventType::EffectApplied, fx.id));
            },
            [&](const ApplyEffect& c) {
                EffectSpec fx;
                try {
                    fx.params = effect_params_from_json(c.kind, c.params);
                } catch (const Error& e) {
                    events.push_back(error_event(e.code(), e.what()));
                    return;
                }
                if (c.elements) {
                    fx.element_ids = *c.elements;
                } else if (c.kind != EffectKind::Contour && last_element_) {
                    fx.element_ids = {*last_element_};
                }
                fx.tracker_ids = c.trackers ? *c.trackers : selection_;

                // Anchor bound effects at the tracker's current position.
                auto anchor_of = [&](std::size_t i) -> std::optional<Point2> {
                    if (fx.tracker_ids.size() <= i) return std::nullopt;
                    const auto& states = engine_.tracker_states();
                    for (const auto& st : states) {
                        if (st.tracker_id == fx.tracker_ids[i]) return canonical(st.last_position);
                    }
                    return std::nullopt;
                };
                if (auto* b = std::get_if<BindingParams>(&fx.params); b && !b->anchor) b->anchor = anchor_of(0);
                if (auto* p = std::get_if<ParticleParams>(&fx.params); p && !p->anchor) p->anchor = anchor_of(0);

                Snapshot before = snapshot();
                Scene next = engine_.scene();
                fx.id = next_id("fx");
                next.effects.push_back(fx);
                if (auto diags = validate_scene(next); !diags.empty()) {
                    events.push_back(error_event(diags.front().rule, diags.front().subject));
                    return;
                }
                commit(std::move(next), std::move(before));
                selection_.clear();
                last_element_.reset();
                events.push_back(make_event(EventType::EffectApplied, fx.id));
            },
            [&](const SetParam& c) {
                const EffectSpec* existing = engine_.scene().find_effect(c.effect_id);
                if (!existing) {
                    events.push_back(error_event("unknown-effect", c.effect_id));
                    return;
                }
                Scene next = engine_.scene();
                auto it = std::find_if(next.effects.begin(), next.effects.end(),
                                       [&](const EffectSpec& e) { return e.id == c.effect_id; });
                try {
                    json params = effect_params_json(it->params);
                    params[c.key] = c.value;
                    // Round through the canonical form so the stored scene matches its serialization.
                    it->params = effect_params_from_json(it->kind(), effect_params_json(
                                                                         effect_params_from_json(it->kind(), params)));
                } catch (const Error& e) {
                    events.push_back(error_event(e.code(), c.key));
                    return;
                }
                if (auto diags = validate_scene(next); !diags.empty()) {
                    events.push_back(error_event(diags.front().rule, diags.front().subject));
                    return;
                }
                commit(std::move(next), snapshot());
                events.push_back(make_event(EventType::ParamSet, c.effect_id));
            },
            [&](const Undo&) {
                if (undo_.empty()) {
                    events.push_back(error_event("nothing-to-undo"));
                    return;
                }
                Snapshot prev = std::move(undo_.back());
                undo_.pop_back();
                engine_.set_scene(std::move(prev.scene));
                selection_ = std::move(prev.selection);
                flipbook_pages_ = std::move(prev.flipbook_pages);
                last_element_ = std::move(prev.last_element);
                last_overlay_ = engine_.current_overlay();
                events.push_back(make_event(EventType::Undone));
            },
        },
        cmd);

    return events;
}

StepResult Session::step(std::optional<SessionFrame> next) {
    StepResult result;
    if (mode_ == SessionMode::Paused) {
        result.overlay = last_overlay_;
        return result;
    }
    if (!next) {
        mode_ = SessionMode::Paused;
        result.events.push_back(make_event(EventType::EndOfStream));
        result.overlay = last_overlay_;
        return result;
    }

    // Live edits land on the frame boundary, before the new frame is processed.
    std::vector<SessionCommand> pending;
    pending.swap(deferred_);
    for (const auto& cmd : pending) {
        auto evs = apply_now(cmd);
        result.events.insert(result.events.end(), evs.begin(), evs.end());
    }

    shown_ = std::move(next);
    last_overlay_ = engine_.step(shown_->inputs());
    result.overlay = last_overlay_;
    result.advanced = true;
    return result;
}

// ---------------------------------------------------------------------------

namespace {

json style_to_json(const StrokeStyle& s) {
    return {{"color", format_rgba(s.color)}, {"width", canonical_number(s.width)},
            {"opacity", canonical_number(s.opacity)}};
}

[[noreturn]] void bad(const std::string& field) { throw Error("schema(" + field + ")"); }

const json& field(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) bad(key);
    return *it;
}

double num_field(const json& j, const char* key) {
    const json& v = field(j, key);
    if (!v.is_number()) bad(key);
    return v.get<double>();
}

std::vector<std::string> id_list(const json& j, const char* key) {
    const json& v = field(j, key);
    if (!v.is_array()) bad(key);
    std::vector<std::string> out;
    for (const auto& s : v) {
        if (!s.is_string()) bad(key);
        out.push_back(s.get<std::string>());
    }
    return out;
}

constexpr const char* kEventNames[] = {"track_point_confirmed", "element_created", "effect_applied", "param_set",
                                       "undone",                "mode_changed",    "end_of_stream",  "error"};

}  // namespace

json command_to_json(const SessionCommand& cmd) {
    return std::visit(
        overloaded{
            [](const PauseVideo&) -> json { return {{"type", "pause"}}; },
            [](const ResumeVideo&) -> json { return {{"type", "resume"}}; },
            [](const SelectTrackPoint& c) -> json {
                return {{"type", "select_track_point"},
                        {"x", c.at.x},
                        {"y", c.at.y},
                        {"kind", c.kind == TrackKind::Color ? "color" : "body"}};
            },
            [](const BeginStroke& c) -> json {
                json j = style_to_json(c.style);
                j["type"] = "begin_stroke";
                return j;
            },
            [](const AppendPoints& c) -> json {
                json pts = json::array();
                for (Point2 p : c.points) pts.push_back({p.x, p.y});
                return {{"type", "append_points"}, {"points", pts}};
            },
            [](const EndStroke&) -> json { return {{"type", "end_stroke"}}; },
            [](const GroupElement&) -> json { return {{"type", "group_element"}}; },
            [](const ApplyEffect& c) -> json {
                json j = {{"type", "apply_effect"}, {"kind", std::string(to_string(c.kind))}, {"params", c.params}};
                if (c.elements) j["elements"] = *c.elements;
                if (c.trackers) j["trackers"] = *c.trackers;
                return j;
            },
            [](const SetParam& c) -> json {
                return {{"type", "set_param"}, {"effect", c.effect_id}, {"key", c.key}, {"value", c.value}};
            },
            [](const AddFlipbookFrame&) -> json { return {{"type", "add_flipbook_frame"}}; },
            [](const SaveFlipbook& c) -> json {
                json j = {{"type", "save_flipbook"}};
                if (c.fps) j["fps"] = *c.fps;
                return j;
            },
            [](const Undo&) -> json { return {{"type", "undo"}}; },
        },
        cmd);
}

SessionCommand command_from_json(const json& j) {
    if (!j.is_object()) bad("command");
    const json& t = field(j, "type");
    if (!t.is_string()) bad("type");
    const std::string type = t.get<std::string>();

    if (type == "pause") return PauseVideo{};
    if (type == "resume") return ResumeVideo{};
    if (type == "select_track_point") {
        SelectTrackPoint c;
        c.at = {num_field(j, "x"), num_field(j, "y")};
        const std::string kind = j.value("kind", std::string("color"));
        if (kind == "color") {
            c.kind = TrackKind::Color;
        } else if (kind == "body") {
            c.kind = TrackKind::Body;
        } else {
            bad("kind");
        }
        return c;
    }
    if (type == "begin_stroke") {
        BeginStroke c;
        if (auto it = j.find("color"); it != j.end()) {
            auto rgba = it->is_string() ? parse_rgba(it->get<std::string>()) : std::nullopt;
            if (!rgba) bad("color");
            c.style.color = *rgba;
        }
        if (j.contains("width")) c.style.width = num_field(j, "width");
        if (j.contains("opacity")) c.style.opacity = num_field(j, "opacity");
        return c;
    }
    if (type == "append_points") {
        AppendPoints c;
        const json& pts = field(j, "points");
        if (!pts.is_array()) bad("points");
        for (const auto& p : pts) {
            if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) bad("points");
            c.points.push_back({p[0].get<double>(), p[1].get<double>()});
        }
        return c;
    }
    if (type == "end_stroke") return EndStroke{};
    if (type == "group_element") return GroupElement{};
    if (type == "apply_effect") {
        ApplyEffect c;
        const json& k = field(j, "kind");
        const auto kind = k.is_string() ? effect_kind_from_string(k.get<std::string>()) : std::nullopt;
        if (!kind) bad("kind");
        c.kind = *kind;
        if (auto it = j.find("params"); it != j.end()) {
            if (!it->is_object()) bad("params");
            c.params = *it;
        }
        if (j.contains("elements")) c.elements = id_list(j, "elements");
        if (j.contains("trackers")) c.trackers = id_list(j, "trackers");
        return c;
    }
    if (type == "set_param") {
        SetParam c;
        const json& e = field(j, "effect");
        const json& key = field(j, "key");
        if (!e.is_string()) bad("effect");
        if (!key.is_string()) bad("key");
        c.effect_id = e.get<std::string>();
        c.key = key.get<std::string>();
        c.value = field(j, "value");
        return c;
    }
    if (type == "add_flipbook_frame") return AddFlipbookFrame{};
    if (type == "save_flipbook") {
        SaveFlipbook c;
        if (j.contains("fps")) c.fps = num_field(j, "fps");
        return c;
    }
    if (type == "undo") return Undo{};
    bad("type");
}

json event_to_json(const Event& e) {
    json j = {{"type", kEventNames[static_cast<std::size_t>(e.type)]}};
    switch (e.type) {
        case EventType::TrackPointConfirmed:
            j["id"] = e.id;
            j["x"] = e.position.x;
            j["y"] = e.position.y;
            break;
        case EventType::ElementCreated:
        case EventType::EffectApplied:
        case EventType::ParamSet:
            j["id"] = e.id;
            break;
        case EventType::ModeChanged:
            j["mode"] = e.rule;
            break;
        case EventType::Error:
            j["rule"] = e.rule;
            j["detail"] = e.detail;
            break;
        case EventType::Undone:
        case EventType::EndOfStream:
            break;
    }
    return j;
}

Event event_from_json(const json& j) {
    const std::string type = j.at("type").get<std::string>();
    Event e;
    auto it = std::find(std::begin(kEventNames), std::end(kEventNames), type);
    if (it == std::end(kEventNames)) bad("type");
    e.type = static_cast<EventType>(it - std::begin(kEventNames));
    e.id = j.value("id", std::string());
    e.position = {j.value("x", 0.0), j.value("y", 0.0)};
    e.rule = e.type == EventType::ModeChanged ? j.value("mode", std::string()) : j.value("rule", std::string());
    e.detail = j.value("detail", std::string());
    return e;
}

std::string write_transcript(const std::vector<TranscriptEntry>& entries) {
    std::string out;
    for (const auto& e : entries) {
        json j;
        switch (e.op) {
            case TranscriptEntry::Op::Command: j = {{"op", "command"}, {"command", command_to_json(*e.command)}}; break;
            case TranscriptEntry::Op::Show: j = {{"op", "show"}}; break;
            case TranscriptEntry::Op::Step: j = {{"op", "step"}}; break;
        }
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::vector<TranscriptEntry> read_transcript(std::string_view text) {
    std::vector<TranscriptEntry> out;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw Error("syntax", e.what());
        }
        const std::string op = j.value("op", std::string());
        if (op == "command") {
            out.push_back({TranscriptEntry::Op::Command, command_from_json(field(j, "command"))});
        } else if (op == "show") {
            out.push_back({TranscriptEntry::Op::Show, std::nullopt});
        } else if (op == "step") {
            out.push_back({TranscriptEntry::Op::Step, std::nullopt});
        } else {
            bad("op");
        }
    }
    return out;
}

std::optional<SessionFrame> VectorFrameSource::next() {
    if (pos_ >= frames_.size()) return std::nullopt;
    return frames_[pos_++];
}

ReplayResult replay(const Scene& initial, const std::vector<TranscriptEntry>& transcript, FrameSource& frames,
                    SessionOptions options) {
    Session session(initial, options);
    ReplayResult out;
    for (const auto& entry : transcript) {
        switch (entry.op) {
            case TranscriptEntry::Op::Command: {
                auto evs = session.apply(*entry.command);
                out.events.insert(out.events.end(), evs.begin(), evs.end());
                break;
            }
            case TranscriptEntry::Op::Show:
                if (auto f = frames.next()) session.show(std::move(*f));
                break;
            case TranscriptEntry::Op::Step: {
                StepResult r = session.step(session.mode() == SessionMode::Playing ? frames.next() : std::nullopt);
                out.events.insert(out.events.end(), r.events.begin(), r.events.end());
                if (r.advanced) out.overlays_svg.push_back(emit_svg(r.overlay));
                break;
            }
        }
    }
    out.scene = session.scene();
    return out;
}

}  // namespace scribble
