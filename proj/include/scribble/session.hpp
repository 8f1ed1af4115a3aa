#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "scribble/engine.hpp"

namespace scribble {

// ---------------------------------------------------------------------------
// Commands

struct PauseVideo {};
struct ResumeVideo {};

enum class TrackKind { Color, Body };

struct SelectTrackPoint {
    Point2 at;
    TrackKind kind = TrackKind::Color;
};

struct BeginStroke {
    StrokeStyle style;
};

struct AppendPoints {
    Polyline points;
};

struct EndStroke {};
struct GroupElement {};

struct ApplyEffect {
    EffectKind kind = EffectKind::Binding;
    nlohmann::json params = nlohmann::json::object();
    /// Default to the element grouped last and the trackers selected since the
    /// previous ApplyEffect.
    std::optional<std::vector<std::string>> elements;
    std::optional<std::vector<std::string>> trackers;
};

struct SetParam {
    std::string effect_id;
    std::string key;
    nlohmann::json value;
};

struct AddFlipbookFrame {};

struct SaveFlipbook {
    std::optional<double> fps;
};

struct Undo {};

using SessionCommand = std::variant<PauseVideo, ResumeVideo, SelectTrackPoint, BeginStroke, AppendPoints, EndStroke,
                                    GroupElement, ApplyEffect, SetParam, AddFlipbookFrame, SaveFlipbook, Undo>;

/// True for commands that change the scene and can be undone.
bool mutates_scene(const SessionCommand& cmd);

// ---------------------------------------------------------------------------
// Events

enum class EventType {
    TrackPointConfirmed,
    ElementCreated,
    EffectApplied,
    ParamSet,
    Undone,
    ModeChanged,
    EndOfStream,
    Error,
};

struct Event {
    EventType type = EventType::Error;
    std::string id;        // tracker, element or effect id
    Point2 position;       // TrackPointConfirmed
    std::string rule;      // Error: diagnostic rule; ModeChanged: "paused" / "playing"
    std::string detail;

    friend bool operator==(const Event&, const Event&) = default;
};

Event error_event(std::string rule, std::string detail = {});

// ---------------------------------------------------------------------------
// Session

enum class SessionMode { Paused, Playing };

/// One frame handed to the session; pose and body mask are optional.
struct SessionFrame {
    RgbImage image;
    std::optional<PoseFrame> pose;
    std::optional<BinaryMask> body_mask;

    FrameInputs inputs() const {
        return {&image, pose ? &*pose : nullptr, body_mask ? &*body_mask : nullptr};
    }
};

struct SessionOptions {
    /// Live sessions accept authoring commands while playing and apply them at
    /// the next frame boundary; recorded sessions require a pause.
    bool live = false;
    std::size_t undo_depth = 20;
};

struct StepResult {
    FrameOverlay overlay;
    std::vector<Event> events;
    bool advanced = false;
};

/// Authoring state: scene, engine, selection and pending strokes. All changes go
/// through apply() and step(); a rejected command leaves the state untouched.
class Session {
public:
    explicit Session(Scene scene, SessionOptions options = {});

    std::vector<Event> apply(const SessionCommand& cmd);

    /// Steps the engine on `next` when playing; a paused session returns the last
    /// overlay unchanged. An absent frame ends the stream and pauses.
    StepResult step(std::optional<SessionFrame> next);

    /// Sets the frame shown to the author (used by SelectTrackPoint) without stepping.
    void show(SessionFrame frame);

    SessionMode mode() const { return mode_; }
    const Scene& scene() const { return engine_.scene(); }
    const Engine& engine() const { return engine_; }
    const FrameOverlay& last_overlay() const { return last_overlay_; }
    std::int64_t current_frame() const { return engine_.frame_index(); }
    const std::vector<std::string>& selected_trackers() const { return selection_; }
    std::size_t undo_levels() const { return undo_.size(); }
    bool has_open_stroke() const { return open_stroke_.has_value(); }

private:
    struct Snapshot {
        Scene scene;
        std::vector<std::string> selection;
        std::vector<std::string> flipbook_pages;
        std::optional<std::string> last_element;
    };

    std::vector<Event> apply_now(const SessionCommand& cmd);
    Snapshot snapshot() const;
    void commit(Scene next, Snapshot before);
    std::optional<std::string> make_element(std::vector<Event>& events);
    std::string next_id(const char* prefix);

    SessionOptions options_;
    SessionMode mode_ = SessionMode::Paused;
    Engine engine_;
    std::optional<SessionFrame> shown_;
    FrameOverlay last_overlay_;

    std::optional<Stroke> open_stroke_;
    std::vector<Stroke> pending_strokes_;
    std::vector<std::string> flipbook_pages_;
    std::vector<std::string> selection_;
    std::optional<std::string> last_element_;
    std::deque<Snapshot> undo_;
    std::vector<SessionCommand> deferred_;
    std::uint64_t id_counter_ = 0;
};

// ---------------------------------------------------------------------------
// Wire encoding

nlohmann::json command_to_json(const SessionCommand& cmd);
/// Throws Error("schema(<field>)") for malformed commands.
SessionCommand command_from_json(const nlohmann::json& j);
nlohmann::json event_to_json(const Event& e);
Event event_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------------------
// Transcripts: JSON lines, each {"op":"command","command":{...}},
// {"op":"show"} or {"op":"step"}. "show" and "step" consume the next frame.

struct TranscriptEntry {
    enum class Op { Command, Show, Step } op = Op::Command;
    std::optional<SessionCommand> command;
};

std::string write_transcript(const std::vector<TranscriptEntry>& entries);
std::vector<TranscriptEntry> read_transcript(std::string_view text);

class FrameSource {
public:
    virtual ~FrameSource() = default;
    virtual std::optional<SessionFrame> next() = 0;
};

/// Frames held in memory, replayable from the start.
class VectorFrameSource : public FrameSource {
public:
    explicit VectorFrameSource(std::vector<SessionFrame> frames) : frames_(std::move(frames)) {}
    std::optional<SessionFrame> next() override;
    void rewind() { pos_ = 0; }

private:
    std::vector<SessionFrame> frames_;
    std::size_t pos_ = 0;
};

struct ReplayResult {
    Scene scene;
    std::vector<std::string> overlays_svg;  // one per advancing step
    std::vector<Event> events;
};

ReplayResult replay(const Scene& initial, const std::vector<TranscriptEntry>& transcript, FrameSource& frames,
                    SessionOptions options = {});

}  // namespace scribble
