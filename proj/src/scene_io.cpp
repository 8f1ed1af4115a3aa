#include "scribble/scene_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "scribble/json_codec.hpp"

namespace scribble {

using nlohmann::json;

namespace {

[[noreturn]] void schema(const std::string& field, const std::string& detail = {}) {
    throw Error("schema(" + field + ")", detail);
}

const json& member(const json& obj, const char* key) {
    if (!obj.is_object()) schema(key, "parent is not an object");
    auto it = obj.find(key);
    if (it == obj.end()) schema(key, "missing");
    return *it;
}

double number(const json& j, const char* field) {
    if (!j.is_number()) schema(field, "expected a number");
    return j.get<double>();
}

double number_or(const json& obj, const char* key, double fallback) {
    auto it = obj.find(key);
    return it == obj.end() ? fallback : number(*it, key);
}

int integer(const json& j, const char* field) {
    if (!j.is_number_integer()) schema(field, "expected an integer");
    return j.get<int>();
}

int integer_or(const json& obj, const char* key, int fallback) {
    auto it = obj.find(key);
    return it == obj.end() ? fallback : integer(*it, key);
}

bool boolean_or(const json& obj, const char* key, bool fallback) {
    auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    if (!it->is_boolean()) schema(key, "expected a boolean");
    return it->get<bool>();
}

std::string string(const json& j, const char* field) {
    if (!j.is_string()) schema(field, "expected a string");
    return j.get<std::string>();
}

Point2 point(const json& j, const char* field) {
    if (!j.is_array() || j.size() != 2) schema(field, "expected [x, y]");
    return {number(j[0], field), number(j[1], field)};
}

Polyline points(const json& j, const char* field) {
    if (!j.is_array()) schema(field, "expected a list of points");
    Polyline out;
    out.reserve(j.size());
    for (const auto& p : j) out.push_back(point(p, field));
    return out;
}

std::vector<std::string> strings(const json& j, const char* field) {
    if (!j.is_array()) schema(field, "expected a list of ids");
    std::vector<std::string> out;
    for (const auto& s : j) out.push_back(string(s, field));
    return out;
}

Rgba color(const json& j, const char* field) {
    if (!j.is_string()) schema(field, "expected \"#rrggbbaa\"");
    auto c = parse_rgba(j.get<std::string>());
    if (!c) schema(field, "expected \"#rrggbbaa\"");
    return *c;
}

json num(double v) { return canonical_number(v); }

json point_json(Point2 p) { return json::array({num(p.x), num(p.y)}); }

json points_json(const Polyline& pts) {
    json arr = json::array();
    for (const Point2& p : pts) arr.push_back(point_json(p));
    return arr;
}

json style_json(const StrokeStyle& s, json obj = json::object()) {
    obj["color"] = format_rgba(s.color);
    obj["width"] = num(s.width);
    obj["opacity"] = num(s.opacity);
    return obj;
}

StrokeStyle style_from(const json& obj, StrokeStyle fallback = {}) {
    StrokeStyle s = fallback;
    if (auto it = obj.find("color"); it != obj.end()) s.color = color(*it, "color");
    s.width = number_or(obj, "width", s.width);
    s.opacity = number_or(obj, "opacity", s.opacity);
    return s;
}

std::uint8_t channel(const json& j, const char* field) {
    const int v = integer(j, field);
    if (v < 0 || v > 255) schema(field, "channel outside [0, 255]");
    return static_cast<std::uint8_t>(v);
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* k) { return it.key() == k; })) {
            schema(where + "." + it.key(), "unknown field");
        }
    }
}

}  // namespace

double canonical_number(double v) {
    if (!std::isfinite(v)) return v;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    double out = std::strtod(buf, nullptr);
    return out == 0.0 ? 0.0 : out;  // drop negative zero
}

std::string format_rgba(Rgba c) {
    char buf[10];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x%02x", c.r, c.g, c.b, c.a);
    return buf;
}

std::optional<Rgba> parse_rgba(std::string_view s) {
    if (s.size() != 7 && s.size() != 9) return std::nullopt;
    if (s[0] != '#') return std::nullopt;
    auto byte = [&](std::size_t at) -> std::optional<std::uint8_t> {
        unsigned v = 0;
        auto [ptr, ec] = std::from_chars(s.data() + at, s.data() + at + 2, v, 16);
        if (ec != std::errc{} || ptr != s.data() + at + 2) return std::nullopt;
        return static_cast<std::uint8_t>(v);
    };
    auto r = byte(1), g = byte(3), b = byte(5);
    auto a = s.size() == 9 ? byte(7) : std::optional<std::uint8_t>(255);
    if (!r || !g || !b || !a) return std::nullopt;
    return Rgba{*r, *g, *b, *a};
}

json effect_params_json(const EffectParams& params) {
    json p = json::object();
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, BindingParams>) {
                if (v.anchor) p["anchor"] = point_json(*v.anchor);
            } else if constexpr (std::is_same_v<T, FlipBookParams>) {
                p["fps"] = num(v.fps);
            } else if constexpr (std::is_same_v<T, TriggerParams>) {
                p["threshold"] = num(v.threshold);
                p["direction"] = v.direction == TriggerDirection::Decrease ? "decrease" : "increase";
                p["duration"] = num(v.duration);
                if (v.payload_effect) p["payload_effect"] = *v.payload_effect;
            } else if constexpr (std::is_same_v<T, ParticleParams>) {
                p["emitter"] = points_json(v.emitter);
                p["spawn_rate"] = num(v.spawn_rate);
                p["speed"] = num(v.speed);
                p["lifetime"] = num(v.lifetime);
                p["direction_deg"] = num(v.direction_deg);
                p["motion_path"] = points_json(v.motion_path);
                p["loop_path"] = v.loop_path;
                if (v.anchor) p["anchor"] = point_json(*v.anchor);
            } else if constexpr (std::is_same_v<T, TrajectoryParams>) {
                p["max_elements"] = v.max_elements;
                p["fade"] = num(v.fade);
                p["scale_step"] = num(v.scale_step);
                p["stride"] = v.stride;
            } else if constexpr (std::is_same_v<T, ContourParams>) {
                p["source"] = v.source == ContourSource::Tracker ? "tracker" : "body_mask";
                p["epsilon"] = num(v.epsilon);
                p["mode"] = v.animated ? "animated" : "static";
                p["window_fraction"] = num(v.window_fraction);
                p["cycles_per_second"] = num(v.cycles_per_second);
                if (v.fill) p["fill"] = format_rgba(*v.fill);
                p["stroke"] = style_json(v.stroke);
            }
        },
        params);
    return p;
}

EffectParams effect_params_from_json(EffectKind kind, const json& p) {
    if (!p.is_object()) schema("params", "expected an object");
    switch (kind) {
        case EffectKind::Binding: {
            check_keys(p, {"anchor"}, "params");
            BindingParams out;
            if (auto it = p.find("anchor"); it != p.end()) out.anchor = point(*it, "anchor");
            return out;
        }
        case EffectKind::FlipBook: {
            check_keys(p, {"fps"}, "params");
            FlipBookParams out;
            out.fps = number_or(p, "fps", out.fps);
            return out;
        }
        case EffectKind::Trigger: {
            check_keys(p, {"threshold", "direction", "duration", "payload_effect"}, "params");
            TriggerParams out;
            out.threshold = number_or(p, "threshold", out.threshold);
            out.duration = number_or(p, "duration", out.duration);
            if (auto it = p.find("direction"); it != p.end()) {
                const std::string d = string(*it, "direction");
                if (d == "decrease") {
                    out.direction = TriggerDirection::Decrease;
                } else if (d == "increase") {
                    out.direction = TriggerDirection::Increase;
                } else {
                    schema("direction", "expected \"decrease\" or \"increase\"");
                }
            }
            if (auto it = p.find("payload_effect"); it != p.end()) out.payload_effect = string(*it, "payload_effect");
            return out;
        }
        case EffectKind::Particles: {
            check_keys(p,
                       {"emitter", "spawn_rate", "speed", "lifetime", "direction_deg", "motion_path", "loop_path",
                        "anchor"},
                       "params");
            ParticleParams out;
            if (auto it = p.find("emitter"); it != p.end()) out.emitter = points(*it, "emitter");
            out.spawn_rate = number_or(p, "spawn_rate", out.spawn_rate);
            out.speed = number_or(p, "speed", out.speed);
            out.lifetime = number_or(p, "lifetime", out.lifetime);
            out.direction_deg = number_or(p, "direction_deg", out.direction_deg);
            if (auto it = p.find("motion_path"); it != p.end()) out.motion_path = points(*it, "motion_path");
            out.loop_path = boolean_or(p, "loop_path", out.loop_path);
            if (auto it = p.find("anchor"); it != p.end()) out.anchor = point(*it, "anchor");
            return out;
        }
        case EffectKind::Trajectory: {
            check_keys(p, {"max_elements", "fade", "scale_step", "stride"}, "params");
            TrajectoryParams out;
            out.max_elements = integer_or(p, "max_elements", out.max_elements);
            out.fade = number_or(p, "fade", out.fade);
            out.scale_step = number_or(p, "scale_step", out.scale_step);
            out.stride = integer_or(p, "stride", out.stride);
            return out;
        }
        case EffectKind::Contour: {
            check_keys(p, {"source", "epsilon", "mode", "window_fraction", "cycles_per_second", "fill", "stroke"},
                       "params");
            ContourParams out;
            if (auto it = p.find("source"); it != p.end()) {
                const std::string s = string(*it, "source");
                if (s == "tracker") {
                    out.source = ContourSource::Tracker;
                } else if (s == "body_mask") {
                    out.source = ContourSource::BodyMask;
                } else {
                    schema("source", "expected \"tracker\" or \"body_mask\"");
                }
            }
            out.epsilon = number_or(p, "epsilon", out.epsilon);
            if (auto it = p.find("mode"); it != p.end()) {
                const std::string m = string(*it, "mode");
                if (m != "static" && m != "animated") schema("mode", "expected \"static\" or \"animated\"");
                out.animated = m == "animated";
            }
            out.window_fraction = number_or(p, "window_fraction", out.window_fraction);
            out.cycles_per_second = number_or(p, "cycles_per_second", out.cycles_per_second);
            if (auto it = p.find("fill"); it != p.end()) out.fill = color(*it, "fill");
            if (auto it = p.find("stroke"); it != p.end()) {
                if (!it->is_object()) schema("stroke", "expected an object");
                out.stroke = style_from(*it, out.stroke);
            }
            return out;
        }
    }
    schema("kind");
}

namespace {

json scene_json(const Scene& scene) {
    json doc = json::object();
    doc["version"] = kSceneFormatVersion;
    doc["frame_size"] = {{"width", scene.frame_size.width}, {"height", scene.frame_size.height}};
    doc["frame_rate"] = num(scene.frame_rate);
    doc["seed"] = scene.seed;

    json elements = json::array();
    for (const auto& el : scene.elements) {
        json strokes = json::array();
        for (const auto& s : el.strokes) {
            json sj = style_json(s.style);
            sj["points"] = points_json(s.points);
            strokes.push_back(std::move(sj));
        }
        elements.push_back({{"id", el.id}, {"local_origin", point_json(el.local_origin)}, {"strokes", strokes}});
    }
    doc["elements"] = std::move(elements);

    json trackers = json::array();
    for (const auto& t : scene.trackers) {
        json tj = {{"id", t.id}};
        if (const auto* cb = std::get_if<ColorBlobSource>(&t.source)) {
            tj["kind"] = "color";
            tj["seed"] = point_json(cb->seed_point);
            const auto& w = cb->window;
            tj["window"] = {{"r", {w.r_lo, w.r_hi}}, {"g", {w.g_lo, w.g_hi}}, {"b", {w.b_lo, w.b_hi}}};
        } else {
            tj["kind"] = "keypoint";
            tj["index"] = std::get<KeypointSource>(t.source).index;
        }
        trackers.push_back(std::move(tj));
    }
    doc["trackers"] = std::move(trackers);

    json effects = json::array();
    for (const auto& fx : scene.effects) {
        effects.push_back({{"id", fx.id},
                           {"kind", std::string(to_string(fx.kind()))},
                           {"elements", fx.element_ids},
                           {"trackers", fx.tracker_ids},
                           {"params", effect_params_json(fx.params)}});
    }
    doc["effects"] = std::move(effects);
    return doc;
}

Scene scene_from_json(const json& doc) {
    if (!doc.is_object()) schema("document", "expected an object");
    const int version = integer(member(doc, "version"), "version");
    if (version != kSceneFormatVersion) schema("version", "unsupported version " + std::to_string(version));

    Scene scene;
    const json& fs = member(doc, "frame_size");
    scene.frame_size = {integer(member(fs, "width"), "frame_size"), integer(member(fs, "height"), "frame_size")};
    scene.frame_rate = number_or(doc, "frame_rate", scene.frame_rate);
    if (auto it = doc.find("seed"); it != doc.end()) {
        if (!it->is_number_unsigned() && !(it->is_number_integer() && it->get<long long>() >= 0)) {
            schema("seed", "expected a non-negative integer");
        }
        scene.seed = it->get<std::uint64_t>();
    }

    if (auto it = doc.find("elements"); it != doc.end()) {
        if (!it->is_array()) schema("elements", "expected a list");
        for (const auto& ej : *it) {
            SketchElement el;
            el.id = string(member(ej, "id"), "id");
            if (auto o = ej.find("local_origin"); o != ej.end()) el.local_origin = point(*o, "local_origin");
            const json& strokes = member(ej, "strokes");
            if (!strokes.is_array()) schema("strokes", "expected a list");
            for (const auto& sj : strokes) {
                if (!sj.is_object()) schema("strokes", "expected an object");
                Stroke s;
                s.style = style_from(sj);
                s.points = points(member(sj, "points"), "points");
                el.strokes.push_back(std::move(s));
            }
            scene.elements.push_back(std::move(el));
        }
    }

    if (auto it = doc.find("trackers"); it != doc.end()) {
        if (!it->is_array()) schema("trackers", "expected a list");
        for (const auto& tj : *it) {
            TrackerSpec t;
            t.id = string(member(tj, "id"), "id");
            const std::string kind = string(member(tj, "kind"), "kind");
            if (kind == "keypoint") {
                const int index = integer(member(tj, "index"), "index");
                if (index < 0 || index >= kPoseKeypointCount) {
                    schema("keypoint-index", "index " + std::to_string(index) + " outside [0, 32]");
                }
                t.source = KeypointSource{index};
            } else if (kind == "color") {
                ColorBlobSource cb;
                cb.seed_point = point(member(tj, "seed"), "seed");
                const json& w = member(tj, "window");
                auto range = [&](const char* ch, std::uint8_t& lo, std::uint8_t& hi) {
                    const json& r = member(w, ch);
                    if (!r.is_array() || r.size() != 2) schema("window", "expected [lo, hi]");
                    lo = channel(r[0], "window");
                    hi = channel(r[1], "window");
                };
                range("r", cb.window.r_lo, cb.window.r_hi);
                range("g", cb.window.g_lo, cb.window.g_hi);
                range("b", cb.window.b_lo, cb.window.b_hi);
                t.source = cb;
            } else {
                schema("kind", "unknown tracker kind \"" + kind + "\"");
            }
            scene.trackers.push_back(std::move(t));
        }
    }

    if (auto it = doc.find("effects"); it != doc.end()) {
        if (!it->is_array()) schema("effects", "expected a list");
        for (const auto& fj : *it) {
            EffectSpec fx;
            fx.id = string(member(fj, "id"), "id");
            const auto kind = effect_kind_from_string(string(member(fj, "kind"), "kind"));
            if (!kind) schema("kind", "unknown effect kind");
            if (auto e = fj.find("elements"); e != fj.end()) fx.element_ids = strings(*e, "elements");
            if (auto t = fj.find("trackers"); t != fj.end()) fx.tracker_ids = strings(*t, "trackers");
            auto p = fj.find("params");
            fx.params = effect_params_from_json(*kind, p == fj.end() ? json::object() : *p);
            scene.effects.push_back(std::move(fx));
        }
    }
    return scene;
}

std::string read_text(const std::filesystem::path& path, const char* code) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(code, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

Scene parse_scene(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error("syntax", e.what());
    }
    Scene scene;
    try {
        scene = scene_from_json(doc);
    } catch (const json::exception& e) {
        throw Error("schema(document)", e.what());
    }
    auto diags = validate_scene(scene);
    if (!diags.empty()) {
        std::string message = diags.front().rule + " (" + diags.front().subject + ")";
        throw Error("invalid-scene", message, std::move(diags));
    }
    return scene;
}

std::string serialize_scene(const Scene& scene) { return scene_json(scene).dump(2) + "\n"; }

Scene load_scene_file(const std::filesystem::path& path) { return parse_scene(read_text(path, "scene-read")); }

void save_scene_file(const std::filesystem::path& path, const Scene& scene) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("scene-write", path.string());
    out << serialize_scene(scene);
}

PoseTrack parse_pose_track(std::string_view text) {
    if (std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); })) {
        throw Error("pose-gap", "no frame 0");
    }
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error("syntax", e.what());
    }
    PoseTrack track;
    try {
        track.frame_rate = number_or(doc, "frame_rate", track.frame_rate);
        const json& frames = member(doc, "frames");
        if (!frames.is_array()) schema("frames", "expected a list");
        if (frames.empty()) throw Error("pose-gap", "no frame 0");
        for (std::size_t i = 0; i < frames.size(); ++i) {
            const json& fj = frames[i];
            const int index = integer(member(fj, "index"), "index");
            if (index != static_cast<int>(i)) {
                throw Error("pose-gap", "expected frame " + std::to_string(i) + ", found " + std::to_string(index));
            }
            const json& kps = member(fj, "keypoints");
            if (!kps.is_array() || kps.size() != kPoseKeypointCount) {
                throw Error("pose-arity(" + std::to_string(index) + ")",
                            std::to_string(kps.is_array() ? kps.size() : 0) + " keypoints");
            }
            PoseFrame pf;
            for (std::size_t k = 0; k < kps.size(); ++k) {
                const json& kj = kps[k];
                if (!kj.is_array() || kj.size() != 3 || !kj[2].is_boolean()) {
                    schema("keypoints", "expected [x, y, visible]");
                }
                pf.keypoints[k] = {{number(kj[0], "keypoints"), number(kj[1], "keypoints")}, kj[2].get<bool>()};
            }
            track.frames.push_back(pf);
        }
    } catch (const json::exception& e) {
        throw Error("schema(pose)", e.what());
    }
    return track;
}

PoseTrack load_pose_track(const std::filesystem::path& path) { return parse_pose_track(read_text(path, "pose-read")); }

std::string serialize_pose_track(const PoseTrack& track) {
    json frames = json::array();
    for (std::size_t i = 0; i < track.frames.size(); ++i) {
        json kps = json::array();
        for (const Keypoint& k : track.frames[i].keypoints) {
            kps.push_back({num(k.position.x), num(k.position.y), k.visible});
        }
        frames.push_back({{"index", i}, {"keypoints", std::move(kps)}});
    }
    json doc = {{"frame_rate", num(track.frame_rate)}, {"frames", std::move(frames)}};
    return doc.dump() + "\n";
}

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

}  // namespace

std::vector<std::uint8_t> encode_masks(const std::vector<BinaryMask>& masks) {
    std::vector<std::uint8_t> out;
    for (const BinaryMask& m : masks) {
        put_u32(out, static_cast<std::uint32_t>(m.width()));
        put_u32(out, static_cast<std::uint32_t>(m.height()));
        std::uint8_t current = 0;
        std::uint32_t run = 0;
        for (std::uint8_t bit : m.bits()) {
            if (bit != current) {
                put_u32(out, run);
                current = bit;
                run = 0;
            }
            ++run;
        }
        put_u32(out, run);
    }
    return out;
}

std::vector<BinaryMask> decode_masks(const std::vector<std::uint8_t>& bytes) {
    std::size_t pos = 0;
    auto get_u32 = [&]() {
        if (pos + 4 > bytes.size()) throw Error("mask-format", "truncated");
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[pos + i]) << (8 * i);
        pos += 4;
        return v;
    };
    std::vector<BinaryMask> masks;
    while (pos < bytes.size()) {
        const std::uint32_t w = get_u32();
        const std::uint32_t h = get_u32();
        if (w > (1u << 15) || h > (1u << 15)) throw Error("mask-format", "implausible size");
        BinaryMask m(static_cast<int>(w), static_cast<int>(h));
        const std::uint64_t total = static_cast<std::uint64_t>(w) * h;
        std::uint64_t filled = 0;
        std::uint8_t value = 0;
        auto& bits = m.bits();
        while (filled < total) {
            const std::uint32_t run = get_u32();
            if (filled + run > total) throw Error("mask-format", "runs overflow the frame");
            std::fill(bits.begin() + static_cast<std::ptrdiff_t>(filled),
                      bits.begin() + static_cast<std::ptrdiff_t>(filled + run), value);
            filled += run;
            value ^= 1;
        }
        masks.push_back(std::move(m));
    }
    return masks;
}

std::vector<BinaryMask> load_masks(const std::filesystem::path& path) {
    const std::string text = read_text(path, "mask-read");
    return decode_masks(std::vector<std::uint8_t>(text.begin(), text.end()));
}

void save_masks(const std::filesystem::path& path, const std::vector<BinaryMask>& masks) {
    const auto bytes = encode_masks(masks);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("mask-write", path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

namespace {

RgbImage read_ppm(const std::filesystem::path& path) {
    const std::string data = read_text(path, "image-read");
    std::size_t pos = 0;
    auto token = [&]() {
        while (pos < data.size()) {
            if (std::isspace(static_cast<unsigned char>(data[pos]))) {
                ++pos;
            } else if (data[pos] == '#') {
                while (pos < data.size() && data[pos] != '\n') ++pos;
            } else {
                break;
            }
        }
        const std::size_t start = pos;
        while (pos < data.size() && !std::isspace(static_cast<unsigned char>(data[pos]))) ++pos;
        return data.substr(start, pos - start);
    };
    if (token() != "P6") throw Error("image-read", path.string() + ": not a binary PPM");
    const int w = std::atoi(token().c_str());
    const int h = std::atoi(token().c_str());
    const int maxval = std::atoi(token().c_str());
    if (w <= 0 || h <= 0 || maxval != 255) throw Error("image-read", path.string() + ": unsupported PPM header");
    ++pos;  // single whitespace after maxval
    const std::size_t need = static_cast<std::size_t>(w) * h * 3;
    if (data.size() < pos + need) throw Error("image-read", path.string() + ": truncated");
    RgbImage img(w, h);
    std::copy(data.begin() + static_cast<std::ptrdiff_t>(pos),
              data.begin() + static_cast<std::ptrdiff_t>(pos + need), img.bytes().begin());
    return img;
}

RgbImage read_png(const std::filesystem::path& path) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&image, path.c_str())) {
        throw Error("image-read", path.string() + ": " + image.message);
    }
    image.format = PNG_FORMAT_RGB;
    RgbImage img(static_cast<int>(image.width), static_cast<int>(image.height));
    if (!png_image_finish_read(&image, nullptr, img.bytes().data(), 0, nullptr)) {
        const std::string msg = image.message;
        png_image_free(&image);
        throw Error("image-read", path.string() + ": " + msg);
    }
    return img;
}

}  // namespace

RgbImage read_image(const std::filesystem::path& path) {
    const std::string ext = path.extension().string();
    if (ext == ".ppm") return read_ppm(path);
    if (ext == ".png") return read_png(path);
    throw Error("image-read", path.string() + ": unsupported extension");
}

void write_png(const std::filesystem::path& path, const RgbImage& img) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(img.width());
    image.height = static_cast<png_uint_32>(img.height());
    image.format = PNG_FORMAT_RGB;
    if (!png_image_write_to_file(&image, path.c_str(), 0, img.bytes().data(), 0, nullptr)) {
        throw Error("image-write", path.string() + ": " + image.message);
    }
}

void write_ppm(const std::filesystem::path& path, const RgbImage& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("image-write", path.string());
    out << "P6\n" << img.width() << ' ' << img.height() << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.bytes().data()), static_cast<std::streamsize>(img.bytes().size()));
}

std::string frame_stem(std::int64_t index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "frame_%06lld", static_cast<long long>(index));
    return buf;
}

FrameSequence::FrameSequence(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw Error("frames-read", dir.string() + " is not a directory");
    std::map<long long, std::filesystem::path> found;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string ext = entry.path().extension().string();
        if (ext != ".png" && ext != ".ppm") continue;
        const std::string stem = entry.path().stem().string();
        const std::string digits = stem.rfind("frame_", 0) == 0 ? stem.substr(6) : stem;
        if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](unsigned char c) { return std::isdigit(c); })) {
            continue;
        }
        const long long index = std::stoll(digits);
        if (!found.emplace(index, entry.path()).second) {
            throw Error("frame-gap", "duplicate frame index " + std::to_string(index));
        }
    }
    long long expect = 0;
    for (auto& [index, path] : found) {
        if (index != expect) throw Error("frame-gap", "missing frame " + std::to_string(expect));
        files_.push_back(path);
        ++expect;
    }
}

std::optional<RgbImage> FrameSequence::next() {
    if (next_ >= files_.size()) return std::nullopt;
    RgbImage img = read_image(files_[next_]);
    if (next_ == 0) {
        width_ = img.width();
        height_ = img.height();
    } else if (img.width() != width_ || img.height() != height_) {
        throw Error("size-mismatch(" + std::to_string(next_) + ")");
    }
    ++next_;
    return img;
}

}  // namespace scribble
