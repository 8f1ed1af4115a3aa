#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "scribble/error.hpp"
#include "scribble/pipeline.hpp"
#include "scribble/scene_io.hpp"
#include "scribble/server.hpp"
#include "scribble/session.hpp"
#include "scribble/synthetic.hpp"

using nlohmann::json;
using namespace scribble;

namespace {

enum class LogLevel { Quiet, Info, Debug };

LogLevel log_level() {
    const char* v = std::getenv("SCRIBBLE_LOG");
    if (!v) return LogLevel::Info;
    const std::string s = v;
    if (s == "quiet" || s == "0") return LogLevel::Quiet;
    if (s == "debug" || s == "2") return LogLevel::Debug;
    return LogLevel::Info;
}

void emit(const json& j) { std::cout << j.dump() << '\n' << std::flush; }

void error_record(const Error& e) {
    json d = json::array();
    for (const auto& x : e.diagnostics()) d.push_back({{"rule", x.rule}, {"subject", x.subject}, {"detail", x.detail}});
    std::cerr << json{{"type", "error"}, {"code", e.code()}, {"message", e.what()}, {"diagnostics", d}}.dump() << '\n';
}

bool parse_size(const std::string& s, FrameSize& out) {
    const auto x = s.find('x');
    if (x == std::string::npos) return false;
    try {
        out.width = std::stoi(s.substr(0, x));
        out.height = std::stoi(s.substr(x + 1));
    } catch (const std::exception&) {
        return false;
    }
    return out.width > 0 && out.height > 0;
}

// Frames from disk with the matching pose and mask entries, in order.
class DirectorySource : public FrameSource {
public:
    DirectorySource(const std::filesystem::path& dir, std::optional<PoseTrack> poses, std::vector<BinaryMask> masks)
        : frames_(dir), poses_(std::move(poses)), masks_(std::move(masks)) {}

    std::optional<SessionFrame> next() override {
        auto img = frames_.next();
        if (!img) return std::nullopt;
        SessionFrame f{std::move(*img), std::nullopt, std::nullopt};
        if (poses_ && i_ < poses_->frames.size()) f.pose = poses_->frames[i_];
        if (i_ < masks_.size()) f.body_mask = masks_[i_];
        ++i_;
        return f;
    }

private:
    FrameSequence frames_;
    std::optional<PoseTrack> poses_;
    std::vector<BinaryMask> masks_;
    std::size_t i_ = 0;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"scribble: tracked sketch animations over frame sequences"};
    app.require_subcommand(1);
    const LogLevel level = log_level();
    ProgressSink progress;
    if (level != LogLevel::Quiet) progress = emit;

    RenderOptions ro;
    std::string format = "svg";
    std::uint64_t seed = 0;
    auto* render = app.add_subcommand("render", "Render overlays for a recorded frame sequence");
    render->add_option("--scene", ro.scene)->required();
    render->add_option("--frames", ro.frames)->required();
    render->add_option("--pose", ro.pose);
    render->add_option("--masks", ro.masks);
    render->add_option("--out", ro.out)->required();
    render->add_option("--format", format)->check(CLI::IsMember({"svg", "raster", "both"}));
    auto* seed_opt = render->add_option("--seed-override", seed);
    render->add_option("--workers", ro.workers)->check(CLI::Range(1, 256));

    BenchOptions bo;
    std::string scene_path;
    std::string size = "640x480";
    auto* bench = app.add_subcommand("bench", "Time the per-frame pipeline on synthetic input");
    bench->add_option("--scene", scene_path);
    bench->add_option("--count", bo.count)->check(CLI::PositiveNumber);
    bench->add_option("--size", size);

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "Check a scene document");
    validate->add_option("--scene", validate_path)->required();

    std::string synth_dir;
    std::int64_t synth_count = 120;
    auto* synth = app.add_subcommand("synth", "Write a synthetic clip with the demo scene");
    synth->add_option("--out", synth_dir)->required();
    synth->add_option("--count", synth_count)->check(CLI::PositiveNumber);
    synth->add_option("--size", size);

    std::string serve_scene, serve_frames, serve_pose, serve_masks;
    ServerOptions so;
    bool live = false;
    auto* serve = app.add_subcommand("serve", "Run the authoring session service on a recorded sequence");
    serve->add_option("--frames", serve_frames)->required();
    serve->add_option("--scene", serve_scene);
    serve->add_option("--pose", serve_pose);
    serve->add_option("--masks", serve_masks);
    serve->add_option("--host", so.host);
    serve->add_option("--port", so.port);
    serve->add_option("--fps", so.autoplay_fps);
    serve->add_flag("--live", live);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*render) {
            ro.format = *output_format_from_string(format);
            if (*seed_opt) ro.seed_override = seed;
            emit(run_render(ro, progress).to_json());
        } else if (*bench) {
            if (!parse_size(size, bo.size)) throw Error("usage", "--size expects WxH");
            if (!scene_path.empty()) bo.scene = scene_path;
            const BenchReport r = run_bench(bo, progress);
            emit(r.to_json());
            if (level == LogLevel::Debug) std::cerr << r.to_json().dump(2) << '\n';
        } else if (*validate) {
            const Scene s = load_scene_file(validate_path);
            emit({{"type", "valid"}, {"elements", s.elements.size()}, {"trackers", s.trackers.size()},
                  {"effects", s.effects.size()}});
        } else if (*synth) {
            FrameSize fs;
            if (!parse_size(size, fs)) throw Error("usage", "--size expects WxH");
            synthetic::write_clip(synth_dir, fs, synth_count, synthetic::teaser_scene(fs));
            emit({{"type", "written"}, {"dir", synth_dir}, {"frames", synth_count}});
        } else if (*serve) {
            std::optional<PoseTrack> poses;
            if (!serve_pose.empty()) poses = load_pose_track(serve_pose);
            std::vector<BinaryMask> masks;
            if (!serve_masks.empty()) masks = load_masks(serve_masks);
            DirectorySource source(serve_frames, std::move(poses), std::move(masks));
            Scene scene;
            if (!serve_scene.empty()) {
                scene = load_scene_file(serve_scene);
            } else {
                const RgbImage first = read_image(std::filesystem::path(serve_frames) / (frame_stem(0) + ".png"));
                scene.frame_size = {first.width(), first.height()};
            }
            Session session(std::move(scene), SessionOptions{live, 20});
            SessionServer server(session, source, so);
            emit({{"type", "listening"}, {"host", so.host}, {"port", server.port()}});
            server.serve();
            emit({{"type", "closed"}, {"scene", json::parse(serialize_scene(session.scene()))}});
        }
    } catch (const Error& e) {
        error_record(e);
        return 1;
    } catch (const std::exception& e) {
        std::cerr << json{{"type", "error"}, {"code", "internal"}, {"message", e.what()}}.dump() << '\n';
        return 2;
    }
    return 0;
}
