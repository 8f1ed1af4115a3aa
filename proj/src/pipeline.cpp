#include "scribble/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <limits>
#include <thread>

#include "scribble/error.hpp"
#include "scribble/render.hpp"
#include "scribble/scene_io.hpp"
#include "scribble/synthetic.hpp"

namespace scribble {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

bool needs_pose(const Scene& s) {
    return std::any_of(s.trackers.begin(), s.trackers.end(), [](const TrackerSpec& t) { return !t.is_color(); });
}

bool needs_masks(const Scene& s) {
    return std::any_of(s.effects.begin(), s.effects.end(), [](const EffectSpec& e) {
        const auto* c = std::get_if<ContourParams>(&e.params);
        return c && c->source == ContourSource::BodyMask;
    });
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) throw Error("io", "cannot write " + path.string());
}

struct PendingFrame {
    FrameOverlay overlay;
    RgbImage image;
};

void write_outputs(const RenderOptions& o, const PendingFrame& f) {
    const std::string stem = frame_stem(f.overlay.frame_index);
    if (o.format != OutputFormat::Raster) write_text(o.out / (stem + ".svg"), emit_svg(f.overlay));
    if (o.format != OutputFormat::Svg) write_png(o.out / (stem + ".png"), composite(f.image, f.overlay));
}

// Each worker takes every n-th frame of the batch; files are disjoint so the
// result does not depend on the worker count.
void flush(const RenderOptions& o, std::vector<PendingFrame>& batch) {
    const int n = std::max(1, std::min<int>(o.workers, static_cast<int>(batch.size())));
    if (n == 1) {
        for (const auto& f : batch) write_outputs(o, f);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
        for (int w = 0; w < n; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = static_cast<std::size_t>(w); i < batch.size(); i += static_cast<std::size_t>(n)) {
                        write_outputs(o, batch[i]);
                    }
                } catch (...) {
                    errors[static_cast<std::size_t>(w)] = std::current_exception();
                }
            });
        }
        for (auto& t : pool) t.join();
        for (auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }
    batch.clear();
}

std::uint64_t fnv1a(std::uint64_t h, std::string_view s) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

json timings_json(const StageTimings& t) {
    json kinds = json::object();
    for (std::size_t k = 0; k < t.effects.size(); ++k) {
        kinds[std::string(to_string(static_cast<EffectKind>(k)))] = t.effects[k];
    }
    return {{"tracking", t.tracking}, {"effects", kinds}, {"resolve", t.resolve},
            {"sections", t.sections()}, {"total", t.total}};
}

}  // namespace

std::optional<OutputFormat> output_format_from_string(std::string_view s) {
    if (s == "svg") return OutputFormat::Svg;
    if (s == "raster") return OutputFormat::Raster;
    if (s == "both") return OutputFormat::Both;
    return std::nullopt;
}

json RenderReport::to_json() const {
    return {{"type", "report"}, {"frames", frames}, {"effects", effect_counts},
            {"wall_seconds", wall_seconds}, {"fps", fps}};
}

RenderReport run_render(const RenderOptions& o, const ProgressSink& progress) {
    const auto start = Clock::now();
    Scene scene = load_scene_file(o.scene);
    if (o.seed_override) scene.seed = *o.seed_override;
    if (needs_pose(scene) && !o.pose) throw Error("pose-required", "scene has keypoint trackers but no pose track was given");
    if (needs_masks(scene) && !o.masks) throw Error("masks-required", "scene has a body-mask contour but no mask file was given");

    std::optional<PoseTrack> poses;
    if (o.pose) poses = load_pose_track(*o.pose);
    std::vector<BinaryMask> masks;
    if (o.masks) masks = load_masks(*o.masks);

    FrameSequence frames(o.frames);
    Engine engine(std::move(scene));
    std::filesystem::create_directories(o.out);

    RenderReport report;
    for (const EffectSpec& e : engine.scene().effects) ++report.effect_counts[std::string(to_string(e.kind()))];

    const std::size_t batch_size = static_cast<std::size_t>(std::max(1, o.workers)) * 4;
    std::vector<PendingFrame> batch;
    while (auto image = frames.next()) {
        const auto i = static_cast<std::size_t>(report.frames);
        if (image->width() != engine.scene().frame_size.width || image->height() != engine.scene().frame_size.height) {
            throw Error("size-mismatch(" + std::to_string(i) + ")", "frame size differs from the scene's frame_size");
        }
        FrameInputs in;
        in.image = &*image;
        if (poses && i < poses->frames.size()) in.pose = &poses->frames[i];
        if (i < masks.size()) in.body_mask = &masks[i];
        FrameOverlay overlay = engine.step(in);
        if (progress) {
            progress({{"type", "progress"}, {"frame", overlay.frame_index}, {"drawables", overlay.drawables.size()}});
        }
        batch.push_back({std::move(overlay), std::move(*image)});
        ++report.frames;
        if (batch.size() >= batch_size) flush(o, batch);
    }
    flush(o, batch);

    report.wall_seconds = seconds_since(start);
    report.fps = report.wall_seconds > 0 ? report.frames / report.wall_seconds : 0.0;
    return report;
}

json BenchReport::to_json() const {
    return {{"type", "bench"},
            {"frames", frames},
            {"mean_fps", mean_fps},
            {"min_fps", min_fps},
            {"mean_fps_with_svg", mean_fps_with_svg},
            {"min_fps_with_svg", min_fps_with_svg},
            {"wall_seconds", wall_seconds},
            {"timings", timings_json(timings)},
            {"transcript_hash", transcript_hash}};
}

BenchReport run_bench(const BenchOptions& o, const ProgressSink& progress) {
    const auto start = Clock::now();
    Scene scene = o.scene ? load_scene_file(*o.scene) : synthetic::teaser_scene(o.size);
    if (scene.frame_size != o.size) throw Error("size-mismatch", "scene frame_size differs from the bench size");
    Engine engine(std::move(scene));

    BenchReport r;
    double core_sum = 0.0;
    double svg_sum = 0.0;
    double core_max = 0.0;
    double svg_max = 0.0;
    std::uint64_t hash = 14695981039346656037ull;
    for (std::int64_t i = 0; i < o.count; ++i) {
        const RgbImage image = synthetic::frame(o.size, i);
        const PoseFrame pose = synthetic::pose(o.size, i);
        const BinaryMask mask = synthetic::body_mask(pose, o.size);

        auto t0 = Clock::now();
        const FrameOverlay overlay = engine.step({&image, &pose, &mask});
        const double core = seconds_since(t0);
        t0 = Clock::now();
        const std::string svg = emit_svg(overlay);
        const double with_svg = core + seconds_since(t0);

        hash = fnv1a(hash, svg);
        core_sum += core;
        svg_sum += with_svg;
        core_max = std::max(core_max, core);
        svg_max = std::max(svg_max, with_svg);
        if (progress && (i + 1) % 100 == 0) progress({{"type", "progress"}, {"frame", i}});
    }

    auto rate = [](double frames, double seconds) {
        return seconds > 0 ? frames / seconds : std::numeric_limits<double>::infinity();
    };
    r.frames = o.count;
    r.mean_fps = rate(static_cast<double>(o.count), core_sum);
    r.min_fps = rate(1.0, core_max);
    r.mean_fps_with_svg = rate(static_cast<double>(o.count), svg_sum);
    r.min_fps_with_svg = rate(1.0, svg_max);
    r.timings = engine.timings();
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    r.transcript_hash = buf;
    r.wall_seconds = seconds_since(start);
    return r;
}

}  // namespace scribble
