#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include "json.hpp"

#include "scribble/engine.hpp"
#include "scribble/model.hpp"

namespace scribble {

enum class OutputFormat { Svg, Raster, Both };

std::optional<OutputFormat> output_format_from_string(std::string_view s);

struct RenderOptions {
    std::filesystem::path scene;
    std::filesystem::path frames;
    std::optional<std::filesystem::path> pose;
    std::optional<std::filesystem::path> masks;
    std::filesystem::path out;
    OutputFormat format = OutputFormat::Svg;
    std::optional<std::uint64_t> seed_override;
    int workers = 1;
};

struct RenderReport {
    std::int64_t frames = 0;
    std::map<std::string, int> effect_counts;  // by kind name
    double wall_seconds = 0.0;
    double fps = 0.0;

    nlohmann::json to_json() const;
};

using ProgressSink = std::function<void(const nlohmann::json&)>;

/// Steps the scene over every frame in order and writes frame_%06d.svg and/or
/// frame_%06d.png into `out`. The engine runs on the calling thread; output
/// encoding and file writes are spread over `workers` threads, which changes
/// neither the order of the records nor any output byte.
/// Errors: "pose-required" / "masks-required" when the scene needs inputs that
/// were not given, plus every load error of scene-io.
RenderReport run_render(const RenderOptions& options, const ProgressSink& progress = {});

struct BenchOptions {
    std::optional<std::filesystem::path> scene;  // default: the synthetic teaser scene
    std::int64_t count = 600;
    FrameSize size{640, 480};
};

struct BenchReport {
    std::int64_t frames = 0;
    double mean_fps = 0.0;  // tracking + effects + overlay resolution
    double min_fps = 0.0;
    double mean_fps_with_svg = 0.0;
    double min_fps_with_svg = 0.0;
    double wall_seconds = 0.0;  // whole run, including frame synthesis
    StageTimings timings;
    std::string transcript_hash;  // FNV-1a over every frame's SVG

    nlohmann::json to_json() const;
};

/// Runs the engine over synthetic frames, poses and masks.
/// Error "size-mismatch" when a given scene's frame size differs from `size`.
BenchReport run_bench(const BenchOptions& options, const ProgressSink& progress = {});

}  // namespace scribble
