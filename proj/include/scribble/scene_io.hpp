#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scribble/model.hpp"
#include "scribble/raster.hpp"
#include "scribble/tracking.hpp"

namespace scribble {

inline constexpr int kSceneFormatVersion = 1;

/// Parses a scene document. Error codes: "syntax" for malformed JSON,
/// "schema(<field>)" for missing or mistyped fields (and unknown major
/// versions), "invalid-scene" carrying diagnostics for semantic violations.
Scene parse_scene(std::string_view text);

/// Canonical text: sorted keys, numbers rounded to 6 significant digits, fixed
/// indentation. Structurally equal scenes serialize to identical bytes.
std::string serialize_scene(const Scene& scene);

/// Rounds to 6 significant digits, the precision kept by serialize_scene.
double canonical_number(double v);

Scene load_scene_file(const std::filesystem::path& path);
void save_scene_file(const std::filesystem::path& path, const Scene& scene);

// Color as "#rrggbbaa".
std::string format_rgba(Rgba c);
std::optional<Rgba> parse_rgba(std::string_view s);

struct PoseTrack {
    double frame_rate = 30.0;
    std::vector<PoseFrame> frames;  // frames[i] has index i
};

/// Errors: "syntax", "schema(<field>)", "pose-arity(<frame>)" for a frame
/// without exactly 33 keypoints, "pose-gap" for missing or non-contiguous indices.
PoseTrack parse_pose_track(std::string_view text);
PoseTrack load_pose_track(const std::filesystem::path& path);
std::string serialize_pose_track(const PoseTrack& track);

/// Mask sidecar: per frame, little-endian uint32 width, height, then run
/// lengths alternating unset/set starting with unset, summing to width*height.
std::vector<std::uint8_t> encode_masks(const std::vector<BinaryMask>& masks);
/// Error "mask-format" on truncated data or runs that overflow the frame.
std::vector<BinaryMask> decode_masks(const std::vector<std::uint8_t>& bytes);
std::vector<BinaryMask> load_masks(const std::filesystem::path& path);
void save_masks(const std::filesystem::path& path, const std::vector<BinaryMask>& masks);

/// 8-bit image files: PNG (RGB or RGBA, alpha dropped) and binary PPM.
/// Error "image-read" / "image-write".
RgbImage read_image(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const RgbImage& image);
void write_ppm(const std::filesystem::path& path, const RgbImage& image);

/// "frame_000042"
std::string frame_stem(std::int64_t index);

/// Numbered frames in a directory (frame_000042.png or bare 0042.png, PNG or
/// PPM), read lazily in index order. Construction checks that indices run
/// 0..n-1 without gaps ("frame-gap"); next() checks each frame against the
/// first one's size ("size-mismatch(<index>)").
class FrameSequence {
public:
    explicit FrameSequence(const std::filesystem::path& dir);

    std::size_t size() const { return files_.size(); }
    std::optional<RgbImage> next();
    std::size_t position() const { return next_; }

private:
    std::vector<std::filesystem::path> files_;
    std::size_t next_ = 0;
    int width_ = 0;
    int height_ = 0;
};

}  // namespace scribble
