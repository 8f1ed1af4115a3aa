#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "scribble/contour.hpp"
#include "scribble/model.hpp"
#include "scribble/raster.hpp"
#include "scribble/state.hpp"
#include "scribble/tracking.hpp"

namespace scribble {

/// One stroked polyline, already positioned by `transform`.
struct PathDrawable {
    Polyline points;
    bool closed = false;
    StrokeStyle style;
    Transform transform;
    double opacity = 1.0;    // multiplies style.opacity (trajectory fade)
    std::string element_id;  // empty for contour outlines
    std::size_t instance = 0;

    friend bool operator==(const PathDrawable&, const PathDrawable&) = default;
};

using Drawable = std::variant<PathDrawable, RasterFill>;

struct FrameOverlay {
    std::int64_t frame_index = 0;
    FrameSize frame_size;
    std::vector<Drawable> drawables;

    /// Distinct (element, instance) pairs drawn for `element_id`.
    std::size_t instance_count(const std::string& element_id) const;

    friend bool operator==(const FrameOverlay&, const FrameOverlay&) = default;
};

/// Builds the overlay for one frame from resolved tracker and effect states.
/// Contour fills and outlines come first, then elements in declaration order,
/// each followed by its clones oldest first. Throws Error("state-desync") when
/// the states do not line up with the scene's trackers and effects.
FrameOverlay resolve_frame(const Scene& scene, const std::vector<TrackerState>& trackers,
                           const std::vector<EffectState>& effects, std::int64_t frame_index);

/// SVG 1.1 text, one <path> per drawable. Byte-deterministic.
std::string emit_svg(const FrameOverlay& overlay, FrameSize size);
std::string emit_svg(const FrameOverlay& overlay);

/// Source-over compositing of every drawable in order, rounding to 8 bits after
/// each one. Strokes are round-capped and round-joined with 4x4 supersampled
/// coverage. Throws Error("size-mismatch") unless the base matches the
/// overlay's frame size.
RgbImage composite(const RgbImage& base, const FrameOverlay& overlay);

/// Composites one drawable in place.
void composite_drawable(RgbImage& canvas, const Drawable& d);

/// Shortest fixed-point form with at most 3 decimals; "-0" prints as "0".
std::string format_number(double v);

}  // namespace scribble
