#include "scribble/render.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace scribble {

namespace {

constexpr int kSuper = 4;  // samples per axis

struct Visibility {
    bool visible = true;
    Transform transform;
};

bool trigger_playing(const Scene& scene, const std::vector<EffectState>& states, std::string_view payload_id,
                     std::int64_t& started_at) {
    for (std::size_t i = 0; i < scene.effects.size(); ++i) {
        const EffectSpec& fx = scene.effects[i];
        if (fx.kind() != EffectKind::Trigger) continue;
        const auto& p = std::get<TriggerParams>(fx.params);
        if (!p.payload_effect || *p.payload_effect != payload_id) continue;
        const auto& rt = std::get<TriggerRuntime>(states[i].runtime);
        if (rt.state.playing && rt.state.play_started_at) {
            started_at = *rt.state.play_started_at;
            return true;
        }
    }
    return false;
}

bool is_trigger_payload_flipbook(const Scene& scene, std::string_view flipbook_id) {
    return std::any_of(scene.effects.begin(), scene.effects.end(), [&](const EffectSpec& fx) {
        if (fx.kind() != EffectKind::Trigger) return false;
        const auto& p = std::get<TriggerParams>(fx.params);
        return p.payload_effect && *p.payload_effect == flipbook_id;
    });
}

void push_element(FrameOverlay& overlay, const SketchElement& el, const Transform& t, double opacity,
                  std::size_t instance) {
    for (const Stroke& s : el.strokes) {
        overlay.drawables.emplace_back(PathDrawable{s.points, false, s.style, t, opacity, el.id, instance});
    }
}

std::string hex_color(Rgba c) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c.r, c.g, c.b);
    return buf;
}

std::uint8_t blend(std::uint8_t dst, std::uint8_t src, double a) {
    const double v = static_cast<double>(src) * a + static_cast<double>(dst) * (1.0 - a);
    return static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
}

void composite_path(RgbImage& canvas, const PathDrawable& d) {
    if (d.points.empty()) return;
    const double alpha = d.style.color.a / 255.0 * d.style.opacity * d.opacity;
    if (alpha <= 0.0) return;
    const double radius = d.style.width * d.transform.scale / 2.0;
    if (!(radius > 0.0)) return;

    Polyline pts;
    pts.reserve(d.points.size() + 1);
    for (const Point2& p : d.points) pts.push_back(d.transform.apply(p));
    if (d.closed && pts.size() > 2) pts.push_back(pts.front());
    if (pts.size() == 1) pts.push_back(pts.front());

    double min_x = pts[0].x, max_x = pts[0].x, min_y = pts[0].y, max_y = pts[0].y;
    for (const Point2& p : pts) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    const int x0 = std::max(0, static_cast<int>(std::floor(min_x - radius)));
    const int y0 = std::max(0, static_cast<int>(std::floor(min_y - radius)));
    const int x1 = std::min(canvas.width() - 1, static_cast<int>(std::ceil(max_x + radius)));
    const int y1 = std::min(canvas.height() - 1, static_cast<int>(std::ceil(max_y + radius)));
    if (x0 > x1 || y0 > y1) return;

    const int bw = x1 - x0 + 1;
    std::vector<std::uint16_t> cover(static_cast<std::size_t>(bw) * (y1 - y0 + 1), 0);

    for (std::size_t i = 1; i < pts.size(); ++i) {
        const Point2 a = pts[i - 1];
        const Point2 b = pts[i];
        const int sx0 = std::max(x0, static_cast<int>(std::floor(std::min(a.x, b.x) - radius)));
        const int sx1 = std::min(x1, static_cast<int>(std::ceil(std::max(a.x, b.x) + radius)));
        const int sy0 = std::max(y0, static_cast<int>(std::floor(std::min(a.y, b.y) - radius)));
        const int sy1 = std::min(y1, static_cast<int>(std::ceil(std::max(a.y, b.y) + radius)));
        for (int y = sy0; y <= sy1; ++y) {
            for (int x = sx0; x <= sx1; ++x) {
                auto& mask = cover[static_cast<std::size_t>(y - y0) * bw + (x - x0)];
                if (mask == 0xffff) continue;
                for (int sy = 0; sy < kSuper; ++sy) {
                    for (int sx = 0; sx < kSuper; ++sx) {
                        const Point2 s{x - 0.5 + (sx + 0.5) / kSuper, y - 0.5 + (sy + 0.5) / kSuper};
                        if (point_segment_distance(s, a, b) <= radius) {
                            mask |= static_cast<std::uint16_t>(1u << (sy * kSuper + sx));
                        }
                    }
                }
            }
        }
    }

    const Rgba c = d.style.color;
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            const auto mask = cover[static_cast<std::size_t>(y - y0) * bw + (x - x0)];
            if (mask == 0) continue;
            const double a = alpha * std::popcount(mask) / static_cast<double>(kSuper * kSuper);
            auto* px = canvas.pixel(x, y);
            px[0] = blend(px[0], c.r, a);
            px[1] = blend(px[1], c.g, a);
            px[2] = blend(px[2], c.b, a);
        }
    }
}

void composite_fill(RgbImage& canvas, const RasterFill& f) {
    if (f.mask.width() != canvas.width() || f.mask.height() != canvas.height()) {
        throw Error("size-mismatch", "fill mask does not match frame");
    }
    const double a = f.color.a / 255.0;
    if (a <= 0.0) return;
    auto& bytes = canvas.bytes();
    const auto& bits = f.mask.bits();
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (!bits[i]) continue;
        bytes[i * 3] = blend(bytes[i * 3], f.color.r, a);
        bytes[i * 3 + 1] = blend(bytes[i * 3 + 1], f.color.g, a);
        bytes[i * 3 + 2] = blend(bytes[i * 3 + 2], f.color.b, a);
    }
}

}  // namespace

std::size_t FrameOverlay::instance_count(const std::string& element_id) const {
    std::set<std::size_t> seen;
    for (const auto& d : drawables) {
        if (const auto* p = std::get_if<PathDrawable>(&d); p && p->element_id == element_id) {
            seen.insert(p->instance);
        }
    }
    return seen.size();
}

FrameOverlay resolve_frame(const Scene& scene, const std::vector<TrackerState>& trackers,
                           const std::vector<EffectState>& effects, std::int64_t frame_index) {
    if (trackers.size() != scene.trackers.size() || effects.size() != scene.effects.size()) {
        throw Error("state-desync", "state count differs from scene");
    }
    for (std::size_t i = 0; i < trackers.size(); ++i) {
        if (trackers[i].tracker_id != scene.trackers[i].id) throw Error("state-desync", scene.trackers[i].id);
    }
    for (std::size_t i = 0; i < effects.size(); ++i) {
        if (effects[i].effect_id != scene.effects[i].id ||
            effects[i].runtime.index() != scene.effects[i].params.index()) {
            throw Error("state-desync", scene.effects[i].id);
        }
    }

    auto tracker_position = [&](const std::string& id) {
        for (std::size_t i = 0; i < scene.trackers.size(); ++i) {
            if (scene.trackers[i].id == id) return trackers[i].last_position;
        }
        throw Error("state-desync", id);
    };

    FrameOverlay overlay;
    overlay.frame_index = frame_index;
    overlay.frame_size = scene.frame_size;
    const double now = static_cast<double>(frame_index) / scene.frame_rate;

    for (std::size_t i = 0; i < scene.effects.size(); ++i) {
        const EffectSpec& fx = scene.effects[i];
        if (fx.kind() != EffectKind::Contour) continue;
        const auto& p = std::get<ContourParams>(fx.params);
        const auto& rt = std::get<ContourRuntime>(effects[i].runtime);
        if (rt.fill) overlay.drawables.emplace_back(*rt.fill);
        if (!rt.ring || rt.ring->points.empty()) continue;
        if (p.animated) {
            Polyline part = contour_window(*rt.ring, now, {p.window_fraction, p.cycles_per_second});
            overlay.drawables.emplace_back(PathDrawable{std::move(part), false, p.stroke, {}, 1.0, {}, 0});
        } else {
            overlay.drawables.emplace_back(PathDrawable{rt.ring->points, true, p.stroke, {}, 1.0, {}, 0});
        }
    }

    for (const SketchElement& el : scene.elements) {
        Visibility vis;
        for (std::size_t i = 0; i < scene.effects.size(); ++i) {
            const EffectSpec& fx = scene.effects[i];
            const bool member = std::find(fx.element_ids.begin(), fx.element_ids.end(), el.id) != fx.element_ids.end();
            if (!member) continue;
            switch (fx.kind()) {
                case EffectKind::Binding: {
                    const auto& rt = std::get<BindingRuntime>(effects[i].runtime);
                    if (rt.bind) {
                        vis.transform = update_binding(*rt.bind, el, tracker_position(fx.tracker_ids[0]))
                                            .after(vis.transform);
                    }
                    break;
                }
                case EffectKind::FlipBook: {
                    const auto& p = std::get<FlipBookParams>(fx.params);
                    const auto& rt = std::get<FlipBookRuntime>(effects[i].runtime);
                    std::int64_t origin = rt.start_frame.value_or(frame_index);
                    if (is_trigger_payload_flipbook(scene, fx.id) && !trigger_playing(scene, effects, fx.id, origin)) {
                        vis.visible = false;
                        break;
                    }
                    const double t = static_cast<double>(frame_index - origin) / scene.frame_rate;
                    const std::size_t page = flipbook_frame({fx.element_ids.size(), p.fps}, t);
                    if (fx.element_ids[page] != el.id) vis.visible = false;
                    break;
                }
                case EffectKind::Trigger: {
                    if (!std::get<TriggerRuntime>(effects[i].runtime).state.playing) vis.visible = false;
                    break;
                }
                case EffectKind::Particles:
                case EffectKind::Trajectory:
                    vis.visible = false;  // the template only appears through its instances
                    break;
                case EffectKind::Contour:
                    break;
            }
        }

        std::size_t instance = 0;
        if (vis.visible) push_element(overlay, el, vis.transform, 1.0, instance++);

        for (std::size_t i = 0; i < scene.effects.size(); ++i) {
            const EffectSpec& fx = scene.effects[i];
            if (fx.element_ids.empty() || fx.element_ids[0] != el.id) continue;
            if (fx.kind() == EffectKind::Trajectory) {
                const auto& p = std::get<TrajectoryParams>(fx.params);
                const auto& clones = std::get<TrajectoryRuntime>(effects[i].runtime).clones;
                for (std::size_t k = 0; k < clones.size(); ++k) {
                    const std::size_t age = clones.size() - 1 - k;
                    push_element(overlay, el, clone_transform(el, clones[k].anchor, trajectory_scale(p, age)),
                                 trajectory_opacity(p, age), instance++);
                }
            } else if (fx.kind() == EffectKind::Particles) {
                const auto& p = std::get<ParticleParams>(fx.params);
                for (const Particle& particle : std::get<ParticleRuntime>(effects[i].runtime).system.particles) {
                    push_element(overlay, el, clone_transform(el, particle_position(p, particle), 1.0), 1.0,
                                 instance++);
                }
            }
        }
    }
    return overlay;
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    std::string s(buf);
    if (s.find('.') != std::string::npos) {
        while (s.back() == '0') s.pop_back();
        if (s.back() == '.') s.pop_back();
    }
    if (s == "-0") s = "0";
    return s;
}

std::string emit_svg(const FrameOverlay& overlay) { return emit_svg(overlay, overlay.frame_size); }

std::string emit_svg(const FrameOverlay& overlay, FrameSize size) {
    std::ostringstream out;
    const std::string w = std::to_string(size.width);
    const std::string h = std::to_string(size.height);
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << w << "\" height=\"" << h
        << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n";

    for (const Drawable& d : overlay.drawables) {
        if (const auto* p = std::get_if<PathDrawable>(&d)) {
            std::string path;
            for (std::size_t i = 0; i < p->points.size(); ++i) {
                const Point2 q = p->transform.apply(p->points[i]);
                path += (i == 0 ? "M " : " L ");
                path += format_number(q.x) + ' ' + format_number(q.y);
            }
            if (p->closed) path += " Z";
            const double opacity = p->style.color.a / 255.0 * p->style.opacity * p->opacity;
            out << "<path d=\"" << path << "\" fill=\"none\" stroke=\"" << hex_color(p->style.color)
                << "\" stroke-opacity=\"" << format_number(opacity) << "\" stroke-width=\""
                << format_number(p->style.width * p->transform.scale)
                << "\" stroke-linecap=\"round\" stroke-linejoin=\"round\"/>\n";
        } else {
            const auto& f = std::get<RasterFill>(d);
            std::string path;
            const int mw = f.mask.width();
            for (int y = 0; y < f.mask.height(); ++y) {
                int x = 0;
                while (x < mw) {
                    if (!f.mask.get(x, y)) {
                        ++x;
                        continue;
                    }
                    const int run_start = x;
                    while (x < mw && f.mask.get(x, y)) ++x;
                    if (!path.empty()) path += ' ';
                    path += "M " + format_number(run_start - 0.5) + ' ' + format_number(y - 0.5) + " h " +
                            std::to_string(x - run_start) + " v 1 h -" + std::to_string(x - run_start) + " Z";
                }
            }
            out << "<path d=\"" << path << "\" fill=\"" << hex_color(f.color) << "\" fill-opacity=\""
                << format_number(f.color.a / 255.0) << "\" stroke=\"none\"/>\n";
        }
    }
    out << "</svg>\n";
    return out.str();
}

void composite_drawable(RgbImage& canvas, const Drawable& d) {
    if (const auto* p = std::get_if<PathDrawable>(&d)) {
        composite_path(canvas, *p);
    } else {
        composite_fill(canvas, std::get<RasterFill>(d));
    }
}

RgbImage composite(const RgbImage& base, const FrameOverlay& overlay) {
    if (base.width() != overlay.frame_size.width || base.height() != overlay.frame_size.height) {
        throw Error("size-mismatch", "base frame does not match overlay frame size");
    }
    RgbImage out = base;
    for (const Drawable& d : overlay.drawables) composite_drawable(out, d);
    return out;
}

}  // namespace scribble
