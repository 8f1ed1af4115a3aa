#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "scribble/contour.hpp"
#include "scribble/engine.hpp"
#include "scribble/pipeline.hpp"
#include "scribble/render.hpp"
#include "scribble/scene_io.hpp"
#include "scribble/synthetic.hpp"
#include "scribble/tracking.hpp"

namespace py = pybind11;
using namespace scribble;

namespace {

using U8Array = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;
using F64Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

RgbImage to_image(const U8Array& a) {
    if (a.ndim() != 3 || a.shape(2) != 3) throw py::value_error("image must have shape (height, width, 3)");
    RgbImage img(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)));
    std::copy(a.data(), a.data() + a.size(), img.bytes().begin());
    return img;
}

U8Array from_image(const RgbImage& img) {
    U8Array out({img.height(), img.width(), 3});
    std::copy(img.bytes().begin(), img.bytes().end(), out.mutable_data());
    return out;
}

BinaryMask to_mask(const U8Array& a) {
    if (a.ndim() != 2) throw py::value_error("mask must have shape (height, width)");
    BinaryMask m(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)));
    for (py::ssize_t i = 0; i < a.size(); ++i) m.bits()[static_cast<std::size_t>(i)] = a.data()[i] ? 1 : 0;
    return m;
}

py::array_t<bool> from_mask(const BinaryMask& m) {
    py::array_t<bool> out({m.height(), m.width()});
    bool* dst = out.mutable_data();
    for (std::size_t i = 0; i < m.bits().size(); ++i) dst[i] = m.bits()[i] != 0;
    return out;
}

// (33, 3) rows of x, y, visible.
PoseFrame to_pose(const F64Array& a) {
    if (a.ndim() != 2 || a.shape(0) != kPoseKeypointCount || a.shape(1) != 3) {
        throw py::value_error("pose must have shape (33, 3)");
    }
    PoseFrame p;
    for (int k = 0; k < kPoseKeypointCount; ++k) {
        p.keypoints[k] = {{a.at(k, 0), a.at(k, 1)}, a.at(k, 2) != 0.0};
    }
    return p;
}

F64Array from_pose(const PoseFrame& p) {
    F64Array out({kPoseKeypointCount, 3});
    auto w = out.mutable_unchecked<2>();
    for (int k = 0; k < kPoseKeypointCount; ++k) {
        w(k, 0) = p.keypoints[k].position.x;
        w(k, 1) = p.keypoints[k].position.y;
        w(k, 2) = p.keypoints[k].visible ? 1.0 : 0.0;
    }
    return out;
}

std::vector<std::pair<double, double>> to_pairs(const Polyline& pts) {
    std::vector<std::pair<double, double>> out;
    for (const Point2& p : pts) out.emplace_back(p.x, p.y);
    return out;
}

Polyline to_polyline(const std::vector<std::pair<double, double>>& pts) {
    Polyline out;
    for (const auto& [x, y] : pts) out.push_back({x, y});
    return out;
}

py::dict to_dict(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

py::tuple window_tuple(const ColorWindow& w) { return py::make_tuple(w.r_lo, w.r_hi, w.g_lo, w.g_hi, w.b_lo, w.b_hi); }

ColorWindow tuple_window(const std::array<int, 6>& t) {
    auto c = [](int v) { return static_cast<std::uint8_t>(std::clamp(v, 0, 255)); };
    return {c(t[0]), c(t[1]), c(t[2]), c(t[3]), c(t[4]), c(t[5])};
}

}  // namespace

PYBIND11_MODULE(_scribble, m) {
    m.doc() = "Sketch animation engine: tracking, effects, contours and overlay rendering.";

    static py::exception<Error> error_type(m, "ScribbleError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::tuple args = py::make_tuple(e.code(), std::string(e.what()));
            PyErr_SetObject(error_type.ptr(), args.ptr());
        }
    });

    // tracking
    m.def(
        "sample_color_window",
        [](const U8Array& image, double x, double y) { return window_tuple(sample_color_window(to_image(image), {x, y})); },
        py::arg("image"), py::arg("x"), py::arg("y"),
        "Per-channel (r_lo, r_hi, g_lo, g_hi, b_lo, b_hi), the pixel at (x, y) +-10 clamped to [0, 255].");
    m.def(
        "segment_by_window",
        [](const U8Array& image, const std::array<int, 6>& window) {
            return from_mask(segment_by_window(to_image(image), tuple_window(window)));
        },
        py::arg("image"), py::arg("window"));
    m.def(
        "largest_component_centroid",
        [](const U8Array& mask) -> std::optional<std::pair<double, double>> {
            auto c = largest_component_centroid(to_mask(mask));
            if (!c) return std::nullopt;
            return std::make_pair(c->x, c->y);
        },
        py::arg("mask"), "Centroid of the largest 4-connected component, or None for an empty mask.");

    // contour
    m.def(
        "extract_outer_contour",
        [](const U8Array& mask) { return to_pairs(extract_outer_contour(to_mask(mask)).points); }, py::arg("mask"),
        "Outer boundary pixels of the largest component, counter-clockwise on screen.");
    m.def(
        "simplify_polyline",
        [](const std::vector<std::pair<double, double>>& ring, double epsilon) {
            return to_pairs(simplify_polyline({to_polyline(ring), 0}, epsilon).points);
        },
        py::arg("ring"), py::arg("epsilon"), "Closed-ring Douglas-Peucker.");

    // scenes
    py::class_<Scene>(m, "Scene")
        .def_static("parse", [](const std::string& text) { return parse_scene(text); }, py::arg("text"))
        .def_static("load", &load_scene_file, py::arg("path"))
        .def("serialize", [](const Scene& s) { return serialize_scene(s); })
        .def("save", [](const Scene& s, const std::filesystem::path& p) { save_scene_file(p, s); }, py::arg("path"))
        .def("validate",
             [](const Scene& s) {
                 py::list out;
                 for (const auto& d : validate_scene(s)) {
                     out.append(py::dict(py::arg("rule") = d.rule, py::arg("subject") = d.subject,
                                         py::arg("detail") = d.detail));
                 }
                 return out;
             })
        .def_readwrite("seed", &Scene::seed)
        .def_readwrite("frame_rate", &Scene::frame_rate)
        .def_property_readonly("frame_size",
                               [](const Scene& s) { return std::make_pair(s.frame_size.width, s.frame_size.height); })
        .def_property_readonly("element_ids",
                               [](const Scene& s) {
                                   std::vector<std::string> ids;
                                   for (const auto& e : s.elements) ids.push_back(e.id);
                                   return ids;
                               })
        .def_property_readonly("tracker_ids",
                               [](const Scene& s) {
                                   std::vector<std::string> ids;
                                   for (const auto& t : s.trackers) ids.push_back(t.id);
                                   return ids;
                               })
        .def_property_readonly("effects",
                               [](const Scene& s) {
                                   std::vector<std::pair<std::string, std::string>> out;
                                   for (const auto& fx : s.effects) out.emplace_back(fx.id, to_string(fx.kind()));
                                   return out;
                               })
        .def("__eq__", [](const Scene& a, const Scene& b) { return a == b; })
        .def("__repr__", [](const Scene& s) {
            return "<Scene " + std::to_string(s.frame_size.width) + "x" + std::to_string(s.frame_size.height) + ", " +
                   std::to_string(s.elements.size()) + " elements, " + std::to_string(s.effects.size()) + " effects>";
        });

    // overlays and the engine
    py::class_<FrameOverlay>(m, "FrameOverlay")
        .def_readonly("frame_index", &FrameOverlay::frame_index)
        .def_property_readonly("drawable_count", [](const FrameOverlay& o) { return o.drawables.size(); })
        .def("instance_count", &FrameOverlay::instance_count, py::arg("element_id"))
        .def("svg", [](const FrameOverlay& o) { return emit_svg(o); })
        .def(
            "composite", [](const FrameOverlay& o, const U8Array& base) { return from_image(composite(to_image(base), o)); },
            py::arg("image"));

    py::class_<Engine>(m, "Engine")
        .def(py::init<Scene>(), py::arg("scene"))
        .def(
            "step",
            [](Engine& e, std::optional<U8Array> image, std::optional<F64Array> pose, std::optional<U8Array> body_mask) {
                std::optional<RgbImage> img;
                std::optional<PoseFrame> p;
                std::optional<BinaryMask> mask;
                if (image) img = to_image(*image);
                if (pose) p = to_pose(*pose);
                if (body_mask) mask = to_mask(*body_mask);
                return e.step({img ? &*img : nullptr, p ? &*p : nullptr, mask ? &*mask : nullptr});
            },
            py::arg("image") = py::none(), py::arg("pose") = py::none(), py::arg("body_mask") = py::none())
        .def("set_scene", &Engine::set_scene, py::arg("scene"))
        .def_property_readonly("scene", &Engine::scene)
        .def_property_readonly("frame_index", &Engine::frame_index)
        .def_property_readonly("tracker_positions", [](const Engine& e) {
            py::dict out;
            for (const auto& t : e.tracker_states()) {
                out[py::str(t.tracker_id)] = py::make_tuple(t.last_position.x, t.last_position.y, t.lost_for);
            }
            return out;
        });

    // synthetic inputs
    m.def(
        "synthetic_frame", [](int w, int h, std::int64_t i) { return from_image(synthetic::frame({w, h}, i)); },
        py::arg("width"), py::arg("height"), py::arg("index"));
    m.def(
        "synthetic_pose", [](int w, int h, std::int64_t i) { return from_pose(synthetic::pose({w, h}, i)); },
        py::arg("width"), py::arg("height"), py::arg("index"));
    m.def(
        "synthetic_body_mask",
        [](const F64Array& pose, int w, int h) { return from_mask(synthetic::body_mask(to_pose(pose), {w, h})); },
        py::arg("pose"), py::arg("width"), py::arg("height"));
    m.def(
        "teaser_scene", [](int w, int h, std::uint64_t seed) { return synthetic::teaser_scene({w, h}, seed); },
        py::arg("width") = 640, py::arg("height") = 480, py::arg("seed") = 7);
    m.def(
        "write_clip",
        [](const std::filesystem::path& dir, int w, int h, std::int64_t count) {
            synthetic::write_clip(dir, {w, h}, count, synthetic::teaser_scene({w, h}));
        },
        py::arg("dir"), py::arg("width") = 640, py::arg("height") = 480, py::arg("count") = 120);

    // batch
    m.def(
        "render",
        [](const std::filesystem::path& scene, const std::filesystem::path& frames, const std::filesystem::path& out,
           std::optional<std::filesystem::path> pose, std::optional<std::filesystem::path> masks,
           const std::string& format, int workers, std::optional<std::uint64_t> seed_override) {
            RenderOptions o;
            o.scene = scene;
            o.frames = frames;
            o.out = out;
            o.pose = pose;
            o.masks = masks;
            auto f = output_format_from_string(format);
            if (!f) throw py::value_error("format must be svg, raster or both");
            o.format = *f;
            o.workers = workers;
            o.seed_override = seed_override;
            RenderReport r;
            {
                py::gil_scoped_release release;
                r = run_render(o);
            }
            return to_dict(r.to_json());
        },
        py::arg("scene"), py::arg("frames"), py::arg("out"), py::arg("pose") = py::none(),
        py::arg("masks") = py::none(), py::arg("format") = "svg", py::arg("workers") = 1,
        py::arg("seed_override") = py::none());
    m.def(
        "bench",
        [](std::int64_t count, int w, int h, std::optional<std::filesystem::path> scene) {
            BenchOptions o;
            o.count = count;
            o.size = {w, h};
            o.scene = scene;
            BenchReport r;
            {
                py::gil_scoped_release release;
                r = run_bench(o);
            }
            return to_dict(r.to_json());
        },
        py::arg("count") = 600, py::arg("width") = 640, py::arg("height") = 480, py::arg("scene") = py::none());
}
