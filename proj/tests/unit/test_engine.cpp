#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>

#include "scribble/engine.hpp"
#include "scribble/synthetic.hpp"
#include "support/errors.hpp"
#include "support/oracles.hpp"
#include "support/scene_fuzz.hpp"

using namespace scribble;

namespace {

RgbImage noise_image(std::mt19937_64& rng, FrameSize fs) {
    RgbImage img(fs.width, fs.height);
    std::uniform_int_distribution<int> c(0, 255);
    for (auto& b : img.bytes()) b = static_cast<std::uint8_t>(c(rng));
    return img;
}

PoseFrame random_pose(std::mt19937_64& rng, FrameSize fs) {
    PoseFrame p;
    std::uniform_real_distribution<double> x(0, fs.width), y(0, fs.height), vis(0, 1);
    for (auto& k : p.keypoints) k = {{x(rng), y(rng)}, vis(rng) > 0.2};
    return p;
}

BinaryMask random_body(std::mt19937_64& rng, FrameSize fs) {
    BinaryMask small = oracle::random_mask(rng, std::min(fs.width, fs.height));
    BinaryMask m(fs.width, fs.height);
    for (int y = 0; y < small.height(); ++y)
        for (int x = 0; x < small.width(); ++x)
            if (small.get(x, y)) m.set(x, y);
    return m;
}

// Every drawable refers to an element of the scene (or is a contour outline).
void check_references(const Scene& s, const FrameOverlay& ov) {
    for (const Drawable& d : ov.drawables) {
        if (const auto* p = std::get_if<PathDrawable>(&d)) {
            if (!p->element_id.empty()) CHECK(s.find_element(p->element_id) != nullptr);
        }
    }
}

}  // namespace

TEST_CASE("random valid scenes step for 1000 frames") {
    std::mt19937_64 rng(31337);
    for (int trial = 0; trial < 6; ++trial) {
        const Scene s = fuzz::scene(rng);
        REQUIRE(validate_scene(s).empty());
        Engine e(s);
        for (int f = 0; f < 1000; ++f) {
            // Inputs drop out now and then.
            const RgbImage img = noise_image(rng, s.frame_size);
            const PoseFrame pose = random_pose(rng, s.frame_size);
            const BinaryMask mask = random_body(rng, s.frame_size);
            FrameInputs in{f % 7 ? &img : nullptr, f % 5 ? &pose : nullptr, f % 3 ? &mask : nullptr};
            FrameOverlay ov;
            REQUIRE_NOTHROW(ov = e.step(in));
            CHECK(ov.frame_index == f);
            check_references(s, ov);
            if (f % 97 == 0) CHECK(ov == e.current_overlay());
        }
        CHECK(e.frame_index() == 1000);
    }
}

TEST_CASE("invalid scene is rejected with diagnostics") {
    Scene s;
    s.effects.push_back({"b", {"ghost"}, {"nobody"}, BindingParams{}});
    CHECK(error_code([&] { Engine e(s); }) == "invalid-scene");
    try {
        Engine e(s);
    } catch (const Error& err) {
        CHECK(err.diagnostics().size() >= 2);
    }
}

TEST_CASE("stepping is deterministic") {
    const FrameSize fs{160, 120};
    const Scene s = synthetic::teaser_scene(fs, 3);
    auto run = [&] {
        Engine e(s);
        std::vector<FrameOverlay> out;
        for (int i = 0; i < 90; ++i) {
            const RgbImage img = synthetic::frame(fs, i);
            const PoseFrame pose = synthetic::pose(fs, i);
            const BinaryMask mask = synthetic::body_mask(pose, fs);
            out.push_back(e.step({&img, &pose, &mask}));
        }
        return out;
    };
    const auto a = run();
    CHECK(a == run());

    std::set<std::size_t> sizes;
    for (const auto& ov : a) sizes.insert(ov.drawables.size());
    CHECK(sizes.size() > 1);  // particles and triggers make the overlay vary
}

TEST_CASE("set_scene keeps state of surviving ids") {
    const FrameSize fs{160, 120};
    Scene s = synthetic::teaser_scene(fs, 3);
    Engine e(s);
    for (int i = 0; i < 20; ++i) {
        const RgbImage img = synthetic::frame(fs, i);
        const PoseFrame pose = synthetic::pose(fs, i);
        e.step({&img, &pose, nullptr});
    }
    const auto trackers = e.tracker_states();
    const auto effects = e.effect_states();

    Scene edited = s;
    edited.effects.erase(edited.effects.begin());  // drop the first effect
    edited.elements.push_back({"extra", {{{{0, 0}, {3, 3}}, {}}}, {0, 0}});
    e.set_scene(edited);
    CHECK(e.tracker_states() == trackers);
    REQUIRE(e.effect_states().size() == effects.size() - 1);
    for (std::size_t i = 0; i < e.effect_states().size(); ++i) CHECK(e.effect_states()[i] == effects[i + 1]);
    CHECK(e.frame_index() == 20);

    Scene broken = edited;
    broken.effects[0].tracker_ids = {"missing"};
    CHECK(error_code([&] { e.set_scene(broken); }) == "invalid-scene");
    CHECK(e.scene() == edited);
}

TEST_CASE("stage timings add up to the total") {
    const FrameSize fs{320, 240};
    const Scene s = synthetic::teaser_scene(fs, 1);
    Engine e(s);
    for (int i = 0; i < 120; ++i) {
        const RgbImage img = synthetic::frame(fs, i);
        const PoseFrame pose = synthetic::pose(fs, i);
        const BinaryMask mask = synthetic::body_mask(pose, fs);
        e.step({&img, &pose, &mask});
    }
    const StageTimings& t = e.timings();
    CHECK(t.total > 0);
    CHECK(t.tracking > 0);
    CHECK(t.effects[static_cast<int>(EffectKind::Contour)] > 0);
    CHECK(std::abs(t.sections() - t.total) <= 0.01 * t.total);
}

TEST_CASE("set_tracker_position records a fix") {
    Scene s;
    s.trackers.push_back({"hand", KeypointSource{15}});
    Engine e(s);
    e.set_tracker_position("hand", {12, 34});
    CHECK(e.tracker_states()[0].last_position == Point2{12, 34});
    CHECK(e.tracker_states()[0].lost_for == 0);
    CHECK(error_code([&] { e.set_tracker_position("nope", {0, 0}); }) != "");
}
