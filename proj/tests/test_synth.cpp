#include <doctest.h>

#include <cmath>
#include <numbers>

#include "test_util.hpp"
#include "vmag/synth.hpp"

using namespace vmag;

namespace {

bool frames_equal(const Frame& a, const Frame& b) {
    if (a.planes.size() != b.planes.size()) return false;
    for (size_t i = 0; i < a.planes.size(); ++i) {
        if (a.planes[i].rows() != b.planes[i].rows() ||
            a.planes[i].cols() != b.planes[i].cols() || !(a.planes[i] == b.planes[i]).all()) {
            return false;
        }
    }
    return true;
}

Mask full_region(int h, int w) {
    Mask m(h, w);
    m.setConstant(true);
    return m;
}

}  // namespace

TEST_SUITE("synth") {

TEST_CASE("identical scene specs render identical frames") {
    SceneSpec spec;
    spec.width = 96;
    spec.height = 96;
    spec.frame_count = 8;
    spec.disk_x = 48;
    spec.disk_y = 48;
    spec.disk_radius = 18;
    spec.seed = 42;
    const Scene a = make_scene(spec);
    const Scene b = make_scene(spec);
    REQUIRE(a.frames.size() == 8);
    for (int t = 0; t < 8; ++t) {
        CHECK(frames_equal(a.frames[t], b.frames[t]));
        CHECK((a.truth.masks[t] == b.truth.masks[t]).all());
        CHECK(a.truth.displacement[t] == b.truth.displacement[t]);
    }

    spec.seed = 43;
    const Scene c = make_scene(spec);
    CHECK(!frames_equal(a.frames[0], c.frames[0]));
}

TEST_CASE("ground-truth displacement follows the sine law") {
    SceneSpec spec;  // amplitude 0.5, frequency 1, fps 30, direction +x
    const Scene scene = make_scene(spec);
    CHECK(scene.truth.displacement[0].x() == doctest::Approx(0.0));
    CHECK(scene.truth.displacement[0].y() == doctest::Approx(0.0));
    // t = 7 of 30 at 1 Hz is 84 degrees of phase.
    const double expected = 0.5 * std::sin(2.0 * std::numbers::pi * 7.0 / 30.0);
    CHECK(expected == doctest::Approx(0.49726094).epsilon(1e-6));
    CHECK(scene.truth.displacement[7].x() == doctest::Approx(expected).epsilon(1e-9));
    CHECK(scene.truth.displacement[7].y() == doctest::Approx(0.0));

    SUBCASE("oscillation direction is normalized") {
        SceneSpec diag = spec;
        diag.dir_x = 2.0;
        diag.dir_y = 2.0;
        const Scene s = make_scene(diag);
        const double c = expected / std::numbers::sqrt2;
        CHECK(s.truth.displacement[7].x() == doctest::Approx(c).epsilon(1e-9));
        CHECK(s.truth.displacement[7].y() == doctest::Approx(c).epsilon(1e-9));
    }
}

TEST_CASE("zero amplitude produces a static sequence") {
    SceneSpec spec;
    spec.width = 80;
    spec.height = 80;
    spec.disk_x = 40;
    spec.disk_y = 40;
    spec.disk_radius = 15;
    spec.frame_count = 6;
    spec.amplitude = 0.0;
    const Scene scene = make_scene(spec);
    for (int t = 1; t < 6; ++t) {
        CHECK(frames_equal(scene.frames[t], scene.frames[0]));
        CHECK((scene.truth.masks[t] == scene.truth.masks[0]).all());
    }
}

TEST_CASE("truth masks are centre-inside disk rasters") {
    SceneSpec spec;
    const Scene scene = make_scene(spec);
    const Mask& m0 = scene.truth.masks[0];
    CHECK(m0(64, 64));
    CHECK(m0(64, 89));    // exactly radius away
    CHECK(!m0(64, 90));
    CHECK(m0(89, 64));
    CHECK(!m0(90, 64));
    CHECK((scene.initial_mask == m0).all());

    // The disk moves by well under a pixel per frame, so consecutive masks
    // overlap almost completely.
    for (size_t t = 1; t < scene.truth.masks.size(); ++t) {
        CHECK(testutil::mask_iou(scene.truth.masks[t], scene.truth.masks[t - 1]) > 0.9);
    }
}

TEST_CASE("the brightness centroid recovers the disk centre") {
    SceneSpec spec;
    spec.width = 112;
    spec.height = 112;
    spec.disk_x = 56;
    spec.disk_y = 56;
    spec.disk_radius = 20;
    spec.frame_count = 12;
    spec.seed = 9;
    const Scene scene = make_scene(spec);
    const Mask everywhere = full_region(112, 112);
    for (int t = 0; t < 12; ++t) {
        const Eigen::Vector2d c = measure_centroid(scene.frames[t], everywhere);
        const double cx = spec.disk_x + scene.truth.displacement[t].x();
        const double cy = spec.disk_y + scene.truth.displacement[t].y();
        CAPTURE(t);
        CHECK(std::abs(c.x() - cx) < 0.1);
        CHECK(std::abs(c.y() - cy) < 0.1);

        // A tight region around the disk gives the same answer: everything
        // outside it is below the threshold anyway.
        const Mask tight = testutil::touched_disk(112, 112, cx, cy, spec.disk_radius + 3);
        const Eigen::Vector2d ct = measure_centroid(scene.frames[t], tight);
        CHECK(std::abs(ct.x() - c.x()) < 1e-6);
        CHECK(std::abs(ct.y() - c.y()) < 1e-6);
    }
}

TEST_CASE("measure_centroid is an exact weighted mean") {
    Image gray(8, 8);
    gray.setConstant(0.3f);  // below the threshold: contributes nothing
    gray(2, 3) = kCentroidThreshold + 0.2f;
    gray(5, 6) = kCentroidThreshold + 0.1f;
    const Frame frame(gray);
    const Eigen::Vector2d c = measure_centroid(frame, full_region(8, 8));
    CHECK(c.x() == doctest::Approx((3.0 * 0.2 + 6.0 * 0.1) / 0.3).epsilon(1e-5));
    CHECK(c.y() == doctest::Approx((2.0 * 0.2 + 5.0 * 0.1) / 0.3).epsilon(1e-5));

    SUBCASE("the region gates which pixels count") {
        Mask region = full_region(8, 8);
        region(5, 6) = false;
        const Eigen::Vector2d cr = measure_centroid(frame, region);
        CHECK(cr.x() == doctest::Approx(3.0).epsilon(1e-6));
        CHECK(cr.y() == doctest::Approx(2.0).epsilon(1e-6));
    }

    SUBCASE("a signal-free region is rejected") {
        Mask corner(8, 8);
        corner.setConstant(false);
        corner(7, 0) = true;
        CHECK_THROWS_AS(measure_centroid(frame, corner), InvalidInput);
    }
}

TEST_CASE("occlusion scenario paints the rectangle only during its interval") {
    SceneSpec spec;
    spec.width = 96;
    spec.height = 96;
    spec.frame_count = 10;
    spec.disk_x = 48;
    spec.disk_y = 48;
    spec.disk_radius = 16;
    spec.scenario = Scenario::occlusion;
    spec.occluder = {30, 30, 36, 20, 3, 6, 0.45f};
    const Scene occ = make_scene(spec);

    SceneSpec plain = spec;
    plain.scenario = Scenario::easy;
    const Scene easy = make_scene(plain);

    REQUIRE(occ.truth.events.size() == 1);
    CHECK(occ.truth.events[0].kind == "occlusion");
    CHECK(occ.truth.events[0].first_frame == 3);
    CHECK(occ.truth.events[0].last_frame == 6);
    CHECK(easy.truth.events.empty());

    for (int t = 0; t < 10; ++t) {
        const Image& a = occ.frames[t].planes[0];
        const Image& b = easy.frames[t].planes[0];
        const bool covered = t >= 3 && t <= 6;
        for (int y = 0; y < 96; ++y) {
            for (int x = 0; x < 96; ++x) {
                const bool inside = x >= 30 && x < 66 && y >= 30 && y < 50;
                if (covered && inside) {
                    CHECK(a(y, x) == 0.45f);
                } else {
                    CHECK(a(y, x) == b(y, x));
                }
            }
        }
    }
}

TEST_CASE("view change drifts the whole scene") {
    SceneSpec spec;
    spec.width = 96;
    spec.height = 96;
    spec.frame_count = 8;
    spec.disk_x = 40;
    spec.disk_y = 48;
    spec.disk_radius = 12;
    spec.amplitude = 0.0;
    spec.scenario = Scenario::view_change;
    spec.drift_x = 1.0;
    spec.drift_y = 0.0;
    const Scene scene = make_scene(spec);

    REQUIRE(scene.truth.events.size() == 1);
    CHECK(scene.truth.events[0].kind == "drift");

    // Displacement records oscillation plus accumulated drift.
    CHECK(scene.truth.displacement[5].x() == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(scene.truth.displacement[5].y() == doctest::Approx(0.0));

    // With zero amplitude and integer drift, each frame is an exact shifted
    // copy of the previous one.
    for (int t = 1; t < 8; ++t) {
        const Image& cur = scene.frames[t].planes[0];
        const Image& prev = scene.frames[t - 1].planes[0];
        for (int y = 0; y < 96; ++y) {
            for (int x = 1; x < 96; ++x) {
                CAPTURE(t);
                CHECK(cur(y, x) == prev(y, x - 1));
            }
        }
    }
}

TEST_CASE("deformation modulates the disk radius") {
    SceneSpec spec;
    spec.width = 112;
    spec.height = 112;
    spec.disk_x = 56;
    spec.disk_y = 56;
    spec.disk_radius = 20;
    spec.frame_count = 16;
    spec.amplitude = 0.0;
    spec.scenario = Scenario::deformation;
    spec.radius_modulation = 0.2;
    const Scene scene = make_scene(spec);

    REQUIRE(scene.truth.events.size() == 1);
    CHECK(scene.truth.events[0].kind == "deformation");

    const auto area = [](const Mask& m) { return static_cast<double>(m.count()); };
    // Phase peaks near t = 7.5; by t = 7 the radius has grown by nearly the
    // full modulation.
    const double r0 = spec.disk_radius;
    const double r7 = r0 * (1.0 + 0.2 * std::sin(2.0 * std::numbers::pi * 7.0 / 30.0));
    const double ratio = area(scene.truth.masks[7]) / area(scene.truth.masks[0]);
    CHECK(ratio == doctest::Approx((r7 * r7) / (r0 * r0)).epsilon(0.03));
    CHECK(ratio > 1.3);
}

TEST_CASE("scene validation rejects bad specs") {
    const auto expect_throw = [](auto&& tweak) {
        SceneSpec spec;
        tweak(spec);
        CHECK_THROWS_AS(make_scene(spec), InvalidInput);
    };
    expect_throw([](SceneSpec& s) { s.amplitude = -0.25; });
    expect_throw([](SceneSpec& s) { s.frequency = 15.0; });  // Nyquist: 2f must stay below fps
    expect_throw([](SceneSpec& s) { s.frame_count = 0; });
    expect_throw([](SceneSpec& s) { s.disk_x = 10.0; });     // disk would leave the frame
    expect_throw([](SceneSpec& s) { s.dir_x = 0.0; s.dir_y = 0.0; });
    expect_throw([](SceneSpec& s) { s.radius_modulation = 0.6; });
    expect_throw([](SceneSpec& s) {
        s.scenario = Scenario::occlusion;  // zero-size occluder
    });
    expect_throw([](SceneSpec& s) {
        s.scenario = Scenario::occlusion;
        s.occluder = {100, 100, 40, 40, 0, 3, 0.45f};  // spills past the border
    });
    expect_throw([](SceneSpec& s) {
        s.scenario = Scenario::occlusion;
        s.occluder = {30, 30, 20, 20, 5, 40, 0.45f};  // interval past the end
    });
    expect_throw([](SceneSpec& s) {
        s.scenario = Scenario::view_change;
        s.drift_x = 3.0;  // drift over 30 frames walks the disk off the frame
    });
}

}  // TEST_SUITE
