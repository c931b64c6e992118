#include <doctest.h>

#include <set>
#include <vector>

#include "vmag/schedule.hpp"

using namespace vmag;

TEST_SUITE("schedule") {

TEST_CASE("seven frames with clip length four") {
    const ClipSchedule s = build_schedule(7, 4);
    REQUIRE(s.clips.size() == 3);
    CHECK(s.clips[0].frames == std::vector<int>{0, 1, 2, 3});
    CHECK(s.clips[1].frames == std::vector<int>{3, 4, 5, 6});
    CHECK(s.clips[2].frames == std::vector<int>{6});
    CHECK(s.clips[0].start == 0);
    CHECK(s.clips[1].start == 3);
    CHECK(s.clips[2].start == 6);
}

TEST_CASE("ten frames with clip length four") {
    const ClipSchedule s = build_schedule(10, 4);
    REQUIRE(s.clips.size() == 4);
    CHECK(s.clips[0].frames == std::vector<int>{0, 1, 2, 3});
    CHECK(s.clips[1].frames == std::vector<int>{3, 4, 5, 6});
    CHECK(s.clips[2].frames == std::vector<int>{6, 7, 8, 9});
    CHECK(s.clips[3].frames == std::vector<int>{9});
}

TEST_CASE("single frame yields a single one-frame clip") {
    const ClipSchedule s = build_schedule(1, 4);
    REQUIRE(s.clips.size() == 1);
    CHECK(s.clips[0].frames == std::vector<int>{0});
    CHECK(reference_of(s, 0) == 0);
}

TEST_CASE("reference lookup follows clip starts") {
    const ClipSchedule s = build_schedule(10, 4);
    CHECK(reference_of(s, 0) == 0);
    CHECK(reference_of(s, 1) == 0);
    CHECK(reference_of(s, 2) == 0);
    CHECK(reference_of(s, 3) == 3);  // boundary frames use the later clip
    CHECK(reference_of(s, 5) == 3);
    CHECK(reference_of(s, 6) == 6);
    CHECK(reference_of(s, 9) == 9);
}

TEST_CASE("invalid arguments are rejected") {
    CHECK_THROWS_AS(build_schedule(0, 4), InvalidInput);
    CHECK_THROWS_AS(build_schedule(-3, 4), InvalidInput);
    CHECK_THROWS_AS(build_schedule(10, 1), InvalidInput);
    const ClipSchedule s = build_schedule(5, 2);
    CHECK_THROWS_AS(reference_of(s, -1), InvalidInput);
    CHECK_THROWS_AS(reference_of(s, 5), InvalidInput);
}

TEST_CASE("structural invariants hold across a grid of sizes") {
    for (const int total : {1, 2, 3, 7, 10, 31, 100}) {
        for (const int len : {2, 3, 4, 10}) {
            CAPTURE(total);
            CAPTURE(len);
            const ClipSchedule s = build_schedule(total, len);
            const int stride = len - 1;

            // Clip count matches ceil(total / stride).
            const int expected_clips = (total + stride - 1) / stride;
            CHECK(static_cast<int>(s.clips.size()) == expected_clips);

            std::set<int> covered;
            for (size_t k = 0; k < s.clips.size(); ++k) {
                const Clip& clip = s.clips[k];
                // Starts follow the arithmetic progression.
                CHECK(clip.start == static_cast<int>(k) * stride);
                CHECK(clip.index == static_cast<int>(k));
                REQUIRE(!clip.frames.empty());
                CHECK(clip.frames.front() == clip.start);
                CHECK(static_cast<int>(clip.frames.size()) <= len);
                // Frames are consecutive.
                for (size_t i = 1; i < clip.frames.size(); ++i) {
                    CHECK(clip.frames[i] == clip.frames[i - 1] + 1);
                }
                // Consecutive clips overlap in exactly one frame.
                if (k > 0) {
                    CHECK(s.clips[k - 1].frames.back() == clip.start);
                }
                for (int t : clip.frames) covered.insert(t);
            }

            // Full coverage of the sequence.
            CHECK(static_cast<int>(covered.size()) == total);
            CHECK(*covered.begin() == 0);
            CHECK(*covered.rbegin() == total - 1);

            // Reference distance never exceeds the stride, and the reference
            // is never ahead of the frame.
            for (int t = 0; t < total; ++t) {
                const int r = reference_of(s, t);
                CHECK(r <= t);
                CHECK(t - r <= stride);
                CHECK(r % stride == 0);
            }
        }
    }
}

}  // TEST_SUITE
