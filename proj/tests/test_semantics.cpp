// SPDX-License-Identifier: Apache-2.0
// beamsema: environment-semantics aided beam prediction testbed

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>

#include "beamsema/rng.hpp"
#include "beamsema/semantics.hpp"

using namespace beamsema;

TEST_CASE("bbox_vector") {
    SUBCASE("full-image box normalizes to [0.5, 0.5, 1, 1]") {
        const auto s = bbox_vector({320.0, 180.0, 640.0, 360.0}, 640, 360);
        CHECK(s.values[0] == doctest::Approx(0.5));
        CHECK(s.values[1] == doctest::Approx(0.5));
        CHECK(s.values[2] == doctest::Approx(1.0));
        CHECK(s.values[3] == doctest::Approx(1.0));
    }

    SUBCASE("four entries, direct division") {
        const auto s = bbox_vector({160.0, 90.0, 64.0, 36.0}, 640, 360);
        CHECK(s.values.size() == 4);
        CHECK(s.values[0] == doctest::Approx(0.25));
        CHECK(s.values[1] == doctest::Approx(0.25));
        CHECK(s.values[2] == doctest::Approx(0.1));
        CHECK(s.values[3] == doctest::Approx(0.1));
    }

    SUBCASE("scale consistency: scaling image and box together is a no-op") {
        Rng rng(4);
        for (int i = 0; i < 100; ++i) {
            const PixelBBox b{rng.uniform(0, 640), rng.uniform(0, 360),
                              rng.uniform(1, 100), rng.uniform(1, 100)};
            const int k = 1 + static_cast<int>(rng.below(5));
            const PixelBBox scaled{b.x_c * k, b.y_c * k, b.w * k, b.h * k};
            const auto s1 = bbox_vector(b, 640, 360);
            const auto s2 = bbox_vector(scaled, 640 * k, 360 * k);
            for (int j = 0; j < 4; ++j)
                CHECK(s1.values[j] == doctest::Approx(s2.values[j]).epsilon(1e-12));
        }
    }

    SUBCASE("zero image dims rejected") {
        CHECK_THROWS_AS(bbox_vector({1, 1, 1, 1}, 0, 360), std::invalid_argument);
        CHECK_THROWS_AS(bbox_vector({1, 1, 1, 1}, 640, 0), std::invalid_argument);
    }
}

namespace {

// Brute-force per-cell any-pixel scan with the same floor tiling contract.
MaskSemantic downsample_oracle(const ByteImage& mask, int ow, int oh) {
    MaskSemantic out;
    out.width = ow;
    out.height = oh;
    out.grid.assign(static_cast<std::size_t>(ow) * oh, 0.0);
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x)
            if (mask.at(x, y)) {
                const int i = static_cast<int>(static_cast<std::int64_t>(x) * ow / mask.width);
                const int j = static_cast<int>(static_cast<std::int64_t>(y) * oh / mask.height);
                out.grid[static_cast<std::size_t>(j) * ow + i] = 1.0;
            }
    return out;
}

}  // namespace

TEST_CASE("downsample_mask") {
    SUBCASE("all-zero stays all-zero, all-one stays all-one") {
        auto zeros = make_byte_image(640, 360, 0);
        auto ones = make_byte_image(640, 360, 1);
        const auto dz = downsample_mask(zeros, 32, 32);
        const auto d1 = downsample_mask(ones, 32, 32);
        for (double v : dz.grid) CHECK(v == 0.0);
        for (double v : d1.grid) CHECK(v == 1.0);
    }

    SUBCASE("single 20x20 blob matches the brute-force block scan") {
        auto mask = make_byte_image(640, 360, 0);
        for (int y = 100; y < 120; ++y)
            for (int x = 400; x < 420; ++x) mask.set(x, y, 1);
        const auto got = downsample_mask(mask, 32, 32);
        const auto want = downsample_oracle(mask, 32, 32);
        REQUIRE(got.grid.size() == want.grid.size());
        for (std::size_t i = 0; i < got.grid.size(); ++i) CHECK(got.grid[i] == want.grid[i]);
    }

    SUBCASE("random masks match the oracle and preserve presence") {
        Rng rng(12);
        for (int trial = 0; trial < 20; ++trial) {
            const int w = 16 + static_cast<int>(rng.below(100));
            const int h = 16 + static_cast<int>(rng.below(100));
            auto mask = make_byte_image(w, h, 0);
            const int n_on = 1 + static_cast<int>(rng.below(40));
            for (int i = 0; i < n_on; ++i)
                mask.set(static_cast<int>(rng.below(static_cast<std::uint64_t>(w))),
                         static_cast<int>(rng.below(static_cast<std::uint64_t>(h))), 1);
            const int ow = 4 + static_cast<int>(rng.below(12));
            const int oh = 4 + static_cast<int>(rng.below(12));
            const auto got = downsample_mask(mask, ow, oh);
            const auto want = downsample_oracle(mask, ow, oh);
            for (std::size_t i = 0; i < got.grid.size(); ++i) CHECK(got.grid[i] == want.grid[i]);
            // max pooling cannot erase a nonempty mask
            double total = 0.0;
            for (double v : got.grid) total += v;
            CHECK(total > 0.0);
        }
    }

    SUBCASE("all outputs stay in [0,1] and binary") {
        auto mask = make_byte_image(64, 64, 0);
        mask.set(0, 0, 1);
        mask.set(63, 63, 1);
        const auto d = downsample_mask(mask, 8, 8);
        for (double v : d.grid) CHECK((v == 0.0 || v == 1.0));
    }

    SUBCASE("invalid target dims rejected") {
        auto mask = make_byte_image(64, 64, 0);
        CHECK_THROWS_AS(downsample_mask(mask, 0, 8), std::invalid_argument);
        CHECK_THROWS_AS(downsample_mask(mask, 8, 0), std::invalid_argument);
        CHECK_THROWS_AS(downsample_mask(mask, 128, 8), std::invalid_argument);
    }
}

TEST_CASE("normalize_position") {
    const PositionBounds b{-10.0, 30.0, 5.0, 25.0};

    SUBCASE("endpoints and midpoint") {
        const auto lo = normalize_position(-10.0, 5.0, b);
        CHECK(lo.values[0] == doctest::Approx(0.0));
        CHECK(lo.values[1] == doctest::Approx(0.0));
        const auto hi = normalize_position(30.0, 25.0, b);
        CHECK(hi.values[0] == doctest::Approx(1.0));
        CHECK(hi.values[1] == doctest::Approx(1.0));
        const auto mid = normalize_position(10.0, 15.0, b);
        CHECK(mid.values[0] == doctest::Approx(0.5));
        CHECK(mid.values[1] == doctest::Approx(0.5));
    }

    SUBCASE("out-of-bounds inputs clip to [0,1]") {
        const auto low = normalize_position(-100.0, -100.0, b);
        CHECK(low.values[0] == 0.0);
        CHECK(low.values[1] == 0.0);
        const auto high = normalize_position(100.0, 100.0, b);
        CHECK(high.values[0] == 1.0);
        CHECK(high.values[1] == 1.0);
    }

    SUBCASE("degenerate bounds rejected") {
        CHECK_THROWS_AS(normalize_position(0, 0, PositionBounds{1, 1, 0, 2}), std::invalid_argument);
        CHECK_THROWS_AS(normalize_position(0, 0, PositionBounds{0, 2, 3, 3}), std::invalid_argument);
    }
}
