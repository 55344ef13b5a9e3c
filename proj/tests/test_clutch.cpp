#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>

#include "helpers.hpp"
#include "invacc/clutch.hpp"
#include "invacc/errors.hpp"

using namespace invacc;
using doctest::Approx;

TEST_CASE("slip threshold interpolates the reference curve") {
    const auto params = testutil::prototype_clutch();
    CHECK(slip_threshold(10e3, params).force == Approx(17.0));
    CHECK(slip_threshold(50e3, params).force == Approx(122.0));
    CHECK(slip_threshold(25e3, params).force == Approx(39.5));
    CHECK_FALSE(slip_threshold(25e3, params).extrapolated);

    SUBCASE("clamps and flags outside the tabulated range") {
        const auto low = slip_threshold(5e3, params);
        CHECK(low.force == Approx(17.0));
        CHECK(low.extrapolated);
        const auto high = slip_threshold(80e3, params);
        CHECK(high.force == Approx(122.0));
        CHECK(high.extrapolated);
    }

    SUBCASE("monotone non-decreasing in pressure") {
        double prev = 0.0;
        for (double p2 = 1e3; p2 <= 60e3; p2 += 0.5e3) {
            const double f = slip_threshold(p2, params).force;
            CHECK(f >= prev);
            prev = f;
        }
    }

    SUBCASE("requires an engaging pressure") {
        CHECK_THROWS_AS(slip_threshold(0.0, params), ValidationError);
        CHECK_THROWS_AS(slip_threshold(-5e3, params), ValidationError);
        auto gated = params;
        gated.engage_threshold = 10e3;
        CHECK_THROWS_AS(slip_threshold(5e3, gated), ValidationError);
        CHECK_NOTHROW(slip_threshold(10e3, gated));
    }
}

TEST_CASE("slip extension combines threshold, stiffness and anchor") {
    const auto params = testutil::prototype_clutch();
    auto state = engage(0.0, 0.0);
    CHECK(slip_extension(state, 122.0, params) == Approx(0.0427).epsilon(1e-3));
    CHECK(slip_extension(state, 0.0, params) == state.anchor_extension);

    state = engage(0.0, 0.10);
    CHECK(slip_extension(state, 17.0, params) == Approx(0.10595).epsilon(1e-6));

    const auto off = disengage(state);
    CHECK_THROWS_AS(slip_extension(off, 17.0, params), ValidationError);
}

TEST_CASE("clutch force is piecewise linear and saturated") {
    const auto params = testutil::prototype_clutch();
    const double k = params.tendon_stiffness;
    const double f_slip = 83.0;
    const auto state = engage(0.0, 0.05);
    const double x_slip = slip_extension(state, f_slip, params);

    CHECK(clutch_force(state, 0.01, f_slip, params) == 0.0);
    CHECK(clutch_force(state, 0.05, f_slip, params) == 0.0);
    CHECK(clutch_force(state, 0.05 + f_slip / (2.0 * k), f_slip, params) == Approx(f_slip / 2.0));
    CHECK(clutch_force(state, x_slip, f_slip, params) == Approx(f_slip));
    CHECK(clutch_force(state, x_slip + 0.02, f_slip, params) == Approx(f_slip));

    SUBCASE("continuity at the slip boundary") {
        for (double eps = 1e-3; eps > 1e-10; eps /= 10.0) {
            CHECK(std::abs(clutch_force(state, x_slip - eps, f_slip, params) - f_slip) <=
                  k * eps + 1e-12);
        }
    }

    SUBCASE("a threshold drop mid-slip caps the force immediately") {
        CHECK(clutch_force(state, x_slip + 0.01, 35.0, params) == Approx(35.0));
    }

    SUBCASE("disengaged state is rejected") {
        CHECK_THROWS_AS(clutch_force(disengage(state), 0.1, f_slip, params), ValidationError);
    }
}

TEST_CASE("euler slip step ratchets the anchor forward only") {
    const auto params = testutil::prototype_clutch();
    const double f_slip = 122.0;
    auto state = engage(0.0, 0.0);
    const double x_slip = slip_extension(state, f_slip, params);

    auto slipped = update_clutch_state(state, x_slip + 0.001, 0.01, 0.1, f_slip, params);
    CHECK(slipped.anchor_extension == Approx(0.001));
    CHECK(slipped.slipping);

    auto reversed = update_clutch_state(state, x_slip + 0.001, -0.01, 0.1, f_slip, params);
    CHECK(reversed.anchor_extension == state.anchor_extension);
    CHECK_FALSE(reversed.slipping);

    auto stuck = update_clutch_state(state, x_slip - 0.001, 0.01, 0.1, f_slip, params);
    CHECK(stuck.anchor_extension == state.anchor_extension);
    CHECK_FALSE(stuck.slipping);

    CHECK_THROWS_AS(update_clutch_state(state, 0.1, 0.01, 0.0, f_slip, params), ValidationError);
    CHECK_THROWS_AS(update_clutch_state(disengage(state), 0.1, 0.01, 0.1, f_slip, params),
                    ValidationError);
}

TEST_CASE("exact slip integration keeps the force continuous") {
    const auto params = testutil::prototype_clutch();
    const double f_slip = 44.0;
    auto state = engage(0.0, 0.0);
    const double x_slip = slip_extension(state, f_slip, params);

    SUBCASE("only travel beyond the boundary advances the anchor") {
        auto after = advance_slip(state, 0.0, x_slip + 0.02, f_slip, params);
        CHECK(after.anchor_extension == Approx(0.02));
        CHECK(clutch_force(after, x_slip + 0.02, f_slip, params) == Approx(f_slip));
    }

    SUBCASE("no slip below the boundary or while retracting") {
        CHECK(advance_slip(state, 0.0, x_slip - 1e-6, f_slip, params).anchor_extension == 0.0);
        CHECK(advance_slip(state, x_slip + 0.02, x_slip, f_slip, params).anchor_extension == 0.0);
    }

    SUBCASE("sub-step composition equals one step") {
        const double x2 = x_slip + 0.03;
        auto one = advance_slip(state, 0.0, x2, f_slip, params);
        auto two = advance_slip(state, 0.0, x_slip + 0.007, f_slip, params);
        two = advance_slip(two, x_slip + 0.007, x2, f_slip, params);
        CHECK(one.anchor_extension == Approx(two.anchor_extension).epsilon(1e-14));
    }
}

TEST_CASE("engagement bookkeeping") {
    auto state = engage(1.5, 0.2);
    CHECK(state.engaged);
    CHECK(state.engage_time == 1.5);
    CHECK(state.anchor_extension == 0.2);

    auto re = engage(2.0, 0.35);
    CHECK(re.anchor_extension == 0.35);

    const auto off = disengage(state);
    CHECK_FALSE(off.engaged);
    CHECK_FALSE(off.slipping);
}

TEST_CASE("anchor is monotone within an engagement under random schedules") {
    const auto params = testutil::prototype_clutch();
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> move(-0.02, 0.03);
    std::uniform_real_distribution<double> pressure(10e3, 50e3);
    for (int schedule = 0; schedule < 100; ++schedule) {
        auto state = engage(0.0, 0.0);
        double x = 0.0;
        double x_max = 0.0;
        double anchor_prev = state.anchor_extension;
        const double f_slip = slip_threshold(pressure(rng), params).force;
        const double stretch = f_slip / params.tendon_stiffness;
        for (int i = 0; i < 60; ++i) {
            const double x_next = std::clamp(x + move(rng), 0.0, 0.55);
            state = advance_slip(state, x, x_next, f_slip, params);
            x = x_next;
            x_max = std::max(x_max, x);
            CHECK(state.anchor_extension >= anchor_prev);
            // the anchor always trails the deepest visited point by the
            // elastic stretch; backward moves may put x below the anchor
            CHECK(state.anchor_extension <= std::max(0.0, x_max - stretch) + 1e-12);
            // the zero-force zone below the anchor never produces tension
            CHECK(clutch_force(state, state.anchor_extension - 0.01, f_slip, params) == 0.0);
            anchor_prev = state.anchor_extension;
        }
    }
}

TEST_CASE("parameter validation") {
    auto params = testutil::prototype_clutch();
    CHECK_NOTHROW(params.validate());

    auto bad = params;
    bad.tendon_stiffness = 0.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);

    bad = params;
    bad.slip_curve.clear();
    CHECK_THROWS_AS(bad.validate(), ValidationError);

    bad = params;
    bad.slip_curve[2].pressure = bad.slip_curve[1].pressure;  // not strictly increasing
    CHECK_THROWS_AS(bad.validate(), ValidationError);

    bad = params;
    bad.slip_curve[0].force = -1.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("slip curve file loading") {
    const auto dir = testutil::scratch_dir("slipcurve");
    const auto good = dir / "curve.txt";
    testutil::spit(good,
                   "# pressure [kPa], slip force [N]\n"
                   "10 17\n"
                   "20, 35\n"
                   "30 44\n");
    const auto curve = load_slip_curve(good);
    REQUIRE(curve.size() == 3);
    CHECK(curve[0].pressure == Approx(10e3));
    CHECK(curve[1].force == Approx(35.0));

    const auto bad = dir / "bad.txt";
    testutil::spit(bad, "10 17\nnot a number\n");
    CHECK_THROWS_AS(load_slip_curve(bad), ValidationError);

    const auto unsorted = dir / "unsorted.txt";
    testutil::spit(unsorted, "20 35\n10 17\n");
    CHECK_THROWS_AS(load_slip_curve(unsorted), ValidationError);

    CHECK_THROWS_AS(load_slip_curve(dir / "missing.txt"), IoError);
    std::filesystem::remove_all(dir);
}
