#include <doctest.h>

#include <cmath>

#include "ri/collision.hpp"
#include "ri/planner.hpp"

using namespace ri;

namespace {

Obstacle tiny_square(double cx, double cy, double side = 0.01) {
    return Obstacle::box(Vec{cx - side / 2, cy - side / 2},
                         Vec{cx + side / 2, cy + side / 2});
}

const Rect kBig2{Vec{-100.0, -100.0}, Vec{100.0, 100.0}};

}  // namespace

TEST_CASE("chi-squared value/confidence pairs") {
    CHECK(ChiSquare::from_confidence(0.9, 1).value ==
          doctest::Approx(2.705543454095404).epsilon(1e-9));
    CHECK(ChiSquare::from_confidence(0.9, 2).value ==
          doctest::Approx(4.605170185988091).epsilon(1e-9));
    CHECK(ChiSquare::from_confidence(0.9, 3).value ==
          doctest::Approx(6.251388631170325).epsilon(1e-9));
    CHECK(ChiSquare::from_value(4.605170185988091, 2).confidence ==
          doctest::Approx(0.9).epsilon(1e-9));
    CHECK_NOTHROW(ChiSquare::checked(4.605170185988091, 0.9, 2));
    CHECK_THROWS_AS(ChiSquare::checked(4.7, 0.9, 2), ValidationError);
    CHECK_THROWS_AS(ChiSquare::from_confidence(1.5, 2), InvalidInputError);
}

TEST_CASE("obstacle validation") {
    CHECK_THROWS_AS(Obstacle::box(Vec{1.0, 0.0}, Vec{0.0, 1.0}), ValidationError);
    // Clockwise polygon (negative area) is rejected.
    CHECK_THROWS_AS(
        Obstacle::polygon({Vec{0.0, 0.0}, Vec{0.0, 1.0}, Vec{1.0, 0.0}}),
        ValidationError);
    // Non-convex quad.
    CHECK_THROWS_AS(Obstacle::polygon({Vec{0.0, 0.0}, Vec{2.0, 0.0},
                                       Vec{0.1, 0.1}, Vec{0.0, 2.0}}),
                    ValidationError);
    CHECK_NOTHROW(
        Obstacle::polygon({Vec{0.0, 0.0}, Vec{2.0, 0.0}, Vec{1.0, 2.0}}));
}

TEST_CASE("state_clear spherical examples") {
    const SymMatrix P = SymMatrix::identity(2);
    CHECK(state_clear(Vec{0.0, 0.0}, P, 4.0, {tiny_square(3.0, 0.0)}, kBig2));
    CHECK_FALSE(
        state_clear(Vec{0.0, 0.0}, P, 4.0, {tiny_square(1.0, 0.0, 0.1)}, kBig2));
}

TEST_CASE("state_clear anisotropic example") {
    const SymMatrix P = SymMatrix::diag({4.0, 0.25});
    // Mahalanobis^2 to (0,1) is 4 >= 1; to (1,0) it is 0.25 < 1.
    CHECK(state_clear(Vec{0.0, 0.0}, P, 1.0, {tiny_square(0.0, 1.0)}, kBig2));
    CHECK_FALSE(state_clear(Vec{0.0, 0.0}, P, 1.0, {tiny_square(1.0, 0.0)}, kBig2));
}

TEST_CASE("state_clear honors the workspace boundary") {
    const Rect bounds{Vec{0.0, 0.0}, Vec{10.0, 10.0}};
    const SymMatrix P = SymMatrix::identity(2);
    // radius = sqrt(chi2) = 2
    CHECK(state_clear(Vec{5.0, 5.0}, P, 4.0, {}, bounds));
    CHECK(state_clear(Vec{2.0, 5.0}, P, 4.0, {}, bounds));  // touching is clear
    CHECK_FALSE(state_clear(Vec{1.9, 5.0}, P, 4.0, {}, bounds));
    CHECK_FALSE(state_clear(Vec{5.0, 8.5}, P, 4.0, {}, bounds));
}

TEST_CASE("state_clear in one dimension") {
    const Rect bounds{Vec{-10.0}, Vec{10.0}};
    const SymMatrix P = SymMatrix::diag({1.0});
    const std::vector<Obstacle> wall{Obstacle::box(Vec{3.0}, Vec{4.0})};
    // radius = sqrt(4 * 1) = 2
    CHECK(state_clear(Vec{0.0}, P, 4.0, wall, bounds));
    CHECK(state_clear(Vec{1.0}, P, 4.0, wall, bounds));  // touches at 3
    CHECK_FALSE(state_clear(Vec{1.5}, P, 4.0, wall, bounds));
    CHECK_FALSE(state_clear(Vec{3.5}, P, 4.0, wall, bounds));  // inside
    CHECK(state_clear(Vec{6.5}, P, 4.0, wall, bounds));
    CHECK_FALSE(state_clear(Vec{9.0}, P, 4.0, wall, bounds));  // out of bounds
}

TEST_CASE("polygon and box routes agree on random rectangles") {
    Rng rng(6101);
    for (int i = 0; i < 2000; ++i) {
        const double x0 = rng.uniform(-3.0, 3.0), y0 = rng.uniform(-3.0, 3.0);
        const double w = rng.uniform(0.2, 2.0), h = rng.uniform(0.2, 2.0);
        const Obstacle box = Obstacle::box(Vec{x0, y0}, Vec{x0 + w, y0 + h});
        const Obstacle poly = Obstacle::polygon({Vec{x0, y0}, Vec{x0 + w, y0},
                                                 Vec{x0 + w, y0 + h},
                                                 Vec{x0, y0 + h}});
        const Vec c{rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)};
        const SymMatrix P = random_spd(rng, 2, 0.05, 2.0);
        const double chi2 = rng.uniform(0.5, 6.0);
        const bool via_box = state_clear(c, P, chi2, {box}, kBig2);
        const bool via_poly = state_clear(c, P, chi2, {poly}, kBig2);
        CHECK(via_box == via_poly);
        // Cross-check against the active-set QP on the same rectangle.
        const bool via_qp =
            mahalanobis_sq_to_box(c, P, box.lo, box.hi) >= chi2;
        CHECK(via_box == via_qp);
    }
}

TEST_CASE("mahalanobis_sq_to_box in three dimensions") {
    const Vec x{0.0, 0.0, 0.0};
    const SymMatrix P = SymMatrix::identity(3);
    const double d2 = mahalanobis_sq_to_box(x, P, Vec{1.0, 1.0, 1.0},
                                            Vec{2.0, 2.0, 2.0});
    CHECK(d2 == doctest::Approx(3.0).epsilon(1e-9));  // nearest corner (1,1,1)
    const Rect bounds3{Vec{-50.0, -50.0, -50.0}, Vec{50.0, 50.0, 50.0}};
    const std::vector<Obstacle> obs{
        Obstacle::box(Vec{1.0, 1.0, 1.0}, Vec{2.0, 2.0, 2.0})};
    CHECK(state_clear(x, P, 2.0, obs, bounds3));
    CHECK_FALSE(state_clear(x, P, 4.0, obs, bounds3));
    // Inside the box.
    CHECK(mahalanobis_sq_to_box(Vec{1.5, 1.5, 1.5}, P, Vec{1.0, 1.0, 1.0},
                                Vec{2.0, 2.0, 2.0}) == 0.0);
}

TEST_CASE("transition_clear trivially true without obstacles") {
    const RiParams p(1.0, SymMatrix::isotropic(2, 0.05));
    const UncertainState a(Vec{0.0, 0.0}, SymMatrix::isotropic(2, 0.01));
    const UncertainState b(Vec{5.0, 1.0}, SymMatrix::isotropic(2, 0.05));
    CHECK(transition_clear(a, b, p, 4.0, {}, kBig2, 0.25));
}

TEST_CASE("transition_clear in a straight corridor") {
    // Corridor of half-width h: clear iff sqrt(chi2 * p(s)) <= h at every
    // checked point, growing p(s) = p0 + s w.
    const double h = 0.8;
    const std::vector<Obstacle> walls{
        Obstacle::box(Vec{-1.0, h}, Vec{6.0, 3.0}),
        Obstacle::box(Vec{-1.0, -3.0}, Vec{6.0, -h})};
    const double chi2 = 4.0;
    const UncertainState from(Vec{0.0, 0.0}, SymMatrix::isotropic(2, 0.04));
    // Growth 0.02 per unit: after 5 units the pre-measurement covariance is
    // 0.14, radius 0.748 < 0.8 -> clear.
    const RiParams slow(1.0, SymMatrix::isotropic(2, 0.02));
    const UncertainState to(Vec{5.0, 0.0}, SymMatrix::isotropic(2, 0.05));
    CHECK(transition_clear(from, to, slow, chi2, walls, kBig2, 0.1));
    // Growth 0.06 per unit: at the endpoint covariance 0.34, radius 1.17 > h.
    const RiParams fast(1.0, SymMatrix::isotropic(2, 0.06));
    CHECK_FALSE(transition_clear(from, to, fast, chi2, walls, kBig2, 0.1));
    // The arrival state itself may violate even when the sweep fits.
    const UncertainState to_big(Vec{5.0, 0.0}, SymMatrix::isotropic(2, 0.5));
    CHECK_FALSE(transition_clear(from, to_big, slow, chi2, walls, kBig2, 0.1));
}

TEST_CASE("transition_clear is direction dependent in a funnel") {
    // Corridor narrowing from half-width 2 at x=0 to 0.5 at x=5.
    const std::vector<Obstacle> funnel{
        Obstacle::polygon({Vec{0.0, 2.0}, Vec{5.0, 0.5}, Vec{5.0, 3.0},
                           Vec{0.0, 3.0}}),
        Obstacle::polygon({Vec{0.0, -3.0}, Vec{5.0, -3.0}, Vec{5.0, -0.5},
                           Vec{0.0, -2.0}}),
    };
    const double chi2 = 4.0;
    const RiParams p(1.0, SymMatrix::isotropic(2, 0.05));
    const UncertainState narrow_end(Vec{5.0, 0.0}, SymMatrix::isotropic(2, 0.01));
    const UncertainState wide_end(Vec{0.0, 0.0}, SymMatrix::isotropic(2, 0.01));
    // Toward the narrow end the grown covariance no longer fits.
    CHECK_FALSE(transition_clear(wide_end, narrow_end, p, chi2, funnel, kBig2, 0.25));
    // Out of the funnel the corridor widens as the covariance grows.
    const UncertainState wide_arrival(Vec{0.0, 0.0}, SymMatrix::isotropic(2, 0.26));
    CHECK(transition_clear(narrow_end, wide_arrival, p, chi2, funnel, kBig2, 0.25));
}

TEST_CASE("clearance is monotone in chi2 and in the covariance order") {
    Rng rng(6102);
    for (int i = 0; i < 1000; ++i) {
        std::vector<Obstacle> obs;
        const int n_obs = rng.uniform_int(1, 3);
        for (int k = 0; k < n_obs; ++k) {
            const double x0 = rng.uniform(-4.0, 3.0), y0 = rng.uniform(-4.0, 3.0);
            obs.push_back(Obstacle::box(
                Vec{x0, y0},
                Vec{x0 + rng.uniform(0.3, 1.5), y0 + rng.uniform(0.3, 1.5)}));
        }
        const Vec c{rng.uniform(-4.0, 4.0), rng.uniform(-4.0, 4.0)};
        const SymMatrix P = random_spd(rng, 2, 0.02, 1.0);
        const double chi2 = rng.uniform(1.0, 5.0);
        const bool clear = state_clear(c, P, chi2, obs, kBig2);
        if (!clear) {
            CHECK_FALSE(state_clear(c, P, chi2 * rng.uniform(1.0, 3.0), obs, kBig2));
            const SymMatrix bigger = P + random_spd(rng, 2, 1e-6, 0.5);
            CHECK_FALSE(state_clear(c, bigger, chi2, obs, kBig2));
        }
    }
}

TEST_CASE("zero-length transition equals the state check") {
    Rng rng(6103);
    const RiParams p(1.0, SymMatrix::isotropic(2, 0.05));
    for (int i = 0; i < 500; ++i) {
        const double x0 = rng.uniform(-4.0, 3.0), y0 = rng.uniform(-4.0, 3.0);
        const std::vector<Obstacle> obs{Obstacle::box(
            Vec{x0, y0},
            Vec{x0 + rng.uniform(0.3, 2.0), y0 + rng.uniform(0.3, 2.0)})};
        const UncertainState z(Vec{rng.uniform(-4.0, 4.0), rng.uniform(-4.0, 4.0)},
                               random_spd(rng, 2, 0.02, 1.0));
        const double chi2 = rng.uniform(1.0, 5.0);
        CHECK(transition_clear(z, z, p, chi2, obs, kBig2, 0.1) ==
              state_clear(z.x, z.P, chi2, obs, kBig2));
    }
}

TEST_CASE("default stepping agrees with 8x finer stepping") {
    // Scenario-scale scenes: covariance floors keep the swept ellipses wide
    // enough that the stepped check cannot skip an obstacle.
    Rng rng(6104);
    const double ed_min = 0.7;
    const double ds = ed_min / 10.0;
    int disagreements = 0;
    for (int i = 0; i < 1000; ++i) {
        std::vector<Obstacle> obs;
        const int n_obs = rng.uniform_int(1, 4);
        for (int k = 0; k < n_obs; ++k) {
            const double x0 = rng.uniform(-4.0, 3.0), y0 = rng.uniform(-4.0, 3.0);
            obs.push_back(Obstacle::box(
                Vec{x0, y0},
                Vec{x0 + rng.uniform(0.2, 1.5), y0 + rng.uniform(0.2, 1.5)}));
        }
        const RiParams p(1.0, SymMatrix::isotropic(2, rng.uniform(0.01, 0.2)));
        const UncertainState a(
            Vec{rng.uniform(-4.0, 4.0), rng.uniform(-4.0, 4.0)},
            random_spd(rng, 2, 0.005, 0.5));
        Vec dir{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
        const double len = rng.uniform(0.1, ed_min);
        const double nrm = std::max(dir.norm(), 1e-9);
        const UncertainState b(a.x + dir * (len / nrm),
                               random_spd(rng, 2, 0.005, 0.5));
        const double chi2 = 4.605170185988091;
        if (transition_clear(a, b, p, chi2, obs, kBig2, ds) !=
            transition_clear(a, b, p, chi2, obs, kBig2, ds / 8.0))
            ++disagreements;
    }
    CHECK(disagreements == 0);
}
