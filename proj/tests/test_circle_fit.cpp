#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "qloss/circle_fit.hpp"
#include "qloss/errors.hpp"
#include "qloss/rng.hpp"

using namespace qloss;

TEST_CASE("three points on the unit circle are fit exactly") {
    const std::vector<Complex> pts{{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}};
    const Circle c = circle_fit(pts);
    CHECK(std::abs(c.center) < 1e-12);
    CHECK(c.radius == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("a dense noiseless circle is recovered to 1e-9") {
    const Complex center(0.4, -0.1);
    const double radius = 0.25;
    std::vector<Complex> pts;
    for (int k = 0; k < 256; ++k) {
        const double angle = 2.0 * std::numbers::pi * k / 256.0;
        pts.push_back(center + radius * std::polar(1.0, angle));
    }
    const Circle c = circle_fit(pts);
    CHECK(std::abs(c.center - center) < 1e-9);
    CHECK(std::abs(c.radius - radius) < 1e-9);
}

TEST_CASE("partial arcs are still recovered") {
    const Complex center(-0.2, 0.7);
    const double radius = 0.4;
    std::vector<Complex> pts;
    for (int k = 0; k < 128; ++k) {
        const double angle = 0.3 + 1.1 * k / 127.0;  // just over a sixth of the circle
        pts.push_back(center + radius * std::polar(1.0, angle));
    }
    const Circle c = circle_fit(pts);
    CHECK(std::abs(c.center - center) < 1e-7);
    CHECK(c.radius == doctest::Approx(radius).epsilon(1e-7));
}

TEST_CASE("noisy circles give sub-percent median radius error") {
    const Complex center(0.4, -0.1);
    const double radius = 0.25;
    const double sigma = 0.01;
    std::vector<double> errors;
    for (int trial = 0; trial < 200; ++trial) {
        Rng rng(derive_seed(1234, "circle-" + std::to_string(trial)));
        std::vector<Complex> pts;
        for (int k = 0; k < 256; ++k) {
            const double angle = 2.0 * std::numbers::pi * k / 256.0;
            pts.push_back(center + radius * std::polar(1.0, angle) +
                          sigma * Complex(rng.normal(), rng.normal()));
        }
        errors.push_back(std::abs(circle_fit(pts).radius - radius) / radius);
    }
    std::nth_element(errors.begin(), errors.begin() + 100, errors.end());
    CHECK(errors[100] < 0.01);
}

TEST_CASE("degenerate inputs are rejected") {
    CHECK_THROWS_AS(circle_fit({{0.0, 0.0}, {1.0, 1.0}}), DegenerateGeometry);
    std::vector<Complex> line;
    for (int k = 0; k < 32; ++k) {
        line.push_back(Complex(0.1 * k, 0.2 * k + 0.5));
    }
    CHECK_THROWS_AS(circle_fit(line), DegenerateGeometry);
    std::vector<Complex> same(16, Complex(0.3, 0.3));
    CHECK_THROWS_AS(circle_fit(same), DegenerateGeometry);
    CHECK_THROWS_AS(
        circle_fit({{1.0, 0.0}, {0.0, std::numeric_limits<double>::quiet_NaN()}, {-1.0, 0.0}}),
        ValidationError);
}
