#pragma once

#include <vector>

#include "qloss/types.hpp"

namespace qloss {

struct Circle {
    Complex center;
    double radius = 0.0;
};

// Algebraic circle fit (Taubin's method) to points in the complex plane.
// Exact for noise-free circular data; statistically near-optimal for small
// noise. Throws DegenerateGeometry when the points are collinear or
// otherwise do not determine a circle.
Circle circle_fit(const std::vector<Complex>& points);

}  // namespace qloss
