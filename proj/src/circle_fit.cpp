#include "qloss/circle_fit.hpp"

#include <cmath>
#include <cstddef>

#include "qloss/errors.hpp"

namespace qloss {

Circle circle_fit(const std::vector<Complex>& points) {
    const std::size_t n = points.size();
    if (n < 3) {
        throw DegenerateGeometry("circle fit needs at least 3 points");
    }

    double mean_x = 0.0;
    double mean_y = 0.0;
    for (const Complex& p : points) {
        if (!std::isfinite(p.real()) || !std::isfinite(p.imag())) {
            throw ValidationError("circle fit input contains non-finite values");
        }
        mean_x += p.real();
        mean_y += p.imag();
    }
    mean_x /= static_cast<double>(n);
    mean_y /= static_cast<double>(n);

    // Second- and third-order centered moments.
    double mxx = 0.0, myy = 0.0, mxy = 0.0, mxz = 0.0, myz = 0.0, mzz = 0.0;
    for (const Complex& p : points) {
        const double x = p.real() - mean_x;
        const double y = p.imag() - mean_y;
        const double z = x * x + y * y;
        mxx += x * x;
        myy += y * y;
        mxy += x * y;
        mxz += x * z;
        myz += y * z;
        mzz += z * z;
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    mxx *= inv_n;
    myy *= inv_n;
    mxy *= inv_n;
    mxz *= inv_n;
    myz *= inv_n;
    mzz *= inv_n;

    // Collinear input: the point scatter has (numerically) rank one.
    const double trace = mxx + myy;
    const double det_scatter = mxx * myy - mxy * mxy;
    if (!(trace > 0.0) || det_scatter <= 1e-12 * trace * trace) {
        throw DegenerateGeometry("points are collinear; no circle is determined");
    }

    const double mz = mxx + myy;
    const double cov_xy = det_scatter;
    const double var_z = mzz - mz * mz;
    const double a3 = 4.0 * mz;
    const double a2 = -3.0 * mz * mz - mzz;
    const double a1 = var_z * mz + 4.0 * cov_xy * mz - mxz * mxz - myz * myz;
    const double a0 = mxz * (mxz * myy - myz * mxy) + myz * (myz * mxx - mxz * mxy) -
                      var_z * cov_xy;

    // Newton iteration from zero for the smallest root of Taubin's
    // characteristic polynomial; exact data gives a root at zero.
    double root = 0.0;
    for (int iter = 0; iter < 32; ++iter) {
        const double value = a0 + root * (a1 + root * (a2 + root * a3));
        const double slope = a1 + root * (2.0 * a2 + root * 3.0 * a3);
        if (slope == 0.0) {
            break;
        }
        const double next = root - value / slope;
        if (!std::isfinite(next) || next == root) {
            root = std::isfinite(next) ? next : root;
            break;
        }
        root = next;
    }

    const double det = root * root - root * mz + cov_xy;
    if (det == 0.0 || !std::isfinite(det)) {
        throw DegenerateGeometry("circle fit normal equations are singular");
    }
    const double cx = (mxz * (myy - root) - myz * mxy) / det / 2.0;
    const double cy = (myz * (mxx - root) - mxz * mxy) / det / 2.0;
    const double radius_sq = cx * cx + cy * cy + mz;

    Circle circle;
    circle.center = Complex(cx + mean_x, cy + mean_y);
    circle.radius = std::sqrt(std::max(radius_sq, 0.0));
    if (!(circle.radius > 0.0) || !std::isfinite(circle.radius)) {
        throw DegenerateGeometry("circle fit produced a non-positive radius");
    }
    return circle;
}

}  // namespace qloss
