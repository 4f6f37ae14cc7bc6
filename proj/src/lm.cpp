#include "qloss/lm.hpp"

#include <algorithm>
#include <cmath>

#include "qloss/errors.hpp"

namespace qloss {

void validate(const FitConfig& cfg) {
    if (cfg.max_iterations < 1) {
        throw ValidationError("max_iterations must be >= 1");
    }
    if (!(cfg.gradient_tolerance > 0.0) || !(cfg.step_tolerance > 0.0)) {
        throw ValidationError("tolerances must be > 0");
    }
    if (!(cfg.wing_fraction > 0.0) || cfg.wing_fraction > 0.25) {
        throw ValidationError("wing_fraction must lie in (0, 0.25]");
    }
    if (cfg.beta_free) {
        return;
    }
    if (!(cfg.beta_fixed > 0.0) || cfg.beta_fixed > 2.0) {
        throw ValidationError("fixed beta must lie in (0, 2]");
    }
}

Eigen::MatrixXd numeric_jacobian(const ResidualFn& residual, const Eigen::VectorXd& x) {
    const Eigen::VectorXd r0 = residual(x);
    Eigen::MatrixXd jac(r0.size(), x.size());
    Eigen::VectorXd probe = x;
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        const double h = std::max(1e-6 * std::abs(x[k]), 1e-12);
        probe[k] = x[k] + h;
        const Eigen::VectorXd r_plus = residual(probe);
        probe[k] = x[k] - h;
        const Eigen::VectorXd r_minus = residual(probe);
        probe[k] = x[k];
        jac.col(k) = (r_plus - r_minus) / (2.0 * h);
    }
    return jac;
}

namespace {

// Normalized gradient norm: the largest cosine between the residual and any
// Jacobian column, with a small additive floor on the residual norm. Above
// the floor this is the classic scale-free cosine test; once the residual
// shrinks below it (exactly-fitting models, where the cosine stalls on
// rounding noise) the measure degrades to an absolute column-scaled
// gradient and still reaches zero.
constexpr double kResidualFloor = 1e-4;

double gradient_measure(const Eigen::MatrixXd& jac, const Eigen::VectorXd& r) {
    const double rnorm = r.norm() + kResidualFloor;
    double worst = 0.0;
    for (Eigen::Index k = 0; k < jac.cols(); ++k) {
        const double cnorm = jac.col(k).norm();
        if (cnorm == 0.0) {
            continue;
        }
        worst = std::max(worst, std::abs(jac.col(k).dot(r)) / (cnorm * rnorm));
    }
    return worst;
}

// Column scales that bring the normal matrix to unit diagonal. Parameters
// here mix magnitudes as far apart as hertz and seconds of delay, so the
// raw normal matrix is far beyond double-precision conditioning; all solves
// run in the scaled variables and are mapped back afterwards.
Eigen::VectorXd column_scales(const Eigen::MatrixXd& normal) {
    Eigen::VectorXd scales(normal.rows());
    for (Eigen::Index k = 0; k < normal.rows(); ++k) {
        const double d = normal(k, k);
        scales[k] = d > 0.0 ? std::sqrt(d) : 1.0;
    }
    return scales;
}

Eigen::MatrixXd robust_inverse(const Eigen::MatrixXd& normal, bool& singular) {
    const Eigen::VectorXd scales = column_scales(normal);
    const Eigen::VectorXd inv_scales = scales.cwiseInverse();
    const Eigen::MatrixXd scaled =
        inv_scales.asDiagonal() * normal * inv_scales.asDiagonal();

    const auto unscale = [&](const Eigen::MatrixXd& inv) -> Eigen::MatrixXd {
        return inv_scales.asDiagonal() * inv * inv_scales.asDiagonal();
    };

    const Eigen::LDLT<Eigen::MatrixXd> ldlt(scaled);
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
        const Eigen::MatrixXd identity =
            Eigen::MatrixXd::Identity(normal.rows(), normal.cols());
        const Eigen::MatrixXd inv = ldlt.solve(identity);
        const double residual = (scaled * inv - identity).norm();
        if (std::isfinite(residual) && residual < 1e-6 * std::max(1.0, identity.norm())) {
            singular = false;
            return unscale(inv);
        }
    }
    // Rank-deficient normal matrix: Moore-Penrose pseudo-inverse so the
    // identifiable directions still carry meaningful uncertainties.
    singular = true;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(scaled);
    const Eigen::VectorXd& vals = eig.eigenvalues();
    const double cutoff = std::max(vals.cwiseAbs().maxCoeff(), 0.0) * 1e-12;
    Eigen::VectorXd inv_vals = Eigen::VectorXd::Zero(vals.size());
    for (Eigen::Index k = 0; k < vals.size(); ++k) {
        if (vals[k] > cutoff) {
            inv_vals[k] = 1.0 / vals[k];
        }
    }
    const Eigen::MatrixXd inv =
        eig.eigenvectors() * inv_vals.asDiagonal() * eig.eigenvectors().transpose();
    return unscale(inv);
}

}  // namespace

LMResult lm_minimize(const ResidualFn& residual, const Eigen::VectorXd& initial,
                     const FitConfig& cfg, const JacobianFn& jacobian) {
    validate(cfg);
    const auto eval_jacobian = [&](const Eigen::VectorXd& x) {
        return jacobian ? jacobian(x) : numeric_jacobian(residual, x);
    };

    Eigen::VectorXd x = initial;
    Eigen::VectorXd r = residual(x);
    if (!r.allFinite()) {
        throw ValidationError("residual is not finite at the initial point");
    }
    if (r.size() < x.size()) {
        throw ValidationError("fewer residuals than free parameters");
    }
    double cost = r.squaredNorm();

    LMResult out;
    out.diagnostics.stop_reason = "max_iterations";

    double lambda = 1e-3;
    Eigen::MatrixXd jac = eval_jacobian(x);
    int iter = 0;
    for (; iter < cfg.max_iterations; ++iter) {
        const double gmeas = gradient_measure(jac, r);
        out.diagnostics.gradient_measure = gmeas;
        if (gmeas <= cfg.gradient_tolerance) {
            out.diagnostics.converged = true;
            out.diagnostics.stop_reason = "gradient_tolerance";
            break;
        }

        const Eigen::MatrixXd normal = jac.transpose() * jac;
        const Eigen::VectorXd grad = jac.transpose() * r;
        // Marquardt damping of (normal + lambda * diag(normal)), solved in
        // column-scaled variables where the damped diagonal is lambda * 1.
        const Eigen::VectorXd scales = column_scales(normal);
        const Eigen::VectorXd inv_scales = scales.cwiseInverse();
        const Eigen::MatrixXd scaled_normal =
            inv_scales.asDiagonal() * normal * inv_scales.asDiagonal();
        const Eigen::VectorXd scaled_grad = inv_scales.asDiagonal() * grad;
        const Eigen::VectorXd scaled_diag =
            scaled_normal.diagonal().cwiseMax(1e-14);

        bool stepped = false;
        bool step_small = false;
        while (lambda < 1e15) {
            Eigen::MatrixXd damped = scaled_normal;
            damped.diagonal() += lambda * scaled_diag;
            const Eigen::LDLT<Eigen::MatrixXd> ldlt(damped);
            if (ldlt.info() != Eigen::Success) {
                lambda *= 10.0;
                continue;
            }
            const Eigen::VectorXd step = inv_scales.asDiagonal() * ldlt.solve(-scaled_grad);
            if (!step.allFinite()) {
                lambda *= 10.0;
                continue;
            }
            const Eigen::VectorXd x_new = x + step;
            const Eigen::VectorXd r_new = residual(x_new);
            const double cost_new = r_new.allFinite() ? r_new.squaredNorm()
                                                      : std::numeric_limits<double>::infinity();
            if (cost_new <= cost) {
                step_small = true;
                for (Eigen::Index k = 0; k < x.size(); ++k) {
                    if (std::abs(step[k]) >
                        cfg.step_tolerance * (std::abs(x[k]) + cfg.step_tolerance)) {
                        step_small = false;
                        break;
                    }
                }
                x = x_new;
                r = r_new;
                cost = cost_new;
                lambda = std::max(lambda / 3.0, 1e-12);
                stepped = true;
                break;
            }
            lambda *= 4.0;
        }
        if (!stepped) {
            out.diagnostics.stop_reason = "damping_exhausted";
            break;
        }
        jac = eval_jacobian(x);
        if (step_small) {
            const double gfinal = gradient_measure(jac, r);
            out.diagnostics.gradient_measure = gfinal;
            out.diagnostics.converged = gfinal <= cfg.gradient_tolerance;
            out.diagnostics.stop_reason = "step_tolerance";
            ++iter;
            break;
        }
    }

    out.solution = x;
    out.diagnostics.iterations = iter;
    out.diagnostics.residual_norm = std::sqrt(cost);

    const Eigen::MatrixXd normal = jac.transpose() * jac;
    out.normal_inverse = robust_inverse(normal, out.diagnostics.singular_normal_matrix);
    const Eigen::Index dof = r.size() - x.size();
    out.residual_variance = dof > 0 ? cost / static_cast<double>(dof) : 0.0;
    out.covariance = out.residual_variance * out.normal_inverse;
    return out;
}

}  // namespace qloss
