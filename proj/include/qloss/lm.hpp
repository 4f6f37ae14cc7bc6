#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>

namespace qloss {

// Shared fit configuration. Tolerances apply to lm_minimize; wing_fraction,
// beta handling and weighting are consumed by the staged pipelines.
struct FitConfig {
    int max_iterations = 200;
    // Convergence declares when max_k |J_k . r| / (|J_k| * (|r| + 1e-4))
    // drops below this: the cosine of the residual against the worst
    // Jacobian column, with a small floor on |r| so exactly-fitting models
    // (|r| -> 0) also terminate as converged. Stationary points sit many
    // decades below this value in double precision.
    double gradient_tolerance = 1e-8;
    double step_tolerance = 1e-12;      // relative step size
    double wing_fraction = 0.1;         // fraction of points per sweep edge
    bool beta_free = false;
    double beta_fixed = 1.0;
    enum class Weighting { kInverseVariance, kUniform };
    Weighting weighting = Weighting::kInverseVariance;
    std::uint64_t seed = 0;
};

void validate(const FitConfig& cfg);

using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using JacobianFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

struct LMDiagnostics {
    bool converged = false;
    int iterations = 0;
    double residual_norm = 0.0;
    double gradient_measure = 0.0;  // value checked against gradient_tolerance
    bool singular_normal_matrix = false;
    std::string stop_reason;
};

struct LMResult {
    Eigen::VectorXd solution;
    // s^2 (J^T J)^-1 with s^2 = ||r||^2 / (m - n); zero for an exact fit.
    Eigen::MatrixXd covariance;
    // (J^T J)^-1 alone, for callers whose residuals are already whitened
    // by known 1-sigma uncertainties.
    Eigen::MatrixXd normal_inverse;
    double residual_variance = 0.0;
    LMDiagnostics diagnostics;
};

// Damped Gauss-Newton (Levenberg-Marquardt) with Marquardt diagonal scaling.
// Deterministic given inputs. Uses the analytic Jacobian when provided,
// otherwise central finite differences (relative step 1e-6, floor 1e-12).
// Steps that produce non-finite residuals are rejected by raising the
// damping, so models may guard their domain by returning NaN/Inf.
LMResult lm_minimize(const ResidualFn& residual, const Eigen::VectorXd& initial,
                     const FitConfig& cfg, const JacobianFn& jacobian = nullptr);

// Central-difference Jacobian with the step policy above. Exposed so tests
// can compare analytic Jacobians against it.
Eigen::MatrixXd numeric_jacobian(const ResidualFn& residual, const Eigen::VectorXd& x);

}  // namespace qloss
