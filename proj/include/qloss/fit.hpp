#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "qloss/circle_fit.hpp"
#include "qloss/lm.hpp"
#include "qloss/types.hpp"

namespace qloss {

// Result of the full complex-transmission fit. Covariance rows/columns are
// ordered (f_r, Q_l, |Q_c|, phi, a, alpha, tau).
struct FitResult {
    ResonanceParams params;
    BackgroundModel background;
    Eigen::Matrix<double, 7, 7> covariance = Eigen::Matrix<double, 7, 7>::Zero();
    double residual_norm = 0.0;
    bool converged = false;
    bool singular_normal_matrix = false;
    int iterations = 0;
    double delta_i = 0.0;  // asymmetry-corrected internal loss
    double q_i = 0.0;
};

// Result of a saturation fit to a power sweep. Covariance rows/columns are
// ordered (f_delta0_tls, delta_other, n_c, beta); parameters held fixed
// contribute zero rows and columns.
struct TLSFit {
    TLSModelParams params;
    Eigen::Matrix<double, 4, 4> covariance = Eigen::Matrix<double, 4, 4>::Zero();
    double delta_lp = 0.0;  // zero-photon (low-power) loss limit
    double q_max = 0.0;     // 1 / delta_other
    double residual_norm = 0.0;
    bool converged = false;
    bool singular_normal_matrix = false;
    // Set when the sweep never departs from its low-power plateau by more
    // than 3 sigma: saturation is not identified and n_c (pinned at the
    // largest observed photon number) is only a lower bound.
    bool nc_is_lower_bound = false;
    int iterations = 0;
};

// Background estimated from the off-resonant sweep edges: cable delay from
// per-wing linear fits to unwrapped phase, amplitude from the median wing
// magnitude, phase offset from the intercept of the delay-corrected wing
// phase. Throws InsufficientWings when either edge has fewer than 4 points.
BackgroundModel estimate_background(const FrequencyTrace& trace, const FitConfig& cfg);

struct PhaseFitResult {
    double f_r_hz = 0.0;
    double q_loaded = 0.0;
    double theta0_rad = 0.0;  // phase at resonance, seen from the circle center
    bool converged = false;
};

// Fits theta(f) = theta0 + 2*atan(2 Q_l (1 - f/f_r)) to the unwrapped phase
// of background-removed data seen from the fitted circle center. Throws
// NoResonance when the total phase winding stays below pi/2.
PhaseFitResult phase_fit(const std::vector<double>& freqs_hz,
                         const std::vector<double>& unwrapped_phase_rad,
                         const FitConfig& cfg);

// Unwraps a wrapped phase sequence by removing 2*pi jumps between samples.
std::vector<double> unwrap_phase(const std::vector<double>& wrapped_rad);

// Full staged fit: background estimation, circle fit, phase fit, then a
// joint 7-parameter refinement against the raw complex data. Throws
// NoResonance/NonPhysicalFit/InsufficientWings for defective inputs; a fit
// that merely fails to meet tolerances is returned with converged=false.
FitResult fit_resonance(const FrequencyTrace& trace, const FitConfig& cfg = {});

// Fits the power-saturation law to (photon number, internal loss) data at
// fixed frequency and temperature. Points must be positive in n and delta;
// throws InsufficientData for fewer than 6 points or a span under 2 decades
// in photon number.
TLSFit fit_power_sweep(const std::vector<PowerSweepPoint>& sweep, double f_hz,
                       double temperature_k, const FitConfig& cfg = {});

// Residual/Jacobian pair for one of the nonlinear models, in the exact
// parameterization the solver iterates on. Exposed so analytic gradients
// can be checked against finite differences and model curves re-evaluated
// at fitted or trial parameters.
struct ModelFunctions {
    ResidualFn residual;
    JacobianFn jacobian;
};

// Complex transmission model over p = (f_r, Q_l, |Q_c|, phi, a, alpha, tau)
// with residual rows alternating real/imaginary parts per trace point.
ModelFunctions transmission_model(FrequencyTrace trace);

// Arctangent phase model over p = (f_r, Q_l, theta0).
ModelFunctions phase_model(std::vector<double> freqs_hz,
                           std::vector<double> unwrapped_phase_rad);

// Saturation model over u = (ln F_delta0, ln delta_other, ln n_c[, logit
// beta]); the beta coordinate exists only when cfg.beta_free. Residuals are
// weighted by 1/sigma when every sigma is positive and cfg selects
// inverse-variance weighting.
ModelFunctions saturation_model(const std::vector<PowerSweepPoint>& sweep, double f_hz,
                                double temperature_k, const FitConfig& cfg = {});

struct ResonanceUncertainty {
    // 1-sigma, ordered (f_r, Q_l, |Q_c|, phi, a, alpha, tau).
    std::array<double, 7> sigma{};
    double sigma_delta_i = 0.0;
    double sigma_q_i = 0.0;
};

struct TLSUncertainty {
    // 1-sigma, ordered (f_delta0_tls, delta_other, n_c, beta).
    std::array<double, 4> sigma{};
    double sigma_delta_lp = 0.0;
    double sigma_q_max = 0.0;
};

// First-order (delta-method) propagation from the fit covariance to the
// derived loss quantities.
ResonanceUncertainty propagate_uncertainty(const FitResult& fit);
TLSUncertainty propagate_uncertainty(const TLSFit& fit);

}  // namespace qloss
