#include "qloss/fit.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <vector>

#include "qloss/errors.hpp"
#include "qloss/model.hpp"

namespace qloss {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double median(std::vector<double> values) {
    const std::size_t n = values.size();
    auto mid = values.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(values.begin(), mid, values.end());
    if (n % 2 == 1) {
        return *mid;
    }
    const double upper = *mid;
    const double lower = *std::max_element(values.begin(), mid);
    return 0.5 * (lower + upper);
}

// Least-squares slope of y vs x together with sum((x - mean_x)^2), the
// weight an optimal combination of independent slope estimates needs.
std::pair<double, double> line_slope(const std::vector<double>& x,
                                     const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        mean_x += x[k];
        mean_y += y[k];
    }
    mean_x /= n;
    mean_y /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxx += (x[k] - mean_x) * (x[k] - mean_x);
        sxy += (x[k] - mean_x) * (y[k] - mean_y);
    }
    if (!(sxx > 0.0)) {
        throw DegenerateGeometry("wing frequencies do not span a range");
    }
    return {sxy / sxx, sxx};
}

}  // namespace

std::vector<double> unwrap_phase(const std::vector<double>& wrapped_rad) {
    std::vector<double> out;
    out.reserve(wrapped_rad.size());
    double offset = 0.0;
    for (std::size_t k = 0; k < wrapped_rad.size(); ++k) {
        if (k > 0) {
            const double jump = wrapped_rad[k] - wrapped_rad[k - 1];
            if (jump > std::numbers::pi) {
                offset -= kTwoPi;
            } else if (jump < -std::numbers::pi) {
                offset += kTwoPi;
            }
        }
        out.push_back(wrapped_rad[k] + offset);
    }
    return out;
}

BackgroundModel estimate_background(const FrequencyTrace& trace, const FitConfig& cfg) {
    validate(cfg);
    const std::size_t n = trace.points.size();
    const std::size_t wing = static_cast<std::size_t>(cfg.wing_fraction * static_cast<double>(n));
    if (wing < 4) {
        throw InsufficientWings("sweep edges hold fewer than 4 points each at wing_fraction " +
                                std::to_string(cfg.wing_fraction));
    }

    std::vector<std::size_t> left(wing);
    std::vector<std::size_t> right(wing);
    for (std::size_t k = 0; k < wing; ++k) {
        left[k] = k;
        right[k] = n - wing + k;
    }

    std::vector<double> magnitudes;
    magnitudes.reserve(2 * wing);
    for (const auto& idx : {left, right}) {
        for (std::size_t k : idx) {
            magnitudes.push_back(std::abs(trace.points[k].s21));
        }
    }
    const double amplitude = median(std::move(magnitudes));
    if (!(amplitude > 0.0)) {
        throw DegenerateGeometry("wing magnitudes are zero; no background level");
    }

    // Cable delay: each wing is unwrapped locally (no resonance inside a
    // wing), so the fitted slopes are immune to phase jumps across the dip.
    double slope_sum = 0.0;
    double weight_sum = 0.0;
    for (const auto& idx : {left, right}) {
        std::vector<double> freqs;
        std::vector<double> phases;
        freqs.reserve(idx.size());
        phases.reserve(idx.size());
        for (std::size_t k : idx) {
            freqs.push_back(trace.points[k].frequency_hz);
            phases.push_back(std::arg(trace.points[k].s21));
        }
        phases = unwrap_phase(phases);
        const auto [slope, weight] = line_slope(freqs, phases);
        slope_sum += slope * weight;
        weight_sum += weight;
    }
    const double delay = -slope_sum / weight_sum / kTwoPi;

    // Phase offset: circular mean of the delay-corrected wing phases, i.e.
    // the intercept of the wing phase line evaluated without branch cuts.
    Complex accum = 0.0;
    for (const auto& idx : {left, right}) {
        for (std::size_t k : idx) {
            const double corrected =
                std::arg(trace.points[k].s21) + kTwoPi * trace.points[k].frequency_hz * delay;
            accum += std::polar(1.0, corrected);
        }
    }
    if (std::abs(accum) == 0.0) {
        throw DegenerateGeometry("wing phases cancel; phase offset undetermined");
    }

    BackgroundModel bg;
    bg.amplitude = amplitude;
    bg.phase_offset_rad = std::arg(accum);
    bg.cable_delay_s = delay;
    return bg;
}

namespace {

// Arctangent phase lineshape and its derivatives with respect to
// p = (f_r, Q_l, theta0).
struct PhaseModel {
    std::vector<double> freqs;
    std::vector<double> theta;

    Eigen::VectorXd residual(const Eigen::VectorXd& p) const {
        Eigen::VectorXd r(static_cast<Eigen::Index>(freqs.size()));
        for (std::size_t k = 0; k < freqs.size(); ++k) {
            const double u = 2.0 * p[1] * (1.0 - freqs[k] / p[0]);
            r[static_cast<Eigen::Index>(k)] = p[2] + 2.0 * std::atan(u) - theta[k];
        }
        return r;
    }

    Eigen::MatrixXd jacobian(const Eigen::VectorXd& p) const {
        Eigen::MatrixXd j(static_cast<Eigen::Index>(freqs.size()), 3);
        for (std::size_t k = 0; k < freqs.size(); ++k) {
            const double ratio = freqs[k] / p[0];
            const double u = 2.0 * p[1] * (1.0 - ratio);
            const double gain = 1.0 / (1.0 + u * u);
            const auto row = static_cast<Eigen::Index>(k);
            j(row, 0) = 4.0 * p[1] * freqs[k] / (p[0] * p[0]) * gain;
            j(row, 1) = 4.0 * (1.0 - ratio) * gain;
            j(row, 2) = 1.0;
        }
        return j;
    }
};

}  // namespace

PhaseFitResult phase_fit(const std::vector<double>& freqs_hz,
                         const std::vector<double>& unwrapped_phase_rad,
                         const FitConfig& cfg) {
    if (freqs_hz.size() != unwrapped_phase_rad.size() || freqs_hz.size() < 5) {
        throw ValidationError("phase fit needs matching frequency/phase arrays (>= 5 points)");
    }
    const auto [lo, hi] =
        std::minmax_element(unwrapped_phase_rad.begin(), unwrapped_phase_rad.end());
    if (*hi - *lo < std::numbers::pi / 2.0) {
        throw NoResonance("phase winding below pi/2; no resonance crossing in the sweep");
    }

    // Steepest-descent point of the phase seeds f_r; the slope there is
    // -4 Q_l / f_r for this lineshape.
    const std::size_t n = freqs_hz.size();
    std::size_t steepest = 1;
    double steepest_slope = 0.0;
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const double df = freqs_hz[k + 1] - freqs_hz[k - 1];
        const double slope = (unwrapped_phase_rad[k + 1] - unwrapped_phase_rad[k - 1]) / df;
        if (std::abs(slope) > std::abs(steepest_slope)) {
            steepest_slope = slope;
            steepest = k;
        }
    }
    const double f_r0 = freqs_hz[steepest];
    const double q_l0 = std::max(std::abs(steepest_slope) * f_r0 / 4.0,
                                 f_r0 / (freqs_hz.back() - freqs_hz.front()));
    const double theta00 = unwrapped_phase_rad[steepest];

    const PhaseModel model{freqs_hz, unwrapped_phase_rad};
    Eigen::VectorXd init(3);
    init << f_r0, q_l0, theta00;
    const LMResult lm = lm_minimize(
        [&](const Eigen::VectorXd& p) { return model.residual(p); }, init, cfg,
        [&](const Eigen::VectorXd& p) { return model.jacobian(p); });

    PhaseFitResult out;
    out.f_r_hz = lm.solution[0];
    out.q_loaded = lm.solution[1];
    out.theta0_rad = lm.solution[2];
    out.converged = lm.diagnostics.converged;
    if (!(out.f_r_hz > 0.0) || !(out.q_loaded > 0.0)) {
        throw NoResonance("phase fit collapsed to a non-physical resonance");
    }
    return out;
}

namespace {

// Complex transmission model and its analytic derivatives with respect to
// p = (f_r, Q_l, |Q_c|, phi, a, alpha, tau), stacked as alternating
// real/imaginary residual rows.
struct TransmissionModel {
    const FrequencyTrace& trace;

    Eigen::VectorXd residual(const Eigen::VectorXd& p) const {
        const std::size_t n = trace.points.size();
        Eigen::VectorXd r(static_cast<Eigen::Index>(2 * n));
        const ResonanceParams res{p[0], p[1], p[2], p[3]};
        const BackgroundModel bg{p[4], p[5], p[6]};
        for (std::size_t k = 0; k < n; ++k) {
            const Complex diff =
                s21_forward(trace.points[k].frequency_hz, res, bg) - trace.points[k].s21;
            r[static_cast<Eigen::Index>(2 * k)] = diff.real();
            r[static_cast<Eigen::Index>(2 * k + 1)] = diff.imag();
        }
        return r;
    }

    Eigen::MatrixXd jacobian(const Eigen::VectorXd& p) const {
        const std::size_t n = trace.points.size();
        Eigen::MatrixXd j(static_cast<Eigen::Index>(2 * n), 7);
        const double f_r = p[0];
        const double q_l = p[1];
        const double q_c = p[2];
        const Complex asym = std::polar(q_l / q_c, p[3]);
        for (std::size_t k = 0; k < n; ++k) {
            const double f = trace.points[k].frequency_hz;
            const Complex bg =
                p[4] * std::polar(1.0, p[5] - kTwoPi * f * p[6]);
            const double x = f / f_r - 1.0;
            const Complex denom(1.0, 2.0 * q_l * x);
            const Complex dip = asym / denom;
            const Complex model = bg * (1.0 - dip);

            std::array<Complex, 7> d;
            d[0] = -bg * dip * Complex(0.0, 2.0 * q_l * f / (f_r * f_r)) / denom;
            d[1] = -bg * dip * (1.0 / q_l - Complex(0.0, 2.0 * x) / denom);
            d[2] = bg * dip / q_c;
            d[3] = -bg * dip * Complex(0.0, 1.0);
            d[4] = model / p[4];
            d[5] = model * Complex(0.0, 1.0);
            d[6] = model * Complex(0.0, -kTwoPi * f);
            for (int col = 0; col < 7; ++col) {
                j(static_cast<Eigen::Index>(2 * k), col) = d[col].real();
                j(static_cast<Eigen::Index>(2 * k + 1), col) = d[col].imag();
            }
        }
        return j;
    }
};

}  // namespace

FitResult fit_resonance(const FrequencyTrace& trace, const FitConfig& cfg) {
    validate(cfg);
    validate_for_fit(trace);

    const BackgroundModel bg0 = estimate_background(trace, cfg);

    // Remove the background estimate and fit the resonance circle.
    std::vector<Complex> normalized;
    normalized.reserve(trace.points.size());
    for (const TracePoint& pt : trace.points) {
        const Complex bg =
            bg0.amplitude *
            std::polar(1.0, bg0.phase_offset_rad - kTwoPi * pt.frequency_hz * bg0.cable_delay_s);
        normalized.push_back(pt.s21 / bg);
    }
    Circle circle;
    try {
        circle = circle_fit(normalized);
    } catch (const DegenerateGeometry& err) {
        throw NoResonance(std::string("no resonance circle in the data: ") + err.what());
    }

    // Phase of the data as seen from the circle center winds by 2*pi across
    // a resonance; fit the arctangent model to seed f_r, Q_l and phi.
    std::vector<double> freqs;
    std::vector<double> phases;
    freqs.reserve(normalized.size());
    phases.reserve(normalized.size());
    for (std::size_t k = 0; k < normalized.size(); ++k) {
        freqs.push_back(trace.points[k].frequency_hz);
        phases.push_back(std::arg(normalized[k] - circle.center));
    }
    phases = unwrap_phase(phases);
    const PhaseFitResult phase = phase_fit(freqs, phases, cfg);

    // The resonance sits diametrically opposite the off-resonant point, so
    // the center-frame phase at resonance fixes the asymmetry angle.
    const double phi0 = wrap_angle(phase.theta0_rad - std::numbers::pi);
    const double qc0 = phase.q_loaded / (2.0 * circle.radius);

    Eigen::VectorXd init(7);
    init << phase.f_r_hz, phase.q_loaded, qc0, phi0, bg0.amplitude, bg0.phase_offset_rad,
        bg0.cable_delay_s;

    const TransmissionModel model{trace};
    const LMResult lm = lm_minimize(
        [&](const Eigen::VectorXd& p) { return model.residual(p); }, init, cfg,
        [&](const Eigen::VectorXd& p) { return model.jacobian(p); });

    Eigen::VectorXd sol = lm.solution;
    if (sol[4] < 0.0) {  // amplitude sign is absorbed into the phase offset
        sol[4] = -sol[4];
        sol[5] += std::numbers::pi;
    }
    sol[5] = wrap_angle(sol[5]);
    sol[3] = wrap_angle(sol[3]);

    if (!(sol[0] > 0.0) || !(sol[1] > 0.0) || !(sol[2] > 0.0) || !(sol[4] > 0.0)) {
        throw NonPhysicalFit("fit produced non-positive resonance parameters");
    }
    if (std::abs(sol[3]) >= std::numbers::pi / 2.0) {
        throw NonPhysicalFit("asymmetry angle outside (-pi/2, pi/2)");
    }

    FitResult out;
    out.params = ResonanceParams{sol[0], sol[1], sol[2], sol[3]};
    out.background = BackgroundModel{sol[4], sol[5], sol[6]};
    out.covariance = lm.covariance;
    out.residual_norm = lm.diagnostics.residual_norm;
    out.converged = lm.diagnostics.converged;
    out.singular_normal_matrix = lm.diagnostics.singular_normal_matrix;
    out.iterations = lm.diagnostics.iterations;
    const InternalLoss loss = internal_loss(out.params);  // throws NonPhysicalFit
    out.delta_i = loss.delta_i;
    out.q_i = loss.q_i;
    return out;
}

namespace {

struct SaturationDesign {
    bool fit_nc = false;
    bool fit_beta = false;
    double fixed_beta = 1.0;
    double fixed_nc = 0.0;
    double thermal = 1.0;
    std::vector<double> n;
    std::vector<double> delta;
    std::vector<double> weight;

    // Free-parameter layout: (ln F, ln delta_other [, ln n_c][, logit beta]).
    int size() const { return 2 + (fit_nc ? 1 : 0) + (fit_beta ? 1 : 0); }

    struct Params {
        double f_delta0 = 0.0;
        double delta_other = 0.0;
        double n_c = 0.0;
        double beta = 0.0;
    };

    Params unpack(const Eigen::VectorXd& u) const {
        Params p;
        p.f_delta0 = std::exp(u[0]);
        p.delta_other = std::exp(u[1]);
        p.n_c = fit_nc ? std::exp(u[2]) : fixed_nc;
        p.beta = fit_beta ? 2.0 / (1.0 + std::exp(-u[fit_nc ? 3 : 2])) : fixed_beta;
        return p;
    }

    Eigen::VectorXd residual(const Eigen::VectorXd& u) const {
        const Params p = unpack(u);
        Eigen::VectorXd r(static_cast<Eigen::Index>(n.size()));
        for (std::size_t k = 0; k < n.size(); ++k) {
            const double sat = std::pow(1.0 + n[k] / p.n_c, -0.5 * p.beta);
            const double model = thermal * p.f_delta0 * sat + p.delta_other;
            r[static_cast<Eigen::Index>(k)] = (model - delta[k]) * weight[k];
        }
        return r;
    }

    Eigen::MatrixXd jacobian(const Eigen::VectorXd& u) const {
        const Params p = unpack(u);
        Eigen::MatrixXd j(static_cast<Eigen::Index>(n.size()), size());
        for (std::size_t k = 0; k < n.size(); ++k) {
            const double frac = n[k] / p.n_c;
            const double sat = std::pow(1.0 + frac, -0.5 * p.beta);
            const double tls = thermal * p.f_delta0 * sat;
            const auto row = static_cast<Eigen::Index>(k);
            j(row, 0) = tls * weight[k];
            j(row, 1) = p.delta_other * weight[k];
            int col = 2;
            if (fit_nc) {
                j(row, col++) = tls * 0.5 * p.beta * frac / (1.0 + frac) * weight[k];
            }
            if (fit_beta) {
                const double dbeta_du = 0.5 * p.beta * (2.0 - p.beta);
                j(row, col) = -tls * 0.5 * std::log1p(frac) * dbeta_du * weight[k];
            }
        }
        return j;
    }
};

}  // namespace

TLSFit fit_power_sweep(const std::vector<PowerSweepPoint>& sweep, double f_hz,
                       double temperature_k, const FitConfig& cfg) {
    validate(cfg);
    if (sweep.size() < 6) {
        throw InsufficientData("power sweep has fewer than 6 points");
    }
    for (const PowerSweepPoint& pt : sweep) {
        validate(pt);
    }
    std::vector<PowerSweepPoint> pts = sweep;
    std::sort(pts.begin(), pts.end(), [](const PowerSweepPoint& a, const PowerSweepPoint& b) {
        return a.photon_number < b.photon_number;
    });
    const double n_min = pts.front().photon_number;
    const double n_max = pts.back().photon_number;
    if (n_max < 100.0 * n_min) {
        throw InsufficientData("power sweep spans fewer than 2 decades in photon number");
    }

    const bool have_sigmas = std::all_of(pts.begin(), pts.end(),
                                         [](const PowerSweepPoint& p) { return p.sigma > 0.0; });
    const bool weighted =
        have_sigmas && cfg.weighting == FitConfig::Weighting::kInverseVariance;

    SaturationDesign design;
    design.thermal = tls_thermal_factor(f_hz, temperature_k);
    design.n.reserve(pts.size());
    design.delta.reserve(pts.size());
    design.weight.reserve(pts.size());
    for (const PowerSweepPoint& pt : pts) {
        design.n.push_back(pt.photon_number);
        design.delta.push_back(pt.delta_i);
        design.weight.push_back(weighted ? 1.0 / pt.sigma : 1.0);
    }

    // Low-power plateau level and a per-point noise scale for the
    // saturation-visibility test.
    std::vector<double> low;
    double plateau_num = 0.0;
    double plateau_den = 0.0;
    for (const PowerSweepPoint& pt : pts) {
        if (pt.photon_number <= n_min * std::sqrt(10.0)) {
            const double w = weighted ? 1.0 / (pt.sigma * pt.sigma) : 1.0;
            plateau_num += w * pt.delta_i;
            plateau_den += w;
            low.push_back(pt.delta_i);
        }
    }
    const double plateau = plateau_num / plateau_den;
    double scatter = 0.0;
    if (!have_sigmas) {
        std::vector<double> dev;
        const double low_median = median(low);
        dev.reserve(low.size());
        for (double d : low) {
            dev.push_back(std::abs(d - low_median));
        }
        scatter = std::max(1.4826 * median(std::move(dev)), 1e-9 * plateau);
    }
    bool departed = false;
    for (const PowerSweepPoint& pt : pts) {
        const double sigma = have_sigmas ? pt.sigma : scatter;
        if (plateau - pt.delta_i > 3.0 * sigma) {
            departed = true;
            break;
        }
    }

    design.fit_nc = departed;
    design.fit_beta = departed && cfg.beta_free;
    design.fixed_beta = cfg.beta_free ? 1.0 : cfg.beta_fixed;
    design.fixed_nc = n_max;

    // Initial guesses from the sweep ends.
    double high_sum = 0.0;
    int high_count = 0;
    for (const PowerSweepPoint& pt : pts) {
        if (pt.photon_number >= n_max / std::sqrt(10.0)) {
            high_sum += pt.delta_i;
            ++high_count;
        }
    }
    const double delta_high = high_sum / high_count;
    const double delta_other0 = std::max(0.9 * delta_high, 1e-6 * plateau);
    const double f0 =
        std::max((plateau - delta_other0) / design.thermal, 1e-3 * plateau / design.thermal);
    const double beta0 = design.fixed_beta;
    double nc0 = std::sqrt(n_min * n_max);
    if (departed) {
        const double target = delta_other0 + (plateau - delta_other0) * std::pow(2.0, -0.5 * beta0);
        for (std::size_t k = 1; k < pts.size(); ++k) {
            if (pts[k].delta_i <= target) {
                nc0 = std::clamp(pts[k].photon_number, n_min, n_max);
                break;
            }
        }
    }

    Eigen::VectorXd init(design.size());
    init[0] = std::log(f0);
    init[1] = std::log(delta_other0);
    if (design.fit_nc) {
        init[2] = std::log(nc0);
    }
    if (design.fit_beta) {
        init[design.fit_nc ? 3 : 2] = 0.0;  // logistic midpoint: beta = 1
    }

    const LMResult lm = lm_minimize(
        [&](const Eigen::VectorXd& u) { return design.residual(u); }, init, cfg,
        [&](const Eigen::VectorXd& u) { return design.jacobian(u); });
    const SaturationDesign::Params fitted = design.unpack(lm.solution);

    TLSFit out;
    out.params.f_delta0_tls = fitted.f_delta0;
    out.params.delta_other = fitted.delta_other;
    out.params.n_c = fitted.n_c;
    out.params.beta = fitted.beta;
    out.params.f_hz = f_hz;
    out.params.t_k = temperature_k;
    validate(out.params);
    out.delta_lp = tls_loss(0.0, out.params);
    out.q_max = 1.0 / fitted.delta_other;
    out.residual_norm = lm.diagnostics.residual_norm;
    out.converged = lm.diagnostics.converged;
    out.singular_normal_matrix = lm.diagnostics.singular_normal_matrix;
    out.nc_is_lower_bound = !departed;
    out.iterations = lm.diagnostics.iterations;

    // Covariance back in natural units. With known 1-sigma weights the
    // whitened normal matrix is used as-is; with uniform weights it is
    // scaled by the residual variance.
    const Eigen::MatrixXd cov_u = weighted ? lm.normal_inverse : lm.covariance;
    Eigen::VectorXd chain(design.size());
    chain[0] = fitted.f_delta0;
    chain[1] = fitted.delta_other;
    if (design.fit_nc) {
        chain[2] = fitted.n_c;
    }
    if (design.fit_beta) {
        chain[design.fit_nc ? 3 : 2] = 0.5 * fitted.beta * (2.0 - fitted.beta);
    }
    const Eigen::MatrixXd cov_nat = chain.asDiagonal() * cov_u * chain.asDiagonal();

    std::vector<int> slots = {0, 1};
    if (design.fit_nc) {
        slots.push_back(2);
    }
    if (design.fit_beta) {
        slots.push_back(3);
    }
    for (std::size_t r = 0; r < slots.size(); ++r) {
        for (std::size_t c = 0; c < slots.size(); ++c) {
            out.covariance(slots[r], slots[c]) =
                cov_nat(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
        }
    }
    return out;
}

ModelFunctions transmission_model(FrequencyTrace trace) {
    auto shared = std::make_shared<const FrequencyTrace>(std::move(trace));
    ModelFunctions out;
    out.residual = [shared](const Eigen::VectorXd& p) {
        return TransmissionModel{*shared}.residual(p);
    };
    out.jacobian = [shared](const Eigen::VectorXd& p) {
        return TransmissionModel{*shared}.jacobian(p);
    };
    return out;
}

ModelFunctions phase_model(std::vector<double> freqs_hz,
                           std::vector<double> unwrapped_phase_rad) {
    auto shared = std::make_shared<const PhaseModel>(
        PhaseModel{std::move(freqs_hz), std::move(unwrapped_phase_rad)});
    ModelFunctions out;
    out.residual = [shared](const Eigen::VectorXd& p) { return shared->residual(p); };
    out.jacobian = [shared](const Eigen::VectorXd& p) { return shared->jacobian(p); };
    return out;
}

ModelFunctions saturation_model(const std::vector<PowerSweepPoint>& sweep, double f_hz,
                                double temperature_k, const FitConfig& cfg) {
    validate(cfg);
    validate(sweep);
    const bool weighted =
        cfg.weighting == FitConfig::Weighting::kInverseVariance &&
        std::all_of(sweep.begin(), sweep.end(),
                    [](const PowerSweepPoint& p) { return p.sigma > 0.0; });

    SaturationDesign design;
    design.fit_nc = true;
    design.fit_beta = cfg.beta_free;
    design.fixed_beta = cfg.beta_free ? 1.0 : cfg.beta_fixed;
    design.thermal = tls_thermal_factor(f_hz, temperature_k);
    for (const PowerSweepPoint& pt : sweep) {
        design.n.push_back(pt.photon_number);
        design.delta.push_back(pt.delta_i);
        design.weight.push_back(weighted ? 1.0 / pt.sigma : 1.0);
    }

    auto shared = std::make_shared<const SaturationDesign>(std::move(design));
    ModelFunctions out;
    out.residual = [shared](const Eigen::VectorXd& u) { return shared->residual(u); };
    out.jacobian = [shared](const Eigen::VectorXd& u) { return shared->jacobian(u); };
    return out;
}

ResonanceUncertainty propagate_uncertainty(const FitResult& fit) {
    ResonanceUncertainty out;
    for (int k = 0; k < 7; ++k) {
        out.sigma[static_cast<std::size_t>(k)] = std::sqrt(std::max(fit.covariance(k, k), 0.0));
    }
    // delta_i = 1/Q_l - cos(phi)/|Q_c|: gradient in the fit ordering.
    const double q_l = fit.params.q_loaded;
    const double q_c = fit.params.qc_mag;
    const double phi = fit.params.phi_rad;
    Eigen::Matrix<double, 7, 1> grad = Eigen::Matrix<double, 7, 1>::Zero();
    grad[1] = -1.0 / (q_l * q_l);
    grad[2] = std::cos(phi) / (q_c * q_c);
    grad[3] = std::sin(phi) / q_c;
    const double var = grad.dot(fit.covariance * grad);
    out.sigma_delta_i = std::sqrt(std::max(var, 0.0));
    out.sigma_q_i = out.sigma_delta_i / (fit.delta_i * fit.delta_i);
    return out;
}

TLSUncertainty propagate_uncertainty(const TLSFit& fit) {
    TLSUncertainty out;
    for (int k = 0; k < 4; ++k) {
        out.sigma[static_cast<std::size_t>(k)] = std::sqrt(std::max(fit.covariance(k, k), 0.0));
    }
    // delta_lp = thermal * F_delta0 + delta_other.
    const double thermal = tls_thermal_factor(fit.params.f_hz, fit.params.t_k);
    Eigen::Matrix<double, 4, 1> grad = Eigen::Matrix<double, 4, 1>::Zero();
    grad[0] = thermal;
    grad[1] = 1.0;
    const double var = grad.dot(fit.covariance * grad);
    out.sigma_delta_lp = std::sqrt(std::max(var, 0.0));
    out.sigma_q_max = out.sigma[1] / (fit.params.delta_other * fit.params.delta_other);
    return out;
}

}  // namespace qloss
