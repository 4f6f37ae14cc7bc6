#include "qloss/report.hpp"

#include <cstdio>

namespace qloss {

namespace {

constexpr int kSchemaVersion = 1;

Json matrix_to_json(const Eigen::MatrixXd& m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back(m(r, c));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

template <typename Matrix>
void matrix_from_json(const Json& rows, Matrix& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            m(r, c) = rows.at(static_cast<std::size_t>(r)).at(static_cast<std::size_t>(c))
                          .template get<double>();
        }
    }
}

std::string csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

Json fit_report(const FitResult& fit, const std::string& label) {
    const ResonanceUncertainty unc = propagate_uncertainty(fit);
    Json node;
    node["schema_version"] = kSchemaVersion;
    node["kind"] = "resonance_fit";
    node["label"] = label;
    node["f_r_hz"] = fit.params.f_r_hz;
    node["q_loaded"] = fit.params.q_loaded;
    node["qc_mag"] = fit.params.qc_mag;
    node["phi_rad"] = fit.params.phi_rad;
    node["amplitude"] = fit.background.amplitude;
    node["phase_offset_rad"] = fit.background.phase_offset_rad;
    node["cable_delay_s"] = fit.background.cable_delay_s;
    node["delta_i"] = fit.delta_i;
    node["q_i"] = fit.q_i;
    Json sigma;
    sigma["f_r_hz"] = unc.sigma[0];
    sigma["q_loaded"] = unc.sigma[1];
    sigma["qc_mag"] = unc.sigma[2];
    sigma["phi_rad"] = unc.sigma[3];
    sigma["amplitude"] = unc.sigma[4];
    sigma["phase_offset_rad"] = unc.sigma[5];
    sigma["cable_delay_s"] = unc.sigma[6];
    sigma["delta_i"] = unc.sigma_delta_i;
    sigma["q_i"] = unc.sigma_q_i;
    node["sigma"] = std::move(sigma);
    node["covariance"] = matrix_to_json(fit.covariance);
    node["residual_norm"] = fit.residual_norm;
    node["converged"] = fit.converged;
    node["singular_normal_matrix"] = fit.singular_normal_matrix;
    node["iterations"] = fit.iterations;
    return node;
}

FitResult fit_result_from_report(const Json& node) {
    FitResult fit;
    fit.params.f_r_hz = node.at("f_r_hz").get<double>();
    fit.params.q_loaded = node.at("q_loaded").get<double>();
    fit.params.qc_mag = node.at("qc_mag").get<double>();
    fit.params.phi_rad = node.at("phi_rad").get<double>();
    fit.background.amplitude = node.at("amplitude").get<double>();
    fit.background.phase_offset_rad = node.at("phase_offset_rad").get<double>();
    fit.background.cable_delay_s = node.at("cable_delay_s").get<double>();
    fit.delta_i = node.at("delta_i").get<double>();
    fit.q_i = node.at("q_i").get<double>();
    matrix_from_json(node.at("covariance"), fit.covariance);
    fit.residual_norm = node.at("residual_norm").get<double>();
    fit.converged = node.at("converged").get<bool>();
    fit.singular_normal_matrix = node.at("singular_normal_matrix").get<bool>();
    fit.iterations = node.at("iterations").get<int>();
    return fit;
}

Json tls_report(const TLSFit& fit, const std::string& label) {
    const TLSUncertainty unc = propagate_uncertainty(fit);
    Json node;
    node["schema_version"] = kSchemaVersion;
    node["kind"] = "tls_fit";
    node["label"] = label;
    node["f_hz"] = fit.params.f_hz;
    node["temperature_k"] = fit.params.t_k;
    node["f_delta0_tls"] = fit.params.f_delta0_tls;
    node["delta_other"] = fit.params.delta_other;
    node["n_c"] = fit.params.n_c;
    node["beta"] = fit.params.beta;
    node["delta_lp"] = fit.delta_lp;
    node["q_max"] = fit.q_max;
    Json sigma;
    sigma["f_delta0_tls"] = unc.sigma[0];
    sigma["delta_other"] = unc.sigma[1];
    sigma["n_c"] = unc.sigma[2];
    sigma["beta"] = unc.sigma[3];
    sigma["delta_lp"] = unc.sigma_delta_lp;
    sigma["q_max"] = unc.sigma_q_max;
    node["sigma"] = std::move(sigma);
    node["covariance"] = matrix_to_json(fit.covariance);
    node["residual_norm"] = fit.residual_norm;
    node["converged"] = fit.converged;
    node["singular_normal_matrix"] = fit.singular_normal_matrix;
    node["nc_is_lower_bound"] = fit.nc_is_lower_bound;
    node["iterations"] = fit.iterations;
    return node;
}

TLSFit tls_fit_from_report(const Json& node) {
    TLSFit fit;
    fit.params.f_hz = node.at("f_hz").get<double>();
    fit.params.t_k = node.at("temperature_k").get<double>();
    fit.params.f_delta0_tls = node.at("f_delta0_tls").get<double>();
    fit.params.delta_other = node.at("delta_other").get<double>();
    fit.params.n_c = node.at("n_c").get<double>();
    fit.params.beta = node.at("beta").get<double>();
    fit.delta_lp = node.at("delta_lp").get<double>();
    fit.q_max = node.at("q_max").get<double>();
    matrix_from_json(node.at("covariance"), fit.covariance);
    fit.residual_norm = node.at("residual_norm").get<double>();
    fit.converged = node.at("converged").get<bool>();
    fit.singular_normal_matrix = node.at("singular_normal_matrix").get<bool>();
    fit.nc_is_lower_bound = node.at("nc_is_lower_bound").get<bool>();
    fit.iterations = node.at("iterations").get<int>();
    return fit;
}

Json design_report_json(const DesignReport& report) {
    Json node;
    node["schema_version"] = kSchemaVersion;
    node["kind"] = "design_report";
    node["p_required_for_ceiling"] = report.p_required_for_ceiling;
    node["feasible_count"] = report.feasible_count;
    Json list = Json::array();
    for (const DesignCandidate& cand : report.candidates) {
        Json c;
        c["f_r_hz"] = cand.design.f_r_hz;
        c["inductance_h"] = cand.design.inductance_h;
        c["c_shunt_f"] = cand.design.c_shunt_f;
        c["c_ppc_f"] = cand.design.c_ppc_f;
        c["thickness_m"] = cand.design.thickness_m;
        c["eps_r"] = cand.design.eps_r;
        c["area_m2"] = cand.design.area_m2;
        c["disc_radius_m"] = cand.design.disc_radius_m;
        c["participation"] = cand.design.participation;
        c["inductor_loss_bound"] = cand.design.inductor_loss_bound;
        c["misattribution_additive"] = cand.misattribution.additive;
        c["misattribution_relative"] = cand.misattribution.relative;
        c["reachable"] = cand.reachable;
        c["meets_participation"] = cand.meets_participation;
        c["meets_misattribution"] = cand.meets_misattribution;
        c["feasible"] = cand.feasible;
        list.push_back(std::move(c));
    }
    node["candidates"] = std::move(list);
    return node;
}

std::string render_json(const Json& node) {
    return node.dump(2) + "\n";
}

std::string fit_report_csv(const std::vector<std::pair<std::string, FitResult>>& fits) {
    std::string out =
        "label,f_r_hz,sigma_f_r_hz,q_loaded,qc_mag,phi_rad,q_i,sigma_q_i,delta_i,"
        "sigma_delta_i,amplitude,phase_offset_rad,cable_delay_s,residual_norm,converged\n";
    for (const auto& [label, fit] : fits) {
        const ResonanceUncertainty unc = propagate_uncertainty(fit);
        out += label;
        for (double v : {fit.params.f_r_hz, unc.sigma[0], fit.params.q_loaded, fit.params.qc_mag,
                         fit.params.phi_rad, fit.q_i, unc.sigma_q_i, fit.delta_i,
                         unc.sigma_delta_i, fit.background.amplitude,
                         fit.background.phase_offset_rad, fit.background.cable_delay_s,
                         fit.residual_norm}) {
            out += ',';
            out += csv_number(v);
        }
        out += fit.converged ? ",true\n" : ",false\n";
    }
    return out;
}

std::string tls_report_csv(const std::vector<std::pair<std::string, TLSFit>>& fits) {
    std::string out =
        "label,delta_lp,sigma_delta_lp,f_delta0_tls,sigma_f_delta0_tls,delta_other,"
        "sigma_delta_other,q_max,sigma_q_max,n_c,sigma_n_c,beta,sigma_beta,converged,"
        "nc_is_lower_bound\n";
    for (const auto& [label, fit] : fits) {
        const TLSUncertainty unc = propagate_uncertainty(fit);
        out += label;
        for (double v : {fit.delta_lp, unc.sigma_delta_lp, fit.params.f_delta0_tls, unc.sigma[0],
                         fit.params.delta_other, unc.sigma[1], fit.q_max, unc.sigma_q_max,
                         fit.params.n_c, unc.sigma[2], fit.params.beta, unc.sigma[3]}) {
            out += ',';
            out += csv_number(v);
        }
        out += fit.converged ? ",true" : ",false";
        out += fit.nc_is_lower_bound ? ",true\n" : ",false\n";
    }
    return out;
}

std::string design_report_csv(const DesignReport& report) {
    std::string out =
        "f_r_hz,c_ppc_f,area_m2,disc_radius_m,participation,misattribution_relative,feasible\n";
    for (const DesignCandidate& cand : report.candidates) {
        for (double v : {cand.design.f_r_hz, cand.design.c_ppc_f, cand.design.area_m2,
                         cand.design.disc_radius_m, cand.design.participation,
                         cand.misattribution.relative}) {
            out += csv_number(v);
            out += ',';
        }
        out += cand.feasible ? "true\n" : "false\n";
    }
    return out;
}

}  // namespace qloss
