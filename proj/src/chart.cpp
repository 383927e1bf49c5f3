#include "eigenmpc/chart.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "eigenmpc/modes.hpp"

namespace eigenmpc {

namespace {

double poly_eval(const Vec& coeffs, double t) {
    double v = 0.0;
    for (int i = static_cast<int>(coeffs.size()) - 1; i >= 0; --i) v = v * t + coeffs[i];
    return v;
}

Vec poly_derivative(const Vec& coeffs) {
    if (coeffs.size() <= 1) return Vec::Zero(1);
    Vec d(coeffs.size() - 1);
    for (int i = 1; i < coeffs.size(); ++i) d[i - 1] = i * coeffs[i];
    return d;
}

}  // namespace

Vec ModeChart::position(double xm) const {
    Vec x(dim());
    for (int j = 0; j < dim(); ++j) x[j] = poly_eval(coeffs[j], xm);
    return x;
}

Vec ModeChart::position_derivative(double xm) const {
    Vec d(dim());
    for (int j = 0; j < dim(); ++j) d[j] = poly_eval(poly_derivative(coeffs[j]), xm);
    return d;
}

Vec ModeChart::tangent(double xm) const {
    const Vec d = position_derivative(xm);
    const double norm = d.norm();
    if (norm < 1e-14) throw FitError("degenerate chart tangent");
    return d / norm;
}

Mat ModeChart::perp_projector(double xm) const { return projector_c_perp(tangent(xm)); }

Mat projector_c_perp(const Vec& c) {
    if (std::abs(c.norm() - 1.0) > 1e-9)
        throw ConfigError("projector_c_perp requires a unit vector");
    return Mat::Identity(c.size(), c.size()) - c * c.transpose();
}

ModeChart fit_chart(const Mode& mode, const Vec& c_lin, const Vec& x_eq, int degree) {
    if (degree < 3) throw ConfigError("fit_chart requires degree >= 3");
    if (mode.orbit.states.empty()) throw ConfigError("fit_chart requires a sampled orbit");

    const int n = static_cast<int>(x_eq.size());
    const auto num = static_cast<int>(mode.orbit.states.size());

    Vec xm(num);
    for (int i = 0; i < num; ++i) xm[i] = c_lin.dot(mode.orbit.states[i].x - x_eq);

    // Fit in the scaled variable xm / s so the Vandermonde columns are
    // comparably sized regardless of the orbit amplitude.
    const double scale = xm.cwiseAbs().maxCoeff();
    if (scale <= 0.0) throw FitError("degenerate orbit: zero chart-coordinate span");

    Mat vander(num, degree + 1);
    for (int i = 0; i < num; ++i) {
        double t = 1.0;
        for (int k = 0; k <= degree; ++k) {
            vander(i, k) = t;
            t *= xm[i] / scale;
        }
    }
    Eigen::ColPivHouseholderQR<Mat> qr(vander);
    if (qr.rank() < degree + 1)
        throw FitError("ill-conditioned chart fit; try a lower polynomial degree");

    ModeChart chart;
    chart.family = mode.family;
    chart.degree = degree;
    chart.energy = mode.energy;
    chart.c_lin = c_lin;
    chart.x_eq = x_eq;
    chart.xm_min = xm.minCoeff();
    chart.xm_max = xm.maxCoeff();
    chart.coeffs.resize(n);
    for (int j = 0; j < n; ++j) {
        Vec rhs(num);
        for (int i = 0; i < num; ++i) rhs[i] = mode.orbit.states[i].x[j];
        chart.coeffs[j] = qr.solve(rhs);
        // Undo the scaling: monomial coefficient k divides by scale^k.
        double sk = 1.0;
        for (int k = 0; k <= degree; ++k) {
            chart.coeffs[j][k] /= sk;
            sk *= scale;
        }
    }

    double max_err = 0.0;
    for (int i = 0; i < num; ++i)
        max_err = std::max(max_err,
                           (chart.position(xm[i]) - mode.orbit.states[i].x).cwiseAbs().maxCoeff());
    chart.fit_residual = max_err;
    return chart;
}

std::pair<double, double> chart_project(const ModeChart& chart, const State& s) {
    const auto dist2 = [&](double xm) { return (s.x - chart.position(xm)).squaredNorm(); };

    // Coarse grid to pick the basin, then golden section, then Newton.
    constexpr int kGrid = 256;
    const double span = chart.xm_max - chart.xm_min;
    double best = chart.xm_min;
    double best_val = dist2(best);
    for (int i = 1; i <= kGrid; ++i) {
        const double t = chart.xm_min + span * i / kGrid;
        const double v = dist2(t);
        if (v < best_val) {
            best_val = v;
            best = t;
        }
    }
    const double cell = span / kGrid;
    double a = std::max(chart.xm_min, best - cell);
    double b = std::min(chart.xm_max, best + cell);

    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = dist2(x1), f2 = dist2(x2);
    while (b - a > 1e-12) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = dist2(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = dist2(x2);
        }
    }
    double xm = 0.5 * (a + b);

    // Newton polish on the stationarity condition (X - x)^T J_X = 0.
    for (int it = 0; it < 20; ++it) {
        const Vec diff = chart.position(xm) - s.x;
        const Vec jx = chart.position_derivative(xm);
        Vec d2(chart.dim());
        for (int j = 0; j < chart.dim(); ++j) {
            const Vec dc = [&] {
                Vec first(chart.coeffs[j].size() > 1 ? chart.coeffs[j].size() - 1 : 1);
                first.setZero();
                for (int i = 1; i < chart.coeffs[j].size(); ++i) first[i - 1] = i * chart.coeffs[j][i];
                return first;
            }();
            Vec second(dc.size() > 1 ? dc.size() - 1 : 1);
            second.setZero();
            for (int i = 1; i < dc.size(); ++i) second[i - 1] = i * dc[i];
            d2[j] = poly_eval(second, xm);
        }
        const double grad = diff.dot(jx);
        const double hess = jx.squaredNorm() + diff.dot(d2);
        if (hess <= 0.0) break;
        const double step = grad / hess;
        xm -= step;
        xm = std::clamp(xm, chart.xm_min, chart.xm_max);
        if (std::abs(step) < 1e-10) break;
    }

    const double xm_dot = chart.tangent(xm).dot(s.xdot);
    return {xm, xm_dot};
}

std::string mode_chart_to_json(const Mode& mode, const ModeChart& chart) {
    nlohmann::json j;
    j["family"] = mode.family;
    j["energy"] = mode.energy;
    j["q0"] = std::vector<double>(mode.q0.data(), mode.q0.data() + mode.q0.size());
    j["half_period"] = mode.half_period;
    j["degree"] = chart.degree;
    std::vector<std::vector<double>> cs;
    for (const Vec& c : chart.coeffs)
        cs.emplace_back(c.data(), c.data() + c.size());
    j["coeffs_X"] = cs;
    j["x_m_range"] = {chart.xm_min, chart.xm_max};
    j["c_lin"] = std::vector<double>(chart.c_lin.data(), chart.c_lin.data() + chart.c_lin.size());
    j["x_eq"] = std::vector<double>(chart.x_eq.data(), chart.x_eq.data() + chart.x_eq.size());
    j["fit_residual"] = chart.fit_residual;
    return j.dump(2);
}

namespace {

ModeChart chart_from_json_impl(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    ModeChart chart;
    chart.family = j.at("family").get<std::string>();
    chart.energy = j.at("energy").get<double>();
    chart.degree = j.at("degree").get<int>();
    for (const auto& row : j.at("coeffs_X")) {
        const auto v = row.get<std::vector<double>>();
        chart.coeffs.push_back(Eigen::Map<const Vec>(v.data(), static_cast<int>(v.size())));
    }
    chart.xm_min = j.at("x_m_range")[0].get<double>();
    chart.xm_max = j.at("x_m_range")[1].get<double>();
    const auto cl = j.at("c_lin").get<std::vector<double>>();
    chart.c_lin = Eigen::Map<const Vec>(cl.data(), static_cast<int>(cl.size()));
    const auto xe = j.at("x_eq").get<std::vector<double>>();
    chart.x_eq = Eigen::Map<const Vec>(xe.data(), static_cast<int>(xe.size()));
    if (j.contains("fit_residual")) chart.fit_residual = j.at("fit_residual").get<double>();
    return chart;
}

}  // namespace

ModeChart chart_from_json(const std::string& text) {
    try {
        return chart_from_json_impl(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("invalid chart JSON: ") + e.what());
    }
}

}  // namespace eigenmpc
