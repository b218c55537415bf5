// integrator.cpp — RK4, Dormand-Prince 5(4) and exact-propagator stepping

#include "bosedeph/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

namespace bosedeph {

std::string method_name(Method m) {
    switch (m) {
        case Method::RK4: return "rk4";
        case Method::RK45: return "rk45";
        case Method::Exponential: return "expm";
    }
    return "?";
}

Method parse_method(const std::string& s) {
    if (s == "rk4") return Method::RK4;
    if (s == "rk45") return Method::RK45;
    if (s == "expm") return Method::Exponential;
    throw std::invalid_argument("unknown integrator method '" + s + "' (expected rk4, rk45 or expm)");
}

std::vector<std::string> IntegratorConfig::violations() const {
    std::vector<std::string> v;
    if (!(dt > 0) || !std::isfinite(dt)) v.push_back("integrator.dt must be > 0");
    if (!(tolerance > 0)) v.push_back("integrator.tolerance must be > 0");
    if (!(t_end >= 0) || !std::isfinite(t_end)) v.push_back("integrator.t_end must be >= 0");
    if (record_stride < 1) v.push_back("integrator.record_stride must be >= 1");
    return v;
}

void IntegratorConfig::validate() const {
    const auto v = violations();
    if (v.empty()) return;
    std::ostringstream os;
    os << "invalid integrator configuration:";
    for (const auto& s : v) os << "\n  - " << s;
    throw std::invalid_argument(os.str());
}

std::size_t IntegratorConfig::record_count() const {
    const double span = dt * record_stride;
    return static_cast<std::size_t>(std::floor(t_end / span + 1e-9)) + 1;
}

std::vector<double> IntegratorConfig::record_grid() const {
    std::vector<double> g(record_count());
    for (std::size_t k = 0; k < g.size(); ++k) g[k] = record_time(k);
    return g;
}

namespace {

void check_finite(const Matrix& y, double t) {
    if (!y.allFinite()) {
        std::ostringstream os;
        os << "non-finite state at t = " << t;
        throw NumericalError(os.str());
    }
}

IntegrationStats run_rk4(const Rhs& f, Matrix y, const IntegratorConfig& cfg, const Observer& observe) {
    IntegrationStats st;
    const auto n = cfg.record_count();
    Matrix k1(y.rows(), y.cols()), k2(k1), k3(k1), k4(k1), tmp(k1);
    const double h = cfg.dt;
    std::size_t step = 0;
    for (std::size_t k = 0; k < n; ++k) {
        if (k > 0) {
            for (int j = 0; j < cfg.record_stride; ++j, ++step) {
                const double t = static_cast<double>(step) * h;
                f(t, y, k1);
                tmp = y + (0.5 * h) * k1;
                f(t + 0.5 * h, tmp, k2);
                tmp = y + (0.5 * h) * k2;
                f(t + 0.5 * h, tmp, k3);
                tmp = y + h * k3;
                f(t + h, tmp, k4);
                y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                st.rhs_evaluations += 4;
                ++st.accepted_steps;
            }
            check_finite(y, cfg.record_time(k));
        }
        if (!observe(k, cfg.record_time(k), y)) {
            st.stopped_early = k + 1 < n;
            break;
        }
    }
    return st;
}

IntegrationStats run_dopri(const Rhs& f, Matrix y, const IntegratorConfig& cfg, const Observer& observe) {
    // Dormand-Prince 5(4) tableau.
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                     a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                     e6 = 22.0 / 525, e7 = -1.0 / 40;

    IntegrationStats st;
    const auto n = cfg.record_count();
    Matrix k1(y.rows(), y.cols()), k2(k1), k3(k1), k4(k1), k5(k1), k6(k1), k7(k1), tmp(k1), ynew(k1);
    double t = 0.0;
    double h = cfg.dt;
    f(t, y, k1);
    ++st.rhs_evaluations;

    for (std::size_t k = 0; k < n; ++k) {
        const double target = cfg.record_time(k);
        while (t < target - 1e-14 * std::max(1.0, target)) {
            const bool last = t + h >= target;
            const double hs = last ? target - t : h;
            if (hs < 1e-14 * std::max(1.0, std::abs(t))) {
                std::ostringstream os;
                os << "step size underflow at t = " << t;
                throw NumericalError(os.str());
            }
            tmp = y + hs * a21 * k1;
            f(t + c2 * hs, tmp, k2);
            tmp = y + hs * (a31 * k1 + a32 * k2);
            f(t + c3 * hs, tmp, k3);
            tmp = y + hs * (a41 * k1 + a42 * k2 + a43 * k3);
            f(t + c4 * hs, tmp, k4);
            tmp = y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
            f(t + c5 * hs, tmp, k5);
            tmp = y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
            f(t + hs, tmp, k6);
            ynew = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            f(t + hs, ynew, k7);
            st.rhs_evaluations += 6;

            const double err =
                max_abs(hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7)) / cfg.tolerance;
            if (!std::isfinite(err)) throw NumericalError("non-finite error estimate in adaptive step");
            const double fac = err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
            if (err <= 1.0) {
                t = last ? target : t + hs;
                y.swap(ynew);
                k1.swap(k7);
                ++st.accepted_steps;
                if (!last) h = hs * std::clamp(fac, 0.2, 5.0);
            } else {
                ++st.rejected_steps;
                h = hs * std::clamp(fac, 0.1, 1.0);
            }
        }
        check_finite(y, target);
        if (!observe(k, target, y)) {
            st.stopped_early = k + 1 < n;
            break;
        }
    }
    return st;
}

IntegrationStats run_expm(const Rhs& f, Matrix y, const IntegratorConfig& cfg, const Observer& observe) {
    const auto d = y.rows();
    if (d > 40) throw std::invalid_argument("exponential propagator limited to dimension <= 40");
    const auto dd = d * d;
    Matrix L(dd, dd), e = Matrix::Zero(d, d), out(d, d);
    for (Eigen::Index c = 0; c < d; ++c) {
        for (Eigen::Index r = 0; r < d; ++r) {
            e.setZero();
            e(r, c) = 1.0;
            f(0.0, e, out);
            L.col(c * d + r) = Eigen::Map<const Vector>(out.data(), dd);
        }
    }
    const Matrix P = (L * cplx(cfg.dt * cfg.record_stride)).exp();

    IntegrationStats st;
    st.rhs_evaluations = static_cast<std::size_t>(dd);
    const auto n = cfg.record_count();
    Vector v = Eigen::Map<const Vector>(y.data(), dd);
    for (std::size_t k = 0; k < n; ++k) {
        if (k > 0) {
            v = P * v;
            ++st.accepted_steps;
        }
        y = Eigen::Map<const Matrix>(v.data(), d, d);
        check_finite(y, cfg.record_time(k));
        if (!observe(k, cfg.record_time(k), y)) {
            st.stopped_early = k + 1 < n;
            break;
        }
    }
    return st;
}

}  // namespace

IntegrationStats integrate(const Rhs& f, Matrix y, const IntegratorConfig& cfg, const Observer& observe,
                           bool autonomous) {
    cfg.validate();
    switch (cfg.method) {
        case Method::RK4: return run_rk4(f, std::move(y), cfg, observe);
        case Method::RK45: return run_dopri(f, std::move(y), cfg, observe);
        case Method::Exponential:
            if (!autonomous) throw std::invalid_argument("exponential propagator needs a time-independent generator");
            return run_expm(f, std::move(y), cfg, observe);
    }
    throw std::invalid_argument("unknown method");
}

}  // namespace bosedeph
