#include "loewdisc/models.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "loewdisc/error.hpp"

namespace loewdisc {

namespace {

constexpr double kPivotTol = 1e2 * std::numeric_limits<double>::epsilon();

void require(bool ok, const std::string& what) {
    if (!ok) {
        throw DimensionError(what);
    }
}

std::string format_point(cdouble s) {
    std::ostringstream os;
    os.precision(17);
    os << s.real() << (s.imag() < 0 ? "-" : "+") << std::abs(s.imag()) << "j";
    return os.str();
}

// Solves M X = R, reporting a pole when M is numerically singular.
CMatrix resolvent_solve(const CMatrix& m, const CMatrix& rhs, cdouble at) {
    if (m.rows() == 0) {
        return CMatrix::Zero(0, rhs.cols());
    }
    Eigen::PartialPivLU<CMatrix> lu(m);
    if (!(lu.rcond() > kPivotTol)) {
        throw PoleHit(at, "transfer function evaluated at a pole, s/z = " + format_point(at));
    }
    return lu.solve(rhs);
}

struct Siso {
    template <class M>
    static void check(const M& g, const char* what) {
        if (!g.is_siso()) {
            throw DimensionError(std::string(what) + " requires a single-input single-output model");
        }
    }
};

}  // namespace

// ------------------------------------------------------------------ validation

void ContinuousStateSpace::validate() const {
    const auto n = A.rows();
    require(A.cols() == n, "A must be square");
    require(B.rows() == n, "B must have as many rows as A");
    require(C.cols() == n, "C must have as many columns as A");
    require(D.rows() == C.rows() && D.cols() == B.cols(), "D must be outputs x inputs");
    require(B.cols() >= 1 && C.rows() >= 1, "model needs at least one input and one output");
    linalg::require_finite(A, "A");
    linalg::require_finite(B, "B");
    linalg::require_finite(C, "C");
    linalg::require_finite(D, "D");
}

void TimeDelayModel::validate() const {
    const auto n = A0.rows();
    require(n >= 1 && A0.cols() == n, "A0 must be square");
    require(A1.rows() == n && A1.cols() == n, "A1 must match A0");
    require(A2.rows() == n && A2.cols() == n, "A2 must match A0");
    require(B.rows() == n && B.cols() >= 1, "B must have as many rows as A0");
    require(C.cols() == n && C.rows() >= 1, "C must have as many columns as A0");
    for (const RMatrix* m : {&A0, &A1, &A2, &B, &C}) {
        linalg::require_finite(*m, "delay model");
    }
    if (!(tau >= 0.0) || !(gamma >= 0.0) || !std::isfinite(tau) || !std::isfinite(gamma)) {
        throw InvalidArgument("delays must be finite and non-negative");
    }
}

void DiscreteStateSpace::validate() const {
    const auto n = A.rows();
    require(A.cols() == n, "A must be square");
    require(B.rows() == n, "B must have as many rows as A");
    require(C.cols() == n, "C must have as many columns as A");
    require(D.rows() == C.rows() && D.cols() == B.cols(), "D must be outputs x inputs");
    require(B.cols() >= 1 && C.rows() >= 1, "model needs at least one input and one output");
    linalg::require_finite(A, "A");
    linalg::require_finite(B, "B");
    linalg::require_finite(C, "C");
    linalg::require_finite(D, "D");
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw InvalidArgument("sampling period h must be positive");
    }
}

void DescriptorModel::validate() const {
    const auto n = A.rows();
    require(A.cols() == n && E.rows() == n && E.cols() == n, "E and A must be square and equal size");
    require(B.size() == n && C.size() == n, "B and C must match the descriptor dimension");
}

// ------------------------------------------------------------------ evaluation

CMatrix frequency_response(const ContinuousModel& g, cdouble s) {
    return std::visit(
        [s](const auto& m) -> CMatrix {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, ContinuousStateSpace>) {
                CMatrix res = -m.A.template cast<cdouble>();
                res.diagonal().array() += s;
                return m.C.template cast<cdouble>() * resolvent_solve(res, m.B.template cast<cdouble>(), s) +
                       m.D.template cast<cdouble>();
            } else if constexpr (std::is_same_v<T, TimeDelayModel>) {
                CMatrix res = -m.A0.template cast<cdouble>() - std::exp(-m.tau * s) * m.A1.template cast<cdouble>() -
                              std::exp(-(m.tau + m.gamma) * s) * m.A2.template cast<cdouble>();
                res.diagonal().array() += s;
                return m.C.template cast<cdouble>() * resolvent_solve(res, m.B.template cast<cdouble>(), s);
            } else {
                if (!m.evaluate) {
                    throw InvalidArgument("frequency function '" + m.name + "' has no evaluator");
                }
                return m.evaluate(s);
            }
        },
        g);
}

CMatrix frequency_response(const DiscreteStateSpace& g, cdouble z) {
    CMatrix res = -g.A.cast<cdouble>();
    res.diagonal().array() += z;
    return g.C.cast<cdouble>() * resolvent_solve(res, g.B.cast<cdouble>(), z) + g.D.cast<cdouble>();
}

bool is_siso(const ContinuousModel& g) {
    return std::visit(
        [](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, FrequencyFunction>) {
                return m.inputs == 1 && m.outputs == 1;
            } else {
                return m.is_siso();
            }
        },
        g);
}

std::string describe(const ContinuousModel& g) {
    return std::visit(
        [](const auto& m) -> std::string {
            using T = std::decay_t<decltype(m)>;
            std::ostringstream os;
            if constexpr (std::is_same_v<T, ContinuousStateSpace>) {
                os << "state-space, order " << m.order();
            } else if constexpr (std::is_same_v<T, TimeDelayModel>) {
                os << "time-delay, order " << m.order() << ", tau " << m.tau << ", gamma " << m.gamma;
            } else {
                os << "frequency function '" << m.name << "'";
            }
            return os.str();
        },
        g);
}

cdouble eval_continuous(const ContinuousModel& g, cdouble s) {
    if (!is_siso(g)) {
        throw DimensionError("scalar evaluation requires a single-input single-output model");
    }
    return frequency_response(g, s)(0, 0);
}

cdouble eval_discrete(const DiscreteStateSpace& g, cdouble z) {
    Siso::check(g, "scalar evaluation");
    return frequency_response(g, z)(0, 0);
}

cdouble eval_discrete(const DescriptorModel& g, cdouble z) {
    const CMatrix pencil = z * g.E - g.A;
    const CMatrix x = resolvent_solve(pencil, g.B, z);
    return (g.C * x)(0, 0);
}

// ----------------------------------------------------------------------- poles

std::vector<cdouble> poles(const ContinuousStateSpace& g) {
    const CVector ev = linalg::eigenvalues(g.A);
    return {ev.data(), ev.data() + ev.size()};
}

std::vector<cdouble> poles(const DiscreteStateSpace& g) {
    const CVector ev = linalg::eigenvalues(g.A);
    return {ev.data(), ev.data() + ev.size()};
}

DescriptorPoles poles(const DescriptorModel& g) {
    g.validate();
    DescriptorPoles out;
    const auto n = g.order();
    if (n == 0) {
        return out;
    }
    // Shift-and-invert: if K = (A - sigma E)^{-1} E has eigenvalue mu then
    // lambda = sigma + 1/mu is a generalized eigenvalue; mu = 0 is infinite.
    static const std::array<cdouble, 4> shifts{cdouble(0.3137, 0.7071), cdouble(-1.1213, 0.2357),
                                               cdouble(2.2917, -0.9163), cdouble(0.05, 0.0)};
    for (const cdouble sigma : shifts) {
        Eigen::PartialPivLU<CMatrix> lu(g.A - sigma * g.E);
        if (!(lu.rcond() > 1e-12)) {
            continue;
        }
        const CMatrix k = lu.solve(g.E);
        Eigen::ComplexEigenSolver<CMatrix> es(k, false);
        if (es.info() != Eigen::Success) {
            throw NumericFailure("eigenvalue iteration failed for the descriptor pencil");
        }
        const double tol = 1e-12 * std::max(k.norm(), std::numeric_limits<double>::min());
        for (Eigen::Index i = 0; i < n; ++i) {
            const cdouble mu = es.eigenvalues()(i);
            if (std::abs(mu) <= tol) {
                ++out.infinite;
            } else {
                out.finite.push_back(sigma + 1.0 / mu);
            }
        }
        return out;
    }
    throw NumericFailure("descriptor pencil (A, E) is singular (irregular pencil)");
}

bool is_stable(const ContinuousStateSpace& g) {
    for (const cdouble p : poles(g)) {
        if (!(p.real() < 0.0)) {
            return false;
        }
    }
    return true;
}

bool is_stable(const DiscreteStateSpace& g, double margin) {
    for (const cdouble p : poles(g)) {
        if (!(std::abs(p) < 1.0 - margin)) {
            return false;
        }
    }
    return true;
}

// ------------------------------------------------------------------- responses

std::vector<double> uniform_grid(double dt, std::size_t n) {
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = static_cast<double>(i) * dt;
    }
    return t;
}

std::size_t subdivision(double h, double dt) {
    if (!(h > 0.0) || !(dt > 0.0)) {
        throw InvalidArgument("sampling period and fine step must be positive");
    }
    const double ratio = h / dt;
    const double p = std::round(ratio);
    if (p < 1.0 || std::abs(ratio - p) > 1e-9 * ratio) {
        std::ostringstream os;
        os << "fine grid step " << dt << " does not subdivide the sampling period " << h;
        throw InvalidArgument(os.str());
    }
    return static_cast<std::size_t>(p);
}

namespace {

double uniform_step(std::span<const double> t) {
    if (t.size() < 2) {
        return 0.0;
    }
    const double dt = t[1] - t[0];
    if (!(dt > 0.0)) {
        throw InvalidArgument("time grid must be increasing");
    }
    for (std::size_t i = 1; i < t.size(); ++i) {
        if (std::abs((t[i] - t[i - 1]) - dt) > 1e-9 * std::max(dt, std::abs(t[i]))) {
            throw InvalidArgument("time grid must be uniform");
        }
    }
    return dt;
}

}  // namespace

std::vector<double> impulse_response_continuous(const ContinuousStateSpace& g, std::span<const double> t_grid) {
    g.validate();
    Siso::check(g, "impulse response");
    std::vector<double> y(t_grid.size());
    if (t_grid.empty()) {
        return y;
    }
    const double dt = uniform_step(t_grid);
    RVector x = linalg::expm(g.A * t_grid[0]) * g.B.col(0);
    const RMatrix step = linalg::expm(g.A * dt);
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        y[i] = (g.C.row(0) * x)(0);
        x = step * x;
    }
    return y;
}

std::vector<double> step_response_continuous(const ContinuousStateSpace& g, std::span<const double> t_grid) {
    g.validate();
    Siso::check(g, "step response");
    std::vector<double> y(t_grid.size());
    if (t_grid.empty()) {
        return y;
    }
    if (t_grid[0] != 0.0) {
        throw InvalidArgument("step response grid must start at t = 0");
    }
    const double dt = uniform_step(t_grid);
    const auto n = g.order();
    RMatrix aug = RMatrix::Zero(n + 1, n + 1);
    aug.topLeftCorner(n, n) = g.A;
    aug.topRightCorner(n, 1) = g.B;
    const RMatrix e = linalg::expm(aug * dt);
    const RMatrix phi = e.topLeftCorner(n, n);
    const RVector gam = e.topRightCorner(n, 1);
    RVector x = RVector::Zero(n);
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        y[i] = (g.C.row(0) * x)(0) + g.D(0, 0);
        x = phi * x + gam;
    }
    return y;
}

std::vector<double> impulse_response_discrete(const DiscreteStateSpace& g, std::size_t n) {
    g.validate();
    Siso::check(g, "impulse response");
    if (n == 0) {
        throw InvalidArgument("impulse response length must be at least 1");
    }
    std::vector<double> y(n);
    y[0] = g.D(0, 0);
    RVector x = g.B.col(0);
    for (std::size_t k = 1; k < n; ++k) {
        y[k] = (g.C.row(0) * x)(0);
        x = g.A * x;
    }
    return y;
}

std::vector<double> simulate_discrete(const DiscreteStateSpace& g, std::span<const double> u) {
    g.validate();
    Siso::check(g, "simulation");
    std::vector<double> y(u.size());
    RVector x = RVector::Zero(g.order());
    const RVector b = g.B.col(0);
    const Eigen::RowVectorXd c = g.C.row(0);
    const double d = g.D(0, 0);
    for (std::size_t k = 0; k < u.size(); ++k) {
        y[k] = c.dot(x) + d * u[k];
        x = g.A * x + b * u[k];
    }
    return y;
}

std::vector<double> hold(std::span<const double> y_d, double h, double dt, std::size_t n) {
    const std::size_t p = subdivision(h, dt);
    if (n > 0 && (n - 1) / p >= y_d.size()) {
        throw InvalidArgument("held sequence is too short for the requested fine grid");
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = y_d[i / p];
    }
    return out;
}

std::vector<double> sample_and_hold_output(const DiscreteStateSpace& g, std::span<const double> u, double dt) {
    const std::size_t p = subdivision(g.h, dt);
    std::vector<double> u_d;
    for (std::size_t i = 0; i < u.size(); i += p) {
        u_d.push_back(u[i]);
    }
    const std::vector<double> y_d = simulate_discrete(g, u_d);
    return hold(y_d, g.h, dt, u.size());
}

std::vector<double> step_response_tds(const TimeDelayModel& g, double t_end, double dt) {
    g.validate();
    if (!(dt > 0.0)) {
        throw InvalidArgument("integration step dt must be positive");
    }
    if (!(t_end > 0.0)) {
        throw InvalidArgument("final time must be positive");
    }
    if (!g.is_siso()) {
        throw DimensionError("delay step response requires a single-input single-output model");
    }

    // Zero delays act on the current state.
    constexpr double kZeroDelay = 1e-12;
    RMatrix a_now = g.A0;
    struct Lag {
        RMatrix a;
        double delay;
    };
    std::vector<Lag> lags;
    const double d1 = g.tau;
    const double d2 = g.tau + g.gamma;
    for (const auto& [a, d] : {std::pair{&g.A1, d1}, std::pair{&g.A2, d2}}) {
        if (a->isZero(0.0)) {
            continue;
        }
        if (d <= kZeroDelay) {
            a_now += *a;
        } else {
            lags.push_back({*a, d});
        }
    }
    for (const double d : {g.tau, g.gamma}) {
        if (d <= kZeroDelay || lags.empty()) {
            continue;
        }
        if (dt > d / 10.0 * (1.0 + 1e-12)) {
            throw InvalidArgument("dt must not exceed a tenth of each delay");
        }
        const double ratio = d / dt;
        if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio)) {
            throw InvalidArgument("delays must be integer multiples of dt");
        }
    }

    const auto n = g.order();
    const std::size_t steps = static_cast<std::size_t>(std::floor(t_end / dt + 1e-9));
    std::vector<RVector> traj;
    traj.reserve(steps + 1);
    traj.push_back(RVector::Zero(n));

    auto delayed = [&](double t) -> RVector {
        if (t < 0.0) {
            return RVector::Zero(n);
        }
        const double pos = t / dt;
        double base = std::floor(pos);
        double frac = pos - base;
        if (frac > 1.0 - 1e-9) {
            base += 1.0;
            frac = 0.0;
        }
        const auto i = static_cast<std::size_t>(base);
        if (frac < 1e-9 || i + 1 >= traj.size()) {
            return traj[std::min(i, traj.size() - 1)];
        }
        return (1.0 - frac) * traj[i] + frac * traj[i + 1];
    };
    const RVector b = g.B.col(0);
    auto rhs = [&](double t, const RVector& x) {
        RVector dx = a_now * x + b;
        for (const Lag& lag : lags) {
            dx += lag.a * delayed(t - lag.delay);
        }
        return dx;
    };

    for (std::size_t i = 0; i < steps; ++i) {
        const double t = static_cast<double>(i) * dt;
        const RVector& x = traj.back();
        const RVector k1 = rhs(t, x);
        const RVector k2 = rhs(t + dt / 2, x + dt / 2 * k1);
        const RVector k3 = rhs(t + dt / 2, x + dt / 2 * k2);
        const RVector k4 = rhs(t + dt, x + dt * k3);
        traj.push_back(x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
    }

    std::vector<double> y(traj.size());
    const Eigen::RowVectorXd c = g.C.row(0);
    for (std::size_t i = 0; i < traj.size(); ++i) {
        y[i] = c.dot(traj[i]);
    }
    return y;
}

}  // namespace loewdisc
