#include "loewdisc/pipeline.hpp"

#include <cmath>
#include <sstream>

#include "loewdisc/error.hpp"

namespace loewdisc {

namespace {

// Coefficients, lowest degree first.
std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            out[i + j] += a[i] * b[j];
        }
    }
    return out;
}

// Controllable canonical form of num/den with deg num < deg den.
ContinuousStateSpace canonical_form(std::vector<double> num, std::vector<double> den) {
    const double lead = den.back();
    for (double& c : den) {
        c /= lead;
    }
    for (double& c : num) {
        c /= lead;
    }
    const auto n = static_cast<Eigen::Index>(den.size() - 1);
    ContinuousStateSpace g{RMatrix::Zero(n, n), RMatrix::Zero(n, 1), RMatrix::Zero(1, n), RMatrix::Zero(1, 1)};
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        g.A(i, i + 1) = 1.0;
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        g.A(n - 1, j) = -den[j];
    }
    g.B(n - 1, 0) = 1.0;
    for (std::size_t j = 0; j < num.size(); ++j) {
        g.C(0, static_cast<Eigen::Index>(j)) = num[j];
    }
    return g;
}

}  // namespace

ContinuousStateSpace example_resonant_plant() {
    const std::vector<double> num{1.0, 0.05 / std::sqrt(2.0), 0.5};
    const std::vector<double> den =
        poly_mul({1.0, 0.1, 1.0}, {1.0, 0.05 / std::sqrt(5.0), 0.2});
    return canonical_form(num, den);
}

TimeDelayModel example_delay_plant(double tau, double gamma) {
    TimeDelayModel g;
    g.A0 = RMatrix{{0.0, 0.0}, {1.0, 0.0}};
    g.A1 = -2.0 * g.A0.transpose();
    // Printed as -1.75 A0^T, which puts roots at 0.713 +- 0.963j. The positive
    // sign gives the stable network model (rightmost roots -0.0387 +- 0.685j).
    g.A2 = 1.75 * g.A0.transpose();
    g.B = RMatrix{{1.0}, {0.0}};
    g.C = RMatrix{{0.0, 1.0}};
    g.tau = tau;
    g.gamma = gamma;
    return g;
}

LoewnerDiscretization loewner_discretize(const FrequencyDataSet& data, const LoewnerOptions& options) {
    if (options.k_bar < 1) {
        throw InvalidArgument("desired order k_bar must be at least 1");
    }
    const LoewnerInterpolant interp(data, options.rank_tol);
    LoewnerDiscretization out;
    out.rank = interp.rank();
    out.r = out.rank.r;
    std::ostringstream log;
    log << "numerical rank r = " << out.r << " (tolerance " << options.rank_tol << ", pencil size " << interp.size()
        << ")";
    out.log.push_back(log.str());
    if (!out.rank.consistent()) {
        std::ostringstream os;
        os << "warning: column rank test gives " << out.rank.r_col;
        out.log.push_back(os.str());
    }
    if (out.r < 1) {
        throw NumericFailure("Loewner pencil has numerical rank 0; the data carry no dynamics");
    }

    Eigen::Index k = std::min(out.r, options.k_bar);
    for (;;) {
        const DiscreteStateSpace gk = interp.model(k);
        const bool stable = is_stable(gk);
        const DiscreteStateSpace gd = stabilize(gk, options.stabilization);
        std::ostringstream os;
        os << "k = " << k << ": interpolant " << (stable ? "stable" : "unstable") << ", stabilised order "
           << gd.order();
        out.log.push_back(os.str());
        out.k = k;
        out.interpolant = gk;
        out.interpolant_stable = stable;
        out.model = gd;
        if (!options.compensate_order_loss || gd.order() >= options.k_bar || k >= out.r ||
            options.stabilization == Stabilization::none) {
            break;
        }
        ++k;
    }

    const std::vector<double>& omegas = data.omegas;
    out.projection_error = linf_distance(out.interpolant, out.model, omegas);
    try {
        out.estimated_error = linf_distance(interp.model(out.r), out.model, omegas);
    } catch (const Error& e) {
        out.estimated_error = std::nan("");
        out.log.push_back(std::string("exact interpolant unavailable: ") + e.what());
    }
    return out;
}

LoewnerDiscretization loewner_discretize(const ContinuousModel& g, double h, const LoewnerOptions& options) {
    return loewner_discretize(build_dataset(g, h, options.m, options.sampling), options);
}

}  // namespace loewdisc
