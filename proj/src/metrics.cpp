#include "loewdisc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "loewdisc/error.hpp"

namespace loewdisc {

namespace {

constexpr std::size_t kNormPoints = 4096;
constexpr double kNormLo = 1e-4;
constexpr double kNormHi = 1e3;

double spectral_norm(const CMatrix& m) {
    if (m.size() == 1) {
        return std::abs(m(0, 0));
    }
    return linalg::svd(m).singular_values(0);
}

}  // namespace

std::vector<double> error_grid(double h, std::size_t count) {
    return linear_frequency_grid(h, count, FrequencySampling{});
}

double hinf_norm_on_grid(const ContinuousModel& g, const std::vector<double>& extra) {
    double best = 0.0;
    const double l0 = std::log10(kNormLo);
    const double l1 = std::log10(kNormHi);
    for (std::size_t i = 0; i < kNormPoints; ++i) {
        const double w = std::pow(10.0, l0 + (l1 - l0) * static_cast<double>(i) / (kNormPoints - 1));
        best = std::max(best, spectral_norm(frequency_response(g, cdouble(0.0, w))));
    }
    for (const double w : extra) {
        best = std::max(best, spectral_norm(frequency_response(g, cdouble(0.0, w))));
    }
    return best;
}

FrequencyErrorMetric::FrequencyErrorMetric(ContinuousModel g, double h, std::vector<double> grid)
    : g_(std::move(g)), h_(h), grid_(std::move(grid)) {
    if (!(h > 0.0)) {
        throw InvalidArgument("sampling period h must be positive");
    }
    if (grid_.empty()) {
        throw InvalidArgument("error grid is empty");
    }
    const double nyquist = std::numbers::pi / h;
    g_values_.reserve(grid_.size());
    holder_.reserve(grid_.size());
    for (const double w : grid_) {
        if (!(w > 0.0 && w < nyquist)) {
            throw InvalidArgument("error grid must lie strictly inside (0, pi/h)");
        }
        g_values_.push_back(frequency_response(g_, cdouble(0.0, w)));
        holder_.push_back(holder_transfer(w, h));
    }
    hinf_ = hinf_norm_on_grid(g_, grid_);
    if (!(hinf_ > 0.0)) {
        throw NumericFailure("model has zero gain on the normalisation grid");
    }
}

ErrorReport FrequencyErrorMetric::evaluate(const DiscreteStateSpace& gd) const {
    gd.validate();
    ErrorReport rep;
    for (std::size_t i = 0; i < grid_.size(); ++i) {
        const double w = grid_[i];
        const CMatrix diff = g_values_[i] - holder_[i] * frequency_response(gd, std::polar(1.0, w * h_));
        const double e = spectral_norm(diff);
        if (e > rep.e_inf || i == 0) {
            rep.e_inf = e;
            rep.argmax_omega = w;
        }
    }
    rep.h_inf_norm_G = hinf_;
    rep.e_inf_rel = 100.0 * rep.e_inf / hinf_;
    rep.grid_points = grid_.size();
    rep.grid_min = *std::min_element(grid_.begin(), grid_.end());
    rep.grid_max = *std::max_element(grid_.begin(), grid_.end());
    std::ostringstream os;
    os << kNormPoints << " log-spaced points in [" << kNormLo << ", " << kNormHi << "] rad/s + evaluation grid";
    rep.normalizer_grid = os.str();
    return rep;
}

ErrorReport freq_error(const ContinuousModel& g, const DiscreteStateSpace& gd, const std::vector<double>& grid) {
    return FrequencyErrorMetric(g, gd.h, grid).evaluate(gd);
}

ErrorReport dataset_error(const FrequencyDataSet& data, const DiscreteStateSpace& gd) {
    data.validate();
    ErrorReport rep;
    double norm = 0.0;
    for (std::size_t i = 0; i < data.pairs(); ++i) {
        const double w = data.omegas[i];
        const cdouble r = holder_transfer(w, data.h);
        const double e = std::abs(r * (data.values[2 * i] - eval_discrete(gd, data.nodes[2 * i])));
        norm = std::max(norm, std::abs(r * data.values[2 * i]));
        if (e > rep.e_inf || i == 0) {
            rep.e_inf = e;
            rep.argmax_omega = w;
        }
    }
    if (!(norm > 0.0)) {
        throw NumericFailure("data set has zero gain");
    }
    rep.h_inf_norm_G = norm;
    rep.e_inf_rel = 100.0 * rep.e_inf / norm;
    rep.grid_points = data.pairs();
    rep.grid_min = data.omegas.front();
    rep.grid_max = data.omegas.back();
    rep.normalizer_grid = "data set frequencies";
    return rep;
}

double time_error_l2(const std::vector<double>& y_ref, const std::vector<double>& y_test) {
    if (y_ref.size() != y_test.size()) {
        throw InvalidArgument("time-domain error needs sequences of equal length");
    }
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < y_ref.size(); ++i) {
        num += (y_ref[i] - y_test[i]) * (y_ref[i] - y_test[i]);
        den += y_ref[i] * y_ref[i];
    }
    if (!(den > 0.0)) {
        throw InvalidArgument("reference signal has zero norm");
    }
    return 100.0 * std::sqrt(num / den);
}

double linf_distance(const DiscreteStateSpace& g1, const DiscreteStateSpace& g2, const std::vector<double>& omegas) {
    if (g1.h != g2.h) {
        throw InvalidArgument("models have different sampling periods");
    }
    double worst = 0.0;
    for (const double w : omegas) {
        const cdouble z = std::polar(1.0, w * g1.h);
        worst = std::max(worst, spectral_norm(frequency_response(g1, z) - frequency_response(g2, z)));
    }
    return worst;
}

SweepResult order_sweep(const ContinuousModel& g, double h, const std::vector<Eigen::Index>& k_range,
                        const SweepOptions& options) {
    const LoewnerInterpolant interp(build_dataset(g, h, options.m, options.sampling), options.rank_tol);
    const FrequencyErrorMetric metric(g, h, error_grid(h, options.grid_points));

    SweepResult out;
    out.r = interp.rank().r;
    out.h_inf_norm_G = metric.normalizer();

    std::optional<DiscreteStateSpace> exact;
    if (out.r >= 1) {
        try {
            exact = interp.model(out.r);
        } catch (const Error&) {
            exact.reset();
        }
    }

    std::vector<Eigen::Index> ks = k_range;
    if (ks.empty()) {
        for (Eigen::Index k = 1; k <= out.r; ++k) {
            ks.push_back(k);
        }
    }
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

    for (const Eigen::Index k : ks) {
        SweepRow row;
        row.k = k;
        row.gap_to_exact = std::numeric_limits<double>::quiet_NaN();
        row.e_rel_unproj = row.gap_to_exact;
        row.e_rel_proj = row.gap_to_exact;
        try {
            const DiscreteStateSpace gk = interp.model(k);
            row.e_rel_unproj = metric.evaluate(gk).e_inf_rel;
            row.stable_unproj = is_stable(gk);
            if (exact) {
                row.gap_to_exact = linf_distance(*exact, gk, metric.grid());
            }
            const DiscreteStateSpace gp = stabilize(gk, options.stabilization);
            row.e_rel_proj = metric.evaluate(gp).e_inf_rel;
            row.order_proj = gp.order();
            row.ok = true;
        } catch (const Error& e) {
            row.ok = false;
            row.failure = e.what();
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

}  // namespace loewdisc
