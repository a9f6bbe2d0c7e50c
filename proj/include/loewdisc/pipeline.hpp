#pragma once

#include <string>
#include <vector>

#include "loewdisc/loewner.hpp"
#include "loewdisc/metrics.hpp"
#include "loewdisc/stabilize.hpp"

namespace loewdisc {

/// Fourth-order lightly damped plant
/// (1 + 0.05 s/sqrt2 + s^2/2) / ((1 + 0.1 s + s^2)(1 + 0.05 s/sqrt5 + s^2/5)).
ContinuousStateSpace example_resonant_plant();

/// Two-state network model x' = A0 x + A1 x(t - tau) + A2 x(t - tau - gamma) + B u,
/// y = x2, with the sign of A2 chosen so that it is stable at tau = 1.2, gamma = 0.3.
TimeDelayModel example_delay_plant(double tau = 1.2, double gamma = 0.3);

struct LoewnerOptions {
    std::size_t m = 50;            ///< 2m interpolation frequencies
    Eigen::Index k_bar = 10;       ///< desired maximal order
    double rank_tol = 1e-10;
    Stabilization stabilization = Stabilization::nehari;
    FrequencySampling sampling{};
    bool compensate_order_loss = true;
};

struct LoewnerDiscretization {
    DiscreteStateSpace model;        ///< final (stabilised) model
    DiscreteStateSpace interpolant;  ///< G_d^k before stabilisation
    Eigen::Index r = 0;              ///< numerical rank of the pencil
    Eigen::Index k = 0;              ///< projection order finally used
    bool interpolant_stable = false;
    double projection_error = 0.0;   ///< ||G_d^k - G_d|| on the circle (data grid)
    double estimated_error = 0.0;    ///< ||G_d^r - G_d|| on the circle (data grid)
    RankReport rank;
    std::vector<std::string> log;
};

/// Interpolate holder-weighted data, reduce to k = min(r, k_bar), stabilise,
/// and raise k while stabilisation loses order (as long as k < r).
LoewnerDiscretization loewner_discretize(const FrequencyDataSet& data, const LoewnerOptions& options);
LoewnerDiscretization loewner_discretize(const ContinuousModel& g, double h, const LoewnerOptions& options);

}  // namespace loewdisc
