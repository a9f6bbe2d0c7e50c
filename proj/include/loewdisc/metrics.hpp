#pragma once

#include <optional>
#include <string>
#include <vector>

#include "loewdisc/loewner.hpp"
#include "loewdisc/models.hpp"
#include "loewdisc/stabilize.hpp"

namespace loewdisc {

struct ErrorReport {
    double e_inf = 0.0;            ///< max_w |G(jw) - R(jw) G_d(e^{jwh})|
    double e_inf_rel = 0.0;        ///< percent of h_inf_norm_G
    double argmax_omega = 0.0;
    double h_inf_norm_G = 0.0;
    std::size_t grid_points = 0;
    double grid_min = 0.0;
    double grid_max = 0.0;
    std::string normalizer_grid;  ///< how h_inf_norm_G was obtained
};

/// `count` linear points over [1e-3, pi/h - 1e-3].
std::vector<double> error_grid(double h, std::size_t count = 5000);

/// max ||G(jw)||_2 over 4096 log-spaced points in [1e-4, 1e3] rad/s joined with `extra`.
double hinf_norm_on_grid(const ContinuousModel& g, const std::vector<double>& extra);

/// Caches G and R on the grid so that many candidates can be scored.
class FrequencyErrorMetric {
public:
    FrequencyErrorMetric(ContinuousModel g, double h, std::vector<double> grid);

    ErrorReport evaluate(const DiscreteStateSpace& gd) const;
    const std::vector<double>& grid() const { return grid_; }
    double h() const { return h_; }
    double normalizer() const { return hinf_; }

private:
    ContinuousModel g_;
    double h_;
    std::vector<double> grid_;
    std::vector<CMatrix> g_values_;
    std::vector<cdouble> holder_;
    double hinf_ = 0.0;
};

ErrorReport freq_error(const ContinuousModel& g, const DiscreteStateSpace& gd, const std::vector<double>& grid);

/// Error of a discrete model against holder-weighted data, |R| |value - G_d| at each node,
/// normalised by max |R value| (data-only use, no continuous model available).
ErrorReport dataset_error(const FrequencyDataSet& data, const DiscreteStateSpace& gd);

/// 100 ||y_ref - y_test||_2 / ||y_ref||_2
double time_error_l2(const std::vector<double>& y_ref, const std::vector<double>& y_test);

/// max over the grid of ||G1(e^{jwh}) - G2(e^{jwh})||_2.
double linf_distance(const DiscreteStateSpace& g1, const DiscreteStateSpace& g2, const std::vector<double>& omegas);

struct SweepRow {
    Eigen::Index k = 0;
    bool ok = false;
    std::string failure;
    double e_rel_unproj = 0.0;     ///< NaN when the stage failed
    double e_rel_proj = 0.0;
    bool stable_unproj = false;
    Eigen::Index order_proj = 0;
    double gap_to_exact = 0.0;  ///< ||G_d^r - G_d^k|| on the circle, NaN when G_d^r is unavailable
};

struct SweepResult {
    Eigen::Index r = 0;
    double h_inf_norm_G = 0.0;
    std::vector<SweepRow> rows;  ///< ordered by k
};

struct SweepOptions {
    std::size_t m = 50;
    double rank_tol = 1e-10;
    std::size_t grid_points = 5000;
    Stabilization stabilization = Stabilization::nehari;
    FrequencySampling sampling{};
};

/// Projects, measures, stabilises and re-measures for each k; per-k failures
/// are recorded in the row and the sweep continues. Empty k_range means 1..r.
SweepResult order_sweep(const ContinuousModel& g, double h, const std::vector<Eigen::Index>& k_range,
                        const SweepOptions& options = {});

}  // namespace loewdisc
