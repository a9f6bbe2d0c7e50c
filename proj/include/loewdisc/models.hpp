#pragma once

#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "loewdisc/linalg.hpp"

namespace loewdisc {

/// x' = A x + B u,  y = C x + D u
struct ContinuousStateSpace {
    RMatrix A, B, C, D;

    Eigen::Index order() const { return A.rows(); }
    Eigen::Index inputs() const { return B.cols(); }
    Eigen::Index outputs() const { return C.rows(); }
    bool is_siso() const { return inputs() == 1 && outputs() == 1; }

    /// Throws DimensionError / InvalidArgument on inconsistent or non-finite data.
    void validate() const;
};

/// x'(t) = A0 x(t) + A1 x(t - tau) + A2 x(t - tau - gamma) + B u(t),  y = C x
struct TimeDelayModel {
    RMatrix A0, A1, A2, B, C;
    double tau = 0.0;
    double gamma = 0.0;

    Eigen::Index order() const { return A0.rows(); }
    bool is_siso() const { return B.cols() == 1 && C.rows() == 1; }
    void validate() const;
};

/// Any model that can only be evaluated pointwise in the Laplace domain.
struct FrequencyFunction {
    std::string name;
    Eigen::Index inputs = 1;
    Eigen::Index outputs = 1;
    std::function<CMatrix(cdouble)> evaluate;
};

using ContinuousModel = std::variant<ContinuousStateSpace, TimeDelayModel, FrequencyFunction>;

/// x[k+1] = A x[k] + B u[k],  y[k] = C x[k] + D u[k], sampled every h seconds.
struct DiscreteStateSpace {
    RMatrix A, B, C, D;
    double h = 1.0;

    Eigen::Index order() const { return A.rows(); }
    Eigen::Index inputs() const { return B.cols(); }
    Eigen::Index outputs() const { return C.rows(); }
    bool is_siso() const { return inputs() == 1 && outputs() == 1; }
    void validate() const;
};

/// E x[k+1] = A x[k] + B u[k],  y[k] = C x[k]   (SISO, complex)
struct DescriptorModel {
    CMatrix E, A;
    CVector B;
    Eigen::RowVectorXcd C;

    Eigen::Index order() const { return A.rows(); }
    void validate() const;
};

// ---------------------------------------------------------------- evaluation

CMatrix frequency_response(const ContinuousModel& g, cdouble s);
CMatrix frequency_response(const DiscreteStateSpace& g, cdouble z);

/// Scalar transfer value; throws DimensionError for non-SISO models.
cdouble eval_continuous(const ContinuousModel& g, cdouble s);
cdouble eval_discrete(const DiscreteStateSpace& g, cdouble z);
/// C (zE - A)^{-1} B
cdouble eval_discrete(const DescriptorModel& g, cdouble z);

bool is_siso(const ContinuousModel& g);
std::string describe(const ContinuousModel& g);

// ------------------------------------------------------------------- poles

std::vector<cdouble> poles(const ContinuousStateSpace& g);
std::vector<cdouble> poles(const DiscreteStateSpace& g);

struct DescriptorPoles {
    std::vector<cdouble> finite;
    Eigen::Index infinite = 0;
};

DescriptorPoles poles(const DescriptorModel& g);

/// Re(p) < 0 for every pole; the imaginary axis counts as unstable.
bool is_stable(const ContinuousStateSpace& g);
/// |p| < 1 - margin for every pole; the unit circle counts as unstable.
bool is_stable(const DiscreteStateSpace& g, double margin = 0.0);

// --------------------------------------------------------------- responses

/// y(t_i) = C expm(A t_i) B on a uniform grid (the D impulse is excluded).
std::vector<double> impulse_response_continuous(const ContinuousStateSpace& g, std::span<const double> t_grid);

/// Unit step response x(0) = 0, computed by exact exponential stepping.
std::vector<double> step_response_continuous(const ContinuousStateSpace& g, std::span<const double> t_grid);

/// y[0] = D, y[k] = C A^{k-1} B.
std::vector<double> impulse_response_discrete(const DiscreteStateSpace& g, std::size_t n);

/// Step response of the delay model with zero history, fixed-step RK4 and
/// linear interpolation of delayed states. Samples at t = 0, dt, ..., <= t_end.
std::vector<double> step_response_tds(const TimeDelayModel& g, double t_end, double dt);

/// Holds y_d[k] on [kh, (k+1)h) over a fine grid of `n` points with spacing dt.
std::vector<double> hold(std::span<const double> y_d, double h, double dt, std::size_t n);

/// Ideal sampler at multiples of h, discrete recursion, zero-order hold back
/// onto the input's fine grid (spacing dt, h/dt an integer).
std::vector<double> sample_and_hold_output(const DiscreteStateSpace& g, std::span<const double> u, double dt);

/// Runs the discrete recursion on an input sequence (SISO).
std::vector<double> simulate_discrete(const DiscreteStateSpace& g, std::span<const double> u);

/// Uniform grid 0, dt, 2 dt, ... with n points.
std::vector<double> uniform_grid(double dt, std::size_t n);

/// h / dt rounded to an integer, validated to 1e-9 relative.
std::size_t subdivision(double h, double dt);

}  // namespace loewdisc
