#include "loewdisc/baselines.hpp"

#include <cmath>
#include <sstream>

#include "loewdisc/error.hpp"

namespace loewdisc {

namespace {

void check_period(double h) {
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw InvalidArgument("sampling period h must be positive");
    }
}

}  // namespace

DiscreteStateSpace zoh(const ContinuousStateSpace& g, double h) {
    g.validate();
    check_period(h);
    const auto n = g.order();
    const auto m = g.inputs();
    RMatrix aug = RMatrix::Zero(n + m, n + m);
    aug.topLeftCorner(n, n) = g.A;
    aug.topRightCorner(n, m) = g.B;
    const RMatrix e = linalg::expm(aug * h);
    return {e.topLeftCorner(n, n), e.topRightCorner(n, m), g.C, g.D, h};
}

DiscreteStateSpace tustin(const ContinuousStateSpace& g, double h) {
    g.validate();
    check_period(h);
    const auto n = g.order();
    const RMatrix half = g.A * (h / 2.0);
    const RMatrix id = RMatrix::Identity(n, n);
    Eigen::PartialPivLU<RMatrix> lu(id - half);
    if (n > 0 && !(lu.rcond() > 1e-14)) {
        std::ostringstream os;
        os << "Tustin map undefined: A has an eigenvalue at 2/h = " << 2.0 / h;
        throw PoleHit(2.0 / h, os.str());
    }
    const RMatrix m = n > 0 ? RMatrix(lu.inverse()) : RMatrix(0, 0);
    const RMatrix mb = m * g.B;
    return {m * (id + half), mb * h, g.C * m, g.D + g.C * mb * (h / 2.0), h};
}

DiscreteStateSpace impulse_invariant(const ContinuousStateSpace& g, double h) {
    g.validate();
    check_period(h);
    if (!g.D.isZero(0.0)) {
        throw Unsupported("impulse-invariant discretisation needs a strictly proper model (D = 0)");
    }
    const RMatrix e = linalg::expm(g.A * h);
    return {e, g.B, h * g.C * e, h * g.C * g.B, h};
}

}  // namespace loewdisc
