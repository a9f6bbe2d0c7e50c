#include "loewdisc/stabilize.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "loewdisc/baselines.hpp"
#include "loewdisc/error.hpp"

namespace loewdisc {

namespace {

constexpr double kBoundary = 1e-8;
constexpr double kMultiplicityTol = 1e-8;
// Balanced directions below this fraction of sigma_1 are treated as non-minimal.
constexpr double kMinimalityTol = 1e-10;
constexpr std::array<double, 5> kAlphas{1.0, 2.0, 0.5, 4.0, 0.25};

DiscreteStateSpace empty_model(const DiscreteStateSpace& like, RMatrix d) {
    return {RMatrix(0, 0), RMatrix(0, like.inputs()), RMatrix(like.outputs(), 0), std::move(d), like.h};
}

// Square-root factor L with P = L L^T for a symmetric positive semidefinite P.
RMatrix psd_factor(const RMatrix& p) {
    const RMatrix sym = 0.5 * (p + p.transpose());
    Eigen::SelfAdjointEigenSolver<RMatrix> es(sym);
    if (es.info() != Eigen::Success) {
        throw NumericFailure("symmetric eigensolver failed on a Gramian");
    }
    const RVector d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * d.asDiagonal();
}

std::size_t multiplicity(const std::vector<double>& values) {
    if (values.empty()) {
        return 0;
    }
    std::size_t q = 1;
    while (q < values.size() && values[q] >= values[0] * (1.0 - kMultiplicityTol)) {
        ++q;
    }
    return q;
}

HankelSpectrum spectrum_from_gramians(const RMatrix& p, const RMatrix& q) {
    HankelSpectrum out;
    if (p.rows() == 0) {
        return out;
    }
    const RVector sv = linalg::svd(RMatrix(psd_factor(q).transpose() * psd_factor(p))).singular_values;
    out.values.assign(sv.data(), sv.data() + sv.size());
    out.q = multiplicity(out.values);
    return out;
}

double all_pass_deviation(const DiscreteStateSpace& target, const DiscreteStateSpace& approx, double sigma) {
    double worst = 0.0;
    constexpr int kProbe = 32;
    for (int i = 0; i < kProbe; ++i) {
        const double theta = std::numbers::pi * (i + 0.37) / kProbe;
        const cdouble z = std::polar(1.0, theta);
        const CMatrix diff = frequency_response(target, z) - frequency_response(approx, z);
        const double gain = linalg::svd(diff).singular_values(0);
        worst = std::max(worst, std::abs(gain - sigma));
    }
    return worst / sigma;
}

}  // namespace

DiscreteStateSpace parallel(const DiscreteStateSpace& g1, const DiscreteStateSpace& g2) {
    if (g1.inputs() != g2.inputs() || g1.outputs() != g2.outputs()) {
        throw DimensionError("parallel connection needs matching input/output dimensions");
    }
    if (g1.h != g2.h) {
        throw InvalidArgument("parallel connection needs equal sampling periods");
    }
    const auto n1 = g1.order();
    const auto n2 = g2.order();
    DiscreteStateSpace out;
    out.A = RMatrix::Zero(n1 + n2, n1 + n2);
    out.A.topLeftCorner(n1, n1) = g1.A;
    out.A.bottomRightCorner(n2, n2) = g2.A;
    out.B.resize(n1 + n2, g1.inputs());
    out.B << g1.B, g2.B;
    out.C.resize(g1.outputs(), n1 + n2);
    out.C << g1.C, g2.C;
    out.D = g1.D + g2.D;
    out.h = g1.h;
    return out;
}

AdditiveSplit split_stable_antistable(const DiscreteStateSpace& g) {
    g.validate();
    const auto n = g.order();
    for (const cdouble p : poles(g)) {
        if (std::abs(std::abs(p) - 1.0) <= kBoundary) {
            std::ostringstream os;
            os.precision(17);
            os << "pole " << p << " lies on the unit circle; the stable/antistable split is undefined";
            throw NumericFailure(os.str());
        }
    }
    const linalg::SchurResult s =
        linalg::ordered_schur(CMatrix(g.A.cast<cdouble>()), [](cdouble z) { return std::abs(z) < 1.0; });
    const Eigen::Index ns = s.n_selected;
    if (ns == n) {
        return {g, empty_model(g, RMatrix::Zero(g.outputs(), g.inputs()))};
    }
    if (ns == 0) {
        DiscreteStateSpace anti = g;
        anti.D.setZero();
        return {empty_model(g, g.D), anti};
    }

    const Eigen::Index nu = n - ns;
    const CMatrix t11 = s.T.topLeftCorner(ns, ns);
    const CMatrix t12 = s.T.topRightCorner(ns, nu);
    const CMatrix t22 = s.T.bottomRightCorner(nu, nu);
    // T11 X - X T22 + T12 = 0 decouples the two invariant subspaces.
    const CMatrix x = linalg::solve_sylvester(t11, -t22, -t12);
    const CMatrix vs = s.Q.leftCols(ns);
    const CMatrix vu = s.Q.leftCols(ns) * x + s.Q.rightCols(nu);

    RMatrix basis(n, n);
    basis << linalg::real_basis(vs), linalg::real_basis(vu);
    Eigen::PartialPivLU<RMatrix> lu(basis);
    if (!(lu.rcond() > 1e-13)) {
        throw NumericFailure("stable and antistable invariant subspaces are numerically dependent");
    }
    const RMatrix at = lu.solve(RMatrix(g.A * basis));
    const RMatrix bt = lu.solve(g.B);
    const RMatrix ct = g.C * basis;

    AdditiveSplit out;
    out.stable = {at.topLeftCorner(ns, ns), bt.topRows(ns), ct.leftCols(ns), g.D, g.h};
    out.antistable = {at.bottomRightCorner(nu, nu), bt.bottomRows(nu), ct.rightCols(nu),
                      RMatrix::Zero(g.outputs(), g.inputs()), g.h};
    return out;
}

DiscreteStateSpace l2_truncate(const DiscreteStateSpace& g) {
    return split_stable_antistable(g).stable;
}

HankelSpectrum hankel_spectrum(const DiscreteStateSpace& stable) {
    stable.validate();
    if (stable.order() == 0) {
        return {};
    }
    if (!is_stable(stable)) {
        throw InvalidArgument("Hankel singular values need a stable model");
    }
    const RMatrix p = linalg::solve_lyapunov(stable.A, RMatrix(stable.B * stable.B.transpose()),
                                             linalg::LyapunovKind::discrete);
    const RMatrix q = linalg::solve_lyapunov(RMatrix(stable.A.transpose()), RMatrix(stable.C.transpose() * stable.C),
                                             linalg::LyapunovKind::discrete);
    return spectrum_from_gramians(p, q);
}

HankelSpectrum hankel_spectrum_antistable(const DiscreteStateSpace& antistable) {
    antistable.validate();
    if (antistable.order() == 0) {
        return {};
    }
    for (const cdouble p : poles(antistable)) {
        if (!(std::abs(p) > 1.0)) {
            throw InvalidArgument("antistable Hankel spectrum needs every pole outside the unit circle");
        }
    }
    // antistable(1/z) = -C A^{-1} B - C A^{-1} (z I - A^{-1})^{-1} A^{-1} B
    Eigen::PartialPivLU<RMatrix> lu(antistable.A);
    const RMatrix ainv = lu.inverse();
    DiscreteStateSpace reflected{ainv, ainv * antistable.B, -antistable.C * ainv,
                                 -antistable.C * ainv * antistable.B, antistable.h};
    return hankel_spectrum(reflected);
}

ContinuousStateSpace to_continuous_moebius(const DiscreteStateSpace& g, double alpha) {
    g.validate();
    const auto n = g.order();
    const RMatrix id = RMatrix::Identity(n, n);
    if (n == 0) {
        return {RMatrix(0, 0), g.B, g.C, g.D};
    }
    Eigen::PartialPivLU<RMatrix> lu(id + g.A);
    if (!(lu.rcond() > 1e-12)) {
        throw PoleHit(-1.0, "Moebius transport undefined: pole at z = -1");
    }
    const RMatrix m = lu.inverse();
    const double r = std::sqrt(2.0 * alpha);
    return {alpha * (g.A - id) * m, r * m * g.B, r * g.C * m, g.D - g.C * m * g.B};
}

DiscreteStateSpace to_discrete_moebius(const ContinuousStateSpace& g, double alpha, double h) {
    DiscreteStateSpace d = tustin(g, 2.0 / alpha);
    d.h = h;
    return d;
}

GloverResult glover_nehari(const ContinuousStateSpace& g) {
    g.validate();
    GloverResult out;
    const auto n = g.order();
    if (n == 0) {
        out.antistable = g;
        return out;
    }
    if (!is_stable(g)) {
        throw InvalidArgument("Hankel-norm construction needs a stable model");
    }
    const RMatrix p =
        linalg::solve_lyapunov(g.A, RMatrix(g.B * g.B.transpose()), linalg::LyapunovKind::continuous);
    const RMatrix q = linalg::solve_lyapunov(RMatrix(g.A.transpose()), RMatrix(g.C.transpose() * g.C),
                                             linalg::LyapunovKind::continuous);
    const RMatrix lp = psd_factor(p);
    const RMatrix lq = psd_factor(q);
    const linalg::RealSvdResult s = linalg::svd(RMatrix(lq.transpose() * lp));
    const RVector& sv = s.singular_values;
    if (sv(0) <= 0.0) {
        out.antistable = {RMatrix(0, 0), RMatrix(0, g.inputs()), RMatrix(g.outputs(), 0), g.D};
        return out;
    }
    Eigen::Index nr = 0;
    while (nr < sv.size() && sv(nr) > kMinimalityTol * sv(0)) {
        ++nr;
    }
    // Balanced realisation of the minimal part.
    const RVector isq = sv.head(nr).cwiseSqrt().cwiseInverse();
    const RMatrix tl = isq.asDiagonal() * s.U.leftCols(nr).transpose() * lq.transpose();
    const RMatrix tr = lp * s.V.leftCols(nr) * isq.asDiagonal();
    const RMatrix ab = tl * g.A * tr;
    const RMatrix bb = tl * g.B;
    const RMatrix cb = g.C * tr;

    std::vector<double> values(sv.data(), sv.data() + nr);
    const auto mult = static_cast<Eigen::Index>(multiplicity(values));
    const double sigma = sv(0);
    const Eigen::Index rest = nr - mult;

    // U with B_sigma = -C_sigma^T U.
    const RMatrix c_sig_t = cb.leftCols(mult).transpose();
    const RMatrix u = -c_sig_t.completeOrthogonalDecomposition().solve(RMatrix(bb.topRows(mult)));

    const RMatrix arr = ab.bottomRightCorner(rest, rest);
    const RMatrix br = bb.bottomRows(rest);
    const RMatrix cr = cb.rightCols(rest);
    const RVector sig_r = sv.segment(mult, rest);
    const RVector gamma_inv = (sig_r.array().square() - sigma * sigma).inverse().matrix();

    out.sigma = sigma;
    out.q = static_cast<std::size_t>(mult);
    out.antistable.A = gamma_inv.asDiagonal() * (sigma * sigma * arr.transpose() + sig_r.asDiagonal() * arr * sig_r.asDiagonal() -
                                                 sigma * cr.transpose() * u * br.transpose());
    out.antistable.B = gamma_inv.asDiagonal() * (sig_r.asDiagonal() * br + sigma * cr.transpose() * u);
    out.antistable.C = cr * sig_r.asDiagonal() + sigma * u * br.transpose();
    out.antistable.D = g.D - sigma * u;
    return out;
}

NehariResult nehari_project_detailed(const DiscreteStateSpace& g) {
    const AdditiveSplit split = split_stable_antistable(g);
    NehariResult res;
    res.stable_order = static_cast<std::size_t>(split.stable.order());
    res.antistable_order = static_cast<std::size_t>(split.antistable.order());
    if (split.antistable.order() == 0) {
        res.model = g;
        return res;
    }
    const HankelSpectrum spec = hankel_spectrum_antistable(split.antistable);
    const double sigma = spec.values.front();

    std::ostringstream failures;
    for (const double alpha : kAlphas) {
        try {
            const ContinuousStateSpace gc = to_continuous_moebius(split.antistable, alpha);
            // H(s) = gc(-s) is stable.
            const ContinuousStateSpace reflected{-gc.A, gc.B, -gc.C, gc.D};
            const GloverResult gl = glover_nehari(reflected);
            for (const cdouble p : poles(gl.antistable)) {
                if (!(p.real() > 0.0)) {
                    throw NumericFailure("Hankel-norm approximant is not antistable");
                }
            }
            const ContinuousStateSpace qc{-gl.antistable.A, gl.antistable.B, -gl.antistable.C, gl.antistable.D};
            const DiscreteStateSpace qd = to_discrete_moebius(qc, alpha, g.h);
            if (!is_stable(qd)) {
                throw NumericFailure("projected part is not stable");
            }
            const double dev = all_pass_deviation(split.antistable, qd, sigma);
            if (!(dev < 1e-6)) {
                std::ostringstream os;
                os << "error is not all-pass (relative deviation " << dev << ")";
                throw NumericFailure(os.str());
            }
            res.model = parallel(split.stable, qd);
            res.error = sigma;
            res.q = gl.q;
            res.alpha = alpha;
            return res;
        } catch (const Error& e) {
            failures << " [alpha " << alpha << ": " << e.what() << "]";
        }
    }
    throw NumericFailure("stable projection failed for every Moebius parameter:" + failures.str());
}

DiscreteStateSpace nehari_project(const DiscreteStateSpace& g) {
    return nehari_project_detailed(g).model;
}

DiscreteStateSpace stabilize(const DiscreteStateSpace& g, Stabilization method) {
    switch (method) {
        case Stabilization::nehari:
            return nehari_project(g);
        case Stabilization::l2:
            return l2_truncate(g);
        case Stabilization::none:
            return g;
    }
    throw InvalidArgument("unknown stabilization method");
}

}  // namespace loewdisc
