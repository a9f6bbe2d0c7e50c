#include "loewdisc/loewner.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "loewdisc/error.hpp"

namespace loewdisc {

namespace {

constexpr double kImagTol = 1e-6;
constexpr double kMaxCondition = 1e12;

CMatrix pair_transform(Eigen::Index n) {
    if (n % 2 != 0) {
        throw InvalidArgument("conjugate-pair transform needs an even dimension");
    }
    const double s = 1.0 / std::numbers::sqrt2;
    CMatrix j = CMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; i += 2) {
        j(i, i) = s;
        j(i, i + 1) = cdouble(0.0, -s);
        j(i + 1, i) = s;
        j(i + 1, i + 1) = cdouble(0.0, s);
    }
    return j;
}

void check_real(const CMatrix& m, const char* name) {
    const double residue = linalg::relative_imaginary_residue(m);
    if (residue > kImagTol) {
        std::ostringstream os;
        os << "conjugate-inconsistent data: " << name << " keeps a relative imaginary part of " << residue;
        throw NumericFailure(os.str());
    }
}

Eigen::Index count_above(const RVector& sv, double tol) {
    if (sv.size() == 0 || sv(0) == 0.0) {
        return 0;
    }
    Eigen::Index r = 0;
    while (r < sv.size() && sv(r) >= tol * sv(0)) {
        ++r;
    }
    return r;
}

}  // namespace

cdouble holder_transfer(double omega, double h) {
    if (!(h > 0.0)) {
        throw InvalidArgument("sampling period h must be positive");
    }
    const double theta = omega * h;
    if (std::abs(theta) < 1e-8) {
        // Series of (1 - e^{-j theta}) / (j theta).
        return {1.0 - theta * theta / 6.0, -theta / 2.0};
    }
    const cdouble jt(0.0, theta);
    return (1.0 - std::exp(-jt)) / jt;
}

void FrequencyDataSet::validate() const {
    if (!(h > 0.0)) {
        throw InvalidArgument("data set sampling period must be positive");
    }
    if (nodes.size() != 2 * omegas.size() || values.size() != nodes.size()) {
        throw InvalidArgument("data set must hold one conjugate pair per frequency");
    }
    const double nyquist = std::numbers::pi / h;
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        if (!(omegas[i] > 0.0 && omegas[i] < nyquist)) {
            throw InvalidArgument("data set frequencies must lie strictly inside (0, pi/h)");
        }
        if (i > 0 && !(omegas[i] > omegas[i - 1])) {
            throw InvalidArgument("data set frequencies must be strictly increasing");
        }
        const cdouble z = nodes[2 * i];
        if (std::abs(std::abs(z) - 1.0) > 1e-12) {
            throw InvalidArgument("data set nodes must lie on the unit circle");
        }
        if (std::abs(nodes[2 * i + 1] - std::conj(z)) > 1e-14 ||
            std::abs(values[2 * i + 1] - std::conj(values[2 * i])) > 1e-14 * (1.0 + std::abs(values[2 * i]))) {
            throw InvalidArgument("data set is not conjugate-closed");
        }
        if (!std::isfinite(values[2 * i].real()) || !std::isfinite(values[2 * i].imag())) {
            throw InvalidArgument("data set values must be finite");
        }
    }
}

std::vector<double> linear_frequency_grid(double h, std::size_t count, const FrequencySampling& sampling) {
    if (!(h > 0.0)) {
        throw InvalidArgument("sampling period h must be positive");
    }
    const double lo = sampling.omega_min;
    const double hi = std::numbers::pi / h - sampling.omega_margin;
    if (count == 0 || !(lo > 0.0) || !(hi > lo)) {
        throw InvalidArgument("empty or invalid frequency interval");
    }
    std::vector<double> w(count);
    if (count == 1) {
        w[0] = 0.5 * (lo + hi);
        return w;
    }
    for (std::size_t i = 0; i < count; ++i) {
        w[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    return w;
}

FrequencyDataSet make_dataset(std::vector<double> omegas, double h, const std::function<cdouble(double)>& value) {
    FrequencyDataSet data;
    data.h = h;
    data.nodes.reserve(2 * omegas.size());
    data.values.reserve(2 * omegas.size());
    for (const double w : omegas) {
        const cdouble z = std::polar(1.0, w * h);
        const cdouble v = value(w);
        data.nodes.push_back(z);
        data.nodes.push_back(std::conj(z));
        data.values.push_back(v);
        data.values.push_back(std::conj(v));
    }
    data.omegas = std::move(omegas);
    data.validate();
    return data;
}

FrequencyDataSet build_dataset(const ContinuousModel& g, double h, std::size_t m, const FrequencySampling& sampling) {
    if (m < 1) {
        throw InvalidArgument("number of interpolation points m must be at least 1");
    }
    if (!is_siso(g)) {
        throw Unsupported("Loewner interpolation is implemented for single-input single-output models only");
    }
    return make_dataset(linear_frequency_grid(h, 2 * m, sampling), h, [&](double w) {
        try {
            return eval_continuous(g, cdouble(0.0, w)) / holder_transfer(w, h);
        } catch (const PoleHit&) {
            std::ostringstream os;
            os.precision(17);
            os << "model has a pole on the interpolation grid at omega = " << w;
            throw PoleHit(cdouble(0.0, w), os.str());
        }
    });
}

DataPartition partition(const FrequencyDataSet& data) {
    data.validate();
    if (data.pairs() == 0 || data.pairs() % 2 != 0) {
        throw InvalidArgument("partition needs an even, non-zero number of frequencies");
    }
    DataPartition part;
    for (std::size_t i = 0; i < data.pairs(); ++i) {
        auto& pts = (i % 2 == 0) ? part.mu : part.lambda;
        auto& vals = (i % 2 == 0) ? part.w_mu : part.w_lambda;
        for (std::size_t c = 0; c < 2; ++c) {
            pts.push_back(data.nodes[2 * i + c]);
            vals.push_back(data.values[2 * i + c]);
        }
    }
    return part;
}

LoewnerPencil build_pencil(const std::vector<cdouble>& mu, const std::vector<cdouble>& lambda,
                           const std::vector<cdouble>& w_mu, const std::vector<cdouble>& w_lambda) {
    if (mu.size() != w_mu.size() || lambda.size() != w_lambda.size()) {
        throw InvalidArgument("each interpolation point needs exactly one value");
    }
    const auto rows = static_cast<Eigen::Index>(mu.size());
    const auto cols = static_cast<Eigen::Index>(lambda.size());
    LoewnerPencil p{CMatrix(rows, cols), CMatrix(rows, cols), mu, lambda, w_mu, w_lambda};
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            const cdouble d = mu[i] - lambda[j];
            if (d == 0.0) {
                std::ostringstream os;
                os << "coincident interpolation points mu[" << i << "] = lambda[" << j << "] = " << mu[i];
                throw InvalidArgument(os.str());
            }
            p.L(i, j) = (w_mu[i] - w_lambda[j]) / d;
            p.Ls(i, j) = (mu[i] * w_mu[i] - lambda[j] * w_lambda[j]) / d;
        }
    }
    return p;
}

LoewnerPencil build_pencil(const DataPartition& part) {
    return build_pencil(part.mu, part.lambda, part.w_mu, part.w_lambda);
}

RealLoewnerPencil to_real_pencil(const LoewnerPencil& pencil) {
    if (pencil.L.rows() != pencil.L.cols()) {
        throw InvalidArgument("real pencil transform needs a square pencil");
    }
    const CMatrix j = pair_transform(pencil.size());
    const CVector b = Eigen::Map<const CVector>(pencil.w_mu.data(), pencil.size());
    const Eigen::RowVectorXcd c = Eigen::Map<const CVector>(pencil.w_lambda.data(), pencil.size()).transpose();
    const CMatrix l = j.adjoint() * pencil.L * j;
    const CMatrix ls = j.adjoint() * pencil.Ls * j;
    const CMatrix bj = j.adjoint() * b;
    const CMatrix cj = c * j;
    check_real(l, "Loewner matrix");
    check_real(ls, "shifted Loewner matrix");
    check_real(bj, "input vector");
    check_real(cj, "output vector");
    return {l.real(), ls.real(), bj.real(), cj.real()};
}

RankReport numerical_rank(const LoewnerPencil& pencil, double tol) {
    RankReport rep;
    rep.tolerance = tol;
    CMatrix row(pencil.L.rows(), pencil.L.cols() + pencil.Ls.cols());
    row << pencil.L, pencil.Ls;
    CMatrix col(pencil.L.rows() + pencil.Ls.rows(), pencil.L.cols());
    col << pencil.L, pencil.Ls;
    rep.singular_values_row = linalg::svd(row).singular_values;
    rep.singular_values_col = linalg::svd(col).singular_values;
    rep.r = count_above(rep.singular_values_row, tol);
    rep.r_col = count_above(rep.singular_values_col, tol);
    return rep;
}

DescriptorModel descriptor(const LoewnerPencil& pencil) {
    DescriptorModel d;
    d.E = -pencil.L;
    d.A = -pencil.Ls;
    d.B = Eigen::Map<const CVector>(pencil.w_mu.data(), static_cast<Eigen::Index>(pencil.w_mu.size()));
    d.C = Eigen::Map<const CVector>(pencil.w_lambda.data(), static_cast<Eigen::Index>(pencil.w_lambda.size()))
              .transpose();
    d.validate();
    return d;
}

DescriptorModel project(const LoewnerPencil& pencil, Eigen::Index k) {
    const Eigen::Index m = pencil.size();
    if (k < 1 || k > m) {
        std::ostringstream os;
        os << "projection order " << k << " outside [1, " << m << "]";
        throw InvalidArgument(os.str());
    }
    CMatrix row(m, 2 * m);
    row << pencil.L, pencil.Ls;
    CMatrix col(2 * m, m);
    col << pencil.L, pencil.Ls;
    const CMatrix y = linalg::svd(row).U.leftCols(k);
    const CMatrix x = linalg::svd(col).V.leftCols(k);
    const DescriptorModel full = descriptor(pencil);
    return {y.adjoint() * full.E * x, y.adjoint() * full.A * x, y.adjoint() * full.B, full.C * x};
}

DescriptorModel project(const RealLoewnerPencil& pencil, Eigen::Index k) {
    const Eigen::Index m = pencil.L.rows();
    if (k < 1 || k > m) {
        std::ostringstream os;
        os << "projection order " << k << " outside [1, " << m << "]";
        throw InvalidArgument(os.str());
    }
    RMatrix row(m, 2 * m);
    row << pencil.L, pencil.Ls;
    RMatrix col(2 * m, m);
    col << pencil.L, pencil.Ls;
    const RMatrix y = linalg::svd(row).U.leftCols(k);
    const RMatrix x = linalg::svd(col).V.leftCols(k);
    const RMatrix e = -(y.transpose() * pencil.L * x);
    const RMatrix a = -(y.transpose() * pencil.Ls * x);
    const RVector b = y.transpose() * pencil.B;
    const Eigen::RowVectorXd c = pencil.C * x;
    return {e.cast<cdouble>(), a.cast<cdouble>(), b.cast<cdouble>(), c.cast<cdouble>()};
}

DiscreteStateSpace realify(const DescriptorModel& model, double h, bool conjugate_pairs) {
    model.validate();
    CMatrix e = model.E;
    CMatrix a = model.A;
    CMatrix b = model.B;
    CMatrix c = model.C;
    if (conjugate_pairs) {
        const CMatrix j = pair_transform(model.order());
        e = j.adjoint() * e * j;
        a = j.adjoint() * a * j;
        b = j.adjoint() * b;
        c = c * j;
    }
    check_real(e, "E");
    check_real(a, "A");
    check_real(b, "B");
    check_real(c, "C");

    const RMatrix er = e.real();
    const RVector sv = linalg::svd(er).singular_values;
    if (sv.size() > 0 && !(sv(sv.size() - 1) * kMaxCondition > sv(0))) {
        std::ostringstream os;
        os << "projected E is singular (condition number " << (sv(0) / sv(sv.size() - 1))
           << "); the interpolant has a polynomial part";
        throw NumericFailure(os.str());
    }
    Eigen::PartialPivLU<RMatrix> lu(er);
    DiscreteStateSpace out;
    out.A = lu.solve(RMatrix(a.real()));
    out.B = lu.solve(RMatrix(b.real()));
    out.C = c.real();
    out.D = RMatrix::Zero(1, 1);
    out.h = h;
    out.validate();
    return out;
}

LoewnerInterpolant::LoewnerInterpolant(const FrequencyDataSet& data, double rank_tol)
    : data_(data), pencil_(build_pencil(partition(data))), real_(to_real_pencil(pencil_)) {
    const Eigen::Index m = real_.L.rows();
    RMatrix row(m, 2 * m);
    row << real_.L, real_.Ls;
    RMatrix col(2 * m, m);
    col << real_.L, real_.Ls;
    const linalg::RealSvdResult srow = linalg::svd(row);
    const linalg::RealSvdResult scol = linalg::svd(col);
    left_ = srow.U;
    right_ = scol.V;
    rank_.tolerance = rank_tol;
    rank_.singular_values_row = srow.singular_values;
    rank_.singular_values_col = scol.singular_values;
    rank_.r = count_above(srow.singular_values, rank_tol);
    rank_.r_col = count_above(scol.singular_values, rank_tol);
}

DiscreteStateSpace LoewnerInterpolant::model(Eigen::Index k) const {
    const Eigen::Index m = size();
    if (k < 1 || k > m) {
        std::ostringstream os;
        os << "projection order " << k << " outside [1, " << m << "]";
        throw InvalidArgument(os.str());
    }
    const auto y = left_.leftCols(k);
    const auto x = right_.leftCols(k);
    DescriptorModel d{(-(y.transpose() * real_.L * x)).cast<cdouble>(),
                      (-(y.transpose() * real_.Ls * x)).cast<cdouble>(),
                      (y.transpose() * real_.B).cast<cdouble>(), (real_.C * x).cast<cdouble>()};
    return realify(d, data_.h);
}

}  // namespace loewdisc
