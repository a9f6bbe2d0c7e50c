#include "loewdisc/linalg.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "loewdisc/error.hpp"

namespace loewdisc::linalg {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double scale_of(const CMatrix& a) {
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

// Unitary swap of the adjacent diagonal entries k, k+1 of an upper-triangular T.
void swap_adjacent(CMatrix& t, CMatrix& q, Eigen::Index k) {
    const cdouble t11 = t(k, k);
    const cdouble t22 = t(k + 1, k + 1);
    // Eigenvector of the 2x2 block for eigenvalue t22.
    Eigen::Vector2cd v(t(k, k + 1), t22 - t11);
    const double nv = v.norm();
    if (nv == 0.0) {
        return;
    }
    v /= nv;
    Eigen::Matrix2cd z;
    z.col(0) = v;
    z.col(1) << -std::conj(v(1)), std::conj(v(0));

    t.middleRows(k, 2) = (z.adjoint() * t.middleRows(k, 2)).eval();
    t.middleCols(k, 2) = (t.middleCols(k, 2) * z).eval();
    q.middleCols(k, 2) = (q.middleCols(k, 2) * z).eval();
    t(k + 1, k) = 0.0;
    t(k, k) = t22;
    t(k + 1, k + 1) = t11;
}

}  // namespace

void require_finite(const CMatrix& a, const char* name) {
    if (!a.allFinite()) {
        throw InvalidArgument(std::string("matrix ") + name + " has non-finite entries");
    }
}

void require_finite(const RMatrix& a, const char* name) {
    if (!a.allFinite()) {
        throw InvalidArgument(std::string("matrix ") + name + " has non-finite entries");
    }
}

double relative_imaginary_residue(const CMatrix& a) {
    const double s = scale_of(a);
    if (s == 0.0) {
        return 0.0;
    }
    return a.imag().cwiseAbs().maxCoeff() / s;
}

SvdResult svd(const CMatrix& a) {
    require_finite(a, "svd input");
    if (a.size() == 0) {
        return {CMatrix(a.rows(), 0), RVector(0), CMatrix(a.cols(), 0)};
    }
    Eigen::JacobiSVD<CMatrix> solver(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (solver.info() != Eigen::Success) {
        std::ostringstream os;
        os << "SVD of a " << a.rows() << "x" << a.cols() << " matrix failed to converge (info="
           << static_cast<int>(solver.info()) << ")";
        throw NumericFailure(os.str());
    }
    return {solver.matrixU(), solver.singularValues(), solver.matrixV()};
}

RealSvdResult svd(const RMatrix& a) {
    require_finite(a, "svd input");
    if (a.size() == 0) {
        return {RMatrix(a.rows(), 0), RVector(0), RMatrix(a.cols(), 0)};
    }
    Eigen::JacobiSVD<RMatrix> solver(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (solver.info() != Eigen::Success) {
        std::ostringstream os;
        os << "SVD of a " << a.rows() << "x" << a.cols() << " matrix failed to converge (info="
           << static_cast<int>(solver.info()) << ")";
        throw NumericFailure(os.str());
    }
    return {solver.matrixU(), solver.singularValues(), solver.matrixV()};
}

SchurResult schur(const CMatrix& a) {
    if (a.rows() != a.cols()) {
        throw DimensionError("Schur decomposition needs a square matrix");
    }
    require_finite(a, "schur input");
    if (a.rows() == 0) {
        return {CMatrix(0, 0), CMatrix(0, 0), 0};
    }
    Eigen::ComplexSchur<CMatrix> solver(a.rows());
    solver.setMaxIterations(60 * a.rows());
    solver.compute(a, true);
    if (solver.info() != Eigen::Success) {
        std::ostringstream os;
        os << "complex Schur iteration did not converge within " << 60 * a.rows()
           << " iterations for a " << a.rows() << "x" << a.rows() << " matrix";
        throw NumericFailure(os.str());
    }
    CMatrix t = solver.matrixT();
    t.triangularView<Eigen::StrictlyLower>().setZero();
    return {solver.matrixU(), t, 0};
}

SchurResult ordered_schur(const CMatrix& a, const EigenvaluePredicate& select) {
    SchurResult res = schur(a);
    const Eigen::Index n = res.T.rows();
    Eigen::Index placed = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
        if (!select(res.T(j, j))) {
            continue;
        }
        for (Eigen::Index k = j; k > placed; --k) {
            swap_adjacent(res.T, res.Q, k - 1);
        }
        ++placed;
    }
    res.n_selected = placed;
    return res;
}

RMatrix expm(const RMatrix& a) {
    if (a.rows() != a.cols()) {
        throw DimensionError("expm needs a square matrix");
    }
    require_finite(a, "expm input");
    if (a.rows() == 0) {
        return a;
    }
    RMatrix out = a.exp();
    if (!out.allFinite()) {
        throw NumericFailure("matrix exponential overflowed");
    }
    return out;
}

CMatrix solve_sylvester(const CMatrix& a, const CMatrix& b, const CMatrix& c) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || c.rows() != a.rows() || c.cols() != b.rows()) {
        throw DimensionError("Sylvester equation dimensions are inconsistent");
    }
    const Eigen::Index n = a.rows();
    const Eigen::Index m = b.rows();
    if (n == 0 || m == 0) {
        return CMatrix::Zero(n, m);
    }
    const SchurResult sa = schur(a);
    const SchurResult sb = schur(b);
    const CMatrix f = sa.Q.adjoint() * c * sb.Q;
    const double scale = std::max({scale_of(sa.T), scale_of(sb.T), std::numeric_limits<double>::min()});

    CMatrix y(n, m);
    for (Eigen::Index j = 0; j < m; ++j) {
        CVector rhs = f.col(j);
        if (j > 0) {
            rhs -= y.leftCols(j) * sb.T.col(j).head(j);
        }
        CMatrix lhs = sa.T;
        lhs.diagonal().array() += sb.T(j, j);
        for (Eigen::Index i = 0; i < n; ++i) {
            if (std::abs(lhs(i, i)) <= 1e3 * kEps * scale) {
                std::ostringstream os;
                os << "Sylvester equation is singular: eigenvalue " << sa.T(i, i) << " of A and "
                   << sb.T(j, j) << " of B sum to zero";
                throw SingularEquation(os.str());
            }
        }
        y.col(j) = lhs.triangularView<Eigen::Upper>().solve(rhs);
    }
    return sa.Q * y * sb.Q.adjoint();
}

CMatrix solve_lyapunov(const CMatrix& a, const CMatrix& q, LyapunovKind kind) {
    if (a.rows() != a.cols() || q.rows() != a.rows() || q.cols() != a.rows()) {
        throw DimensionError("Lyapunov equation dimensions are inconsistent");
    }
    if (kind == LyapunovKind::continuous) {
        return solve_sylvester(a, a.adjoint(), -q);
    }

    // Stein equation on the Schur form: T Y T^H - Y = -F, solved column by
    // column from the last one since T^H is lower triangular.
    const Eigen::Index n = a.rows();
    if (n == 0) {
        return CMatrix(0, 0);
    }
    const SchurResult s = schur(a);
    const CMatrix& t = s.T;
    const CMatrix f = s.Q.adjoint() * q * s.Q;
    const double scale = std::max(scale_of(t) * scale_of(t), 1.0);

    CMatrix y = CMatrix::Zero(n, n);
    for (Eigen::Index j = n - 1; j >= 0; --j) {
        // sum_{l>j} y_l * conj(T(j,l))
        CVector acc = CVector::Zero(n);
        for (Eigen::Index l = j + 1; l < n; ++l) {
            acc += y.col(l) * std::conj(t(j, l));
        }
        CVector rhs = -f.col(j) - t * acc;
        CMatrix lhs = std::conj(t(j, j)) * t;
        lhs.diagonal().array() -= 1.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (std::abs(lhs(i, i)) <= 1e3 * kEps * scale) {
                std::ostringstream os;
                os << "discrete Lyapunov equation is singular: eigenvalues " << t(i, i) << " and "
                   << t(j, j) << " have reciprocal-conjugate product 1";
                throw SingularEquation(os.str());
            }
        }
        y.col(j) = lhs.triangularView<Eigen::Upper>().solve(rhs);
    }
    return s.Q * y * s.Q.adjoint();
}

RMatrix solve_lyapunov(const RMatrix& a, const RMatrix& q, LyapunovKind kind) {
    const CMatrix x = solve_lyapunov(CMatrix(a.cast<cdouble>()), CMatrix(q.cast<cdouble>()), kind);
    if (relative_imaginary_residue(x) > 1e-8) {
        throw NumericFailure("real Lyapunov solve produced a complex solution");
    }
    return x.real();
}

RMatrix real_basis(const CMatrix& v) {
    const Eigen::Index k = v.cols();
    if (k == 0) {
        return RMatrix(v.rows(), 0);
    }
    RMatrix w(v.rows(), 2 * k);
    w << v.real(), v.imag();
    const RealSvdResult s = svd(w);
    const RVector& sv = s.singular_values;
    const bool full = sv(k - 1) > 1e-8 * sv(0);
    const bool closed = sv.size() <= k || sv(k) <= 1e-6 * sv(0);
    if (!full || !closed) {
        throw NumericFailure("complex basis does not span a conjugation-closed subspace");
    }
    return s.U.leftCols(k);
}

CVector eigenvalues(const RMatrix& a) {
    if (a.rows() != a.cols()) {
        throw DimensionError("eigenvalues need a square matrix");
    }
    if (a.rows() == 0) {
        return CVector(0);
    }
    require_finite(a, "eigenvalue input");
    Eigen::EigenSolver<RMatrix> solver(a, false);
    if (solver.info() != Eigen::Success) {
        throw NumericFailure("real Schur iteration did not converge");
    }
    return solver.eigenvalues();
}

}  // namespace loewdisc::linalg
