#pragma once

#include <complex>
#include <functional>

#include <Eigen/Dense>

namespace loewdisc {

using cdouble = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

namespace linalg {

/// Throws InvalidArgument when any entry is NaN/Inf.
void require_finite(const CMatrix& a, const char* name);
void require_finite(const RMatrix& a, const char* name);

/// Largest |imag| relative to the largest |entry| (0 for an all-zero matrix).
double relative_imaginary_residue(const CMatrix& a);

struct SvdResult {
    CMatrix U;               ///< thin left singular vectors
    RVector singular_values; ///< descending
    CMatrix V;               ///< thin right singular vectors
};

SvdResult svd(const CMatrix& a);

struct RealSvdResult {
    RMatrix U;
    RVector singular_values;
    RMatrix V;
};

RealSvdResult svd(const RMatrix& a);

/// A = Q T Q^H with T upper triangular; the first `n_selected` diagonal
/// entries of T are exactly the eigenvalues that satisfied the predicate.
struct SchurResult {
    CMatrix Q;
    CMatrix T;
    Eigen::Index n_selected = 0;

    CVector eigenvalues() const { return T.diagonal(); }
};

using EigenvaluePredicate = std::function<bool(cdouble)>;

SchurResult schur(const CMatrix& a);
SchurResult ordered_schur(const CMatrix& a, const EigenvaluePredicate& select);

/// Matrix exponential by scaling and squaring with a Pade approximant.
RMatrix expm(const RMatrix& a);

enum class LyapunovKind { continuous, discrete };

/// continuous: A X + X A^H + Q = 0
/// discrete:   A X A^H - X + Q = 0
CMatrix solve_lyapunov(const CMatrix& a, const CMatrix& q, LyapunovKind kind);

/// Real convenience wrapper; the imaginary part of the solution is discarded
/// after checking it is at rounding level.
RMatrix solve_lyapunov(const RMatrix& a, const RMatrix& q, LyapunovKind kind);

/// A X + X B = C (Bartels-Stewart on complex Schur forms).
CMatrix solve_sylvester(const CMatrix& a, const CMatrix& b, const CMatrix& c);

/// Orthonormal real basis of span{Re V, Im V}, which must have dimension
/// V.cols() (true for a conjugation-closed complex subspace).
RMatrix real_basis(const CMatrix& v);

CVector eigenvalues(const RMatrix& a);

}  // namespace linalg
}  // namespace loewdisc
