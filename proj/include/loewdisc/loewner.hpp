#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "loewdisc/models.hpp"

namespace loewdisc {

/// Frequency response of the normalised zero-order hold, R(jw) = (1 - e^{-jwh}) / (jwh).
cdouble holder_transfer(double omega, double h);

/// Interpolation data on the unit circle. Entries are stored in conjugate
/// pairs: index 2i holds (e^{j w_i h}, value_i), index 2i+1 its conjugate.
struct FrequencyDataSet {
    double h = 1.0;
    std::vector<double> omegas;   ///< source frequencies, increasing, in (0, pi/h)
    std::vector<cdouble> nodes;   ///< 2 * omegas.size() points on the unit circle
    std::vector<cdouble> values;  ///< matching data values

    std::size_t pairs() const { return omegas.size(); }
    /// Throws InvalidArgument when the stored invariants do not hold.
    void validate() const;
};

/// How the interpolation frequencies are placed inside (0, w_N).
struct FrequencySampling {
    double omega_min = 1e-3;
    double omega_margin = 1e-3;  ///< the grid ends at pi/h - omega_margin
};

/// `count` linearly spaced frequencies over [omega_min, pi/h - omega_margin].
std::vector<double> linear_frequency_grid(double h, std::size_t count, const FrequencySampling& sampling = {});

/// Builds a conjugate-closed data set from arbitrary per-frequency values.
FrequencyDataSet make_dataset(std::vector<double> omegas, double h, const std::function<cdouble(double)>& value);

/// 2m frequencies, values R(jw)^{-1} G(jw).
FrequencyDataSet build_dataset(const ContinuousModel& g, double h, std::size_t m,
                               const FrequencySampling& sampling = {});

/// Left (mu) and right (lambda) interpolation points with their data.
struct DataPartition {
    std::vector<cdouble> mu, lambda;
    std::vector<cdouble> w_mu, w_lambda;
};

/// Alternating split along increasing frequency, conjugates kept with their
/// positive-frequency member.
DataPartition partition(const FrequencyDataSet& data);

struct LoewnerPencil {
    CMatrix L;   ///< Loewner matrix
    CMatrix Ls;  ///< shifted Loewner matrix
    std::vector<cdouble> mu, lambda;
    std::vector<cdouble> w_mu, w_lambda;

    Eigen::Index size() const { return L.rows(); }
};

LoewnerPencil build_pencil(const std::vector<cdouble>& mu, const std::vector<cdouble>& lambda,
                           const std::vector<cdouble>& w_mu, const std::vector<cdouble>& w_lambda);
LoewnerPencil build_pencil(const DataPartition& part);

/// Real-valued pencil obtained by the block-unitary transform over conjugate pairs.
struct RealLoewnerPencil {
    RMatrix L, Ls;
    RVector B;               ///< transformed w_mu
    Eigen::RowVectorXd C;    ///< transformed w_lambda
};

/// Applies J = (1/sqrt2) [[1, -j], [1, j]] per conjugate pair on both sides.
/// Throws NumericFailure when the result is not real to 1e-6.
RealLoewnerPencil to_real_pencil(const LoewnerPencil& pencil);

struct RankReport {
    Eigen::Index r = 0;
    RVector singular_values_row;  ///< of [L Ls]
    RVector singular_values_col;  ///< of [L; Ls]
    double tolerance = 1e-10;
    Eigen::Index r_col = 0;
    bool consistent() const { return r == r_col; }
};

RankReport numerical_rank(const LoewnerPencil& pencil, double tol = 1e-10);

/// Unprojected descriptor realisation E = -L, A = -Ls, B = w_mu, C = w_lambda.
DescriptorModel descriptor(const LoewnerPencil& pencil);

/// Projection onto the k dominant singular subspaces of [L Ls] and [L; Ls].
DescriptorModel project(const LoewnerPencil& pencil, Eigen::Index k);
DescriptorModel project(const RealLoewnerPencil& pencil, Eigen::Index k);

/// Converts a descriptor model to a real standard state-space model with
/// D = 0. When `conjugate_pairs` is set the model is first transformed with
/// the pair-wise J on both sides (unprojected pencils only). Throws
/// NumericFailure when the imaginary residue exceeds 1e-6 or E is singular.
DiscreteStateSpace realify(const DescriptorModel& model, double h, bool conjugate_pairs = false);

/// Caches the pencil SVDs so that many orders can be extracted cheaply.
class LoewnerInterpolant {
public:
    LoewnerInterpolant(const FrequencyDataSet& data, double rank_tol = 1e-10);

    const FrequencyDataSet& data() const { return data_; }
    const LoewnerPencil& pencil() const { return pencil_; }
    const RankReport& rank() const { return rank_; }
    Eigen::Index size() const { return real_.L.rows(); }

    /// Real k-th order discrete model G_d^k.
    DiscreteStateSpace model(Eigen::Index k) const;

private:
    FrequencyDataSet data_;
    LoewnerPencil pencil_;
    RealLoewnerPencil real_;
    RMatrix left_;   ///< left singular vectors of [L Ls]
    RMatrix right_;  ///< right singular vectors of [L; Ls]
    RankReport rank_;
};

}  // namespace loewdisc
