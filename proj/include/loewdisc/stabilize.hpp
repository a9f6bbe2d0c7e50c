#pragma once

#include <vector>

#include "loewdisc/models.hpp"

namespace loewdisc {

/// G = stable + antistable; the feedthrough lives in the stable part.
struct AdditiveSplit {
    DiscreteStateSpace stable;
    DiscreteStateSpace antistable;
};

/// Poles within 1e-8 of the unit circle make the split ill-posed and throw.
AdditiveSplit split_stable_antistable(const DiscreteStateSpace& g);

/// Best L2 approximation in the stable subspace: the stable part of the split.
DiscreteStateSpace l2_truncate(const DiscreteStateSpace& g);

struct HankelSpectrum {
    std::vector<double> values;  ///< descending
    std::size_t q = 0;           ///< multiplicity of values[0] at relative tolerance 1e-8
};

/// Hankel singular values of the reflected system antistable(1/z).
HankelSpectrum hankel_spectrum_antistable(const DiscreteStateSpace& antistable);

/// Hankel singular values of a stable discrete model.
HankelSpectrum hankel_spectrum(const DiscreteStateSpace& stable);

struct NehariResult {
    DiscreteStateSpace model;
    double error = 0.0;   ///< achieved L-infinity distance, the largest antistable Hankel value
    std::size_t stable_order = 0;
    std::size_t antistable_order = 0;
    std::size_t q = 0;
    double alpha = 0.0;   ///< Moebius parameter that succeeded (0 when nothing was projected)
};

/// L-infinity optimal projection onto the stable subspace (Nehari problem).
NehariResult nehari_project_detailed(const DiscreteStateSpace& g);
DiscreteStateSpace nehari_project(const DiscreteStateSpace& g);

/// Moebius transport z = (alpha + s)/(alpha - s) of a discrete model to continuous time, and back.
ContinuousStateSpace to_continuous_moebius(const DiscreteStateSpace& g, double alpha);
DiscreteStateSpace to_discrete_moebius(const ContinuousStateSpace& g, double alpha, double h);

/// Optimal zeroth-order Hankel-norm approximation of a stable continuous
/// model: returns the antistable X with G - X all-pass of gain sigma_1.
struct GloverResult {
    ContinuousStateSpace antistable;
    double sigma = 0.0;
    std::size_t q = 0;
};

GloverResult glover_nehari(const ContinuousStateSpace& stable);

enum class Stabilization { nehari, l2, none };

/// Applies the chosen projection onto the stable subspace.
DiscreteStateSpace stabilize(const DiscreteStateSpace& g, Stabilization method);

/// Parallel connection g1 + g2 (same sampling period).
DiscreteStateSpace parallel(const DiscreteStateSpace& g1, const DiscreteStateSpace& g2);

}  // namespace loewdisc
