#pragma once

#include "loewdisc/models.hpp"

namespace loewdisc {

/// Zero-order hold: A_d = e^{Ah}, B_d = int_0^h e^{As} ds B (block exponential), C_d = C, D_d = D.
DiscreteStateSpace zoh(const ContinuousStateSpace& g, double h);

/// Bilinear transform without prewarping: G_d(z) = G(2/h (z-1)/(z+1)).
DiscreteStateSpace tustin(const ContinuousStateSpace& g, double h);

/// Impulse-invariant model with y_d[k] = h g(kh), g(t) = C e^{At} B. Rejects D != 0.
DiscreteStateSpace impulse_invariant(const ContinuousStateSpace& g, double h);

}  // namespace loewdisc
