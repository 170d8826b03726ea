#pragma once

#include "choqmax/grid.hpp"

namespace choqmax {

// Order parameter of the fractional maximal operator; valid iff 0 <= alpha < n.
struct MaximalParams {
    double alpha = 0.0;
    MaximalParams() = default;
    MaximalParams(double alpha_, const GridSpec& spec);
};

void validate_alpha(double alpha, int n);

// M_alpha f (x) = max over dyadic cubes Q containing x, levels 0..L, of
// average(f,Q) * l(Q)^alpha, with l(Q)^alpha evaluated as exp2(-level*alpha).
GridFunction fractional_maximal(const GridFunction& f, double alpha);

// Shell form of M_alpha applied to an indicator: value a_j on the j-th
// ancestor shell of Q, a_j = l(Q)^alpha * 2^((alpha-n) j). Agrees cellwise
// with fractional_maximal(indicator(Q), alpha).
GridFunction maximal_on_indicator_closed_form(const DyadicCube& cube, double alpha,
                                              const GridSpec& spec);

}  // namespace choqmax
