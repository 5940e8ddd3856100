#pragma once
// Finite-horizon Besicovitch pseudometric estimation between symbolic
// points: symbolic disagreement density (the canonical statistic), the
// Cantor-metric form over the dyadic delta grid, and running averages.

#include "shiftlab/density.hpp"
#include "shiftlab/symbolic.hpp"

namespace shiftlab {

struct BesicovitchEstimate {
    DensityProfile symbolic_density;  // density of {i : x_i != y_i}
    Rational cantor_db{0};
    double averaged = 0.0;
    i64 horizon = 0;
};

// Density profile of the disagreement set along the given window schedule.
DensityProfile disagreement_density(const SymbolicPoint& x, const SymbolicPoint& y,
                                    const std::vector<i64>& schedule);

// Estimates all three statistics at the given horizon. The internal window
// schedule keeps its tail in [horizon/2, horizon] so the limsup estimate of
// a vanishing set decays like 1/horizon.
BesicovitchEstimate besicovitch_db(const SymbolicPoint& x, const SymbolicPoint& y, i64 horizon);

bool besicovitch_ball_test(const SymbolicPoint& x, const SymbolicPoint& y, Rational epsilon,
                           i64 horizon);

}  // namespace shiftlab
