#pragma once
// Maximal-equicontinuous-factor side information: periodic structure
// extraction with the coverage-sum regularity criterion, and Sturmian
// fiber-ambiguity densities near the coding discontinuities.

#include "json.hpp"
#include "shiftlab/bigfix.hpp"
#include "shiftlab/density.hpp"
#include "shiftlab/symbolic.hpp"

namespace shiftlab {

struct Progression {
    i64 period;
    i64 residue;           // least member of the progression
    std::uint8_t symbol;
};

struct PeriodicStructure {
    std::vector<Progression> progressions;
    Rational coverage_sum{0};  // sum of 1/period over maximal progressions
    i64 max_period_probed = 0;
    i64 horizon_probed = 0;

    bool covers(i64 position) const;
    nlohmann::ordered_json to_json() const;
};

// Per position j < 2*max_period: the minimal period p <= max_period with
// x_{j+ip} constant for all sampled i <= horizon/p, aggregated into maximal
// progressions (ascending scan makes every progression start at its least
// uncovered member).
PeriodicStructure extract_periodic_structure(const SymbolicPoint& x, i64 max_period, i64 horizon);

enum class RegularityVerdict { pass, fail, inconclusive };
const char* regularity_verdict_name(RegularityVerdict v);

// pass iff 1 - coverage_sum <= tolerance; inconclusive when coverage was
// still climbing at the largest probed periods.
RegularityVerdict regularity_check(const PeriodicStructure& ps, Rational tolerance);

struct FiberReport {
    DensityProfile ambiguity_density;
    Rational delta;
    RegularityVerdict regular_verdict = RegularityVerdict::inconclusive;
};

// Density of rotation times landing within delta of the coding boundaries
// {0, 1-alpha}; vanishing ambiguity as delta shrinks is the finite-scale
// shadow of regularity for Sturmian systems.
FiberReport sturmian_fiber_ambiguity(const Fixed128& alpha, const Fixed128& beta, Rational delta,
                                     i64 horizon);

}  // namespace shiftlab
