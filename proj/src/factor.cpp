#include "shiftlab/factor.hpp"

#include <algorithm>
#include <stdexcept>

namespace shiftlab {

bool PeriodicStructure::covers(i64 position) const {
    for (const auto& pr : progressions) {
        if (position >= pr.residue && (position - pr.residue) % pr.period == 0) return true;
    }
    return false;
}

nlohmann::ordered_json PeriodicStructure::to_json() const {
    nlohmann::ordered_json j;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& pr : progressions) {
        arr.push_back({{"period", pr.period}, {"residue", pr.residue}, {"symbol", int(pr.symbol)}});
    }
    j["progressions"] = arr;
    j["coverage_sum"] = coverage_sum.to_string();
    j["max_period_probed"] = max_period_probed;
    j["horizon_probed"] = horizon_probed;
    return j;
}

PeriodicStructure extract_periodic_structure(const SymbolicPoint& x, i64 max_period, i64 horizon) {
    if (max_period < 1) throw std::invalid_argument("extract_periodic_structure: max_period >= 1");
    if (horizon < 4 * max_period)
        throw std::invalid_argument("extract_periodic_structure: need horizon >= 4*max_period");

    PeriodicStructure ps;
    ps.max_period_probed = max_period;
    ps.horizon_probed = horizon;

    const i64 scan_end = 2 * max_period;
    auto pre = x.prefix(static_cast<std::size_t>(horizon + scan_end) + 1);

    for (i64 j = 0; j < scan_end; ++j) {
        if (ps.covers(j)) continue;
        for (i64 p = 1; p <= max_period; ++p) {
            const std::uint8_t sym = pre[static_cast<std::size_t>(j)];
            bool constant = true;
            const i64 samples = horizon / p;
            for (i64 i = 1; i <= samples; ++i) {
                if (pre[static_cast<std::size_t>(j + i * p)] != sym) {
                    constant = false;
                    break;
                }
            }
            if (constant) {
                ps.progressions.push_back({p, j, sym});
                ps.coverage_sum = ps.coverage_sum + Rational(1, p);
                break;  // minimal period for this residue
            }
        }
    }
    return ps;
}

const char* regularity_verdict_name(RegularityVerdict v) {
    switch (v) {
        case RegularityVerdict::pass: return "pass";
        case RegularityVerdict::fail: return "fail";
        case RegularityVerdict::inconclusive: return "inconclusive";
    }
    return "?";
}

RegularityVerdict regularity_check(const PeriodicStructure& ps, Rational tolerance) {
    const Rational gap = Rational(1) - ps.coverage_sum;
    if (gap <= tolerance) return RegularityVerdict::pass;
    // Coverage still climbing: a maximal progression sits in the top octave
    // of probed periods, so larger periods were the binding constraint.
    for (const auto& pr : ps.progressions) {
        if (2 * pr.period > ps.max_period_probed) return RegularityVerdict::inconclusive;
    }
    return RegularityVerdict::fail;
}

FiberReport sturmian_fiber_ambiguity(const Fixed128& alpha, const Fixed128& beta, Rational delta,
                                     i64 horizon) {
    if (!irrationality_guard(alpha))
        throw std::invalid_argument("sturmian_fiber_ambiguity: alpha fails the irrationality guard");
    if (!(Rational(0) < delta && delta < Rational(1, 10)))
        throw std::invalid_argument("sturmian_fiber_ambiguity: delta must lie in (0, 0.1)");

    FiberReport rep;
    rep.delta = delta;

    const Fixed128 d = fixed128_from_ratio(static_cast<u64>(delta.num), static_cast<u64>(delta.den));
    const Fixed128 zero{};
    const Fixed128 boundary = alpha.negated();  // 1 - alpha

    std::vector<std::uint8_t> amb(static_cast<std::size_t>(horizon) + 1);
    Fixed128 cur = beta;
    for (i64 i = 0; i <= horizon; ++i) {
        const bool near0 = cur.circle_dist(zero).v <= d.v;
        const bool near1 = cur.circle_dist(boundary).v <= d.v;
        amb[static_cast<std::size_t>(i)] = (near0 || near1) ? 1 : 0;
        cur.add_wraps(alpha);
    }
    rep.ambiguity_density = profile_from_indicator(amb.data(), horizon + 1, dyadic_schedule_up_to(horizon));

    // Two boundary arcs of width 2*delta each put the equidistributed limit
    // at 4*delta; pass when the estimate stays within that plus slack.
    const Rational bound = Rational(5) * delta;
    rep.regular_verdict = (rep.ambiguity_density.limsup_est <= bound)
                              ? RegularityVerdict::pass
                              : RegularityVerdict::fail;
    return rep;
}

}  // namespace shiftlab
