#pragma once
// Finite-scale probes for the equicontinuity taxonomy: mean equicontinuity
// of a point, diam-mean ambiguity of a cylinder, and mean-sensitivity
// witness search. Verdicts are tri-state and carry their parameters; a pass
// is evidence at the stated horizon, never a proof.

#include <optional>

#include "json.hpp"
#include "shiftlab/besicovitch.hpp"
#include "shiftlab/symbolic.hpp"

namespace shiftlab {

enum class Verdict { pass, fail, inconclusive };
const char* verdict_name(Verdict v);

struct ProbeWitness {
    std::string description;
    Rational statistic{0};
    std::vector<i64> sample_times;
};

struct ProbeVerdict {
    std::string probe_name;
    nlohmann::ordered_json parameters;
    Verdict verdict = Verdict::inconclusive;
    std::optional<ProbeWitness> witness;
    Rational statistic{0};
    std::string note;

    nlohmann::ordered_json to_json() const;
};

// Samples points that agree with x on [0, m) — shifted generator occurrences
// plus model-sampled extensions — and passes iff every sampled neighbor has
// disagreement-density limsup below epsilon.
ProbeVerdict mean_equicontinuity_probe(const SubshiftModel& model, const SymbolicPoint& x,
                                       Rational epsilon, int m, int budget, i64 horizon,
                                       std::uint64_t seed);

// Density of times i where two admissible continuations of the cylinder
// differ inside [i, i+r). Pass iff the (limsup, or liminf when underline)
// estimate stays below 2^-r.
ProbeVerdict diam_mean_probe(const SubshiftModel& model, const Cylinder& u, int r, i64 horizon,
                             bool underline = false, int occurrence_cap = 4096);

// First sampled pair inside the cylinder with disagreement limsup above
// epsilon, if any.
std::optional<ProbeWitness> mean_sensitivity_witness(const SubshiftModel& model, Rational epsilon,
                                                     const Cylinder& u, int budget, i64 horizon,
                                                     std::uint64_t seed);

// The exists-delta scan over cylinder lengths: pass as soon as one length
// passes. Reports the winning length in the verdict parameters.
ProbeVerdict mean_equicontinuity_scan(const SubshiftModel& model, const SymbolicPoint& x,
                                      Rational epsilon, const std::vector<int>& cylinder_lengths,
                                      int budget, i64 horizon, std::uint64_t seed);

}  // namespace shiftlab
