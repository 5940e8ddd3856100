#pragma once
// Sequence-entropy machinery: pattern counts along position sets, entropy
// rate estimates, Kushnirenko-style empirical partition entropy, the
// branch-and-bound independence certificate search, and the constructive
// splitting-time sequence builder.

#include <map>
#include <optional>

#include "json.hpp"
#include "shiftlab/rational.hpp"
#include "shiftlab/symbolic.hpp"

namespace shiftlab {

struct PositionSet {
    std::vector<i64> positions;  // strictly increasing, all >= 0

    explicit PositionSet(std::vector<i64> pos);
    i64 max() const { return positions.back(); }
    std::size_t size() const { return positions.size(); }

    static PositionSet contiguous(int n);            // 0..n-1
    static PositionSet powers_of_two(int n);         // 2, 4, ..., 2^n
};

// Distinct symbol tuples read along the positions: occurrences in generator
// prefixes united with zero-filled predicate-realizable patterns on exact
// monotone binary models. A lower bound on the true pattern count.
i64 pattern_count(const SubshiftModel& model, const PositionSet& s, i64 horizon,
                  i64 budget = i64{1} << 20);

struct SeqEntropyEstimate {
    std::vector<i64> counts;  // counts for position-set prefixes 1..n
    double bits_per_step;     // least-squares slope of log2 counts, tail half
};

SeqEntropyEstimate seq_entropy_estimate(const SubshiftModel& model, const PositionSet& family,
                                        i64 horizon, i64 budget = i64{1} << 20);

// Shannon entropy (bits) of the empirical tuple distribution along one
// generator orbit.
double empirical_partition_entropy(const SubshiftModel& model, std::size_t generator_index,
                                   const PositionSet& s, i64 horizon);

struct IndependenceCertificate {
    Word u, v;
    std::vector<i64> positions;
    std::vector<Word> witnesses;  // indexed by pattern; bit r set = v at positions[r]

    nlohmann::ordered_json to_json() const;
    static IndependenceCertificate from_json(const nlohmann::json& j);
};

enum class SearchStatus { found, none, budget_exhausted };

struct IndependenceResult {
    SearchStatus status = SearchStatus::none;
    std::optional<IndependenceCertificate> certificate;  // largest full certificate found
    std::uint64_t nodes_explored = 0;
    bool truncated = false;  // node budget ran out before the search space did
};

struct IndependenceOptions {
    int max_k = 4;
    i64 horizon = i64{1} << 18;
    std::uint64_t node_budget = 1 << 16;
    i64 pool_cap = 4096;     // default candidate positions 0..pool_cap-1
    std::vector<i64> pool;   // explicit candidate positions (overrides pool_cap)
    i64 occ_cap = 1 << 16;   // occurrence-scan truncation per evaluation
};

IndependenceResult independence_search(const SubshiftModel& model, const Word& u, const Word& v,
                                       const IndependenceOptions& opt);

// Re-checks a certificate with plain scans; shares no code with the search.
bool validate_certificate(const SubshiftModel& model, const IndependenceCertificate& cert,
                          i64 horizon);

struct GrowthCurve {
    std::vector<std::pair<i64, i64>> steps;  // (chosen time s_k, cell count N_k)
    std::vector<Rational> split_fractions;   // fraction of cells split at each step
    double rate_estimate = 0.0;              // log2-slope over the tail half
    std::string stall_note;
};

struct SeqEntrBuilderResult {
    PositionSet sequence;
    GrowthCurve curve;
};

struct SeqEntrBuilderOptions {
    int m = 1;              // cylinder resolution: separation means differing in [g, g+m)
    int n_steps = 10;
    i64 horizon = i64{1} << 18;
    i64 scan_cap = 4096;    // candidate times searched per step
    int reps_per_cell = 32; // occurrence representatives used for split detection
    i64 occ_cap = 1 << 16;
};

SeqEntrBuilderResult seqentr_builder(const SubshiftModel& model, const SeqEntrBuilderOptions& opt);

}  // namespace shiftlab
