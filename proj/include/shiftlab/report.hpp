#pragma once
// Batch suite runner: declarative config in, deterministic classification
// table out, with the implication-chain consistency flag per row.

#include <string>
#include <vector>

#include "json.hpp"
#include "shiftlab/symbolic.hpp"

namespace shiftlab {

struct ProbeSpec {
    std::string probe;                 // mean_eq | diam_mean | mean_sens | regularity | independence | seqentropy
    nlohmann::ordered_json params;     // probe-specific parameters
};

struct SystemSpec {
    std::string name;                  // single_one | powers | toeplitz | sturmian | full | periodic
    nlohmann::ordered_json params;
    std::vector<ProbeSpec> probes;
};

struct SuiteConfig {
    std::uint64_t seed = 0;
    bool seed_set = false;             // seed is mandatory
    i64 horizon = i64{1} << 20;
    i64 budget = 64;
    std::string format = "json";
    std::vector<SystemSpec> systems;

    static SuiteConfig from_json(const nlohmann::json& j);
    nlohmann::ordered_json to_json() const;
};

struct ClassificationRow {
    std::string system;
    nlohmann::ordered_json verdicts;   // probe name -> verdict record
    std::string null_evidence;         // pass | fail | inconclusive | (empty when not probed)
    bool chain_consistent = true;
    nlohmann::ordered_json to_json() const;
};

SubshiftModel make_model(const std::string& name, const nlohmann::json& params);

std::vector<ClassificationRow> run_suite(const SuiteConfig& config);

// format: "json" (array of row objects) or "csv" (flattened verdict columns).
std::string emit_report(const std::vector<ClassificationRow>& rows, const std::string& format);

// The three example systems with the probes that classify them.
SuiteConfig builtin_suite_config();

}  // namespace shiftlab
