#include "shiftlab/report.hpp"

#include <algorithm>
#include <stdexcept>

#include "shiftlab/factor.hpp"
#include "shiftlab/probes.hpp"
#include "shiftlab/seqentropy.hpp"

namespace shiftlab {

SuiteConfig SuiteConfig::from_json(const nlohmann::json& j) {
    SuiteConfig c;
    if (!j.contains("seed")) throw std::invalid_argument("config: seed is mandatory");
    c.seed = j.at("seed").get<std::uint64_t>();
    c.seed_set = true;
    c.horizon = j.value("horizon", c.horizon);
    c.budget = j.value("budget", c.budget);
    c.format = j.value("format", c.format);
    for (const auto& sys : j.at("systems")) {
        SystemSpec spec;
        spec.name = sys.at("name").get<std::string>();
        spec.params = sys.value("params", nlohmann::ordered_json::object());
        for (const auto& pj : sys.at("probes")) {
            ProbeSpec p;
            p.probe = pj.at("probe").get<std::string>();
            p.params = pj;
            p.params.erase("probe");
            spec.probes.push_back(std::move(p));
        }
        c.systems.push_back(std::move(spec));
    }
    return c;
}

nlohmann::ordered_json SuiteConfig::to_json() const {
    nlohmann::ordered_json j;
    j["seed"] = seed;
    j["horizon"] = horizon;
    j["budget"] = budget;
    j["format"] = format;
    auto systems = nlohmann::ordered_json::array();
    for (const auto& sys : this->systems) {
        nlohmann::ordered_json s;
        s["name"] = sys.name;
        if (!sys.params.empty()) s["params"] = sys.params;
        auto probes = nlohmann::ordered_json::array();
        for (const auto& p : sys.probes) {
            nlohmann::ordered_json pj = p.params;
            pj["probe"] = p.probe;
            // keep "probe" first for readability
            nlohmann::ordered_json ordered;
            ordered["probe"] = p.probe;
            for (auto& [k, v] : pj.items())
                if (k != "probe") ordered[k] = v;
            probes.push_back(ordered);
        }
        s["probes"] = probes;
        systems.push_back(s);
    }
    j["systems"] = systems;
    return j;
}

nlohmann::ordered_json ClassificationRow::to_json() const {
    nlohmann::ordered_json j;
    j["system"] = system;
    j["verdicts"] = verdicts;
    if (!null_evidence.empty()) j["null_evidence"] = null_evidence;
    j["chain_consistent"] = chain_consistent;
    return j;
}

SubshiftModel make_model(const std::string& name, const nlohmann::json& params_in) {
    const nlohmann::json params = params_in.is_object() ? params_in : nlohmann::json::object();
    if (name == "single_one") return single_one_subshift();
    if (name == "powers") {
        return powers_subshift(params.value("shift_search_horizon", i64{1} << 20));
    }
    if (name == "toeplitz") return regular_toeplitz_example(params.value("horizon", i64{1} << 20));
    if (name == "sturmian") {
        Fixed128 alpha = params.contains("alpha") && params.at("alpha").get<std::string>() != "golden"
                             ? fixed128_from_decimal(params.at("alpha").get<std::string>())
                             : golden_conjugate128();
        Fixed128 beta = params.contains("beta") ? fixed128_from_decimal(params.at("beta").get<std::string>())
                                                : Fixed128{};
        return sturmian_model(alpha, beta);
    }
    if (name == "full") {
        return full_shift(params.value("alphabet", 2), params.value("gen_seed", std::uint64_t{0x5eed}));
    }
    if (name.rfind("periodic:", 0) == 0) return periodic_model(word_from_string(name.substr(9)));
    if (name == "periodic") return periodic_model(word_from_string(params.at("word").get<std::string>()));
    throw std::invalid_argument("unknown model: " + name);
}

namespace {

Cylinder cylinder_from_params(const SubshiftModel& model, const nlohmann::json& params, i64 fallback_len) {
    std::string spec = params.value("cylinder", std::string());
    if (spec.rfind("auto:", 0) == 0) {
        const i64 len = std::stoll(spec.substr(5));
        auto pre = model.generators.at(0).prefix(static_cast<std::size_t>(len));
        return Cylinder{Word(pre.begin(), pre.end()), 0};
    }
    if (!spec.empty()) return Cylinder{word_from_string(spec), 0};
    auto pre = model.generators.at(0).prefix(static_cast<std::size_t>(fallback_len));
    return Cylinder{Word(pre.begin(), pre.end()), 0};
}

nlohmann::ordered_json run_probe(const SubshiftModel& model, const ProbeSpec& spec_in,
                                 const SuiteConfig& cfg, std::string& null_evidence) {
    ProbeSpec spec = spec_in;
    if (!spec.params.is_object()) spec.params = nlohmann::ordered_json::object();
    const i64 horizon = spec.params.value("horizon", cfg.horizon);
    const std::uint64_t seed = spec.params.value("seed", cfg.seed);

    if (spec.probe == "mean_eq") {
        Rational eps = parse_rational(spec.params.value("epsilon", std::string("1/10")));
        std::vector<int> lens = spec.params.value("cylinder_lens", std::vector<int>{4, 8, 12, 16});
        int budget = spec.params.value("budget", static_cast<int>(cfg.budget));
        auto v = mean_equicontinuity_scan(model, model.generators.at(0), eps, lens, budget, horizon, seed);
        return v.to_json();
    }
    if (spec.probe == "diam_mean") {
        int r = spec.params.value("r", 1);
        bool underline = spec.params.value("underline", false);
        Cylinder u = cylinder_from_params(model, spec.params, 4);
        auto v = diam_mean_probe(model, u, r, horizon, underline,
                                 spec.params.value("occurrence_cap", 4096));
        return v.to_json();
    }
    if (spec.probe == "mean_sens") {
        Rational eps = parse_rational(spec.params.value("epsilon", std::string("2/5")));
        Cylinder u = cylinder_from_params(model, spec.params, 3);
        int budget = spec.params.value("budget", static_cast<int>(cfg.budget));
        auto w = mean_sensitivity_witness(model, eps, u, budget, horizon, seed);
        nlohmann::ordered_json j;
        j["probe"] = "mean_sens";
        j["verdict"] = w ? "fail" : "pass";  // a witness refutes mean equicontinuity locally
        j["epsilon"] = eps.to_string();
        j["horizon"] = horizon;
        if (w) {
            j["witness"] = w->description;
            j["statistic"] = w->statistic.to_string();
        }
        return j;
    }
    if (spec.probe == "regularity") {
        i64 max_period = spec.params.value("max_period", i64{1} << 10);
        Rational tol = parse_rational(spec.params.value("tolerance", std::string("1/512")));
        auto ps = extract_periodic_structure(model.generators.at(0), max_period, horizon);
        auto verdict = regularity_check(ps, tol);
        nlohmann::ordered_json j;
        j["probe"] = "regularity";
        j["verdict"] = regularity_verdict_name(verdict);
        j["coverage_sum"] = ps.coverage_sum.to_string();
        j["levels"] = ps.progressions.size();
        j["max_period"] = max_period;
        j["tolerance"] = tol.to_string();
        j["horizon"] = horizon;
        return j;
    }
    if (spec.probe == "independence") {
        IndependenceOptions opt;
        opt.max_k = spec.params.value("max_k", 4);
        opt.horizon = horizon;
        opt.node_budget = spec.params.value("node_budget", std::uint64_t{1} << 16);
        opt.pool_cap = spec.params.value("pool_cap", i64{4096});
        opt.occ_cap = spec.params.value("occ_cap", i64{1} << 16);
        if (spec.params.contains("pool_stride")) {
            const i64 stride = spec.params.at("pool_stride").get<i64>();
            const i64 count = spec.params.value("pool_count", i64{16});
            for (i64 k = 0; k < count; ++k) opt.pool.push_back(k * stride);
        }
        Word u = word_from_string(spec.params.value("u", std::string("0")));
        Word v = word_from_string(spec.params.value("v", std::string("1")));
        auto res = independence_search(model, u, v, opt);
        nlohmann::ordered_json j;
        j["probe"] = "independence";
        j["max_k"] = opt.max_k;
        j["horizon"] = horizon;
        j["nodes_explored"] = res.nodes_explored;
        if (res.truncated) j["truncated"] = true;
        if (res.status == SearchStatus::found) {
            const bool valid = validate_certificate(model, *res.certificate, horizon);
            j["verdict"] = valid ? "certificate" : "invalid_certificate";
            j["size"] = res.certificate->positions.size();
            j["certificate"] = res.certificate->to_json();
            if (valid && res.certificate->positions.size() >= 3) null_evidence = "fail";
        } else if (res.status == SearchStatus::budget_exhausted) {
            j["verdict"] = "budget_exhausted";
            if (null_evidence.empty()) null_evidence = "inconclusive";
        } else {
            j["verdict"] = "none";
            if (null_evidence.empty()) null_evidence = "pass";
        }
        return j;
    }
    if (spec.probe == "seqentropy") {
        std::string pos_spec = spec.params.value("positions", std::string("contiguous:10"));
        PositionSet family = PositionSet::contiguous(10);
        if (pos_spec.rfind("contiguous:", 0) == 0)
            family = PositionSet::contiguous(std::stoi(pos_spec.substr(11)));
        else if (pos_spec.rfind("powers:", 0) == 0)
            family = PositionSet::powers_of_two(std::stoi(pos_spec.substr(7)));
        auto est = seq_entropy_estimate(model, family, horizon);
        nlohmann::ordered_json j;
        j["probe"] = "seqentropy";
        j["positions"] = pos_spec;
        j["counts"] = est.counts;
        j["bits_per_step"] = est.bits_per_step;
        j["horizon"] = horizon;
        const bool low = est.bits_per_step < 0.05;
        j["verdict"] = low ? "rate_low" : "rate_positive";
        if (null_evidence.empty()) null_evidence = low ? "pass" : "fail";
        return j;
    }
    throw std::invalid_argument("unknown probe: " + spec.probe);
}

std::string verdict_of(const nlohmann::ordered_json& rec) {
    return rec.value("verdict", std::string());
}

}  // namespace

std::vector<ClassificationRow> run_suite(const SuiteConfig& config) {
    if (!config.seed_set) throw std::invalid_argument("suite config: seed is mandatory");
    std::vector<ClassificationRow> rows;
    for (const auto& sys : config.systems) {
        ClassificationRow row;
        row.system = sys.name;
        row.verdicts = nlohmann::ordered_json::object();
        std::string null_evidence;
        SubshiftModel model;
        bool model_ok = true;
        try {
            model = make_model(sys.name, sys.params);
        } catch (const std::exception& e) {
            row.verdicts["model_error"] = e.what();
            model_ok = false;
        }
        if (model_ok) {
            for (const auto& probe : sys.probes) {
                nlohmann::ordered_json rec;
                try {
                    rec = run_probe(model, probe, config, null_evidence);
                } catch (const std::exception& e) {
                    rec = nlohmann::ordered_json::object();
                    rec["probe"] = probe.probe;
                    rec["verdict"] = "error";
                    rec["error"] = e.what();
                }
                // provenance completeness: every verdict carries these three
                if (!rec.contains("horizon"))
                    rec["horizon"] = probe.params.is_object() ? probe.params.value("horizon", config.horizon)
                                                              : config.horizon;
                if (!rec.contains("seed")) rec["seed"] = config.seed;
                if (!rec.contains("budget")) rec["budget"] = config.budget;
                row.verdicts[probe.probe] = rec;
            }
        }
        row.null_evidence = null_evidence;

        // Chain: nullness => diam-mean equicontinuity => mean equicontinuity.
        // Flag exactly the two contrapositive violations among ran probes.
        const std::string diam = row.verdicts.contains("diam_mean") ? verdict_of(row.verdicts["diam_mean"]) : "";
        const std::string meaneq = row.verdicts.contains("mean_eq") ? verdict_of(row.verdicts["mean_eq"]) : "";
        row.chain_consistent = true;
        if (null_evidence == "pass" && diam == "fail") row.chain_consistent = false;
        if (diam == "pass" && meaneq == "fail") row.chain_consistent = false;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string emit_report(const std::vector<ClassificationRow>& rows, const std::string& format) {
    if (rows.empty()) throw std::invalid_argument("emit_report: no rows");
    if (format == "json") {
        auto arr = nlohmann::ordered_json::array();
        for (const auto& r : rows) arr.push_back(r.to_json());
        return arr.dump(2) + "\n";
    }
    if (format == "csv") {
        // Union of probe names in first-seen order.
        std::vector<std::string> cols;
        for (const auto& r : rows) {
            for (auto& [k, v] : r.verdicts.items()) {
                if (std::find(cols.begin(), cols.end(), k) == cols.end()) cols.push_back(k);
            }
        }
        std::string out = "system";
        for (const auto& c : cols) out += "," + c;
        out += ",null_evidence,chain_consistent\n";
        for (const auto& r : rows) {
            out += r.system;
            for (const auto& c : cols) {
                out += ",";
                if (r.verdicts.contains(c)) {
                    const auto& rec = r.verdicts[c];
                    out += rec.is_object() ? rec.value("verdict", std::string()) : std::string();
                }
            }
            out += "," + r.null_evidence;
            out += ",";
            out += r.chain_consistent ? "true" : "false";
            out += "\n";
        }
        return out;
    }
    throw std::invalid_argument("emit_report: unknown format " + format);
}

SuiteConfig builtin_suite_config() {
    SuiteConfig c;
    c.seed = 1729;
    c.seed_set = true;
    c.horizon = i64{1} << 20;
    c.budget = 48;

    SystemSpec single_one;
    single_one.name = "single_one";
    single_one.probes.push_back({"mean_eq", {{"epsilon", "1/10"}, {"horizon", i64{1} << 18}}});
    single_one.probes.push_back({"diam_mean", {{"cylinder", "0000"}, {"r", 1}, {"horizon", i64{1} << 18}}});
    c.systems.push_back(single_one);

    SystemSpec powers;
    powers.name = "powers";
    powers.probes.push_back({"mean_eq", {{"epsilon", "1/10"}, {"horizon", i64{1} << 18}}});
    powers.probes.push_back({"independence", {{"max_k", 4}, {"pool_cap", i64{64}}, {"horizon", i64{1} << 18}}});
    c.systems.push_back(powers);

    SystemSpec toeplitz;
    toeplitz.name = "toeplitz";
    toeplitz.probes.push_back({"regularity",
                               {{"max_period", i64{1} << 10}, {"tolerance", "1/512"}, {"horizon", i64{1} << 18}}});
    toeplitz.probes.push_back({"diam_mean",
                               {{"cylinder", "auto:2048"}, {"r", 1}, {"horizon", i64{1} << 18},
                                {"occurrence_cap", 512}}});
    toeplitz.probes.push_back({"independence",
                               {{"max_k", 3}, {"pool_stride", i64{2048}}, {"pool_count", i64{13}},
                                {"horizon", i64{1} << 18}, {"occ_cap", i64{1} << 17}}});
    c.systems.push_back(toeplitz);

    return c;
}

}  // namespace shiftlab
