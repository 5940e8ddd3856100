// Command-line front end: construct the built-in systems, estimate
// Besicovitch distances, run classification probes, and emit suite reports.

#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"
#include "shiftlab/besicovitch.hpp"
#include "shiftlab/factor.hpp"
#include "shiftlab/probes.hpp"
#include "shiftlab/report.hpp"
#include "shiftlab/seqentropy.hpp"

using namespace shiftlab;
using nlohmann::ordered_json;

namespace {

// Point specs: "zeros", "single1:POS", "random:SEED", "periodic:WORD",
// "file:PATH", or "model:NAME[:gen=K][:shift=T]" with model names as in the
// suite config ("sturmian" accepts :alpha=DECIMAL and :beta=DECIMAL).
SymbolicPoint parse_point_spec(const std::string& spec) {
    auto split = [](const std::string& s, char sep) {
        std::vector<std::string> parts;
        std::size_t start = 0;
        while (true) {
            auto pos = s.find(sep, start);
            parts.push_back(s.substr(start, pos == std::string::npos ? pos : pos - start));
            if (pos == std::string::npos) break;
            start = pos + 1;
        }
        return parts;
    };
    auto parts = split(spec, ':');
    const std::string& kind = parts[0];
    if (kind == "zeros") return point_zeros();
    if (kind == "single1") return point_single_one(std::stoll(parts.at(1)));
    if (kind == "random") return point_random(std::stoull(parts.at(1)));
    if (kind == "periodic") return point_periodic(word_from_string(parts.at(1)));
    if (kind == "file") {
        std::ifstream in(parts.at(1));
        if (!in) throw std::runtime_error("cannot open point file: " + parts.at(1));
        std::string text;
        std::getline(in, text);
        return point_from_text(text);
    }
    if (kind == "model") {
        nlohmann::json params = nlohmann::json::object();
        std::size_t gen = 0;
        i64 shift = 0;
        for (std::size_t i = 2; i < parts.size(); ++i) {
            auto eq = parts[i].find('=');
            if (eq == std::string::npos) throw std::runtime_error("bad model option: " + parts[i]);
            const std::string key = parts[i].substr(0, eq);
            const std::string val = parts[i].substr(eq + 1);
            if (key == "gen") gen = std::stoul(val);
            else if (key == "shift") shift = std::stoll(val);
            else params[key] = val;
        }
        auto model = make_model(parts.at(1), params);
        auto p = model.generators.at(gen);
        return shift ? point_shifted(p, shift) : p;
    }
    throw std::runtime_error("unknown point spec: " + spec);
}

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open output file: " + out_path);
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"symbolic dynamics classification laboratory"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    i64 horizon = i64{1} << 20;
    std::uint64_t seed = 1729;
    i64 budget = 64;
    std::string format = "json";
    std::string out_path;
    app.add_option("--horizon", horizon, "window horizon")->capture_default_str();
    app.add_option("--seed", seed, "master seed")->capture_default_str();
    app.add_option("--budget", budget, "sampling budget")->capture_default_str();
    app.add_option("--format", format, "json|csv")->capture_default_str();
    app.add_option("--out", out_path, "output file (default stdout)");

    // build: construct a model and export a generator prefix as text
    auto* build = app.add_subcommand("build", "construct a model, export a generator prefix");
    std::string build_model = "toeplitz";
    std::size_t build_gen = 0;
    std::string build_params = "{}";
    build->add_option("--model", build_model, "model name")->capture_default_str();
    build->add_option("--gen", build_gen, "generator index")->capture_default_str();
    build->add_option("--params", build_params, "model params as JSON")->capture_default_str();

    // db: Besicovitch estimate between two point specs
    auto* db = app.add_subcommand("db", "Besicovitch pseudometric estimate for two points");
    std::string spec_x, spec_y, profile_csv;
    db->add_option("--x", spec_x, "first point spec")->required();
    db->add_option("--y", spec_y, "second point spec")->required();
    db->add_option("--profile-csv", profile_csv, "also write the disagreement profile as CSV");

    // classify: probes on one model
    auto* classify = app.add_subcommand("classify", "equicontinuity probes for one model");
    std::string cls_model = "single_one";
    std::string cls_probe = "all";
    std::string cls_epsilon = "1/10";
    std::string cls_cylinder;
    int cls_r = 1;
    bool cls_underline = false;
    classify->add_option("--model", cls_model, "model name")->capture_default_str();
    classify->add_option("--probe", cls_probe, "mean_eq|diam_mean|mean_sens|all")->capture_default_str();
    classify->add_option("--epsilon", cls_epsilon, "epsilon as rational or decimal")->capture_default_str();
    classify->add_option("--cylinder", cls_cylinder, "cylinder word, or auto:LEN");
    classify->add_option("--r", cls_r, "diam resolution exponent")->capture_default_str();
    classify->add_flag("--underline", cls_underline, "use the liminf statistic");

    // seqentropy
    auto* seq = app.add_subcommand("seqentropy", "pattern counts and entropy rate");
    std::string seq_model = "full";
    std::string seq_positions = "contiguous:10";
    seq->add_option("--model", seq_model, "model name")->capture_default_str();
    seq->add_option("--positions", seq_positions, "contiguous:N | powers:N | comma list")->capture_default_str();

    // independence
    auto* ind = app.add_subcommand("independence", "independence certificate search");
    std::string ind_model = "powers";
    std::string ind_u = "0", ind_v = "1";
    int ind_maxk = 4;
    i64 ind_pool_cap = 4096, ind_occ_cap = i64{1} << 16, ind_stride = 0, ind_count = 16;
    std::uint64_t ind_nodes = 1 << 16;
    ind->add_option("--model", ind_model, "model name")->capture_default_str();
    ind->add_option("--u", ind_u, "first cylinder word")->capture_default_str();
    ind->add_option("--v", ind_v, "second cylinder word")->capture_default_str();
    ind->add_option("--max-k", ind_maxk, "largest certificate size")->capture_default_str();
    ind->add_option("--pool-cap", ind_pool_cap, "candidate positions 0..cap")->capture_default_str();
    ind->add_option("--pool-stride", ind_stride, "use strided pool instead of 0..cap");
    ind->add_option("--pool-count", ind_count, "strided pool size")->capture_default_str();
    ind->add_option("--occ-cap", ind_occ_cap, "occurrence scan cap")->capture_default_str();
    ind->add_option("--node-budget", ind_nodes, "search node budget")->capture_default_str();

    // regularity
    auto* reg = app.add_subcommand("regularity", "periodic structure extraction");
    std::string reg_model = "toeplitz";
    i64 reg_max_period = i64{1} << 10;
    std::string reg_tol = "1/512";
    reg->add_option("--model", reg_model, "model name")->capture_default_str();
    reg->add_option("--max-period", reg_max_period, "largest probed period")->capture_default_str();
    reg->add_option("--tolerance", reg_tol, "coverage gap tolerance")->capture_default_str();

    // report
    auto* rep = app.add_subcommand("report", "run a probe suite from a config");
    std::string rep_config;
    bool rep_builtin = false;
    bool rep_dump_config = false;
    rep->add_option("--config", rep_config, "suite config JSON file");
    rep->add_flag("--builtin", rep_builtin, "run the built-in example suite");
    rep->add_flag("--dump-config", rep_dump_config, "print the config instead of running");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*build) {
            auto model = make_model(build_model, nlohmann::json::parse(build_params));
            auto pre = model.generators.at(build_gen).prefix(static_cast<std::size_t>(horizon));
            std::string text = word_to_string(Word(pre.begin(), pre.end()));
            write_output(text + "\n", out_path);
            ordered_json info;
            info["model"] = model.name;
            info["alphabet"] = model.alphabet_size;
            info["generators"] = model.generators.size();
            info["horizon"] = horizon;
            std::cerr << info.dump() << "\n";
            return 0;
        }
        if (*db) {
            auto x = parse_point_spec(spec_x);
            auto y = parse_point_spec(spec_y);
            auto est = besicovitch_db(x, y, horizon);
            ordered_json j;
            j["x"] = spec_x;
            j["y"] = spec_y;
            j["horizon"] = horizon;
            j["symbolic_limsup"] = est.symbolic_density.limsup_est.to_string();
            j["symbolic_limsup_value"] = est.symbolic_density.limsup_est.to_double();
            j["cantor_db"] = est.cantor_db.to_string();
            j["cantor_db_value"] = est.cantor_db.to_double();
            j["averaged"] = est.averaged;
            write_output(j.dump(2) + "\n", out_path);
            if (!profile_csv.empty()) {
                std::ofstream csv(profile_csv);
                csv << est.symbolic_density.to_csv();
            }
            return 0;
        }
        if (*classify) {
            auto model = make_model(cls_model, nlohmann::json::object());
            ordered_json out = ordered_json::object();
            Cylinder cyl;
            if (cls_cylinder.rfind("auto:", 0) == 0) {
                auto pre = model.generators.at(0).prefix(std::stoul(cls_cylinder.substr(5)));
                cyl = Cylinder{Word(pre.begin(), pre.end()), 0};
            } else if (!cls_cylinder.empty()) {
                cyl = Cylinder{word_from_string(cls_cylinder), 0};
            } else {
                auto pre = model.generators.at(0).prefix(4);
                cyl = Cylinder{Word(pre.begin(), pre.end()), 0};
            }
            const Rational eps = parse_rational(cls_epsilon);
            if (cls_probe == "mean_eq" || cls_probe == "all") {
                auto v = mean_equicontinuity_scan(model, model.generators.at(0), eps,
                                                  {4, 8, 12, 16}, static_cast<int>(budget), horizon, seed);
                out["mean_eq"] = v.to_json();
            }
            if (cls_probe == "diam_mean" || cls_probe == "all") {
                auto v = diam_mean_probe(model, cyl, cls_r, horizon, cls_underline);
                out[v.probe_name] = v.to_json();
            }
            if (cls_probe == "mean_sens" || cls_probe == "all") {
                auto w = mean_sensitivity_witness(model, eps, cyl, static_cast<int>(budget), horizon, seed);
                ordered_json j;
                j["found"] = w.has_value();
                if (w) {
                    j["witness"] = w->description;
                    j["statistic"] = w->statistic.to_string();
                }
                out["mean_sens"] = j;
            }
            if (out.empty()) throw std::runtime_error("unknown probe: " + cls_probe);
            write_output(out.dump(2) + "\n", out_path);
            return 0;
        }
        if (*seq) {
            auto model = make_model(seq_model, nlohmann::json::object());
            PositionSet family = PositionSet::contiguous(10);
            if (seq_positions.rfind("contiguous:", 0) == 0) {
                family = PositionSet::contiguous(std::stoi(seq_positions.substr(11)));
            } else if (seq_positions.rfind("powers:", 0) == 0) {
                family = PositionSet::powers_of_two(std::stoi(seq_positions.substr(7)));
            } else {
                std::vector<i64> pos;
                std::size_t start = 0;
                while (start < seq_positions.size()) {
                    auto comma = seq_positions.find(',', start);
                    pos.push_back(std::stoll(seq_positions.substr(start, comma - start)));
                    if (comma == std::string::npos) break;
                    start = comma + 1;
                }
                family = PositionSet(pos);
            }
            auto est = seq_entropy_estimate(model, family, horizon);
            ordered_json j;
            j["model"] = model.name;
            j["positions"] = family.positions;
            j["counts"] = est.counts;
            j["bits_per_step"] = est.bits_per_step;
            j["horizon"] = horizon;
            write_output(j.dump(2) + "\n", out_path);
            return 0;
        }
        if (*ind) {
            auto model = make_model(ind_model, nlohmann::json::object());
            IndependenceOptions opt;
            opt.max_k = ind_maxk;
            opt.horizon = horizon;
            opt.node_budget = ind_nodes;
            opt.pool_cap = ind_pool_cap;
            opt.occ_cap = ind_occ_cap;
            if (ind_stride > 0)
                for (i64 k = 0; k < ind_count; ++k) opt.pool.push_back(k * ind_stride);
            auto res = independence_search(model, word_from_string(ind_u), word_from_string(ind_v), opt);
            ordered_json j;
            j["model"] = model.name;
            j["nodes_explored"] = res.nodes_explored;
            if (res.status == SearchStatus::found) {
                j["status"] = "found";
                j["size"] = res.certificate->positions.size();
                j["valid"] = validate_certificate(model, *res.certificate, horizon);
                j["certificate"] = res.certificate->to_json();
            } else {
                j["status"] = res.status == SearchStatus::none ? "none" : "budget_exhausted";
            }
            write_output(j.dump(2) + "\n", out_path);
            return 0;
        }
        if (*reg) {
            auto model = make_model(reg_model, nlohmann::json::object());
            auto ps = extract_periodic_structure(model.generators.at(0), reg_max_period, horizon);
            auto verdict = regularity_check(ps, parse_rational(reg_tol));
            ordered_json j = ps.to_json();
            j["verdict"] = regularity_verdict_name(verdict);
            write_output(j.dump(2) + "\n", out_path);
            return 0;
        }
        if (*rep) {
            SuiteConfig cfg;
            if (rep_builtin || rep_config.empty()) {
                cfg = builtin_suite_config();
            } else {
                std::ifstream in(rep_config);
                if (!in) throw std::runtime_error("cannot open config: " + rep_config);
                cfg = SuiteConfig::from_json(nlohmann::json::parse(in));
            }
            if (rep_dump_config) {
                write_output(cfg.to_json().dump(2) + "\n", out_path);
                return 0;
            }
            auto rows = run_suite(cfg);
            const std::string fmt = format != "json" ? format : cfg.format;
            write_output(emit_report(rows, fmt), out_path);
            return 0;  // fail verdicts are data, not process failures
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
