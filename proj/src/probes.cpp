#include "shiftlab/probes.hpp"

#include <algorithm>
#include <cstring>
#include <unordered_set>

#include "shiftlab/kernels.hpp"

namespace shiftlab {

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

nlohmann::ordered_json ProbeVerdict::to_json() const {
    nlohmann::ordered_json j;
    j["probe"] = probe_name;
    j["verdict"] = verdict_name(verdict);
    j["statistic"] = statistic.to_string();
    j["parameters"] = parameters;
    if (witness) {
        nlohmann::ordered_json w;
        w["description"] = witness->description;
        w["statistic"] = witness->statistic.to_string();
        if (!witness->sample_times.empty()) w["sample_times"] = witness->sample_times;
        j["witness"] = w;
    }
    if (!note.empty()) j["note"] = note;
    return j;
}

namespace {

// Occurrence starts t (in any generator) where the cylinder word appears,
// with at least tail_len symbols available afterwards.
struct Occurrence {
    std::size_t gen;
    i64 t;
};

std::vector<Occurrence> cylinder_occurrences(const SubshiftModel& model, const Cylinder& u,
                                             i64 tail_len, i64 scan_horizon, std::size_t cap) {
    std::vector<Occurrence> occs;
    const i64 m = static_cast<i64>(u.word.size());
    for (std::size_t g = 0; g < model.generators.size() && occs.size() < cap; ++g) {
        auto pre = model.generators[g].prefix(static_cast<std::size_t>(scan_horizon + tail_len + m + u.offset));
        const i64 limit = scan_horizon;
        for (i64 t = 0; t <= limit && occs.size() < cap; ++t) {
            if (std::memcmp(pre.data() + t + u.offset, u.word.data(), u.word.size()) == 0)
                occs.push_back({g, t});
        }
    }
    return occs;
}

std::uint64_t prefix_hash(std::span<const std::uint8_t> s, std::size_t n) {
    std::uint64_t h = 1469598103934665603ull;
    for (std::size_t i = 0; i < std::min(n, s.size()); ++i) {
        h ^= s[i];
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace

ProbeVerdict mean_equicontinuity_probe(const SubshiftModel& model, const SymbolicPoint& x,
                                       Rational epsilon, int m, int budget, i64 horizon,
                                       std::uint64_t seed) {
    ProbeVerdict out;
    out.probe_name = "mean_eq";
    out.parameters = {{"epsilon", epsilon.to_string()},
                      {"cylinder_len", m},
                      {"budget", budget},
                      {"horizon", horizon},
                      {"seed", seed}};
    if (!(Rational(0) < epsilon && epsilon < Rational(1)))
        throw std::invalid_argument("mean_eq: epsilon must lie in (0,1)");
    if (m < 1 || 2 * static_cast<i64>(m) > horizon)
        throw std::invalid_argument("mean_eq: cylinder length out of range for this horizon");

    // Warm every involved point past any length touched below, so spans and
    // shifted views never trigger a reallocation mid-probe.
    const std::size_t warm = static_cast<std::size_t>(2 * horizon) + m + 16;
    for (const auto& g : model.generators) g.ensure(warm);
    x.ensure(warm);

    auto px = x.prefix(static_cast<std::size_t>(horizon));
    Cylinder cyl{Word(px.begin(), px.begin() + m), 0};
    const auto schedule = linear_schedule(horizon, 16);
    // distinctness must see the whole horizon: a sampled neighbor may differ
    // from x only far out
    const std::size_t hash_len = static_cast<std::size_t>(horizon);

    std::vector<SymbolicPoint> samples;
    auto occs = cylinder_occurrences(model, cyl, horizon, horizon, static_cast<std::size_t>(budget / 2 + 1));
    for (const auto& o : occs) {
        samples.push_back(o.t == 0 ? model.generators[o.gen]
                                   : point_shifted(model.generators[o.gen], o.t));
    }
    if (model.sampler) {
        const int n_ext = budget - static_cast<int>(samples.size());
        for (int k = 0; k < n_ext; ++k)
            samples.push_back(model.sampler(cyl.word, splitmix64(seed ^ (0x5a5a + k)), horizon));
    }

    std::unordered_set<std::uint64_t> distinct;
    distinct.insert(prefix_hash(x.prefix(hash_len), hash_len));
    Rational worst(0);
    std::optional<ProbeWitness> witness;
    for (const auto& y : samples) {
        auto prof = disagreement_density(x, y, schedule);
        distinct.insert(prefix_hash(y.prefix(hash_len), hash_len));
        if (worst < prof.limsup_est) worst = prof.limsup_est;
        if (!(prof.limsup_est < epsilon) && !witness) {
            witness = ProbeWitness{"neighbor " + y.label() + " has disagreement limsup " +
                                       prof.limsup_est.to_string(),
                                   prof.limsup_est,
                                   {}};
        }
    }
    out.statistic = worst;
    if (distinct.size() < 2) {
        out.verdict = Verdict::inconclusive;
        out.note = "fewer than 2 distinct neighbors within horizon";
        return out;
    }
    if (witness) {
        out.verdict = Verdict::fail;
        out.witness = witness;
    } else {
        out.verdict = Verdict::pass;
    }
    return out;
}

ProbeVerdict mean_equicontinuity_scan(const SubshiftModel& model, const SymbolicPoint& x,
                                      Rational epsilon, const std::vector<int>& cylinder_lengths,
                                      int budget, i64 horizon, std::uint64_t seed) {
    ProbeVerdict combined;
    combined.probe_name = "mean_eq";
    combined.parameters = {{"epsilon", epsilon.to_string()},
                           {"cylinder_lens", cylinder_lengths},
                           {"budget", budget},
                           {"horizon", horizon},
                           {"seed", seed}};
    bool any_inconclusive = false;
    ProbeVerdict last;
    for (int m : cylinder_lengths) {
        last = mean_equicontinuity_probe(model, x, epsilon, m, budget, horizon, seed);
        if (last.verdict == Verdict::pass) {
            combined.verdict = Verdict::pass;
            combined.statistic = last.statistic;
            combined.parameters["passing_len"] = m;
            return combined;
        }
        if (last.verdict == Verdict::inconclusive) any_inconclusive = true;
    }
    combined.verdict = any_inconclusive ? Verdict::inconclusive : Verdict::fail;
    combined.statistic = last.statistic;
    combined.witness = last.witness;
    return combined;
}

ProbeVerdict diam_mean_probe(const SubshiftModel& model, const Cylinder& u, int r, i64 horizon,
                             bool underline, int occurrence_cap) {
    ProbeVerdict out;
    out.probe_name = underline ? "diam_mean_lower" : "diam_mean";
    out.parameters = {{"cylinder", word_to_string(u.word)},
                      {"r", r},
                      {"horizon", horizon},
                      {"underline", underline}};
    if (u.word.empty()) throw std::invalid_argument("diam_mean: empty cylinder");
    if (r < 1 || r > 30) throw std::invalid_argument("diam_mean: r out of range");
    if (horizon <= static_cast<i64>(u.word.size()) + r)
        throw std::invalid_argument("diam_mean: horizon must exceed cylinder length + r");

    const i64 m = static_cast<i64>(u.word.size());
    const i64 len = horizon + r;  // disagreement positions feed windows [i, i+r)
    std::vector<std::uint8_t> amb(static_cast<std::size_t>(len), 0);
    bool have_route = false;

    for (const auto& g : model.generators)
        g.ensure(static_cast<std::size_t>(horizon + len + m + u.offset) + 16);

    // Occurrence route: compare every occurrence window against the first.
    auto occs = cylinder_occurrences(model, u, len, horizon, static_cast<std::size_t>(occurrence_cap));
    if (occs.size() >= 2) {
        have_route = true;
        auto ref = model.generators[occs[0].gen].prefix(
            static_cast<std::size_t>(occs[0].t + len));
        std::vector<std::uint8_t> tmp(static_cast<std::size_t>(len));
        for (std::size_t k = 1; k < occs.size(); ++k) {
            auto pre = model.generators[occs[k].gen].prefix(static_cast<std::size_t>(occs[k].t + len));
            kernels::mismatch_indicator(ref.data() + occs[0].t, pre.data() + occs[k].t, tmp.data(),
                                        tmp.size());
            kernels::or_accumulate(amb.data(), tmp.data(), tmp.size());
        }
    }

    // Predicate route (exact monotone binary models): position q can carry
    // two symbols among continuations of u iff the zero-filled word with a
    // single extra 1 at q is admissible.
    if (model.ones_admissible && model.predicate_exact && model.predicate_monotone &&
        model.alphabet_size == 2 && u.offset == 0) {
        have_route = true;
        std::vector<i64> base_ones;
        for (std::size_t i = 0; i < u.word.size(); ++i)
            if (u.word[i]) base_ones.push_back(static_cast<i64>(i));
        if (!model.ones_admissible(base_ones)) {
            out.verdict = Verdict::inconclusive;
            out.note = "cylinder word not admissible";
            return out;
        }
        std::vector<i64> probe_ones = base_ones;
        probe_ones.push_back(0);
        for (i64 q = m; q < len; ++q) {
            if (amb[static_cast<std::size_t>(q)]) continue;
            probe_ones.back() = q;
            if (model.ones_admissible(probe_ones)) amb[static_cast<std::size_t>(q)] = 1;
        }
    }

    if (!have_route) {
        out.verdict = Verdict::inconclusive;
        out.note = "fewer than 2 cylinder occurrences and no exact predicate";
        return out;
    }

    // Time i is ambiguous iff some ambiguous position lies in [i, i+r).
    std::vector<std::uint8_t> amb_time(static_cast<std::size_t>(horizon) + 1, 0);
    {
        i64 next = len;
        for (i64 i = len - 1; i >= 0; --i) {
            if (amb[static_cast<std::size_t>(i)]) next = i;
            if (i <= horizon) amb_time[static_cast<std::size_t>(i)] = (next - i < r) ? 1 : 0;
        }
    }
    // With offset 0 the head [0, m) sits inside the shared cylinder and can
    // never be ambiguous; densities ignore finite sets, so measure from m on.
    const i64 trim = (u.offset == 0) ? m : 0;
    auto prof = profile_from_indicator(amb_time.data() + trim, horizon + 1 - trim,
                                       dyadic_schedule_up_to(horizon - trim));
    out.statistic = underline ? prof.liminf_est : prof.limsup_est;
    const Rational bound(1, i64{1} << r);
    if (out.statistic <= bound) {
        out.verdict = Verdict::pass;
    } else {
        out.verdict = Verdict::fail;
        ProbeWitness w;
        w.description = "ambiguous times at resolution 2^-" + std::to_string(r);
        w.statistic = out.statistic;
        for (i64 i = 0; i <= horizon && w.sample_times.size() < 8; ++i)
            if (amb_time[static_cast<std::size_t>(i)]) w.sample_times.push_back(i);
        out.witness = w;
    }
    return out;
}

std::optional<ProbeWitness> mean_sensitivity_witness(const SubshiftModel& model, Rational epsilon,
                                                     const Cylinder& u, int budget, i64 horizon,
                                                     std::uint64_t seed) {
    if (!(Rational(0) < epsilon && epsilon < Rational(1)))
        throw std::invalid_argument("mean_sensitivity: epsilon must lie in (0,1)");
    const auto schedule = linear_schedule(horizon, 16);
    for (const auto& g : model.generators)
        g.ensure(static_cast<std::size_t>(2 * horizon + static_cast<i64>(u.word.size()) + u.offset) + 16);

    std::vector<SymbolicPoint> samples;
    auto occs = cylinder_occurrences(model, u, horizon, horizon, static_cast<std::size_t>(budget / 2 + 1));
    for (const auto& o : occs) {
        samples.push_back(o.t == 0 ? model.generators[o.gen]
                                   : point_shifted(model.generators[o.gen], o.t));
    }
    if (model.sampler) {
        const int n_ext = std::max(2, budget - static_cast<int>(samples.size()));
        for (int k = 0; k < n_ext; ++k)
            samples.push_back(model.sampler(u.word, splitmix64(seed ^ (0xbeef + k)), horizon));
    }

    int evaluated = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        for (std::size_t j = i + 1; j < samples.size(); ++j) {
            if (++evaluated > budget) return std::nullopt;
            auto prof = disagreement_density(samples[i], samples[j], schedule);
            if (epsilon < prof.limsup_est) {
                ProbeWitness w;
                w.description = "pair (" + samples[i].label() + ", " + samples[j].label() +
                                ") separates with density " + prof.limsup_est.to_string();
                w.statistic = prof.limsup_est;
                return w;
            }
        }
    }
    return std::nullopt;
}

}  // namespace shiftlab
