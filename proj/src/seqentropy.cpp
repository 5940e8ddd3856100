#include "shiftlab/seqentropy.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace shiftlab {

PositionSet::PositionSet(std::vector<i64> pos) : positions(std::move(pos)) {
    if (positions.empty()) throw std::invalid_argument("PositionSet: empty");
    for (std::size_t i = 0; i < positions.size(); ++i) {
        if (positions[i] < 0) throw std::invalid_argument("PositionSet: negative position");
        if (i && positions[i] <= positions[i - 1])
            throw std::invalid_argument("PositionSet: must be strictly increasing");
    }
}

PositionSet PositionSet::contiguous(int n) {
    std::vector<i64> p(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
    return PositionSet(std::move(p));
}

PositionSet PositionSet::powers_of_two(int n) {
    std::vector<i64> p;
    for (int k = 1; k <= n; ++k) p.push_back(i64{1} << k);
    return PositionSet(std::move(p));
}

namespace {

double log2_slope_tail(const std::vector<i64>& counts) {
    // Least squares on (k, log2 N_k) over the last half, k starting at 1.
    const std::size_t n = counts.size();
    const std::size_t from = n / 2;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (std::size_t i = from; i < n; ++i) {
        double x = static_cast<double>(i + 1);
        double y = std::log2(static_cast<double>(counts[i]));
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++cnt;
    }
    if (cnt < 2) return 0.0;
    double denom = cnt * sxx - sx * sx;
    if (denom == 0) return 0.0;
    return (cnt * sxy - sx * sy) / denom;
}

// The observed pattern set, not the full tuple space, is what must fit the
// budget; the packed key just has to stay inside 62 bits.
void check_pack_width(int alphabet, std::size_t n) {
    double width = static_cast<double>(n) * std::log2(static_cast<double>(alphabet));
    if (width > 62) throw BudgetExceeded("pattern tuple space exceeds 2^62");
}

// Occurrence tuples packed base-alphabet, budget-capped.
void collect_occurrence_patterns(const SubshiftModel& model, const PositionSet& s, i64 horizon,
                                 i64 budget, std::unordered_set<std::uint64_t>& out) {
    const i64 maxpos = s.max();
    for (const auto& gen : model.generators) {
        auto pre = gen.prefix(static_cast<std::size_t>(horizon) + 1);
        const i64 limit = horizon - maxpos;
        for (i64 i = 0; i < limit; ++i) {
            std::uint64_t key = 0;
            for (i64 p : s.positions)
                key = key * static_cast<std::uint64_t>(model.alphabet_size) +
                      pre[static_cast<std::size_t>(i + p)];
            out.insert(key);
            if (static_cast<i64>(out.size()) > budget)
                throw BudgetExceeded("pattern_count exceeded budget");
        }
    }
}

// Zero-filled realizable patterns on exact monotone binary models.
void collect_predicate_patterns(const SubshiftModel& model, const PositionSet& s, i64 budget,
                                std::unordered_set<std::uint64_t>& out) {
    if (!(model.ones_admissible && model.predicate_exact && model.predicate_monotone &&
          model.alphabet_size == 2))
        return;
    const std::size_t n = s.size();
    if (n > 20) return;  // 2^n enumeration guard; occurrences still apply
    const std::uint64_t total = std::uint64_t{1} << n;
    if (static_cast<i64>(total) > budget) throw BudgetExceeded("pattern_count exceeded budget");
    std::vector<i64> ones;
    for (std::uint64_t pat = 0; pat < total; ++pat) {
        ones.clear();
        // Bit r of the packed key corresponds to position r in base-2
        // big-endian packing: key = sum sym_r * 2^(n-1-r).
        for (std::size_t r = 0; r < n; ++r)
            if ((pat >> (n - 1 - r)) & 1) ones.push_back(s.positions[r]);
        if (model.ones_admissible(ones)) {
            out.insert(pat);
            if (static_cast<i64>(out.size()) > budget)
                throw BudgetExceeded("pattern_count exceeded budget");
        }
    }
}

}  // namespace

i64 pattern_count(const SubshiftModel& model, const PositionSet& s, i64 horizon, i64 budget) {
    if (s.max() + 1 > horizon) throw std::invalid_argument("pattern_count: positions exceed horizon");
    check_pack_width(model.alphabet_size, s.size());
    std::unordered_set<std::uint64_t> patterns;
    collect_occurrence_patterns(model, s, horizon, budget, patterns);
    collect_predicate_patterns(model, s, budget, patterns);
    return static_cast<i64>(patterns.size());
}

SeqEntropyEstimate seq_entropy_estimate(const SubshiftModel& model, const PositionSet& family,
                                        i64 horizon, i64 budget) {
    if (family.size() < 4) throw std::invalid_argument("seq_entropy_estimate: need |S| >= 4");
    SeqEntropyEstimate est;
    for (std::size_t k = 1; k <= family.size(); ++k) {
        PositionSet prefix(std::vector<i64>(family.positions.begin(),
                                            family.positions.begin() + static_cast<std::ptrdiff_t>(k)));
        est.counts.push_back(pattern_count(model, prefix, horizon, budget));
    }
    est.bits_per_step = log2_slope_tail(est.counts);
    return est;
}

double empirical_partition_entropy(const SubshiftModel& model, std::size_t generator_index,
                                   const PositionSet& s, i64 horizon) {
    if (generator_index >= model.generators.size())
        throw std::invalid_argument("empirical_partition_entropy: no such generator");
    if (horizon < 100 * s.max())
        throw std::invalid_argument("empirical_partition_entropy: horizon < 100 * max position");
    check_pack_width(model.alphabet_size, s.size());

    const auto& gen = model.generators[generator_index];
    auto pre = gen.prefix(static_cast<std::size_t>(horizon) + 1);
    const i64 limit = horizon - s.max();
    std::unordered_map<std::uint64_t, i64> freq;
    for (i64 i = 0; i < limit; ++i) {
        std::uint64_t key = 0;
        for (i64 p : s.positions)
            key = key * static_cast<std::uint64_t>(model.alphabet_size) +
                  pre[static_cast<std::size_t>(i + p)];
        freq[key]++;
    }
    double h = 0.0;
    const double total = static_cast<double>(limit);
    for (const auto& [key, cnt] : freq) {
        double p = static_cast<double>(cnt) / total;
        h -= p * std::log2(p);
    }
    return h;
}

nlohmann::ordered_json IndependenceCertificate::to_json() const {
    nlohmann::ordered_json j;
    j["u"] = word_to_string(u);
    j["v"] = word_to_string(v);
    j["positions"] = positions;
    nlohmann::ordered_json w = nlohmann::ordered_json::object();
    for (std::size_t pat = 0; pat < witnesses.size(); ++pat) {
        std::string bits;
        for (std::size_t r = 0; r < positions.size(); ++r)
            bits.push_back(((pat >> r) & 1) ? '1' : '0');
        w[bits] = word_to_string(witnesses[pat]);
    }
    j["witnesses"] = w;
    return j;
}

IndependenceCertificate IndependenceCertificate::from_json(const nlohmann::json& j) {
    IndependenceCertificate c;
    c.u = word_from_string(j.at("u").get<std::string>());
    c.v = word_from_string(j.at("v").get<std::string>());
    c.positions = j.at("positions").get<std::vector<i64>>();
    c.witnesses.resize(std::size_t{1} << c.positions.size());
    for (const auto& [bits, word] : j.at("witnesses").items()) {
        std::size_t pat = 0;
        for (std::size_t r = 0; r < bits.size(); ++r)
            if (bits[r] == '1') pat |= (std::size_t{1} << r);
        c.witnesses[pat] = word_from_string(word.get<std::string>());
    }
    return c;
}

namespace {

// Occurrence-scan state shared by the whole search: per generator, match
// indicators for u and v over the prefix.
struct MatchIndex {
    std::vector<std::vector<std::uint8_t>> match_u, match_v;  // per generator
    std::vector<std::span<const std::uint8_t>> prefix;
    i64 scan_limit = 0;  // occurrence starts i < scan_limit are usable
    i64 word_len = 0;
};

MatchIndex build_match_index(const SubshiftModel& model, const Word& u, const Word& v,
                             const IndependenceOptions& opt, i64 pool_max) {
    MatchIndex idx;
    idx.word_len = static_cast<i64>(std::max(u.size(), v.size()));
    const i64 prefix_len = opt.horizon;
    idx.scan_limit = std::min<i64>(opt.occ_cap, prefix_len - pool_max - idx.word_len);
    if (idx.scan_limit < 0) idx.scan_limit = 0;
    for (const auto& gen : model.generators) gen.ensure(static_cast<std::size_t>(prefix_len));
    for (const auto& gen : model.generators) {
        auto pre = gen.prefix(static_cast<std::size_t>(prefix_len));
        idx.prefix.push_back(pre);
        std::vector<std::uint8_t> mu(pre.size(), 0), mv(pre.size(), 0);
        for (std::size_t i = 0; i + u.size() <= pre.size(); ++i)
            mu[i] = std::memcmp(pre.data() + i, u.data(), u.size()) == 0;
        for (std::size_t i = 0; i + v.size() <= pre.size(); ++i)
            mv[i] = std::memcmp(pre.data() + i, v.data(), v.size()) == 0;
        idx.match_u.push_back(std::move(mu));
        idx.match_v.push_back(std::move(mv));
    }
    return idx;
}

struct NodeEval {
    bool full = false;
    std::vector<std::uint32_t> pattern_bits;  // bitset over 2^k patterns
};

// Realizable patterns of the position tuple from occurrences (set bits) and,
// for single-symbol u/v on monotone models, from the zero-fill predicate.
NodeEval evaluate_positions(const SubshiftModel& model, const MatchIndex& idx,
                            const std::vector<i64>& positions, const Word& u, const Word& v) {
    const std::size_t k = positions.size();
    const std::size_t npat = std::size_t{1} << k;
    NodeEval ev;
    ev.pattern_bits.assign((npat + 31) / 32, 0);
    std::size_t seen = 0;

    auto mark = [&](std::size_t pat) {
        auto& wordref = ev.pattern_bits[pat >> 5];
        const std::uint32_t bit = std::uint32_t{1} << (pat & 31);
        if (!(wordref & bit)) {
            wordref |= bit;
            ++seen;
        }
    };

    // Predicate route: u/v single symbols 0/1 on exact monotone binary models.
    const bool predicate_route = model.ones_admissible && model.predicate_exact &&
                                 model.predicate_monotone && model.alphabet_size == 2 &&
                                 u.size() == 1 && v.size() == 1 && u[0] == 0 && v[0] == 1;
    if (predicate_route) {
        std::vector<i64> ones;
        for (std::size_t pat = 0; pat < npat; ++pat) {
            ones.clear();
            for (std::size_t r = 0; r < k; ++r)
                if ((pat >> r) & 1) ones.push_back(positions[r]);
            if (model.ones_admissible(ones)) mark(pat);
        }
        if (seen == npat) {
            ev.full = true;
            return ev;
        }
    }

    for (std::size_t g = 0; g < idx.prefix.size() && seen < npat; ++g) {
        const auto& mu = idx.match_u[g];
        const auto& mv = idx.match_v[g];
        const i64 limit = std::min<i64>(idx.scan_limit, static_cast<i64>(mu.size()));
        for (i64 i = 0; i < limit; ++i) {
            std::size_t pat = 0;
            bool ok = true;
            for (std::size_t r = 0; r < k; ++r) {
                const std::size_t q = static_cast<std::size_t>(i + positions[r]);
                if (q >= mu.size()) { ok = false; break; }
                if (mv[q]) pat |= (std::size_t{1} << r);
                else if (!mu[q]) { ok = false; break; }
            }
            if (ok) {
                mark(pat);
                if (seen == npat) break;
            }
        }
    }
    ev.full = (seen == npat);
    return ev;
}

// Witness word for one pattern of the final position set.
std::optional<Word> extract_witness(const SubshiftModel& model, const MatchIndex& idx,
                                    const std::vector<i64>& positions, const Word& u, const Word& v,
                                    std::size_t pat) {
    const std::size_t k = positions.size();
    const i64 wit_len = positions.back() + idx.word_len;

    const bool predicate_route = model.ones_admissible && model.predicate_exact &&
                                 model.predicate_monotone && model.alphabet_size == 2 &&
                                 u.size() == 1 && v.size() == 1 && u[0] == 0 && v[0] == 1;
    if (predicate_route) {
        std::vector<i64> ones;
        for (std::size_t r = 0; r < k; ++r)
            if ((pat >> r) & 1) ones.push_back(positions[r]);
        if (model.ones_admissible(ones)) {
            Word w(static_cast<std::size_t>(wit_len), 0);
            for (i64 q : ones) w[static_cast<std::size_t>(q)] = 1;
            return w;
        }
    }
    for (std::size_t g = 0; g < idx.prefix.size(); ++g) {
        const auto& mu = idx.match_u[g];
        const auto& mv = idx.match_v[g];
        const i64 limit = std::min<i64>(idx.scan_limit, static_cast<i64>(mu.size()));
        for (i64 i = 0; i < limit; ++i) {
            if (static_cast<std::size_t>(i + wit_len) > idx.prefix[g].size()) break;
            bool ok = true;
            for (std::size_t r = 0; r < k && ok; ++r) {
                const std::size_t q = static_cast<std::size_t>(i + positions[r]);
                ok = ((pat >> r) & 1) ? mv[q] != 0 : mu[q] != 0;
            }
            if (ok) {
                auto pre = idx.prefix[g];
                return Word(pre.begin() + i, pre.begin() + i + wit_len);
            }
        }
    }
    return std::nullopt;
}

struct SearchState {
    const SubshiftModel* model;
    const MatchIndex* idx;
    const Word *u, *v;
    const IndependenceOptions* opt;
    std::vector<i64> pool;
    std::uint64_t nodes = 0;
    bool truncated = false;
    std::vector<i64> best;
};

// DFS over position prefixes whose full pattern set is realizable. A prefix
// that already misses a pattern can never recover (realizable sets only
// shrink under extension), so only fully-realizable nodes are expanded.
void dfs(SearchState& st, std::vector<i64>& current) {
    if (current.size() > st.best.size()) st.best = current;
    if (static_cast<int>(current.size()) >= st.opt->max_k) return;
    for (i64 p : st.pool) {
        if (!current.empty() && p <= current.back()) continue;
        if (st.nodes >= st.opt->node_budget) {
            st.truncated = true;
            return;
        }
        ++st.nodes;
        current.push_back(p);
        NodeEval ev = evaluate_positions(*st.model, *st.idx, current, *st.u, *st.v);
        if (ev.full) {
            dfs(st, current);
            if (static_cast<int>(st.best.size()) >= st.opt->max_k || st.truncated) {
                current.pop_back();
                return;
            }
        }
        current.pop_back();
    }
}

}  // namespace

IndependenceResult independence_search(const SubshiftModel& model, const Word& u, const Word& v,
                                       const IndependenceOptions& opt) {
    if (u == v || u.empty() || v.empty())
        throw std::invalid_argument("independence_search: need distinct nonempty words");
    if (opt.max_k < 1 || opt.max_k > 16)
        throw std::invalid_argument("independence_search: max_k out of range");

    std::vector<i64> pool;
    if (!opt.pool.empty()) {
        pool = opt.pool;
        std::sort(pool.begin(), pool.end());
        pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
        if (pool.front() < 0) throw std::invalid_argument("independence_search: negative pool entry");
    } else {
        for (i64 p = 0; p < opt.pool_cap; ++p) pool.push_back(p);
    }

    MatchIndex idx = build_match_index(model, u, v, opt, pool.back());
    SearchState st{&model, &idx, &u, &v, &opt, std::move(pool), 0, false, {}};
    std::vector<i64> current;
    dfs(st, current);

    IndependenceResult res;
    res.nodes_explored = st.nodes;
    res.truncated = st.truncated;
    if (st.best.empty()) {
        res.status = st.truncated ? SearchStatus::budget_exhausted : SearchStatus::none;
        return res;
    }
    IndependenceCertificate cert;
    cert.u = u;
    cert.v = v;
    cert.positions = st.best;
    const std::size_t npat = std::size_t{1} << st.best.size();
    for (std::size_t pat = 0; pat < npat; ++pat) {
        auto w = extract_witness(model, idx, st.best, u, v, pat);
        if (!w) {
            // Scan truncation can lose a witness the evaluation saw; treat as
            // a budget artifact rather than fabricate.
            res.status = SearchStatus::budget_exhausted;
            return res;
        }
        cert.witnesses.push_back(std::move(*w));
    }
    res.certificate = std::move(cert);
    res.status = SearchStatus::found;  // truncated flag still tells callers the scan was cut
    return res;
}

bool validate_certificate(const SubshiftModel& model, const IndependenceCertificate& cert,
                          i64 horizon) {
    const std::size_t k = cert.positions.size();
    if (cert.witnesses.size() != (std::size_t{1} << k)) return false;
    for (std::size_t pat = 0; pat < cert.witnesses.size(); ++pat) {
        const Word& w = cert.witnesses[pat];
        // Placement check, written plainly.
        for (std::size_t r = 0; r < k; ++r) {
            const Word& expect = ((pat >> r) & 1) ? cert.v : cert.u;
            const std::size_t at = static_cast<std::size_t>(cert.positions[r]);
            if (at + expect.size() > w.size()) return false;
            for (std::size_t j = 0; j < expect.size(); ++j)
                if (w[at + j] != expect[j]) return false;
        }
        // Language membership: exact predicate when present, otherwise a
        // plain search through generator prefixes.
        if (model.word_predicate && model.predicate_exact) {
            if (!model.word_predicate(w)) return false;
        } else {
            bool seen = false;
            for (const auto& gen : model.generators) {
                auto pre = gen.prefix(static_cast<std::size_t>(horizon));
                auto it = std::search(pre.begin(), pre.end(), w.begin(), w.end());
                if (it != pre.end()) { seen = true; break; }
            }
            if (!seen) return false;
        }
    }
    return true;
}

SeqEntrBuilderResult seqentr_builder(const SubshiftModel& model, const SeqEntrBuilderOptions& opt) {
    if (opt.m < 1 || opt.n_steps < 1) throw std::invalid_argument("seqentr_builder: bad options");
    const i64 window = opt.scan_cap + opt.m;

    // Occurrences: all usable window starts, evenly strided down to occ_cap.
    struct Occ { std::size_t gen; i64 t; };
    std::vector<Occ> occs;
    for (const auto& g : model.generators) g.ensure(static_cast<std::size_t>(opt.horizon) + 1);
    for (std::size_t g = 0; g < model.generators.size(); ++g) {
        auto pre = model.generators[g].prefix(static_cast<std::size_t>(opt.horizon));
        const i64 limit = opt.horizon - window;
        if (limit <= 0) continue;
        const i64 stride = std::max<i64>(1, limit / std::max<i64>(1, opt.occ_cap / static_cast<i64>(model.generators.size())));
        for (i64 t = 0; t < limit; t += stride) occs.push_back({g, t});
    }
    if (occs.size() < 2) throw std::invalid_argument("seqentr_builder: not enough occurrences");

    std::vector<std::uint32_t> cell_of(occs.size(), 0);
    i64 n_cells = 1;

    SeqEntrBuilderResult result{PositionSet({0}), {}};
    std::vector<i64> chosen;
    std::vector<std::uint8_t> taken(static_cast<std::size_t>(opt.scan_cap), 0);

    auto symbol_at = [&](const Occ& o, i64 q) {
        return model.generators[o.gen].prefix(static_cast<std::size_t>(o.t + q) + 1)[static_cast<std::size_t>(o.t + q)];
    };

    for (int step = 0; step < opt.n_steps; ++step) {
        // Representatives per cell.
        std::vector<std::vector<std::size_t>> reps(static_cast<std::size_t>(n_cells));
        for (std::size_t i = 0; i < occs.size(); ++i) {
            auto& r = reps[cell_of[i]];
            if (static_cast<int>(r.size()) < opt.reps_per_cell) r.push_back(i);
        }

        // counts[g] = number of cells with two representatives separated at
        // resolution m at time g (some disagreement inside [g, g+m)).
        std::vector<std::uint32_t> counts(static_cast<std::size_t>(opt.scan_cap), 0);
        std::vector<std::uint8_t> disagree(static_cast<std::size_t>(window), 0);
        for (const auto& r : reps) {
            if (r.size() < 2) continue;
            std::fill(disagree.begin(), disagree.end(), 0);
            const Occ& ref = occs[r[0]];
            auto ref_pre = model.generators[ref.gen].prefix(static_cast<std::size_t>(ref.t + window));
            for (std::size_t k = 1; k < r.size(); ++k) {
                const Occ& o = occs[r[k]];
                auto pre = model.generators[o.gen].prefix(static_cast<std::size_t>(o.t + window));
                for (i64 q = 0; q < window; ++q)
                    disagree[static_cast<std::size_t>(q)] |=
                        (ref_pre[static_cast<std::size_t>(ref.t + q)] != pre[static_cast<std::size_t>(o.t + q)]);
            }
            // windowed OR: cell splits at g iff any disagreement in [g, g+m)
            i64 next = window;
            for (i64 g = window - 1; g >= 0; --g) {
                if (disagree[static_cast<std::size_t>(g)]) next = g;
                if (g < opt.scan_cap && !taken[static_cast<std::size_t>(g)] && next - g < opt.m)
                    counts[static_cast<std::size_t>(g)]++;
            }
        }

        std::uint32_t best = 0;
        i64 best_g = -1;
        for (i64 g = 0; g < opt.scan_cap; ++g) {
            if (counts[static_cast<std::size_t>(g)] > best) {
                best = counts[static_cast<std::size_t>(g)];
                best_g = g;
            }
        }
        if (best == 0) {
            result.curve.stall_note = "no time within scan cap splits any cell at step " +
                                      std::to_string(step + 1);
            break;
        }

        chosen.push_back(best_g);
        taken[static_cast<std::size_t>(best_g)] = 1;
        result.curve.split_fractions.push_back(Rational(static_cast<i64>(best), n_cells));

        // Refine cells by the m-word at best_g.
        std::map<std::pair<std::uint32_t, std::uint64_t>, std::uint32_t> remap;
        for (std::size_t i = 0; i < occs.size(); ++i) {
            std::uint64_t wkey = 0;
            for (i64 d = 0; d < opt.m; ++d)
                wkey = wkey * static_cast<std::uint64_t>(model.alphabet_size) + symbol_at(occs[i], best_g + d);
            auto key = std::make_pair(cell_of[i], wkey);
            auto [it, inserted] = remap.try_emplace(key, static_cast<std::uint32_t>(remap.size()));
            cell_of[i] = it->second;
        }
        n_cells = static_cast<i64>(remap.size());
        result.curve.steps.emplace_back(best_g, n_cells);
    }

    if (!chosen.empty()) {
        std::vector<i64> sorted = chosen;
        std::sort(sorted.begin(), sorted.end());
        result.sequence = PositionSet(std::move(sorted));
    }
    std::vector<i64> ns;
    for (auto& [g, n] : result.curve.steps) ns.push_back(n);
    result.curve.rate_estimate = ns.empty() ? 0.0 : log2_slope_tail(ns);
    return result;
}

}  // namespace shiftlab
