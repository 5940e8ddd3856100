#include "shiftlab/symbolic.hpp"

#include <algorithm>
#include <stdexcept>

namespace shiftlab {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

std::string word_to_string(const Word& w) {
    std::string s;
    s.reserve(w.size());
    for (auto v : w) s.push_back(static_cast<char>('0' + v));
    return s;
}

Word word_from_string(const std::string& s) {
    Word w;
    w.reserve(s.size());
    for (char c : s) {
        if (c < '0' || c > '9') throw std::invalid_argument("word symbols must be digits");
        w.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return w;
}

SymbolicPoint::SymbolicPoint(int alphabet_size, ExtendRule rule, std::string label) {
    if (alphabet_size < 2) throw std::invalid_argument("alphabet size must be >= 2");
    impl_ = std::make_shared<Impl>();
    impl_->alphabet = alphabet_size;
    impl_->rule = std::move(rule);
    impl_->label = std::move(label);
}

std::span<const std::uint8_t> SymbolicPoint::prefix(std::size_t n) const {
    std::lock_guard<std::mutex> lock(impl_->mu);
    if (impl_->cache.size() < n) {
        impl_->cache.reserve(n);
        impl_->rule(impl_->cache, n);
        if (impl_->cache.size() < n) throw std::runtime_error("point rule under-produced");
    }
    return std::span<const std::uint8_t>(impl_->cache.data(), n);
}

std::uint8_t SymbolicPoint::symbol(i64 i) const {
    if (i < 0) throw std::out_of_range("negative index");
    return prefix(static_cast<std::size_t>(i) + 1)[static_cast<std::size_t>(i)];
}

SymbolicPoint point_zeros() {
    return SymbolicPoint(2, [](std::vector<std::uint8_t>& buf, std::size_t upto) {
        buf.resize(upto, 0);
    }, "zeros");
}

SymbolicPoint point_single_one(i64 pos) {
    return SymbolicPoint(2, [pos](std::vector<std::uint8_t>& buf, std::size_t upto) {
        std::size_t i = buf.size();
        for (; i < upto; ++i) buf.push_back(i == static_cast<std::size_t>(pos) ? 1 : 0);
    }, "single1@" + std::to_string(pos));
}

SymbolicPoint point_periodic(const Word& w) {
    if (w.empty()) throw std::invalid_argument("periodic word must be nonempty");
    int alpha = 2;
    for (auto v : w) alpha = std::max(alpha, int(v) + 1);
    return SymbolicPoint(alpha, [w](std::vector<std::uint8_t>& buf, std::size_t upto) {
        std::size_t i = buf.size();
        for (; i < upto; ++i) buf.push_back(w[i % w.size()]);
    }, "periodic:" + word_to_string(w));
}

SymbolicPoint point_random(std::uint64_t seed, int alphabet_size) {
    return SymbolicPoint(alphabet_size, [seed, alphabet_size](std::vector<std::uint8_t>& buf, std::size_t upto) {
        std::size_t i = buf.size();
        for (; i < upto; ++i)
            buf.push_back(static_cast<std::uint8_t>(splitmix64(seed ^ (0xabcd0000 + i)) % alphabet_size));
    }, "random:" + std::to_string(seed));
}

SymbolicPoint point_supported_on(std::vector<i64> one_positions) {
    std::sort(one_positions.begin(), one_positions.end());
    return SymbolicPoint(2, [pos = std::move(one_positions)](std::vector<std::uint8_t>& buf, std::size_t upto) {
        std::size_t i = buf.size();
        for (; i < upto; ++i)
            buf.push_back(std::binary_search(pos.begin(), pos.end(), static_cast<i64>(i)) ? 1 : 0);
    }, "supported");
}

SymbolicPoint point_powers_support() {
    return SymbolicPoint(2, [](std::vector<std::uint8_t>& buf, std::size_t upto) {
        std::size_t i = buf.size();
        for (; i < upto; ++i) {
            std::size_t v = i;
            buf.push_back(v >= 2 && (v & (v - 1)) == 0 ? 1 : 0);
        }
    }, "powers_support");
}

SymbolicPoint point_shifted(const SymbolicPoint& base, i64 t) {
    if (t < 0) throw std::invalid_argument("shift must be >= 0");
    return SymbolicPoint(base.alphabet_size(), [base, t](std::vector<std::uint8_t>& buf, std::size_t upto) {
        auto src = base.prefix(upto + static_cast<std::size_t>(t));
        std::size_t i = buf.size();
        for (; i < upto; ++i) buf.push_back(src[i + static_cast<std::size_t>(t)]);
    }, base.label() + "<<" + std::to_string(t));
}

SymbolicPoint point_from_text(const std::string& symbols) {
    Word w = word_from_string(symbols);
    if (w.empty()) throw std::invalid_argument("empty point text");
    int alpha = 2;
    for (auto v : w) alpha = std::max(alpha, int(v) + 1);
    return SymbolicPoint(alpha, [w](std::vector<std::uint8_t>& buf, std::size_t upto) {
        if (upto > w.size()) throw std::out_of_range("point text shorter than requested prefix");
        while (buf.size() < upto) buf.push_back(w[buf.size()]);
    }, "text");
}

i64 toeplitz_level_residue(int level) { return (i64{1} << (level - 1)) - 1; }

namespace {

// Symbol of the Toeplitz example point at position q, O(1). Deep level
// constant_levels + j spells w^{j+2} (the concatenation of all binary words
// of that length) repeated along the progression, so every word length is
// realized on some level and the first deep level already carries all
// 3-words.
std::uint8_t toeplitz_symbol(i64 q, int constant_levels) {
    const int level = __builtin_ctzll(static_cast<std::uint64_t>(q + 1)) + 1;
    if (level <= constant_levels) return static_cast<std::uint8_t>((level - 1) & 1);
    const int k = level - constant_levels + 2;
    if (k > 50) return 0;  // beyond any reachable horizon
    const i64 residue = toeplitz_level_residue(level);
    const i64 idx = (q - residue) >> level;
    const i64 wlen = static_cast<i64>(k) << k;  // |w^k| = k 2^k
    const i64 m = idx % wlen;
    const i64 word = m / k;
    const int bit = static_cast<int>(m % k);
    return static_cast<std::uint8_t>((word >> (k - 1 - bit)) & 1);
}

}  // namespace

SymbolicPoint toeplitz_example_point(int constant_levels) {
    if (constant_levels < 1 || constant_levels > 30)
        throw std::invalid_argument("constant_levels out of range");
    return SymbolicPoint(2, [constant_levels](std::vector<std::uint8_t>& buf, std::size_t upto) {
        std::size_t i = buf.size();
        for (; i < upto; ++i) buf.push_back(toeplitz_symbol(static_cast<i64>(i), constant_levels));
    }, "toeplitz");
}

SymbolicPoint sturmian_point(const Fixed128& alpha, const Fixed128& beta) {
    return SymbolicPoint(2, [alpha, beta](std::vector<std::uint8_t>& buf, std::size_t upto) {
        std::size_t i = buf.size();
        Fixed128 cur = beta.plus(alpha.times(static_cast<u64>(i)));
        for (; i < upto; ++i) {
            // x_i = 1 iff frac(beta + i alpha) lands in [1 - alpha, 1),
            // i.e. iff the next rotation step wraps.
            bool wrap = cur.add_wraps(alpha);
            buf.push_back(wrap ? 1 : 0);
        }
    }, "sturmian");
}

namespace {

bool is_power_of_two_ge2(i64 v) { return v >= 2 && (v & (v - 1)) == 0; }

// Admissibility for the powers system: some shift t <= horizon places every
// 1 on {2^n : n >= 1}. Anchoring the first 1 on each power makes the search
// O(#powers * #ones).
bool powers_ones_admissible(const std::vector<i64>& ones, i64 horizon) {
    if (ones.empty()) return true;
    const i64 first = *std::min_element(ones.begin(), ones.end());
    for (i64 a = 2; ; a *= 2) {
        const i64 t = a - first;
        if (t > horizon) break;
        if (t >= 0) {
            bool ok = true;
            for (i64 q : ones) {
                if (!is_power_of_two_ge2(t + q)) { ok = false; break; }
            }
            if (ok) return true;
        }
        if (a > (i64{1} << 61)) break;
    }
    return false;
}

bool powers_admissible(std::span<const std::uint8_t> w, i64 horizon) {
    std::vector<i64> ones;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] > 1) return false;
        if (w[i] == 1) ones.push_back(static_cast<i64>(i));
    }
    return powers_ones_admissible(ones, horizon);
}

SymbolicPoint sample_single_one(const Word& prefix, std::uint64_t seed, i64 horizon) {
    i64 one_at = -1;
    for (std::size_t i = 0; i < prefix.size(); ++i)
        if (prefix[i]) one_at = static_cast<i64>(i);
    if (one_at < 0 && (splitmix64(seed) & 3) != 0) {  // mostly points that do carry a 1
        i64 span = std::max<i64>(1, horizon - static_cast<i64>(prefix.size()));
        one_at = static_cast<i64>(prefix.size()) +
                 static_cast<i64>(splitmix64(seed ^ 0x11) % static_cast<std::uint64_t>(span));
    }
    return one_at < 0 ? point_zeros() : point_single_one(one_at);
}

SymbolicPoint sample_powers(const Word& prefix, std::uint64_t seed, i64 horizon) {
    std::vector<i64> ones;
    for (std::size_t i = 0; i < prefix.size(); ++i)
        if (prefix[i]) ones.push_back(static_cast<i64>(i));
    std::vector<i64> anchors;
    if (ones.empty()) {
        anchors.push_back(static_cast<i64>(splitmix64(seed) % static_cast<std::uint64_t>(horizon / 2 + 1)));
    } else {
        for (i64 a = 2; a <= horizon; a *= 2) {
            const i64 t = a - ones[0];
            if (t < 0 || t > horizon) continue;
            bool ok = true;
            for (std::size_t r = 1; r < ones.size(); ++r)
                if (!is_power_of_two_ge2(t + ones[r])) { ok = false; break; }
            if (ok) anchors.push_back(t);
        }
        if (anchors.empty()) throw std::invalid_argument("powers sampler: prefix not admissible");
    }
    const i64 t = anchors[splitmix64(seed ^ 0x77) % anchors.size()];
    // Random subset of the surviving power positions beyond the prefix.
    std::vector<i64> support = ones;
    for (i64 a = 2; a - t <= horizon; a *= 2) {
        const i64 q = a - t;
        if (q >= static_cast<i64>(prefix.size()) && q <= horizon &&
            (splitmix64(seed ^ static_cast<std::uint64_t>(a)) & 1)) {
            support.push_back(q);
        }
        if (a > (i64{1} << 61)) break;
    }
    return point_supported_on(std::move(support));
}

SymbolicPoint sample_full(const Word& prefix, std::uint64_t seed, i64 /*horizon*/, int alphabet) {
    Word head = prefix;
    return SymbolicPoint(alphabet, [head, seed, alphabet](std::vector<std::uint8_t>& buf, std::size_t upto) {
        std::size_t i = buf.size();
        for (; i < upto; ++i) {
            if (i < head.size()) buf.push_back(head[i]);
            else buf.push_back(static_cast<std::uint8_t>(splitmix64(seed ^ (0xf00d0000 + i)) % alphabet));
        }
    }, "full_sample:" + std::to_string(seed));
}

}  // namespace

SubshiftModel single_one_subshift() {
    SubshiftModel m;
    m.name = "single_one";
    m.alphabet_size = 2;
    m.generators = {point_zeros(), point_single_one(0)};
    m.word_predicate = [](std::span<const std::uint8_t> w) {
        int ones = 0;
        for (auto v : w) {
            if (v > 1) return false;
            ones += v;
            if (ones > 1) return false;
        }
        return true;
    };
    m.predicate_exact = true;
    m.predicate_monotone = true;
    m.ones_admissible = [](const std::vector<i64>& ones) { return ones.size() <= 1; };
    m.sampler = [](const Word& prefix, std::uint64_t seed, i64 horizon) {
        return sample_single_one(prefix, seed, horizon);
    };
    return m;
}

SubshiftModel powers_subshift(i64 shift_search_horizon) {
    SubshiftModel m;
    m.name = "powers";
    m.alphabet_size = 2;
    m.generators = {point_powers_support(), point_supported_on({2, 8}), point_zeros()};
    m.predicate_search_horizon = shift_search_horizon;
    m.word_predicate = [shift_search_horizon](std::span<const std::uint8_t> w) {
        return powers_admissible(w, shift_search_horizon);
    };
    m.predicate_exact = true;
    m.predicate_monotone = true;
    m.ones_admissible = [shift_search_horizon](const std::vector<i64>& ones) {
        return powers_ones_admissible(ones, shift_search_horizon);
    };
    m.sampler = [shift_search_horizon](const Word& prefix, std::uint64_t seed, i64 horizon) {
        return sample_powers(prefix, seed, std::min(horizon, shift_search_horizon));
    };
    return m;
}

SubshiftModel regular_toeplitz_example(i64 horizon) {
    if (horizon < 2) throw std::invalid_argument("regular_toeplitz_example: horizon >= 2");
    SubshiftModel m;
    m.name = "toeplitz";
    m.alphabet_size = 2;
    m.constant_levels = 10;
    m.generators = {toeplitz_example_point(m.constant_levels)};
    m.side_info = SubshiftModel::SideInfo::toeplitz;
    return m;
}

SubshiftModel sturmian_model(const Fixed128& alpha, const Fixed128& beta) {
    if (!irrationality_guard(alpha))
        throw std::invalid_argument("sturmian_model: alpha fails the irrationality guard");
    SubshiftModel m;
    m.name = "sturmian";
    m.alphabet_size = 2;
    m.generators = {sturmian_point(alpha, beta)};
    m.side_info = SubshiftModel::SideInfo::sturmian;
    m.alpha = alpha;
    m.beta = beta;
    return m;
}

SubshiftModel full_shift(int alphabet_size, std::uint64_t seed) {
    SubshiftModel m;
    m.name = "full";
    m.alphabet_size = alphabet_size;
    m.generators = {point_random(seed, alphabet_size), point_random(splitmix64(seed), alphabet_size)};
    m.word_predicate = [alphabet_size](std::span<const std::uint8_t> w) {
        for (auto v : w)
            if (v >= alphabet_size) return false;
        return true;
    };
    m.predicate_exact = true;
    m.predicate_monotone = true;
    m.ones_admissible = [](const std::vector<i64>&) { return true; };
    m.sampler = [alphabet_size](const Word& prefix, std::uint64_t seed2, i64 horizon) {
        return sample_full(prefix, seed2, horizon, alphabet_size);
    };
    return m;
}

SubshiftModel periodic_model(const Word& w) {
    SubshiftModel m;
    m.name = "periodic:" + word_to_string(w);
    auto p = point_periodic(w);
    m.alphabet_size = p.alphabet_size();
    m.generators = {p};
    for (std::size_t t = 1; t < w.size(); ++t) m.generators.push_back(point_shifted(p, static_cast<i64>(t)));
    return m;
}

namespace {

void enumerate_predicate_words(const SubshiftModel& model, std::size_t length, std::set<Word>& out,
                               std::size_t budget, Word& scratch) {
    if (scratch.size() == length) {
        out.insert(scratch);
        if (out.size() > budget) throw BudgetExceeded("language enumeration exceeded budget");
        return;
    }
    for (int sym = 0; sym < model.alphabet_size; ++sym) {
        scratch.push_back(static_cast<std::uint8_t>(sym));
        // Subshift languages are factor-closed, so inadmissible prefixes prune.
        if (model.word_predicate(scratch)) {
            enumerate_predicate_words(model, length, out, budget, scratch);
        }
        scratch.pop_back();
    }
}

}  // namespace

std::set<Word> language(const SubshiftModel& model, std::size_t length, i64 horizon,
                        std::size_t budget) {
    if (length == 0) throw std::invalid_argument("language: length must be >= 1");
    if (static_cast<i64>(length) > horizon) throw std::invalid_argument("language: length > horizon");
    std::set<Word> words;
    for (const auto& gen : model.generators) {
        auto pre = gen.prefix(static_cast<std::size_t>(horizon));
        if (pre.size() < length) continue;
        for (std::size_t i = 0; i + length <= pre.size(); ++i) {
            words.insert(Word(pre.begin() + i, pre.begin() + i + length));
            if (words.size() > budget) throw BudgetExceeded("language enumeration exceeded budget");
        }
    }
    if (model.word_predicate && model.predicate_exact) {
        Word scratch;
        enumerate_predicate_words(model, length, words, budget, scratch);
    }
    return words;
}

}  // namespace shiftlab
