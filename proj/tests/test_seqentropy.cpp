#include "doctest.h"

#include <cmath>
#include <map>

#include "oracles.hpp"
#include "shiftlab/seqentropy.hpp"

using namespace shiftlab;

TEST_CASE("pattern_count basics") {
    auto full = full_shift();
    CHECK(pattern_count(full, PositionSet({0, 1, 2}), 1 << 12) == 8);

    auto st = sturmian_model(golden_conjugate128(), Fixed128{});
    CHECK(pattern_count(st, PositionSet::contiguous(10), 1 << 20) == 11);

    auto pw = powers_subshift();
    CHECK(pattern_count(pw, PositionSet({2, 4, 8}), 1 << 16) == 8);
}

TEST_CASE("pattern_count is monotone in positions and horizon") {
    auto st = sturmian_model(golden_conjugate128(), Fixed128{});
    i64 c3 = pattern_count(st, PositionSet({0, 2, 5}), 1 << 14);
    i64 c4 = pattern_count(st, PositionSet({0, 2, 5, 9}), 1 << 14);
    CHECK(c4 >= c3);
    i64 c3_big = pattern_count(st, PositionSet({0, 2, 5}), 1 << 16);
    CHECK(c3_big >= c3);

    auto tp = regular_toeplitz_example();
    CHECK(pattern_count(tp, PositionSet({0, 1, 2, 3}), 1 << 14) <=
          pattern_count(tp, PositionSet({0, 1, 2, 3}), 1 << 16));
}

TEST_CASE("pattern_count against the naive tuple oracle") {
    // occurrence-route models only (no predicate union), so the universes match
    auto st = sturmian_model(golden_conjugate128(), Fixed128{});
    for (auto positions : {std::vector<i64>{0, 3}, {1, 4, 9}, {0, 2, 4, 8}}) {
        auto naive = oracle::tuples_naive(st.generators[0], positions, 1 << 14);
        CHECK(pattern_count(st, PositionSet(positions), 1 << 14) == static_cast<i64>(naive.size()));
    }
}

TEST_CASE("seq_entropy_estimate: full shift contiguous rate is one bit") {
    auto full = full_shift();
    auto est = seq_entropy_estimate(full, PositionSet::contiguous(14), 1 << 18);
    for (std::size_t k = 0; k < est.counts.size(); ++k)
        CHECK(est.counts[k] == (i64{1} << (k + 1)));
    CHECK(est.bits_per_step == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("seq_entropy_estimate: powers along the power positions is one bit") {
    auto pw = powers_subshift();
    auto est = seq_entropy_estimate(pw, PositionSet::powers_of_two(12), 1 << 13);
    CHECK(est.bits_per_step == doctest::Approx(1.0).epsilon(0.05));
    CHECK(est.counts.back() == (i64{1} << 12));
}

TEST_CASE("seq_entropy_estimate: sturmian contiguous rate is tiny") {
    auto st = sturmian_model(golden_conjugate128(), Fixed128{});
    auto est = seq_entropy_estimate(st, PositionSet::contiguous(20), 1 << 18);
    CHECK(est.bits_per_step <= 0.1);
    for (std::size_t k = 0; k < est.counts.size(); ++k)
        CHECK(est.counts[k] == static_cast<i64>(k) + 2);  // factor complexity n+1
}

TEST_CASE("empirical_partition_entropy") {
    auto per = periodic_model(word_from_string("01"));
    CHECK(empirical_partition_entropy(per, 0, PositionSet({0, 1, 2}), 1 << 14) <= 1.0);

    auto full = full_shift();
    CHECK(empirical_partition_entropy(full, 0, PositionSet({0, 1, 2}), 1'000'000) ==
          doctest::Approx(3.0).epsilon(0.017));

    // bounded by |S| log2(alphabet)
    auto st = sturmian_model(golden_conjugate128(), Fixed128{});
    CHECK(empirical_partition_entropy(st, 0, PositionSet({0, 1, 2, 3}), 1 << 16) <= 4.0);

    CHECK_THROWS(empirical_partition_entropy(full, 0, PositionSet({0, 1 << 20}), 1 << 21));
}

TEST_CASE("empirical_partition_entropy: toeplitz power positions, frozen from the frequency oracle") {
    auto tp = regular_toeplitz_example();
    const double h = empirical_partition_entropy(tp, 0, PositionSet({2, 4, 8, 16}), i64{1} << 22);

    // independent brute-force frequency count
    auto pre = tp.generators[0].prefix(std::size_t{1} << 22);
    std::map<int, i64> freq;
    const i64 limit = (i64{1} << 22) - 16;
    for (i64 i = 0; i < limit; ++i) {
        int key = pre[i + 2] * 8 + pre[i + 4] * 4 + pre[i + 8] * 2 + pre[i + 16];
        freq[key]++;
    }
    double expect = 0;
    for (auto& [k, c] : freq) {
        double p = double(c) / double(limit);
        expect -= p * std::log2(p);
    }
    CHECK(h == doctest::Approx(expect).epsilon(1e-9));
    // constant levels pin these positions to a few residue classes; the
    // value is far below the 4-bit ceiling and frozen here
    CHECK(h == doctest::Approx(2.2925).epsilon(0.01));
}

TEST_CASE("independence: powers certificate of size four via the zero-fill route") {
    auto pw = powers_subshift();
    IndependenceOptions opt;
    opt.max_k = 4;
    opt.pool_cap = 64;
    opt.horizon = 1 << 16;
    auto res = independence_search(pw, word_from_string("0"), word_from_string("1"), opt);
    REQUIRE(res.status == SearchStatus::found);
    REQUIRE(res.certificate.has_value());
    CHECK(res.certificate->positions.size() == 4);
    CHECK(res.certificate->positions == std::vector<i64>{0, 2, 6, 14});
    CHECK(validate_certificate(pw, *res.certificate, 1 << 16));
}

TEST_CASE("independence: single_one tops out at one position") {
    auto so = single_one_subshift();
    IndependenceOptions opt;
    opt.max_k = 3;
    opt.pool_cap = 48;
    opt.horizon = 1 << 16;
    auto res = independence_search(so, word_from_string("0"), word_from_string("1"), opt);
    REQUIRE(res.status == SearchStatus::found);
    CHECK(res.certificate->positions.size() == 1);  // pattern (1,1) needs two 1s
    CHECK(validate_certificate(so, *res.certificate, 1 << 16));
}

TEST_CASE("independence: toeplitz certificate of size three on the deep-level strides") {
    auto tp = regular_toeplitz_example();
    IndependenceOptions opt;
    opt.max_k = 3;
    opt.horizon = 1 << 18;
    opt.occ_cap = 1 << 17;
    for (i64 k = 0; k < 13; ++k) opt.pool.push_back(k * 2048);
    auto res = independence_search(tp, word_from_string("0"), word_from_string("1"), opt);
    REQUIRE(res.status == SearchStatus::found);
    CHECK(res.certificate->positions.size() == 3);
    CHECK(validate_certificate(tp, *res.certificate, 1 << 18));
}

TEST_CASE("independence: certificate json round trip") {
    auto pw = powers_subshift();
    IndependenceOptions opt;
    opt.max_k = 3;
    opt.pool_cap = 32;
    opt.horizon = 1 << 14;
    auto res = independence_search(pw, word_from_string("0"), word_from_string("1"), opt);
    REQUIRE(res.status == SearchStatus::found);
    auto j = res.certificate->to_json();
    auto back = IndependenceCertificate::from_json(j);
    CHECK(back.positions == res.certificate->positions);
    CHECK(back.witnesses == res.certificate->witnesses);
    CHECK(validate_certificate(pw, back, 1 << 14));
}

TEST_CASE("independence: budget exhaustion is distinct from none") {
    auto tp = regular_toeplitz_example();
    IndependenceOptions opt;
    opt.max_k = 3;
    opt.pool_cap = 512;
    opt.horizon = 1 << 14;
    opt.node_budget = 40;  // far too small to finish the blind scan
    auto res = independence_search(tp, word_from_string("0"), word_from_string("1"), opt);
    CHECK(res.nodes_explored <= 40);
    // a sub-max certificate may still surface; exhaustion shows when nothing did
    if (res.status != SearchStatus::found) CHECK(res.status == SearchStatus::budget_exhausted);
}

TEST_CASE("validator rejects corrupted certificates") {
    auto pw = powers_subshift();
    IndependenceOptions opt;
    opt.max_k = 2;
    opt.pool_cap = 16;
    opt.horizon = 1 << 12;
    auto res = independence_search(pw, word_from_string("0"), word_from_string("1"), opt);
    REQUIRE(res.status == SearchStatus::found);
    auto cert = *res.certificate;
    cert.witnesses[1][static_cast<std::size_t>(cert.positions[0])] ^= 1;  // break a placement
    CHECK_FALSE(validate_certificate(pw, cert, 1 << 12));

    auto cert2 = *res.certificate;
    // a word with two 1s off the power grid is outside the language
    for (std::size_t i = 0; i < cert2.witnesses[0].size(); ++i) cert2.witnesses[0][i] = 0;
    if (cert2.witnesses[0].size() >= 2) {
        cert2.witnesses[0][0] = 1;
        cert2.witnesses[0][1] = 1;
        // keep placements consistent for pattern 0 => u="0" at all positions
        for (auto p : cert2.positions) cert2.witnesses[0][static_cast<std::size_t>(p)] = 0;
        if (cert2.positions[0] > 1) CHECK_FALSE(validate_certificate(pw, cert2, 1 << 12));
    }
}

TEST_CASE("seqentr_builder: full shift doubles for ten steps") {
    auto full = full_shift();
    SeqEntrBuilderOptions opt;
    opt.m = 1;
    opt.n_steps = 10;
    opt.horizon = 1 << 18;
    opt.scan_cap = 64;
    auto res = seqentr_builder(full, opt);
    REQUIRE(res.curve.steps.size() == 10);
    for (std::size_t k = 0; k < res.curve.steps.size(); ++k)
        CHECK(res.curve.steps[k].second == (i64{1} << (k + 1)));
    CHECK(res.curve.rate_estimate == doctest::Approx(1.0).epsilon(0.01));
    CHECK(res.curve.stall_note.empty());
}

TEST_CASE("seqentr_builder: growth bound whenever the split fraction is reported") {
    auto models = std::vector<SubshiftModel>{full_shift(), single_one_subshift()};
    SeqEntrBuilderOptions opt;
    opt.m = 2;
    opt.n_steps = 8;
    opt.horizon = 1 << 16;
    opt.scan_cap = 256;
    for (const auto& m : models) {
        auto res = seqentr_builder(m, opt);
        i64 prev = 1;
        for (std::size_t k = 0; k < res.curve.steps.size(); ++k) {
            const i64 cur = res.curve.steps[k].second;
            CHECK(cur >= prev);  // refinement never loses cells
            const Rational f = res.curve.split_fractions[k];
            // N_{k+1} >= (1 + f) N_k - 1, exact in rationals
            CHECK(Rational(cur) >= (Rational(1) + f) * Rational(prev) - Rational(1));
            prev = cur;
        }
    }
}

TEST_CASE("seqentr_builder: single_one grows slowly and stalls or flattens") {
    auto so = single_one_subshift();
    SeqEntrBuilderOptions opt;
    opt.m = 2;
    opt.n_steps = 10;
    opt.horizon = 1 << 16;
    opt.scan_cap = 512;
    auto res = seqentr_builder(so, opt);
    if (!res.curve.steps.empty()) {
        // cells are distinguished only by where the single 1 sits: growth
        // stays linear-ish, far under doubling
        CHECK(res.curve.steps.back().second <= 3 * static_cast<i64>(res.curve.steps.size()) + 2);
        CHECK(res.curve.rate_estimate <= 0.6);
    }
}

TEST_CASE("seqentr_builder: sturmian rate stays small") {
    auto st = sturmian_model(golden_conjugate128(), Fixed128{});
    SeqEntrBuilderOptions opt;
    opt.m = 4;
    opt.n_steps = 20;
    opt.horizon = 1 << 17;
    opt.scan_cap = 2048;
    auto res = seqentr_builder(st, opt);
    CHECK(res.curve.rate_estimate <= 0.1);
    // the curve is linear (five new cells per chosen time), not exponential
    for (std::size_t k = 0; k < res.curve.steps.size(); ++k)
        CHECK(res.curve.steps[k].second <= 6 * static_cast<i64>(k) + 8);
}

TEST_CASE("pattern budget violations surface as budget errors") {
    auto full = full_shift();
    CHECK_THROWS_AS(pattern_count(full, PositionSet::contiguous(8), 1 << 12, 16), BudgetExceeded);
    CHECK_THROWS_AS(language(full, 8, 1 << 10, 16), BudgetExceeded);
}
