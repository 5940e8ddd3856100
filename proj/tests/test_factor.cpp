#include "doctest.h"

#include "oracles.hpp"
#include "shiftlab/factor.hpp"
#include "shiftlab/probes.hpp"

using namespace shiftlab;

TEST_CASE("periodic point extracts its two progressions exactly") {
    auto p = point_periodic(word_from_string("01"));
    auto ps = extract_periodic_structure(p, 64, 1 << 12);
    REQUIRE(ps.progressions.size() == 2);
    CHECK(ps.progressions[0].period == 2);
    CHECK(ps.progressions[0].residue == 0);
    CHECK(ps.progressions[0].symbol == 0);
    CHECK(ps.progressions[1].period == 2);
    CHECK(ps.progressions[1].residue == 1);
    CHECK(ps.progressions[1].symbol == 1);
    CHECK(ps.coverage_sum == Rational(1));
    CHECK(regularity_check(ps, Rational(1, 512)) == RegularityVerdict::pass);
}

TEST_CASE("toeplitz extraction matches the skeleton recursion for ten levels") {
    auto x = toeplitz_example_point();
    auto ps = extract_periodic_structure(x, i64{1} << 10, i64{1} << 18);

    auto js = oracle::toeplitz_j_recursion(10, i64{1} << 12);
    REQUIRE(ps.progressions.size() == 10);
    for (int n = 1; n <= 10; ++n) {
        const auto& pr = ps.progressions[static_cast<std::size_t>(n - 1)];
        CHECK(pr.period == (i64{1} << n));
        CHECK(pr.residue == js[static_cast<std::size_t>(n - 1)]);
        CHECK(pr.symbol == static_cast<std::uint8_t>((n - 1) % 2));
    }
    CHECK(ps.coverage_sum == Rational(1) - Rational(1, i64{1} << 10));
    CHECK(regularity_check(ps, Rational(1, 512)) == RegularityVerdict::pass);

    // independent re-scan: the point is constant on every reported progression
    auto pre = x.prefix((std::size_t{1} << 18) + (std::size_t{1} << 11));
    for (const auto& pr : ps.progressions) {
        for (i64 q = pr.residue; q < (i64{1} << 18); q += pr.period)
            REQUIRE(pre[static_cast<std::size_t>(q)] == pr.symbol);
    }
    // pairwise disjointness of the progressions, checked directly
    for (i64 q = 0; q < (i64{1} << 12); ++q) {
        int members = 0;
        for (const auto& pr : ps.progressions)
            if (q >= pr.residue && (q - pr.residue) % pr.period == 0) ++members;
        CHECK(members <= 1);
    }
}

TEST_CASE("sturmian point has no periodic structure") {
    // enough samples per candidate period that aperiodicity shows
    auto x = sturmian_point(golden_conjugate128(), Fixed128{});
    auto ps = extract_periodic_structure(x, 256, 1 << 17);
    CHECK(ps.progressions.empty());
    CHECK(ps.coverage_sum == Rational(0));
    CHECK(regularity_check(ps, Rational(1, 512)) == RegularityVerdict::fail);
}

TEST_CASE("regularity verdict goes inconclusive when periods were capped") {
    // truncating the toeplitz scan at max_period 64 leaves coverage climbing
    auto x = toeplitz_example_point();
    auto ps = extract_periodic_structure(x, 64, 1 << 12);
    CHECK(ps.coverage_sum == Rational(1) - Rational(1, 64));
    CHECK(regularity_check(ps, Rational(1, 512)) == RegularityVerdict::inconclusive);
}

TEST_CASE("coverage sum equals the progression sum exactly") {
    auto x = toeplitz_example_point();
    auto ps = extract_periodic_structure(x, 128, 1 << 12);
    Rational total(0);
    for (const auto& pr : ps.progressions) total = total + Rational(1, pr.period);
    CHECK(total == ps.coverage_sum);
}

TEST_CASE("sturmian fiber ambiguity tracks four delta") {
    const i64 H = 1'000'000;
    auto rep = sturmian_fiber_ambiguity(golden_conjugate128(), Fixed128{}, Rational(1, 100), H);
    CHECK(rep.ambiguity_density.limsup_est.to_double() == doctest::Approx(0.04).epsilon(0.125));
    CHECK(rep.regular_verdict == RegularityVerdict::pass);

    auto rep5 = sturmian_fiber_ambiguity(golden_conjugate128(), Fixed128{}, Rational(5, 100), H);
    CHECK(rep5.ambiguity_density.limsup_est.to_double() == doctest::Approx(0.20).epsilon(0.10));
    CHECK(rep5.regular_verdict == RegularityVerdict::pass);
}

TEST_CASE("fiber ambiguity is monotone in delta, window by window") {
    const i64 H = 1 << 16;
    auto small = sturmian_fiber_ambiguity(golden_conjugate128(), Fixed128{}, Rational(1, 100), H);
    auto big = sturmian_fiber_ambiguity(golden_conjugate128(), Fixed128{}, Rational(3, 100), H);
    REQUIRE(small.ambiguity_density.values.size() == big.ambiguity_density.values.size());
    for (std::size_t i = 0; i < small.ambiguity_density.values.size(); ++i)
        CHECK(small.ambiguity_density.values[i] <= big.ambiguity_density.values[i]);
}

TEST_CASE("beta on the orbit of zero is not special") {
    const i64 H = 1 << 18;
    auto at0 = sturmian_fiber_ambiguity(golden_conjugate128(), Fixed128{}, Rational(1, 100), H);
    auto off = sturmian_fiber_ambiguity(golden_conjugate128(), fixed128_from_decimal("0.33"),
                                        Rational(1, 100), H);
    CHECK(at0.ambiguity_density.limsup_est.to_double() ==
          doctest::Approx(off.ambiguity_density.limsup_est.to_double()).epsilon(0.2));
}

TEST_CASE("toeplitz diam-mean ambiguity is contained in the uncovered positions") {
    auto model = regular_toeplitz_example();
    auto ps = extract_periodic_structure(model.generators[0], i64{1} << 10, i64{1} << 18);

    const i64 horizon = i64{1} << 18;
    auto pre0 = model.generators[0].prefix(2048);
    Cylinder u{Word(pre0.begin(), pre0.end()), 0};

    // reconstruct the ambiguity time set the probe measures: occurrences of
    // the cylinder compared pairwise against the first
    model.generators[0].ensure(static_cast<std::size_t>(2 * horizon) + 4096);
    auto pre = model.generators[0].prefix(static_cast<std::size_t>(2 * horizon) + 4096);
    std::vector<i64> occs;
    for (i64 t = 0; t + 2048 <= horizon && occs.size() < 512; ++t) {
        if (std::equal(u.word.begin(), u.word.end(), pre.begin() + t)) occs.push_back(t);
    }
    REQUIRE(occs.size() >= 2);
    std::vector<std::uint8_t> amb(static_cast<std::size_t>(horizon), 0);
    for (std::size_t k = 1; k < occs.size(); ++k) {
        for (i64 i = 0; i < horizon; ++i)
            if (pre[static_cast<std::size_t>(occs[0] + i)] != pre[static_cast<std::size_t>(occs[k] + i)])
                amb[static_cast<std::size_t>(i)] = 1;
    }
    // exact set inclusion: every ambiguous time is uncovered by the structure
    for (i64 i = 0; i < horizon; ++i) {
        if (amb[static_cast<std::size_t>(i)]) REQUIRE_FALSE(ps.covers(i));
    }

    // and the probe's statistic is bounded by the uncovered density plus slack
    auto verdict = diam_mean_probe(model, u, 1, horizon, false, 512);
    CHECK(verdict.verdict == Verdict::pass);
    Rational uncovered = Rational(1) - ps.coverage_sum;
    CHECK(verdict.statistic <= uncovered + Rational(1, 1 << 10));
}

TEST_CASE("fiber report rejects bad parameters") {
    CHECK_THROWS(sturmian_fiber_ambiguity(golden_conjugate128(), Fixed128{}, Rational(1, 5), 1000));
    CHECK_THROWS(sturmian_fiber_ambiguity(fixed128_from_ratio(1, 4), Fixed128{}, Rational(1, 100), 1000));
    CHECK_THROWS(extract_periodic_structure(point_zeros(), 256, 100));
}
