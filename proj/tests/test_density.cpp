#include "doctest.h"

#include <random>

#include "oracles.hpp"
#include "shiftlab/density.hpp"

using namespace shiftlab;

TEST_CASE("window_density matches direct counts") {
    auto evens = TimeSet::arithmetic(0, 2);
    CHECK(window_density(*evens, 10) == Rational(6, 11));

    auto powers = TimeSet::powers_of(2);
    // direct count by enumeration: 2,4,...,1024
    CHECK(oracle::count_upto(*powers, 1024) == 10);
    CHECK(window_density(*powers, 1024) == Rational(10, 1025));

    auto full = TimeSet::complement_of(TimeSet::finite({}));
    CHECK(window_density(*full, 7) == Rational(1));
}

TEST_CASE("density_profile on an arithmetic progression converges to 1/p") {
    auto s = TimeSet::arithmetic(3, 5);
    auto prof = density_profile(*s, dyadic_schedule(20));
    CHECK((prof.limsup_est - Rational(1, 5)).abs() < Rational(1, 10000));
    CHECK((prof.liminf_est - Rational(1, 5)).abs() < Rational(1, 10000));
    CHECK(prof.converged);
}

TEST_CASE("oscillating block set sees both extremes on the endpoint schedule") {
    auto s = TimeSet::blocks_of(4);
    std::vector<i64> sched;
    for (int k = 1; k <= 10; ++k) {
        sched.push_back(2 * (i64{1} << (2 * k)) - 1);  // 2*4^k - 1
        sched.push_back((i64{1} << (2 * (k + 1))) - 1);  // 4^{k+1} - 1
    }
    std::sort(sched.begin(), sched.end());
    sched.erase(std::unique(sched.begin(), sched.end()), sched.end());
    auto prof = density_profile(*s, sched);
    CHECK((prof.limsup_est - Rational(2, 3)).abs() < Rational(1, 100));
    CHECK((prof.liminf_est - Rational(1, 3)).abs() < Rational(1, 100));
    CHECK_FALSE(prof.converged);

    // direct count oracle at the two K=10 endpoints
    i64 n1 = 2 * (i64{1} << 20) - 1;
    CHECK(window_density(*s, n1) == oracle::window_density_naive(*s, n1));
}

TEST_CASE("complement duality is exact at every window") {
    auto s = TimeSet::arithmetic(0, 2);
    auto c = TimeSet::complement_of(s);
    auto sched = dyadic_schedule(12);
    auto ps = density_profile(*s, sched);
    auto pc = density_profile(*c, sched);
    for (std::size_t i = 0; i < sched.size(); ++i) {
        CHECK(ps.values[i] + pc.values[i] == Rational(1));
    }
}

TEST_CASE("exact_density closed forms") {
    CHECK(exact_density(*TimeSet::arithmetic(0, 2)) ==
          std::make_pair(Rational(1, 2), Rational(1, 2)));
    CHECK(exact_density(*TimeSet::finite({5, 9})) == std::make_pair(Rational(0), Rational(0)));
    CHECK(exact_density(*TimeSet::complement_of(TimeSet::arithmetic(0, 4))) ==
          std::make_pair(Rational(3, 4), Rational(3, 4)));
    auto disjoint = TimeSet::union_of({TimeSet::arithmetic(0, 4), TimeSet::arithmetic(1, 4)});
    CHECK(exact_density(*disjoint) == std::make_pair(Rational(1, 2), Rational(1, 2)));
    auto overlapping = TimeSet::union_of({TimeSet::arithmetic(0, 4), TimeSet::arithmetic(0, 2)});
    CHECK_FALSE(exact_density(*overlapping).has_value());
    auto blocks = TimeSet::blocks_of(4);
    CHECK(exact_density(*blocks) == std::make_pair(Rational(1, 3), Rational(2, 3)));
}

TEST_CASE("profile value error bound for arithmetic sets") {
    auto s = TimeSet::arithmetic(2, 7);
    auto prof = density_profile(*s, dyadic_schedule(16));
    for (std::size_t i = 0; i < prof.values.size(); ++i) {
        Rational err = (prof.values[i] - Rational(1, 7)).abs();
        CHECK(err <= Rational(7, prof.window_ends[i] + 1));
    }
}

TEST_CASE("shift invariance within (t+1)/(n+1)") {
    std::mt19937_64 rng(11);
    auto sched = dyadic_schedule(14);
    for (int trial = 0; trial < 20; ++trial) {
        i64 a = static_cast<i64>(rng() % 7);
        i64 p = 2 + static_cast<i64>(rng() % 9);
        i64 t = static_cast<i64>(rng() % 50);
        auto s = TimeSet::arithmetic(a, p);
        auto shifted = s->shifted(t);
        auto p1 = density_profile(*s, sched);
        auto p2 = density_profile(*shifted, sched);
        for (std::size_t i = 0; i < sched.size(); ++i) {
            Rational diff = (p1.values[i] - p2.values[i]).abs();
            CHECK(diff <= Rational(t + 1, sched[i] + 1));
        }
    }
}

TEST_CASE("timeset json round trip") {
    auto s = TimeSet::union_of({TimeSet::arithmetic(3, 5),
                                TimeSet::complement_of(TimeSet::blocks_of(4)),
                                TimeSet::finite({1, 2, 300}), TimeSet::powers_of(2)});
    auto j = s->to_json();
    auto back = TimeSet::from_json(j);
    // membership agreement on a sampled range is the property that matters
    for (i64 i = 0; i < 5000; ++i) CHECK(s->contains(i) == back->contains(i));
    CHECK(back->to_json() == j);
}

TEST_CASE("profile csv shape") {
    auto prof = density_profile(*TimeSet::arithmetic(0, 2), {1, 3, 7});
    auto csv = prof.to_csv();
    CHECK(csv.substr(0, 17) == "window_end,value\n");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}

TEST_CASE("pigeonhole_select: spec examples") {
    auto evens = TimeSet::arithmetic(0, 2);
    auto odds = TimeSet::arithmetic(1, 2);

    SUBCASE("single key on evens") {
        auto res = pigeonhole_select({evens}, Rational(1, 2), 100);
        CHECK(res.time == 0);
        CHECK(res.subset == std::vector<std::size_t>{0});
    }
    SUBCASE("evens and odds, epsilon 0.9") {
        auto res = pigeonhole_select({evens, odds}, Rational(9, 10), 100);
        CHECK(res.time == 0);
        CHECK(res.subset == std::vector<std::size_t>{0});
        auto brute = oracle::pigeonhole_brute({evens, odds}, 100);
        CHECK(res.time == brute.time);
        CHECK(static_cast<i64>(res.subset.size()) == brute.hits);
    }
    SUBCASE("four keys on multiples of 3") {
        auto m3 = TimeSet::arithmetic(0, 3);
        auto res = pigeonhole_select({m3, m3, m3, m3}, Rational(3, 10), 200);
        CHECK(res.time == 0);
        CHECK(res.subset.size() == 4);
    }
}

TEST_CASE("pigeonhole_select: random instances re-verify and match brute force") {
    std::mt19937_64 rng(123);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t k = 1 + rng() % 8;
        const i64 horizon = 50 + static_cast<i64>(rng() % 150);
        std::vector<TimeSetPtr> assign;
        for (std::size_t i = 0; i < k; ++i) {
            i64 p = 2 + static_cast<i64>(rng() % 5);
            i64 a = static_cast<i64>(rng() % p);
            assign.push_back(TimeSet::arithmetic(a, p));
        }
        const Rational eps(1, 4);  // density of every key >= 1/6 >= eps/2 at these horizons
        PigeonholeResult res;
        bool ok = true;
        try {
            res = pigeonhole_select(assign, eps, horizon);
        } catch (const std::runtime_error&) {
            ok = false;
        }
        auto brute = oracle::pigeonhole_brute(assign, horizon);
        if (!ok) {
            // hypothesis genuinely violated at this horizon
            CHECK(2 * brute.hits * eps.den < eps.num * static_cast<i64>(k));
            continue;
        }
        CHECK(res.time == brute.time);
        CHECK(static_cast<i64>(res.subset.size()) == brute.hits);
        // independent membership re-check
        for (auto idx : res.subset) CHECK(assign[idx]->contains(res.time));
        CHECK(2 * static_cast<i64>(res.subset.size()) * eps.den >= eps.num * static_cast<i64>(k));
    }
}

TEST_CASE("density unaffected by adding or deleting a finite set") {
    // density estimates shrug off any finite perturbation
    auto s = TimeSet::arithmetic(0, 3);
    auto carved = TimeSet::union_of({TimeSet::finite({1}), s});
    auto sched = dyadic_schedule(20);
    auto p1 = density_profile(*s, sched);
    auto p2 = density_profile(*carved, sched);
    // a finite perturbation F changes tail values by at most |F|/(n_min+1)
    CHECK((p1.limsup_est - p2.limsup_est).abs() <= Rational(1, (i64{1} << 10) + 1));
    CHECK((p1.liminf_est - p2.liminf_est).abs() <= Rational(1, (i64{1} << 10) + 1));
}
