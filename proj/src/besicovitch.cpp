#include "shiftlab/besicovitch.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "shiftlab/kernels.hpp"

namespace shiftlab {

namespace {

void require_same_alphabet(const SymbolicPoint& x, const SymbolicPoint& y) {
    if (x.alphabet_size() != y.alphabet_size())
        throw std::invalid_argument("points must share an alphabet");
}

constexpr int kDeltaGridBits = 30;  // delta grid {2^-r : 1 <= r <= 30}

}  // namespace

DensityProfile disagreement_density(const SymbolicPoint& x, const SymbolicPoint& y,
                                    const std::vector<i64>& schedule) {
    require_same_alphabet(x, y);
    if (schedule.empty()) throw std::invalid_argument("schedule must be nonempty");
    const i64 len = schedule.back() + 1;
    // warm both before taking spans: extending y may grow x through a
    // shifted view of the same underlying point
    x.ensure(static_cast<std::size_t>(len));
    y.ensure(static_cast<std::size_t>(len));
    auto px = x.prefix(static_cast<std::size_t>(len));
    auto py = y.prefix(static_cast<std::size_t>(len));

    DensityProfile prof;
    prof.window_ends = schedule;
    i64 count = 0;
    i64 done = 0;
    for (i64 end : schedule) {
        if (end < done) throw std::invalid_argument("schedule must be strictly increasing");
        count += static_cast<i64>(
            kernels::count_mismatch(px.data() + done, py.data() + done, static_cast<std::size_t>(end + 1 - done)));
        done = end + 1;
        prof.values.push_back(Rational(count, end + 1));
    }
    prof.finalize();
    return prof;
}

BesicovitchEstimate besicovitch_db(const SymbolicPoint& x, const SymbolicPoint& y, i64 horizon) {
    require_same_alphabet(x, y);
    if (horizon < 16) throw std::invalid_argument("besicovitch_db: horizon too small");

    BesicovitchEstimate est;
    est.horizon = horizon;

    const auto schedule = linear_schedule(horizon, 16);
    const i64 len = horizon + kDeltaGridBits + 1;
    x.ensure(static_cast<std::size_t>(len));
    y.ensure(static_cast<std::size_t>(len));
    auto px = x.prefix(static_cast<std::size_t>(len));
    auto py = y.prefix(static_cast<std::size_t>(len));

    std::vector<std::uint8_t> mismatch(static_cast<std::size_t>(len));
    kernels::mismatch_indicator(px.data(), py.data(), mismatch.data(), mismatch.size());

    est.symbolic_density = profile_from_indicator(mismatch.data(), horizon + 1, schedule);

    // gap[i] = distance from i to the next disagreement; 64 is the "none in
    // sight" sentinel (contributes zero to the averages).
    std::vector<std::uint8_t> gap(static_cast<std::size_t>(horizon) + 1);
    {
        i64 next = -1;
        for (i64 i = len - 1; i >= 0; --i) {
            if (mismatch[static_cast<std::size_t>(i)]) next = i;
            if (i <= horizon) {
                i64 d = next < 0 ? 64 : next - i;
                gap[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(std::min<i64>(d, 64));
            }
        }
    }

    // Per window end: histogram of gaps, giving |Delta_{2^-r} ∩ [0,n]| for
    // every r at once, plus the running average of 2^-gap.
    std::array<i64, 66> hist{};
    std::vector<std::array<i64, 66>> hist_at(schedule.size());
    std::vector<double> avg_at(schedule.size());
    double sum = 0.0;
    std::size_t wi = 0;
    for (i64 i = 0; i <= horizon && wi < schedule.size(); ++i) {
        const int g = gap[static_cast<std::size_t>(i)];
        hist[static_cast<std::size_t>(g)]++;
        if (g < 64) sum += std::ldexp(1.0, -g);  // capped gap means no disagreement in sight
        if (i == schedule[wi]) {
            hist_at[wi] = hist;
            avg_at[wi] = sum / static_cast<double>(i + 1);
            ++wi;
        }
    }

    // averaged: max running average over the tail half of the schedule.
    est.averaged = 0.0;
    for (std::size_t k = schedule.size() / 2; k < schedule.size(); ++k)
        est.averaged = std::max(est.averaged, avg_at[k]);

    // cantor_db: smallest delta = 2^-r on the grid whose Delta set still has
    // upper density below delta; densities are antitone in r so the valid
    // deltas form a prefix of the grid.
    est.cantor_db = Rational(1);
    bool any_ok = false;
    Rational last_ok_density(1);
    for (int r = 1; r <= kDeltaGridBits; ++r) {
        // Delta_{2^-r} = {i : some disagreement in [i, i+r)} = {gap[i] < r}.
        Rational ud(0);
        for (std::size_t k = schedule.size() / 2; k < schedule.size(); ++k) {
            i64 cnt = 0;
            for (int g = 0; g < r; ++g) cnt += hist_at[k][g];
            Rational v(cnt, schedule[k] + 1);
            if (ud < v) ud = v;
        }
        if (ud < Rational(1, i64{1} << r)) {
            est.cantor_db = Rational(1, i64{1} << r);
            any_ok = true;
            last_ok_density = ud;
        } else {
            break;
        }
    }
    if (any_ok && last_ok_density == Rational(0)) est.cantor_db = Rational(0);
    if (!any_ok && est.symbolic_density.limsup_est == Rational(0)) est.cantor_db = Rational(0);
    return est;
}

bool besicovitch_ball_test(const SymbolicPoint& x, const SymbolicPoint& y, Rational epsilon,
                           i64 horizon) {
    if (!(Rational(0) < epsilon)) throw std::invalid_argument("epsilon must be > 0");
    return besicovitch_db(x, y, horizon).cantor_db <= epsilon;
}

}  // namespace shiftlab
