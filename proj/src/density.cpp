#include "shiftlab/density.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

#include "shiftlab/kernels.hpp"

namespace shiftlab {

namespace {
constexpr i64 kBlock = 1 << 16;

void check_schedule(const std::vector<i64>& schedule) {
    if (schedule.empty()) throw std::invalid_argument("schedule must be nonempty");
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        if (schedule[i] < 0) throw std::invalid_argument("schedule entries must be >= 0");
        if (i && schedule[i] <= schedule[i - 1])
            throw std::invalid_argument("schedule must be strictly increasing");
    }
}
}  // namespace

void DensityProfile::finalize(Rational tol) {
    tolerance = tol;
    if (values.empty()) return;
    std::size_t tail_begin = values.size() / 2;
    liminf_est = values[tail_begin];
    limsup_est = values[tail_begin];
    for (std::size_t i = tail_begin; i < values.size(); ++i) {
        if (values[i] < liminf_est) liminf_est = values[i];
        if (limsup_est < values[i]) limsup_est = values[i];
    }
    converged = (limsup_est - liminf_est) < tolerance;
}

std::string DensityProfile::to_csv() const {
    std::string out = "window_end,value\n";
    char buf[64];
    for (std::size_t i = 0; i < window_ends.size(); ++i) {
        out += std::to_string(window_ends[i]);
        out += ',';
        double v = values[i].to_double();
        auto res = std::to_chars(buf, buf + sizeof buf, v);
        out.append(buf, res.ptr);
        out += '\n';
    }
    return out;
}

std::vector<i64> dyadic_schedule(int max_exp) {
    std::vector<i64> s;
    for (int k = 0; k <= max_exp; ++k) s.push_back(i64{1} << k);
    return s;
}

std::vector<i64> dyadic_schedule_up_to(i64 horizon) {
    std::vector<i64> s;
    for (i64 v = 1; v < horizon; v *= 2) s.push_back(v);
    if (s.empty() || s.back() != horizon) s.push_back(horizon);
    return s;
}

std::vector<i64> linear_schedule(i64 horizon, int parts) {
    std::vector<i64> s;
    for (int k = 1; k <= parts; ++k) {
        i64 v = horizon * k / parts;
        if (s.empty() || v > s.back()) s.push_back(v);
    }
    return s;
}

DensityProfile density_profile(const TimeSet& s, const std::vector<i64>& schedule, Rational tol) {
    check_schedule(schedule);
    DensityProfile prof;
    prof.window_ends = schedule;
    prof.values.reserve(schedule.size());

    std::vector<std::uint8_t> buf(kBlock);
    const i64 max_end = schedule.back();
    i64 pos = 0;
    i64 count = 0;
    std::size_t wi = 0;
    while (pos <= max_end) {
        const i64 len = std::min<i64>(kBlock, max_end + 1 - pos);
        s.fill_indicator(pos, std::span<std::uint8_t>(buf.data(), static_cast<std::size_t>(len)));
        i64 done = 0;
        while (wi < schedule.size() && schedule[wi] < pos + len) {
            const i64 upto = schedule[wi] - pos + 1;  // exclusive within block
            count += static_cast<i64>(kernels::count_nonzero(buf.data() + done, static_cast<std::size_t>(upto - done)));
            done = upto;
            prof.values.push_back(Rational(count, schedule[wi] + 1));
            ++wi;
        }
        count += static_cast<i64>(kernels::count_nonzero(buf.data() + done, static_cast<std::size_t>(len - done)));
        pos += len;
    }
    prof.finalize(tol);
    return prof;
}

Rational window_density(const TimeSet& s, i64 n) {
    if (n < 0) throw std::invalid_argument("window_density: n must be >= 0");
    return density_profile(s, {n}).values[0];
}

DensityProfile profile_from_indicator(const std::uint8_t* ind, i64 len,
                                      const std::vector<i64>& schedule, Rational tol) {
    check_schedule(schedule);
    if (schedule.back() >= len)
        throw std::invalid_argument("profile_from_indicator: schedule exceeds indicator length");
    DensityProfile prof;
    prof.window_ends = schedule;
    i64 count = 0;
    i64 done = 0;
    for (i64 end : schedule) {
        count += static_cast<i64>(kernels::count_nonzero(ind + done, static_cast<std::size_t>(end + 1 - done)));
        done = end + 1;
        prof.values.push_back(Rational(count, end + 1));
    }
    prof.finalize(tol);
    return prof;
}

std::optional<std::pair<Rational, Rational>> exact_density(const TimeSet& s) {
    return s.exact_density();
}

PigeonholeResult pigeonhole_select(const std::vector<TimeSetPtr>& assign, Rational epsilon,
                                   i64 horizon) {
    if (assign.empty()) throw std::invalid_argument("pigeonhole_select: no keys");
    if (horizon < 0) throw std::invalid_argument("pigeonhole_select: bad horizon");

    const i64 n = horizon + 1;
    std::vector<std::uint32_t> hits(static_cast<std::size_t>(n), 0);
    std::vector<std::uint8_t> buf(kBlock);
    for (const auto& set : assign) {
        i64 pos = 0;
        while (pos < n) {
            const i64 len = std::min<i64>(kBlock, n - pos);
            set->fill_indicator(pos, std::span<std::uint8_t>(buf.data(), static_cast<std::size_t>(len)));
            for (i64 i = 0; i < len; ++i) hits[static_cast<std::size_t>(pos + i)] += buf[i];
            pos += len;
        }
    }

    std::uint32_t best = 0;
    i64 best_i = 0;
    for (i64 i = 0; i < n; ++i) {
        if (hits[static_cast<std::size_t>(i)] > best) {
            best = hits[static_cast<std::size_t>(i)];
            best_i = i;
        }
    }

    // |K'| >= epsilon |K| / 2, compared exactly.
    const __int128 lhs = (__int128)2 * best * epsilon.den;
    const __int128 rhs = (__int128)epsilon.num * static_cast<i64>(assign.size());
    if (lhs < rhs) {
        throw std::runtime_error(
            "pigeonhole_select: no time within horizon " + std::to_string(horizon) +
            " hits " + epsilon.to_string() + "*|K|/2 keys (best " + std::to_string(best) +
            " of " + std::to_string(assign.size()) + " at i=" + std::to_string(best_i) + ")");
    }

    PigeonholeResult res;
    res.time = best_i;
    for (std::size_t k = 0; k < assign.size(); ++k) {
        if (assign[k]->contains(best_i)) res.subset.push_back(k);
    }
    return res;
}

}  // namespace shiftlab
