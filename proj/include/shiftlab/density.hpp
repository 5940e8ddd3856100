#pragma once
// Window densities |S ∩ [0,n]| / (n+1) along window schedules, with
// liminf/limsup estimates over the schedule tail, plus the finite
// pigeonhole time selection.

#include <string>
#include <vector>

#include "shiftlab/rational.hpp"
#include "shiftlab/time_set.hpp"

namespace shiftlab {

struct DensityProfile {
    std::vector<i64> window_ends;     // increasing n_k; window is [0, n_k]
    std::vector<Rational> values;     // |S ∩ [0, n_k]| / (n_k + 1)
    Rational liminf_est{0};
    Rational limsup_est{0};
    bool converged = false;
    Rational tolerance{1, 1000};

    // Estimates are min/max of the tail half of the values.
    void finalize(Rational tolerance = Rational(1, 1000));
    std::string to_csv() const;
};

std::vector<i64> dyadic_schedule(int max_exp);                 // 1, 2, 4, ..., 2^max_exp
std::vector<i64> dyadic_schedule_up_to(i64 horizon);           // dyadic ends <= horizon, horizon appended
std::vector<i64> linear_schedule(i64 horizon, int parts = 16); // horizon*k/parts

// Exact count-based profile over [0, max window]; one streaming pass.
DensityProfile density_profile(const TimeSet& s, const std::vector<i64>& schedule,
                               Rational tolerance = Rational(1, 1000));

Rational window_density(const TimeSet& s, i64 n);

// Builds a profile directly from a 0/1 indicator array over [0, len).
DensityProfile profile_from_indicator(const std::uint8_t* ind, i64 len,
                                      const std::vector<i64>& schedule,
                                      Rational tolerance = Rational(1, 1000));

std::optional<std::pair<Rational, Rational>> exact_density(const TimeSet& s);

struct PigeonholeResult {
    i64 time = 0;
    std::vector<std::size_t> subset;  // indices of keys containing `time`
};

// Smallest time i <= horizon hitting the most keys; throws when the count
// falls below epsilon * |K| / 2 (the density hypothesis failed here).
PigeonholeResult pigeonhole_select(const std::vector<TimeSetPtr>& assign, Rational epsilon,
                                   i64 horizon);

}  // namespace shiftlab
