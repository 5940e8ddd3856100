#pragma once
// Subsets of Z+ addressed by membership, with optional structure that
// supports exact density computation and fast indicator materialization.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "json.hpp"
#include "shiftlab/rational.hpp"

namespace shiftlab {

using i64 = std::int64_t;

class TimeSet;
using TimeSetPtr = std::shared_ptr<const TimeSet>;

class TimeSet {
  public:
    enum class Kind { arithmetic, finite, union_, complement, powers, blocks, predicate };

    static TimeSetPtr arithmetic(i64 a, i64 p);             // {a + kp : k >= 0}
    static TimeSetPtr finite(std::vector<i64> elements);
    static TimeSetPtr union_of(std::vector<TimeSetPtr> parts);
    static TimeSetPtr complement_of(TimeSetPtr inner);
    static TimeSetPtr powers_of(i64 base, i64 min_exp = 1);  // {base^k : k >= min_exp}
    static TimeSetPtr blocks_of(i64 base);                   // U_k [base^k, 2*base^k)
    static TimeSetPtr from_predicate(std::function<bool(i64)> pred);

    Kind kind() const { return kind_; }
    bool contains(i64 i) const;

    // Writes 0/1 membership for [begin, begin + out.size()).
    void fill_indicator(i64 begin, std::span<std::uint8_t> out) const;

    // t + S. Exact-form preserving where possible, predicate fallback otherwise.
    TimeSetPtr shifted(i64 t) const;

    // (lower, upper) density when derivable from the structure; nullopt when
    // the form is opaque or a union's disjointness cannot be decided.
    std::optional<std::pair<Rational, Rational>> exact_density() const;

    nlohmann::ordered_json to_json() const;  // throws for predicate-backed sets
    static TimeSetPtr from_json(const nlohmann::json& j);

  private:
    TimeSet() = default;

    Kind kind_ = Kind::predicate;
    i64 a_ = 0, p_ = 1;
    std::vector<i64> elements_;
    std::vector<TimeSetPtr> parts_;
    TimeSetPtr inner_;
    i64 base_ = 2;
    i64 min_exp_ = 1;
    std::function<bool(i64)> pred_;

    friend bool provably_disjoint(const TimeSet& x, const TimeSet& y);
};

}  // namespace shiftlab
