#pragma once
// One-sided symbolic points over finite alphabets and the built-in
// subshift models: the at-most-one-1 system, the powers-of-two support
// system, a regular Toeplitz point with all-binary-words content on its
// deep levels, Sturmian rotation codings, full shifts and periodic orbits.

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "shiftlab/bigfix.hpp"
#include "shiftlab/rational.hpp"
#include "shiftlab/time_set.hpp"

namespace shiftlab {

using Word = std::vector<std::uint8_t>;

std::string word_to_string(const Word& w);
Word word_from_string(const std::string& s);

class SymbolicPoint {
  public:
    // The rule appends symbols to the cache until it holds `upto` entries;
    // it must be deterministic and restartable from any cache length.
    using ExtendRule = std::function<void(std::vector<std::uint8_t>&, std::size_t)>;

    SymbolicPoint(int alphabet_size, ExtendRule rule, std::string label);

    int alphabet_size() const { return impl_->alphabet; }
    const std::string& label() const { return impl_->label; }

    // Extends (serialized) and returns the prefix. The span is invalidated
    // by a later longer extension — including extensions routed through a
    // shifted view of the same point — so warm every point involved with
    // ensure() before taking spans.
    std::span<const std::uint8_t> prefix(std::size_t n) const;
    void ensure(std::size_t n) const { (void)prefix(n); }
    std::uint8_t symbol(i64 i) const;

  private:
    struct Impl {
        int alphabet;
        ExtendRule rule;
        std::string label;
        std::vector<std::uint8_t> cache;
        std::mutex mu;
    };
    std::shared_ptr<Impl> impl_;
};

// Point factories.
SymbolicPoint point_zeros();
SymbolicPoint point_single_one(i64 pos);
SymbolicPoint point_periodic(const Word& w);
SymbolicPoint point_random(std::uint64_t seed, int alphabet_size = 2);
SymbolicPoint point_supported_on(std::vector<i64> one_positions);
SymbolicPoint point_powers_support();  // 1s at every 2^n, n >= 1
SymbolicPoint point_shifted(const SymbolicPoint& base, i64 t);
SymbolicPoint point_from_text(const std::string& symbols);

// Toeplitz example point: levels are the arithmetic progressions
// {2^{n-1}-1 + i 2^n}. Levels 1..constant_levels carry fixed alternating
// symbols; level constant_levels+k spells the concatenation of all binary
// words of length k, repeated. Regular, and not null.
SymbolicPoint toeplitz_example_point(int constant_levels = 10);
i64 toeplitz_level_residue(int level);  // j_n = 2^{n-1} - 1

SymbolicPoint sturmian_point(const Fixed128& alpha, const Fixed128& beta);

struct Cylinder {
    Word word;
    i64 offset = 0;
};

struct SubshiftModel {
    std::string name;
    int alphabet_size = 2;
    std::vector<SymbolicPoint> generators;

    // Exact membership test for finite words, when the model has one.
    std::function<bool(std::span<const std::uint8_t>)> word_predicate;
    bool predicate_exact = false;
    // Binary models where turning 1s into 0s preserves admissibility; for
    // these the zero-filled pattern test decides realizability exactly.
    bool predicate_monotone = false;
    // Fast form of the zero-filled test: admissibility of the word whose 1s
    // sit exactly at the given positions. Avoids O(len) scans per query.
    std::function<bool(const std::vector<i64>&)> ones_admissible;

    // Draws a random point of the model agreeing with `prefix`, horizon-capped.
    std::function<SymbolicPoint(const Word&, std::uint64_t, i64)> sampler;

    enum class SideInfo { none, sturmian, toeplitz };
    SideInfo side_info = SideInfo::none;
    Fixed128 alpha, beta;      // sturmian parameters
    int constant_levels = 0;   // toeplitz skeleton depth with fixed symbols

    i64 predicate_search_horizon = i64{1} << 20;
};

SubshiftModel single_one_subshift();
SubshiftModel powers_subshift(i64 shift_search_horizon = i64{1} << 20);
SubshiftModel regular_toeplitz_example(i64 horizon = i64{1} << 20);
SubshiftModel sturmian_model(const Fixed128& alpha, const Fixed128& beta);
SubshiftModel full_shift(int alphabet_size = 2, std::uint64_t seed = 0x5eed);
SubshiftModel periodic_model(const Word& w);

// Empirical language: factors of generator prefixes up to `horizon`, united
// with predicate-enumerated words when the predicate is exact. An
// under-approximation for generator-only models.
std::set<Word> language(const SubshiftModel& model, std::size_t length, i64 horizon,
                        std::size_t budget = std::size_t{1} << 20);

struct BudgetExceeded : std::runtime_error {
    explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace shiftlab
