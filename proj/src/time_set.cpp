#include "shiftlab/time_set.hpp"

#include <algorithm>
#include <cstring>
#include <numeric>
#include <stdexcept>

#include "shiftlab/kernels.hpp"

namespace shiftlab {

TimeSetPtr TimeSet::arithmetic(i64 a, i64 p) {
    if (a < 0 || p <= 0) throw std::invalid_argument("arithmetic set: need a >= 0, p > 0");
    auto s = std::shared_ptr<TimeSet>(new TimeSet());
    s->kind_ = Kind::arithmetic;
    s->a_ = a;
    s->p_ = p;
    return s;
}

TimeSetPtr TimeSet::finite(std::vector<i64> elements) {
    std::sort(elements.begin(), elements.end());
    elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
    if (!elements.empty() && elements.front() < 0)
        throw std::invalid_argument("finite set: negative element");
    auto s = std::shared_ptr<TimeSet>(new TimeSet());
    s->kind_ = Kind::finite;
    s->elements_ = std::move(elements);
    return s;
}

TimeSetPtr TimeSet::union_of(std::vector<TimeSetPtr> parts) {
    if (parts.empty()) throw std::invalid_argument("union: no parts");
    auto s = std::shared_ptr<TimeSet>(new TimeSet());
    s->kind_ = Kind::union_;
    s->parts_ = std::move(parts);
    return s;
}

TimeSetPtr TimeSet::complement_of(TimeSetPtr inner) {
    auto s = std::shared_ptr<TimeSet>(new TimeSet());
    s->kind_ = Kind::complement;
    s->inner_ = std::move(inner);
    return s;
}

TimeSetPtr TimeSet::powers_of(i64 base, i64 min_exp) {
    if (base < 2 || min_exp < 0) throw std::invalid_argument("powers set: need base >= 2");
    auto s = std::shared_ptr<TimeSet>(new TimeSet());
    s->kind_ = Kind::powers;
    s->base_ = base;
    s->min_exp_ = min_exp;
    return s;
}

TimeSetPtr TimeSet::blocks_of(i64 base) {
    if (base < 2) throw std::invalid_argument("blocks set: need base >= 2");
    auto s = std::shared_ptr<TimeSet>(new TimeSet());
    s->kind_ = Kind::blocks;
    s->base_ = base;
    return s;
}

TimeSetPtr TimeSet::from_predicate(std::function<bool(i64)> pred) {
    auto s = std::shared_ptr<TimeSet>(new TimeSet());
    s->kind_ = Kind::predicate;
    s->pred_ = std::move(pred);
    return s;
}

bool TimeSet::contains(i64 i) const {
    if (i < 0) return false;
    switch (kind_) {
        case Kind::arithmetic:
            return i >= a_ && (i - a_) % p_ == 0;
        case Kind::finite:
            return std::binary_search(elements_.begin(), elements_.end(), i);
        case Kind::union_:
            for (const auto& p : parts_)
                if (p->contains(i)) return true;
            return false;
        case Kind::complement:
            return !inner_->contains(i);
        case Kind::powers: {
            i64 v = 1;
            for (i64 e = 0; v <= i; ++e) {
                if (v == i && e >= min_exp_) return true;
                if (v > i / base_) break;
                v *= base_;
            }
            return false;
        }
        case Kind::blocks: {
            i64 lo = base_;
            while (lo <= i) {
                if (i < 2 * lo) return true;
                if (lo > i / base_) break;
                lo *= base_;
            }
            return false;
        }
        case Kind::predicate:
            return pred_(i);
    }
    return false;
}

void TimeSet::fill_indicator(i64 begin, std::span<std::uint8_t> out) const {
    const i64 len = static_cast<i64>(out.size());
    if (len == 0) return;
    const i64 end = begin + len;  // exclusive
    switch (kind_) {
        case Kind::arithmetic: {
            std::memset(out.data(), 0, out.size());
            i64 first = a_;
            if (first < begin) first = a_ + ((begin - a_ + p_ - 1) / p_) * p_;
            for (i64 i = first; i < end; i += p_) out[i - begin] = 1;
            return;
        }
        case Kind::finite: {
            std::memset(out.data(), 0, out.size());
            auto it = std::lower_bound(elements_.begin(), elements_.end(), begin);
            for (; it != elements_.end() && *it < end; ++it) out[*it - begin] = 1;
            return;
        }
        case Kind::union_: {
            parts_[0]->fill_indicator(begin, out);
            std::vector<std::uint8_t> tmp(out.size());
            for (std::size_t k = 1; k < parts_.size(); ++k) {
                parts_[k]->fill_indicator(begin, tmp);
                kernels::or_accumulate(out.data(), tmp.data(), tmp.size());
            }
            return;
        }
        case Kind::complement: {
            inner_->fill_indicator(begin, out);
            for (auto& b : out) b ^= 1;
            return;
        }
        case Kind::powers: {
            std::memset(out.data(), 0, out.size());
            i64 v = 1;
            for (i64 e = 0; ; ++e) {
                if (e >= min_exp_ && v >= begin && v < end) out[v - begin] = 1;
                if (v >= end || v > end / base_) break;
                v *= base_;
            }
            return;
        }
        case Kind::blocks: {
            std::memset(out.data(), 0, out.size());
            for (i64 lo = base_; lo < end; ) {
                i64 hi = 2 * lo;  // exclusive
                i64 from = std::max(lo, begin), to = std::min(hi, end);
                if (from < to) std::memset(out.data() + (from - begin), 1, static_cast<std::size_t>(to - from));
                if (lo > end / base_) break;
                lo *= base_;
            }
            return;
        }
        case Kind::predicate: {
            for (i64 i = 0; i < len; ++i) out[i] = pred_(begin + i) ? 1 : 0;
            return;
        }
    }
}

TimeSetPtr TimeSet::shifted(i64 t) const {
    if (t == 0) {
        auto s = std::shared_ptr<TimeSet>(new TimeSet(*this));
        return s;
    }
    switch (kind_) {
        case Kind::arithmetic:
            return arithmetic(a_ + t, p_);
        case Kind::finite: {
            std::vector<i64> e = elements_;
            for (auto& x : e) x += t;
            return finite(std::move(e));
        }
        case Kind::union_: {
            std::vector<TimeSetPtr> p;
            p.reserve(parts_.size());
            for (const auto& q : parts_) p.push_back(q->shifted(t));
            return union_of(std::move(p));
        }
        default: {
            // t + S for opaque forms; note t + S^c differs from (t+S)^c below t.
            auto self = std::shared_ptr<TimeSet>(new TimeSet(*this));
            return from_predicate([self, t](i64 i) { return i >= t && self->contains(i - t); });
        }
    }
}

bool provably_disjoint(const TimeSet& x, const TimeSet& y) {
    using K = TimeSet::Kind;
    if (x.kind_ == K::finite) {
        for (i64 e : x.elements_)
            if (y.contains(e)) return false;
        return true;
    }
    if (y.kind_ == K::finite) return provably_disjoint(y, x);
    if (x.kind_ == K::arithmetic && y.kind_ == K::arithmetic) {
        i64 g = std::gcd(x.p_, y.p_);
        return ((x.a_ - y.a_) % g) != 0;
    }
    return false;  // conservatively undecided
}

std::optional<std::pair<Rational, Rational>> TimeSet::exact_density() const {
    switch (kind_) {
        case Kind::arithmetic:
            return std::make_pair(Rational(1, p_), Rational(1, p_));
        case Kind::finite:
        case Kind::powers:
            return std::make_pair(Rational(0), Rational(0));
        case Kind::blocks: {
            // Count in [0,n] peaks at window 2 b^K - 1 and dips at b^{K+1} - 1.
            Rational lower(1, base_ - 1);
            Rational upper(base_, 2 * (base_ - 1));
            if (base_ == 2) return std::make_pair(Rational(1), Rational(1));
            return std::make_pair(lower, upper);
        }
        case Kind::complement: {
            auto inner = inner_->exact_density();
            if (!inner) return std::nullopt;
            return std::make_pair(Rational(1) - inner->second, Rational(1) - inner->first);
        }
        case Kind::union_: {
            Rational lo(0), hi(0);
            for (std::size_t i = 0; i < parts_.size(); ++i) {
                auto d = parts_[i]->exact_density();
                if (!d) return std::nullopt;
                if (d->first != d->second) return std::nullopt;  // only converged parts sum safely
                for (std::size_t j = i + 1; j < parts_.size(); ++j) {
                    if (!provably_disjoint(*parts_[i], *parts_[j])) return std::nullopt;
                }
                lo = lo + d->first;
                hi = hi + d->second;
            }
            return std::make_pair(lo, hi);
        }
        case Kind::predicate:
            return std::nullopt;
    }
    return std::nullopt;
}

nlohmann::ordered_json TimeSet::to_json() const {
    nlohmann::ordered_json j;
    switch (kind_) {
        case Kind::arithmetic:
            j["kind"] = "arithmetic";
            j["a"] = a_;
            j["p"] = p_;
            return j;
        case Kind::finite:
            j["kind"] = "finite";
            j["elements"] = elements_;
            return j;
        case Kind::union_: {
            j["kind"] = "union";
            auto arr = nlohmann::ordered_json::array();
            for (const auto& p : parts_) arr.push_back(p->to_json());
            j["parts"] = arr;
            return j;
        }
        case Kind::complement:
            j["kind"] = "complement";
            j["of"] = inner_->to_json();
            return j;
        case Kind::powers:
            j["kind"] = "powers";
            j["base"] = base_;
            j["min_exp"] = min_exp_;
            return j;
        case Kind::blocks:
            j["kind"] = "blocks";
            j["base"] = base_;
            return j;
        case Kind::predicate:
            throw std::runtime_error("predicate-backed TimeSet has no serial form");
    }
    return j;
}

TimeSetPtr TimeSet::from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "arithmetic") return arithmetic(j.at("a").get<i64>(), j.at("p").get<i64>());
    if (kind == "finite") return finite(j.at("elements").get<std::vector<i64>>());
    if (kind == "union") {
        std::vector<TimeSetPtr> parts;
        for (const auto& p : j.at("parts")) parts.push_back(from_json(p));
        return union_of(std::move(parts));
    }
    if (kind == "complement") return complement_of(from_json(j.at("of")));
    if (kind == "powers") return powers_of(j.at("base").get<i64>(), j.value("min_exp", i64{1}));
    if (kind == "blocks") return blocks_of(j.at("base").get<i64>());
    throw std::invalid_argument("unknown TimeSet kind: " + kind);
}

}  // namespace shiftlab
