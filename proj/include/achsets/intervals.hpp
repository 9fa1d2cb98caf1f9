#pragma once

// Sorted disjoint closed intervals with exact endpoints, and the gap type.

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "achsets/exact.hpp"

namespace achsets {

struct Interval {
    Exact lo, hi;
    Exact length() const { return hi - lo; }
};

// Union of finitely many closed bounded intervals, stored as the strictly
// ordered list of its connectivity components.
class MultiIntervalSet {
  public:
    MultiIntervalSet() = default;

    // Builds the union of [f, f+r] over sorted points f, coalescing touching
    // or overlapping intervals.
    static MultiIntervalSet cover(const std::vector<Exact>& points, const Exact& r) {
        MultiIntervalSet s;
        for (const Exact& f : points) {
            if (!s.comps_.empty() && f <= s.comps_.back().hi) {
                Exact hi = f + r;
                if (hi > s.comps_.back().hi) s.comps_.back().hi = hi;
            } else {
                s.comps_.push_back({f, f + r});
            }
        }
        return s;
    }

    static MultiIntervalSet single(const Exact& lo, const Exact& hi) {
        MultiIntervalSet s;
        if (hi >= lo) s.comps_.push_back({lo, hi});
        return s;
    }

    const std::vector<Interval>& components() const { return comps_; }
    bool empty() const { return comps_.empty(); }

    Exact measure() const {
        Exact m(0);
        for (const auto& c : comps_) m += c.length();
        return m;
    }

    // ||W||: maximal component length; zero for the empty set.
    Exact max_component_length() const {
        Exact m(0);
        for (const auto& c : comps_) {
            Exact len = c.length();
            if (len > m) m = len;
        }
        return m;
    }

    bool contains_point(const Exact& x) const {
        auto it = std::upper_bound(comps_.begin(), comps_.end(), x,
                                   [](const Exact& v, const Interval& c) { return v < c.lo; });
        if (it == comps_.begin()) return false;
        --it;
        return x <= it->hi;
    }

    bool contains(const MultiIntervalSet& other) const {
        size_t i = 0;
        for (const auto& c : other.comps_) {
            while (i < comps_.size() && comps_[i].hi < c.lo) ++i;
            if (i == comps_.size() || comps_[i].lo > c.lo || comps_[i].hi < c.hi) return false;
        }
        return true;
    }

    // Components of this \ other, as intervals.  Endpoint openness is not
    // tracked; for iterate differences every component is an open interval.
    std::vector<Interval> difference(const MultiIntervalSet& other) const {
        std::vector<Interval> out;
        size_t j = 0;
        for (const auto& c : comps_) {
            Exact cur = c.lo;
            while (j < other.comps_.size() && other.comps_[j].hi < cur) ++j;
            size_t k = j;
            while (k < other.comps_.size() && other.comps_[k].lo <= c.hi) {
                if (other.comps_[k].lo > cur) out.push_back({cur, other.comps_[k].lo});
                if (other.comps_[k].hi > cur) cur = other.comps_[k].hi;
                ++k;
            }
            if (cur < c.hi) out.push_back({cur, c.hi});
        }
        return out;
    }

  private:
    std::vector<Interval> comps_;
};

// An A-gap of order k: the open interval (left, right), a connectivity
// component of I_{k-1} \ I_k.  witness_index is the j with right == f_j^k
// from the Second Gap Lemma.
struct Gap {
    Exact left, right;
    long order = 0;
    size_t witness_index = 0;
    bool is_principal = false;
    std::optional<long> dominating_up_to_depth;

    Exact length() const { return right - left; }
};

}  // namespace achsets
