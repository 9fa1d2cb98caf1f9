#pragma once

// Symbolic series specifications with exact terms and closed-form remainders,
// initial subsums F_k, iterates I_k, gaps and the structural operations
// (merge, repeat).

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "achsets/exact.hpp"
#include "achsets/intervals.hpp"

namespace achsets {

struct SeriesSpec;
using SpecPtr = std::shared_ptr<const SeriesSpec>;

// (l_1,...,l_k; q): term a_{(n-1)k+i} = l_i * q^n.
struct Multigeometric {
    std::vector<Exact> l;
    Exact q;
};

// term c * q^n.
struct GeometricRatio {
    Exact c, q;
};

struct GFBlock {
    long m = 0;  // >= 2
    long k = 0;  // > m
    Exact q;     // > 0
};

// Generalized Ferens series: within block i the terms are
// (m_i + K_i - n) q_i for n = K_{i-1}+1 .. K_i.  When tail_ratio is set,
// the block list continues forever with the shape of the last block and q
// multiplied by tail_ratio per block; otherwise the series is finite.
struct GeneralizedFerens {
    std::vector<GFBlock> blocks;
    std::optional<Exact> tail_ratio;
};

// Semi-fast style value/multiplicity form: value alpha_j repeated N_j times.
// Optional geometric continuation: after the last listed level, values keep
// the ratio tail_ratio and the multiplicity tail_mult.
struct SemiFastSpec {
    std::vector<std::pair<Exact, long>> levels;
    std::optional<Exact> tail_ratio;
    long tail_mult = 1;
};

// Finite explicit list of terms.
struct FiniteSpec {
    std::vector<Exact> terms;
};

struct PrefixThenTail {
    std::vector<Exact> prefix;
    SpecPtr tail;
};

// Monotone union of two series (nonincreasing interleave; ties break to a).
struct MergeSpec {
    SpecPtr a, b;
};

// Every term of inner repeated k times.
struct RepeatSpec {
    SpecPtr inner;
    long k = 1;
};

class TkmpRealization;

// Backward-induction Cantor-set series with a_i = q_i r_i; blocks realized
// lazily and deterministically from (m, p, S1).  p absent means infinity.
struct TkmpSpec {
    long m = 0;
    std::optional<long> p;
    Exact S1;
    std::shared_ptr<TkmpRealization> real;  // created by make_tkmp_spec
};

// Escape hatch for closed-form rules without a rational remainder.  The
// remainder is only available as a bracketing: [partial sum, partial + tail
// upper bound].
struct ExplicitRule {
    std::function<Exact(long)> term;                  // n >= 1
    std::function<Exact(long)> tail_upper;            // upper bound on r_n
    std::function<Exact(long)> remainder = nullptr;   // exact r_n when available
    std::string label;
};

struct SeriesSpec {
    std::variant<Multigeometric, GeometricRatio, GeneralizedFerens, SemiFastSpec, FiniteSpec,
                 PrefixThenTail, MergeSpec, RepeatSpec, TkmpSpec, ExplicitRule>
        v;
};

template <class T>
SpecPtr make_spec(T&& value) {
    return std::make_shared<SeriesSpec>(SeriesSpec{std::forward<T>(value)});
}

// ---------------------------------------------------------------------------
// tkmp realization

class TkmpRealization {
  public:
    TkmpRealization(long m, std::optional<long> p, Exact S1)
        : m_(m), p_(p), S1_(std::move(S1)) {
        if (m_ <= 6) throw ParameterError("tkmp direct construction needs m > 6");
        if (p_ && *p_ < m_) throw ParameterError("tkmp requires p >= m");
        if (S1_.sign() <= 0) throw ParameterError("tkmp requires S1 > 0");
        r_.push_back(Exact(0));  // placeholder; r_[i] = r_i, filled per block
        a_.push_back(Exact(0));
        q_.push_back(Exact(0));
    }

    long m() const { return m_; }
    std::optional<long> p() const { return p_; }

    struct BlockInfo {
        long index = 0;       // 1-based block number
        long k = 0;           // top index of the block (k_n)
        long j = 0;           // induction length j_n
        long t = 0;           // boundary-ratio count t_n (0 for block 1)
        long p_n = 0;         // ratio at the block top
        Exact S;              // r_{k_n}
        Exact miara_ratio;    // m^{j+t+1} / prod(1+q) over the block (blocks >= 2)
    };

    // Realize at least `blocks` blocks.
    void realize_blocks(long blocks) {
        std::lock_guard<std::mutex> lock(mu_);
        while (static_cast<long>(blocks_.size()) < blocks) build_next_block();
    }

    // Realize enough blocks to cover term index n.
    void realize_index(long n) {
        std::lock_guard<std::mutex> lock(mu_);
        while (blocks_.empty() || blocks_.back().k < n) build_next_block();
    }

    Exact term(long n) {
        realize_index(n);
        return a_[static_cast<size_t>(n)];
    }
    Exact remainder(long n) {
        if (n == 0) {
            realize_index(1);
            return r0_;
        }
        realize_index(n);
        return r_[static_cast<size_t>(n)];
    }
    Exact ratio(long n) {
        realize_index(n);
        return q_[static_cast<size_t>(n)];
    }

    std::vector<BlockInfo> blocks_snapshot() const {
        std::lock_guard<std::mutex> lock(mu_);
        return blocks_;
    }

  private:
    long p_of_block(long n) const { return p_ ? *p_ : m_ + n; }

    // Ratios of one block, bottom-up (lowest index first); also reports j, t
    // and the miara ratio m^(count)/prod(1+q).
    void block_ratios(long block_no, std::vector<Exact>& out, long& j_out, long& t_out,
                      Exact& miara_out) const {
        long pn = p_of_block(block_no);
        long j = (2 * pn + m_ - 1) / m_ - 1;  // ceil(2p/m) - 1
        std::vector<Exact> top_down;
        top_down.push_back(Exact(pn));
        // Backward induction, scale-free: take the block-top remainder as 1.
        Exact r_top(1);
        Exact r_cur = r_top;
        Exact half_m = Exact(m_) / Exact(2);
        Exact floor_half_minus1 = Exact(m_ / 2 - 1);
        for (long i = 0; i < j; ++i) {
            const Exact& q_above = top_down.back();
            Exact r_below = r_cur * (Exact(1) + q_above);
            Exact q_next = floor_half_minus1 * q_above / (Exact(1) + q_above) +
                           half_m * r_top / r_below;
            top_down.push_back(q_next);
            r_cur = r_below;
        }
        long t = 0;
        Exact miara(0);
        if (block_no >= 2) {
            top_down.push_back(Exact(m_ - 3));
            t = 1;
            Exact mhalf = Exact(2 * m_ - 1) / Exact(2);  // m - 1/2
            // minimal t > 1 with m^(j+t+1) / prod(1+q) < 1/2
            auto prod = [&]() {
                Exact pr(1);
                for (const Exact& q : top_down) pr *= (Exact(1) + q);
                return pr;
            };
            do {
                top_down.push_back(mhalf);
                ++t;
                miara = Exact(m_).pow(j + t + 1) / prod();
            } while (!(miara < Exact(1, 2)));
        }
        out.assign(top_down.rbegin(), top_down.rend());
        j_out = j;
        t_out = t;
        miara_out = miara;
    }

    void build_next_block() {
        long block_no = static_cast<long>(blocks_.size()) + 1;
        std::vector<Exact> qs;
        long j = 0, t = 0;
        Exact miara;
        block_ratios(block_no, qs, j, t, miara);

        long lo = blocks_.empty() ? 1 : blocks_.back().k + 1;
        long hi = lo + static_cast<long>(qs.size()) - 1;
        q_.resize(static_cast<size_t>(hi) + 1, Exact(0));
        a_.resize(static_cast<size_t>(hi) + 1, Exact(0));
        r_.resize(static_cast<size_t>(hi) + 1, Exact(0));
        for (long i = lo; i <= hi; ++i) q_[static_cast<size_t>(i)] = qs[static_cast<size_t>(i - lo)];

        // S_n = S_{block-1} / prod(1+q_i over the block); remainders then run
        // down from the block entry: r_i = r_{i-1} / (1 + q_i).
        Exact r_above = blocks_.empty() ? Exact(0) : blocks_.back().S;
        if (blocks_.empty()) {
            // r_0 is S1 * prod(1+q) of block 1.
            Exact prod(1);
            for (const Exact& q : qs) prod *= (Exact(1) + q);
            r0_ = S1_ * prod;
            r_above = r0_;
        }
        for (long i = lo; i <= hi; ++i) {
            r_[static_cast<size_t>(i)] = r_above / (Exact(1) + q_[static_cast<size_t>(i)]);
            a_[static_cast<size_t>(i)] = q_[static_cast<size_t>(i)] * r_[static_cast<size_t>(i)];
            r_above = r_[static_cast<size_t>(i)];
        }

        BlockInfo info;
        info.index = block_no;
        info.k = hi;
        info.j = j;
        info.t = t;
        info.p_n = p_of_block(block_no);
        info.S = r_[static_cast<size_t>(hi)];
        info.miara_ratio = miara;
        blocks_.push_back(std::move(info));
    }

    long m_;
    std::optional<long> p_;
    Exact S1_;
    mutable std::mutex mu_;
    std::vector<BlockInfo> blocks_;
    std::vector<Exact> q_, a_, r_;
    Exact r0_;
};

inline SpecPtr make_tkmp_spec(long m, std::optional<long> p, const Exact& S1) {
    TkmpSpec s;
    s.m = m;
    s.p = p;
    s.S1 = S1;
    s.real = std::make_shared<TkmpRealization>(m, p, S1);
    return make_spec(std::move(s));
}

// ---------------------------------------------------------------------------
// GF block geometry

inline long gf_s(long m, long k) {  // s(p,r) = sum_{i=1}^{r-1} (p+i)
    return (k - 1) * m + k * (k - 1) / 2;
}

namespace detail {

struct GFLocated {
    long m, k;
    Exact q;
    long K_prev;  // index of the last term before this block
};

// Block containing term index n (1-based), honoring the tail rule.
inline std::optional<GFLocated> gf_locate(const GeneralizedFerens& gf, long n) {
    long K = 0;
    for (const auto& b : gf.blocks) {
        if (n <= K + b.k) return GFLocated{b.m, b.k, b.q, K};
        K += b.k;
    }
    if (!gf.tail_ratio) return std::nullopt;
    const GFBlock& last = gf.blocks.back();
    long steps = (n - K - 1) / last.k + 1;  // tail block number, 1-based
    return GFLocated{last.m, last.k, last.q * gf.tail_ratio->pow(steps),
                     K + (steps - 1) * last.k};
}

// Sum of whole blocks strictly after block index `after` (0 = after none).
inline Exact gf_blocks_tail_sum(const GeneralizedFerens& gf, size_t after) {
    Exact sum(0);
    for (size_t i = after; i < gf.blocks.size(); ++i) {
        const auto& b = gf.blocks[i];
        sum += Exact(gf_s(b.m, b.k) + b.m) * b.q;
    }
    if (gf.tail_ratio) {
        const GFBlock& last = gf.blocks.back();
        Exact block_sum = Exact(gf_s(last.m, last.k) + last.m) * last.q;
        // sum over tail blocks: block_sum * (rho + rho^2 + ...)
        sum += geometric_tail(block_sum, *gf.tail_ratio, 0);
    }
    return sum;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// term / remainder

Exact term(const SeriesSpec& spec, long n);
Exact remainder(const SeriesSpec& spec, long n);

namespace detail {

// Positions consumed from each side after n terms of the merged stream.
inline std::pair<long, long> merge_cut(const MergeSpec& m, long n) {
    long i = 0, j = 0;
    for (long step = 0; step < n; ++step) {
        Exact ta = term(*m.a, i + 1);
        Exact tb = term(*m.b, j + 1);
        if (ta >= tb)
            ++i;
        else
            ++j;
    }
    return {i, j};
}

}  // namespace detail

inline Exact term(const SeriesSpec& spec, long n) {
    if (n < 1) throw ParameterError("term index must be >= 1");
    return std::visit(
        [&](const auto& s) -> Exact {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Multigeometric>) {
                long k = static_cast<long>(s.l.size());
                long block = (n - 1) / k + 1;
                long pos = (n - 1) % k;
                return s.l[static_cast<size_t>(pos)] * s.q.pow(block);
            } else if constexpr (std::is_same_v<T, GeometricRatio>) {
                return s.c * s.q.pow(n);
            } else if constexpr (std::is_same_v<T, GeneralizedFerens>) {
                auto loc = detail::gf_locate(s, n);
                if (!loc) return Exact(0);
                // a_n = (m_i + K_i - n) q_i with K_i = K_prev + k_i
                return Exact(loc->m + loc->K_prev + loc->k - n) * loc->q;
            } else if constexpr (std::is_same_v<T, SemiFastSpec>) {
                long idx = n;
                for (const auto& [val, mult] : s.levels) {
                    if (idx <= mult) return val;
                    idx -= mult;
                }
                if (!s.tail_ratio) return Exact(0);
                long level = (idx - 1) / s.tail_mult + 1;
                return s.levels.back().first * s.tail_ratio->pow(level);
            } else if constexpr (std::is_same_v<T, FiniteSpec>) {
                if (n > static_cast<long>(s.terms.size())) return Exact(0);
                return s.terms[static_cast<size_t>(n - 1)];
            } else if constexpr (std::is_same_v<T, PrefixThenTail>) {
                long len = static_cast<long>(s.prefix.size());
                if (n <= len) return s.prefix[static_cast<size_t>(n - 1)];
                return term(*s.tail, n - len);
            } else if constexpr (std::is_same_v<T, MergeSpec>) {
                auto [i, j] = detail::merge_cut(s, n - 1);
                Exact ta = term(*s.a, i + 1);
                Exact tb = term(*s.b, j + 1);
                return ta >= tb ? ta : tb;
            } else if constexpr (std::is_same_v<T, RepeatSpec>) {
                return term(*s.inner, (n - 1) / s.k + 1);
            } else if constexpr (std::is_same_v<T, TkmpSpec>) {
                return s.real->term(n);
            } else {
                return s.term(n);
            }
        },
        spec.v);
}

inline Exact remainder(const SeriesSpec& spec, long n) {
    if (n < 0) throw ParameterError("remainder index must be >= 0");
    return std::visit(
        [&](const auto& s) -> Exact {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Multigeometric>) {
                long k = static_cast<long>(s.l.size());
                Exact L(0);
                for (const auto& li : s.l) L += li;
                long block = n / k;        // completed blocks
                long pos = n % k;          // consumed inside block block+1
                Exact rest(0);
                for (long i = pos; i < k; ++i)
                    rest += s.l[static_cast<size_t>(i)] * s.q.pow(block + 1);
                return rest + geometric_tail(L, s.q, block + 1);
            } else if constexpr (std::is_same_v<T, GeometricRatio>) {
                return geometric_tail(s.c, s.q, n);
            } else if constexpr (std::is_same_v<T, GeneralizedFerens>) {
                long K = 0;
                for (size_t i = 0; i < s.blocks.size(); ++i) {
                    const auto& b = s.blocks[i];
                    if (n <= K + b.k) {
                        Exact rest(0);
                        for (long idx = n + 1; idx <= K + b.k; ++idx)
                            rest += Exact(b.m + K + b.k - idx) * b.q;
                        return rest + detail::gf_blocks_tail_sum(s, i + 1);
                    }
                    K += b.k;
                }
                if (!s.tail_ratio) return Exact(0);
                auto loc = detail::gf_locate(s, n + 1);
                Exact rest(0);
                for (long idx = n + 1; idx <= loc->K_prev + loc->k; ++idx)
                    rest += Exact(loc->m + loc->K_prev + loc->k - idx) * loc->q;
                Exact block_sum = Exact(gf_s(loc->m, loc->k) + loc->m) * loc->q;
                return rest + geometric_tail(block_sum, *s.tail_ratio, 0);
            } else if constexpr (std::is_same_v<T, SemiFastSpec>) {
                Exact rest(0);
                long idx = n;
                bool past = false;
                for (const auto& [val, mult] : s.levels) {
                    if (past) {
                        rest += val * Exact(mult);
                    } else if (idx <= mult) {
                        rest += val * Exact(mult - idx);
                        past = true;
                    } else {
                        idx -= mult;
                    }
                }
                if (s.tail_ratio) {
                    const Exact& base = s.levels.back().first;
                    if (past) {
                        rest += geometric_tail(base * Exact(s.tail_mult), *s.tail_ratio, 0);
                    } else {
                        long level = idx / s.tail_mult;
                        long off = idx % s.tail_mult;
                        if (off > 0) rest += base * s.tail_ratio->pow(level + 1) * Exact(s.tail_mult - off);
                        long full = off > 0 ? level + 1 : level;
                        rest += geometric_tail(base * Exact(s.tail_mult), *s.tail_ratio, full);
                    }
                } else if (!past && idx > 0) {
                    throw ParameterError("remainder index beyond finite series");
                }
                return rest;
            } else if constexpr (std::is_same_v<T, FiniteSpec>) {
                Exact rest(0);
                for (long i = n + 1; i <= static_cast<long>(s.terms.size()); ++i)
                    rest += s.terms[static_cast<size_t>(i - 1)];
                return rest;
            } else if constexpr (std::is_same_v<T, PrefixThenTail>) {
                long len = static_cast<long>(s.prefix.size());
                if (n >= len) return remainder(*s.tail, n - len);
                Exact rest(0);
                for (long i = n + 1; i <= len; ++i) rest += s.prefix[static_cast<size_t>(i - 1)];
                return rest + remainder(*s.tail, 0);
            } else if constexpr (std::is_same_v<T, MergeSpec>) {
                auto [i, j] = detail::merge_cut(s, n);
                return remainder(*s.a, i) + remainder(*s.b, j);
            } else if constexpr (std::is_same_v<T, RepeatSpec>) {
                long full = n / s.k, off = n % s.k;
                Exact rest = Exact(s.k - off) * term(*s.inner, full + 1);
                if (off == 0) rest = Exact(0);
                if (off > 0)
                    return rest + Exact(s.k) * remainder(*s.inner, full + 1);
                return Exact(s.k) * remainder(*s.inner, full);
            } else if constexpr (std::is_same_v<T, TkmpSpec>) {
                return s.real->remainder(n);
            } else {
                if (!s.remainder) throw ParameterError("no closed-form remainder for rule '" + s.label + "'");
                return s.remainder(n);
            }
        },
        spec.v);
}

// [lower, upper] bracket of r_n; exact specs return a degenerate bracket.
inline std::pair<Exact, Exact> remainder_bounds(const SeriesSpec& spec, long n) {
    if (const auto* rule = std::get_if<ExplicitRule>(&spec.v)) {
        if (rule->remainder) {
            Exact r = rule->remainder(n);
            return {r, r};
        }
        return {Exact(0), rule->tail_upper(n)};
    }
    Exact r = remainder(spec, n);
    return {r, r};
}

inline Exact total_sum(const SeriesSpec& spec) { return remainder(spec, 0); }

inline bool is_finite_series(const SeriesSpec& spec) {
    return std::visit(
        [](const auto& s) -> bool {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, GeneralizedFerens>)
                return !s.tail_ratio;
            else if constexpr (std::is_same_v<T, SemiFastSpec>)
                return !s.tail_ratio;
            else if constexpr (std::is_same_v<T, FiniteSpec>)
                return true;
            else if constexpr (std::is_same_v<T, PrefixThenTail>)
                return is_finite_series(*s.tail);
            else if constexpr (std::is_same_v<T, MergeSpec>)
                return is_finite_series(*s.a) && is_finite_series(*s.b);
            else if constexpr (std::is_same_v<T, RepeatSpec>)
                return is_finite_series(*s.inner);
            else
                return false;
        },
        spec.v);
}

// Verifies term(n) > 0 and term(n+1) <= term(n) up to `depth`.
inline void check_terms(const SeriesSpec& spec, long depth) {
    Exact prev;
    for (long n = 1; n <= depth; ++n) {
        Exact t = term(spec, n);
        if (t.sign() < 0) throw ParameterError("negative term at n=" + std::to_string(n));
        if (n > 1 && t > prev)
            throw ParameterError("terms increase at n=" + std::to_string(n));
        prev = t;
    }
}

// ---------------------------------------------------------------------------
// Subsums

struct SortedSubsums {
    std::vector<Exact> values;  // strictly increasing, starts at 0
    long depth = 0;
};

namespace detail {

inline size_t subsum_cap() {
    static size_t cap = [] {
        if (const char* env = std::getenv("ACHSETS_SUBSUM_CAP")) {
            long v = std::atol(env);
            if (v > 0) return static_cast<size_t>(v);
        }
        return static_cast<size_t>(1) << 24;
    }();
    return cap;
}

// values := sorted-dedup merge of values and values + a.
inline void fold_in_term(std::vector<Exact>& values, const Exact& a, long completed_depth) {
    std::vector<Exact> shifted;
    shifted.reserve(values.size());
    for (const Exact& v : values) shifted.push_back(v + a);
    std::vector<Exact> merged;
    merged.reserve(values.size() * 2);
    size_t i = 0, j = 0;
    while (i < values.size() || j < shifted.size()) {
        if (merged.size() > subsum_cap())
            throw ResourceError("subsum cap exceeded", completed_depth);
        const Exact* next;
        if (j == shifted.size() || (i < values.size() && values[i] <= shifted[j])) {
            next = &values[i];
            if (i < values.size() && j < shifted.size() && values[i] == shifted[j]) ++j;
            ++i;
        } else {
            next = &shifted[j];
            ++j;
        }
        if (merged.empty() || merged.back() != *next) merged.push_back(*next);
    }
    values = std::move(merged);
}

}  // namespace detail

// F_k: all subset sums of the first k terms, sorted and deduplicated.
inline SortedSubsums initial_subsums(const SeriesSpec& spec, long k) {
    if (k < 0) throw ParameterError("depth must be >= 0");
    SortedSubsums f;
    f.values = {Exact(0)};
    for (long n = 1; n <= k; ++n) {
        detail::fold_in_term(f.values, term(spec, n), n - 1);
        f.depth = n;
    }
    f.depth = k;
    return f;
}

// Sigma-set of an arbitrary finite multiset of positive numbers.
inline SortedSubsums sigma_set(const std::vector<Exact>& multiset) {
    if (multiset.empty()) throw ParameterError("sigma_set of empty multiset");
    SortedSubsums f;
    f.values = {Exact(0)};
    long n = 0;
    for (const Exact& a : multiset) {
        if (a.sign() <= 0) throw ParameterError("sigma_set element must be positive");
        detail::fold_in_term(f.values, a, n++);
    }
    f.depth = n;
    return f;
}

// delta(S): minimal distance between distinct elements.
inline Exact delta_min_gap(const SortedSubsums& f) {
    if (f.values.size() < 2) throw ParameterError("delta of a singleton");
    Exact best = f.values[1] - f.values[0];
    for (size_t i = 2; i < f.values.size(); ++i) {
        Exact d = f.values[i] - f.values[i - 1];
        if (d < best) best = d;
    }
    return best;
}

// ---------------------------------------------------------------------------
// Iterates and gaps

// I_k = union over f in F_k of [f, f + r_k]; I_0 = [0, sum a_n].
inline MultiIntervalSet iterate(const SeriesSpec& spec, long k) {
    if (k < 0) throw ParameterError("depth must be >= 0");
    if (k == 0) return MultiIntervalSet::single(Exact(0), total_sum(spec));
    SortedSubsums f = initial_subsums(spec, k);
    return MultiIntervalSet::cover(f.values, remainder(spec, k));
}

inline MultiIntervalSet iterate_from(const SortedSubsums& f, const Exact& r) {
    return MultiIntervalSet::cover(f.values, r);
}

// All A-gaps of order k (components of I_{k-1} \ I_k), annotated with the
// Second-Gap-Lemma witness and the principal flag.
inline std::vector<Gap> gaps_of_order(const SeriesSpec& spec, long k) {
    if (k < 1) throw ParameterError("gap order must be >= 1");
    MultiIntervalSet prev = iterate(spec, k - 1);
    SortedSubsums f = initial_subsums(spec, k);
    Exact rk = remainder(spec, k);
    MultiIntervalSet cur = iterate_from(f, rk);
    Exact ak = term(spec, k);

    std::vector<Gap> gaps;
    for (const Interval& piece : prev.difference(cur)) {
        Gap g;
        g.left = piece.lo;
        g.right = piece.hi;
        g.order = k;
        auto it = std::lower_bound(f.values.begin(), f.values.end(), g.right);
        if (it == f.values.end() || *it != g.right || it == f.values.begin())
            throw ParameterError("gap endpoint not in F_k");  // Second Gap Lemma violated
        g.witness_index = static_cast<size_t>(it - f.values.begin());
        if (*(it - 1) + rk != g.left) throw ParameterError("gap left endpoint mismatch");
        g.is_principal = (g.left == rk && g.right == ak);
        gaps.push_back(std::move(g));
    }
    return gaps;
}

struct DominatingResult {
    bool dominating = false;
    long checked_depth = 0;
    std::optional<Gap> refuting_gap;
};

// Checks whether every gap of order <= depth lying strictly left of `gap`
// is shorter.  Principal gaps are compared first (they are the longest of
// their order); full order enumeration happens only when needed.
inline DominatingResult dominating_check(const SeriesSpec& spec, const Gap& gap, long depth) {
    if (depth < gap.order) throw ParameterError("depth must cover the gap order");
    Exact len = gap.length();
    DominatingResult res;
    res.checked_depth = depth;
    for (long k = 1; k <= depth; ++k) {
        Exact ak = term(spec, k), rk = remainder(spec, k);
        if (!(rk < ak)) continue;  // no gaps of this order
        Exact principal_len = ak - rk;
        if (principal_len < len) continue;  // all order-k gaps are shorter
        for (const Gap& other : gaps_of_order(spec, k)) {
            if (other.order == gap.order && other.left == gap.left && other.right == gap.right)
                continue;
            if (other.right <= gap.left && other.length() >= len) {
                res.refuting_gap = other;
                return res;
            }
        }
    }
    res.dominating = true;
    return res;
}

// ---------------------------------------------------------------------------
// Structural operations

inline SpecPtr merge_union(const SpecPtr& a, const SpecPtr& b) {
    return make_spec(MergeSpec{a, b});
}

inline SpecPtr repeat(const SpecPtr& spec, long k) {
    if (k < 1) throw ParameterError("repeat count must be >= 1");
    if (k == 1) return spec;
    return make_spec(RepeatSpec{spec, k});
}

// Structural equality of specifications.  ExplicitRule compares by label
// (callable state is opaque); Tkmp by its parameters.
inline bool spec_equal(const SeriesSpec& x, const SeriesSpec& y) {
    if (x.v.index() != y.v.index()) return false;
    return std::visit(
        [&](const auto& a) -> bool {
            using T = std::decay_t<decltype(a)>;
            const auto& b = std::get<T>(y.v);
            if constexpr (std::is_same_v<T, Multigeometric>) {
                return a.l == b.l && a.q == b.q;
            } else if constexpr (std::is_same_v<T, GeometricRatio>) {
                return a.c == b.c && a.q == b.q;
            } else if constexpr (std::is_same_v<T, GeneralizedFerens>) {
                if (a.blocks.size() != b.blocks.size() || a.tail_ratio != b.tail_ratio)
                    return false;
                for (size_t i = 0; i < a.blocks.size(); ++i)
                    if (a.blocks[i].m != b.blocks[i].m || a.blocks[i].k != b.blocks[i].k ||
                        a.blocks[i].q != b.blocks[i].q)
                        return false;
                return true;
            } else if constexpr (std::is_same_v<T, SemiFastSpec>) {
                return a.levels == b.levels && a.tail_ratio == b.tail_ratio &&
                       a.tail_mult == b.tail_mult;
            } else if constexpr (std::is_same_v<T, FiniteSpec>) {
                return a.terms == b.terms;
            } else if constexpr (std::is_same_v<T, PrefixThenTail>) {
                return a.prefix == b.prefix && spec_equal(*a.tail, *b.tail);
            } else if constexpr (std::is_same_v<T, MergeSpec>) {
                return spec_equal(*a.a, *b.a) && spec_equal(*a.b, *b.b);
            } else if constexpr (std::is_same_v<T, RepeatSpec>) {
                return a.k == b.k && spec_equal(*a.inner, *b.inner);
            } else if constexpr (std::is_same_v<T, TkmpSpec>) {
                return a.m == b.m && a.p == b.p && a.S1 == b.S1;
            } else {
                return a.label == b.label && !a.label.empty();
            }
        },
        x.v);
}

// ---------------------------------------------------------------------------
// Periodicity: a_{cP+t} = block[t] * ratio^c for all c >= 0 identifies the
// purely periodic specs (multigeometric shape), which admit symbolic
// per-position reasoning.
struct PeriodicProfile {
    std::vector<Exact> block;  // terms 1..P
    Exact ratio;               // in (0,1)
};

inline std::optional<PeriodicProfile> periodic_profile(const SeriesSpec& spec) {
    return std::visit(
        [](const auto& s) -> std::optional<PeriodicProfile> {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Multigeometric>) {
                PeriodicProfile p;
                for (const auto& li : s.l) p.block.push_back(li * s.q);
                p.ratio = s.q;
                return p;
            } else if constexpr (std::is_same_v<T, GeometricRatio>) {
                return PeriodicProfile{{s.c * s.q}, s.q};
            } else if constexpr (std::is_same_v<T, RepeatSpec>) {
                auto inner = periodic_profile(*s.inner);
                if (!inner) return std::nullopt;
                PeriodicProfile p;
                for (const auto& v : inner->block)
                    for (long i = 0; i < s.k; ++i) p.block.push_back(v);
                p.ratio = inner->ratio;
                return p;
            } else {
                return std::nullopt;
            }
        },
        spec.v);
}

}  // namespace achsets
