#pragma once

// Builders for the concrete series families and their theorem-backed
// certificates: the multigeometric sufficient-Cantorval test, generalized
// Ferens (GF) series with the Cantorval conditions and measure brackets,
// and the backward-induction Cantor-set construction with k-fold-sum type
// predictions.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "achsets/exact.hpp"
#include "achsets/series.hpp"

namespace achsets {

// ---------------------------------------------------------------------------
// Sufficient Cantorval test for multigeometric series (l_1..l_m; q)

enum class CantorvalTestVerdict { Cantorval, NonemptyInteriorOnly, NotMultiInterval, Inconclusive };

struct SufficientCantorvalResult {
    CantorvalTestVerdict verdict = CantorvalTestVerdict::Inconclusive;
    long run_start = 0;   // n_0 of the longest consecutive-integer run in Sigma L
    long run_steps = 0;   // r: the run is {n_0, ..., n_0 + r}
    Exact lower;          // 1 / (r+1)
    Exact upper;          // a_m / (sum + a_m)
    bool interior = false;       // q >= lower
    bool not_multiinterval = false;  // q < upper
};

inline SufficientCantorvalResult sufficient_cantorval_check(const std::vector<long>& l,
                                                            const Exact& q) {
    if (l.empty()) throw ParameterError("empty coefficient list");
    long last = l.back();
    for (size_t i = 0; i + 1 < l.size(); ++i) {
        if (l[i] < l[i + 1]) throw ParameterError("coefficients must be nonincreasing");
        if (l[i] - l[i + 1] > last)
            throw ParameterError("difference condition fails at i=" + std::to_string(i + 1));
    }
    if (last <= 0) throw ParameterError("coefficients must be positive");
    if (q.sign() <= 0 || q >= Exact(1)) throw ParameterError("q must lie in (0,1)");

    std::vector<Exact> mult;
    long total = 0;
    for (long v : l) {
        mult.push_back(Exact(v));
        total += v;
    }
    SortedSubsums sigma = sigma_set(mult);

    // Longest run of consecutive integers in Sigma L.
    SufficientCantorvalResult res;
    long best_len = 1, cur_len = 1;
    long best_start = 0, cur_start = 0;
    for (size_t i = 1; i < sigma.values.size(); ++i) {
        if (sigma.values[i] - sigma.values[i - 1] == Exact(1)) {
            ++cur_len;
        } else {
            cur_start = static_cast<long>(i);
            cur_len = 1;
        }
        if (cur_len > best_len) {
            best_len = cur_len;
            best_start = cur_start;
        }
    }
    res.run_steps = best_len - 1;
    res.run_start = static_cast<long>(sigma.values[static_cast<size_t>(best_start)]
                                          .as_rational()
                                          .convert_to<long>());
    res.lower = Exact(1, res.run_steps + 1);
    res.upper = Exact(last) / Exact(total + last);
    res.interior = q >= res.lower;
    res.not_multiinterval = q < res.upper;
    if (res.interior && res.not_multiinterval)
        res.verdict = CantorvalTestVerdict::Cantorval;
    else if (res.interior)
        res.verdict = CantorvalTestVerdict::NonemptyInteriorOnly;
    else if (res.not_multiinterval)
        res.verdict = CantorvalTestVerdict::NotMultiInterval;
    else
        res.verdict = CantorvalTestVerdict::Inconclusive;
    return res;
}

// Parameters for which the k-fold sum of D_q stays a Cantorval: the minimal
// integer m with 6m - 3k - 1 > sqrt(9k^2 + 42k + 1), and the exact q-window.
struct KCopiesParameters {
    long k = 0;
    long m = 0;
    Exact q_lower;  // 2 / (3m^2 - m + 2)
    Exact q_upper;  // 2 / (3mk + 3k + 2)
};

inline KCopiesParameters sum_of_k_copies_parameters(long k) {
    if (k < 1) throw ParameterError("k must be >= 1");
    BigInt disc = BigInt(9) * k * k + 42 * k + 1;
    long m = 2;
    auto ok = [&](long mm) {
        BigInt lhs = BigInt(6) * mm - 3 * k - 1;
        return lhs > 0 && lhs * lhs > disc;
    };
    while (!ok(m)) ++m;
    KCopiesParameters p;
    p.k = k;
    p.m = m;
    p.q_lower = Exact(2) / Exact(3 * m * m - m + 2);
    p.q_upper = Exact(2) / Exact(3 * m * k + 3 * k + 2);
    return p;
}

// ---------------------------------------------------------------------------
// GF series

struct GFParameters {
    std::vector<GFBlock> blocks;
    std::optional<Exact> tail_ratio;  // constant continuation of the last block
    std::optional<Exact> alpha;       // sup c_n / m_n from the construction
    std::vector<Exact> c_used;        // c_n consumed by gf_construct (may be empty)
    std::vector<long> chosen_T;       // per-block k chosen by gf_construct

    long s(size_t i) const { return gf_s(blocks[i].m, blocks[i].k); }
    Exact block_sum(size_t i) const { return Exact(s(i) + blocks[i].m) * blocks[i].q; }
};

inline SpecPtr gf_series(const GFParameters& params) {
    if (params.blocks.empty()) throw ParameterError("GF series needs at least one block");
    for (size_t i = 0; i < params.blocks.size(); ++i) {
        const auto& b = params.blocks[i];
        if (b.m < 2 || b.k <= b.m) throw ParameterError("GF block needs k > m >= 2");
        if (b.q.sign() <= 0) throw ParameterError("GF block needs q > 0");
        if (i + 1 < params.blocks.size()) {
            const auto& c = params.blocks[i + 1];
            if (!(Exact(b.m) * b.q > Exact(c.m + c.k - 1) * c.q))
                throw ParameterError("terms fail to decrease across block boundary " +
                                     std::to_string(i + 1));
        }
    }
    if (params.tail_ratio) {
        const auto& b = params.blocks.back();
        if (params.tail_ratio->sign() <= 0 || *params.tail_ratio >= Exact(1))
            throw ParameterError("GF tail ratio must lie in (0,1)");
        if (!(Exact(b.m) * b.q > Exact(b.m + b.k - 1) * b.q * *params.tail_ratio))
            throw ParameterError("terms fail to decrease entering the tail blocks");
    }
    GeneralizedFerens gf;
    gf.blocks = params.blocks;
    gf.tail_ratio = params.tail_ratio;
    return make_spec(std::move(gf));
}

// Certified [lower, upper] bracket on sum_{i>n} (s_i + m_i) q_i, 0-based
// over blocks (n = number of leading blocks excluded).
inline std::pair<Exact, Exact> gf_tail_bracket(const GFParameters& params, size_t after) {
    Exact partial(0);
    for (size_t i = after; i < params.blocks.size(); ++i) partial += params.block_sum(i);
    if (params.tail_ratio) {
        Exact bs = params.block_sum(params.blocks.size() - 1);
        Exact tail = geometric_tail(bs, *params.tail_ratio, 0);
        return {partial + tail, partial + tail};
    }
    if (params.alpha) {
        // Block sums decay by a factor < 1 - alpha.  When the construction
        // recorded its c_n, the first unrealized block sum is < c_last q_last,
        // so the whole unrealized tail is < c_last q_last / alpha; otherwise
        // fall back to B_last (1-alpha)/alpha.
        Exact first_unrealized =
            params.c_used.size() == params.blocks.size() && !params.c_used.empty()
                ? params.c_used.back() * params.blocks.back().q
                : params.block_sum(params.blocks.size() - 1) * (Exact(1) - *params.alpha);
        return {partial, partial + first_unrealized / *params.alpha};
    }
    return {partial, partial};  // finite series
}

enum class Tristate { Pass, Fail, Inconclusive };

struct GFConditionRow {
    long n = 0;               // 1-based block index
    bool gf1 = false;         // q_n <= (s_{n+1} - m_{n+1} + 1) q_{n+1}
    Tristate gf2 = Tristate::Inconclusive;  // m_n q_n > sum_{i>n} (s_i + m_i) q_i
};

struct GFConditionsReport {
    std::vector<GFConditionRow> rows;
    bool tail_gf1 = true;     // the conditions inside the periodic tail
    Tristate tail_gf2 = Tristate::Pass;
    bool all_pass() const {
        for (const auto& r : rows)
            if (!r.gf1 || r.gf2 != Tristate::Pass) return false;
        return tail_gf1 && tail_gf2 == Tristate::Pass;
    }
};

inline GFConditionsReport gf_conditions(const GFParameters& params, long blocks_to_check) {
    GFConditionsReport rep;
    long limit = std::min<long>(blocks_to_check, static_cast<long>(params.blocks.size()));
    for (long n = 1; n <= limit; ++n) {
        const auto& b = params.blocks[static_cast<size_t>(n - 1)];
        GFConditionRow row;
        row.n = n;
        // GF1 against the next block (realized or first tail block).
        std::optional<GFBlock> next;
        if (n < static_cast<long>(params.blocks.size()))
            next = params.blocks[static_cast<size_t>(n)];
        else if (params.tail_ratio) {
            next = params.blocks.back();
            next->q = next->q * *params.tail_ratio;
        }
        if (next) {
            long s_next = gf_s(next->m, next->k);
            row.gf1 = b.q <= Exact(s_next - next->m + 1) * next->q;
        } else {
            row.gf1 = true;  // no further blocks
        }
        auto [lo, hi] = gf_tail_bracket(params, static_cast<size_t>(n));
        Exact lhs = Exact(b.m) * b.q;
        if (lhs > hi)
            row.gf2 = Tristate::Pass;
        else if (lhs <= lo)
            row.gf2 = Tristate::Fail;
        else
            row.gf2 = Tristate::Inconclusive;
        rep.rows.push_back(row);
    }
    if (params.tail_ratio) {
        // Inside the periodic tail both conditions are scale-invariant.
        const auto& b = params.blocks.back();
        long s = gf_s(b.m, b.k);
        const Exact& rho = *params.tail_ratio;
        rep.tail_gf1 = Exact(1) <= Exact(s - b.m + 1) * rho;
        Exact tail_over_q = geometric_tail(Exact(s + b.m), rho, 0);  // sum_{j>=1} (s+m) rho^j
        rep.tail_gf2 = (Exact(b.m) > tail_over_q) ? Tristate::Pass : Tristate::Fail;
    }
    return rep;
}

// Inductive construction of a GF Cantorval from (m_n), (c_n) and
// alpha = sup c_n/m_n: picks the minimal block length T per block, and
// q_{l+1} = q_l / (s_{l+1} - m_{l+1} + 1).
inline GFParameters gf_construct(const std::vector<long>& m_seq, const std::vector<Exact>& c_seq,
                                 const Exact& alpha, long blocks, const Exact& q1 = Exact(1)) {
    if (blocks < 1) throw ParameterError("need at least one block");
    if (static_cast<long>(m_seq.size()) < blocks || static_cast<long>(c_seq.size()) < blocks)
        throw ParameterError("parameter sequences shorter than the block count");
    if (alpha >= Exact(1) || alpha.sign() <= 0) throw ParameterError("alpha must lie in (0,1)");
    GFParameters params;
    params.alpha = alpha;
    for (long n = 0; n < blocks; ++n) {
        long m = m_seq[static_cast<size_t>(n)];
        const Exact& c = c_seq[static_cast<size_t>(n)];
        if (m < 2) throw ParameterError("m_n must be >= 2");
        if (c <= Exact(1)) throw ParameterError("c_n must be > 1");
        if (c / Exact(m) > alpha)
            throw ParameterError("alpha is not an upper bound for c_n/m_n at block " +
                                 std::to_string(n + 1));
        Exact two_m_over = Exact(2 * m) / (c - Exact(1));  // threshold of the gap condition
        long T = m + 1;
        auto cond = [&](long t) {
            long s = gf_s(m, t);
            bool growth = n == 0 || Exact(s - m + 1) > two_m_over;
            bool margin = c < (Exact(1) - alpha) * Exact(s + m);
            return growth && margin;
        };
        while (!cond(T)) ++T;
        GFBlock b;
        b.m = m;
        b.k = T;
        b.q = (n == 0) ? q1
                       : params.blocks.back().q / Exact(gf_s(m, T) - m + 1);
        params.blocks.push_back(b);
        params.c_used.push_back(c);
        params.chosen_T.push_back(T);
    }
    // Constant parameters yield identical blocks forever; attach the exact
    // periodic continuation in that case.
    bool constant = true;
    for (long n = 1; n < blocks; ++n)
        if (m_seq[static_cast<size_t>(n)] != m_seq[0] || c_seq[static_cast<size_t>(n)] != c_seq[0])
            constant = false;
    if (constant && blocks >= 2) {
        const auto& a = params.blocks[params.blocks.size() - 2];
        const auto& b = params.blocks.back();
        if (a.m == b.m && a.k == b.k) params.tail_ratio = b.q / a.q;
    }
    return params;
}

// Exact check of the two construction inequalities at every realized
// boundary; used by tests.
inline bool gf_construct_invariants(const GFParameters& params, const std::vector<Exact>& c_seq) {
    if (!params.alpha) return false;
    for (size_t n = 0; n + 1 < params.blocks.size(); ++n) {
        Exact lhs = params.block_sum(n + 1);
        if (!(lhs < c_seq[n] * params.blocks[n].q)) return false;  // eq. gwiazd
    }
    for (size_t n = 0; n < params.blocks.size(); ++n) {
        if (!(c_seq[n] < (Exact(1) - *params.alpha) *
                             Exact(params.s(n) + params.blocks[n].m)))  // eq. 2gwiazd
            return false;
    }
    return true;
}

// Certified lower bound on a_{K_n} / r_{K_n} per realized block.
struct GFRatioRow {
    long n = 0;
    Exact lower_bound;   // m_n q_n / (upper bound of r_{K_n})
    bool strict = false;  // the tail bound is strict, so the ratio exceeds lower_bound
};

inline std::vector<GFRatioRow> gf_ratio_lower_bounds(const GFParameters& params) {
    std::vector<GFRatioRow> rows;
    for (size_t n = 1; n <= params.blocks.size(); ++n) {
        auto [lo, hi] = gf_tail_bracket(params, n);
        (void)lo;
        GFRatioRow row;
        row.n = static_cast<long>(n);
        row.lower_bound = Exact(params.blocks[n - 1].m) * params.blocks[n - 1].q / hi;
        row.strict = params.alpha.has_value() && !params.tail_ratio.has_value();
        rows.push_back(row);
    }
    return rows;
}

// Certified brackets for the Lebesgue measure of the GF Cantorval and of its
// interior; requires the periodic tail rule (3^n-weighted sums need an
// exactly dominated tail).
struct GFMeasureBounds {
    Exact lambda_lo, lambda_hi;
    Exact interior_lo, interior_hi;
    long tail_blocks = 0;
};

inline GFMeasureBounds gf_measure(const GFParameters& params, long tail_blocks) {
    if (!params.tail_ratio)
        throw ParameterError("measure series not dominated: periodic tail rule required");
    const Exact& rho = *params.tail_ratio;
    if (!(Exact(3) * rho < Exact(1)))
        throw ParameterError("measure series not dominated");
    if (tail_blocks < 1) throw ParameterError("tail_blocks must be >= 1");

    auto block_at = [&](long n) -> GFBlock {  // 1-based, with tail continuation
        long realized = static_cast<long>(params.blocks.size());
        if (n <= realized) return params.blocks[static_cast<size_t>(n - 1)];
        GFBlock b = params.blocks.back();
        b.q = b.q * rho.pow(n - realized);
        return b;
    };
    auto sum_tail = [&](long after) {  // exact sum_{i>after} (s_i+m_i) q_i
        Exact sum(0);
        long realized = static_cast<long>(params.blocks.size());
        long upto = std::max(after, realized);
        for (long i = after + 1; i <= upto; ++i) {
            GFBlock b = block_at(i);
            sum += Exact(gf_s(b.m, b.k) + b.m) * b.q;
        }
        GFBlock last = block_at(upto);
        sum += geometric_tail(Exact(gf_s(last.m, last.k) + last.m) * last.q, rho, 0);
        return sum;
    };
    auto diff_tail = [&](long from) {  // exact sum_{i>=from} (s_i - m_i) q_i
        Exact sum(0);
        long realized = static_cast<long>(params.blocks.size());
        long upto = std::max(from - 1, realized);
        for (long i = from; i <= upto; ++i) {
            GFBlock b = block_at(i);
            sum += Exact(gf_s(b.m, b.k) - b.m) * b.q;
        }
        GFBlock last = block_at(upto);
        sum += geometric_tail(Exact(gf_s(last.m, last.k) - last.m) * last.q, rho, 0);
        return sum;
    };

    Exact total = sum_tail(0);
    // Gap series: sum_n 2*3^{n-1} g_n with g_n = m_n q_n - r_{K_n} > 0.
    Exact gaps_partial(0);
    Exact g_last;
    Exact three(3);
    for (long n = 1; n <= tail_blocks; ++n) {
        GFBlock b = block_at(n);
        Exact g = Exact(b.m) * b.q - sum_tail(n);
        if (g.sign() <= 0) throw ParameterError("gap term not positive; GF2 violated");
        gaps_partial += Exact(2) * three.pow(n - 1) * g;
        g_last = g;
    }
    // In the periodic tail g_{n+1} = rho g_n, so the dropped tail is at most
    // 2*3^N g_{N+1} / (1 - 3 rho); g_{N+1} <= rho * g_N holds once N reaches
    // the tail region, and before that g shrinks at least as fast.
    Exact g_next;
    {
        GFBlock b = block_at(tail_blocks + 1);
        g_next = Exact(b.m) * b.q - sum_tail(tail_blocks + 1);
    }
    Exact gap_tail_hi = Exact(2) * three.pow(tail_blocks) * g_next / (Exact(1) - three * rho);

    GFMeasureBounds out;
    out.tail_blocks = tail_blocks;
    out.lambda_hi = total - gaps_partial;
    out.lambda_lo = total - gaps_partial - gap_tail_hi;
    // Interior census: W_1 + sum_{n>=2} 2*3^{n-2} W_n with W_n = sum_{i>=n} (s_i-m_i) q_i.
    Exact interior = diff_tail(1);
    for (long n = 2; n <= tail_blocks; ++n)
        interior += Exact(2) * three.pow(n - 2) * diff_tail(n);
    out.interior_lo = interior;
    out.interior_hi = out.lambda_hi;
    if (out.interior_lo > out.lambda_hi || out.lambda_lo > out.interior_hi)
        throw ParameterError("measure brackets fail to overlap");
    return out;
}

// ---------------------------------------------------------------------------
// Backward-induction Cantor sets (k-fold sum type control)

struct TkmpParameters {
    long m_user = 0;
    std::optional<long> p_user;  // absent = infinity
    long factor = 1;             // 4 for the small-m bootstrap
    long m_internal = 0;
    std::optional<long> p_internal;
    Exact S1;
    bool geometric_case = false;  // m == p: plain geometric 1/(m+1)^n
    std::shared_ptr<TkmpRealization> realization;  // null in the geometric case
};

inline std::pair<SpecPtr, TkmpParameters> tkmp_construct(long m, std::optional<long> p,
                                                         const Exact& S1, long blocks) {
    if (m <= 1) throw ParameterError("m must be >= 2");
    if (p && *p < m) throw ParameterError("p must be >= m");
    TkmpParameters params;
    params.m_user = m;
    params.p_user = p;
    params.S1 = S1;
    if (p && *p == m) {
        // C = A(1/(m+1)^n): Cantor for k < m, interval for k >= m.
        params.geometric_case = true;
        params.m_internal = m;
        params.p_internal = p;
        return {make_spec(GeometricRatio{Exact(1), Exact(1, m + 1)}), params};
    }
    long mi = m, factor = 1;
    std::optional<long> pi = p;
    if (m <= 6) {
        factor = 4;
        mi = 4 * m;
        if (pi) pi = 4 * *pi;
    }
    params.factor = factor;
    params.m_internal = mi;
    params.p_internal = pi;
    SpecPtr base = make_tkmp_spec(mi, pi, S1);
    const auto& tk = std::get<TkmpSpec>(base->v);
    tk.real->realize_blocks(blocks);
    params.realization = tk.real;
    SpecPtr spec = factor == 1 ? base : repeat(base, factor);
    return {spec, params};
}

enum class SumTypePrediction { Cantor, Cantorval, Interval };

struct TkmpSumTypeReport {
    long k = 0;
    SumTypePrediction predicted = SumTypePrediction::Cantor;
    bool interval_criterion_symbolic = false;  // a_n <= k' r_n for all n, from the ratio rule
    std::optional<long> non_interval_witness;  // index n with a_n > k' r_n
    std::vector<Exact> measure_block_factors;  // per-block miara ratios (k < m case)
    bool measure_halving = false;              // every factor < 1/2
};

inline TkmpSumTypeReport tkmp_sum_type(const TkmpParameters& params, long k) {
    if (k < 1) throw ParameterError("k must be >= 1");
    TkmpSumTypeReport rep;
    rep.k = k;
    if (k < params.m_user)
        rep.predicted = SumTypePrediction::Cantor;
    else if (!params.p_user || k < *params.p_user)
        rep.predicted = SumTypePrediction::Cantorval;
    else
        rep.predicted = SumTypePrediction::Interval;

    long kk = k * params.factor;  // criterion runs on the internal sequence
    if (params.geometric_case) {
        // a_n = m r_n exactly for the 1/(m+1)^n series.
        rep.interval_criterion_symbolic = kk >= params.m_internal;
        if (!rep.interval_criterion_symbolic) rep.non_interval_witness = 1;
        return rep;
    }
    auto blocks = params.realization->blocks_snapshot();
    if (blocks.empty()) throw ParameterError("no realized blocks");
    // All ratios satisfy q_i <= p_n with equality at the block top, so the
    // interval criterion a_n <= k' r_n holds for all n iff k' >= sup p_n.
    bool all_le = true;
    for (const auto& b : blocks) {
        for (long i = (b.index == 1 ? 1 : blocks[static_cast<size_t>(b.index - 2)].k + 1);
             i <= b.k; ++i) {
            if (params.realization->ratio(i) > Exact(kk)) {
                all_le = false;
                if (!rep.non_interval_witness) rep.non_interval_witness = i;
            }
        }
        if (b.index >= 2) rep.measure_block_factors.push_back(b.miara_ratio);
    }
    if (params.p_internal) {
        rep.interval_criterion_symbolic = all_le && kk >= *params.p_internal;
        if (!rep.interval_criterion_symbolic && !rep.non_interval_witness) {
            // The rule puts ratio p at every block top, beyond any realized depth.
            rep.non_interval_witness = blocks.back().k;
        }
    } else {
        rep.interval_criterion_symbolic = false;  // p_n = m + n is unbounded
        if (!rep.non_interval_witness) rep.non_interval_witness = blocks.back().k;
    }
    rep.measure_halving = true;
    for (const auto& f : rep.measure_block_factors)
        if (!(f < Exact(1, 2))) rep.measure_halving = false;
    return rep;
}

}  // namespace achsets
