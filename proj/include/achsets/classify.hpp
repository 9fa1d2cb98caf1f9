#pragma once

// Classification of achievement sets: epsilon-run machinery, interval
// evidence rows, symbolic per-position ratio analysis, the semi-fast and
// minimal-gap (splitting) criteria, and the combined pipeline producing a
// verdict with a certificate kind.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "achsets/construct.hpp"
#include "achsets/exact.hpp"
#include "achsets/intervals.hpp"
#include "achsets/series.hpp"

namespace achsets {

// ---------------------------------------------------------------------------
// epsilon-runs

// Maximal run f_first..f_last of consecutive subsums with pairwise
// consecutive distances <= eps; stretch = f_last - f_first.
struct EpsilonRun {
    size_t first = 0, last = 0;
    Exact stretch;
};

inline std::vector<EpsilonRun> epsilon_runs(const SortedSubsums& f, const Exact& eps) {
    if (eps.sign() < 0) throw ParameterError("epsilon must be >= 0");
    std::vector<EpsilonRun> runs;
    size_t start = 0;
    for (size_t i = 1; i <= f.values.size(); ++i) {
        if (i == f.values.size() || f.values[i] - f.values[i - 1] > eps) {
            runs.push_back({start, i - 1, f.values[i - 1] - f.values[start]});
            start = i;
        }
    }
    return runs;
}

// Delta_eps F: the longest stretch over all eps-runs.
inline Exact delta_epsilon(const SortedSubsums& f, const Exact& eps) {
    Exact best(0);
    for (const auto& run : epsilon_runs(f, eps))
        if (run.stretch > best) best = run.stretch;
    return best;
}

// ---------------------------------------------------------------------------
// Interval evidence: ||I_n|| = Delta_{r_n} F_n + r_n, with r_n + Delta
// nonincreasing in n.

struct IntervalEvidenceRow {
    long n = 0;
    Exact r;
    Exact delta;    // Delta_{r_n} F_n
    Exact norm_In;  // largest component of I_n
};

inline std::vector<IntervalEvidenceRow> interval_evidence(const SeriesSpec& spec, long depth) {
    if (depth < 1) throw ParameterError("depth must be >= 1");
    std::vector<IntervalEvidenceRow> rows;
    SortedSubsums f;
    f.values = {Exact(0)};
    for (long n = 1; n <= depth; ++n) {
        detail::fold_in_term(f.values, term(spec, n), n - 1);
        f.depth = n;
        IntervalEvidenceRow row;
        row.n = n;
        row.r = remainder(spec, n);
        row.delta = delta_epsilon(f, row.r);
        row.norm_In = iterate_from(f, row.r).max_component_length();
        if (row.norm_In != row.delta + row.r)
            throw ParameterError("iterate-norm identity violated at n=" + std::to_string(n));
        if (!rows.empty() && row.delta + row.r > rows.back().delta + rows.back().r)
            throw ParameterError("||I_n|| fails to be nonincreasing at n=" + std::to_string(n));
        rows.push_back(std::move(row));
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Symbolic per-position comparison of a_n with r_n

enum class KakeyaPattern { AllLe, AllGt, EventuallyLe, EventuallyGt, Mixed };

namespace detail {

// Flags le[i] <=> a_{i+1} <= r_{i+1} for indices 1..H, where the flags with
// index >= persist_start repeat verbatim for the whole tail of the series.
struct KakeyaScheme {
    std::vector<bool> le;
    size_t persist_start = 0;  // 0-based into le
};

inline std::optional<KakeyaScheme> kakeya_scheme(const SeriesSpec& spec) {
    // Purely periodic specs: one period of flags, all persistent.
    if (auto prof = periodic_profile(spec)) {
        KakeyaScheme sch;
        long P = static_cast<long>(prof->block.size());
        for (long n = 1; n <= P; ++n)
            sch.le.push_back(term(spec, n) <= remainder(spec, n));
        sch.persist_start = 0;
        return sch;
    }
    return std::visit(
        [&](const auto& s) -> std::optional<KakeyaScheme> {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, GeneralizedFerens>) {
                if (!s.tail_ratio) return std::nullopt;
                // Flags in consecutive tail blocks coincide: a and r both
                // scale by the tail ratio.  Inspect the realized blocks plus
                // one full tail block.
                long K = 0;
                for (const auto& b : s.blocks) K += b.k;
                long H = K + s.blocks.back().k;
                KakeyaScheme sch;
                for (long n = 1; n <= H; ++n)
                    sch.le.push_back(term(spec, n) <= remainder(spec, n));
                sch.persist_start = static_cast<size_t>(K);
                return sch;
            } else if constexpr (std::is_same_v<T, SemiFastSpec>) {
                if (!s.tail_ratio) return std::nullopt;
                long count = 0;
                for (const auto& [val, mult] : s.levels) {
                    (void)val;
                    count += mult;
                }
                long H = count + s.tail_mult;
                KakeyaScheme sch;
                for (long n = 1; n <= H; ++n)
                    sch.le.push_back(term(spec, n) <= remainder(spec, n));
                sch.persist_start = static_cast<size_t>(count);
                return sch;
            } else if constexpr (std::is_same_v<T, PrefixThenTail>) {
                auto inner = kakeya_scheme(*s.tail);
                if (!inner) return std::nullopt;
                KakeyaScheme sch;
                long len = static_cast<long>(s.prefix.size());
                for (long n = 1; n <= len; ++n)
                    sch.le.push_back(term(spec, n) <= remainder(spec, n));
                for (bool b : inner->le) sch.le.push_back(b);
                sch.persist_start = static_cast<size_t>(len) + inner->persist_start;
                return sch;
            } else if constexpr (std::is_same_v<T, TkmpSpec>) {
                // Every construction ratio exceeds 1 (block tops are p_n >= m > 6,
                // boundary ratios are m-3 and m-1/2, and the induction keeps
                // q > 1); verify the realized prefix exactly.
                s.real->realize_blocks(1);
                long top = s.real->blocks_snapshot().back().k;
                KakeyaScheme sch;
                for (long n = 1; n <= top; ++n) {
                    if (!(s.real->ratio(n) > Exact(1)))
                        throw ParameterError("construction ratio not > 1 at n=" +
                                             std::to_string(n));
                    sch.le.push_back(false);
                }
                sch.persist_start = 0;
                return sch;
            } else {
                return std::nullopt;
            }
        },
        spec.v);
}

}  // namespace detail

inline std::optional<KakeyaPattern> symbolic_kakeya(const SeriesSpec& spec) {
    auto sch = detail::kakeya_scheme(spec);
    if (!sch) return std::nullopt;
    bool tail_le = true, tail_gt = true;
    for (size_t i = sch->persist_start; i < sch->le.size(); ++i)
        (sch->le[i] ? tail_gt : tail_le) = false;
    bool head_le = true, head_gt = true;
    for (size_t i = 0; i < sch->persist_start; ++i) (sch->le[i] ? head_gt : head_le) = false;
    if (tail_le && head_le) return KakeyaPattern::AllLe;
    if (tail_gt && head_gt) return KakeyaPattern::AllGt;
    if (tail_le) return KakeyaPattern::EventuallyLe;
    if (tail_gt) return KakeyaPattern::EventuallyGt;
    return KakeyaPattern::Mixed;
}

// ---------------------------------------------------------------------------
// Semi-fast criterion: values alpha_1 > alpha_2 > ... with multiplicities,
// each value exceeding the total sum of all strictly smaller terms.

struct SemiFastCertificate {
    std::vector<std::pair<Exact, long>> levels;  // realized value/multiplicity rows
    bool tail_checked = false;                   // geometric tail verified symbolically
    std::string note;
};

inline std::optional<SemiFastCertificate> semi_fast_check(const SeriesSpec& spec) {
    if (const auto* sf = std::get_if<SemiFastSpec>(&spec.v)) {
        SemiFastCertificate cert;
        long consumed = 0;
        Exact prev;
        for (size_t j = 0; j < sf->levels.size(); ++j) {
            const auto& [val, mult] = sf->levels[j];
            if (val.sign() <= 0 || mult < 1) return std::nullopt;
            if (j > 0 && !(val < prev)) return std::nullopt;
            consumed += mult;
            // Total of everything strictly smaller than val.
            if (!(val > remainder(spec, consumed))) return std::nullopt;
            cert.levels.push_back({val, mult});
            prev = val;
        }
        if (sf->tail_ratio) {
            // In the tail the condition is scale-invariant:
            // alpha > N alpha rho / (1 - rho).
            Exact lhs(1);
            Exact rhs = geometric_tail(Exact(sf->tail_mult), *sf->tail_ratio, 0);
            if (!(lhs > rhs)) return std::nullopt;
            cert.tail_checked = true;
        }
        cert.note = "each value exceeds the sum of all smaller terms";
        return cert;
    }
    // Strictly fast specs are semi-fast with trivial multiplicities.
    if (symbolic_kakeya(spec) == KakeyaPattern::AllGt) {
        SemiFastCertificate cert;
        cert.tail_checked = true;
        cert.note = "every term exceeds its remainder";
        return cert;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Splitting witnesses: indices n with r_n < delta(F_n).  Each witness splits
// every component of I_n; infinitely many force a Cantor-type set.

inline std::vector<long> rozbicie_witnesses(const SeriesSpec& spec, long depth) {
    std::vector<long> out;
    SortedSubsums f;
    f.values = {Exact(0)};
    for (long n = 1; n <= depth; ++n) {
        detail::fold_in_term(f.values, term(spec, n), n - 1);
        f.depth = n;
        Exact r_hi = remainder_bounds(spec, n).second;
        if (r_hi < delta_min_gap(f)) out.push_back(n);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Pipeline

enum class Verdict { Interval, MultiInterval, Cantor, Cantorval, FiniteSet, Unknown };

enum class CertificateKind {
    SymbolicKakeya,       // per-position a_n vs r_n pattern, valid for all n
    SymbolicFast,         // a_n > r_n for all n
    SemiFast,             // value/multiplicity domination
    GFConditions,         // the two block-family inequalities
    SufficientCantorval,  // integer-run sufficient test for multigeometric specs
    DeltaEvidence,        // stabilized positive Delta with recurring gaps (bounded depth)
    RozbicieWitness,      // recurring splitting witnesses (bounded depth)
    FiniteList,
    None,
};

struct ClassificationRow {
    long n = 0;
    Exact a;
    Exact r_lo, r_hi;             // degenerate unless only a bracket is known
    Exact q_lower;                // a_n / r_hi  (lower bound on a_n / r_n)
    std::optional<Exact> p_ratio; // a_n / r_{n+1} when exact
    Exact delta_fn;               // delta(F_n)
    Exact delta_run;              // Delta_{r_hi} F_n
    long components = 0;          // components of I_n
};

struct ClassificationReport {
    Verdict verdict = Verdict::Unknown;
    CertificateKind certificate = CertificateKind::None;
    long depth = 0;
    bool evidence_only = false;
    std::vector<ClassificationRow> rows;
    std::vector<long> split_witnesses;
    std::string note;
};

inline std::vector<ClassificationRow> classification_rows(const SeriesSpec& spec, long depth) {
    std::vector<ClassificationRow> rows;
    SortedSubsums f;
    f.values = {Exact(0)};
    for (long n = 1; n <= depth; ++n) {
        detail::fold_in_term(f.values, term(spec, n), n - 1);
        f.depth = n;
        ClassificationRow row;
        row.n = n;
        row.a = term(spec, n);
        auto [lo, hi] = remainder_bounds(spec, n);
        row.r_lo = lo;
        row.r_hi = hi;
        row.q_lower = hi.sign() > 0 ? row.a / hi : Exact(0);
        auto [nlo, nhi] = remainder_bounds(spec, n + 1);
        if (nlo == nhi && nhi.sign() > 0) row.p_ratio = row.a / nhi;
        row.delta_fn = delta_min_gap(f);
        row.delta_run = delta_epsilon(f, hi);
        row.components = static_cast<long>(iterate_from(f, hi).components().size());
        rows.push_back(std::move(row));
    }
    return rows;
}

inline ClassificationReport classify(const SeriesSpec& spec, long depth = 10) {
    if (depth < 3) throw ParameterError("classification depth must be >= 3");
    ClassificationReport rep;
    rep.depth = depth;

    if (is_finite_series(spec)) {
        rep.verdict = Verdict::FiniteSet;
        rep.certificate = CertificateKind::FiniteList;
        return rep;
    }
    check_terms(spec, depth);
    rep.rows = classification_rows(spec, depth);
    rep.split_witnesses = rozbicie_witnesses(spec, depth);

    if (auto pattern = symbolic_kakeya(spec)) {
        switch (*pattern) {
            case KakeyaPattern::AllLe:
                rep.verdict = Verdict::Interval;
                rep.certificate = CertificateKind::SymbolicKakeya;
                return rep;
            case KakeyaPattern::EventuallyLe:
                rep.verdict = Verdict::MultiInterval;
                rep.certificate = CertificateKind::SymbolicKakeya;
                return rep;
            case KakeyaPattern::AllGt:
                rep.verdict = Verdict::Cantor;
                rep.certificate = CertificateKind::SymbolicFast;
                return rep;
            case KakeyaPattern::EventuallyGt:
                rep.verdict = Verdict::Cantor;
                rep.certificate = CertificateKind::SymbolicKakeya;
                rep.note = "a tail of the series is fast; finitely many translates keep "
                           "the set nowhere dense and perfect";
                return rep;
            case KakeyaPattern::Mixed:
                break;  // gaps recur; interior is the open question
        }
    }

    if (auto cert = semi_fast_check(spec)) {
        rep.verdict = Verdict::Cantor;
        rep.certificate = CertificateKind::SemiFast;
        rep.note = cert->note;
        return rep;
    }

    if (const auto* gf = std::get_if<GeneralizedFerens>(&spec.v)) {
        if (gf->tail_ratio) {
            GFParameters params;
            params.blocks = gf->blocks;
            params.tail_ratio = gf->tail_ratio;
            if (gf_conditions(params, static_cast<long>(gf->blocks.size())).all_pass()) {
                rep.verdict = Verdict::Cantorval;
                rep.certificate = CertificateKind::GFConditions;
                return rep;
            }
        }
    }

    if (const auto* mg = std::get_if<Multigeometric>(&spec.v)) {
        if (mg->q.is_rational()) {
            BigInt scale = 1;
            bool rational = true;
            for (const auto& li : mg->l) {
                if (!li.is_rational()) {
                    rational = false;
                    break;
                }
                scale = boost::multiprecision::lcm(scale, denominator(li.as_rational()));
            }
            if (rational) {
                std::vector<long> ints;
                bool fits = true;
                for (const auto& li : mg->l) {
                    BigRat v = li.as_rational() * scale;
                    BigInt num = numerator(v);
                    if (num > 1000000) {
                        fits = false;
                        break;
                    }
                    ints.push_back(num.convert_to<long>());
                }
                if (fits) {
                    try {
                        auto res = sufficient_cantorval_check(ints, mg->q);
                        if (res.verdict == CantorvalTestVerdict::Cantorval) {
                            rep.verdict = Verdict::Cantorval;
                            rep.certificate = CertificateKind::SufficientCantorval;
                            return rep;
                        }
                    } catch (const ParameterError&) {
                        // difference condition fails; fall through to evidence
                    }
                }
            }
        }
    }

    // Bounded-depth evidence.  "Stabilized" Delta: every value in the last
    // third of the rows is positive, and the nonincreasing functional
    // Delta + r drops across that window by less than half the final Delta.
    // (The raw Delta values oscillate within the block period while
    // converging, so exact equality across the window is too strict.)
    long window = (depth + 2) / 3;
    const Exact& last_delta = rep.rows.back().delta_run;
    auto norm_at = [&](long n) {
        const auto& row = rep.rows[static_cast<size_t>(n - 1)];
        return row.delta_run + row.r_hi;
    };
    bool stabilized = true;
    for (long n = depth - window + 1; n <= depth; ++n)
        if (rep.rows[static_cast<size_t>(n - 1)].delta_run.sign() <= 0) stabilized = false;
    if (stabilized &&
        !(Exact(2) * (norm_at(depth - window + 1) - norm_at(depth)) < last_delta))
        stabilized = false;
    bool gaps_recur = false;
    for (long n = depth / 2 + 1; n <= depth; ++n)
        if (rep.rows[static_cast<size_t>(n - 1)].q_lower > Exact(1)) gaps_recur = true;
    if (stabilized && last_delta.sign() > 0 && gaps_recur) {
        rep.verdict = Verdict::Cantorval;
        rep.certificate = CertificateKind::DeltaEvidence;
        rep.evidence_only = true;
        rep.note = "positive stabilized Delta with recurring gaps at depth " +
                   std::to_string(depth);
        return rep;
    }
    // Splitting witnesses recur once per period on periodic specs, so the
    // count threshold scales with the period; non-periodic specs fall back
    // to demanding a third of all depths.
    auto prof = periodic_profile(spec);
    long tail_span = prof ? std::max<long>(static_cast<long>(prof->block.size()), 3) : 3;
    long needed = prof ? 2 : window;
    long recent = 0;
    for (long w : rep.split_witnesses)
        if (w > depth - tail_span) ++recent;
    if (static_cast<long>(rep.split_witnesses.size()) >= needed && recent > 0) {
        rep.verdict = Verdict::Cantor;
        rep.certificate = CertificateKind::RozbicieWitness;
        rep.evidence_only = true;
        rep.note = "recurring splitting witnesses at depth " + std::to_string(depth);
        return rep;
    }
    rep.verdict = Verdict::Unknown;
    rep.certificate = CertificateKind::None;
    return rep;
}

inline ClassificationReport classify(const SpecPtr& spec, long depth = 10) {
    return classify(*spec, depth);
}

// Ratio-only classification: symbolic verdict when the closed form decides
// a_n vs r_n for every n, otherwise bounded-depth flags with verdict Unknown.
inline ClassificationReport kakeya_classify(const SeriesSpec& spec, long depth) {
    if (depth < 1) throw ParameterError("depth must be >= 1");
    ClassificationReport rep;
    rep.depth = depth;
    if (is_finite_series(spec)) {
        rep.verdict = Verdict::FiniteSet;
        rep.certificate = CertificateKind::FiniteList;
        return rep;
    }
    rep.rows = classification_rows(spec, depth);
    if (auto pattern = symbolic_kakeya(spec)) {
        switch (*pattern) {
            case KakeyaPattern::AllLe:
                rep.verdict = Verdict::Interval;
                rep.certificate = CertificateKind::SymbolicKakeya;
                return rep;
            case KakeyaPattern::EventuallyLe:
                rep.verdict = Verdict::MultiInterval;
                rep.certificate = CertificateKind::SymbolicKakeya;
                return rep;
            case KakeyaPattern::AllGt:
                rep.verdict = Verdict::Cantor;
                rep.certificate = CertificateKind::SymbolicFast;
                return rep;
            case KakeyaPattern::EventuallyGt:
                rep.verdict = Verdict::Cantor;
                rep.certificate = CertificateKind::SymbolicKakeya;
                return rep;
            case KakeyaPattern::Mixed:
                rep.note = "gaps recur and so do interval-side indices; the ratio "
                           "test alone does not classify";
                break;
        }
    }
    rep.verdict = Verdict::Unknown;
    rep.certificate = CertificateKind::None;
    return rep;
}

}  // namespace achsets
