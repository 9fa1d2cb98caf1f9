// Acceptance checks: one line of output per criterion, nonzero exit if any
// fails.  All comparisons are exact.

#include <chrono>
#include <iostream>
#include <string>
#include <vector>

#include "achsets/classify.hpp"
#include "achsets/construct.hpp"
#include "achsets/oracle.hpp"
#include "achsets/series.hpp"
#include "achsets/sumdecomp.hpp"

using namespace achsets;

namespace {

int failures = 0;

void report(int n, const std::string& what, bool ok, double seconds) {
    std::cout << (ok ? "PASS" : "FAIL") << " " << n << ": " << what << "  ["
              << seconds << " s]\n";
    if (!ok) ++failures;
}

template <class Fn>
void criterion(int n, const std::string& what, Fn&& fn) {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
        ok = fn();
    } catch (const std::exception& e) {
        std::cout << "  exception: " << e.what() << "\n";
        ok = false;
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(n, what, ok, dt);
}

std::vector<Exact> descending(long hi, long lo, int copies) {
    std::vector<Exact> out;
    for (long v = hi; v >= lo; --v)
        for (int c = 0; c < copies; ++c) out.push_back(Exact(v));
    return out;
}

bool range_set(const SortedSubsums& s, long run_lo, long run_hi, long top) {
    std::vector<Exact> expected{Exact(0)};
    for (long v = run_lo; v <= run_hi; ++v) expected.push_back(Exact(v));
    expected.push_back(Exact(top));
    return s.values == expected;
}

}  // namespace

int main() {
    criterion(1, "subsum sets of the 7..14 list and its doubling", [] {
        return range_set(sigma_set(descending(14, 7, 1)), 7, 77, 84) &&
               range_set(sigma_set(descending(14, 7, 2)), 7, 161, 168);
    });

    criterion(2, "sufficient-test windows [1/71,1/13) and [1/155,1/25)", [] {
        std::vector<long> l1, l2;
        for (long v = 14; v >= 7; --v) {
            l1.push_back(v);
            l2.push_back(v);
            l2.push_back(v);
        }
        auto r1 = sufficient_cantorval_check(l1, Exact(1, 50));
        auto r2 = sufficient_cantorval_check(l2, Exact(1, 100));
        return r1.lower == Exact(1, 71) && r1.upper == Exact(1, 13) &&
               r1.verdict == CantorvalTestVerdict::Cantorval && r2.lower == Exact(1, 155) &&
               r2.upper == Exact(1, 25) && r2.verdict == CantorvalTestVerdict::Cantorval;
    });

    criterion(3, "classical verdicts: fast, interval-filling and the 3-2 set", [] {
        auto tern = classify(*make_spec(GeometricRatio{Exact(2), Exact(1, 3)}), 10);
        auto dy = classify(*make_spec(GeometricRatio{Exact(1), Exact(1, 2)}), 10);
        auto g = classify(*make_spec(Multigeometric{{Exact(3), Exact(2)}, Exact(1, 4)}), 10);
        bool delta_pos = true;
        for (size_t i = 3; i < g.rows.size(); ++i)
            if (g.rows[i].delta_run.sign() <= 0) delta_pos = false;
        return tern.verdict == Verdict::Cantor && tern.certificate == CertificateKind::SymbolicFast &&
               dy.verdict == Verdict::Interval && g.verdict == Verdict::Cantorval &&
               g.certificate == CertificateKind::DeltaEvidence && g.evidence_only && delta_pos;
    });

    criterion(4, "fold sums of the one-fifth series flip at k = 4", [] {
        auto spec = make_spec(GeometricRatio{Exact(1), Exact(1, 5)});
        for (long k = 1; k <= 5; ++k) {
            auto rep = sum_type_experiment(spec, k, 8);
            if (rep.interval_criterion.holds != (k >= 4)) return false;
            if (!rep.interval_criterion.symbolic) return false;
            if (rep.max_ratio_seen != Exact(4)) return false;
            if (k >= 4 && rep.classification.verdict != Verdict::Interval) return false;
            if (k < 4 && rep.classification.verdict == Verdict::Interval) return false;
        }
        return true;
    });

    criterion(5, "block-family pipeline: conditions and shrinking measure brackets", [] {
        GFParameters params = gf_construct(std::vector<long>(6, 2),
                                           std::vector<Exact>(6, Exact(5, 4)), Exact(5, 8), 6);
        if (!gf_conditions(params, 6).all_pass()) return false;
        Exact prev_width;
        bool first = true;
        for (long tb : {2L, 3L, 4L, 5L}) {
            auto b = gf_measure(params, tb);
            if (!(b.lambda_lo < b.lambda_hi) || b.lambda_lo.sign() <= 0) return false;
            if (b.interior_lo.sign() <= 0 || b.interior_lo > b.interior_hi) return false;
            Exact width = b.lambda_hi - b.lambda_lo;
            if (!first && !(width < prev_width)) return false;
            prev_width = width;
            first = false;
        }
        return true;
    });

    criterion(6, "growing-m construction keeps the block ratio above m/2", [] {
        std::vector<long> m_seq;
        std::vector<Exact> c_seq;
        for (long n = 1; n <= 8; ++n) {
            m_seq.push_back(n + 1);
            c_seq.push_back(Exact(3, 2));
        }
        GFParameters params = gf_construct(m_seq, c_seq, Exact(3, 4), 8);
        if (!gf_construct_invariants(params, c_seq)) return false;
        auto rows = gf_ratio_lower_bounds(params);
        for (size_t n = 0; n < rows.size(); ++n) {
            // The tail bound is strict, so lower_bound == m/2 still certifies
            // a ratio strictly above m/2.
            if (!rows[n].strict) return false;
            if (!(rows[n].lower_bound >= Exact(m_seq[n]) / Exact(2))) return false;
        }
        return true;
    });

    criterion(7, "backward-induction blocks and fold-sum predictions at m=7, p=8", [] {
        auto [spec, params] = tkmp_construct(7, 8, Exact(1), 3);
        (void)spec;
        auto& real = *params.realization;
        auto blocks = real.blocks_snapshot();
        if (blocks.size() != 3) return false;
        for (const auto& b : blocks) {
            if (real.ratio(b.k) != Exact(8)) return false;
            long lo = b.index == 1 ? 1 : blocks[static_cast<size_t>(b.index - 2)].k + 1;
            for (long i = lo; i <= b.k; ++i) {
                Exact q = real.ratio(i);
                if (!(q > Exact(1) && q <= Exact(8))) return false;
                if (real.remainder(i - 1) != real.remainder(i) * (Exact(1) + q)) return false;
            }
            if (b.index >= 2) {
                if (!(b.miara_ratio < Exact(1, 2))) return false;
                // Minimal boundary count: one fewer m - 1/2 ratio stays >= 1/2.
                if (b.t > 2 && b.miara_ratio * Exact(15, 14) < Exact(1, 2)) return false;
            }
            // In-block identity: (1 - floor(m/2)) a_i + a_{i-1} = m r_k / 2.
            Exact rhs = Exact(7) * real.remainder(b.k) / Exact(2);
            for (long i = b.k - b.j + 1; i <= b.k; ++i)
                if (Exact(1 - 3) * real.term(i) + real.term(i - 1) != rhs) return false;
        }
        auto s7 = tkmp_sum_type(params, 7);
        auto s8 = tkmp_sum_type(params, 8);
        return !s7.interval_criterion_symbolic && s7.non_interval_witness.has_value() &&
               s8.interval_criterion_symbolic;
    });

    criterion(8, "greedy split of the dyadic series into two thin parts", [] {
        auto dy = make_spec(GeometricRatio{Exact(1), Exact(1, 2)});
        auto rep = split_two_measure_zero_cantor(*dy, 5);
        if (!rep.conditions.at("measure_bound_decay").holds) return false;
        const auto& y = std::get<FiniteSpec>(rep.sub_specs[0]->v).terms;
        const auto& z = std::get<FiniteSpec>(rep.sub_specs[1]->v).terms;
        std::vector<Exact> combined = y;
        combined.insert(combined.end(), z.begin(), z.end());
        std::sort(combined.begin(), combined.end(),
                  [](const Exact& a, const Exact& b) { return b < a; });
        for (size_t i = 0; i < combined.size(); ++i)
            if (combined[i] != term(*dy, static_cast<long>(i) + 1)) return false;
        return combined.size() == rep.assignment.size();
    });

    criterion(9, "decomposition criteria on the three worked series", [] {
        // a_{2n-1} = a_{2n} = 1/2^n.
        auto paired = make_spec(Multigeometric{{Exact(1), Exact(1)}, Exact(1, 2)});
        auto rep = decomposition_condition_report(*paired, 12, 2);
        for (size_t i = 0; i < rep.q_ratios.size(); ++i)
            if (rep.q_ratios[i] != (i % 2 == 0 ? Exact(1, 3) : Exact(1, 2))) return false;
        auto alt = alternating_decomposition(paired, 2, 12);
        if (!alt.conditions.at("all_parts_interval_filling").holds) return false;
        if (!alt.conditions.at("all_parts_interval_filling").symbolic) return false;

        // (sqrt(2)/2)^n over the quadratic field.
        Exact q2 = Exact::sqrt_of(2) / Exact(2);
        auto surd_spec = make_spec(GeometricRatio{Exact(1), q2});
        auto srep = decomposition_condition_report(*surd_spec, 8, 2);
        for (const auto& qr : srep.q_ratios)
            if (qr != Exact(1) / (Exact::sqrt_of(2) + Exact(1))) return false;
        auto salt = alternating_decomposition(surd_spec, 2, 8);
        for (const auto& sub : salt.sub_specs) {
            auto prof = periodic_profile(*sub);
            if (!prof || prof->ratio != Exact(1, 2)) return false;
        }

        // The (1, 1, q; q^2) series at q = 14/25.
        Exact q(14, 25);
        if (!(Exact(4) * q * q + q - Exact(2) < Exact(0))) return false;
        if (!(Exact(2) * q.pow(3) + Exact(3) * q * q - q - Exact(1) < Exact(0))) return false;
        if (!(Exact(2) * q.pow(3) + Exact(2) * q * q - Exact(1) < Exact(0))) return false;
        auto mg = make_spec(Multigeometric{{Exact(1), Exact(1), q}, q * q});
        auto malt = alternating_decomposition(mg, 2, 12);
        return !malt.conditions.at("all_parts_interval_filling").holds &&
               !malt.conditions.at("all_parts_fast").holds;
    });

    criterion(10, "oracle suite, 200 random specs", [] {
        auto rep = run_oracle_suite(1, 200);
        if (!rep.pass)
            std::cout << "  oracle failure: " << rep.failure << " on {" << rep.failing_case
                      << "}\n";
        return rep.pass && rep.cases_run == 200;
    });

    if (failures) std::cout << failures << " criteria failed\n";
    return failures == 0 ? 0 : 1;
}
