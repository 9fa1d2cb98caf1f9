#pragma once

// Randomized brute-force oracle suite: independent reimplementations of the
// subsum, iterate, run and gap computations, cross-checked against the
// library on small random specs.

#include <algorithm>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "achsets/classify.hpp"
#include "achsets/intervals.hpp"
#include "achsets/series.hpp"

namespace achsets {

// 2^k enumeration, sorted and deduplicated.
inline std::vector<Exact> brute_force_subsums(const std::vector<Exact>& terms) {
    size_t k = terms.size();
    std::vector<Exact> out;
    out.reserve(static_cast<size_t>(1) << k);
    for (size_t mask = 0; mask < (static_cast<size_t>(1) << k); ++mask) {
        Exact sum(0);
        for (size_t i = 0; i < k; ++i)
            if (mask & (static_cast<size_t>(1) << i)) sum += terms[i];
        out.push_back(sum);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Left-to-right sweep over the sorted [f, f+r] intervals, coalescing
// whenever the next interval starts inside the current component.
inline std::vector<Interval> naive_components(std::vector<Exact> points, const Exact& r) {
    std::sort(points.begin(), points.end());
    std::vector<Interval> intervals;
    for (const Exact& f : points) {
        if (!intervals.empty() && f <= intervals.back().hi) {
            Exact hi = f + r;
            if (intervals.back().hi < hi) intervals.back().hi = hi;
        } else {
            intervals.push_back({f, f + r});
        }
    }
    return intervals;
}

// Direct scan for the longest eps-run stretch.
inline Exact naive_delta_eps(const std::vector<Exact>& values, const Exact& eps) {
    Exact best(0);
    size_t start = 0;
    for (size_t i = 1; i <= values.size(); ++i) {
        if (i == values.size() || values[i] - values[i - 1] > eps) {
            Exact stretch = values[i - 1] - values[start];
            if (stretch > best) best = stretch;
            start = i;
        }
    }
    return best;
}

struct OracleReport {
    bool pass = true;
    long cases_run = 0;
    std::string failure;       // description of the first mismatch
    std::string failing_case;  // serialized terms of the minimal failing case
};

namespace detail {

inline std::string terms_to_string(const std::vector<Exact>& terms) {
    std::ostringstream out;
    for (size_t i = 0; i < terms.size(); ++i) out << (i ? "," : "") << terms[i].str();
    return out.str();
}

inline bool oracle_one_case(const std::vector<Exact>& terms, std::mt19937_64& rng,
                            std::string& failure) {
    long k = static_cast<long>(terms.size());
    SpecPtr spec = make_spec(FiniteSpec{terms});

    // Doubling-merge subsums vs 2^k brute force.
    SortedSubsums f = initial_subsums(*spec, k);
    std::vector<Exact> brute = brute_force_subsums(terms);
    if (f.values != brute) {
        failure = "subsums mismatch";
        return false;
    }
    if (sigma_set(terms).values != brute) {
        failure = "sigma_set mismatch";
        return false;
    }

    // Iterates vs quadratic merge, per depth.
    for (long n = 1; n <= k; ++n) {
        SortedSubsums fn = initial_subsums(*spec, n);
        Exact rn = remainder(*spec, n);
        auto fast = iterate_from(fn, rn).components();
        auto slow = naive_components(fn.values, rn);
        if (fast.size() != slow.size()) {
            failure = "iterate component count mismatch at n=" + std::to_string(n);
            return false;
        }
        for (size_t i = 0; i < fast.size(); ++i)
            if (fast[i].lo != slow[i].lo || fast[i].hi != slow[i].hi) {
                failure = "iterate component mismatch at n=" + std::to_string(n);
                return false;
            }
    }

    // Gap structure: witnesses, principal maximality, union restoration.
    std::vector<Gap> all_gaps;
    for (long n = 1; n <= k; ++n) {
        Exact an = term(*spec, n), rn = remainder(*spec, n);
        std::vector<Gap> gaps = gaps_of_order(*spec, n);  // throws if witnesses fail
        bool has_gaps = rn < an;
        if (gaps.empty() != !has_gaps) {
            failure = "gap existence disagrees with r_n < a_n at n=" + std::to_string(n);
            return false;
        }
        if (has_gaps) {
            Exact principal_len = an - rn;
            bool principal_seen = false;
            for (const Gap& g : gaps) {
                if (g.is_principal) {
                    principal_seen = true;
                    if (g.left != rn || g.right != an) {
                        failure = "principal gap endpoints wrong at n=" + std::to_string(n);
                        return false;
                    }
                }
                if (g.length() > principal_len) {
                    failure = "gap longer than the principal gap at n=" + std::to_string(n);
                    return false;
                }
            }
            if (!principal_seen) {
                failure = "principal gap missing at n=" + std::to_string(n);
                return false;
            }
        }
        for (const Gap& g : gaps) all_gaps.push_back(g);
    }

    // Every gap certified dominating over the full (finite) series must be
    // principal.  The certification re-enumerates every order, so check only
    // the longest gaps overall.
    std::sort(all_gaps.begin(), all_gaps.end(),
              [](const Gap& a, const Gap& b) { return b.length() < a.length(); });
    if (all_gaps.size() > 8) all_gaps.resize(8);
    for (const Gap& g : all_gaps) {
        if (dominating_check(*spec, g, k).dominating && !g.is_principal) {
            failure = "non-principal dominating gap of order " + std::to_string(g.order);
            return false;
        }
    }

    // ||I_n|| identity and monotonicity (interval_evidence throws on violation).
    try {
        interval_evidence(*spec, k);
    } catch (const ParameterError& e) {
        failure = std::string("interval evidence: ") + e.what();
        return false;
    }

    // Delta_eps against the direct scan for a few random eps.
    for (int rep = 0; rep < 4; ++rep) {
        std::uniform_int_distribution<long> num(0, 40), den(1, 13);
        Exact eps(num(rng), den(rng));
        if (delta_epsilon(f, eps) != naive_delta_eps(f.values, eps)) {
            failure = "Delta_eps mismatch at eps=" + eps.str();
            return false;
        }
    }
    return true;
}

}  // namespace detail

inline OracleReport run_oracle_suite(unsigned long long seed, long cases) {
    if (cases < 1) throw ParameterError("cases must be >= 1");
    std::mt19937_64 rng(seed);
    OracleReport rep;
    for (long c = 0; c < cases; ++c) {
        std::uniform_int_distribution<long> len_dist(1, 14);
        long k = len_dist(rng);
        std::vector<Exact> terms;
        std::uniform_int_distribution<long> num(1, 24), den(1, 12);
        std::uniform_int_distribution<int> dup(0, 3);
        for (long i = 0; i < k; ++i) {
            if (!terms.empty() && dup(rng) == 0)
                terms.push_back(terms.back());  // duplicates stress dedup paths
            else
                terms.push_back(Exact(num(rng), den(rng)));
        }
        std::sort(terms.begin(), terms.end(), [](const Exact& a, const Exact& b) { return b < a; });
        terms.resize(static_cast<size_t>(k));
        std::string failure;
        if (!detail::oracle_one_case(terms, rng, failure)) {
            rep.pass = false;
            rep.failure = failure;
            rep.failing_case = detail::terms_to_string(terms);
            rep.cases_run = c + 1;
            return rep;
        }
        rep.cases_run = c + 1;
    }

    // Construction-rule identity: within each realized block of the
    // backward-induction Cantor set, a_i = (floor(m/2)-1) a_{i+1} + m r_top/2
    // across the induction range.
    for (long m : {7, 9}) {
        long p = m + 1;
        auto spec = make_tkmp_spec(m, p, Exact(1));
        const auto& tk = std::get<TkmpSpec>(spec->v);
        tk.real->realize_blocks(2);
        for (const auto& b : tk.real->blocks_snapshot()) {
            Exact r_top = tk.real->remainder(b.k);
            for (long i = b.k - b.j + 1; i <= b.k; ++i) {
                Exact lhs = Exact(1 - m / 2) * tk.real->term(i) + tk.real->term(i - 1);
                if (lhs != Exact(m) * r_top / Exact(2)) {
                    rep.pass = false;
                    rep.failure = "block induction identity fails at i=" + std::to_string(i) +
                                  " (m=" + std::to_string(m) + ")";
                    return rep;
                }
            }
        }
    }
    return rep;
}

}  // namespace achsets
