#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "achsets/classify.hpp"

using namespace achsets;

namespace {
SpecPtr ternary() { return make_spec(GeometricRatio{Exact(2), Exact(1, 3)}); }
SpecPtr dyadic() { return make_spec(GeometricRatio{Exact(1), Exact(1, 2)}); }
SpecPtr gn() { return make_spec(Multigeometric{{Exact(3), Exact(2)}, Exact(1, 4)}); }

SortedSubsums four_points() {
    SortedSubsums f;
    f.values = {Exact(0), Exact(2), Exact(3), Exact(5)};
    return f;
}
}  // namespace

TEST_CASE("eps-runs partition the subsum list") {
    auto f = four_points();
    auto runs1 = epsilon_runs(f, Exact(1));
    REQUIRE(runs1.size() == 3);
    CHECK(runs1[0].stretch == Exact(0));
    CHECK(runs1[1].first == 1);
    CHECK(runs1[1].last == 2);
    CHECK(runs1[1].stretch == Exact(1));
    CHECK(runs1[2].stretch == Exact(0));

    auto runs2 = epsilon_runs(f, Exact(2));
    REQUIRE(runs2.size() == 1);
    CHECK(runs2[0].stretch == Exact(5));

    for (const auto& run : epsilon_runs(f, Exact(0))) CHECK(run.stretch == Exact(0));

    // Partition property: runs are contiguous and cover every index.
    size_t next = 0;
    for (const auto& run : runs1) {
        CHECK(run.first == next);
        next = run.last + 1;
    }
    CHECK(next == f.values.size());
}

TEST_CASE("longest stretch functional") {
    auto f = four_points();
    CHECK(delta_epsilon(f, Exact(1)) == Exact(1));
    SortedSubsums single;
    single.values = {Exact(0)};
    CHECK(delta_epsilon(single, Exact(100)) == Exact(0));

    std::vector<Exact> l;
    for (long v = 14; v >= 7; --v) l.push_back(Exact(v));
    CHECK(delta_epsilon(sigma_set(l), Exact(1)) == Exact(70));

    // Monotone in eps.
    Exact prev(0);
    for (long e = 0; e <= 5; ++e) {
        Exact cur = delta_epsilon(f, Exact(e));
        CHECK(cur >= prev);
        prev = cur;
    }
}

TEST_CASE("iterate-norm identity rows") {
    auto tern = interval_evidence(*ternary(), 8);
    REQUIRE(tern.size() == 8);
    for (const auto& row : tern) {
        CHECK(row.delta == Exact(0));
        CHECK(row.norm_In == row.r);
    }
    auto dy = interval_evidence(*dyadic(), 8);
    for (const auto& row : dy) CHECK(row.norm_In == Exact(1));
    auto g = interval_evidence(*gn(), 12);
    for (size_t i = 1; i < g.size(); ++i) {
        CHECK(g[i].delta.sign() > 0);
        CHECK(g[i].delta + g[i].r <= g[i - 1].delta + g[i - 1].r);
    }
}

TEST_CASE("per-position ratio schemes") {
    CHECK(symbolic_kakeya(*dyadic()) == KakeyaPattern::AllLe);
    CHECK(symbolic_kakeya(*ternary()) == KakeyaPattern::AllGt);
    CHECK(symbolic_kakeya(*make_spec(GeometricRatio{Exact(1), Exact(1, 5)})) ==
          KakeyaPattern::AllGt);
    CHECK(symbolic_kakeya(*gn()) == KakeyaPattern::Mixed);

    PrefixThenTail pt;
    pt.prefix = {Exact(10)};  // huge head term: a_1 > r_1, then an interval tail
    pt.tail = dyadic();
    CHECK(symbolic_kakeya(*make_spec(pt)) == KakeyaPattern::EventuallyLe);
    PrefixThenTail fast_tail;
    fast_tail.prefix = {Exact(1)};  // a_1 = r_1, then a fast tail
    fast_tail.tail = ternary();
    CHECK(symbolic_kakeya(*make_spec(fast_tail)) == KakeyaPattern::EventuallyGt);
    CHECK(kakeya_classify(*make_spec(fast_tail), 5).verdict == Verdict::Cantor);
    CHECK(kakeya_classify(*make_spec(pt), 5).verdict == Verdict::MultiInterval);
    PrefixThenTail pt2;
    pt2.prefix = {Exact(1, 2)};
    pt2.tail = dyadic();  // term 1/2 <= remainder 1: still an interval head
    CHECK(symbolic_kakeya(*make_spec(pt2)) == KakeyaPattern::AllLe);
}

TEST_CASE("ratio-only classification") {
    auto rep = kakeya_classify(*dyadic(), 6);
    CHECK(rep.verdict == Verdict::Interval);
    CHECK(rep.certificate == CertificateKind::SymbolicKakeya);
    auto rep2 = kakeya_classify(*ternary(), 6);
    CHECK(rep2.verdict == Verdict::Cantor);
    CHECK(rep2.certificate == CertificateKind::SymbolicFast);
    auto rep3 = kakeya_classify(*gn(), 6);
    CHECK(rep3.verdict == Verdict::Unknown);
    CHECK(!rep3.rows.empty());

    // Finite-depth flags agree with the symbolic claims.
    for (long n = 1; n <= 6; ++n) {
        CHECK(term(*dyadic(), n) <= remainder(*dyadic(), n));
        CHECK(term(*ternary(), n) > remainder(*ternary(), n));
    }
}

TEST_CASE("value-domination criterion") {
    SemiFastSpec good;
    good.levels = {{Exact(1, 10), 3}};
    good.tail_ratio = Exact(1, 10);
    good.tail_mult = 3;
    auto cert = semi_fast_check(*make_spec(good));
    REQUIRE(cert.has_value());
    CHECK(cert->tail_checked);

    SemiFastSpec bad;  // 1/2 must exceed 3/5 + tail, and does not
    bad.levels = {{Exact(1, 2), 1}, {Exact(1, 5), 3}};
    CHECK(!semi_fast_check(*make_spec(bad)).has_value());

    SemiFastSpec ok;  // 1/2 > 2/5: two copies of 1/5 stay below the 1/2 value
    ok.levels = {{Exact(1, 2), 1}, {Exact(1, 5), 2}};
    CHECK(semi_fast_check(*make_spec(ok)).has_value());

    // Fast specs are trivially semi-fast.
    CHECK(semi_fast_check(*ternary()).has_value());
    CHECK(!semi_fast_check(*dyadic()).has_value());
}

TEST_CASE("splitting witnesses") {
    auto w = rozbicie_witnesses(*ternary(), 8);
    REQUIRE(w.size() == 8);
    for (long n = 1; n <= 8; ++n) CHECK(w[static_cast<size_t>(n - 1)] == n);
    CHECK(rozbicie_witnesses(*dyadic(), 8).empty());  // equality case excluded
    CHECK(rozbicie_witnesses(*gn(), 8).empty());
}

TEST_CASE("pipeline verdicts on the classical specs") {
    auto dy = classify(*dyadic(), 8);
    CHECK(dy.verdict == Verdict::Interval);
    CHECK(dy.certificate == CertificateKind::SymbolicKakeya);
    CHECK(!dy.evidence_only);

    auto tern = classify(*ternary(), 8);
    CHECK(tern.verdict == Verdict::Cantor);
    CHECK(tern.certificate == CertificateKind::SymbolicFast);

    auto g = classify(*gn(), 10);
    CHECK(g.verdict == Verdict::Cantorval);
    CHECK(g.certificate == CertificateKind::DeltaEvidence);
    CHECK(g.evidence_only);

    std::vector<Exact> big;
    for (long v = 14; v >= 7; --v) big.push_back(Exact(v));
    auto d50 = classify(*make_spec(Multigeometric{big, Exact(1, 50)}), 6);
    CHECK(d50.verdict == Verdict::Cantorval);
    CHECK(d50.certificate == CertificateKind::SufficientCantorval);
    CHECK(!d50.evidence_only);

    FiniteSpec fin;
    fin.terms = {Exact(3), Exact(2)};
    CHECK(classify(*make_spec(fin), 4).verdict == Verdict::FiniteSet);
}

TEST_CASE("pipeline accepts a block construction through its conditions") {
    GFParameters params = gf_construct(std::vector<long>(4, 2), std::vector<Exact>(4, Exact(5, 4)),
                                       Exact(5, 8), 4);
    auto spec = gf_series(params);
    auto rep = classify(*spec, 6);
    CHECK(rep.verdict == Verdict::Cantorval);
    CHECK(rep.certificate == CertificateKind::GFConditions);
    CHECK(!rep.evidence_only);
}

TEST_CASE("report rows carry the exact ratio arrays") {
    auto rep = classify(*gn(), 10);
    REQUIRE(rep.rows.size() == 10);
    for (const auto& row : rep.rows) {
        CHECK(row.r_lo == row.r_hi);
        REQUIRE(row.p_ratio.has_value());
        CHECK(*row.p_ratio > row.q_lower);  // p_n > q_n always
        CHECK(row.delta_fn.sign() > 0);
    }
    // Positions within the period share their ratio: q_1 = q_3, q_2 = q_4, ...
    for (size_t i = 2; i < rep.rows.size(); ++i)
        CHECK(rep.rows[i].q_lower == rep.rows[i - 2].q_lower);
}
