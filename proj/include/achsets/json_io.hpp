#pragma once

// JSON (de)serialization for series specifications and reports.  Every
// numeric value is carried as an exact-number string ("p/q" or
// "p/q+r/s*sqrt(d)"); no floating point appears anywhere.

#include <json.hpp>

#include <cstdio>
#include <string>
#include <vector>

#include "achsets/classify.hpp"
#include "achsets/construct.hpp"
#include "achsets/exact.hpp"
#include "achsets/series.hpp"
#include "achsets/sumdecomp.hpp"

namespace achsets {

using Json = nlohmann::json;

inline constexpr const char* kToolVersion = "1.0.0";

inline Json to_json(const Exact& x) { return x.str(); }

inline Json spec_to_json(const SeriesSpec& spec) {
    return std::visit(
        [](const auto& s) -> Json {
            using T = std::decay_t<decltype(s)>;
            Json j;
            if constexpr (std::is_same_v<T, Multigeometric>) {
                j["variant"] = "multigeometric";
                for (const auto& li : s.l) j["l"].push_back(li.str());
                j["q"] = s.q.str();
            } else if constexpr (std::is_same_v<T, GeometricRatio>) {
                j["variant"] = "geometric";
                j["c"] = s.c.str();
                j["q"] = s.q.str();
            } else if constexpr (std::is_same_v<T, GeneralizedFerens>) {
                j["variant"] = "gf";
                j["blocks"] = Json::array();
                for (const auto& b : s.blocks)
                    j["blocks"].push_back({{"m", b.m}, {"k", b.k}, {"q", b.q.str()}});
                if (s.tail_ratio) j["tail_ratio"] = s.tail_ratio->str();
            } else if constexpr (std::is_same_v<T, SemiFastSpec>) {
                j["variant"] = "semifast";
                j["levels"] = Json::array();
                for (const auto& [val, mult] : s.levels)
                    j["levels"].push_back({{"value", val.str()}, {"count", mult}});
                if (s.tail_ratio) {
                    j["tail_ratio"] = s.tail_ratio->str();
                    j["tail_mult"] = s.tail_mult;
                }
            } else if constexpr (std::is_same_v<T, FiniteSpec>) {
                j["variant"] = "finite";
                j["terms"] = Json::array();
                for (const auto& t : s.terms) j["terms"].push_back(t.str());
            } else if constexpr (std::is_same_v<T, PrefixThenTail>) {
                j["variant"] = "prefix";
                j["prefix"] = Json::array();
                for (const auto& t : s.prefix) j["prefix"].push_back(t.str());
                j["tail"] = spec_to_json(*s.tail);
            } else if constexpr (std::is_same_v<T, MergeSpec>) {
                j["variant"] = "merge";
                j["a"] = spec_to_json(*s.a);
                j["b"] = spec_to_json(*s.b);
            } else if constexpr (std::is_same_v<T, RepeatSpec>) {
                j["variant"] = "repeat";
                j["inner"] = spec_to_json(*s.inner);
                j["k"] = s.k;
            } else if constexpr (std::is_same_v<T, TkmpSpec>) {
                j["variant"] = "tkmp";
                j["m"] = s.m;
                if (s.p)
                    j["p"] = *s.p;
                else
                    j["p"] = nullptr;
                j["s1"] = s.S1.str();
            } else {
                throw ParameterError("rule-backed spec '" + s.label + "' is not serializable");
            }
            return j;
        },
        spec.v);
}

inline SpecPtr spec_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("variant") || !j["variant"].is_string())
        throw ParameterError("spec JSON must be an object with a 'variant' string");
    auto num = [](const Json& v) {
        if (!v.is_string()) throw ParameterError("exact numbers must be JSON strings");
        return Exact::parse(v.get<std::string>());
    };
    const std::string variant = j["variant"];
    if (variant == "multigeometric") {
        Multigeometric s;
        for (const auto& v : j.at("l")) s.l.push_back(num(v));
        s.q = num(j.at("q"));
        return make_spec(std::move(s));
    }
    if (variant == "geometric")
        return make_spec(GeometricRatio{num(j.at("c")), num(j.at("q"))});
    if (variant == "gf") {
        GeneralizedFerens s;
        for (const auto& b : j.at("blocks"))
            s.blocks.push_back({b.at("m").get<long>(), b.at("k").get<long>(), num(b.at("q"))});
        if (j.contains("tail_ratio")) s.tail_ratio = num(j["tail_ratio"]);
        return make_spec(std::move(s));
    }
    if (variant == "semifast") {
        SemiFastSpec s;
        for (const auto& lvl : j.at("levels"))
            s.levels.push_back({num(lvl.at("value")), lvl.at("count").get<long>()});
        if (j.contains("tail_ratio")) {
            s.tail_ratio = num(j["tail_ratio"]);
            s.tail_mult = j.value("tail_mult", 1L);
        }
        return make_spec(std::move(s));
    }
    if (variant == "finite") {
        FiniteSpec s;
        for (const auto& v : j.at("terms")) s.terms.push_back(num(v));
        return make_spec(std::move(s));
    }
    if (variant == "prefix") {
        PrefixThenTail s;
        for (const auto& v : j.at("prefix")) s.prefix.push_back(num(v));
        s.tail = spec_from_json(j.at("tail"));
        return make_spec(std::move(s));
    }
    if (variant == "merge")
        return merge_union(spec_from_json(j.at("a")), spec_from_json(j.at("b")));
    if (variant == "repeat")
        return repeat(spec_from_json(j.at("inner")), j.at("k").get<long>());
    if (variant == "tkmp") {
        std::optional<long> p;
        if (j.contains("p") && !j["p"].is_null()) p = j["p"].get<long>();
        return make_tkmp_spec(j.at("m").get<long>(), p, num(j.at("s1")));
    }
    throw ParameterError("unknown spec variant '" + variant + "'");
}

// Canonical digest: FNV-1a over the sorted-key dump.
inline std::string spec_hash(const SeriesSpec& spec) {
    std::string dump = spec_to_json(spec).dump();
    unsigned long long h = 1469598103934665603ULL;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", h);
    return buf;
}

// ---------------------------------------------------------------------------
// Report serialization

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Interval: return "Interval";
        case Verdict::MultiInterval: return "MultiInterval";
        case Verdict::Cantor: return "Cantor";
        case Verdict::Cantorval: return "Cantorval";
        case Verdict::FiniteSet: return "FiniteSet";
        default: return "Unknown";
    }
}

inline const char* certificate_name(CertificateKind c) {
    switch (c) {
        case CertificateKind::SymbolicKakeya: return "SymbolicKakeya";
        case CertificateKind::SymbolicFast: return "SymbolicFast";
        case CertificateKind::SemiFast: return "SemiFast";
        case CertificateKind::GFConditions: return "GFConditions";
        case CertificateKind::SufficientCantorval: return "SufficientCantorval";
        case CertificateKind::DeltaEvidence: return "DeltaEvidence";
        case CertificateKind::RozbicieWitness: return "RozbicieWitness";
        case CertificateKind::FiniteList: return "FiniteList";
        default: return "None";
    }
}

inline Json classification_to_json(const ClassificationReport& rep) {
    Json j;
    j["verdict"] = verdict_name(rep.verdict);
    j["certificate"] = certificate_name(rep.certificate);
    j["depth"] = rep.depth;
    j["evidence_only"] = rep.evidence_only;
    if (!rep.note.empty()) j["note"] = rep.note;
    j["rows"] = Json::array();
    for (const auto& row : rep.rows) {
        Json r;
        r["n"] = row.n;
        r["a"] = row.a.str();
        r["r_lower"] = row.r_lo.str();
        r["r_upper"] = row.r_hi.str();
        r["q_lower"] = row.q_lower.str();
        if (row.p_ratio) r["p"] = row.p_ratio->str();
        r["delta_F"] = row.delta_fn.str();
        r["Delta_run"] = row.delta_run.str();
        r["components"] = row.components;
        j["rows"].push_back(std::move(r));
    }
    j["split_witnesses"] = rep.split_witnesses;
    return j;
}

inline Json condition_to_json(const ConditionStatus& st) {
    Json j;
    j["symbolic"] = st.symbolic;
    j["holds"] = st.holds;
    if (st.first_failure) j["first_failure"] = *st.first_failure;
    if (!st.failures.empty()) j["failures"] = st.failures;
    if (!st.indeterminate.empty()) j["indeterminate"] = st.indeterminate;
    if (st.witness_lhs) j["witness_lhs"] = st.witness_lhs->str();
    if (st.witness_rhs) j["witness_rhs"] = st.witness_rhs->str();
    return j;
}

// Run-length encoding of the per-index part tags.
inline Json assignment_to_json(const std::vector<int>& tags) {
    Json runs = Json::array();
    size_t i = 0;
    while (i < tags.size()) {
        size_t j = i;
        while (j < tags.size() && tags[j] == tags[i]) ++j;
        runs.push_back({{"tag", tags[i]}, {"count", j - i}});
        i = j;
    }
    return runs;
}

inline Json decomposition_to_json(const DecompositionReport& rep) {
    Json j;
    j["assignment"] = assignment_to_json(rep.assignment);
    j["sub_specs"] = Json::array();
    for (const auto& s : rep.sub_specs) j["sub_specs"].push_back(spec_to_json(*s));
    j["per_sub_verdicts"] = Json::array();
    for (const auto& v : rep.per_sub_verdicts) j["per_sub_verdicts"].push_back(classification_to_json(v));
    j["conditions"] = Json::object();
    for (const auto& [name, st] : rep.conditions) j["conditions"][name] = condition_to_json(st);
    j["q"] = Json::array();
    for (const auto& q : rep.q_ratios) j["q"].push_back(q.str());
    j["p"] = Json::array();
    for (const auto& p : rep.p_ratios) j["p"].push_back(p.str());
    j["exact_parts"] = rep.exact_parts;
    if (!rep.note.empty()) j["note"] = rep.note;
    return j;
}

inline Json conditions_report_to_json(const DecompositionConditions& rep) {
    Json j;
    j["depth"] = rep.depth;
    j["k"] = rep.k;
    j["conditions"] = Json::object();
    for (const auto& [name, st] : rep.conditions) j["conditions"][name] = condition_to_json(st);
    j["q"] = Json::array();
    for (const auto& q : rep.q_ratios) j["q"].push_back(q.str());
    j["p"] = Json::array();
    for (const auto& p : rep.p_ratios) j["p"].push_back(p.str());
    j["locker"] = rep.locker;
    return j;
}

// Common envelope for every CLI report.
inline Json report_envelope(const SeriesSpec& spec, long depth) {
    Json j;
    j["version"] = kToolVersion;
    j["spec_hash"] = spec_hash(spec);
    j["depth"] = depth;
    return j;
}

}  // namespace achsets
