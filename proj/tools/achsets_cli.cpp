// Command-line front end: classify specs, run the constructions, sum and
// decomposition experiments, render iterates and run the oracle suite.
// Exit codes: 0 success, 2 parameter/input error, 3 resource cap.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "achsets/classify.hpp"
#include "achsets/construct.hpp"
#include "achsets/json_io.hpp"
#include "achsets/oracle.hpp"
#include "achsets/render.hpp"
#include "achsets/series.hpp"
#include "achsets/sumdecomp.hpp"

namespace {

using namespace achsets;

SpecPtr load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open spec file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const Json::parse_error& e) {
        throw ParameterError(std::string("malformed spec JSON: ") + e.what());
    }
    return spec_from_json(j);
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        if (text.empty() || text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw ParameterError("cannot write output file: " + out_path);
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact-arithmetic toolkit for achievement sets of convergent series"};
    app.require_subcommand(1);

    std::string spec_path, out_path, format = "json";
    long depth = 10, k = 2, stages = 4, blocks = 3;

    auto* c_classify = app.add_subcommand("classify", "Classify the achievement set of a spec");
    c_classify->add_option("--spec", spec_path, "spec JSON file")->required();
    c_classify->add_option("--depth", depth, "evidence depth");
    c_classify->add_option("--out", out_path, "output file (default stdout)");

    auto* c_construct = app.add_subcommand("construct", "Run a series construction");
    c_construct->require_subcommand(1);
    long tk_m = 7;
    std::string tk_p = "8";
    std::string tk_s1 = "1";
    auto* c_tkmp = c_construct->add_subcommand("tkmp", "Backward-induction Cantor set");
    c_tkmp->add_option("--m", tk_m, "m >= 2")->required();
    c_tkmp->add_option("--p", tk_p, "p >= m, or 'inf'");
    c_tkmp->add_option("--s1", tk_s1, "scale S1 (exact number)");
    c_tkmp->add_option("--blocks", blocks, "blocks to realize");
    c_tkmp->add_option("--out", out_path, "output file");

    long gf_blocks = 4;
    std::string gf_m = "2", gf_c = "5/4", gf_alpha = "5/8", gf_q1 = "1";
    auto* c_gf = c_construct->add_subcommand("gf", "Block-family Cantorval series");
    c_gf->add_option("--m", gf_m, "m_n: constant, or comma list (last value repeats)");
    c_gf->add_option("--c", gf_c, "c_n: constant exact number, or comma list");
    c_gf->add_option("--alpha", gf_alpha, "alpha = sup c_n/m_n (exact, in (0,1))");
    c_gf->add_option("--q1", gf_q1, "first block scale");
    c_gf->add_option("--blocks", gf_blocks, "number of blocks");
    c_gf->add_option("--out", out_path, "output file");

    long kc_k = 1;
    auto* c_kcopies = c_construct->add_subcommand("kcopies", "k-fold-sum Cantorval parameters");
    c_kcopies->add_option("--k", kc_k, "number of copies")->required();
    c_kcopies->add_option("--out", out_path, "output file");

    auto* c_sum = app.add_subcommand("sum", "k-fold algebraic sum type experiment");
    c_sum->add_option("--spec", spec_path, "spec JSON file")->required();
    c_sum->add_option("--k", k, "number of copies")->required();
    c_sum->add_option("--depth", depth, "evidence depth");
    c_sum->add_option("--out", out_path, "output file");

    std::string mode = "conditions";
    auto* c_dec = app.add_subcommand("decompose", "Decomposition procedures and criteria");
    c_dec->add_option("--spec", spec_path, "spec JSON file")->required();
    c_dec->add_option("--mode", mode, "conditions | alternating | split | cantorval-interval")
        ->check(CLI::IsMember({"conditions", "alternating", "split", "cantorval-interval"}));
    c_dec->add_option("--k", k, "parts / copies");
    c_dec->add_option("--depth", depth, "check depth");
    c_dec->add_option("--stages", stages, "construction stages");
    c_dec->add_option("--out", out_path, "output file");

    auto* c_render = app.add_subcommand("render", "Render the iterate tower");
    c_render->add_option("--spec", spec_path, "spec JSON file")->required();
    c_render->add_option("--depth", depth, "deepest iterate");
    c_render->add_option("--format", format, "svg | text")
        ->check(CLI::IsMember({"svg", "text"}));
    c_render->add_option("--out", out_path, "output file");

    unsigned long long seed = 1;
    long cases = 100;
    auto* c_oracle = app.add_subcommand("oracle", "Run the brute-force oracle suite");
    c_oracle->add_option("--seed", seed, "RNG seed");
    c_oracle->add_option("--cases", cases, "number of random cases");
    c_oracle->add_option("--out", out_path, "output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (c_classify->parsed()) {
            SpecPtr spec = load_spec(spec_path);
            Json j = report_envelope(*spec, depth);
            j["report"] = classification_to_json(classify(*spec, depth));
            emit(j.dump(2), out_path);
        } else if (c_tkmp->parsed()) {
            std::optional<long> p;
            if (tk_p != "inf") p = std::stol(tk_p);
            auto [spec, params] = tkmp_construct(tk_m, p, Exact::parse(tk_s1), blocks);
            Json j;
            j["version"] = kToolVersion;
            j["spec"] = spec_to_json(*spec);
            j["spec_hash"] = spec_hash(*spec);
            Json log;
            log["m_internal"] = params.m_internal;
            log["factor"] = params.factor;
            if (params.p_internal) log["p_internal"] = *params.p_internal;
            if (params.realization) {
                log["blocks"] = Json::array();
                for (const auto& b : params.realization->blocks_snapshot()) {
                    Json bj;
                    bj["index"] = b.index;
                    bj["top"] = b.k;
                    bj["j"] = b.j;
                    bj["t"] = b.t;
                    bj["p_n"] = b.p_n;
                    bj["S"] = b.S.str();
                    bj["measure_factor"] = b.miara_ratio.str();
                    Json ratios = Json::array();
                    long lo = b.index == 1 ? 1
                                           : params.realization->blocks_snapshot()
                                                     [static_cast<size_t>(b.index - 2)]
                                                         .k + 1;
                    for (long i = lo; i <= b.k; ++i)
                        ratios.push_back(params.realization->ratio(i).str());
                    bj["ratios"] = std::move(ratios);
                    log["blocks"].push_back(std::move(bj));
                }
            }
            j["construction_log"] = std::move(log);
            emit(j.dump(2), out_path);
        } else if (c_gf->parsed()) {
            auto parse_list = [&](const std::string& text) {
                std::vector<std::string> parts;
                size_t pos = 0;
                while (pos <= text.size()) {
                    size_t comma = text.find(',', pos);
                    if (comma == std::string::npos) comma = text.size();
                    parts.push_back(text.substr(pos, comma - pos));
                    pos = comma + 1;
                }
                return parts;
            };
            std::vector<long> m_seq;
            for (const auto& v : parse_list(gf_m)) m_seq.push_back(std::stol(v));
            std::vector<Exact> c_seq;
            for (const auto& v : parse_list(gf_c)) c_seq.push_back(Exact::parse(v));
            while (static_cast<long>(m_seq.size()) < gf_blocks) m_seq.push_back(m_seq.back());
            while (static_cast<long>(c_seq.size()) < gf_blocks) c_seq.push_back(c_seq.back());
            GFParameters params = gf_construct(m_seq, c_seq, Exact::parse(gf_alpha), gf_blocks,
                                               Exact::parse(gf_q1));
            SpecPtr spec = gf_series(params);
            Json j;
            j["version"] = kToolVersion;
            j["spec"] = spec_to_json(*spec);
            j["spec_hash"] = spec_hash(*spec);
            Json log;
            log["chosen_T"] = params.chosen_T;
            log["blocks"] = Json::array();
            for (const auto& b : params.blocks)
                log["blocks"].push_back({{"m", b.m}, {"k", b.k}, {"q", b.q.str()}});
            if (params.tail_ratio) log["tail_ratio"] = params.tail_ratio->str();
            auto cond = gf_conditions(params, gf_blocks);
            log["conditions_pass"] = cond.all_pass();
            j["construction_log"] = std::move(log);
            emit(j.dump(2), out_path);
        } else if (c_kcopies->parsed()) {
            KCopiesParameters p = sum_of_k_copies_parameters(kc_k);
            Json j;
            j["version"] = kToolVersion;
            j["k"] = p.k;
            j["m"] = p.m;
            j["q_lower"] = p.q_lower.str();
            j["q_upper"] = p.q_upper.str();
            emit(j.dump(2), out_path);
        } else if (c_sum->parsed()) {
            SpecPtr spec = load_spec(spec_path);
            SumTypeReport rep = sum_type_experiment(spec, k, depth);
            Json j = report_envelope(*spec, depth);
            j["k"] = k;
            j["classification"] = classification_to_json(rep.classification);
            j["interval_criterion"] = condition_to_json(rep.interval_criterion);
            j["max_ratio_seen"] = rep.max_ratio_seen.str();
            emit(j.dump(2), out_path);
        } else if (c_dec->parsed()) {
            SpecPtr spec = load_spec(spec_path);
            Json j = report_envelope(*spec, depth);
            if (mode == "conditions") {
                j["report"] = conditions_report_to_json(
                    decomposition_condition_report(*spec, depth, k));
            } else if (mode == "alternating") {
                j["report"] = decomposition_to_json(alternating_decomposition(spec, k, depth));
            } else if (mode == "split") {
                j["report"] =
                    decomposition_to_json(split_two_measure_zero_cantor(*spec, stages));
            } else {
                auto rep = cantorval_plus_cantor_interval(spec, depth, stages);
                Json r;
                r["principal_indices"] = rep.principal_indices;
                r["chosen_positions"] = rep.chosen_positions;
                r["multiplicities"] = rep.multiplicities;
                r["cantor_part"] = spec_to_json(*rep.cantor_part);
                r["stages_completed"] = rep.stages_completed;
                r["complete"] = rep.complete;
                r["semi_fast_verified"] = rep.semi_fast_verified;
                r["slow_check_failures"] = rep.slow_check_failures;
                r["slow_checked_to"] = rep.slow_checked_to;
                if (!rep.note.empty()) r["note"] = rep.note;
                j["report"] = std::move(r);
            }
            emit(j.dump(2), out_path);
        } else if (c_render->parsed()) {
            SpecPtr spec = load_spec(spec_path);
            emit(format == "svg" ? render_svg(*spec, depth) : render_text(*spec, depth),
                 out_path);
        } else if (c_oracle->parsed()) {
            OracleReport rep = run_oracle_suite(seed, cases);
            Json j;
            j["version"] = kToolVersion;
            j["seed"] = seed;
            j["cases_run"] = rep.cases_run;
            j["pass"] = rep.pass;
            if (!rep.pass) {
                j["failure"] = rep.failure;
                j["failing_case"] = rep.failing_case;
            }
            emit(j.dump(2), out_path);
            if (!rep.pass) return 1;
        }
    } catch (const ResourceError& e) {
        std::cerr << "resource error: " << e.what()
                  << " (largest completed depth: " << e.completed_depth << ")\n";
        return 3;
    } catch (const FieldMismatchError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const ParameterError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
