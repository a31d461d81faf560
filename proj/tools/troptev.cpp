// troptev: exact tropical Tevelev degrees of Hirzebruch surfaces.
//
// Subcommands: compute, enumerate, verify, sweep, identities, compare,
// render, conjecture. Every command is deterministic given its flags and
// seed; results carry a manifest with the command line, seed, version,
// timing and a digest of the payload. Counts are serialized as decimal
// strings, never through 64-bit fields.

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "troptev/enumeration.hpp"
#include "troptev/exact.hpp"
#include "troptev/formula.hpp"
#include "troptev/model.hpp"
#include "troptev/oracle.hpp"
#include "troptev/render.hpp"
#include "troptev/threading.hpp"
#include "troptev/version.hpp"

using namespace troptev;

namespace {

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    long ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - start)
            .count();
    }
};

std::string fnv1a(const std::string& s) {
    unsigned long long h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", h);
    return buf;
}

json manifest(const std::string& command, const std::vector<std::string>& argv,
              unsigned long seed, const Timer& timer, const json& payload) {
    return json{{"command", command},
                {"argv", argv},
                {"seed", seed},
                {"version", kVersion},
                {"timing_ms", timer.ms()},
                {"digest", "fnv1a:" + fnv1a(payload.dump())}};
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw std::runtime_error("cannot open " + path);
    return json::parse(in);
}

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << std::endl;
    } else {
        std::ofstream out(out_path);
        if (!out.good()) throw std::runtime_error("cannot write " + out_path);
        out << j.dump(2) << std::endl;
    }
}

ContactData load_instance(const std::string& path) {
    return validate(raw_from_json(load_json(path)));
}

json formula_result_json(const formula::FormulaResult& r) {
    json factors;
    json per = json::array();
    for (const auto& f : r.per_divisor) per.push_back(f.get_str());
    factors["per_divisor"] = per;
    factors["a_exponent"] = r.a_exponent;
    factors["binomial_top"] = r.binomial_top;
    factors["binomial_bottom"] = r.binomial_bottom;
    factors["binomial"] = r.binomial.get_str();
    if (r.zero_reason == formula::ZeroReason::None) factors["a_power"] = r.a_power.get_str();
    return json{{"value", r.value.get_str()},
                {"zero_reason", formula::zero_reason_name(r.zero_reason)},
                {"factors", factors}};
}

json predicted_json(const formula::PredictedCounts& pc) {
    return json{{"type_a_labelled", pc.type_a_labelled.get_str()},
                {"type_b_labelled", pc.type_b_labelled.get_str()},
                {"total_labelled", pc.total_labelled.get_str()},
                {"total_unlabelled", pc.total_unlabelled.get_str()}};
}

std::pair<long, long> parse_range(const std::string& text) {
    auto pos = text.find("..");
    if (pos == std::string::npos)
        throw CLI::ValidationError("range must look like lo..hi, got " + text);
    return {std::stol(text.substr(0, pos)), std::stol(text.substr(pos + 2))};
}

std::string join_mu(const std::vector<long>& mu) {
    std::string s;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        if (i) s += ' ';
        s += std::to_string(mu[i]);
    }
    return s;
}

int run_validation_guard(const std::function<int()>& body) {
    try {
        return body();
    } catch (const validation_error& e) {
        json j{{"error", "validation"}, {"violations", violations_to_json(e.violations)}};
        std::cout << j.dump(2) << std::endl;
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 3;
    }
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> argv_copy(argv, argv + argc);
    CLI::App app{"exact tropical Tevelev degrees of Hirzebruch surfaces"};
    app.require_subcommand(1);
    unsigned threads = 0;
    app.add_option("--threads", threads, "worker cap (default: TROPTEV_THREADS or hardware)");

    // ---- compute ----
    auto* cmd_compute = app.add_subcommand("compute", "evaluate the closed formula");
    std::string in_path, out_path;
    bool p2 = false;
    cmd_compute->add_option("--input", in_path, "instance json")->required();
    cmd_compute->add_option("--out", out_path, "output file (default stdout)");
    cmd_compute->add_flag("--p2", p2, "use the degenerate-fan formula (a=1, empty mu2)");

    // ---- enumerate ----
    auto* cmd_enum = app.add_subcommand("enumerate", "list every contributing curve");
    std::string en_in, en_out, en_points;
    unsigned long en_seed = 0;
    bool en_no_curves = false;
    cmd_enum->add_option("--input", en_in, "instance json")->required();
    cmd_enum->add_option("--seed", en_seed, "point-configuration seed (default 0)");
    cmd_enum->add_option("--points", en_points, "explicit point configuration json");
    cmd_enum->add_option("--out", en_out, "output file (default stdout)");
    cmd_enum->add_flag("--summary-only", en_no_curves, "omit the per-curve list");

    // ---- verify ----
    auto* cmd_verify = app.add_subcommand("verify", "cross-check formula against the oracles");
    std::string v_in, v_oracle = "structured", v_out;
    unsigned long v_seed = 0;
    int v_trials = 1;
    bool v_allow_large = false;
    cmd_verify->add_option("--input", v_in, "instance json")->required();
    cmd_verify->add_option("--oracle", v_oracle, "structured|full|both")->required();
    cmd_verify->add_option("--trials", v_trials, "independent structured-oracle seeds");
    cmd_verify->add_option("--seed", v_seed, "base seed (default 0)");
    cmd_verify->add_option("--out", v_out, "output file (default stdout)");
    cmd_verify->add_flag("--allow-large", v_allow_large, "lift the full-oracle size gate");

    // ---- sweep ----
    auto* cmd_sweep = app.add_subcommand("sweep", "grid consistency sweep to csv");
    std::string s_a = "1..3", s_out;
    long s_s1max = 3, s_wmax = 4, s_nmax = 6;
    unsigned long s_seed = 0;
    cmd_sweep->add_option("--a", s_a, "fan parameter range lo..hi (default 1..3)");
    cmd_sweep->add_option("--s1-max", s_s1max, "max weight sum on the first ray");
    cmd_sweep->add_option("--wmax", s_wmax, "max single contact order");
    cmd_sweep->add_option("--nmax", s_nmax, "max marking count");
    cmd_sweep->add_option("--seed", s_seed, "oracle seed base");
    cmd_sweep->add_option("--out", s_out, "csv path")->required();

    // ---- identities ----
    auto* cmd_id = app.add_subcommand("identities", "binomial identity suite");
    std::string id_x = "-10..10", id_y = "0..10", id_out;
    long id_nmax = 12;
    cmd_id->add_option("--xrange", id_x, "upper-index range lo..hi");
    cmd_id->add_option("--yrange", id_y, "lower-index range lo..hi");
    cmd_id->add_option("--nmax", id_nmax, "max Vandermonde order");
    cmd_id->add_option("--out", id_out, "output file (default stdout)");

    // ---- compare ----
    auto* cmd_cmp = app.add_subcommand("compare", "virtual-class comparison report");
    std::string c_parity, c_out;
    long c_j = 1, c_d = 1, c_k = 0, c_n = 0;
    cmd_cmp->add_option("--parity", c_parity, "even|odd")->required();
    cmd_cmp->add_option("--j", c_j, "a = 2j (even) or 2j+1 (odd)")->required();
    cmd_cmp->add_option("--d", c_d)->required();
    cmd_cmp->add_option("--k", c_k, "odd case only");
    cmd_cmp->add_option("--n", c_n)->required();
    cmd_cmp->add_option("--out", c_out, "output file (default stdout)");

    // ---- render ----
    auto* cmd_render = app.add_subcommand("render", "emit svg diagrams for a curve list");
    std::string r_curves, r_dir;
    bool r_label_all = false;
    cmd_render->add_option("--curves", r_curves, "enumerate output json")->required();
    cmd_render->add_option("--out", r_dir, "output directory")->required();
    cmd_render->add_flag("--label-all", r_label_all, "label every end weight");

    // ---- conjecture ----
    auto* cmd_conj = app.add_subcommand("conjecture", "evaluate a conjectural formula");
    std::string cj_kind, cj_mu, cj_out;
    long cj_r = 1, cj_a = 1, cj_n = 0;
    cmd_conj->add_option("kind", cj_kind, "pbundle|blowup")->required();
    cmd_conj->add_option("--r", cj_r)->required();
    cmd_conj->add_option("--a", cj_a, "pbundle only");
    cmd_conj->add_option("--mu", cj_mu, "json list of tangency profiles")->required();
    cmd_conj->add_option("--n", cj_n)->required();
    cmd_conj->add_option("--out", cj_out, "output file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    if (*cmd_compute)
        return run_validation_guard([&]() {
            Timer timer;
            auto g = load_instance(in_path);
            auto r = (p2 || g.fan.target == Target::P2) ? formula::trop_tev_p2(g)
                                                        : formula::trop_tev(g);
            json j = formula_result_json(r);
            j["instance"] = to_json(g);
            j["labelled_degree"] = Int(r.value * g.sym_product()).get_str();
            j["symmetry_factor"] = g.sym_product().get_str();
            j["predicted_counts"] = predicted_json(formula::predicted_counts(g));
            if (formula::predicted_counts(g).total_labelled != 0)
                j["per_curve_multiplicity"] = formula::per_curve_multiplicity(g).get_str();
            j["manifest"] = manifest("compute", argv_copy, 0, timer, j);
            emit(j, out_path);
            return 0;
        });

    if (*cmd_enum)
        return run_validation_guard([&]() {
            Timer timer;
            auto g = load_instance(en_in);
            json j;
            j["instance"] = to_json(g);
            if (formula::trop_tev(g).value == 0 && en_points.empty()) {
                j["labelled_sum"] = "0";
                j["trop_tev"] = "0";
                j["labelled_count"] = 0;
                j["unlabelled_count"] = 0;
                j["curves"] = json::array();
            } else {
                enumeration::PointConfig cfg;
                if (!en_points.empty()) {
                    cfg = enumeration::config_from_json(load_json(en_points));
                    if (auto bad = enumeration::config_conforms(g, cfg.points))
                        throw std::runtime_error("point configuration rejected: " + *bad);
                    if (auto fail = incidence::genericity_failure(g, cfg.points))
                        throw std::runtime_error("point configuration rejected: " + *fail);
                } else {
                    cfg = enumeration::structured_point_config(g, en_seed);
                }
                auto rep = enumeration::total(g, cfg);
                j = enumeration::report_to_json(rep, !en_no_curves);
                j["instance"] = to_json(g);
                j["config"] = enumeration::config_to_json(cfg);
                auto audit = enumeration::exclusion_audit(g, cfg);
                j["exclusion_audit"] = enumeration::audit_to_json(audit);
                if (!audit.ok) throw std::runtime_error("exclusion audit failed");
            }
            j["manifest"] = manifest("enumerate", argv_copy, en_seed, timer, j);
            emit(j, en_out);
            return 0;
        });

    if (*cmd_verify)
        return run_validation_guard([&]() {
            Timer timer;
            auto g = load_instance(v_in);
            Int expected = formula::trop_tev(g).value;
            json j;
            j["instance"] = to_json(g);
            j["formula"] = expected.get_str();
            json discrepancies = json::array();
            bool agree = true;
            if (v_oracle == "structured" || v_oracle == "both") {
                json runs = json::array();
                for (int t = 0; t < v_trials; ++t) {
                    auto rep = oracle::structured_oracle_seeded(
                        g, v_seed + static_cast<unsigned long>(t));
                    runs.push_back(rep.trop_tev.get_str());
                    if (rep.trop_tev != expected) {
                        agree = false;
                        discrepancies.push_back("structured trial " + std::to_string(t) +
                                                " gave " + rep.trop_tev.get_str());
                    }
                }
                j["structured"] = runs;
            }
            if (v_oracle == "full" || v_oracle == "both") {
                auto rep = oracle::full_oracle_seeded(g, v_seed, 0, threads, v_allow_large);
                j["full"] = rep.trop_tev.get_str();
                j["full_surviving_types"] = rep.solutions.get_str();
                j["full_shape_audit_ok"] = rep.shape_audit_ok;
                if (rep.trop_tev != expected) {
                    agree = false;
                    discrepancies.push_back("full oracle gave " + rep.trop_tev.get_str());
                }
                if (!rep.shape_audit_ok) {
                    agree = false;
                    discrepancies.push_back("full oracle shape audit failed");
                }
            }
            j["agree"] = agree;
            j["discrepancies"] = discrepancies;
            j["manifest"] = manifest("verify", argv_copy, v_seed, timer, j);
            emit(j, v_out);
            return agree ? 0 : 2;
        });

    if (*cmd_sweep)
        return run_validation_guard([&]() {
            Timer timer;
            auto [a_lo, a_hi] = parse_range(s_a);
            std::vector<long> a_values;
            for (long a = a_lo; a <= a_hi; ++a) a_values.push_back(a);
            auto grid = grid_instances(a_values, s_s1max, s_wmax, s_nmax);
            std::vector<Int> formulas(grid.size()), oracles(grid.size());
            parallel_tasks(grid.size(), thread_count(threads), [&](std::size_t i) {
                formulas[i] = formula::trop_tev(grid[i]).value;
                oracles[i] = oracle::structured_oracle_seeded(grid[i], s_seed + i).trop_tev;
            });
            std::ofstream out(s_out);
            if (!out.good()) throw std::runtime_error("cannot write " + s_out);
            out << "a,n,mu1,mu2,mu3,mu4,formula,oracle,agree\n";
            bool all_agree = true;
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const auto& g = grid[i];
                bool agree = formulas[i] == oracles[i];
                all_agree &= agree;
                out << g.a() << ',' << g.n << ',' << join_mu(g.profile(1).sorted) << ','
                    << join_mu(g.profile(2).sorted) << ',' << join_mu(g.profile(3).sorted) << ','
                    << join_mu(g.profile(4).sorted) << ',' << formulas[i].get_str() << ','
                    << oracles[i].get_str() << ',' << (agree ? "yes" : "no") << '\n';
            }
            std::cerr << "sweep: " << grid.size() << " instances in " << timer.ms() << " ms"
                      << std::endl;
            return all_agree ? 0 : 2;
        });

    if (*cmd_id)
        return run_validation_guard([&]() {
            Timer timer;
            auto [xlo, xhi] = parse_range(id_x);
            auto [ylo, yhi] = parse_range(id_y);
            auto grid = grid_instances({1, 2, 3}, 3, 4, 6);
            auto v = oracle::identity_check(xlo, xhi, ylo, yhi, id_nmax, grid);
            json j{{"ok", v.ok},
                   {"reflection_checked", v.reflection_checked},
                   {"negation_checked", v.negation_checked},
                   {"vandermonde_checked", v.vandermonde_checked},
                   {"lemma_checked", v.lemma_checked},
                   {"lemma_skipped", v.lemma_skipped},
                   {"failures", v.failures},
                   {"notes", v.notes}};
            j["manifest"] = manifest("identities", argv_copy, 0, timer, j);
            emit(j, id_out);
            return v.ok ? 0 : 2;
        });

    if (*cmd_cmp)
        return run_validation_guard([&]() {
            Timer timer;
            auto rep = formula::comparison_report(c_parity, c_j, c_d, c_k, c_n);
            const char* flag = rep.flag == formula::CompareFlag::Separation ? "separation"
                               : rep.flag == formula::CompareFlag::KnownDiscrepancy
                                   ? "known_discrepancy"
                                   : "no_separation";
            json j{{"parity", rep.parity},
                   {"a", rep.a},
                   {"j", rep.j},
                   {"d", rep.d},
                   {"k", rep.k},
                   {"n", rep.n},
                   {"beta", {{"x", rep.beta.x}, {"y", rep.beta.y}}},
                   {"beta_pairings", rep.pairings},
                   {"constraints_ok", rep.constraints_ok},
                   {"constraint_notes", rep.constraint_notes},
                   {"infeasible_class", rep.infeasible_class},
                   {"tangency_count", rep.lhs.get_str()},
                   {"reference", rep.rhs.get_str()},
                   {"distinct", rep.distinct},
                   {"flag", flag}};
            j["manifest"] = manifest("compare", argv_copy, 0, timer, j);
            emit(j, c_out);
            return 0;
        });

    if (*cmd_render)
        return run_validation_guard([&]() {
            Timer timer;
            json in = load_json(r_curves);
            auto g = validate(raw_from_json(in.at("instance")));
            if (!in.contains("config")) throw render::empty_scene_error{};
            // rebuild curves by re-running the enumeration on the stored config
            enumeration::PointConfig cfg = enumeration::config_from_json(in.at("config"));
            auto rep = enumeration::total(g, cfg);
            render::RenderOptions opt;
            opt.label_all = r_label_all;
            auto files = render::render_svg(g.fan, rep.curves, opt);
            std::filesystem::create_directories(r_dir);
            for (const auto& [name, text] : files) {
                std::ofstream out(std::filesystem::path(r_dir) / name);
                out << text;
            }
            std::cerr << "render: wrote " << files.size() << " files in " << timer.ms() << " ms"
                      << std::endl;
            return 0;
        });

    if (*cmd_conj)
        return run_validation_guard([&]() {
            Timer timer;
            auto mu = json::parse(cj_mu).get<std::vector<std::vector<long>>>();
            formula::ConjectureResult res;
            if (cj_kind == "pbundle") res = formula::conjecture_pbundle(cj_r, cj_a, mu, cj_n);
            else if (cj_kind == "blowup") res = formula::conjecture_blowup(cj_r, mu, cj_n);
            else throw std::runtime_error("conjecture kind must be pbundle or blowup");
            json j{{"kind", cj_kind},
                   {"value", res.value.get_str()},
                   {"conjectural", res.conjectural},
                   {"notes", res.notes}};
            j["manifest"] = manifest("conjecture", argv_copy, 0, timer, j);
            emit(j, cj_out);
            return 0;
        });

    return 0;
}
