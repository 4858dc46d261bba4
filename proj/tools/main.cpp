// sortition — committee voting rules on binary multi-issue profiles.
//
// Subcommands: gen, eval, ar-search, mc, bounds, optimality-check, regret-scan.
// Every JSON output embeds the fully resolved run configuration (seed
// included) so results can be replayed bit for bit.
//
// Exit codes: 0 ok, 1 usage/validation, 2 file I/O or parse, 3 resource cap,
// 4 generation failure, 5 invariant deviation found.

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sortition/sortition.hpp"

namespace {

using nlohmann::json;
using namespace sortition;

struct GlobalOpts {
    std::string format = "json";
    std::optional<std::uint64_t> seed;
    int threads = default_thread_count();
    std::string caps_path;
    Caps caps;
};

std::uint64_t resolve_seed(GlobalOpts& g) {
    if (!g.seed) g.seed = std::random_device{}();  // no silent entropy: echoed in config
    return *g.seed;
}

json base_config(const GlobalOpts& g, const std::string& command) {
    json cfg;
    cfg["command"] = command;
    cfg["format"] = g.format;
    cfg["threads"] = g.threads;
    cfg["caps"] = to_json(g.caps);
    if (!g.caps_path.empty()) cfg["caps_config"] = g.caps_path;
    if (g.seed) cfg["seed"] = *g.seed;
    return cfg;
}

void emit(const json& out) { std::cout << out.dump(2) << "\n"; }

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

json support_histogram(const PreferenceProfile& x) {
    std::map<long long, long long> hist;
    for (const long long s : x.column_supports()) ++hist[s];
    json h = json::object();
    for (const auto& [support, count] : hist) h[std::to_string(support)] = count;
    return h;
}

// --- gen ---------------------------------------------------------------

int run_gen(GlobalOpts& g, const std::string& kind, const json& params,
            const PreferenceProfile& x, const std::string& out_path, json extra) {
    write_profile(x, out_path);
    json out;
    json cfg = base_config(g, "gen");
    cfg["kind"] = kind;
    cfg["params"] = params;
    cfg["out"] = out_path;
    out["config"] = cfg;
    out["n"] = x.voters();
    out["m"] = x.issues();
    out["support_histogram"] = support_histogram(x);
    if (!extra.is_null()) out["summary"] = extra;
    emit(out);
    return 0;
}

// --- eval / mc -----------------------------------------------------------

EvalReport eval_dispatch(const PreferenceProfile& x, RuleId rule, int k, const std::string& method,
                         long long samples, std::uint64_t seed, const GlobalOpts& g,
                         std::string& resolved_method) {
    const auto exact_report = [&](double cost) {
        EvalReport r;
        r.expected_cost = cost;
        r.optimal_cost = double(optimal_outcome(x).cost);
        r.ratio = cost_ratio(r.expected_cost, r.optimal_cost);
        r.method = EvalMethod::exact_hypergeometric;
        r.columns = x.issues();
        return r;
    };
    const auto enum_feasible = [&] {
        return detail::binomial_clamped(x.voters(), k, g.caps.enumeration_cap) <=
               g.caps.enumeration_cap;
    };
    switch (rule) {
        case RuleId::maj:
            resolved_method = "exact";
            return exact_report(maj_expected_cost(x));
        case RuleId::rd:
            resolved_method = "exact";
            return exact_report(rd_expected_cost(x));
        case RuleId::kmaj:
            if (method == "exact" || method == "auto") {
                resolved_method = "exact";
                return kmaj_expected_cost_exact(x, k, g.caps.exact_binomial_max_n);
            }
            if (method == "enum") {
                resolved_method = "enum";
                return enumerate_expected_cost(x, k, RuleId::kmaj, g.caps.enumeration_cap);
            }
            resolved_method = "mc";
            return mc_eval_report(x, {RuleId::kmaj, k}, samples, seed, g.threads, g.caps);
        case RuleId::krep:
            if (method == "exact")
                throw validation_error("krep has no closed form; use enum, mc, or auto");
            if (method == "enum" || (method == "auto" && enum_feasible())) {
                resolved_method = "enum";
                return enumerate_expected_cost(x, k, RuleId::krep, g.caps.enumeration_cap);
            }
            resolved_method = "mc";
            return mc_eval_report(x, {RuleId::krep, k}, samples, seed, g.threads, g.caps);
        case RuleId::mindist: {
            if (method == "exact")
                throw validation_error("mindist has no closed form; use enum, mc, or auto");
            const MinDistRule rule_obj = mindist_committee_rule(x, k, g.caps.enumeration_cap);
            if (method == "mc") {
                resolved_method = "mc";
                return mc_eval_report(x, {RuleId::mindist, k}, samples, seed, g.threads, g.caps);
            }
            resolved_method = "enum";
            EvalReport r;
            r.expected_cost = mindist_expected_cost(x, rule_obj);
            r.optimal_cost = double(optimal_outcome(x).cost);
            r.ratio = cost_ratio(r.expected_cost, r.optimal_cost);
            r.method = EvalMethod::exact_enumeration;
            r.committees = (long long)rule_obj.optima.size();
            return r;
        }
    }
    throw validation_error("unknown rule");
}

// --- tables ----------------------------------------------------------------

struct ArRow {
    long long k = 0;
    OneIssueAr ar;
    double upper = 0.0, lower = 0.0;
    bool lower_applicable = false;
};

void emit_ar_rows(const GlobalOpts& g, json cfg, const std::vector<ArRow>& rows) {
    if (g.format == "csv") {
        std::cout << "k,ar,worst_n1,upper_bound,lower_bound,lower_applicable,"
                     "upper_satisfied,lower_satisfied\n";
        for (const auto& r : rows) {
            std::cout << r.k << ',' << num(r.ar.ratio) << ',' << r.ar.worst_n1 << ','
                      << num(r.upper) << ',' << num(r.lower) << ','
                      << (r.lower_applicable ? 1 : 0) << ',' << (r.ar.ratio <= r.upper ? 1 : 0)
                      << ',' << (r.lower_applicable ? (r.ar.ratio >= r.lower ? "1" : "0") : "")
                      << "\n";
        }
        return;
    }
    json out;
    out["config"] = std::move(cfg);
    json list = json::array();
    for (const auto& r : rows) {
        json row;
        row["k"] = r.k;
        row["ar"] = r.ar.ratio;
        row["worst_n1"] = r.ar.worst_n1;
        row["upper_bound"] = r.upper;
        row["lower_bound"] = r.lower;
        row["lower_applicable"] = r.lower_applicable;
        row["upper_satisfied"] = r.ar.ratio <= r.upper;
        if (r.lower_applicable) row["lower_satisfied"] = r.ar.ratio >= r.lower;
        list.push_back(row);
    }
    out["rows"] = list;
    emit(out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"committee voting rules on binary multi-issue preference profiles"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--format", g.format, "output format for tabular commands")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    app.add_option("--seed", g.seed, "seed for randomized commands (generated and echoed if absent)");
    app.add_option("--threads", g.threads, "worker threads (output is thread-count independent)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--caps-config", g.caps_path, "JSON file overriding resource caps");

    // gen
    auto* gen = app.add_subcommand("gen", "generate a profile file");
    gen->require_subcommand(1);
    std::string out_path;
    int gn = 0, gn1 = 0, gm = 0, gmax_n = -1, gmax_attempts = -1;
    double gp = 0.0, gq = 0.0, galpha = 0.0, geps = 0.0;
    auto* gen_single = gen->add_subcommand("single-issue", "n voters, n1 supporters of 1");
    gen_single->add_option("--n", gn)->required();
    gen_single->add_option("--n1", gn1)->required();
    gen_single->add_option("--out", out_path)->required();
    auto* gen_eq = gen->add_subcommand("equidistant", "n voters, n! issues, equal pairwise distances");
    gen_eq->add_option("--n", gn)->required();
    gen_eq->add_option("--n1", gn1)->required();
    gen_eq->add_option("--out", out_path)->required();
    gen_eq->add_option("--max-n", gmax_n, "override the n cap (n! issues)");
    auto* gen_tc = gen->add_subcommand("two-cluster", "diffuse cluster P plus unanimous cluster Q");
    gen_tc->add_option("--n", gn)->required();
    gen_tc->add_option("--m", gm)->required();
    gen_tc->add_option("--p", gp)->required();
    gen_tc->add_option("--q", gq)->required();
    gen_tc->add_option("--alpha", galpha)->required();
    gen_tc->add_option("--eps", geps)->required();
    gen_tc->add_option("--out", out_path)->required();
    gen_tc->add_option("--max-attempts", gmax_attempts);
    auto* gen_iid = gen->add_subcommand("iid", "i.i.d. Bernoulli(p) entries");
    gen_iid->add_option("--n", gn)->required();
    gen_iid->add_option("--m", gm)->required();
    gen_iid->add_option("--p", gp)->required();
    gen_iid->add_option("--out", out_path)->required();

    // eval
    auto* eval = app.add_subcommand("eval", "expected cost and ratio of a rule on a profile");
    std::string profile_path, rule_name, method = "auto";
    int ek = 1;
    long long samples = 100000;
    eval->add_option("--profile", profile_path)->required();
    eval->add_option("--rule", rule_name, "maj|rd|kmaj|krep|mindist")->required();
    eval->add_option("--k", ek, "committee size (kmaj/krep/mindist)");
    eval->add_option("--method", method)->check(CLI::IsMember({"auto", "exact", "enum", "mc"}));
    eval->add_option("--samples", samples, "Monte Carlo samples");

    // mc
    auto* mc = app.add_subcommand("mc", "Monte Carlo estimate with confidence interval");
    mc->add_option("--profile", profile_path)->required();
    mc->add_option("--rule", rule_name, "maj|rd|kmaj|krep|mindist")->required();
    mc->add_option("--k", ek, "committee size");
    mc->add_option("--samples", samples)->required();

    // ar-search
    auto* ar = app.add_subcommand("ar-search", "exact one-issue AR of k-sortition vs the bounds");
    long long ar_n = 0;
    std::vector<long long> k_list;
    ar->add_option("--n", ar_n)->required();
    ar->add_option("--k", k_list, "committee sizes")->required()->delimiter(',');

    // bounds
    auto* bounds_cmd = app.add_subcommand("bounds", "closed-form bound table for plotting");
    std::vector<long long> bk_list;
    std::vector<int> bm_list{1, 2, 3};
    bounds_cmd->add_option("--k", bk_list)->required()->delimiter(',');
    bounds_cmd->add_option("--m", bm_list, "issue counts for the iid bound")->delimiter(',');

    // optimality-check
    auto* opt = app.add_subcommand("optimality-check",
                                   "issue-wise optimal thresholds vs the majority rule");
    long long on_max = 30, ok_max = 9;
    opt->add_option("--n-max", on_max);
    opt->add_option("--k-max", ok_max);

    // regret-scan
    auto* regret_cmd = app.add_subcommand("regret-scan", "worst-case regret over committee sizes");
    long long rn = 0, rk_step = 8, rk_max = -1;
    double rc = 0.0;
    bool rscaling = false;
    regret_cmd->add_option("--n", rn)->required();
    regret_cmd->add_option("--c", rc, "per-voter-per-issue elicitation cost")->required();
    regret_cmd->add_option("--k-step", rk_step);
    regret_cmd->add_option("--k-max", rk_max);
    regret_cmd->add_flag("--scaling-check", rscaling, "compare argmin k at n and 8n");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (!g.caps_path.empty()) g.caps = read_caps_file(g.caps_path);

        if (gen->parsed()) {
            if (gen_single->parsed()) {
                const auto x = make_single_issue({gn, gn1});
                return run_gen(g, "single-issue", json{{"n", gn}, {"n1", gn1}}, x, out_path, {});
            }
            if (gen_eq->parsed()) {
                const int cap = gmax_n > 0 ? gmax_n : g.caps.equidistant_max_n;
                const auto x = equidistant_profile(gn, gn1, cap);
                const auto dm = distance_matrix(x);
                json extra;
                extra["common_distance"] = gn >= 2 ? dm.at(0, 1) : 0;
                return run_gen(g, "equidistant", json{{"n", gn}, {"n1", gn1}}, x, out_path, extra);
            }
            if (gen_tc->parsed()) {
                TwoClusterSpec spec{gn, gm, galpha, gp, gq, geps, resolve_seed(g),
                                    gmax_attempts > 0 ? gmax_attempts
                                                      : g.caps.two_cluster_max_attempts};
                const auto result = two_cluster_profile(spec);
                json extra;
                extra["attempts"] = result.attempts;
                extra["p_size"] = result.p_size;
                extra["epsilon"] = geps;
                extra["concentration"] = "all pairwise and to-zero distances within (1 +- eps) of expectation";
                return run_gen(g, "two-cluster",
                               json{{"n", gn}, {"m", gm}, {"p", gp}, {"q", gq},
                                    {"alpha", galpha}, {"eps", geps}},
                               result.profile, out_path, extra);
            }
            const auto x = iid_issue_profile(gn, gm, gp, resolve_seed(g));
            return run_gen(g, "iid", json{{"n", gn}, {"m", gm}, {"p", gp}}, x, out_path, {});
        }

        if (eval->parsed() || mc->parsed()) {
            const auto rule = parse_rule_id(rule_name);
            if (!rule) throw validation_error("unknown rule id: " + rule_name);
            const auto x = read_profile(profile_path);
            json cfg = base_config(g, mc->parsed() ? "mc" : "eval");
            cfg["profile"] = profile_path;
            cfg["rule"] = rule_name;
            cfg["k"] = ek;
            if (mc->parsed()) {
                const std::uint64_t seed = resolve_seed(g);
                cfg["seed"] = seed;
                cfg["samples"] = samples;
                const auto [est, ratio] = mc_ratio(x, {*rule, ek}, samples, seed, g.threads, g.caps);
                json out;
                out["config"] = cfg;
                out["estimate"] = to_json(est);
                out["optimal_cost"] = ratio.denominator;
                out["ratio"] = to_json(ratio);
                emit(out);
                return 0;
            }
            // Seeds are drawn only when Monte Carlo will actually run, so
            // exact eval output stays replay-identical with no --seed given.
            const bool wants_mc =
                method == "mc" ||
                (method == "auto" && *rule == RuleId::krep &&
                 detail::binomial_clamped(x.voters(), ek, g.caps.enumeration_cap) >
                     g.caps.enumeration_cap);
            std::string resolved;
            std::uint64_t seed = 0;
            if (wants_mc) seed = resolve_seed(g);
            const EvalReport report = eval_dispatch(x, *rule, ek, method, samples, seed, g, resolved);
            cfg["method"] = method;
            cfg["method_resolved"] = resolved;
            if (report.method == EvalMethod::monte_carlo) {
                cfg["seed"] = seed;
                cfg["samples"] = samples;
            }
            json out;
            out["config"] = cfg;
            out["report"] = to_json(report);
            emit(out);
            return 0;
        }

        if (ar->parsed()) {
            std::vector<ArRow> rows(k_list.size());
            std::vector<long long> ks = k_list;
            parallel_for((long long)ks.size(), g.threads, [&](long long i) {
                ArRow row;
                row.k = ks[i];
                row.ar = ar_one_issue_kmaj(ar_n, ks[i]);
                row.upper = kmaj_upper_bound(ks[i]);
                row.lower = kmaj_lower_bound(ks[i]);
                row.lower_applicable = kmaj_lower_bound_applicable(ar_n, ks[i]);
                rows[i] = row;
            });
            json cfg = base_config(g, "ar-search");
            cfg["n"] = ar_n;
            cfg["k"] = k_list;
            emit_ar_rows(g, std::move(cfg), rows);
            return 0;
        }

        if (bounds_cmd->parsed()) {
            json cfg = base_config(g, "bounds");
            cfg["k"] = bk_list;
            cfg["m"] = bm_list;
            if (g.format == "csv") {
                std::cout << "k,m,kmaj_upper,kmaj_lower,krep_one_issue_ar,krep_iid_upper,"
                             "krep_iid_upper_intermediate\n";
                for (const long long k : bk_list)
                    for (const int m : bm_list)
                        std::cout << k << ',' << m << ',' << num(kmaj_upper_bound(k)) << ','
                                  << num(kmaj_lower_bound(k)) << ',' << num(krep_one_issue_ar(k))
                                  << ',' << num(krep_iid_upper_bound(m, k)) << ','
                                  << num(krep_iid_upper_bound_intermediate(m, k)) << "\n";
                return 0;
            }
            json out;
            out["config"] = cfg;
            const auto limit = kmaj3_exact_limit();
            out["kmaj3_limit"] = {{"ratio", limit.ratio}, {"worst_fraction", limit.worst_fraction}};
            out["krep_many_issue_lower"] =
                {{"bound", krep_many_issue_lower()}, {"maximizer_alpha", krep_lower_curve_alpha()}};
            json rows = json::array();
            for (const long long k : bk_list) {
                for (const int m : bm_list) {
                    json row;
                    row["k"] = k;
                    row["m"] = m;
                    row["kmaj_upper"] = kmaj_upper_bound(k);
                    row["kmaj_lower"] = kmaj_lower_bound(k);
                    row["krep_one_issue_ar"] = krep_one_issue_ar(k);
                    row["krep_iid_upper"] = krep_iid_upper_bound(m, k);
                    row["krep_iid_upper_intermediate"] = krep_iid_upper_bound_intermediate(m, k);
                    row["krep_lower_curve_at_3_4"] = krep_lower_curve(0.75, k);
                    rows.push_back(row);
                }
            }
            out["rows"] = rows;
            emit(out);
            return 0;
        }

        if (opt->parsed()) {
            json deviations = json::array();
            long long checked = 0, free_cells = 0, tie_cells = 0;
            for (long long n = 2; n <= on_max; ++n) {
                for (long long k = 1; k <= std::min(ok_max, n); ++k) {
                    for (long long n1 = 1; 2 * n1 <= n; ++n1) {
                        const auto h = optimal_issue_wise_thresholds(n, n1, k);
                        ++checked;
                        for (long long q = 0; q <= k; ++q) {
                            if (h[q] != ThresholdChoice::free_tie) continue;
                            if (2 * q == k)
                                ++tie_cells;  // symmetric point: free, never a deviation
                            else
                                ++free_cells;
                        }
                        for (const long long q : majority_threshold_deviations(h)) {
                            json dev;
                            dev["n"] = n;
                            dev["n1"] = n1;
                            dev["k"] = k;
                            dev["q"] = q;
                            deviations.push_back(dev);
                        }
                    }
                }
            }
            json cfg = base_config(g, "optimality-check");
            cfg["n_max"] = on_max;
            cfg["k_max"] = ok_max;
            json out;
            out["config"] = cfg;
            out["grids_checked"] = checked;
            out["free_cells_off_tie"] = free_cells;
            out["free_cells_at_tie"] = tie_cells;
            out["deviations"] = deviations;
            out["deviation_count"] = deviations.size();
            emit(out);
            return deviations.empty() ? 0 : 5;
        }

        if (regret_cmd->parsed()) {
            const auto grid = default_k_grid(rn, rk_step, rk_max);
            const RegretScanResult scan = optimal_k_scan(rn, rc, grid);
            json cfg = base_config(g, "regret-scan");
            cfg["n"] = rn;
            cfg["c"] = rc;
            cfg["k_step"] = rk_step;
            cfg["k_grid_size"] = grid.size();
            if (g.format == "csv") {
                std::cout << "k,worst_regret,worst_excess,worst_n1\n";
                for (const auto& row : scan.table)
                    std::cout << row.k << ',' << num(row.worst_regret) << ','
                              << num(row.worst_excess) << ',' << row.worst_n1 << "\n";
                return 0;
            }
            json out;
            out["config"] = cfg;
            out["best_k"] = scan.best_k;
            json rows = json::array();
            for (const auto& row : scan.table) {
                json r;
                r["k"] = row.k;
                r["worst_regret"] = row.worst_regret;
                r["worst_excess"] = row.worst_excess;
                r["worst_n1"] = row.worst_n1;
                rows.push_back(r);
            }
            out["rows"] = rows;
            if (rscaling) {
                const ScalingCheck check = regret_scaling_check(rn, rc, rk_step);
                json sc;
                sc["n_small"] = check.n_small;
                sc["n_large"] = check.n_large;
                sc["k_small"] = check.k_small;
                sc["k_large"] = check.k_large;
                sc["ratio"] = check.ratio;
                sc["consistent_with_two_thirds_exponent"] = check.consistent;
                out["scaling_check"] = sc;
            }
            emit(out);
            return 0;
        }
    } catch (const validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const cap_exceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const generation_failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
