// Command-line front end: solve heteroclinic profiles, minimize the action,
// verify profiles against the theorem-derived checks, and sweep parameter
// grids. Exit codes: 0 success, 1 config error, 2 solver error,
// 3 verification failure.

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>
#include <json.hpp>

#include "hetero/io.hpp"
#include "hetero/mc_truncation.hpp"
#include "hetero/minimizer.hpp"
#include "hetero/verify.hpp"

using nlohmann::json;
using namespace hetero;

namespace {

json parse_compact_spec(const std::string& s) {
    if (!s.empty() && s.front() == '{') return json::parse(s);
    json j;
    const auto colon = s.find(':');
    j["kind"] = s.substr(0, colon);
    j["params"] = json::object();
    if (colon != std::string::npos) {
        std::stringstream rest(s.substr(colon + 1));
        std::string pair;
        while (std::getline(rest, pair, ',')) {
            const auto eq = pair.find('=');
            if (eq == std::string::npos)
                throw construction_error("bad spec fragment: " + pair);
            j["params"][pair.substr(0, eq)] = std::stod(pair.substr(eq + 1));
        }
    }
    return j;
}

struct RunConfig {
    std::string kernel = "p-power:p=2";
    std::string potential = "p-dw:p=2,alpha=1";
    double anchor = std::numeric_limits<double>::quiet_NaN();  // NaN -> well midpoint
    double t_max = 0.0;
    double tol = 1e-13;
    double T = 12.0;
    int N = 4001;
    std::string out;
    std::string route = "cauchy";
    std::string grid;
};

// flags > config file > defaults
void apply_config_file(const std::string& path, const CLI::App& app, RunConfig& cfg) {
    std::ifstream is(path);
    if (!is) throw construction_error("cannot open config file: " + path);
    json j = json::parse(is);
    auto take = [&](const char* flag, const char* key, auto& slot) {
        const CLI::Option* opt = app.get_option_no_throw(flag);
        const bool flag_given = opt != nullptr && opt->count() > 0;
        if (!flag_given && j.contains(key)) slot = j.at(key);
    };
    take("--kernel", "kernel", cfg.kernel);
    take("--potential", "potential", cfg.potential);
    take("--anchor", "anchor", cfg.anchor);
    take("--t-max", "t_max", cfg.t_max);
    take("--tol", "tol", cfg.tol);
    take("--T", "T", cfg.T);
    take("--N", "N", cfg.N);
    take("--out", "out", cfg.out);
    take("--route", "route", cfg.route);
    take("--grid", "grid", cfg.grid);
}

int thread_cap() {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("HETLAB_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return std::min<unsigned>(n, 4 * hw);
    }
    return static_cast<int>(hw);
}

struct Problem {
    json kernel_spec;
    json potential_spec;
    PhiKernel k;
    Potential P;
};

Problem build_problem(const RunConfig& cfg) {
    Problem pr;
    pr.kernel_spec = parse_compact_spec(cfg.kernel);
    pr.potential_spec = parse_compact_spec(cfg.potential);
    pr.k = kernel_from_json(pr.kernel_spec);
    pr.P = potential_from_json(pr.potential_spec, pr.k);

    const auto kcert = certify_kernel(pr.k);
    if (!kcert.ok())
        throw construction_error("kernel failed certification: ratio range [" +
                                 std::to_string(kcert.ratio_min) + ", " +
                                 std::to_string(kcert.ratio_max) + "] vs declared (l-1, m-1)");
    const auto pcert = certify_hypotheses(pr.P, pr.k);
    if (!pcert.v1_ok || !pcert.v2_ok)
        throw construction_error("potential failed certification: not a double well on the "
                                 "sampled interval");
    if (!pcert.ok())
        std::cerr << "warning: potential/kernel pair fails an envelope or convexity "
                     "hypothesis; decay guarantees may not apply\n";
    return pr;
}

// Closed-form comparison trajectory, when this kernel/potential pair has one.
std::optional<std::function<double(double)>> auto_oracle(const Problem& pr) {
    const std::string kk = pr.kernel_spec.at("kind"), pk = pr.potential_spec.at("kind");
    if (kk != "p-power") return std::nullopt;
    const double p = pr.kernel_spec.at("params").at("p").get<double>();
    if (pk == "p-dw" &&
        std::fabs(pr.potential_spec.at("params").at("p").get<double>() - p) < 1e-12)
        return closed_form_oracle(OracleKind::p_tanh, {.p = p, .alpha = pr.P.well_high});
    if (pk == "asym" &&
        std::fabs(pr.potential_spec.at("params").at("p").get<double>() - p) < 1e-12)
        return closed_form_oracle(OracleKind::asym_logistic,
                                  {.p = p, .a = pr.P.well_low, .b = pr.P.well_high});
    if (pk == "quartic" && std::fabs(p - 2.0) < 1e-12)
        return closed_form_oracle(OracleKind::quartic_classic, {.alpha = pr.P.well_high});
    return std::nullopt;
}

void write_profile(const HeteroclinicProfile& prof, const std::string& out) {
    if (out.empty()) {
        profile_to_csv(prof, std::cout);
    } else if (out.size() > 5 && out.compare(out.size() - 5, 5, ".json") == 0) {
        std::ofstream os(out);
        if (!os) throw evaluation_error("cannot open for writing: " + out);
        os << profile_to_json(prof).dump(2) << '\n';
    } else {
        profile_to_csv_file(prof, out);
    }
}

HeteroclinicProfile run_route(const Problem& pr, const RunConfig& cfg) {
    const double anchor = std::isnan(cfg.anchor) ? pr.P.midpoint() : cfg.anchor;
    if (cfg.route == "variational") {
        DiscreteAction D;
        D.T = cfg.T;
        D.N = cfg.N;
        D.boundary = {pr.P.well_low, pr.P.well_high};
        const auto res = minimize_action(D, pr.k, pr.P, initial_ramp(D, pr.P));
        if (!res.converged) throw descent_error("minimizer did not converge");
        return variational_profile(D, pr.k, pr.P, res, anchor);
    }
    if (cfg.route != "cauchy")
        throw construction_error("unknown route: " + cfg.route);
    SolverConfig scfg;
    scfg.rel_tol = scfg.abs_tol = cfg.tol;
    scfg.t_max = cfg.t_max;
    return solve_cauchy(pr.k, pr.P, anchor, scfg);
}

int cmd_solve(const RunConfig& cfg) {
    Problem pr;
    try {
        pr = build_problem(cfg);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    }
    try {
        write_profile(run_route(pr, cfg), cfg.out);
    } catch (const solver_error& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return 2;
    } catch (const descent_error& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return 2;
    } catch (const unbounded_inverse_error& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

int cmd_verify(const RunConfig& cfg, const std::string& profile_path) {
    Problem pr;
    HeteroclinicProfile prof;
    try {
        pr = build_problem(cfg);
        const bool is_json = profile_path.size() > 5 &&
                             profile_path.compare(profile_path.size() - 5, 5, ".json") == 0;
        if (is_json) {
            std::ifstream is(profile_path);
            if (!is) throw evaluation_error("cannot open: " + profile_path);
            prof = profile_from_json(json::parse(is));
        } else {
            prof = profile_from_csv_file(profile_path);
        }
        prof.wells = {pr.P.well_low, pr.P.well_high};
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    }

    VerifyOptions opts;
    opts.oracle = auto_oracle(pr);
    if (prof.route == Route::variational) opts.oracle_tol = 5e-3;
    const auto rep = run_all(prof, pr.k, pr.P, opts);
    const json jrep = report_to_json(rep);
    if (cfg.out.empty()) {
        std::cout << jrep.dump(2) << '\n';
    } else {
        std::ofstream os(cfg.out);
        if (!os) {
            std::cerr << "config error: cannot open for writing: " << cfg.out << '\n';
            return 1;
        }
        os << jrep.dump(2) << '\n';
    }
    return rep.all_passed() ? 0 : 3;
}

struct GridAxis {
    std::string name;
    std::vector<double> values;
};

std::vector<GridAxis> parse_grid(const std::string& spec) {
    std::vector<GridAxis> axes;
    std::stringstream ss(spec);
    std::string part;
    while (std::getline(ss, part, ';')) {
        if (part.empty()) continue;
        const auto eq = part.find('=');
        if (eq == std::string::npos) throw construction_error("bad grid axis: " + part);
        GridAxis ax;
        ax.name = part.substr(0, eq);
        const std::string rhs = part.substr(eq + 1);
        if (rhs.find(':') != std::string::npos) {
            double lo, hi, step;
            char c1, c2;
            std::stringstream r(rhs);
            if (!(r >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' ||
                !(step > 0.0))
                throw construction_error("bad grid range: " + rhs);
            for (double v = lo; v <= hi + 1e-12 * step; v += step) ax.values.push_back(v);
        } else {
            std::stringstream r(rhs);
            std::string item;
            while (std::getline(r, item, ',')) ax.values.push_back(std::stod(item));
        }
        if (ax.values.empty()) throw construction_error("empty grid axis: " + ax.name);
        axes.push_back(std::move(ax));
    }
    if (axes.empty()) throw construction_error("empty grid");
    return axes;
}

json run_sweep_cell(const RunConfig& base, const std::vector<GridAxis>& axes,
                    const std::vector<std::size_t>& idx) {
    json cell_params = json::object();
    json kspec = parse_compact_spec(base.kernel);
    json pspec = parse_compact_spec(base.potential);
    for (std::size_t a = 0; a < axes.size(); ++a) {
        const double v = axes[a].values[idx[a]];
        cell_params[axes[a].name] = v;
        bool placed = false;
        if (kspec.at("params").contains(axes[a].name)) {
            kspec["params"][axes[a].name] = v;
            placed = true;
        }
        if (pspec.at("params").contains(axes[a].name)) {
            pspec["params"][axes[a].name] = v;
            placed = true;
        }
        if (!placed)
            throw construction_error("grid variable matches no kernel/potential parameter: " +
                                     axes[a].name);
    }

    json row;
    row["params"] = cell_params;
    try {
        RunConfig cfg = base;
        cfg.kernel = kspec.dump();
        cfg.potential = pspec.dump();
        const Problem pr = build_problem(cfg);

        if (kspec.at("kind") == "mc-truncated") {
            const double L = kspec.at("params").at("L").get<double>();
            SolverConfig scfg;
            scfg.rel_tol = scfg.abs_tol = cfg.tol;
            scfg.t_max = cfg.t_max;
            const auto [prof, cert] = solve_mc(pr.P, L, scfg);
            const auto sandwich =
                mc_sandwich_check(prof, pr.P.well_high, TruncationParams::make(L));
            row["status"] = "ok";
            row["alpha"] = pr.P.well_high;
            row["L"] = L;
            row["max_slope"] = cert.max_slope;
            row["slope_cap"] = cert.slope_cap;
            row["slope_certificate_passed"] = cert.passed;
            row["untruncated_residual_sup"] = cert.untruncated_residual_sup;
            row["kappa"] = sandwich.kappa;
            row["lower_margin"] = sandwich.lower_margin;
            row["upper_margin"] = sandwich.upper_margin;
            row["bounds_passed"] = sandwich.passed;
            return row;
        }

        const auto prof = run_route(pr, cfg);
        VerifyOptions opts;
        opts.oracle = auto_oracle(pr);
        const auto rep = run_all(prof, pr.k, pr.P, opts);
        row["status"] = "ok";
        row["all_passed"] = rep.all_passed();
        json checks = json::object();
        for (const auto& c : rep.checks)
            checks[c.name] = {{"status", c.status == CheckStatus::pass
                                             ? "pass"
                                             : (c.status == CheckStatus::fail ? "fail"
                                                                              : "skipped")},
                              {"margin", c.margin}};
        row["checks"] = checks;
        if (opts.oracle) {
            double sup = 0.0;
            for (std::size_t i = 0; i < prof.size(); ++i)
                sup = std::max(sup, std::fabs(prof.q[i] - (*opts.oracle)(prof.t[i])));
            row["oracle_sup_error"] = sup;
        }
    } catch (const std::exception& e) {
        row["status"] = "error";
        row["message"] = e.what();
    }
    return row;
}

int cmd_sweep(const RunConfig& cfg) {
    std::vector<GridAxis> axes;
    try {
        axes = parse_grid(cfg.grid);
        // fail fast on grid variables that bind to nothing
        const json kspec = parse_compact_spec(cfg.kernel);
        const json pspec = parse_compact_spec(cfg.potential);
        for (const auto& ax : axes)
            if (!kspec.at("params").contains(ax.name) && !pspec.at("params").contains(ax.name))
                throw construction_error(
                    "grid variable matches no kernel/potential parameter: " + ax.name);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    }

    std::size_t total = 1;
    for (const auto& ax : axes) total *= ax.values.size();
    std::vector<json> rows(total);

    // bounded pool; deterministic row order by cell index
    const int workers = std::min<std::size_t>(thread_cap(), total);
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (;;) {
            const std::size_t cell = next.fetch_add(1);
            if (cell >= total) return;
            std::vector<std::size_t> idx(axes.size());
            std::size_t rem = cell;
            for (std::size_t a = axes.size(); a-- > 0;) {
                idx[a] = rem % axes[a].values.size();
                rem /= axes[a].values.size();
            }
            rows[cell] = run_sweep_cell(cfg, axes, idx);
        }
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();

    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!cfg.out.empty()) {
        file.open(cfg.out);
        if (!file) {
            std::cerr << "config error: cannot open for writing: " << cfg.out << '\n';
            return 1;
        }
        os = &file;
    }
    for (const auto& row : rows) *os << row.dump() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
#ifdef _OPENMP
    if (std::getenv("HETLAB_THREADS")) omp_set_num_threads(thread_cap());
#endif

    CLI::App app{"heteroclinic connection laboratory"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path, profile_path;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--kernel", cfg.kernel, "kernel spec, compact (p-power:p=2) or JSON");
        sub->add_option("--potential", cfg.potential,
                        "potential spec, compact (p-dw:p=2,alpha=1) or JSON");
        sub->add_option("--anchor", cfg.anchor, "profile value pinned at t=0");
        sub->add_option("--t-max", cfg.t_max, "integration half-width (0 = auto)");
        sub->add_option("--tol", cfg.tol, "integrator tolerance");
        sub->add_option("--T", cfg.T, "variational half-width");
        sub->add_option("--N", cfg.N, "variational interior node count");
        sub->add_option("--out", cfg.out, "output path (default stdout)");
        sub->add_option("--route", cfg.route, "cauchy | variational");
        sub->add_option("--grid", cfg.grid, "sweep grid, e.g. alpha=0.05:0.4:0.05;L=1");
        sub->add_option("--config", config_path, "JSON config file (flags take precedence)");
        return sub;
    };

    CLI::App* solve = add_common(app.add_subcommand("solve", "integrate a profile"));
    CLI::App* minimize =
        add_common(app.add_subcommand("minimize", "variational route (solve --route variational)"));
    CLI::App* verify =
        add_common(app.add_subcommand("verify", "run all checks on a stored profile"));
    verify->add_option("profile", profile_path, "profile CSV/JSON path")->required();
    CLI::App* sweep = add_common(app.add_subcommand("sweep", "run a parameter grid"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (!config_path.empty()) {
            CLI::App* active = app.get_subcommands().front();
            apply_config_file(config_path, *active, cfg);
        }
        if (minimize->parsed()) cfg.route = "variational";

        if (solve->parsed() || minimize->parsed()) return cmd_solve(cfg);
        if (verify->parsed()) return cmd_verify(cfg, profile_path);
        if (sweep->parsed()) return cmd_sweep(cfg);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
