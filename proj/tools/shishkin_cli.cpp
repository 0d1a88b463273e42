#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <toml.hpp>

#include "shishkin/shishkin.hpp"

namespace fs = std::filesystem;
using namespace shishkin;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

void report_error(const char* kind, const std::string& message) {
    nlohmann::json j{{"error", kind}, {"message", message}};
    std::cerr << j.dump() << "\n";
}

double toml_real(const toml::node& node, const std::string& key) {
    if (auto s = node.value<std::string>()) return parse_real(*s);
    if (auto v = node.value<double>()) return *v;
    throw ConfigError("'" + key + "' must be a number or a string such as \"2^-10\"");
}

std::vector<double> toml_reals(const toml::node_view<const toml::node>& view, const std::string& key) {
    const toml::array* arr = view.as_array();
    if (!arr) throw ConfigError("'" + key + "' must be an array");
    std::vector<double> out;
    for (const auto& node : *arr) out.push_back(toml_real(node, key));
    return out;
}

int toml_int(const toml::node_view<const toml::node>& view, const std::string& key) {
    auto v = view.value<int64_t>();
    if (!v) throw ConfigError("'" + key + "' must be an integer");
    return static_cast<int>(*v);
}

toml::table load_config(const std::string& path) {
    try {
        return toml::parse_file(path);
    } catch (const toml::parse_error& e) {
        throw ConfigError("cannot parse " + path + ": " + std::string(e.description()));
    }
}

/// Parameters of the single-solve commands. Unset fields fall back to the
/// [solve] table of the config file, then to defaults.
struct SolveArgs {
    std::string eps, mu, problem, out;
    int n = 0;
    int samples = 0;
    std::string config;
};

struct SolveParams {
    double eps = 0.0;
    double mu = 0.0;
    int n = 0;
    ProblemSpec problem;
    int samples = 1001;
};

std::optional<SolveParams> resolve_solve(const SolveArgs& a, bool need_n) {
    SolveParams p;
    std::optional<double> eps, mu;
    std::optional<int> n, samples;
    std::string problem = "paper-example";
    if (!a.config.empty()) {
        const toml::table cfg = load_config(a.config);
        const auto t = cfg["solve"];
        if (const auto* node = t["eps"].node()) eps = toml_real(*node, "eps");
        if (const auto* node = t["mu"].node()) mu = toml_real(*node, "mu");
        if (t["n"]) n = toml_int(t["n"], "n");
        if (t["samples"]) samples = toml_int(t["samples"], "samples");
        if (auto s = t["problem"].value<std::string>()) problem = *s;
    }
    if (!a.eps.empty()) eps = parse_real(a.eps);
    if (!a.mu.empty()) mu = parse_real(a.mu);
    if (a.n != 0) n = a.n;
    if (a.samples != 0) samples = a.samples;
    if (!a.problem.empty()) problem = a.problem;
    if (!eps || !mu || (need_n && !n)) return std::nullopt;
    p.eps = *eps;
    p.mu = *mu;
    if (n) p.n = *n;
    if (samples) p.samples = *samples;
    p.problem = parse_problem_spec(problem);
    check_parameters(p.eps, p.mu);
    if (need_n && (p.n < 8 || p.n % 4 != 0)) throw ConfigError("N must be >= 8 and divisible by 4, got " + std::to_string(p.n));
    return p;
}

void print_regime(const Regime& r, const Mesh& m) {
    std::cout << "kind=" << to_string(r.kind) << "\n"
              << "theta=" << format_real(r.theta) << "\n"
              << "rho_l=" << format_real(r.rho_l) << "\n"
              << "rho_r=" << format_real(r.rho_r) << "\n"
              << "tau_l=" << format_real(r.tau_l) << "\n"
              << "tau_r=" << format_real(r.tau_r) << "\n"
              << "sigma_l=" << format_real(m.sigma_l()) << "\n"
              << "sigma_r=" << format_real(m.sigma_r()) << "\n";
}

void print_warnings(const ProblemDiagnostics& d) {
    for (const auto& w : d.warnings) std::cerr << "warning: " << w << "\n";
}

int cmd_solve(const SolveArgs& a, const std::string& help) {
    const auto p = resolve_solve(a, true);
    if (!p) {
        std::cerr << "solve needs --eps, --mu and --n\n" << help;
        return kExitConfig;
    }
    const Problem prob = make_problem(p->problem, p->eps, p->mu);
    const DiscreteSolution sol = solve(prob, p->n);
    print_warnings(sol.diagnostics);
    print_regime(sol.regime, *sol.mesh);
    std::cout << "n=" << p->n << "\nproblem=" << prob.name << "\nmax_residual=" << format_sci(sol.max_residual) << "\n";
    const std::string out = a.out.empty() ? "solution.csv" : a.out;
    write_file_atomic(out, solution_csv(sol.u));
    std::cout << "wrote " << out << "\n";
    return kExitOk;
}

int cmd_mesh(const SolveArgs& a, const std::string& format, const std::string& help) {
    const auto p = resolve_solve(a, true);
    if (!p) {
        std::cerr << "mesh needs --eps, --mu and --n\n" << help;
        return kExitConfig;
    }
    const Problem prob = make_problem(p->problem, p->eps, p->mu);
    const Regime r = classify(prob);
    const Mesh m = shishkin_mesh(p->n, r);
    const MeshReport rep = mesh_report(m, r);
    print_regime(r, m);
    std::cout << "h_l=" << format_real(rep.h_l) << "\nh_c=" << format_real(rep.h_c) << "\nh_r=" << format_real(rep.h_r)
              << "\nratio_hc_hl=" << format_real(rep.ratio_hc_hl) << "\nratio_hc_hr=" << format_real(rep.ratio_hc_hr)
              << "\nsigma_r_le_sigma_l=" << (rep.sigma_r_le_sigma_l ? "true" : "false")
              << "\nassumption_holds=" << (rep.assumption_holds ? "true" : "false")
              << "\ndegenerate=" << (rep.degenerate ? "true" : "false") << "\n";
    if (!a.out.empty()) {
        write_file_atomic(a.out, mesh_csv(m));
        std::cout << "wrote " << a.out << "\n";
    } else if (format == "csv") {
        std::cout << mesh_csv(m);
    }
    return kExitOk;
}

int cmd_figure(const SolveArgs& a, const std::string& help) {
    const auto p = resolve_solve(a, true);
    if (!p) {
        std::cerr << "figure needs --eps, --mu and --n\n" << help;
        return kExitConfig;
    }
    const Problem prob = make_problem(p->problem, p->eps, p->mu);
    const auto pts = figure_data(prob, p->n, p->samples);
    const std::string out =
        a.out.empty() ? "figure_" + format_param(p->eps) + "_" + format_param(p->mu) + ".csv" : a.out;
    write_file_atomic(out, figure_csv(pts));
    std::cout << "wrote " << out << " (" << pts.size() << " points)\n";
    return kExitOk;
}

struct SweepArgs {
    std::string config, out_dir, problem, format = "md";
    int n_fine = 0;
    int threads = -1;
};

SweepConfig resolve_sweep(const SweepArgs& a) {
    SweepConfig c;
    if (!a.config.empty()) {
        const toml::table cfg = load_config(a.config);
        const auto t = cfg["sweep"];
        if (t["eps"]) c.eps_set = toml_reals(t["eps"], "eps");
        if (t["mu"]) c.mu_set = toml_reals(t["mu"], "mu");
        if (t["n"]) {
            const toml::array* arr = t["n"].as_array();
            if (!arr) throw ConfigError("'n' must be an array");
            c.n_set.clear();
            for (const auto& node : *arr) {
                auto v = node.value<int64_t>();
                if (!v) throw ConfigError("'n' entries must be integers");
                c.n_set.push_back(static_cast<int>(*v));
            }
        }
        if (t["n_fine"]) c.n_fine = toml_int(t["n_fine"], "n_fine");
        if (t["threads"]) c.threads = toml_int(t["threads"], "threads");
        if (auto s = t["problem"].value<std::string>()) c.problem = parse_problem_spec(*s);
        if (const auto* node = t["table1_mu"].node()) c.table1_mu = toml_real(*node, "table1_mu");
        if (auto s = t["flux_reference"].value<std::string>()) c.flux_reference = parse_flux_reference(*s);
    }
    if (!a.problem.empty()) c.problem = parse_problem_spec(a.problem);
    if (a.n_fine != 0) c.n_fine = a.n_fine;
    if (a.threads >= 0) c.threads = a.threads;
    c.validate();
    return c;
}

int cmd_sweep(const SweepArgs& a) {
    const SweepConfig c = resolve_sweep(a);
    const SweepResult r = run_sweep(c);
    const fs::path dir = a.out_dir.empty() ? fs::path("results") : fs::path(a.out_dir);
    write_file_atomic(dir / "tables.csv", records_csv(r.records));
    write_file_atomic(dir / "table1.md", table1_md(r, c.table1_mu));
    write_file_atomic(dir / "table2.md", table2_md(r));
    write_file_atomic(dir / "table3.md", table3_md(r));
    if (a.format == "csv") {
        std::cout << records_csv(r.records);
    } else {
        std::cout << table1_md(r, c.table1_mu) << "\n" << table2_md(r) << "\n" << table3_md(r);
    }
    std::cerr << "wrote " << r.records.size() << " records to " << dir.string() << "\n";
    return kExitOk;
}

int cmd_verify(const std::string& suite) {
    std::vector<std::string> names;
    if (suite == "all") names = suite_names();
    else names.push_back(suite);
    bool ok = true;
    for (const auto& name : names) {
        const SuiteResult res = run_suite(name);
        std::cout << name << ": " << (res.passed() ? "pass" : "FAIL") << " (" << res.checks << " checks, "
                  << res.failures.size() << " failures)\n";
        for (const auto& s : res.summary) std::cout << "  " << s << "\n";
        for (const auto& f : res.failures) std::cerr << nlohmann::json{{"suite", name}, {"failure", f}}.dump() << "\n";
        ok = ok && res.passed();
    }
    return ok ? kExitOk : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Upwind finite differences on Shishkin meshes for -eps u'' + mu a u' + b u = f"};
    app.require_subcommand(1);

    SolveArgs sa;
    std::string mesh_format = "md";
    auto add_solve_flags = [&](CLI::App* cmd) {
        cmd->add_option("--eps", sa.eps, "diffusion parameter, e.g. 2^-10");
        cmd->add_option("--mu", sa.mu, "convection parameter, e.g. 2^-4");
        cmd->add_option("--n", sa.n, "number of mesh intervals (divisible by 4)");
        cmd->add_option("--problem", sa.problem, "paper-example or constant:a=..,b=..,f0=..,f1=..,u0=..,u1=..");
        cmd->add_option("--config", sa.config, "TOML file with a [solve] table")->check(CLI::ExistingFile);
        cmd->add_option("--out", sa.out, "output file");
    };
    auto* solve_cmd = app.add_subcommand("solve", "solve one problem and write (index, x, U)");
    add_solve_flags(solve_cmd);
    auto* mesh_cmd = app.add_subcommand("mesh", "print the Shishkin mesh parameters");
    add_solve_flags(mesh_cmd);
    mesh_cmd->add_option("--format", mesh_format, "csv prints the nodes")->check(CLI::IsMember({"csv", "md"}));
    auto* figure_cmd = app.add_subcommand("figure", "write (x, u) samples of the discrete solution");
    add_solve_flags(figure_cmd);
    figure_cmd->add_option("--samples", sa.samples, "uniform sample count (default 1001)")->check(CLI::Range(2, 1 << 24));

    SweepArgs wa;
    auto* sweep_cmd = app.add_subcommand("sweep", "error tables over the parameter sets");
    sweep_cmd->add_option("--config", wa.config, "TOML file with a [sweep] table")->check(CLI::ExistingFile);
    sweep_cmd->add_option("--out-dir,--out", wa.out_dir, "output directory (default results)");
    sweep_cmd->add_option("--problem", wa.problem, "problem spec");
    sweep_cmd->add_option("--n-fine", wa.n_fine, "intervals of the fine evaluation mesh");
    sweep_cmd->add_option("--threads", wa.threads, "worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
    sweep_cmd->add_option("--format", wa.format, "stdout format")->check(CLI::IsMember({"csv", "md"}));

    std::string suite;
    auto* verify_cmd = app.add_subcommand("verify", "run a property suite");
    verify_cmd->add_option("suite", suite, "suite name or all")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*solve_cmd) return cmd_solve(sa, solve_cmd->help());
        if (*mesh_cmd) return cmd_mesh(sa, mesh_format, mesh_cmd->help());
        if (*figure_cmd) return cmd_figure(sa, figure_cmd->help());
        if (*sweep_cmd) return cmd_sweep(wa);
        if (*verify_cmd) return cmd_verify(suite);
    } catch (const ConfigError& e) {
        report_error("config", e.what());
        return kExitConfig;
    } catch (const DomainError& e) {
        report_error("domain", e.what());
        return kExitConfig;
    } catch (const NumericalError& e) {
        report_error("numerical", e.what());
        return kExitNumerical;
    } catch (const std::exception& e) {
        report_error("internal", e.what());
        return kExitNumerical;
    }
    return kExitConfig;
}
