// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "shishkin/shishkin.hpp"

using namespace shishkin;

namespace {

int failures = 0;

void report(int k, bool ok, const std::string& what) {
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", k, what.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string detail(const SuiteResult& r) {
    std::string s = std::to_string(r.checks) + " checks, " + std::to_string(r.failures.size()) + " failures";
    for (const auto& line : r.summary) s += "; " + line;
    for (std::size_t k = 0; k < r.failures.size() && k < 3; ++k) s += "; " + r.failures[k];
    return s;
}

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

std::size_t column(const std::vector<int>& ns, int n) {
    for (std::size_t k = 0; k < ns.size(); ++k)
        if (ns[k] == n) return k;
    return ns.size();
}

void table1() {
    const auto t0 = std::chrono::steady_clock::now();
    SweepConfig cfg;
    cfg.eps_set = {0x1p-10, 0x1p-12, 0x1p-40};
    cfg.mu_set = {0x1p-4};
    const SweepResult r = run_sweep(cfg);
    const std::vector<int> ns{64, 256, 2048};
    const double target[3][3] = {{7.23e-01, 2.59e-01, 2.93e-02}, {6.40e-01, 2.92e-01, 4.73e-02}, {6.12e-01, 2.81e-01, 4.65e-02}};
    bool ok = true;
    double worst = 0.0;
    std::string bad;
    for (std::size_t ie = 0; ie < 3; ++ie) {
        for (std::size_t k = 0; k < ns.size(); ++k) {
            const double got = r.table1[ie].values[column(r.n_set, ns[k])];
            const double d = rel(got, target[ie][k]);
            worst = std::max(worst, d);
            if (d > 0.05) {
                ok = false;
                bad += " eps=" + format_param(cfg.eps_set[ie]) + " N=" + std::to_string(ns[k]) + " got " + format_sci(got) +
                       " want " + format_sci(target[ie][k]) + ";";
            }
        }
    }
    const double t = seconds_since(t0);
    report(1, ok && t < 10.0,
           "fixed-mu table, worst relative deviation " + format_fixed(100.0 * worst, 1) + "%, " + format_fixed(t, 1) + " s;" + bad);
}

void tables23() {
    const auto t0 = std::chrono::steady_clock::now();
    const SweepResult r = run_sweep(SweepConfig{});
    const double t = seconds_since(t0);

    struct Row {
        double mu;
        std::vector<double> values;
    };
    const std::vector<Row> target{
        {0x1p-4, {7.23e-01, 4.52e-01, 2.92e-01, 1.75e-01, 9.64e-02, 4.73e-02}},
        {0x1p-10, {1.09e+00, 7.61e-01, 4.89e-01, 2.89e-01, 1.54e-01, 6.89e-02}},
        {0x1p-20, {1.09e+00, 7.62e-01, 4.90e-01, 2.90e-01, 1.54e-01, 6.89e-02}},
    };
    bool ok = true;
    double worst = 0.0;
    std::string bad;
    for (const auto& row : target) {
        const TableRow* got = nullptr;
        for (const auto& tr : r.table2)
            if (tr.param == row.mu) got = &tr;
        if (!got) {
            ok = false;
            bad += " missing mu=" + format_param(row.mu) + ";";
            continue;
        }
        for (std::size_t k = 0; k < row.values.size(); ++k) {
            const double d = rel(got->values[k], row.values[k]);
            worst = std::max(worst, d);
            if (d > 0.05) {
                ok = false;
                bad += " mu=" + format_param(row.mu) + " N=" + std::to_string(r.n_set[k]) + " got " + format_sci(got->values[k]) +
                       " want " + format_sci(row.values[k]) + ";";
            }
        }
    }
    report(2, ok && t < 300.0,
           "max-over-eps table, worst relative deviation " + format_fixed(100.0 * worst, 1) + "%, sweep " + format_fixed(t, 1) +
               " s;" + bad);

    const std::vector<double> orders{0.52, 0.64, 0.76, 0.91, 1.16};
    ok = r.table3.size() == orders.size() + 1;
    std::string got;
    bad.clear();
    for (std::size_t k = 0; k < orders.size() && k < r.table3.size(); ++k) {
        const auto& p = r.table3[k].p;
        got += " " + (p ? format_fixed(*p, 2) : std::string("-"));
        if (!p || std::abs(*p - orders[k]) > 0.05) {
            ok = false;
            bad += " N=" + std::to_string(r.table3[k].n) + " want " + format_fixed(orders[k], 2) + ";";
        }
    }
    report(3, ok, "orders" + got + ";" + bad);
}

void suite(int k, const SuiteResult& r, bool extra_ok = true, const std::string& extra = {}) {
    report(k, r.passed() && extra_ok, r.name + ": " + detail(r) + extra);
}

}  // namespace

int main() {
    table1();
    tables23();

    auto t0 = std::chrono::steady_clock::now();
    const SuiteResult ident = operator_identity_suite();
    const double t_ident = seconds_since(t0);
    suite(4, ident, t_ident < 1.0, "; " + format_fixed(t_ident, 2) + " s");

    suite(5, m_matrix_suite());
    suite(6, decomposition_suite());
    suite(7, barrier_suite());
    suite(8, exact_residual_suite());

    RateOptions rates;
    rates.interpolation_params.clear();
    suite(9, rate_suite(rates));

    RateOptions interp;
    interp.params.clear();
    SuiteResult ir = rate_suite(interp);
    ir.name = "interpolation";
    suite(10, ir);

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
