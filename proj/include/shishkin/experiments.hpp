#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "shishkin/dyadic.hpp"
#include "shishkin/errors.hpp"
#include "shishkin/norms.hpp"
#include "shishkin/reference.hpp"
#include "shishkin/solver.hpp"

namespace shishkin {

inline std::vector<double> dyadic_set(int first, int last, int stride) {
    std::vector<double> out;
    for (int j = first; j <= last; ++j) out.push_back(std::ldexp(1.0, -stride * j));
    return out;
}

struct SweepConfig {
    std::vector<double> eps_set = dyadic_set(0, 20, 2);
    std::vector<double> mu_set = dyadic_set(0, 10, 2);
    std::vector<int> n_set{64, 128, 256, 512, 1024, 2048};
    int n_fine = 8192;
    ProblemSpec problem;
    /// mu of the fixed-mu table.
    double table1_mu = 0x1p-4;
    FluxReference flux_reference = FluxReference::FineSolve;
    /// 0 means hardware concurrency.
    int threads = 0;

    void validate() const {
        if (eps_set.empty() || mu_set.empty() || n_set.empty()) throw ConfigError("sweep sets must be non-empty");
        for (double e : eps_set) check_parameters(e, 0.0);
        for (double m : mu_set) check_parameters(1.0, m);
        int max_n = 0;
        for (int n : n_set) {
            if (n < 8 || n % 4 != 0) throw ConfigError("N must be >= 8 and divisible by 4, got " + std::to_string(n));
            max_n = std::max(max_n, n);
        }
        if (n_fine % 4 != 0 || n_fine < 4 * max_n) throw ConfigError("n_fine must be divisible by 4 and >= 4 max(N)");
        if (threads < 0) throw ConfigError("threads must be >= 0");
    }
};

struct TableRow {
    double param = 0.0;
    std::vector<double> values;  // one per N in n_set order
};

struct Table3Entry {
    int n = 0;
    double e = 0.0;
    std::optional<double> p;  // empty for the last N or an undefined order
};

struct SweepResult {
    std::vector<int> n_set;
    std::vector<ErrorRecord> records;  // ordered by (eps index, mu index, n index)
    std::vector<TableRow> table1;      // per eps at table1_mu
    std::vector<TableRow> table2;      // per mu, max over eps
    std::vector<Table3Entry> table3;
};

namespace detail {

[[noreturn]] inline void rethrow_with_context(std::exception_ptr e, const std::string& where) {
    try {
        std::rethrow_exception(e);
    } catch (const NumericalError& x) {
        throw NumericalError(where + ": " + x.what());
    } catch (const DomainError& x) {
        throw DomainError(where + ": " + x.what());
    } catch (const ConfigError& x) {
        throw ConfigError(where + ": " + x.what());
    } catch (const std::exception& x) {
        throw NumericalError(where + ": " + x.what());
    }
}

inline int worker_count(int requested, std::size_t jobs) {
    int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
    n = std::max(1, n);
    return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(n), jobs));
}

}  // namespace detail

/// Runs fn(job) for job = 0..jobs-1 on a small pool. The first failure in job
/// order is rethrown with its context.
template <class Fn, class Ctx>
void parallel_for(std::size_t jobs, int threads, Fn fn, Ctx context) {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(jobs);
    auto work = [&] {
        for (std::size_t j = next++; j < jobs; j = next++) {
            try {
                fn(j);
            } catch (...) {
                errors[j] = std::current_exception();
            }
        }
    };
    const int count = detail::worker_count(threads, jobs);
    std::vector<std::thread> pool;
    for (int t = 1; t < count; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    for (std::size_t j = 0; j < jobs; ++j)
        if (errors[j]) detail::rethrow_with_context(errors[j], context(j));
}

inline SweepResult run_sweep(const SweepConfig& cfg) {
    cfg.validate();
    const std::size_t ne = cfg.eps_set.size(), nm = cfg.mu_set.size(), nn = cfg.n_set.size();
    SweepResult res;
    res.n_set = cfg.n_set;
    res.records.resize(ne * nm * nn);
    std::vector<int> failed_n(ne * nm, 0);

    parallel_for(
        ne * nm, cfg.threads,
        [&](std::size_t job) {
            const double eps = cfg.eps_set[job / nm];
            const double mu = cfg.mu_set[job % nm];
            const Problem p = make_problem(cfg.problem, eps, mu);
            const ExactTestSolution exact = make_exact(cfg.problem, eps, mu);
            const auto u = [&](double x) { return exact.u(x); };
            const auto du = [&](double x) { return exact.du(x); };
            failed_n[job] = cfg.n_fine;
            const FineReference ref = make_fine_reference(p, u, du, cfg.n_fine, cfg.flux_reference);
            for (std::size_t k = 0; k < nn; ++k) {
                failed_n[job] = cfg.n_set[k];
                res.records[job * nn + k] = scaled_c1_error(solve(p, cfg.n_set[k]), ref);
            }
        },
        [&](std::size_t job) {
            return "eps=" + format_param(cfg.eps_set[job / nm]) + " mu=" + format_param(cfg.mu_set[job % nm]) +
                   " N=" + std::to_string(failed_n[job]);
        });

    const auto rec = [&](std::size_t ie, std::size_t im, std::size_t k) -> const ErrorRecord& {
        return res.records[(ie * nm + im) * nn + k];
    };
    for (std::size_t im = 0; im < nm; ++im) {
        if (cfg.mu_set[im] != cfg.table1_mu) continue;
        for (std::size_t ie = 0; ie < ne; ++ie) {
            TableRow row{cfg.eps_set[ie], {}};
            for (std::size_t k = 0; k < nn; ++k) row.values.push_back(rec(ie, im, k).e_total);
            res.table1.push_back(std::move(row));
        }
        break;
    }
    for (std::size_t im = 0; im < nm; ++im) {
        TableRow row{cfg.mu_set[im], std::vector<double>(nn, 0.0)};
        for (std::size_t ie = 0; ie < ne; ++ie)
            for (std::size_t k = 0; k < nn; ++k) row.values[k] = std::max(row.values[k], rec(ie, im, k).e_total);
        res.table2.push_back(std::move(row));
    }
    std::vector<std::pair<int, double>> maxima;
    for (std::size_t k = 0; k < nn; ++k) {
        double e = 0.0;
        for (const auto& row : res.table2) e = std::max(e, row.values[k]);
        maxima.emplace_back(cfg.n_set[k], e);
    }
    if (nn >= 2) {
        const auto orders = convergence_orders(maxima);
        for (std::size_t k = 0; k < nn; ++k) {
            Table3Entry t{maxima[k].first, maxima[k].second, std::nullopt};
            if (k < orders.size()) t.p = orders[k].p;
            res.table3.push_back(t);
        }
    }
    return res;
}

/// Interpolant of the discrete solution at `sample_count` uniform points plus
/// every mesh node, sorted by x.
inline std::vector<std::pair<double, double>> figure_data(const Problem& p, int n, int sample_count) {
    if (sample_count < 2) throw ConfigError("sample_count must be >= 2");
    const DiscreteSolution sol = solve(p, n);
    const LinearInterpolant ubar(sol.u);
    std::vector<double> xs(sol.mesh->nodes().begin(), sol.mesh->nodes().end());
    for (int k = 0; k < sample_count; ++k) xs.push_back(k == sample_count - 1 ? 1.0 : static_cast<double>(k) / (sample_count - 1));
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::vector<std::pair<double, double>> out;
    out.reserve(xs.size());
    for (double x : xs) out.emplace_back(x, ubar.eval(x));
    return out;
}

enum class Rate { NlogN = 1, Nlog2N = 2, Nlog3N = 3 };

enum class RateStatus { Pass, Fail, Inconclusive };

inline const char* to_string(RateStatus s) {
    switch (s) {
        case RateStatus::Pass: return "pass";
        case RateStatus::Fail: return "fail";
        default: return "inconclusive";
    }
}

struct RateReport {
    RateStatus status = RateStatus::Inconclusive;
    std::vector<int> n;
    std::vector<double> normalized;
    double ratio = 0.0;  // max / min of the normalized sequence
};

/// Bounded-sequence test on e * N^a / (ln N)^k over doubling N.
inline RateReport bounded_sequence(const std::vector<std::pair<int, double>>& errors, double n_power, int log_power,
                                   double band = 3.0) {
    RateReport rep;
    for (std::size_t k = 1; k < errors.size(); ++k)
        if (errors[k].first != 2 * errors[k - 1].first) throw ConfigError("rate check needs consecutive doublings of N");
    for (const auto& [n, e] : errors) {
        rep.n.push_back(n);
        rep.normalized.push_back(e * std::pow(n, n_power) / std::pow(std::log(static_cast<double>(n)), log_power));
    }
    if (errors.size() < 3) return rep;
    const auto [lo, hi] = std::minmax_element(rep.normalized.begin(), rep.normalized.end());
    rep.ratio = *lo > 0.0 ? *hi / *lo : std::numeric_limits<double>::infinity();
    rep.status = rep.ratio <= band ? RateStatus::Pass : RateStatus::Fail;
    return rep;
}

/// e * N / (ln N)^k bounded, k = 1, 2, 3, for records sharing (eps, mu).
inline RateReport rate_check(const std::vector<ErrorRecord>& records, Rate rate) {
    std::vector<std::pair<int, double>> errors;
    for (const auto& r : records) {
        if (r.eps != records.front().eps || r.mu != records.front().mu)
            throw ConfigError("rate check records must share (eps, mu)");
        errors.emplace_back(r.n, r.e_total);
    }
    std::sort(errors.begin(), errors.end());
    return bounded_sequence(errors, 1.0, static_cast<int>(rate));
}

}  // namespace shishkin
