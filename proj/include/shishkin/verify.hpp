#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "shishkin/dyadic.hpp"
#include "shishkin/experiments.hpp"
#include "shishkin/mesh.hpp"
#include "shishkin/norms.hpp"
#include "shishkin/operators.hpp"
#include "shishkin/reference.hpp"
#include "shishkin/solver.hpp"

namespace shishkin {

struct SuiteResult {
    std::string name;
    std::size_t checks = 0;
    std::vector<std::string> failures;
    std::vector<std::string> summary;

    bool passed() const { return failures.empty(); }
    void check(bool ok, const std::function<std::string()>& what) {
        ++checks;
        if (!ok) failures.push_back(what());
    }
};

inline std::string params_label(double eps, double mu) { return "eps=" + format_param(eps) + " mu=" + format_param(mu); }

inline std::string params_label(double eps, double mu, int n) { return params_label(eps, mu) + " N=" + std::to_string(n); }

/// Random strictly increasing mesh on [0,1] with step ratios up to 20.
inline Mesh random_mesh(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> gap(0.05, 1.0);
    std::vector<double> w(static_cast<std::size_t>(n));
    for (auto& g : w) g = gap(rng);
    double total = 0.0;
    for (double g : w) total += g;
    std::vector<double> x(static_cast<std::size_t>(n) + 1, 0.0);
    double acc = 0.0;
    for (int i = 1; i < n; ++i) {
        acc += w[static_cast<std::size_t>(i - 1)];
        x[static_cast<std::size_t>(i)] = acc / total;
    }
    x.back() = 1.0;
    return Mesh::from_nodes(std::move(x));
}

struct IdentityOptions {
    int meshes = 100;
    int n_min = 8;
    int n_max = 128;
    double tolerance = 1e-13;
    std::uint64_t seed = 20260101;
};

/// delta2_hat(D-Z) = D-(delta2 Z) and the discrete product rule on random
/// meshes. Differences are measured relative to the magnitude of the terms
/// being differenced, which makes the data O(1) regardless of the step sizes.
inline SuiteResult operator_identity_suite(const IdentityOptions& opt = {}) {
    SuiteResult res{"operators-identities", 0, {}, {}};
    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<int> pick_n(opt.n_min / 4, opt.n_max / 4);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    double worst_hat = 0.0, worst_prod = 0.0;
    for (int t = 0; t < opt.meshes; ++t) {
        const int n = 4 * pick_n(rng);
        auto mesh = std::make_shared<const Mesh>(random_mesh(n, rng));
        std::vector<double> zv(mesh->size()), pv(mesh->size()), qv(mesh->size());
        for (std::size_t i = 0; i < zv.size(); ++i) {
            zv[i] = val(rng);
            pv[i] = val(rng);
            qv[i] = val(rng);
        }
        const MeshFunction z(mesh, zv), p(mesh, pv), q(mesh, qv);
        const MeshFunction dz = d_minus_all(z);
        const MeshFunction d2z = delta2_all(z);
        for (int i = 2; i < n; ++i) {
            const double lhs = delta2_hat(dz, i);
            const double rhs = d_minus(d2z, i);
            const double scale = (std::abs(d2z[i]) + std::abs(d2z[i - 1])) * mesh->inv_h(i);
            const double err = std::abs(lhs - rhs) / scale;
            worst_hat = std::max(worst_hat, err);
            res.check(err <= opt.tolerance, [&] {
                return "delta2_hat identity mesh " + std::to_string(t) + " i=" + std::to_string(i) + " rel=" + format_sci(err);
            });
        }
        for (int i = 1; i <= n; ++i) {
            const double scale = (std::abs(p[i] * q[i]) + std::abs(p[i - 1] * q[i - 1])) * mesh->inv_h(i);
            const double err = std::abs(product_rule_residual(p, q, i)) / scale;
            worst_prod = std::max(worst_prod, err);
            res.check(err <= opt.tolerance, [&] {
                return "product rule mesh " + std::to_string(t) + " i=" + std::to_string(i) + " rel=" + format_sci(err);
            });
        }
    }
    res.summary.push_back("delta2_hat identity worst relative difference " + format_sci(worst_hat));
    res.summary.push_back("product rule worst relative difference " + format_sci(worst_prod));
    return res;
}

/// Sign pattern and strict diagonal dominance of every upwind system of a sweep,
/// fine mesh included.
inline SuiteResult m_matrix_suite(const SweepConfig& cfg = {}) {
    SuiteResult res{"m-matrix", 0, {}, {}};
    std::vector<int> ns = cfg.n_set;
    ns.push_back(cfg.n_fine);
    std::size_t systems = 0;
    for (double eps : cfg.eps_set) {
        for (double mu : cfg.mu_set) {
            const Problem p = make_problem(cfg.problem, eps, mu);
            const Regime r = classify(p);
            for (int n : ns) {
                const Mesh m = shishkin_mesh(n, r);
                const TridiagonalSystem s = assemble_upwind(p, m);
                ++systems;
                std::size_t bad = 0;
                for (std::size_t k = 0; k < s.size(); ++k) {
                    if (!(s.sub[k] <= 0.0) || !(s.sup[k] < 0.0) || !(s.diag[k] > std::abs(s.sub[k]) + std::abs(s.sup[k]))) ++bad;
                }
                res.check(bad == 0, [&] { return params_label(eps, mu, n) + ": " + std::to_string(bad) + " rows violate"; });
            }
        }
    }
    res.summary.push_back(std::to_string(systems) + " systems checked");
    return res;
}

struct DecompositionOptions {
    int configs = 20;
    std::uint64_t seed = 7;
    double tolerance = 1e-12;
};

/// V + W_L + W_R = U for random parameters, N and boundary splits.
inline SuiteResult decomposition_suite(const DecompositionOptions& opt = {}) {
    SuiteResult res{"decomposition", 0, {}, {}};
    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<int> pick_eps(0, 40), pick_mu(0, 20), pick_n(3, 11);
    std::uniform_real_distribution<double> val(-2.0, 2.0);
    double worst = 0.0;
    for (int t = 0; t < opt.configs; ++t) {
        const double eps = std::ldexp(1.0, -pick_eps(rng));
        const double mu = std::ldexp(1.0, -pick_mu(rng));
        const int n = 1 << pick_n(rng);
        const Problem p = paper_example_problem(eps, mu);
        BoundarySplit s;
        s.wl0 = val(rng);
        s.wl1 = val(rng);
        s.wr0 = val(rng);
        s.wr1 = val(rng);
        s.v0 = p.u0 - s.wl0 - s.wr0;
        s.v1 = p.u1 - s.wl1 - s.wr1;
        const Decomposition d = decompose(p, n, s);
        double diff = 0.0, unorm = 0.0;
        for (int i = 0; i <= n; ++i) {
            diff = std::max(diff, std::abs(d.v[i] + d.w_l[i] + d.w_r[i] - d.u[i]));
            unorm = std::max(unorm, std::abs(d.u[i]));
        }
        const double rel = diff / std::max(1.0, unorm);
        worst = std::max(worst, rel);
        res.check(rel <= opt.tolerance, [&] { return params_label(eps, mu, n) + ": superposition error " + format_sci(rel); });
    }
    res.summary.push_back("worst superposition error " + format_sci(worst));
    return res;
}

/// Barrier domination where the mesh hypotheses hold, and N^-2 decay of the
/// layer components outside their layers across doublings.
inline SuiteResult barrier_suite(const SweepConfig& cfg = {}, double shrink = 3.5) {
    SuiteResult res{"barriers", 0, {}, {}};
    std::size_t checked = 0, skipped = 0;
    for (double eps : cfg.eps_set) {
        for (double mu : cfg.mu_set) {
            const Problem p = make_problem(cfg.problem, eps, mu);
            const Regime r = classify(p);
            std::vector<BarrierReport> reps;
            std::vector<bool> met;
            for (int n : cfg.n_set) {
                const Decomposition d = decompose(p, n);
                reps.push_back(verify_layer_bounds(d, r));
                const auto& rep = reps.back();
                met.push_back(rep.hypotheses_met);
                if (!rep.hypotheses_met) {
                    ++skipped;
                    continue;
                }
                ++checked;
                res.check(rep.bound_holds_l, [&] { return params_label(eps, mu, n) + ": left barrier bound fails"; });
                res.check(rep.bound_holds_r, [&] { return params_label(eps, mu, n) + ": right barrier bound fails"; });
            }
            for (std::size_t k = 0; k + 1 < reps.size(); ++k) {
                if (!met[k] || !met[k + 1]) continue;
                const auto decays = [&](double a, double b) { return b == 0.0 || a >= shrink * b; };
                const double l0 = reps[k].outside_layer_max_l, l1 = reps[k + 1].outside_layer_max_l;
                const double r0 = reps[k].outside_layer_max_r, r1 = reps[k + 1].outside_layer_max_r;
                res.check(decays(l0, l1), [&] {
                    return params_label(eps, mu, cfg.n_set[k]) + ": |W_L| outside layer " + format_sci(l0) + " -> " + format_sci(l1);
                });
                res.check(decays(r0, r1), [&] {
                    return params_label(eps, mu, cfg.n_set[k]) + ": |W_R| outside layer " + format_sci(r0) + " -> " + format_sci(r1);
                });
            }
        }
    }
    res.summary.push_back(std::to_string(checked) + " configurations checked, " + std::to_string(skipped) +
                          " skipped (mesh hypotheses not met)");
    return res;
}

struct RateOptions {
    std::vector<std::pair<double, double>> params{{0x1p-20, 0x1p-4}, {0x1p-20, 0x1p-12}};
    std::vector<std::pair<double, double>> interpolation_params{{0x1p-20, 0x1p-4}, {0x1p-20, 0x1p-12}};
    std::vector<int> n_set{64, 128, 256, 512, 1024, 2048};
    int n_fine = 8192;
    double band = 3.0;
    double slack = 0.10;
};

/// Error of the nodal interpolant of u itself, max over the fine mesh.
inline double interpolation_error(const ExactTestSolution& exact, int n, const FineReference& ref) {
    const Regime r = classify(exact.eps(), exact.mu(), exact.coefficients().a, exact.coefficients().b / exact.coefficients().a);
    auto mesh = std::make_shared<const Mesh>(shishkin_mesh(n, r));
    const MeshFunction u = MeshFunction::sample(mesh, [&](double x) { return exact.u(x); });
    const LinearInterpolant ubar(u);
    double e = 0.0;
    for (std::size_t j = 0; j < ref.mesh->size(); ++j) e = std::max(e, std::abs(ref.u[j] - ubar.eval(ref.mesh->nodes()[j])));
    return e;
}

/// Boundedness of E^N N / (ln N)^3 with the analytic derivative, monotone
/// region-wise nodal flux errors, and (N / ln N)^2 boundedness of the
/// interpolation error.
inline SuiteResult rate_suite(const RateOptions& opt = {}) {
    SuiteResult res{"rates", 0, {}, {}};
    for (const auto& [eps, mu] : opt.params) {
        const Problem p = paper_example_problem(eps, mu);
        const ExactTestSolution exact = ExactTestSolution::paper_example(eps, mu);
        const FineReference ref = make_fine_reference(
            classify(p), [&](double x) { return exact.u(x); }, [&](double x) { return exact.du(x); }, opt.n_fine);
        std::vector<ErrorRecord> recs;
        for (int n : opt.n_set) recs.push_back(scaled_c1_error(solve(p, n), ref));
        const RateReport rep = rate_check(recs, Rate::Nlog3N);
        res.check(rep.status == RateStatus::Pass, [&] {
            return params_label(eps, mu) + ": E N/(ln N)^3 max/min = " + format_fixed(rep.ratio, 2);
        });
        res.summary.push_back(params_label(eps, mu) + ": E N/(ln N)^3 max/min = " + format_fixed(rep.ratio, 2) + " (" +
                              to_string(rep.status) + ")");
        static const char* region[] = {"left", "interior", "right"};
        for (std::size_t k = 0; k + 1 < recs.size(); ++k) {
            for (std::size_t g = 0; g < 3; ++g) {
                const double a = recs[k].nodal_flux_by_region[g], b = recs[k + 1].nodal_flux_by_region[g];
                res.check(b <= (1.0 + opt.slack) * a, [&] {
                    return params_label(eps, mu, recs[k + 1].n) + ": " + region[g] + " nodal flux error grew " + format_sci(a) +
                           " -> " + format_sci(b);
                });
            }
        }
    }
    for (const auto& [eps, mu] : opt.interpolation_params) {
        const ExactTestSolution exact = ExactTestSolution::paper_example(eps, mu);
        const FineReference ref = make_fine_reference(
            classify(eps, mu, 1.0, 1.0), [&](double x) { return exact.u(x); }, [&](double x) { return exact.du(x); },
            opt.n_fine);
        std::vector<std::pair<int, double>> errs;
        for (int n : opt.n_set) errs.emplace_back(n, interpolation_error(exact, n, ref));
        const RateReport rep = bounded_sequence(errs, 2.0, 2, opt.band);
        res.check(rep.status == RateStatus::Pass, [&] {
            return params_label(eps, mu) + ": interpolation error N^2/(ln N)^2 max/min = " + format_fixed(rep.ratio, 2);
        });
        res.summary.push_back(params_label(eps, mu) + ": interpolation N^2/(ln N)^2 max/min = " + format_fixed(rep.ratio, 2) +
                              " (" + to_string(rep.status) + ")");
    }
    return res;
}

struct ResidualOptions {
    std::vector<double> eps_set = dyadic_set(0, 20, 2);
    std::vector<double> mu_set = dyadic_set(0, 10, 2);
    int samples = 101;
    double tolerance = 1e-8;
    double boundary_tolerance = 1e-12;
};

/// The closed form satisfies the ODE and the boundary conditions.
inline SuiteResult exact_residual_suite(const ResidualOptions& opt = {}) {
    SuiteResult res{"exact-residual", 0, {}, {}};
    double worst = 0.0, worst_bc = 0.0;
    for (double eps : opt.eps_set) {
        for (double mu : opt.mu_set) {
            const ExactTestSolution s = ExactTestSolution::paper_example(eps, mu);
            const double bc = std::max(std::abs(s.u(0.0) - 1.0), std::abs(s.u(1.0)));
            worst_bc = std::max(worst_bc, bc);
            res.check(bc <= opt.boundary_tolerance, [&] { return params_label(eps, mu) + ": boundary error " + format_sci(bc); });
            for (int k = 0; k < opt.samples; ++k) {
                const double x = static_cast<double>(k) / (opt.samples - 1);
                const double t1 = -eps * s.d2u(x), t2 = mu * s.du(x), t3 = s.u(x);
                const double scale = std::abs(t1) + std::abs(t2) + std::abs(t3) + std::abs(x);
                const double rel = std::abs(t1 + t2 + t3 - x) / scale;
                worst = std::max(worst, rel);
                res.check(rel <= opt.tolerance, [&] {
                    return params_label(eps, mu) + " x=" + format_real(x) + ": relative residual " + format_sci(rel);
                });
            }
        }
    }
    res.summary.push_back("worst relative ODE residual " + format_sci(worst));
    res.summary.push_back("worst boundary error " + format_sci(worst_bc));
    return res;
}

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"operators-identities", "m-matrix", "barriers", "rates", "exact-residual",
                                                "decomposition"};
    return names;
}

inline SuiteResult run_suite(const std::string& name) {
    if (name == "operators-identities") return operator_identity_suite();
    if (name == "m-matrix") return m_matrix_suite();
    if (name == "barriers") return barrier_suite();
    if (name == "rates") return rate_suite();
    if (name == "exact-residual") return exact_residual_suite();
    if (name == "decomposition") return decomposition_suite();
    throw ConfigError("unknown verification suite '" + name + "'");
}

}  // namespace shishkin
