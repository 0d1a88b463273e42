#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "shishkin/errors.hpp"
#include "shishkin/mesh.hpp"
#include "shishkin/operators.hpp"
#include "shishkin/problem.hpp"

namespace shishkin {

/// Relative tolerance on the interior residual of a discrete solve.
inline constexpr double kResidualTolerance = 1e-10;

struct DiscreteSolution {
    MeshPtr mesh;
    MeshFunction u;
    Regime regime;
    ProblemDiagnostics diagnostics;
    /// max_i |L^N U_i - f_i| / (|sub||U_{i-1}| + |diag||U_i| + |sup||U_{i+1}| + |f_i|)
    double max_residual = 0.0;
};

/// Row-scaled residual of the interior equations. The scale is the sum of
/// magnitudes of the terms in each row, since the diagonal alone can reach
/// 1e15 on fine layer meshes. Scales below min/epsilon, where values lose
/// relative precision to gradual underflow, are raised to that floor.
inline double relative_residual(const TridiagonalSystem& s, const std::vector<double>& u,
                                const std::vector<double>& source) {
    constexpr double floor = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
    double worst = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) {
        const double l = s.sub[k] * u[k];
        const double c = s.diag[k] * u[k + 1];
        const double r = s.sup[k] * u[k + 2];
        const double scale = std::abs(l) + std::abs(c) + std::abs(r) + std::abs(source[k]);
        const double res = std::abs((l + c + r) - source[k]);
        worst = std::max(worst, res / std::max(scale, floor));
    }
    return worst;
}

/// Solves L^N Z = source with Z(0) = bc0, Z(1) = bc1 on the given mesh and
/// checks the residual contract.
inline MeshFunction solve_component(const Problem& p, const MeshPtr& mesh, const Coefficient& source, double bc0,
                                    double bc1, double* residual = nullptr) {
    const TridiagonalSystem s = assemble_upwind(p, *mesh, source, bc0, bc1);
    std::vector<double> u = thomas_solve(s);
    std::vector<double> g(s.size());
    for (int i = 1; i < mesh->n(); ++i) g[static_cast<std::size_t>(i - 1)] = source(mesh->x(i));
    const double res = relative_residual(s, u, g);
    if (!(res <= kResidualTolerance))
        throw NumericalError("interior residual " + std::to_string(res) + " exceeds tolerance");
    if (residual) *residual = res;
    return MeshFunction(mesh, std::move(u));
}

/// Solve on a caller-supplied mesh.
inline DiscreteSolution solve_on(const Problem& p, MeshPtr mesh) {
    DiscreteSolution sol;
    sol.regime = classify(p);
    sol.diagnostics = validate(p, mesh->nodes());
    sol.mesh = mesh;
    sol.u = solve_component(p, mesh, p.f, p.u0, p.u1, &sol.max_residual);
    return sol;
}

/// classify -> transition points -> Shishkin mesh -> upwind system -> Thomas.
inline DiscreteSolution solve(const Problem& p, int n) {
    const Regime r = classify(p);
    auto mesh = std::make_shared<const Mesh>(shishkin_mesh(n, r));
    return solve_on(p, std::move(mesh));
}

/// Boundary values of V, W_L and W_R at x = 0 and x = 1.
struct BoundarySplit {
    double v0 = 0.0, v1 = 0.0;
    double wl0 = 0.0, wl1 = 0.0;
    double wr0 = 0.0, wr1 = 0.0;
};

/// V takes the reduced solution at both ends, W_L absorbs the jump at 0 and
/// W_R the jump at 1. The reduced solution is f/b when theta = 1 and
/// problem.reduced otherwise.
inline BoundarySplit default_split(const Problem& p) {
    const Regime r = classify(p);
    double v0 = 0.0, v1 = 0.0;
    if (r.theta == 1.0) {
        v0 = p.f(0.0) / p.b(0.0);
        v1 = p.f(1.0) / p.b(1.0);
    } else {
        if (!p.reduced) throw ConfigError("default split needs the reduced solution when theta > 1");
        v0 = p.reduced(0.0);
        v1 = p.reduced(1.0);
    }
    return {v0, v1, p.u0 - v0, 0.0, 0.0, p.u1 - v1};
}

/// Whole solution assigned to V.
inline BoundarySplit trivial_split(const Problem& p) { return {p.u0, p.u1, 0.0, 0.0, 0.0, 0.0}; }

struct Decomposition {
    MeshFunction u;
    MeshFunction v;
    MeshFunction w_l;
    MeshFunction w_r;
    BoundarySplit split;
    Regime regime;
};

inline void check_split(const Problem& p, const BoundarySplit& s) {
    const double at0 = s.v0 + s.wl0 + s.wr0;
    const double at1 = s.v1 + s.wl1 + s.wr1;
    if (std::abs(at0 - p.u0) > 1e-12 * std::max(1.0, std::abs(p.u0)) ||
        std::abs(at1 - p.u1) > 1e-12 * std::max(1.0, std::abs(p.u1)))
        throw ConfigError("boundary split does not sum to the boundary data");
}

inline Decomposition decompose(const Problem& p, int n, const BoundarySplit& split) {
    check_split(p, split);
    const DiscreteSolution sol = solve(p, n);
    const Coefficient zero = [](double) { return 0.0; };
    Decomposition d;
    d.u = sol.u;
    d.regime = sol.regime;
    d.split = split;
    d.v = solve_component(p, sol.mesh, p.f, split.v0, split.v1);
    d.w_l = solve_component(p, sol.mesh, zero, split.wl0, split.wl1);
    d.w_r = solve_component(p, sol.mesh, zero, split.wr0, split.wr1);
    return d;
}

inline Decomposition decompose(const Problem& p, int n) { return decompose(p, n, default_split(p)); }

namespace detail {

/// log of prod_{i=1..j} (1 + rho h_i)^{-1}, j = 0..N.
inline std::vector<double> log_psi_l(const Mesh& m, double rho) {
    std::vector<double> out(m.size(), 0.0);
    for (int i = 1; i <= m.n(); ++i) out[static_cast<std::size_t>(i)] = out[static_cast<std::size_t>(i - 1)] - std::log1p(rho * m.h(i));
    return out;
}

/// log of prod_{i=j+1..N} (1 + rho h_i / 2)^{-1}, j = 0..N.
inline std::vector<double> log_psi_r(const Mesh& m, double rho) {
    std::vector<double> out(m.size(), 0.0);
    for (int j = m.n() - 1; j >= 0; --j)
        out[static_cast<std::size_t>(j)] = out[static_cast<std::size_t>(j + 1)] - std::log1p(0.5 * rho * m.h(j + 1));
    return out;
}

inline MeshFunction scaled_exp(const MeshPtr& mesh, const std::vector<double>& logs, double c) {
    std::vector<double> v(logs.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = c * std::exp(logs[i]);
    return MeshFunction(mesh, std::move(v));
}

inline double log_abs(double v) { return v == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(std::abs(v)); }

struct BarrierFit {
    double log_c;
    bool holds;
};

/// Smallest c with |W(x_0)| and |W(x_N)| under c*psi, then the check over all
/// nodes, all in log space so that underflowed products stay meaningful.
inline BarrierFit fit_barrier(const MeshFunction& w, const std::vector<double>& logs) {
    const std::size_t last = logs.size() - 1;
    const double log_c = std::max(log_abs(w.values.front()) - logs.front(), log_abs(w.values.back()) - logs.back());
    const double slack = std::log1p(1e-10);
    bool holds = true;
    for (std::size_t j = 0; j <= last; ++j) {
        const double lw = log_abs(w.values[j]);
        if (lw == -std::numeric_limits<double>::infinity()) continue;
        if (!(lw <= log_c + logs[j] + slack)) {
            holds = false;
            break;
        }
    }
    return {log_c, holds};
}

}  // namespace detail

/// c * prod_{i=1..j} (1 + rho_l h_i)^{-1}.
inline MeshFunction barrier_psi_l(const MeshPtr& mesh, double rho_l, double c) {
    return detail::scaled_exp(mesh, detail::log_psi_l(*mesh, rho_l), c);
}

/// c * prod_{i=j+1..N} (1 + rho_r h_i / 2)^{-1}.
inline MeshFunction barrier_psi_r(const MeshPtr& mesh, double rho_r, double c) {
    return detail::scaled_exp(mesh, detail::log_psi_r(*mesh, rho_r), c);
}

struct BarrierReport {
    MeshFunction psi_l;
    MeshFunction psi_r;
    double c_l = 0.0;
    double c_r = 0.0;
    bool bound_holds_l = true;
    bool bound_holds_r = true;
    double outside_layer_max_l = 0.0;
    double outside_layer_max_r = 0.0;
    /// sigma_r <= sigma_l < 1/4 and both decay rates above 1.
    bool hypotheses_met = false;
};

inline BarrierReport verify_layer_bounds(const Decomposition& d, const Regime& r) {
    const MeshPtr& mesh = d.u.mesh;
    if (!mesh->is_piecewise_uniform()) throw ConfigError("layer bounds need a piecewise-uniform mesh");
    BarrierReport rep;
    const auto log_l = detail::log_psi_l(*mesh, r.rho_l);
    const auto log_r = detail::log_psi_r(*mesh, r.rho_r);
    const auto fit_l = detail::fit_barrier(d.w_l, log_l);
    const auto fit_r = detail::fit_barrier(d.w_r, log_r);
    rep.c_l = std::exp(fit_l.log_c);
    rep.c_r = std::exp(fit_r.log_c);
    rep.bound_holds_l = fit_l.holds;
    rep.bound_holds_r = fit_r.holds;
    rep.psi_l = detail::scaled_exp(mesh, log_l, rep.c_l);
    rep.psi_r = detail::scaled_exp(mesh, log_r, rep.c_r);
    const double sl = mesh->sigma_l();
    const double right_start = 1.0 - mesh->sigma_r();
    for (int i = 0; i <= mesh->n(); ++i) {
        const double x = mesh->x(i);
        if (x >= sl) rep.outside_layer_max_l = std::max(rep.outside_layer_max_l, std::abs(d.w_l[i]));
        if (x <= right_start) rep.outside_layer_max_r = std::max(rep.outside_layer_max_r, std::abs(d.w_r[i]));
    }
    rep.hypotheses_met = mesh->sigma_r() <= sl && sl < 0.25 && r.left_layer() && r.right_layer();
    return rep;
}

}  // namespace shishkin
