#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shishkin/errors.hpp"
#include "shishkin/mesh.hpp"
#include "shishkin/operators.hpp"
#include "shishkin/problem.hpp"
#include "shishkin/solver.hpp"

namespace shishkin {

/// Piecewise-linear reconstruction of nodal values.
struct LinearInterpolant {
    MeshPtr mesh;
    std::vector<double> values;

    LinearInterpolant(MeshPtr m, std::vector<double> v) : mesh(std::move(m)), values(std::move(v)) {
        if (!mesh || values.size() != mesh->size()) throw ConfigError("interpolant length does not match mesh");
    }
    explicit LinearInterpolant(const MeshFunction& z) : LinearInterpolant(z.mesh, z.values) {}

    double eval(double x) const {
        const int i = mesh->interval_of(x);
        const auto k = static_cast<std::size_t>(i);
        const double xl = mesh->x(i - 1), xr = mesh->x(i);
        if (x == xr) return values[k];
        if (x == xl) return values[k - 1];
        const double t = (x - xl) / (xr - xl);
        return values[k - 1] + t * (values[k] - values[k - 1]);
    }

    /// Slope on (x_{i-1}, x_i] containing x; the first slope at x = 0.
    double deriv(double x) const {
        const int i = mesh->interval_of(x);
        const auto k = static_cast<std::size_t>(i);
        return (values[k] - values[k - 1]) * mesh->inv_h(i);
    }
};

inline double interp_eval(const LinearInterpolant& p, double x) { return p.eval(x); }
inline double interp_deriv(const LinearInterpolant& p, double x) { return p.deriv(x); }

struct ErrorRecord {
    double eps = 0.0;
    double mu = 0.0;
    int n = 0;
    double e_total = 0.0;
    double e_sup = 0.0;
    double e_flux = 0.0;
    std::array<double, 3> nodal_flux_by_region{0.0, 0.0, 0.0};  // left layer, interior, right layer
};

/// What the flux part of the error is measured against on the fine mesh.
/// Exact: chi |u' - Ubar'| at fine nodes, with u' analytic.
/// FineSolve: chi |D-(U_fine - Ubar)| on fine intervals, U_fine the upwind
/// solution on the fine mesh.
enum class FluxReference { Exact, FineSolve };

inline const char* to_string(FluxReference r) { return r == FluxReference::Exact ? "exact" : "fine-solve"; }

inline FluxReference parse_flux_reference(const std::string& s) {
    if (s == "exact") return FluxReference::Exact;
    if (s == "fine-solve") return FluxReference::FineSolve;
    throw ConfigError("flux_reference must be 'exact' or 'fine-solve', got '" + s + "'");
}

using RealFunction = std::function<double(double)>;

/// Everything on the fine Shishkin mesh that does not depend on the coarse N.
struct FineReference {
    MeshPtr mesh;
    Regime regime;
    FluxReference mode = FluxReference::Exact;
    RealFunction exact_u;
    std::vector<double> u;    // exact u at fine nodes
    std::vector<double> du;   // exact u' at fine nodes (Exact mode)
    std::vector<double> u_h;  // fine upwind solution (FineSolve mode)
    std::vector<double> chi;  // chi at fine nodes
};

inline FineReference make_fine_reference(const Regime& r, const RealFunction& exact_u, const RealFunction& exact_du,
                                         int n_fine) {
    FineReference ref;
    ref.regime = r;
    ref.mode = FluxReference::Exact;
    ref.exact_u = exact_u;
    ref.mesh = std::make_shared<const Mesh>(shishkin_mesh(n_fine, r));
    const auto nodes = ref.mesh->nodes();
    ref.u.resize(nodes.size());
    ref.du.resize(nodes.size());
    ref.chi.resize(nodes.size());
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        ref.u[j] = exact_u(nodes[j]);
        ref.du[j] = exact_du(nodes[j]);
        ref.chi[j] = chi_weight(nodes[j], r);
    }
    return ref;
}

inline FineReference make_fine_reference(const Problem& p, const RealFunction& exact_u, const RealFunction& exact_du,
                                         int n_fine, FluxReference mode) {
    FineReference ref = make_fine_reference(classify(p), exact_u, exact_du, n_fine);
    ref.mode = mode;
    if (mode == FluxReference::FineSolve) ref.u_h = solve_on(p, ref.mesh).u.values;
    return ref;
}

/// Maxima of the scaled |D-(U - u)| over left-layer (x <= tau_l), interior and
/// right-layer (x > 1 - tau_r) nodes of the solution's own mesh.
inline std::array<double, 3> nodal_flux_errors(const DiscreteSolution& s, const std::vector<double>& exact_nodes,
                                               const Regime& r) {
    const Mesh& m = *s.mesh;
    if (exact_nodes.size() != m.size()) throw ConfigError("exact nodal values do not match mesh");
    std::array<double, 3> out{0.0, 0.0, 0.0};
    const double wl = std::sqrt(r.eps * r.theta);
    const double wr = std::sqrt(r.eps / r.theta);
    for (int i = 1; i <= m.n(); ++i) {
        const auto k = static_cast<std::size_t>(i);
        const double e = std::abs(((s.u.values[k] - exact_nodes[k]) - (s.u.values[k - 1] - exact_nodes[k - 1])) * m.inv_h(i));
        const double x = m.x(i);
        if (x <= r.tau_l) out[0] = std::max(out[0], wl * e);
        else if (x <= 1.0 - r.tau_r) out[1] = std::max(out[1], e);
        else out[2] = std::max(out[2], wr * e);
    }
    return out;
}

/// E^N = max_fine |u - Ubar| + max_fine chi |(u - Ubar)'|, with the flux part
/// measured as selected by the reference mode.
inline ErrorRecord scaled_c1_error(const DiscreteSolution& s, const FineReference& ref) {
    const int n = s.mesh->n();
    const int n_fine = ref.mesh->n();
    if (n_fine < 4 * n || n_fine % 4 != 0) throw ConfigError("n_fine must be a multiple of 4 and at least 4N");
    if (ref.regime.eps != s.regime.eps || ref.regime.mu != s.regime.mu)
        throw ConfigError("fine reference built for different parameters");
    const LinearInterpolant ubar(s.u);
    const Mesh& fm = *ref.mesh;
    std::vector<double> ubar_fine(fm.size());
    for (std::size_t j = 0; j < fm.size(); ++j) ubar_fine[j] = ubar.eval(fm.nodes()[j]);

    ErrorRecord rec;
    rec.eps = s.regime.eps;
    rec.mu = s.regime.mu;
    rec.n = n;
    for (std::size_t j = 0; j < fm.size(); ++j) rec.e_sup = std::max(rec.e_sup, std::abs(ref.u[j] - ubar_fine[j]));
    for (int j = 1; j <= fm.n(); ++j) {
        const auto k = static_cast<std::size_t>(j);
        double e = 0.0;
        if (ref.mode == FluxReference::Exact) {
            e = std::abs(ref.du[k] - ubar.deriv(fm.x(j)));
        } else {
            const double d_fine = (ref.u_h[k] - ref.u_h[k - 1]) * fm.inv_h(j);
            const double d_bar = (ubar_fine[k] - ubar_fine[k - 1]) * fm.inv_h(j);
            e = std::abs(d_fine - d_bar);
        }
        rec.e_flux = std::max(rec.e_flux, ref.chi[k] * e);
    }
    rec.e_total = rec.e_sup + rec.e_flux;

    std::vector<double> exact_nodes(s.mesh->size());
    for (std::size_t i = 0; i < exact_nodes.size(); ++i) exact_nodes[i] = ref.exact_u(s.mesh->nodes()[i]);
    rec.nodal_flux_by_region = nodal_flux_errors(s, exact_nodes, s.regime);
    return rec;
}

/// Estimator with the analytic derivative on the fine mesh.
inline ErrorRecord scaled_c1_error(const DiscreteSolution& s, const RealFunction& exact_u, const RealFunction& exact_du,
                                   int n_fine = 8192) {
    if (n_fine < 4 * s.mesh->n() || n_fine % 4 != 0) throw ConfigError("n_fine must be a multiple of 4 and at least 4N");
    return scaled_c1_error(s, make_fine_reference(s.regime, exact_u, exact_du, n_fine));
}

struct OrderEntry {
    int n = 0;
    std::optional<double> p;  // empty when an error is zero
};

/// p^N = log2(E^N / E^{2N}) for each adjacent pair.
inline std::vector<OrderEntry> convergence_orders(const std::vector<std::pair<int, double>>& errors) {
    std::vector<OrderEntry> out;
    for (std::size_t k = 0; k + 1 < errors.size(); ++k) {
        if (errors[k + 1].first != 2 * errors[k].first)
            throw ConfigError("convergence orders need consecutive doublings of N");
        OrderEntry e;
        e.n = errors[k].first;
        const double a = errors[k].second, b = errors[k + 1].second;
        if (a > 0.0 && b > 0.0) e.p = std::log2(a / b);
        out.push_back(e);
    }
    return out;
}

}  // namespace shishkin
