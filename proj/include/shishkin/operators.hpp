#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "shishkin/errors.hpp"
#include "shishkin/mesh.hpp"
#include "shishkin/problem.hpp"

namespace shishkin {

/// Nodal values Z(x_0..x_N) on a shared mesh.
struct MeshFunction {
    MeshPtr mesh;
    std::vector<double> values;

    MeshFunction() = default;
    MeshFunction(MeshPtr m, std::vector<double> v) : mesh(std::move(m)), values(std::move(v)) {
        if (!mesh) throw ConfigError("mesh function without mesh");
        if (values.size() != mesh->size()) throw ConfigError("mesh function length does not match mesh");
    }

    static MeshFunction sample(MeshPtr m, const std::function<double(double)>& g) {
        std::vector<double> v(m->size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = g(m->nodes()[i]);
        return MeshFunction(std::move(m), std::move(v));
    }

    int n() const { return mesh->n(); }
    double operator[](int i) const { return values[static_cast<std::size_t>(i)]; }
    double& operator[](int i) { return values[static_cast<std::size_t>(i)]; }
};

namespace detail {

inline void check_index(int i, int lo, int hi, const char* op) {
    if (i < lo || i > hi)
        throw DomainError(std::string(op) + ": index " + std::to_string(i) + " outside [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "]");
}

}  // namespace detail

/// D+Z_i = (Z_{i+1} - Z_i) / h_{i+1}, 0 <= i <= N-1.
inline double d_plus(const MeshFunction& z, int i) {
    detail::check_index(i, 0, z.n() - 1, "d_plus");
    return (z[i + 1] - z[i]) * z.mesh->inv_h(i + 1);
}

/// D-Z_i = D+Z_{i-1}, 1 <= i <= N.
inline double d_minus(const MeshFunction& z, int i) {
    detail::check_index(i, 1, z.n(), "d_minus");
    return (z[i] - z[i - 1]) * z.mesh->inv_h(i);
}

/// delta^2 Z_i = (D+Z_i - D-Z_i) / hbar_i, 1 <= i <= N-1.
inline double delta2(const MeshFunction& z, int i) {
    detail::check_index(i, 1, z.n() - 1, "delta2");
    return (d_plus(z, i) - d_minus(z, i)) / z.mesh->hbar(i);
}

/// Modified second difference, 2 <= i <= N-1:
///   (1/hbar_i) [ (h_{i+1}/h_i) D+Z_i - (hbar_i/hbar_{i-1}) D-Z_i ].
/// Satisfies delta2_hat(D-Z)_i == D-(delta2 Z)_i on any mesh.
inline double delta2_hat(const MeshFunction& z, int i) {
    detail::check_index(i, 2, z.n() - 1, "delta2_hat");
    const Mesh& m = *z.mesh;
    const double hb = m.hbar(i);
    return (m.h(i + 1) * m.inv_h(i) * d_plus(z, i) - hb / m.hbar(i - 1) * d_minus(z, i)) / hb;
}

/// D-(PQ)_i - [P_i D-Q_i + Q_{i-1} D-P_i]; zero up to rounding.
inline double product_rule_residual(const MeshFunction& p, const MeshFunction& q, int i) {
    detail::check_index(i, 1, p.n(), "product_rule_residual");
    if (p.values.size() != q.values.size()) throw ConfigError("product rule: mesh mismatch");
    const double inv_h = p.mesh->inv_h(i);
    const double lhs = (p[i] * q[i] - p[i - 1] * q[i - 1]) * inv_h;
    const double rhs = p[i] * d_minus(q, i) + q[i - 1] * d_minus(p, i);
    return lhs - rhs;
}

/// Whole-mesh D-Z; entry 0 is NaN.
inline MeshFunction d_minus_all(const MeshFunction& z) {
    std::vector<double> v(z.values.size(), std::numeric_limits<double>::quiet_NaN());
    for (int i = 1; i <= z.n(); ++i) v[static_cast<std::size_t>(i)] = d_minus(z, i);
    return MeshFunction(z.mesh, std::move(v));
}

/// Whole-mesh delta^2 Z; entries 0 and N are NaN.
inline MeshFunction delta2_all(const MeshFunction& z) {
    std::vector<double> v(z.values.size(), std::numeric_limits<double>::quiet_NaN());
    for (int i = 1; i < z.n(); ++i) v[static_cast<std::size_t>(i)] = delta2(z, i);
    return MeshFunction(z.mesh, std::move(v));
}

/// Rows i = 1..N-1 of the interior system, stored at k = i-1:
///   sub[k] U_{i-1} + diag[k] U_i + sup[k] U_{i+1} = rhs[k].
/// Boundary values are already folded into rhs[0] and rhs[N-2]; sub[0] and
/// sup[N-2] keep their coefficient values but are not used by the solve.
/// When row_sum is filled it holds sub + diag + sup exactly, and the solve
/// builds its pivots from it instead of from diag.
struct TridiagonalSystem {
    std::vector<double> sub;
    std::vector<double> diag;
    std::vector<double> sup;
    std::vector<double> rhs;
    double bc0 = 0.0;
    double bc1 = 0.0;
    std::vector<double> row_sum;

    std::size_t size() const { return diag.size(); }
};

/// Upwind operator -eps delta^2 + mu a D- + b at the interior nodes.
/// `source` and the boundary values are explicit so that the same operator can
/// be assembled for each component of a decomposition.
inline TridiagonalSystem assemble_upwind(const Problem& p, const Mesh& m, const std::function<double(double)>& source,
                                         double bc0, double bc1) {
    const int n = m.n();
    TridiagonalSystem s;
    const auto rows = static_cast<std::size_t>(n - 1);
    s.sub.resize(rows);
    s.diag.resize(rows);
    s.sup.resize(rows);
    s.rhs.resize(rows);
    s.row_sum.resize(rows);
    s.bc0 = bc0;
    s.bc1 = bc1;
    for (int i = 1; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i - 1);
        const double x = m.x(i);
        const double diff = p.eps / m.hbar(i);
        const double left = diff * m.inv_h(i) + p.mu * p.a(x) * m.inv_h(i);
        const double right = diff * m.inv_h(i + 1);
        s.sub[k] = -left;
        s.sup[k] = -right;
        // Summed in this order so that diag >= |sub| + |sup| holds in floating point.
        s.diag[k] = (left + right) + p.b(x);
        s.row_sum[k] = p.b(x);
        s.rhs[k] = source(x);
    }
    s.rhs.front() -= s.sub.front() * bc0;
    s.rhs.back() -= s.sup.back() * bc1;
    return s;
}

inline TridiagonalSystem assemble_upwind(const Problem& p, const Mesh& m) {
    return assemble_upwind(p, m, p.f, p.u0, p.u1);
}

/// Direct elimination without pivoting. Pivots must stay positive, which the
/// M-matrix structure of the upwind system guarantees.
///
/// With row sums the pivots are accumulated from positive quantities only,
/// in the same order as the boundary folding of rhs, so a constant solution
/// is reproduced exactly.
inline std::vector<double> thomas_solve(const TridiagonalSystem& s) {
    const std::size_t rows = s.size();
    if (rows == 0 || s.sub.size() != rows || s.sup.size() != rows || s.rhs.size() != rows)
        throw ConfigError("tridiagonal system has inconsistent dimensions");
    const bool sums = !s.row_sum.empty();
    if (sums && s.row_sum.size() != rows) throw ConfigError("tridiagonal system has inconsistent dimensions");
    std::vector<double> pivot(rows), d(rows);
    double reduced = 0.0;  // row sum of the previous eliminated row
    for (std::size_t k = 0; k < rows; ++k) {
        const bool last = k + 1 == rows;
        double p;
        if (!sums) {
            p = k == 0 ? s.diag[0] : s.diag[k] - s.sub[k] * (s.sup[k - 1] / pivot[k - 1]);
        } else if (k == 0) {
            reduced = s.row_sum[0] - s.sub[0];
            p = reduced - s.sup[0];
        } else {
            const double q = reduced / pivot[k - 1];
            reduced = s.row_sum[k] - s.sub[k] * q;
            p = last ? (s.row_sum[k] - s.sup[k]) - s.sub[k] * q : reduced - s.sup[k];
        }
        if (!(p > 0.0)) throw NumericalError("non-positive pivot at row " + std::to_string(k + 1));
        pivot[k] = p;
        d[k] = k == 0 ? s.rhs[0] : s.rhs[k] - s.sub[k] * (d[k - 1] / pivot[k - 1]);
    }
    std::vector<double> u(rows + 2);
    u.front() = s.bc0;
    u.back() = s.bc1;
    u[rows] = d[rows - 1] / pivot[rows - 1];
    for (std::size_t k = rows - 1; k-- > 0;) u[k + 1] = (d[k] - s.sup[k] * u[k + 2]) / pivot[k];
    for (double v : u)
        if (!std::isfinite(v)) throw NumericalError("non-finite value in tridiagonal solution");
    return u;
}

inline MeshFunction thomas_solve(const TridiagonalSystem& s, MeshPtr mesh) {
    return MeshFunction(std::move(mesh), thomas_solve(s));
}

/// (-eps delta^2 + mu a D- + b) Z at x_i, 1 <= i <= N-1.
inline double apply_operator(const Problem& p, const MeshFunction& z, int i) {
    detail::check_index(i, 1, z.n() - 1, "apply_operator");
    const double x = z.mesh->x(i);
    return -p.eps * delta2(z, i) + p.mu * p.a(x) * d_minus(z, i) + p.b(x) * z[i];
}

}  // namespace shishkin
