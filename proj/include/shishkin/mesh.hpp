#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "shishkin/errors.hpp"
#include "shishkin/problem.hpp"

namespace shishkin {

/// Strictly increasing nodes 0 = x_0 < ... < x_N = 1 with per-interval steps.
///
/// Step h_i belongs to the interval (x_{i-1}, x_i], i = 1..N. For the
/// piecewise-uniform layout the steps are the exact piece widths rather than
/// node differences, so steps within one piece are bitwise equal even when the
/// fine steps are close to the resolution of the node coordinates.
class Mesh {
public:
    /// Arbitrary mesh; steps are node differences.
    static Mesh from_nodes(std::vector<double> nodes) {
        if (nodes.size() < 3) throw ConfigError("mesh needs at least 3 nodes");
        std::vector<double> h(nodes.size(), 0.0);
        for (std::size_t i = 1; i < nodes.size(); ++i) h[i] = nodes[i] - nodes[i - 1];
        Mesh m(std::move(nodes), std::move(h));
        return m;
    }

    /// Piecewise-uniform layout: N/4 intervals on [0, sigma_l], N/2 on
    /// [sigma_l, 1 - sigma_r], N/4 on [1 - sigma_r, 1].
    static Mesh piecewise_uniform(int n, double sigma_l, double sigma_r) {
        if (n < 8 || n % 4 != 0) throw ConfigError("N must be >= 8 and divisible by 4, got " + std::to_string(n));
        if (!(sigma_l > 0.0 && sigma_l <= 0.25) || !(sigma_r > 0.0 && sigma_r <= 0.25))
            throw ConfigError("transition points must lie in (0, 1/4]");
        if (sigma_l + sigma_r >= 1.0) throw ConfigError("sigma_l + sigma_r must be < 1");
        const int q = n / 4;
        const double right_start = 1.0 - sigma_r;
        std::vector<double> x(static_cast<std::size_t>(n) + 1);
        std::vector<double> h(x.size(), 0.0);
        const double h_l = sigma_l / q;
        const double h_c = (1.0 - sigma_l - sigma_r) / (2 * q);
        const double h_r = sigma_r / q;
        for (int i = 0; i <= q; ++i) x[i] = sigma_l * (static_cast<double>(i) / q);
        for (int i = q + 1; i < 3 * q; ++i) {
            const double t = static_cast<double>(i - q) / (2 * q);
            x[i] = sigma_l * (1.0 - t) + right_start * t;
        }
        for (int i = 3 * q; i < n; ++i) x[i] = 1.0 - sigma_r * (static_cast<double>(n - i) / q);
        x[3 * q] = right_start;
        x[n] = 1.0;
        for (int i = 1; i <= n; ++i) h[i] = i <= q ? h_l : (i <= 3 * q ? h_c : h_r);
        Mesh m(std::move(x), std::move(h));
        m.sigma_l_ = sigma_l;
        m.sigma_r_ = sigma_r;
        m.h_l_ = h_l;
        m.h_c_ = h_c;
        m.h_r_ = h_r;
        m.layered_ = true;
        return m;
    }

    int n() const { return static_cast<int>(x_.size()) - 1; }
    std::size_t size() const { return x_.size(); }
    double x(int i) const { return x_[static_cast<std::size_t>(i)]; }
    /// h_i = length of (x_{i-1}, x_i], 1 <= i <= N.
    double h(int i) const { return h_[static_cast<std::size_t>(i)]; }
    double inv_h(int i) const { return inv_h_[static_cast<std::size_t>(i)]; }
    /// (h_i + h_{i+1}) / 2, 1 <= i <= N-1.
    double hbar(int i) const { return hbar_[static_cast<std::size_t>(i)]; }
    std::span<const double> nodes() const { return x_; }
    std::span<const double> steps() const { return std::span<const double>(h_).subspan(1); }

    bool is_piecewise_uniform() const { return layered_; }
    double sigma_l() const { return sigma_l_; }
    double sigma_r() const { return sigma_r_; }
    double h_l() const { return h_l_; }
    double h_c() const { return h_c_; }
    double h_r() const { return h_r_; }

    /// Index i of the interval (x_{i-1}, x_i] containing x; x = 0 maps to 1.
    int interval_of(double x) const {
        if (!(x >= 0.0 && x <= 1.0)) throw DomainError("point outside [0,1]");
        std::size_t lo = 1, hi = x_.size() - 1;
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (x_[mid] < x) lo = mid + 1;
            else hi = mid;
        }
        return static_cast<int>(lo);
    }

private:
    Mesh(std::vector<double> x, std::vector<double> h) : x_(std::move(x)), h_(std::move(h)) {
        if (x_.front() != 0.0 || x_.back() != 1.0) throw ConfigError("mesh must span [0,1] exactly");
        for (std::size_t i = 1; i < x_.size(); ++i) {
            if (!(x_[i] > x_[i - 1]) || !(h_[i] > 0.0))
                throw NumericalError("mesh nodes are not strictly increasing at index " + std::to_string(i));
        }
        inv_h_.assign(h_.size(), 0.0);
        hbar_.assign(x_.size(), 0.0);
        for (std::size_t i = 1; i < h_.size(); ++i) inv_h_[i] = 1.0 / h_[i];
        for (std::size_t i = 1; i + 1 < x_.size(); ++i) hbar_[i] = 0.5 * (h_[i] + h_[i + 1]);
    }

    std::vector<double> x_;
    std::vector<double> h_;
    std::vector<double> inv_h_;
    std::vector<double> hbar_;
    double sigma_l_ = 0.0, sigma_r_ = 0.0;
    double h_l_ = 0.0, h_c_ = 0.0, h_r_ = 0.0;
    bool layered_ = false;
};

using MeshPtr = std::shared_ptr<const Mesh>;

struct TransitionPoints {
    double sigma_l;
    double sigma_r;
};

/// sigma_l = min(1/4, (2/rho_l) ln N), sigma_r = min(1/4, (4/rho_r) ln N).
inline TransitionPoints transition_points(int n, const Regime& r) {
    if (n < 8 || n % 4 != 0) throw ConfigError("N must be >= 8 and divisible by 4, got " + std::to_string(n));
    const double ln_n = std::log(static_cast<double>(n));
    return {std::min(0.25, 2.0 / r.rho_l * ln_n), std::min(0.25, 4.0 / r.rho_r * ln_n)};
}

inline Mesh build_mesh(int n, double sigma_l, double sigma_r) { return Mesh::piecewise_uniform(n, sigma_l, sigma_r); }

inline Mesh shishkin_mesh(int n, const Regime& r) {
    const auto tp = transition_points(n, r);
    return build_mesh(n, tp.sigma_l, tp.sigma_r);
}

struct MeshReport {
    int n = 0;
    double sigma_l = 0.0, sigma_r = 0.0;
    double h_l = 0.0, h_c = 0.0, h_r = 0.0;
    double ratio_hc_hl = 1.0, ratio_hc_hr = 1.0;
    bool sigma_r_le_sigma_l = false;
    bool assumption_holds = false;  // sigma_r <= sigma_l < 1/4
    bool degenerate = false;        // sigma_l = sigma_r = 1/4: uniform mesh
    bool left_layer = false;
    bool right_layer = false;
};

inline MeshReport mesh_report(const Mesh& m, const Regime& r) {
    MeshReport rep;
    rep.n = m.n();
    rep.sigma_l = m.sigma_l();
    rep.sigma_r = m.sigma_r();
    rep.h_l = m.h_l();
    rep.h_c = m.h_c();
    rep.h_r = m.h_r();
    if (rep.h_l > 0.0) rep.ratio_hc_hl = rep.h_c / rep.h_l;
    if (rep.h_r > 0.0) rep.ratio_hc_hr = rep.h_c / rep.h_r;
    rep.sigma_r_le_sigma_l = rep.sigma_r <= rep.sigma_l;
    rep.assumption_holds = rep.sigma_r_le_sigma_l && rep.sigma_l < 0.25;
    rep.degenerate = rep.sigma_l == 0.25 && rep.sigma_r == 0.25;
    rep.left_layer = r.left_layer();
    rep.right_layer = r.right_layer();
    return rep;
}

}  // namespace shishkin
