#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "shishkin/errors.hpp"

namespace shishkin {

using Coefficient = std::function<double(double)>;

/// -eps u'' + mu a(x) u' + b(x) u = f(x) on (0,1), u(0) = u0, u(1) = u1,
/// with a(x) >= alpha > 0 and b(x) >= gamma a(x).
///
/// `reduced` is the solution of the reduced problem mu a v' + b v = f. It is
/// only consulted when building the default decomposition split in the
/// convection-dominated regime; leave it empty for problems that do not need
/// one.
struct Problem {
    Coefficient a;
    Coefficient b;
    Coefficient f;
    double eps = 1.0;
    double mu = 0.0;
    double alpha = 1.0;
    double gamma = 1.0;
    double u0 = 0.0;
    double u1 = 0.0;
    Coefficient reduced;
    std::string name = "custom";
};

enum class RegimeKind { ReactionDominated, ConvectionDominated };

inline const char* to_string(RegimeKind k) {
    return k == RegimeKind::ConvectionDominated ? "ConvectionDominated" : "ReactionDominated";
}

/// Parameter-derived quantities: regime parameter, layer decay rates and
/// analytical layer widths.
struct Regime {
    double eps = 1.0;
    double mu = 0.0;
    double theta = 1.0;
    double rho_l = 1.0;
    double rho_r = 1.0;
    double tau_l = 0.0;
    double tau_r = 0.0;
    RegimeKind kind = RegimeKind::ReactionDominated;

    bool left_layer() const { return rho_l > 1.0; }
    bool right_layer() const { return rho_r > 1.0; }
};

inline void check_parameters(double eps, double mu) {
    if (!(eps > 0.0) || eps > 1.0) throw DomainError("eps must lie in (0,1], got " + std::to_string(eps));
    if (!(mu >= 0.0) || mu > 1.0) throw DomainError("mu must lie in [0,1], got " + std::to_string(mu));
}

/// Layer width (2/rho) ln rho; zero when the layer is absent (rho == 1).
inline double layer_width(double rho) { return rho > 1.0 ? 2.0 / rho * std::log(rho) : 0.0; }

inline Regime classify(double eps, double mu, double alpha, double gamma) {
    check_parameters(eps, mu);
    if (!(alpha > 0.0) || !(gamma > 0.0)) throw DomainError("alpha and gamma must be positive");
    Regime r;
    r.eps = eps;
    r.mu = mu;
    const double ratio = alpha * mu * mu / (gamma * eps);
    r.kind = ratio > 1.0 ? RegimeKind::ConvectionDominated : RegimeKind::ReactionDominated;
    r.theta = std::max(1.0, ratio);
    r.rho_l = std::max(1.0, 0.5 * std::sqrt(gamma * alpha / (r.theta * eps)));
    r.rho_r = std::max(1.0, std::sqrt(r.theta * gamma * alpha / eps));
    r.tau_l = layer_width(r.rho_l);
    r.tau_r = layer_width(r.rho_r);
    return r;
}

inline Regime classify(const Problem& p) { return classify(p.eps, p.mu, p.alpha, p.gamma); }

/// Weight of the scaled C^1 norm: sqrt(eps theta) on [0, tau_l],
/// sqrt(eps/theta) on [1 - tau_r, 1], 1 in between.
inline double chi_weight(double x, const Regime& r) {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("chi_weight: x outside [0,1]");
    if (x <= r.tau_l) return std::sqrt(r.eps * r.theta);
    if (x >= 1.0 - r.tau_r) return std::sqrt(r.eps / r.theta);
    return 1.0;
}

/// Outcome of sampling the coefficient hypotheses at a set of nodes.
/// Violations of a >= alpha or b >= gamma a are hard errors and throw;
/// everything recorded here is advisory.
struct ProblemDiagnostics {
    bool a_at_bound = false;          // a(x_i) == alpha somewhere (strict > fails)
    bool b_at_bound = false;          // b(x_i) == gamma a(x_i) somewhere (strict > fails)
    bool derivative_assumption = true;  // b -+ 2 mu max a' > 0 at every node
    bool rho_l_clamped = false;
    bool rho_r_clamped = false;
    std::vector<std::string> warnings;
};

inline ProblemDiagnostics validate(const Problem& p, std::span<const double> nodes) {
    check_parameters(p.eps, p.mu);
    if (!p.a || !p.b || !p.f) throw ConfigError("problem coefficients are not set");
    ProblemDiagnostics d;
    double max_da = -INFINITY;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double x = nodes[i];
        const double a = p.a(x);
        const double b = p.b(x);
        if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("non-finite coefficient at x = " + std::to_string(x));
        if (a < p.alpha) throw DomainError("a(x) < alpha at x = " + std::to_string(x));
        if (b < p.gamma * a) throw DomainError("b(x) < gamma a(x) at x = " + std::to_string(x));
        if (a == p.alpha) d.a_at_bound = true;
        if (b == p.gamma * a) d.b_at_bound = true;
        if (i > 0) {
            const double h = nodes[i] - nodes[i - 1];
            if (h > 0.0) max_da = std::max(max_da, (a - p.a(nodes[i - 1])) / h);
        }
    }
    if (nodes.size() > 1) {
        const double slope = 2.0 * p.mu * std::abs(max_da);
        for (double x : nodes) {
            if (!(p.b(x) - slope > 0.0)) {
                d.derivative_assumption = false;
                break;
            }
        }
    }
    const Regime r = classify(p);
    d.rho_l_clamped = !r.left_layer();
    d.rho_r_clamped = !r.right_layer();
    if (d.a_at_bound) d.warnings.emplace_back("a(x) attains alpha (strict inequality not met)");
    if (d.b_at_bound) d.warnings.emplace_back("b(x) attains gamma*a(x) (strict inequality not met)");
    if (!d.derivative_assumption) d.warnings.emplace_back("b -+ 2 mu max a' > 0 fails at some node");
    if (d.rho_l_clamped) d.warnings.emplace_back("rho_L clamped to 1: no left layer");
    if (d.rho_r_clamped) d.warnings.emplace_back("rho_R clamped to 1: no right layer");
    return d;
}

}  // namespace shishkin
