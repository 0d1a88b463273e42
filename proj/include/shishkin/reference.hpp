#pragma once

#include <cmath>
#include <string>
#include <string_view>

#include "shishkin/dyadic.hpp"
#include "shishkin/errors.hpp"
#include "shishkin/problem.hpp"

namespace shishkin {

/// Constant a, b and a linear source f(x) = f0 + f1 x.
struct ConstantCoefficients {
    double a = 1.0;
    double b = 1.0;
    double f0 = 0.0;
    double f1 = 1.0;
};

/// Closed-form solution of -eps u'' + mu a u' + b u = f0 + f1 x with
/// u(0) = u0, u(1) = u1:
///
///   u(x) = A exp(-m1 (1-x) / (2 eps)) + B exp(m2 x / (2 eps)) + c0 + c1 x
///
/// with m1 = mu a + sqrt(mu^2 a^2 + 4 eps b) > 0 > m2 = -4 eps b / m1.
/// Every exponential is evaluated with a non-positive argument.
class ExactTestSolution {
public:
    ExactTestSolution(double eps, double mu, ConstantCoefficients c, double u0, double u1)
        : eps_(eps), mu_(mu), coeffs_(c), u0_(u0), u1_(u1) {
        check_parameters(eps, mu);
        if (!(c.a > 0.0) || !(c.b > 0.0)) throw DomainError("constant coefficients must be positive");
        const double ma = mu * c.a;
        m1_ = ma + std::sqrt(ma * ma + 4.0 * eps * c.b);
        m2_ = -4.0 * eps * c.b / m1_;
        k1_ = m1_ / (2.0 * eps);
        k2_ = -2.0 * c.b / m1_;  // m2 / (2 eps) without the division by eps
        c1_ = c.f1 / c.b;
        c0_ = (c.f0 - ma * c1_) / c.b;
        const double g0 = u0 - c0_;
        const double g1 = u1 - (c0_ + c1_);
        const double e1 = std::exp(-k1_);
        const double e2 = std::exp(k2_);
        const double det = std::expm1(k2_ - k1_);  // e1 e2 - 1, strictly negative
        coef_a_ = (g0 * e2 - g1) / det;
        coef_b_ = (e1 * g1 - g0) / det;
    }

    /// Test problem -eps u'' + mu u' + u = x, u(0) = 1, u(1) = 0.
    static ExactTestSolution paper_example(double eps, double mu) {
        return ExactTestSolution(eps, mu, ConstantCoefficients{}, 1.0, 0.0);
    }

    double eps() const { return eps_; }
    double mu() const { return mu_; }
    double m1() const { return m1_; }
    double m2() const { return m2_; }
    double coef_a() const { return coef_a_; }
    double coef_b() const { return coef_b_; }
    const ConstantCoefficients& coefficients() const { return coeffs_; }
    double u0() const { return u0_; }
    double u1() const { return u1_; }

    /// Solution of the reduced problem mu a v' + b v = f (the particular part).
    double reduced(double x) const { return c0_ + c1_ * x; }

    double u(double x) const {
        check(x);
        return coef_a_ * right_term(x) + coef_b_ * left_term(x) + c0_ + c1_ * x;
    }

    double du(double x) const {
        check(x);
        return coef_a_ * k1_ * right_term(x) + coef_b_ * k2_ * left_term(x) + c1_;
    }

    double d2u(double x) const {
        check(x);
        return coef_a_ * k1_ * k1_ * right_term(x) + coef_b_ * k2_ * k2_ * left_term(x);
    }

    double source(double x) const { return coeffs_.f0 + coeffs_.f1 * x; }

private:
    static void check(double x) {
        if (!(x >= 0.0 && x <= 1.0)) throw DomainError("exact solution: x outside [0,1]");
    }
    double right_term(double x) const { return std::exp(-k1_ * (1.0 - x)); }
    double left_term(double x) const { return std::exp(k2_ * x); }

    double eps_, mu_;
    ConstantCoefficients coeffs_;
    double u0_, u1_;
    double m1_ = 0.0, m2_ = 0.0, k1_ = 0.0, k2_ = 0.0;
    double c0_ = 0.0, c1_ = 0.0;
    double coef_a_ = 0.0, coef_b_ = 0.0;
};

inline double exact_u(const ExactTestSolution& s, double x) { return s.u(x); }
inline double exact_du(const ExactTestSolution& s, double x) { return s.du(x); }

/// Named problem families that carry a closed-form solution.
struct ProblemSpec {
    enum class Kind { PaperExample, Constant };
    Kind kind = Kind::PaperExample;
    ConstantCoefficients coeffs;
    double u0 = 1.0;
    double u1 = 0.0;

    std::string name() const {
        if (kind == Kind::PaperExample) return "paper-example";
        return "constant:a=" + format_real(coeffs.a) + ",b=" + format_real(coeffs.b) + ",f0=" + format_real(coeffs.f0) +
               ",f1=" + format_real(coeffs.f1) + ",u0=" + format_real(u0) + ",u1=" + format_real(u1);
    }
};

/// "paper-example" or "constant:a=..,b=..,f0=..,f1=..,u0=..,u1=.." (any
/// subset of keys; missing keys default to a=b=1, f0=0, f1=1, u0=1, u1=0).
inline ProblemSpec parse_problem_spec(std::string_view text) {
    ProblemSpec spec;
    if (text == "paper-example") return spec;
    constexpr std::string_view prefix = "constant";
    if (text.substr(0, prefix.size()) != prefix) throw ConfigError("unknown problem '" + std::string(text) + "'");
    spec.kind = ProblemSpec::Kind::Constant;
    auto rest = text.substr(prefix.size());
    if (rest.empty()) return spec;
    if (rest.front() != ':') throw ConfigError("expected ':' after 'constant'");
    rest.remove_prefix(1);
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        const auto item = rest.substr(0, comma);
        const auto eq = item.find('=');
        if (eq == std::string_view::npos) throw ConfigError("expected key=value in problem spec: '" + std::string(item) + "'");
        const auto key = item.substr(0, eq);
        const double v = parse_real(item.substr(eq + 1));
        if (key == "a") spec.coeffs.a = v;
        else if (key == "b") spec.coeffs.b = v;
        else if (key == "f0" || key == "f") spec.coeffs.f0 = v;
        else if (key == "f1") spec.coeffs.f1 = v;
        else if (key == "u0") spec.u0 = v;
        else if (key == "u1") spec.u1 = v;
        else throw ConfigError("unknown key in problem spec: '" + std::string(key) + "'");
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
    }
    if (!(spec.coeffs.a > 0.0) || !(spec.coeffs.b > 0.0)) throw ConfigError("constant problem needs a > 0 and b > 0");
    return spec;
}

inline ExactTestSolution make_exact(const ProblemSpec& spec, double eps, double mu) {
    return ExactTestSolution(eps, mu, spec.coeffs, spec.u0, spec.u1);
}

/// Problem with alpha = a and gamma = b / a, the sharpest constants for
/// constant coefficients.
inline Problem make_problem(const ProblemSpec& spec, double eps, double mu) {
    check_parameters(eps, mu);
    const ConstantCoefficients c = spec.coeffs;
    const ExactTestSolution exact = make_exact(spec, eps, mu);
    Problem p;
    p.a = [a = c.a](double) { return a; };
    p.b = [b = c.b](double) { return b; };
    p.f = [c](double x) { return c.f0 + c.f1 * x; };
    p.eps = eps;
    p.mu = mu;
    p.alpha = c.a;
    p.gamma = c.b / c.a;
    p.u0 = spec.u0;
    p.u1 = spec.u1;
    p.reduced = [exact](double x) { return exact.reduced(x); };
    p.name = spec.name();
    return p;
}

inline Problem paper_example_problem(double eps, double mu) { return make_problem(ProblemSpec{}, eps, mu); }

}  // namespace shishkin
