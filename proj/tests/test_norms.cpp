#include <cmath>
#include <memory>
#include <vector>

#include <gtest/gtest.h>

#include "shishkin/norms.hpp"
#include "shishkin/reference.hpp"

using namespace shishkin;

namespace {

MeshPtr uniform(int n) { return std::make_shared<const Mesh>(build_mesh(n, 0.25, 0.25)); }

FineReference paper_reference(double eps, double mu, int n_fine, FluxReference mode) {
    const Problem p = paper_example_problem(eps, mu);
    const ExactTestSolution s = ExactTestSolution::paper_example(eps, mu);
    return make_fine_reference(
        p, [s](double x) { return s.u(x); }, [s](double x) { return s.du(x); }, n_fine, mode);
}

}  // namespace

TEST(Interpolant, ReproducesNodes) {
    const Regime r = classify(0x1p-20, 0x1p-4, 1.0, 1.0);
    const auto m = std::make_shared<const Mesh>(shishkin_mesh(64, r));
    const auto z = MeshFunction::sample(m, [](double x) { return std::sin(7.0 * x); });
    const LinearInterpolant p(z);
    for (int i = 0; i <= 64; ++i) EXPECT_EQ(interp_eval(p, m->x(i)), z[i]);
}

TEST(Interpolant, LinearReproduction) {
    const Regime r = classify(0x1p-10, 0x1p-2, 1.0, 1.0);
    const auto m = std::make_shared<const Mesh>(shishkin_mesh(32, r));
    const LinearInterpolant p(MeshFunction::sample(m, [](double x) { return 3.0 * x + 2.0; }));
    for (int k = 0; k <= 100; ++k) {
        const double x = k / 100.0;
        EXPECT_NEAR(interp_eval(p, x), 3.0 * x + 2.0, 1e-14);
        EXPECT_NEAR(interp_deriv(p, x), 3.0, 1e-9);
    }
}

TEST(Interpolant, QuadraticHandValue) {
    const LinearInterpolant p(MeshFunction::sample(uniform(8), [](double x) { return x * x; }));
    const LinearInterpolant q(std::make_shared<const Mesh>(Mesh::from_nodes({0.0, 0.25, 0.5, 0.75, 1.0})),
                              {0.0, 0.0625, 0.25, 0.5625, 1.0});
    EXPECT_DOUBLE_EQ(interp_eval(q, 0.6), 0.375);
    EXPECT_DOUBLE_EQ(interp_deriv(q, 0.6), 1.25);
    // Left-continuous: at a node the slope of the interval ending there.
    EXPECT_DOUBLE_EQ(interp_deriv(q, 0.5), 0.75);
    EXPECT_DOUBLE_EQ(interp_deriv(q, 0.0), 0.25);
    EXPECT_THROW(interp_eval(p, 1.01), DomainError);
    EXPECT_THROW(interp_deriv(p, -0.01), DomainError);
}

TEST(ScaledError, ZeroForLinearExactSolution) {
    const Problem p = paper_example_problem(0x1p-8, 0x1p-3);
    DiscreteSolution s = solve(p, 64);
    const auto g = [](double x) { return 2.0 - x; };
    s.u = MeshFunction::sample(s.mesh, g);
    const ErrorRecord e = scaled_c1_error(s, g, [](double) { return -1.0; }, 512);
    EXPECT_NEAR(e.e_total, 0.0, 1e-9);
    EXPECT_EQ(e.e_total, e.e_sup + e.e_flux);
}

TEST(ScaledError, RecordFields) {
    const ExactTestSolution ex = ExactTestSolution::paper_example(0x1p-10, 0x1p-4);
    const DiscreteSolution s = solve(paper_example_problem(0x1p-10, 0x1p-4), 128);
    const ErrorRecord e = scaled_c1_error(s, [&](double x) { return ex.u(x); }, [&](double x) { return ex.du(x); });
    EXPECT_EQ(e.n, 128);
    EXPECT_EQ(e.eps, 0x1p-10);
    EXPECT_EQ(e.mu, 0x1p-4);
    EXPECT_GT(e.e_sup, 0.0);
    EXPECT_GT(e.e_flux, 0.0);
    EXPECT_EQ(e.e_total, e.e_sup + e.e_flux);
    for (double f : e.nodal_flux_by_region) EXPECT_GE(f, 0.0);
}

TEST(ScaledError, RejectsCoarseFineMesh) {
    const ExactTestSolution ex = ExactTestSolution::paper_example(0x1p-10, 0x1p-4);
    const DiscreteSolution s = solve(paper_example_problem(0x1p-10, 0x1p-4), 256);
    const auto u = [&](double x) { return ex.u(x); };
    const auto du = [&](double x) { return ex.du(x); };
    EXPECT_THROW(scaled_c1_error(s, u, du, 512), ConfigError);
    EXPECT_THROW(scaled_c1_error(s, u, du, 1026), ConfigError);
}

TEST(ScaledError, FineSolveSpotValues) {
    struct Cell {
        double eps;
        int n;
        double expected;
    };
    for (const Cell& c : {Cell{0x1p-10, 64, 7.23e-01}, Cell{0x1p-40, 2048, 4.65e-02}}) {
        const FineReference ref = paper_reference(c.eps, 0x1p-4, 8192, FluxReference::FineSolve);
        const ErrorRecord e = scaled_c1_error(solve(paper_example_problem(c.eps, 0x1p-4), c.n), ref);
        EXPECT_NEAR(e.e_total / c.expected, 1.0, 0.05) << c.eps << " " << c.n;
    }
}

TEST(ScaledError, ExactModeStableUnderFineRefinement) {
    for (double eps : {0x1p-10, 0x1p-20}) {
        const Problem p = paper_example_problem(eps, 0x1p-4);
        const DiscreteSolution s = solve(p, 256);
        const ErrorRecord a = scaled_c1_error(s, paper_reference(eps, 0x1p-4, 8192, FluxReference::Exact));
        const ErrorRecord b = scaled_c1_error(s, paper_reference(eps, 0x1p-4, 16384, FluxReference::Exact));
        EXPECT_NEAR(b.e_sup / a.e_sup, 1.0, 0.02);
        EXPECT_NEAR(b.e_flux / a.e_flux, 1.0, 0.02);
    }
}

TEST(NodalFlux, ZeroForExactNodalValues) {
    const Problem p = paper_example_problem(0x1p-20, 0x1p-4);
    const DiscreteSolution s = solve(p, 64);
    const auto e = nodal_flux_errors(s, s.u.values, s.regime);
    EXPECT_EQ(e[0], 0.0);
    EXPECT_EQ(e[1], 0.0);
    EXPECT_EQ(e[2], 0.0);
}

TEST(NodalFlux, NoLayersMeansInteriorOnly) {
    const Problem p = paper_example_problem(1.0, 0.0);
    const DiscreteSolution s = solve(p, 64);
    const ExactTestSolution ex = ExactTestSolution::paper_example(1.0, 0.0);
    std::vector<double> exact(s.mesh->size());
    for (std::size_t i = 0; i < exact.size(); ++i) exact[i] = ex.u(s.mesh->nodes()[i]);
    const auto e = nodal_flux_errors(s, exact, s.regime);
    EXPECT_EQ(e[0], 0.0);
    EXPECT_GT(e[1], 0.0);
    EXPECT_EQ(e[2], 0.0);
}

TEST(NodalFlux, DecreasesUnderRefinement) {
    const ExactTestSolution ex = ExactTestSolution::paper_example(0x1p-20, 0x1p-4);
    const Problem p = paper_example_problem(0x1p-20, 0x1p-4);
    std::array<double, 3> prev{};
    for (int n = 64; n <= 2048; n *= 2) {
        const DiscreteSolution s = solve(p, n);
        std::vector<double> exact(s.mesh->size());
        for (std::size_t i = 0; i < exact.size(); ++i) exact[i] = ex.u(s.mesh->nodes()[i]);
        const auto e = nodal_flux_errors(s, exact, s.regime);
        if (n > 64) {
            for (std::size_t g = 0; g < 3; ++g) EXPECT_LT(e[g], prev[g]) << n << " region " << g;
        }
        prev = e;
    }
}

TEST(Orders, Examples) {
    const auto a = convergence_orders({{64, 0.64}, {128, 0.32}});
    ASSERT_EQ(a.size(), 1u);
    EXPECT_EQ(a[0].n, 64);
    EXPECT_DOUBLE_EQ(*a[0].p, 1.0);
    const auto b = convergence_orders({{64, 0.3}, {128, 0.3}, {256, 0.3}});
    for (const auto& o : b) EXPECT_EQ(*o.p, 0.0);
    const auto z = convergence_orders({{64, 0.3}, {128, 0.0}});
    EXPECT_FALSE(z[0].p.has_value());
    EXPECT_THROW(convergence_orders({{64, 0.3}, {256, 0.1}}), ConfigError);
    EXPECT_TRUE(convergence_orders({{64, 0.3}}).empty());
}

TEST(Orders, KnownMaxima) {
    const std::vector<std::pair<int, double>> maxima{{64, 1.09e+00},  {128, 7.62e-01}, {256, 4.90e-01},
                                                     {512, 2.90e-01}, {1024, 1.54e-01}, {2048, 6.89e-02}};
    const std::vector<double> expected{0.52, 0.64, 0.76, 0.91, 1.16};
    const auto o = convergence_orders(maxima);
    ASSERT_EQ(o.size(), expected.size());
    for (std::size_t k = 0; k < o.size(); ++k) EXPECT_NEAR(*o[k].p, expected[k], 0.005);
}

TEST(Orders, ScaleInvariant) {
    const std::vector<std::pair<int, double>> e{{8, 0.9}, {16, 0.5}, {32, 0.2}};
    std::vector<std::pair<int, double>> s = e;
    for (auto& [n, v] : s) v *= 37.5;
    const auto a = convergence_orders(e), b = convergence_orders(s);
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(*a[k].p, *b[k].p, 1e-14);
}

TEST(FluxReferenceNames, RoundTrip) {
    EXPECT_EQ(parse_flux_reference("exact"), FluxReference::Exact);
    EXPECT_EQ(parse_flux_reference(to_string(FluxReference::FineSolve)), FluxReference::FineSolve);
    EXPECT_THROW(parse_flux_reference("nodal"), ConfigError);
}
