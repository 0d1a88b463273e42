#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "shishkin/mesh.hpp"

using namespace shishkin;

TEST(TransitionPoints, CappedLeftAndFineRight) {
    Regime r;
    r.rho_l = 8.0;
    r.rho_r = 65536.0;
    const auto tp = transition_points(64, r);
    EXPECT_EQ(tp.sigma_l, 0.25);
    EXPECT_NEAR(tp.sigma_r, 2.5383807881833934671e-4, 1e-18);
}

TEST(TransitionPoints, ClampedRatesGiveUniformMesh) {
    Regime r;
    const auto tp = transition_points(64, r);
    EXPECT_EQ(tp.sigma_l, 0.25);
    EXPECT_EQ(tp.sigma_r, 0.25);
}

TEST(TransitionPoints, ReactionDominated) {
    Regime r;
    r.rho_l = 512.0;
    r.rho_r = 1024.0;
    const auto tp = transition_points(64, r);
    EXPECT_NEAR(tp.sigma_l, 0.016245637044373718189, 1e-17);
    EXPECT_NEAR(tp.sigma_r, 0.016245637044373718189, 1e-17);
}

TEST(TransitionPoints, RejectsBadN) {
    Regime r;
    EXPECT_THROW(transition_points(30, r), ConfigError);
    EXPECT_THROW(transition_points(4, r), ConfigError);
}

TEST(BuildMesh, UniformWhenBothCapped) {
    const Mesh m = build_mesh(8, 0.25, 0.25);
    for (int i = 0; i <= 8; ++i) EXPECT_DOUBLE_EQ(m.x(i), 0.125 * i);
    for (int i = 1; i <= 8; ++i) EXPECT_EQ(m.h(i), 0.125);
}

TEST(BuildMesh, ThreePieces) {
    const Mesh m = build_mesh(8, 0.25, 0.0625);
    const std::vector<double> expected{0, .125, .25, .421875, .59375, .765625, .9375, .96875, 1};
    for (int i = 0; i <= 8; ++i) EXPECT_EQ(m.x(i), expected[static_cast<std::size_t>(i)]) << i;
    EXPECT_EQ(m.h_l(), 0.125);
    EXPECT_EQ(m.h_c(), 0.171875);
    EXPECT_EQ(m.h_r(), 0.03125);
}

TEST(BuildMesh, FineRightLayer) {
    const double sr = 2.5383807881833934671e-4;
    const Mesh m = build_mesh(64, 0.25, sr);
    EXPECT_EQ(m.x(48), 1.0 - sr);
    EXPECT_NEAR(m.h_r(), 1.5864879926146209169e-5, 1e-19);
    EXPECT_EQ(m.x(16), 0.25);
    EXPECT_EQ(m.x(64), 1.0);
}

TEST(BuildMesh, RejectsInvalidInput) {
    EXPECT_THROW(build_mesh(10, 0.25, 0.25), ConfigError);
    EXPECT_THROW(build_mesh(8, 0.0, 0.25), ConfigError);
    EXPECT_THROW(build_mesh(8, 0.3, 0.1), ConfigError);
}

TEST(BuildMesh, GeometryInvariants) {
    for (int n : {8, 64, 1024, 8192}) {
        for (double eps : {1.0, 0x1p-10, 0x1p-20, 0x1p-40}) {
            for (double mu : {0.0, 0x1p-4, 0x1p-12, 1.0}) {
                const Regime r = classify(eps, mu, 1.0, 1.0);
                const Mesh m = shishkin_mesh(n, r);
                ASSERT_EQ(m.size(), static_cast<std::size_t>(n) + 1);
                double sum = 0.0;
                for (int i = 1; i <= n; ++i) {
                    ASSERT_GT(m.x(i), m.x(i - 1));
                    sum += m.h(i);
                }
                EXPECT_NEAR(sum, 1.0, n * 0x1p-52);
                const int q = n / 4;
                for (int i = 2; i <= n; ++i) {
                    if (i == q + 1 || i == 3 * q + 1) continue;
                    EXPECT_EQ(m.h(i), m.h(i - 1));
                }
                EXPECT_DOUBLE_EQ(m.h_l(), 4.0 * m.sigma_l() / n);
                EXPECT_DOUBLE_EQ(m.h_c(), 2.0 * (1.0 - m.sigma_l() - m.sigma_r()) / n);
                EXPECT_DOUBLE_EQ(m.h_r(), 4.0 * m.sigma_r() / n);
                const double ln_n = std::log(static_cast<double>(n));
                EXPECT_LE(m.h_l() * r.rho_l, 8.0 * ln_n / n + 1e-12);
                EXPECT_LE(m.h_r() * r.rho_r, 16.0 * ln_n / n + 1e-12);
                EXPECT_EQ(m.x(q), m.sigma_l());
                EXPECT_EQ(m.x(3 * q), 1.0 - m.sigma_r());
            }
        }
    }
}

TEST(BuildMesh, IntervalLookupIsLeftContinuous) {
    const Mesh m = build_mesh(8, 0.25, 0.25);
    EXPECT_EQ(m.interval_of(0.0), 1);
    EXPECT_EQ(m.interval_of(0.125), 1);
    EXPECT_EQ(m.interval_of(0.13), 2);
    EXPECT_EQ(m.interval_of(1.0), 8);
    EXPECT_THROW(m.interval_of(1.5), DomainError);
}

TEST(FromNodes, RejectsNonIncreasing) {
    EXPECT_THROW(Mesh::from_nodes({0.0, 0.5, 0.5, 1.0}), NumericalError);
    EXPECT_THROW(Mesh::from_nodes({0.0, 0.5, 0.9}), ConfigError);
}

TEST(MeshReport, Flags) {
    const Regime none = classify(1.0, 0.0, 1.0, 1.0);
    const MeshReport u = mesh_report(shishkin_mesh(64, none), none);
    EXPECT_TRUE(u.degenerate);
    EXPECT_FALSE(u.assumption_holds);

    const Regime conv = classify(0x1p-20, 0x1p-4, 1.0, 1.0);
    const MeshReport c = mesh_report(shishkin_mesh(64, conv), conv);
    EXPECT_FALSE(c.assumption_holds);
    EXPECT_TRUE(c.sigma_r_le_sigma_l);
    EXPECT_FALSE(c.degenerate);

    const Regime reac = classify(0x1p-20, 0x1p-12, 1.0, 1.0);
    const MeshReport r = mesh_report(shishkin_mesh(64, reac), reac);
    EXPECT_TRUE(r.assumption_holds);
    EXPECT_TRUE(r.left_layer);
    EXPECT_TRUE(r.right_layer);
    EXPECT_NEAR(r.ratio_hc_hl, r.h_c / r.h_l, 0.0);
}
