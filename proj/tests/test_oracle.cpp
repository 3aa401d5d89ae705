#include <catch_amalgamated.hpp>

#include <cmath>

#include "freundgeo/oracle.hpp"

using namespace freundgeo;

namespace {
const QuadratureConfig kQuad{};
const FreundParams kOnes{1, 1, 1, 1};
}  // namespace

TEST_CASE("score has zero mean") {
    for (const FreundParams p : {kOnes, FreundParams{0.25, 4, 0.5, 2},
                                 FreundParams{0.7, 1.3, 2.1, 0.9}}) {
        const auto m = score_mean_numeric(p, kQuad);
        for (double v : m) CHECK(std::fabs(v) <= 1e-6);
    }
}

TEST_CASE("quadrature fisher metric matches the closed form") {
    const auto num = fisher_metric_numeric(kOnes, kQuad);
    for (int i = 0; i < 4; ++i) CHECK(num.metric.g(i, i) == Catch::Approx(0.5).margin(1e-6));

    const auto p2 = FreundParams{2, 1, 2, 1};
    CHECK(fisher_metric_numeric(p2, kQuad).metric.g(1, 1) ==
          Catch::Approx(0.5).margin(1e-6));  // alpha2 / (beta1^2 (alpha1+alpha2))

    for (const FreundParams p : {kOnes, p2, FreundParams{0.25, 0.25, 4, 4},
                                 FreundParams{3.1, 0.4, 0.9, 2.2}}) {
        const auto num2 = fisher_metric_numeric(p, kQuad);
        const auto closed = fisher_metric(p);
        for (int i = 0; i < 4; ++i)
            CHECK(num2.metric.g(i, i) ==
                  Catch::Approx(closed.g(i, i)).epsilon(1e-6));
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) CHECK(std::fabs(num2.metric.g(i, j)) <= 1e-6);
    }
}

TEST_CASE("quadrature christoffel matches the closed form") {
    // triple-score term drops at alpha = 1
    const auto n1 = christoffel_lower_numeric(kOnes, {1.0}, kQuad);
    const auto c1 = christoffel_lower(kOnes, {1.0});
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k)
                CHECK(n1.gamma(i, j, k) == Catch::Approx(c1(i, j, k)).margin(1e-5));

    const auto n0 = christoffel_lower_numeric(kOnes, {0.0}, kQuad);
    CHECK(n0.gamma(0, 0, 0) == Catch::Approx(-0.375).margin(1e-5));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k)
                CHECK(std::fabs(n0.gamma(i, j, k) - n0.gamma(j, i, k)) <= 1e-9);

    // the components the closed form carries beyond the obvious ten are real:
    // quadrature sees them too
    const FreundParams p{0.7, 1.3, 2.1, 0.9};
    const AlphaIndex a{0.37};
    const auto num = christoffel_lower_numeric(p, a, kQuad);
    const auto closed = christoffel_lower(p, a);
    for (auto [i, j, k] : {std::array{0, 2, 0}, std::array{1, 1, 0}, std::array{1, 2, 1},
                           std::array{2, 2, 0}, std::array{3, 3, 0}, std::array{3, 3, 2}}) {
        CHECK(std::fabs(closed(i, j, k)) > 1e-3);
        CHECK(num.gamma(i, j, k) == Catch::Approx(closed(i, j, k)).epsilon(1e-5));
    }
}

TEST_CASE("finite-difference curvature matches the closed form") {
    const FiniteDiffConfig fd{};
    const auto r0 = curvature_numeric(kOnes, {0.0}, fd);
    CHECK(r0(0, 1, 0, 1) == Catch::Approx(-1.0 / 32).margin(1e-6));

    CHECK(curvature_numeric(kOnes, {1.0}, fd).max_abs() <= 1e-7);

    for (const FreundParams p : {kOnes, FreundParams{0.7, 1.3, 2.1, 0.9}}) {
        for (double al : {-0.5, 0.0, 0.5}) {
            const auto num = curvature_numeric(p, {al}, fd);
            const auto closed = curvature_tensor(p, {al});
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j)
                    for (int k = 0; k < 4; ++k)
                        for (int l = 0; l < 4; ++l) {
                            if (std::fabs(closed(i, j, k, l)) > 1e-12) {
                                CHECK(num(i, j, k, l) ==
                                      Catch::Approx(closed(i, j, k, l)).epsilon(1e-5));
                            } else {
                                CHECK(std::fabs(num(i, j, k, l)) <= 1e-6);
                            }
                        }
        }
    }
}

TEST_CASE("second-order scheme also converges") {
    FiniteDiffConfig fd;
    fd.scheme = FiniteDiffConfig::Scheme::central_2nd;
    fd.step_relative = 1e-5;
    const auto num = curvature_numeric(kOnes, {0.0}, fd);
    CHECK(num(0, 1, 0, 1) == Catch::Approx(-1.0 / 32).margin(1e-5));
}

TEST_CASE("metric compatibility of the 0-connection") {
    const FreundParams p{0.8, 1.4, 2.2, 0.6};
    const auto gam = christoffel_lower(p, {0.0});
    const Vec<4> pt{p.alpha1, p.beta1, p.alpha2, p.beta2};
    double scale = 0.0, err = 0.0;
    for (int k = 0; k < 4; ++k) {
        const double h = 1e-4 * pt[k];
        auto gat = [&](double t) {
            Vec<4> q = pt;
            q[k] = t;
            return fisher_metric({q[0], q[1], q[2], q[3]}).g;
        };
        const auto f2p = gat(pt[k] + 2 * h), fp = gat(pt[k] + h), fm = gat(pt[k] - h),
                   f2m = gat(pt[k] - 2 * h);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                const double dg =
                    (-f2p(i, j) + 8 * fp(i, j) - 8 * fm(i, j) + f2m(i, j)) / (12 * h);
                const double want = gam(k, i, j) + gam(k, j, i);
                err = std::fmax(err, std::fabs(dg - want));
                scale = std::fmax(scale, std::fabs(want));
            }
    }
    CHECK(err <= 1e-6 * scale);
}

TEST_CASE("quadrature error controls") {
    // doubling the rule moves the answer by less than 1e-8 at the unit point
    QuadratureConfig q64{}, q128{};
    q128.nodes_per_axis = 128;
    const auto a = fisher_metric_numeric(kOnes, q64).metric.g;
    const auto b = fisher_metric_numeric(kOnes, q128).metric.g;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(std::fabs(a(i, j) - b(i, j)) <= 1e-8);

    CHECK(fisher_metric_numeric(kOnes, q64).err_estimate <= 1e-8);
}

TEST_CASE("finite difference config validation") {
    FiniteDiffConfig fd;
    fd.step_relative = 1e-9;
    CHECK_THROWS_AS(validate(fd), std::domain_error);
    fd.step_relative = 0.1;
    CHECK_THROWS_AS(validate(fd), std::domain_error);
    fd = {};
    CHECK_NOTHROW(validate(fd));
}
