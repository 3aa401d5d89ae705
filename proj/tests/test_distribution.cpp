#include <catch_amalgamated.hpp>

#include <cmath>

#include "freundgeo/distribution.hpp"
#include "freundgeo/quadrature.hpp"

using namespace freundgeo;

TEST_CASE("joint density values") {
    // independence point: product of unit exponentials
    CHECK(joint_density({1, 1, 1, 1}, 1.0, 2.0) == Catch::Approx(std::exp(-3.0)).epsilon(1e-15));
    // lower wedge branch (y <= x), direct substitution
    const FreundParams p{1, 2, 3, 0.5};
    CHECK(joint_density(p, 0.3, 0.2) ==
          Catch::Approx(3 * 2 * std::exp(-2 * 0.3 - (1 + 3 - 2) * 0.2)).epsilon(1e-15));
    CHECK_THROWS_AS(joint_density(p, -0.1, 1.0), std::domain_error);
}

TEST_CASE("joint density normalizes") {
    const QuadratureConfig q{};
    for (const FreundParams p : {FreundParams{1, 1, 1, 1}, FreundParams{1, 2, 3, 0.5},
                                 FreundParams{0.25, 4, 0.7, 1.3}}) {
        const double total = integrate_joint(p, [](double, double) { return 1.0; }, q);
        CHECK(total == Catch::Approx(1.0).margin(1e-8));
    }
}

TEST_CASE("scores match finite differences of the log density") {
    const FreundParams p{1.2, 0.7, 2.3, 1.9};
    const double h = 1e-6;
    for (auto [x, y] : {std::pair{0.4, 1.1}, std::pair{2.0, 0.3}}) {
        const auto s = score(p, x, y);
        const double grads[4] = {
            (log_joint_density({p.alpha1 + h, p.beta1, p.alpha2, p.beta2}, x, y) -
             log_joint_density({p.alpha1 - h, p.beta1, p.alpha2, p.beta2}, x, y)) / (2 * h),
            (log_joint_density({p.alpha1, p.beta1 + h, p.alpha2, p.beta2}, x, y) -
             log_joint_density({p.alpha1, p.beta1 - h, p.alpha2, p.beta2}, x, y)) / (2 * h),
            (log_joint_density({p.alpha1, p.beta1, p.alpha2 + h, p.beta2}, x, y) -
             log_joint_density({p.alpha1, p.beta1, p.alpha2 - h, p.beta2}, x, y)) / (2 * h),
            (log_joint_density({p.alpha1, p.beta1, p.alpha2, p.beta2 + h}, x, y) -
             log_joint_density({p.alpha1, p.beta1, p.alpha2, p.beta2 - h}, x, y)) / (2 * h)};
        for (int i = 0; i < 4; ++i) CHECK(s[i] == Catch::Approx(grads[i]).margin(1e-8));
    }
}

namespace {
double quad_1d(double hi, auto&& f) {
    const auto rule = quad::gauss_legendre(64);
    double acc = 0.0;
    const int panels = 10;
    for (int s = 0; s < panels; ++s) {
        const double a = hi * s / panels, b = hi * (s + 1) / panels;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            acc += (b - a) * rule.weights[i] * f(a + (b - a) * rule.nodes[i]);
    }
    return acc;
}
}  // namespace

TEST_CASE("marginals") {
    // exponential marginals exactly when switched rates equal running rates
    for (double x : {0.0, 0.5, 2.0})
        CHECK(marginal_x({1, 1, 1, 1}, x) == Catch::Approx(std::exp(-x)).epsilon(1e-14));

    // degenerate band dispatches to the limit form
    const FreundParams lim{0.75, 2.0, 1.25, 2.0};  // beta1 = beta2 = rate sum
    for (double x : {0.1, 1.0, 3.0}) {
        CHECK(marginal_x(lim, x) ==
              Catch::Approx((0.75 + 1.25 * 2.0 * x) * std::exp(-2.0 * x)).epsilon(1e-13));
        CHECK(marginal_y(lim, x) ==
              Catch::Approx((1.25 + 0.75 * 2.0 * x) * std::exp(-2.0 * x)).epsilon(1e-13));
    }

    // normalization across generic, near-degenerate and degenerate cases
    for (const FreundParams p : {FreundParams{1, 2, 3, 0.5}, FreundParams{0.7, 1.3, 2.1, 0.9},
                                 lim, FreundParams{1, 2.0000000001, 1, 3}}) {
        const double hi = 50.0 / std::fmin(std::fmin(p.beta1, p.beta2), p.rate_sum());
        CHECK(quad_1d(hi, [&](double t) { return marginal_x(p, t); }) ==
              Catch::Approx(1.0).margin(1e-8));
        CHECK(quad_1d(hi, [&](double t) { return marginal_y(p, t); }) ==
              Catch::Approx(1.0).margin(1e-8));
    }
}

TEST_CASE("marginal cdf integrates the marginal density") {
    for (const FreundParams p : {FreundParams{1, 2, 3, 0.5}, FreundParams{0.7, 1.3, 2.1, 0.9},
                                 FreundParams{0.75, 2.0, 1.25, 2.0}}) {
        for (double t : {0.3, 1.0, 2.5}) {
            CHECK(marginal_cdf_x(p, t) ==
                  Catch::Approx(quad_1d(t, [&](double u) { return marginal_x(p, u); }))
                      .margin(1e-10));
            CHECK(marginal_cdf_y(p, t) ==
                  Catch::Approx(quad_1d(t, [&](double u) { return marginal_y(p, u); }))
                      .margin(1e-10));
        }
        CHECK(marginal_cdf_x(p, 0.0) == 0.0);
        CHECK(marginal_cdf_x(p, 1e3) == Catch::Approx(1.0).margin(1e-10));
    }
}

TEST_CASE("covariance and correlation closed forms") {
    // zero numerator when the rate products balance
    CHECK(covariance({2, 1, 2, 4}) == 0.0);
    CHECK(covariance({1, 2, 1, 2}) == Catch::Approx(3.0 / 16).epsilon(1e-15));

    // quadrature oracle for the covariance
    const QuadratureConfig q{};
    for (const FreundParams p : {FreundParams{1, 2, 1, 2}, FreundParams{0.7, 1.3, 2.1, 0.9}}) {
        const double ex = integrate_joint(p, [](double x, double) { return x; }, q);
        const double ey = integrate_joint(p, [](double, double y) { return y; }, q);
        const double exy = integrate_joint(p, [](double x, double y) { return x * y; }, q);
        CHECK(covariance(p) == Catch::Approx(exy - ex * ey).margin(1e-9));
        CHECK(mean_x(p) == Catch::Approx(ex).margin(1e-9));
        CHECK(mean_y(p) == Catch::Approx(ey).margin(1e-9));
        const double ex2 = integrate_joint(p, [](double x, double) { return x * x; }, q);
        CHECK(var_x(p) == Catch::Approx(ex2 - ex * ex).margin(1e-8));
    }

    // the correlation lives strictly inside (-1/3, 1)
    for (int i = 0; i < 50; ++i) {
        auto draw = [&](int j) {
            const std::uint64_t z = 0x9E3779B97F4A7C15ull * (4 * i + j + 1);
            return std::pow(10.0, 2.0 * ((z >> 11) * 0x1p-53) - 1.0);
        };
        const FreundParams p{draw(0), draw(1), draw(2), draw(3)};
        const double rho = correlation(p);
        CHECK(rho > -1.0 / 3);
        CHECK(rho < 1.0);
        CHECK(rho == Catch::Approx(covariance(p) / std::sqrt(var_x(p) * var_y(p)))
                         .epsilon(1e-12));
    }

    CHECK(correlation({0.7, 1.3, 2.1, 0.9}) ==
          Catch::Approx(-0.048456730874801769961).epsilon(1e-14));
}

TEST_CASE("quadrature config validation") {
    QuadratureConfig q;
    q.nodes_per_axis = 8;
    CHECK_THROWS_AS(validate(q), std::domain_error);
    q = {};
    q.truncation_quantile = 0.999;  // too far from 1
    CHECK_THROWS_AS(validate(q), std::domain_error);
    q = {};
    CHECK_NOTHROW(validate(q));
}

TEST_CASE("both quadrature transforms agree") {
    QuadratureConfig exp_cfg{}, trunc_cfg{};
    trunc_cfg.transform = QuadratureConfig::Transform::direct_truncation;
    for (const FreundParams p : {FreundParams{1, 1, 1, 1}, FreundParams{2, 1, 2, 1},
                                 FreundParams{0.7, 1.3, 2.1, 0.9}}) {
        const double a = integrate_joint(p, [](double x, double y) { return x + y * y; }, exp_cfg);
        const double b = integrate_joint(p, [](double x, double y) { return x + y * y; }, trunc_cfg);
        CHECK(a == Catch::Approx(b).epsilon(1e-9));
    }
}
