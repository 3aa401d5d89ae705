#include <catch_amalgamated.hpp>

#include <cmath>

#include "freundgeo/geometry.hpp"
#include "freundgeo/oracle.hpp"
#include "freundgeo/submanifolds.hpp"

using namespace freundgeo;

namespace {

const QuadratureConfig kQuad{};

// quadrature of the submanifold score outer product through an embedding,
// for linear and nonlinear charts alike
template <int N>
SquareMatrix<N> metric_by_quadrature(const FreundParams& ambient,
                                     const EmbeddingJacobian<4, N>& jac) {
    constexpr int K = N * (N + 1) / 2;
    const auto vals = integrate_joint_multi<K>(
        ambient,
        [&](double x, double y) {
            const auto sc = score(ambient, x, y);
            std::array<double, N> sub{};
            for (int a = 0; a < N; ++a)
                for (int i = 0; i < 4; ++i) sub[a] += jac[i][a] * sc[i];
            std::array<double, K> v{};
            int c = 0;
            for (int a = 0; a < N; ++a)
                for (int b = a; b < N; ++b) v[c++] = sub[a] * sub[b];
            return v;
        },
        kQuad);
    SquareMatrix<N> m;
    int c = 0;
    for (int a = 0; a < N; ++a)
        for (int b = a; b < N; ++b) m(a, b) = m(b, a) = vals[c++];
    return m;
}

// the defining connection integral restricted to a linearly embedded chart
template <int N>
ChristoffelLower<N> christoffel_by_quadrature(const FreundParams& ambient,
                                              const EmbeddingJacobian<4, N>& jac, double alpha) {
    constexpr int K = N * N * N;
    const double c3 = (1.0 - alpha) / 2.0;
    const auto vals = integrate_joint_multi<K>(
        ambient,
        [&](double x, double y) {
            const auto sc = score(ambient, x, y);
            const auto hs = log_density_hessian(ambient, wedge_of(x, y));
            std::array<double, N> sub{};
            SquareMatrix<N> hsub;
            for (int a = 0; a < N; ++a)
                for (int i = 0; i < 4; ++i) sub[a] += jac[i][a] * sc[i];
            for (int a = 0; a < N; ++a)
                for (int b = 0; b < N; ++b) {
                    double v = 0.0;
                    for (int i = 0; i < 4; ++i)
                        for (int j = 0; j < 4; ++j) v += jac[i][a] * hs(i, j) * jac[j][b];
                    hsub(a, b) = v;
                }
            std::array<double, K> out{};
            int c = 0;
            for (int a = 0; a < N; ++a)
                for (int b = 0; b < N; ++b)
                    for (int k = 0; k < N; ++k)
                        out[c++] = hsub(a, b) * sub[k] + c3 * sub[a] * sub[b] * sub[k];
            return out;
        },
        kQuad);
    ChristoffelLower<N> g;
    int c = 0;
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b)
            for (int k = 0; k < N; ++k) g(a, b, k) = vals[c++];
    return g;
}

}  // namespace

TEST_CASE("independence slice metric and flatness") {
    CHECK(f1_metric({1, 1}).g(0, 0) == 1.0);
    CHECK(f1_metric({1, 1}).g(1, 1) == 1.0);
    CHECK(f1_metric({2, 3}).g(0, 0) == 0.25);
    CHECK(f1_metric({2, 3}).g(1, 1) == Catch::Approx(1.0 / 9).epsilon(1e-15));
    CHECK(f1_metric({2, 3}).g(0, 1) == 0.0);

    // connection values
    CHECK(f1_connection({2, 1}, {1.0}).lower.max_abs() == 0.0);
    CHECK(f1_connection({2, 1}, {0.0}).upper(0, 0, 0) == Catch::Approx(-0.5).epsilon(1e-15));
    CHECK(f1_connection({2, 1}, {0.5}).lower(0, 0, 1) == 0.0);  // cross terms stay zero
}

TEST_CASE("independence slice is flat at every alpha") {
    const FiniteDiffConfig fd{};
    for (const F1Point p : {F1Point{1, 1}, F1Point{0.4, 2.5}}) {
        for (double al : {-1.0, -0.3, 0.0, 0.6, 1.0}) {
            auto gamma_at = [&](const Vec<2>& q) { return f1_connection({q[0], q[1]}, {al}).upper; };
            const auto r = assemble_curvature_fd<2>(gamma_at, {p.alpha1, p.alpha2},
                                                    f1_metric(p).g, fd);
            CHECK(r.max_abs() <= 1e-8);
        }
    }
}

TEST_CASE("embeddings pull the ambient metric back to the chart metric") {
    for (const F1Point p : {F1Point{1, 1}, F1Point{0.4, 2.5}, F1Point{3, 0.8}}) {
        const auto pull = pullback_metric<4, 2>(fisher_metric(embed_f1(p)).g,
                                                f1_embedding_jacobian());
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                CHECK(pull(i, j) == Catch::Approx(f1_metric(p).g(i, j)).margin(1e-14));
    }
    for (const F2Point p : {F2Point{1, 1}, F2Point{2, 5}, F2Point{0.6, 1.7}}) {
        const auto pull = pullback_metric<4, 2>(fisher_metric(embed_f2(p)).g,
                                                f2_embedding_jacobian());
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                CHECK(pull(i, j) == Catch::Approx(f2_metric(p).g(i, j)).margin(1e-14));
    }
    for (const F3Point p : {F3Point{1, 1}, F3Point{0.5, 2.2}}) {
        const auto pull = pullback_metric<4, 2>(fisher_metric(embed_f3(p)).g,
                                                f3_embedding_jacobian());
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                CHECK(pull(i, j) == Catch::Approx(f3_metric(p).g(i, j)).margin(1e-14));
    }
}

TEST_CASE("submanifold metrics match score quadrature") {
    CHECK(metric_by_quadrature<2>(embed_f1({0.7, 1.9}), f1_embedding_jacobian())(0, 0) ==
          Catch::Approx(f1_metric({0.7, 1.9}).g(0, 0)).epsilon(1e-6));
    CHECK(metric_by_quadrature<2>(embed_f2({1.4, 0.6}), f2_embedding_jacobian())(1, 1) ==
          Catch::Approx(f2_metric({1.4, 0.6}).g(1, 1)).epsilon(1e-6));
    const auto m3 = metric_by_quadrature<2>(embed_f3({1, 1}), f3_embedding_jacobian());
    CHECK(m3(0, 0) == Catch::Approx(0.75).margin(1e-6));
    CHECK(m3(0, 1) == Catch::Approx(0.25).margin(1e-6));
}

TEST_CASE("common-rates slice: potential, duals, moments") {
    const F2Point ones{1, 1};
    CHECK(f2_potential(ones).value == 0.0);
    CHECK(f2_dual_potential(ones) == -2.0);

    const F2Point p{2, 5};
    CHECK(f2_metric(p).g(0, 0) == 0.25);
    CHECK(f2_metric(p).g(1, 1) == Catch::Approx(1.0 / 25).epsilon(1e-15));

    // gradient of the potential is the dual chart
    const auto pot = f2_potential(p);
    const auto dual = f2_to_dual(p);
    CHECK(pot.gradient[0] == dual.eta1);
    CHECK(pot.gradient[1] == dual.eta2);
    CHECK(dual.eta1 == -0.5);
    CHECK(dual.eta2 == -0.2);

    // Legendre pairing and the round trip
    const double pairing = p.alpha1 * dual.eta1 + p.beta1 * dual.eta2;
    CHECK(pot.value + f2_dual_potential(p) == Catch::Approx(pairing).margin(1e-14));
    const auto back = f2_from_dual(dual);
    CHECK(back.alpha1 == Catch::Approx(p.alpha1).epsilon(1e-15));
    CHECK(back.beta1 == Catch::Approx(p.beta1).epsilon(1e-15));

    // metric equals the Hessian of the potential (finite differences)
    auto psi = [](double a, double b) { return -std::log(a * b); };
    const auto hm = fd::hessian2(psi, 2.0, 5.0);
    CHECK(hm(0, 0) == Catch::Approx(f2_metric(p).g(0, 0)).margin(1e-7));
    CHECK(hm(1, 1) == Catch::Approx(f2_metric(p).g(1, 1)).margin(1e-7));

    // isometry with the independence chart
    CHECK(f2_metric(p).g(0, 0) == f1_metric({p.alpha1, p.beta1}).g(0, 0));
    CHECK(f2_metric(p).g(1, 1) == f1_metric({p.alpha1, p.beta1}).g(1, 1));

    // moments
    CHECK(f2_covariance({1, 1}) == 0.0);
    CHECK(f2_correlation({1, 1}) == 0.0);
    CHECK(f2_correlation({1, 2}) == Catch::Approx(3.0 / 7).epsilon(1e-15));
    CHECK(f2_covariance({2, 1}) == Catch::Approx(-3.0 / 16).epsilon(1e-15));

    // quadrature oracle for the covariance on the embedded density
    const auto fr = embed_f2({2, 1});
    const double ex = integrate_joint(fr, [](double x, double) { return x; }, kQuad);
    const double ey = integrate_joint(fr, [](double, double y) { return y; }, kQuad);
    const double exy = integrate_joint(fr, [](double x, double y) { return x * y; }, kQuad);
    CHECK(exy - ex * ey == Catch::Approx(-3.0 / 16).margin(1e-9));
}

TEST_CASE("common-rates slice: mixed chart metric is positive definite") {
    const auto m = f2_mixed_metric(2.0, -0.25);
    CHECK(m.g(0, 0) == 0.25);
    CHECK(m.g(1, 1) == 16.0);
    CHECK(m.g(0, 1) == 0.0);
    CHECK_THROWS_AS(f2_mixed_metric(2.0, 0.25), std::domain_error);  // dual side is negative
}

TEST_CASE("common-rates slice is dually flat") {
    for (const F2Point p : {F2Point{1, 1}, F2Point{2, 5}, F2Point{0.6, 1.7}}) {
        // natural chart: the +1 connection vanishes identically
        CHECK(f1_connection({p.alpha1, p.beta1}, {1.0}).upper.max_abs() == 0.0);
        // dual chart: the -1 connection vanishes after the transform
        const auto gm = f1_connection({p.alpha1, p.beta1}, {-1.0}).upper;
        const auto d = f2_to_dual(p);
        SquareMatrix<2> jac;
        jac(0, 0) = 1.0 / (d.eta1 * d.eta1);
        jac(1, 1) = 1.0 / (d.eta2 * d.eta2);
        std::array<SquareMatrix<2>, 2> hess{};
        hess[0](0, 0) = -2.0 / (d.eta1 * d.eta1 * d.eta1);
        hess[1](1, 1) = -2.0 / (d.eta2 * d.eta2 * d.eta2);
        CHECK(transform_christoffel<2>(gm, jac, hess).max_abs() <= 1e-12);
    }
}

TEST_CASE("pinned-rates slice: metric and connection") {
    const auto m = f3_metric({1, 1});
    CHECK(m.g(0, 0) == 0.75);
    CHECK(m.g(0, 1) == 0.25);
    CHECK(m.g(1, 1) == 0.75);
    CHECK(m.g(0, 1) == m.g(1, 0));

    // printed coefficients; the alpha = 1 value follows the same formula
    const auto c1 = f3_connection({1, 1}, {1.0});
    CHECK(c1(0, 0, 0) == Catch::Approx(-0.5).epsilon(1e-15));
    const auto c0 = f3_connection({1, 1}, {0.0});
    CHECK(c0(1, 1, 0) == Catch::Approx(0.25).epsilon(1e-15));
    CHECK(c0(0, 1, 0) == Catch::Approx(-0.25).epsilon(1e-15));

    // the defining integral agrees (lower form via the embedding, then raised)
    for (double al : {0.0, 1.0, -0.5}) {
        const auto gl = christoffel_by_quadrature<2>(embed_f3({1, 1}), f3_embedding_jacobian(), al);
        const auto ginv = inverse(f3_metric({1, 1}).g);
        const auto cu = f3_connection({1, 1}, {al});
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k) {
                    double raised = 0.0;
                    for (int h = 0; h < 2; ++h) raised += ginv(k, h) * gl(i, j, h);
                    CHECK(raised == Catch::Approx(cu(i, j, k)).margin(1e-6));
                }
    }
}

TEST_CASE("pinned-rates slice is flat at every alpha") {
    const FiniteDiffConfig fd{};
    for (const F3Point p : {F3Point{1, 1}, F3Point{0.5, 2.2}, F3Point{3.1, 0.9}}) {
        for (double al : {-1.0, 0.0, 0.7, 1.0}) {
            auto gamma_at = [&](const Vec<2>& q) { return f3_connection({q[0], q[1]}, {al}); };
            const auto r =
                assemble_curvature_fd<2>(gamma_at, {p.alpha1, p.alpha2}, f3_metric(p).g, fd);
            CHECK(r.max_abs() <= 1e-8);
        }
    }
}

TEST_CASE("three-rate chart: reparametrization") {
    const auto fr0 = acbed_to_freund({1, 1e-12, 1});
    CHECK(fr0.alpha1 == Catch::Approx(1.0).epsilon(1e-11));
    CHECK(fr0.beta1 == Catch::Approx(1.0).epsilon(1e-11));

    const auto fr = acbed_to_freund({1, 1, 1});
    CHECK(fr.alpha1 == 1.5);
    CHECK(fr.beta1 == 2.0);
    CHECK(fr.alpha2 == 1.5);
    CHECK(fr.beta2 == 2.0);

    const ACBEDPoint pt{1.1, 0.6, 2.3};
    const auto fre = acbed_to_freund(pt);
    CHECK(fre.alpha1 == Catch::Approx(1.2941176470588235294).epsilon(1e-15));
    CHECK(fre.beta1 == Catch::Approx(1.7).epsilon(1e-15));
    CHECK(fre.alpha2 == Catch::Approx(2.7058823529411764706).epsilon(1e-15));
    CHECK(fre.beta2 == Catch::Approx(2.9).epsilon(1e-15));

    // the two density forms agree pointwise
    for (double x : {0.1, 0.45, 1.3, 2.7})
        for (double y : {0.2, 0.45, 1.1, 3.3})
            CHECK(acbed_density(pt, x, y) ==
                  Catch::Approx(joint_density(fre, x, y)).epsilon(1e-12));
}

TEST_CASE("three-rate chart: metric") {
    const auto m = acbed_metric({1, 1, 1});
    CHECK(m.g(0, 2) == Catch::Approx(-0.25 + 1.0 / 9).epsilon(1e-14));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(m.g(i, j) == m.g(j, i));

    // frozen CAS matrix at an asymmetric point
    const auto mf = acbed_metric({1.1, 0.6, 2.3}).g;
    const double want[3][3] = {
        {0.47744735673445219547, 0.29657286790148585386, -0.024005190311418685121},
        {0.29657286790148585386, 0.33504247691036883630, 0.10096960900888298244},
        {-0.024005190311418685121, 0.10096960900888298244, 0.14234165654912670141}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(mf(i, j) == Catch::Approx(want[i][j]).epsilon(1e-14));

    // pullback route and quadrature route agree
    const ACBEDPoint pt{1.1, 0.6, 2.3};
    const auto pull = pullback_metric<4, 3>(fisher_metric(acbed_to_freund(pt)).g,
                                            acbed_embedding_jacobian(pt));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(pull(i, j) == Catch::Approx(mf(i, j)).margin(1e-13));

    const auto quad = metric_by_quadrature<3>(acbed_to_freund(pt), acbed_embedding_jacobian(pt));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(quad(i, j) == Catch::Approx(mf(i, j)).margin(1e-6));

    // positive definiteness at a few points
    for (const ACBEDPoint q : {ACBEDPoint{1, 1, 1}, ACBEDPoint{0.5, 1.8, 0.9}}) {
        const auto es = eigen_symmetric<3>(acbed_metric(q).g);
        for (double v : es.values) CHECK(v > 0.0);
    }
}

TEST_CASE("three-rate chart: moments and marginals") {
    CHECK(acbed_covariance({1, 1e-14, 1}) == Catch::Approx(0.0).margin(1e-13));
    CHECK(acbed_covariance({1, 1, 1}) == Catch::Approx(7.0 / 144).epsilon(1e-14));
    CHECK(acbed_covariance({1.1, 0.6, 2.3}) ==
          Catch::Approx(0.018106869880752682889).epsilon(1e-13));
    CHECK(acbed_correlation({0.5, 1.8, 0.9}) > 0.0);
    const auto both = acbed_marginals({1, 1, 1}, 0.4);
    CHECK(both.first == Catch::Approx(acbed_marginal_x({1, 1, 1}, 0.4)).epsilon(1e-15));
    CHECK(both.second == Catch::Approx(acbed_marginal_y({1, 1, 1}, 0.4)).epsilon(1e-15));

    // covariance against the quadrature oracle on the same density
    const ACBEDPoint pt{1, 1, 1};
    const auto fr = acbed_to_freund(pt);
    const double ex = integrate_joint(fr, [](double x, double) { return x; }, kQuad);
    const double ey = integrate_joint(fr, [](double, double y) { return y; }, kQuad);
    const double exy = integrate_joint(fr, [](double x, double y) { return x * y; }, kQuad);
    CHECK(exy - ex * ey == Catch::Approx(7.0 / 144).margin(1e-9));

    // marginals normalize
    const auto rule = quad::gauss_legendre(64);
    for (const ACBEDPoint q : {pt, ACBEDPoint{1.1, 0.6, 2.3}}) {
        double ix = 0.0, iy = 0.0;
        const double hi = 60.0 / std::fmin(q.lambda1 + q.lambda12, q.lambda2 + q.lambda12);
        const int panels = 10;
        for (int s = 0; s < panels; ++s) {
            const double a = hi * s / panels, b = hi * (s + 1) / panels;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                ix += (b - a) * rule.weights[i] * acbed_marginal_x(q, a + (b - a) * rule.nodes[i]);
                iy += (b - a) * rule.weights[i] * acbed_marginal_y(q, a + (b - a) * rule.nodes[i]);
            }
        }
        CHECK(ix == Catch::Approx(1.0).margin(1e-8));
        CHECK(iy == Catch::Approx(1.0).margin(1e-8));
    }
}

TEST_CASE("equal-rates slice: exponential family structure") {
    // all lower coefficients vanish at alpha = 1
    CHECK(acbed_symmetric_family(1, 1, {1.0}).lower.max_abs() == 0.0);

    const auto fam = acbed_symmetric_family(1, 1, {0.0});
    CHECK(fam.metric.g(0, 0) == Catch::Approx(25.0 / 36).epsilon(1e-14));

    // metric equals the finite-difference Hessian of the potential
    const double l1 = 0.7, l12 = 1.9;
    const auto f2 = acbed_symmetric_family(l1, l12, {0.0});
    auto psi = [](double a, double b) {
        return std::log(2.0) - std::log(a + b) - std::log(2 * a + b);
    };
    const auto hm = fd::hessian2(psi, l1, l12);
    CHECK(hm(0, 0) == Catch::Approx(f2.metric.g(0, 0)).margin(1e-7));
    CHECK(hm(0, 1) == Catch::Approx(f2.metric.g(0, 1)).margin(1e-7));

    // upper coefficients are the lower ones raised through the metric
    for (double al : {-1.0, 0.0, 0.6}) {
        const auto fa = acbed_symmetric_family(l1, l12, {al});
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k) {
                    double lowered = 0.0;
                    for (int hh = 0; hh < 2; ++hh)
                        lowered += fa.metric.g(k, hh) * fa.upper(i, j, hh);
                    CHECK(lowered == Catch::Approx(fa.lower(i, j, k)).margin(1e-12));
                }
    }

    // dual chart is the gradient; Legendre identity pins the dual potential
    CHECK(f2.dual_coords[0] == f2.potential.gradient[0]);
    const double pairing = l1 * f2.dual_coords[0] + l12 * f2.dual_coords[1];
    CHECK(f2.potential.value + f2.dual_potential == Catch::Approx(pairing).margin(1e-14));

    // flat at every alpha
    const FiniteDiffConfig fd{};
    for (double al : {-1.0, 0.0, 1.0}) {
        auto gamma_at = [&](const Vec<2>& q) {
            return acbed_symmetric_family(q[0], q[1], {al}).upper;
        };
        const auto r = assemble_curvature_fd<2>(gamma_at, {l1, l12},
                                                acbed_symmetric_family(l1, l12, {al}).metric.g, fd);
        CHECK(r.max_abs() <= 1e-8);
    }
}

TEST_CASE("submanifold validation") {
    CHECK_THROWS_AS(f1_metric({0, 1}), std::domain_error);
    CHECK_THROWS_AS(f2_metric({1, -2}), std::domain_error);
    CHECK_THROWS_AS(acbed_to_freund({1, 0, 1}), std::domain_error);
    CHECK_THROWS_AS(f2_from_dual({0.5, -1}), std::domain_error);
    CHECK_THROWS_AS(acbed_symmetric_family(0, 1, {0.0}), std::domain_error);
}
