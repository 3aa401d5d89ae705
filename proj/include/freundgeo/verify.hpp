#pragma once

#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "freundgeo/geometry.hpp"
#include "freundgeo/immersion.hpp"
#include "freundgeo/io.hpp"
#include "freundgeo/oracle.hpp"
#include "freundgeo/stochastic.hpp"
#include "freundgeo/submanifolds.hpp"

// The self-verification suite: every closed form against its independent
// numeric route, at pinned tolerances. Deterministic by construction (fixed
// seeds, fixed grids, ordered checks), so two runs emit identical reports.

namespace freundgeo::verify {

struct CheckResult {
    std::string name;
    double max_err{};
    double tol{};
    bool pass{};
};

struct VerifyOptions {
    enum class Grid { coarse, standard };
    Grid grid = Grid::standard;
    std::uint64_t seed = 0x5eed0001u;
};

namespace detail {

struct Suite {
    std::vector<CheckResult> results;
    double current{};

    void feed(double err) { current = std::fmax(current, std::fabs(err)); }
    void close(const std::string& name, double tol) {
        results.push_back({name, current, tol, current <= tol});
        current = 0.0;
    }
};

struct GridSpec {
    std::vector<double> axis;     // per-parameter values
    std::vector<double> alphas;
    std::vector<double> flat_alphas{-1.0, 0.0, 1.0};
    int n_random{};
    std::size_t sample_n{};
    std::size_t ks_n{};
};

inline GridSpec grid_spec(VerifyOptions::Grid g) {
    if (g == VerifyOptions::Grid::coarse) {
        return {{0.5, 2.0}, {-1.0, 0.0, 1.0}, {-1.0, 0.0, 1.0}, 20, 200000, 30000};
    }
    return {{0.25, 1.0, 4.0}, {-1.0, -0.5, 0.0, 0.5, 1.0}, {-1.0, 0.0, 1.0}, 100, 1000000,
            100000};
}

inline std::vector<FreundParams> grid_points(const GridSpec& gs) {
    std::vector<FreundParams> pts;
    for (double a1 : gs.axis)
        for (double b1 : gs.axis)
            for (double a2 : gs.axis)
                for (double b2 : gs.axis) pts.push_back({a1, b1, a2, b2});
    return pts;
}

inline std::vector<FreundParams> random_points(int n, std::uint64_t seed) {
    std::vector<FreundParams> pts;
    pts.reserve(n);
    for (int i = 0; i < n; ++i) {
        auto draw = [&](int j) {
            // log-uniform on [0.1, 10]
            const double u = rng::uniform(seed, 4 * static_cast<std::uint64_t>(i) + j);
            return std::pow(10.0, 2.0 * u - 1.0);
        };
        pts.push_back({draw(0), draw(1), draw(2), draw(3)});
    }
    return pts;
}

inline double rel_err(double got, double want) {
    return std::fabs(got - want) / std::fmax(std::fabs(want), 1e-300);
}

// Split comparison: relative against closed components that are genuinely
// nonzero, absolute against exact zeros.
struct SplitErr {
    double rel{};
    double abs{};
    void feed(double got, double want) {
        if (std::fabs(want) > 1e-12) {
            rel = std::fmax(rel, rel_err(got, want));
        } else {
            abs = std::fmax(abs, std::fabs(got));
        }
    }
};

inline double inverse_kolmogorov(double p_tail) {
    double lo = 0.2, hi = 3.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (kolmogorov_tail(mid) > p_tail ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// ---- core geometry checks -------------------------------------------------

inline void check_metric(Suite& s, const GridSpec& gs) {
    const QuadratureConfig q{};
    double offdiag = 0.0;
    for (const auto& p : grid_points(gs)) {
        const auto closed = fisher_metric(p);
        const auto num = fisher_metric_numeric(p, q);
        for (int i = 0; i < 4; ++i) s.feed(rel_err(num.metric.g(i, i), closed.g(i, i)));
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) offdiag = std::fmax(offdiag, std::fabs(num.metric.g(i, j)));
    }
    s.close("metric.quadrature_agreement", 1e-6);
    s.feed(offdiag);
    s.close("metric.quadrature_offdiagonal", 1e-6);

    for (const auto& p : grid_points(gs)) {
        const auto g = fisher_metric(p).g;
        const auto gi = fisher_metric_inverse(p).g;
        const auto prod = g * gi;
        const auto id = SquareMatrix<4>::identity();
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) s.feed(prod(i, j) - id(i, j));
    }
    s.close("metric.inverse_identity", 1e-12);
}

inline void check_christoffel(Suite& s, const GridSpec& gs) {
    const QuadratureConfig q{};
    SplitErr split;
    for (const auto& p : grid_points(gs)) {
        for (double al : gs.alphas) {
            const auto closed = christoffel_lower(p, {al});
            const auto num = christoffel_lower_numeric(p, {al}, q);
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j)
                    for (int k = 0; k < 4; ++k) split.feed(num.gamma(i, j, k), closed(i, j, k));
        }
    }
    s.feed(split.rel);
    s.close("christoffel.quadrature_nonzero", 1e-5);
    s.feed(split.abs);
    s.close("christoffel.quadrature_zero", 1e-6);

    // algebraic structure at floating precision: symmetry, affinity in the
    // connection parameter, duality, raising/lowering
    double scale = 1.0;
    double affin = 0.0, dual = 0.0, sym = 0.0, lower_err = 0.0;
    for (const auto& p : grid_points(gs)) {
        const auto g = fisher_metric(p).g;
        const auto g0 = christoffel_lower(p, {0.0});
        const auto g1 = christoffel_lower(p, {1.0});
        for (double al : gs.alphas) {
            const auto ga = christoffel_lower(p, {al});
            const auto gm = christoffel_lower(p, {-al});
            const auto up = christoffel_upper(p, {al});
            scale = std::fmax(scale, ga.max_abs());
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j)
                    for (int k = 0; k < 4; ++k) {
                        sym = std::fmax(sym, std::fabs(ga(i, j, k) - ga(j, i, k)));
                        affin = std::fmax(affin, std::fabs(ga(i, j, k) -
                                                           (g0(i, j, k) +
                                                            al * (g1(i, j, k) - g0(i, j, k)))));
                        dual = std::fmax(dual,
                                         std::fabs(ga(i, j, k) + gm(i, j, k) - 2.0 * g0(i, j, k)));
                        double low = 0.0;
                        for (int h = 0; h < 4; ++h) low += g(k, h) * up(i, j, h);
                        lower_err = std::fmax(lower_err, std::fabs(low - ga(i, j, k)));
                    }
        }
    }
    s.feed(sym);
    s.close("christoffel.index_symmetry", 0.0);
    s.feed(affin / scale);
    s.close("christoffel.alpha_affinity", 1e-14);
    s.feed(dual / scale);
    s.close("christoffel.duality", 1e-14);
    s.feed(lower_err);
    s.close("christoffel.raising_consistency", 1e-12);
}

inline void check_metric_compatibility(Suite& s, const GridSpec& gs) {
    const FiniteDiffConfig fd{};
    for (const auto& p : grid_points(gs)) {
        const auto gam = christoffel_lower(p, {0.0});
        const Vec<4> pt = {p.alpha1, p.beta1, p.alpha2, p.beta2};
        double scale = 0.0;
        SquareMatrix<4> want[4];
        for (int k = 0; k < 4; ++k)
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) {
                    want[k](i, j) = gam(k, i, j) + gam(k, j, i);
                    scale = std::fmax(scale, std::fabs(want[k](i, j)));
                }
        for (int k = 0; k < 4; ++k) {
            const double h = fd.step_relative * pt[k];
            auto metric_at = [&](double t) {
                Vec<4> q = pt;
                q[k] = t;
                return fisher_metric(FreundParams{q[0], q[1], q[2], q[3]}).g;
            };
            const auto f2p = metric_at(pt[k] + 2 * h), fp = metric_at(pt[k] + h);
            const auto fm = metric_at(pt[k] - h), f2m = metric_at(pt[k] - 2 * h);
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) {
                    const double dg =
                        (-f2p(i, j) + 8.0 * fp(i, j) - 8.0 * fm(i, j) + f2m(i, j)) / (12.0 * h);
                    s.feed((dg - want[k](i, j)) / scale);
                }
        }
    }
    s.close("connection.metric_compatibility", 1e-6);
}

inline void check_curvature(Suite& s, const GridSpec& gs) {
    const FiniteDiffConfig fd{};
    SplitErr split;
    for (const auto& p : grid_points(gs)) {
        for (double al : gs.alphas) {
            const auto closed = curvature_tensor(p, {al});
            const auto num = curvature_numeric(p, {al}, fd);
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j)
                    for (int k = 0; k < 4; ++k)
                        for (int l = 0; l < 4; ++l)
                            split.feed(num(i, j, k, l), closed(i, j, k, l));
        }
    }
    s.feed(split.rel);
    s.close("curvature.fd_nonzero", 1e-5);
    s.feed(split.abs);
    s.close("curvature.fd_zero", 1e-6);

    double strsym = 0.0;
    for (const auto& p : grid_points(gs)) {
        const auto r = curvature_tensor(p, {0.37});
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                for (int k = 0; k < 4; ++k)
                    for (int l = 0; l < 4; ++l) {
                        strsym = std::fmax(strsym, std::fabs(r(i, j, k, l) + r(j, i, k, l)));
                        strsym = std::fmax(strsym, std::fabs(r(i, j, k, l) + r(i, j, l, k)));
                        strsym = std::fmax(strsym, std::fabs(r(i, j, k, l) - r(k, l, i, j)));
                        strsym = std::fmax(strsym, std::fabs(r(i, j, k, l) + r(i, k, l, j) +
                                                             r(i, l, j, k)));
                    }
    }
    s.feed(strsym);
    s.close("curvature.symmetry_bianchi", 0.0);

    for (const auto& p : grid_points(gs)) {
        for (double al : {-1.0, 1.0}) {
            s.feed(curvature_tensor(p, {al}).max_abs());
            s.feed(ricci_tensor(p, {al}).ric.max_abs());
            s.feed(scalar_curvature(p, {al}));
        }
    }
    s.close("curvature.flat_extremes", 1e-12);
}

inline void check_ricci(Suite& s, const GridSpec& gs) {
    for (const auto& p : grid_points(gs)) {
        for (double al : gs.alphas) {
            const auto ric = ricci_tensor(p, {al});
            const auto contracted =
                ricci_from_curvature(curvature_tensor(p, {al}), fisher_metric_inverse(p));
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) s.feed(contracted(i, j) - ric.ric(i, j));
        }
    }
    s.close("ricci.contraction_consistency", 1e-12);

    for (const auto& p : grid_points(gs)) {
        const double s2 = p.rate_sum() * p.rate_sum();
        for (double al : gs.alphas) {
            const auto ric = ricci_tensor(p, {al});
            const double q = al * al - 1.0;
            const double evals[4] = {0.0, q * (1.0 / s2 - 1.0 / (2 * p.alpha1 * p.alpha2)),
                                     q * (-p.alpha2 / (2 * p.rate_sum() * p.beta1 * p.beta1)),
                                     q * (-p.alpha1 / (2 * p.rate_sum() * p.beta2 * p.beta2))};
            const Vec<4> evecs[4] = {{p.alpha1 / p.alpha2, 0, 1, 0},
                                     {-p.alpha2 / p.alpha1, 0, 1, 0},
                                     {0, 1, 0, 0},
                                     {0, 0, 0, 1}};
            const double ric_scale = std::fmax(ric.ric.max_abs(), 1e-300);
            for (int e = 0; e < 4; ++e) {
                const auto rv = ric.ric * evecs[e];
                double err = 0.0;
                for (int i = 0; i < 4; ++i)
                    err = std::fmax(err, std::fabs(rv[i] - evals[e] * evecs[e][i]));
                s.feed(std::fabs(al) == 1.0 ? err : err / (ric_scale * norm<4>(evecs[e])));
            }
        }
    }
    s.close("ricci.eigen_pairs", 1e-10);
}

inline void check_scalar_pipeline(Suite& s, const GridSpec& gs, std::uint64_t seed) {
    const auto pts = random_points(gs.n_random, seed);
    const FiniteDiffConfig fd{};
    for (const auto& p : pts) {
        const auto ginv = fisher_metric_inverse(p);
        for (double al : gs.alphas) {
            const double want = -1.5 * (al * al - 1.0);
            const auto ric = ricci_from_curvature(curvature_tensor(p, {al}), ginv);
            s.feed(scalar_from_ricci(ric, ginv) - want);
            // same value through the closed Ricci matrix
            s.feed(scalar_from_ricci(ricci_tensor(p, {al}).ric, ginv) - want);
        }
    }
    s.close("scalar.pipeline_closed", 1e-10);

    for (const auto& p : pts) {
        const auto ginv = fisher_metric_inverse(p);
        for (double al : gs.alphas) {
            const double want = -1.5 * (al * al - 1.0);
            const auto ric = ricci_from_curvature(curvature_numeric(p, {al}, fd), ginv);
            s.feed(scalar_from_ricci(ric, ginv) - want);
        }
    }
    s.close("scalar.pipeline_fd", 1e-4);
}

inline void check_sectional(Suite& s, const GridSpec& gs) {
    for (const auto& p : grid_points(gs)) {
        const double sum = p.rate_sum();
        for (double al : gs.alphas) {
            const double f = 1.0 - al * al;
            const auto sec = sectional_curvatures(p, {al});
            const auto mean = mean_curvatures(p, {al});
            s.feed(sec(0, 1) - f * p.alpha2 / (4 * sum));
            s.feed(sec(0, 3) - f * p.alpha2 / (4 * sum));
            s.feed(sec(0, 2));
            s.feed(sec(1, 2) - f * p.alpha1 / (4 * sum));
            s.feed(sec(2, 3) - f * p.alpha1 / (4 * sum));
            s.feed(sec(1, 3) - f / 4.0);
            s.feed(mean(0) - f * p.alpha2 / (6 * sum));
            s.feed(mean(1) - f / 6.0);
            s.feed(mean(2) - f * p.alpha1 / (6 * sum));
            s.feed(mean(3) - f / 6.0);
        }
    }
    s.close("sectional_mean.closed_forms", 1e-14);
}

inline void check_quadrature_internals(Suite& s, const GridSpec& gs) {
    const QuadratureConfig q{};
    for (const auto& p : grid_points(gs)) {
        const auto m = score_mean_numeric(p, q);
        for (double v : m) s.feed(v);
    }
    s.close("oracle.score_mean_zero", 1e-6);

    const FreundParams ones{1, 1, 1, 1};
    QuadratureConfig q64{}, q128{};
    q128.nodes_per_axis = 128;
    const auto a = fisher_metric_numeric(ones, q64).metric.g;
    const auto b = fisher_metric_numeric(ones, q128).metric.g;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) s.feed(a(i, j) - b(i, j));
    s.close("oracle.convergence_at_unit", 1e-8);

    // the truncation transform is an alternate route to the same numbers
    QuadratureConfig qt{};
    qt.transform = QuadratureConfig::Transform::direct_truncation;
    for (const auto& p : {ones, FreundParams{2, 1, 2, 1}, FreundParams{0.7, 1.3, 2.1, 0.9}}) {
        const auto closed = fisher_metric(p);
        const auto num = fisher_metric_numeric(p, qt);
        for (int i = 0; i < 4; ++i) s.feed(rel_err(num.metric.g(i, i), closed.g(i, i)));
    }
    s.close("oracle.truncation_transform", 1e-6);
}

// ---- submanifolds -----------------------------------------------------------

template <int N>
double submanifold_metric_vs_quadrature(const FreundParams& ambient,
                                        const EmbeddingJacobian<4, N>& jac,
                                        const SquareMatrix<N>& closed) {
    const QuadratureConfig q{};
    constexpr int K = N * (N + 1) / 2;
    auto outer = [&](double x, double y) {
        const auto sc = score(ambient, x, y);
        std::array<double, N> sub{};
        for (int a = 0; a < N; ++a)
            for (int i = 0; i < 4; ++i) sub[a] += jac[i][a] * sc[i];
        std::array<double, K> v{};
        int c = 0;
        for (int a = 0; a < N; ++a)
            for (int b = a; b < N; ++b) v[c++] = sub[a] * sub[b];
        return v;
    };
    const auto got = integrate_joint_multi<K>(ambient, outer, q);
    double err = 0.0, scale = 0.0;
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) scale = std::fmax(scale, std::fabs(closed(a, b)));
    int c = 0;
    for (int a = 0; a < N; ++a)
        for (int b = a; b < N; ++b) err = std::fmax(err, std::fabs(got[c++] - closed(a, b)) / scale);
    return err;
}

inline void check_f1_f2(Suite& s, const GridSpec& gs) {
    const std::vector<F1Point> pts1 = {{1, 1}, {0.4, 2.5}, {3, 0.8}};
    for (const auto& p : pts1) {
        const auto amb = fisher_metric(embed_f1(p)).g;
        const auto pull = pullback_metric<4, 2>(amb, f1_embedding_jacobian());
        const auto closed = f1_metric(p).g;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) s.feed(pull(i, j) - closed(i, j));
    }
    s.close("f1.pullback_metric", 1e-12);

    const FiniteDiffConfig fd{};
    for (const auto& p : pts1) {
        for (double al : gs.flat_alphas) {
            auto gamma_at = [&](const Vec<2>& q) {
                return f1_connection({q[0], q[1]}, {al}).upper;
            };
            const auto r =
                assemble_curvature_fd<2>(gamma_at, {p.alpha1, p.alpha2}, f1_metric(p).g, fd);
            s.feed(r.max_abs());
        }
    }
    s.close("f1.flatness", 1e-8);

    for (const auto& p : pts1)
        s.feed(submanifold_metric_vs_quadrature<2>(embed_f1(p), f1_embedding_jacobian(),
                                                   f1_metric(p).g));
    s.close("f1.metric_quadrature", 1e-6);

    const std::vector<F2Point> pts2 = {{1, 1}, {2, 5}, {0.6, 1.7}};
    for (const auto& p : pts2) {
        const auto m2 = f2_metric(p);
        const auto m1 = f1_metric({p.alpha1, p.beta1});
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) s.feed(m2.g(i, j) - m1.g(i, j));
    }
    s.close("f2.isometry_with_f1", 0.0);

    for (const auto& p : pts2) {
        const auto amb = fisher_metric(embed_f2(p)).g;
        const auto pull = pullback_metric<4, 2>(amb, f2_embedding_jacobian());
        const auto closed = f2_metric(p).g;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) s.feed(pull(i, j) - closed(i, j));
    }
    s.close("f2.pullback_metric", 1e-12);

    for (const auto& p : pts2)
        s.feed(submanifold_metric_vs_quadrature<2>(embed_f2(p), f2_embedding_jacobian(),
                                                   f2_metric(p).g));
    s.close("f2.metric_quadrature", 1e-6);

    // exponential-family structure
    for (const auto& p : pts2) {
        auto psi = [](double a, double b) { return -std::log(a * b); };
        const auto hess = fd::hessian2(psi, p.alpha1, p.beta1);
        s.feed(hess(0, 0) - f2_metric(p).g(0, 0));
        s.feed(hess(1, 1) - f2_metric(p).g(1, 1));
        s.feed(hess(0, 1));
    }
    s.close("f2.hessian_of_potential", 1e-7);

    for (const auto& p : pts2) {
        const auto pot = f2_potential(p);
        const auto dual = f2_to_dual(p);
        s.feed(pot.gradient[0] - dual.eta1);
        s.feed(pot.gradient[1] - dual.eta2);
    }
    s.close("f2.gradient_is_dual", 0.0);

    for (const auto& p : pts2) {
        const auto dual = f2_to_dual(p);
        const double lhs = f2_potential(p).value + f2_dual_potential(p);
        const double rhs = p.alpha1 * dual.eta1 + p.beta1 * dual.eta2;
        s.feed(lhs - rhs);
        const auto back = f2_from_dual(dual);
        s.feed(back.alpha1 - p.alpha1);
        s.feed(back.beta1 - p.beta1);
    }
    s.close("f2.legendre_and_roundtrip", 1e-14);

    // dual flatness: the +1 connection vanishes in the natural chart, the
    // -1 connection vanishes after transforming to the gradient chart
    for (const auto& p : pts2) {
        s.feed(f1_connection({p.alpha1, p.beta1}, {1.0}).upper.max_abs());
        const auto gm = f1_connection({p.alpha1, p.beta1}, {-1.0}).upper;
        const auto d = f2_to_dual(p);
        SquareMatrix<2> jac;  // d theta_i / d eta_a for theta_i = -1/eta_i
        jac(0, 0) = 1.0 / (d.eta1 * d.eta1);
        jac(1, 1) = 1.0 / (d.eta2 * d.eta2);
        std::array<SquareMatrix<2>, 2> hess{};
        hess[0](0, 0) = -2.0 / (d.eta1 * d.eta1 * d.eta1);
        hess[1](1, 1) = -2.0 / (d.eta2 * d.eta2 * d.eta2);
        s.feed(transform_christoffel<2>(gm, jac, hess).max_abs());
    }
    s.close("f2.dual_flatness", 1e-12);

    for (const auto& p : pts2) {
        const auto m = f2_mixed_metric(p.alpha1, f2_to_dual(p).eta2);
        s.feed((m.g(0, 0) > 0.0 && m.g(1, 1) > 0.0) ? 0.0 : 1.0);
    }
    s.close("f2.mixed_metric_positive_definite", 0.0);
}

inline void check_f3(Suite& s, const GridSpec& gs) {
    const std::vector<F3Point> pts = {{1, 1}, {0.5, 2.2}, {3.1, 0.9}};
    for (const auto& p : pts) {
        const auto amb = fisher_metric(embed_f3(p)).g;
        const auto pull = pullback_metric<4, 2>(amb, f3_embedding_jacobian());
        const auto closed = f3_metric(p).g;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) s.feed(pull(i, j) - closed(i, j));
    }
    s.close("f3.pullback_metric", 1e-12);

    for (const auto& p : pts)
        s.feed(submanifold_metric_vs_quadrature<2>(embed_f3(p), f3_embedding_jacobian(),
                                                   f3_metric(p).g));
    s.close("f3.metric_quadrature", 1e-6);

    const FiniteDiffConfig fd{};
    for (const auto& p : pts) {
        for (double al : gs.flat_alphas) {
            auto gamma_at = [&](const Vec<2>& q) { return f3_connection({q[0], q[1]}, {al}); };
            const auto r =
                assemble_curvature_fd<2>(gamma_at, {p.alpha1, p.alpha2}, f3_metric(p).g, fd);
            s.feed(r.max_abs());
        }
    }
    s.close("f3.flatness", 1e-8);
}

inline void check_acbed(Suite& s, const GridSpec& gs) {
    const std::vector<ACBEDPoint> pts = {{1, 1, 1}, {1.1, 0.6, 2.3}, {0.5, 1.8, 0.9}};
    const QuadratureConfig q{};

    for (const auto& p : pts) {
        const auto fr = acbed_to_freund(p);
        for (double x : {0.1, 0.45, 1.3, 2.7})
            for (double y : {0.2, 0.45, 1.1, 3.3})
                s.feed(rel_err(acbed_density(p, x, y), joint_density(fr, x, y)));
    }
    s.close("acbed.density_consistency", 1e-12);

    for (const auto& p : pts) {
        const auto amb = fisher_metric(acbed_to_freund(p)).g;
        const auto pull = pullback_metric<4, 3>(amb, acbed_embedding_jacobian(p));
        const auto closed = acbed_metric(p).g;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) s.feed(pull(i, j) - closed(i, j));
    }
    s.close("acbed.pullback_metric", 1e-12);

    for (const auto& p : pts)
        s.feed(submanifold_metric_vs_quadrature<3>(acbed_to_freund(p),
                                                   acbed_embedding_jacobian(p),
                                                   acbed_metric(p).g));
    s.close("acbed.metric_quadrature", 1e-6);

    for (const auto& p : pts) {
        const auto fr = acbed_to_freund(p);
        const double ex = integrate_joint(fr, [](double x, double) { return x; }, q);
        const double ey = integrate_joint(fr, [](double, double y) { return y; }, q);
        const double exy = integrate_joint(fr, [](double x, double y) { return x * y; }, q);
        s.feed(exy - ex * ey - acbed_covariance(p));
        const double ex2 = integrate_joint(fr, [](double x, double) { return x * x; }, q);
        const double ey2 = integrate_joint(fr, [](double, double y) { return y * y; }, q);
        const double rho = (exy - ex * ey) /
                           std::sqrt((ex2 - ex * ex) * (ey2 - ey * ey));
        s.feed(rho - acbed_correlation(p));
    }
    s.close("acbed.moments_quadrature", 1e-8);

    // marginals normalize; 1-D panel rule over the quantile range
    for (const auto& p : pts) {
        const auto rule = quad::gauss_legendre(64);
        const double t_hi = 40.0 / std::fmin(p.lambda(), p.lambda1 + p.lambda12);
        double ix = 0.0, iy = 0.0;
        const int panels = 8;
        for (int seg = 0; seg < panels; ++seg) {
            const double a = t_hi * seg / panels, b = t_hi * (seg + 1) / panels;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                const double t = a + (b - a) * rule.nodes[i];
                ix += (b - a) * rule.weights[i] * acbed_marginal_x(p, t);
                iy += (b - a) * rule.weights[i] * acbed_marginal_y(p, t);
            }
        }
        s.feed(ix - 1.0);
        s.feed(iy - 1.0);
    }
    s.close("acbed.marginal_normalization", 1e-8);

    // the equal-rates slice
    const std::vector<std::pair<double, double>> sym_pts = {{1, 1}, {0.7, 1.9}, {2.4, 0.5}};
    const FiniteDiffConfig fd{};
    for (const auto& [l1, l12] : sym_pts) {
        for (double al : gs.flat_alphas) {
            auto fam = acbed_symmetric_family(l1, l12, {al});
            auto gamma_at = [&](const Vec<2>& v) {
                return acbed_symmetric_family(v[0], v[1], {al}).upper;
            };
            const auto r = assemble_curvature_fd<2>(gamma_at, {l1, l12}, fam.metric.g, fd);
            s.feed(r.max_abs());
        }
    }
    s.close("f4sym.flatness", 1e-8);

    for (const auto& [l1, l12] : sym_pts) {
        const auto fam = acbed_symmetric_family(l1, l12, {0.0});
        auto psi = [](double a, double b) {
            return std::log(2.0) - std::log(a + b) - std::log(2 * a + b);
        };
        const auto hess = fd::hessian2(psi, l1, l12);
        s.feed(hess(0, 0) - fam.metric.g(0, 0));
        s.feed(hess(1, 1) - fam.metric.g(1, 1));
        s.feed(hess(0, 1) - fam.metric.g(0, 1));
    }
    s.close("f4sym.hessian_of_potential", 1e-7);

    for (const auto& [l1, l12] : sym_pts) {
        for (double al : gs.flat_alphas) {
            const auto fam = acbed_symmetric_family(l1, l12, {al});
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    for (int k = 0; k < 2; ++k) {
                        double low = 0.0;
                        for (int h = 0; h < 2; ++h) low += fam.metric.g(k, h) * fam.upper(i, j, h);
                        s.feed(low - fam.lower(i, j, k));
                    }
        }
    }
    s.close("f4sym.raising_consistency", 1e-12);

    for (const auto& [l1, l12] : sym_pts) {
        const auto fam = acbed_symmetric_family(l1, l12, {0.0});
        const double lhs = fam.potential.value + fam.dual_potential;
        const double rhs = l1 * fam.dual_coords[0] + l12 * fam.dual_coords[1];
        s.feed(lhs - rhs);
    }
    s.close("f4sym.legendre", 1e-14);

    // the slice's metric against score quadrature on the matching ACBED point
    for (const auto& [l1, l12] : sym_pts) {
        const ACBEDPoint p3{l1, l12, l1};
        // chart map (l1, l12) -> (lambda1, lambda12, lambda2) = (l1, l12, l1)
        const auto j3 = acbed_embedding_jacobian(p3);
        EmbeddingJacobian<4, 2> jac{};
        for (int i = 0; i < 4; ++i) {
            jac[i][0] = j3[i][0] + j3[i][2];
            jac[i][1] = j3[i][1];
        }
        const auto fam = acbed_symmetric_family(l1, l12, {0.0});
        s.feed(submanifold_metric_vs_quadrature<2>(acbed_to_freund(p3), jac, fam.metric.g));
    }
    s.close("f4sym.metric_quadrature", 1e-6);
}

// ---- transformed family ------------------------------------------------------

inline void check_logexp(Suite& s, const GridSpec&) {
    const QuadratureConfig q{};
    for (double a1 : {0.5, 2.0})
        for (double b1 : {0.5, 2.0})
            for (double a2 : {0.5, 2.0})
                for (double b2 : {0.5, 2.0}) {
                    const LogExpParams le{a1, b1, a2, b2};
                    const auto num = logexp_fisher_metric(le, q).metric.g;
                    const auto closed = fisher_metric(le.as_freund()).g;
                    double scale = 0.0;
                    for (int i = 0; i < 4; ++i) scale = std::fmax(scale, closed(i, i));
                    for (int i = 0; i < 4; ++i)
                        for (int j = 0; j < 4; ++j)
                            s.feed((num(i, j) - closed(i, j)) /
                                   (closed(i, j) != 0.0 ? closed(i, j) : scale));
                }
    s.close("logexp.isometry", 1e-5);

    const std::vector<LogExpParams> pts = {{1, 1, 1, 1}, {2, 1, 2, 1}, {0.7, 1.3, 2.1, 0.9}};
    for (const auto& le : pts) {
        s.feed(logexp_integrate_multi<1>(le, [](double, double) { return std::array<double, 1>{1.0}; },
                                         64)[0] -
               1.0);
    }
    s.close("logexp.normalization", 1e-8);

    for (const auto& le : pts) {
        const auto fr = le.as_freund();
        for (int i = 1; i <= 20; ++i)
            for (int j = 1; j <= 20; ++j) {
                const double n = i / 21.0, m = j / 21.0;
                if (n == m) continue;
                const double lhs = logexp_density(le, n, m) * n * m;
                const double rhs = joint_density(fr, -std::log(n), -std::log(m));
                s.feed(rel_err(lhs, rhs));
            }
    }
    s.close("logexp.pushforward_identity", 1e-12);

    for (const auto& le : pts) {
        const double en = logexp_integrate_multi<1>(
            le, [](double n, double) { return std::array<double, 1>{n}; }, 64)[0];
        const double em = logexp_integrate_multi<1>(
            le, [](double, double m) { return std::array<double, 1>{m}; }, 64)[0];
        const double enm = logexp_integrate_multi<1>(
            le, [](double n, double m) { return std::array<double, 1>{n * m}; }, 64)[0];
        s.feed(enm - en * em - logexp_covariance(le));
    }
    s.close("logexp.covariance_quadrature", 1e-8);
}

// ---- immersion ----------------------------------------------------------------

inline double detail_curve_dist(const ImmersedPoint& q, double t) {
    const double dw = immersion_height(t, t) - q.w;
    return (t - q.u) * (t - q.u) + (t - q.v) * (t - q.v) + dw * dw;
}

inline void check_immersion(Suite& s, const GridSpec&) {
    const auto mesh = build_mesh({0.2, 3.0}, {0.2, 3.0}, 16, 0.25);
    for (const auto& v : mesh.vertices) s.feed(v.w == immersion_height(v.u, v.v) ? 0.0 : 1.0);
    for (const auto& c : mesh.curve) s.feed(c.u == c.v ? 0.0 : 1.0);
    s.close("immersion.height_exact", 0.0);

    // off-diagonal queries only: on the curve the minimum is flat at zero and
    // the log grid cannot resolve it, which the zero_on_curve check covers
    const std::vector<F2Point> queries = {{1, 1.1}, {0.5, 2.0}, {2.5, 0.4}};
    for (const auto& qp : queries) {
        const auto q2 = immerse(qp);
        const auto got = distance_to_independence(q2);
        // dense grid oracle over the same generous bracket
        const double lo = std::fmin(std::fmin(q2.u, q2.v), std::exp(-0.5 * q2.w)) / 2.0;
        const double hi = std::fmax(std::fmax(q2.u, q2.v), std::exp(-0.5 * q2.w)) * 2.0;
        double best = 1e300;
        for (int i = 0; i < 10000; ++i) {
            const double t = lo * std::pow(hi / lo, i / 9999.0);
            best = std::fmin(best, detail_curve_dist(q2, t));
        }
        s.feed(got.distance - std::sqrt(best));
    }
    s.close("immersion.distance_vs_grid_oracle", 1e-6);

    for (double t : {0.3, 1.0, 2.0}) {
        const auto q2 = immerse({t, t});
        s.feed(distance_to_independence(q2).distance);
        s.feed(f2_covariance({t, t}));
    }
    s.close("immersion.zero_on_curve", 1e-10);

    // along a fixed-u mesh row the distance dips exactly once, at v == u
    int violations = 0;
    const double u = 1.3;
    double prev = distance_to_independence(immerse({u, 0.2})).distance;
    bool decreasing = true;
    for (int i = 1; i <= 60; ++i) {
        const double v = 0.2 + (3.0 - 0.2) * i / 60.0;
        const double d = distance_to_independence(immerse({u, v})).distance;
        if (d > prev + 1e-12 && decreasing) {
            if (v < u) ++violations;  // rose before reaching the diagonal
            decreasing = false;
        } else if (d < prev - 1e-12 && !decreasing) {
            ++violations;  // fell again after the minimum
        }
        prev = d;
    }
    s.feed(violations);
    s.close("immersion.unimodal_rows", 0.0);
}

// ---- sampling -------------------------------------------------------------------

inline void check_sampling(Suite& s, const GridSpec& gs, std::uint64_t seed) {
    const auto b1 = sample({1, 2, 1, 2}, 4096, seed);
    const auto b2 = sample({1, 2, 1, 2}, 4096, seed);
    double det = 0.0;
    for (std::size_t i = 0; i < b1.n(); ++i) {
        det = std::fmax(det, std::fabs(b1.pairs[i][0] - b2.pairs[i][0]));
        det = std::fmax(det, std::fabs(b1.pairs[i][1] - b2.pairs[i][1]));
    }
    s.feed(det);
    s.close("sampler.determinism", 0.0);

    const std::vector<FreundParams> pts = {{1, 2, 1, 2}, {1, 1, 1, 1}, {1.5, 0.8, 0.7, 1.2}};
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto b = sample(pts[i], gs.sample_n, seed + 11 * (i + 1));
        const auto m = empirical_moments(b);
        s.feed(std::fabs(m.cov - covariance(pts[i])) / (4.0 * m.se_cov));
    }
    s.close("sampler.covariance_within_4se", 1.0);

    const double crit = inverse_kolmogorov(0.01);
    const std::vector<FreundParams> ks_pts = {
        {1, 1, 1, 1}, {1.3, 2.1, 0.8, 1.4}, {1.2, 2.0 * (1.0 + 1e-12), 0.8, 1.1}};
    for (std::size_t i = 0; i < ks_pts.size(); ++i) {
        const auto b = sample(ks_pts[i], gs.ks_n, seed + 101 * (i + 1));
        const auto ks = ks_test_marginal_x(b, ks_pts[i]);
        s.feed(std::sqrt(static_cast<double>(b.n())) * ks.statistic / crit);
    }
    s.close("sampler.ks_marginal_1pct", 1.0);

    // closed-form correlation approaches its bounds monotonically
    int violations = 0;
    double prev = correlation({1, 1, 1, 1});
    for (int i = 1; i <= 24; ++i) {
        const double b = std::pow(10.0, 3.0 * i / 24.0);
        const double rho = correlation({1, b, 1, b});
        if (!(rho > prev)) ++violations;
        if (!(rho > -1.0 / 3.0 && rho < 1.0)) ++violations;
        prev = rho;
    }
    if (!(1.0 - prev < 0.01)) ++violations;
    prev = correlation({1, 1, 1, 1});
    for (int i = 1; i <= 24; ++i) {
        const double b = std::pow(10.0, -3.0 * i / 24.0);
        const double rho = correlation({1, b, 1, b});
        if (!(rho < prev)) ++violations;
        if (!(rho > -1.0 / 3.0 && rho < 1.0)) ++violations;
        prev = rho;
    }
    if (!(std::fabs(prev + 1.0 / 3.0) < 0.01)) ++violations;
    s.feed(violations);
    s.close("correlation.monotone_limits", 0.0);
}

}  // namespace detail

inline std::vector<CheckResult> run_verification(const VerifyOptions& opt = {}) {
    detail::Suite s;
    const auto gs = detail::grid_spec(opt.grid);
    detail::check_metric(s, gs);
    detail::check_christoffel(s, gs);
    detail::check_metric_compatibility(s, gs);
    detail::check_curvature(s, gs);
    detail::check_ricci(s, gs);
    detail::check_scalar_pipeline(s, gs, opt.seed);
    detail::check_sectional(s, gs);
    detail::check_quadrature_internals(s, gs);
    detail::check_f1_f2(s, gs);
    detail::check_f3(s, gs);
    detail::check_acbed(s, gs);
    detail::check_logexp(s, gs);
    detail::check_immersion(s, gs);
    detail::check_sampling(s, gs, opt.seed);
    return s.results;
}

inline bool all_passed(const std::vector<CheckResult>& rs) {
    for (const auto& r : rs)
        if (!r.pass) return false;
    return true;
}

inline void write_text_report(const std::vector<CheckResult>& rs, std::ostream& os) {
    int failed = 0;
    for (const auto& r : rs) {
        os << "check=" << r.name << " err=" << fmt17(r.max_err) << " tol=" << fmt17(r.tol)
           << " status=" << (r.pass ? "PASS" : "FAIL") << "\n";
        if (!r.pass) ++failed;
    }
    os << "checks=" << rs.size() << " failed=" << failed << " overall="
       << (failed == 0 ? "PASS" : "FAIL") << "\n";
}

inline void write_csv_report(const std::vector<CheckResult>& rs, std::ostream& os) {
    os << "name,max_err,tol,status\n";
    for (const auto& r : rs)
        os << r.name << "," << fmt17(r.max_err) << "," << fmt17(r.tol) << ","
           << (r.pass ? "PASS" : "FAIL") << "\n";
}

}  // namespace freundgeo::verify
