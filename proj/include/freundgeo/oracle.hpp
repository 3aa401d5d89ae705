#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "freundgeo/distribution.hpp"
#include "freundgeo/geometry.hpp"
#include "freundgeo/quadrature.hpp"

// Numeric ground truth, produced from the density itself: score-product
// quadrature for the metric, the defining integral for the connection, and
// finite differences of the mixed connection for the curvature. These paths
// never read the closed forms they are checking (the curvature assembly
// differentiates christoffel_upper, whose correctness is itself pinned by
// christoffel_lower_numeric plus the raising relation).

namespace freundgeo {

struct FiniteDiffConfig {
    enum class Scheme { central_2nd, central_4th };
    double step_relative = 1e-4;
    Scheme scheme = Scheme::central_4th;
};

inline void validate(const FiniteDiffConfig& c) {
    if (!(c.step_relative >= 1e-8 && c.step_relative <= 1e-2))
        throw std::domain_error("FiniteDiffConfig: step_relative must lie in [1e-8, 1e-2]");
}

namespace detail {

inline void gate_quadrature(double err, double scale, const char* what) {
    if (err > 1e-5 * std::fmax(scale, 1e-300))
        throw quadrature_error(std::string(what) +
                               ": quadrature error estimate above 1e-5 of scale");
}

}  // namespace detail

namespace fd {

// 4th-order stencils; 2nd-order ones bottom out near 1e-7 in double
// precision, too coarse for the tolerances used here.

template <class Fn>
double first_derivative(Fn&& f, double x, double h) {
    return (-f(x + 2 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2 * h)) / (12.0 * h);
}

template <class Fn>
double second_derivative(Fn&& f, double x, double h) {
    return (-f(x + 2 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2 * h)) /
           (12.0 * h * h);
}

template <class Fn>
double mixed_derivative(Fn&& f, double x, double y, double hx, double hy) {
    auto dy = [&](double u) {
        return first_derivative([&](double v) { return f(u, v); }, y, hy);
    };
    return first_derivative(dy, x, hx);
}

/// Finite-difference Hessian of a scalar function of two positive
/// coordinates, steps relative to each coordinate.
template <class Fn>
SquareMatrix<2> hessian2(Fn&& f, double x, double y, double rel = 2e-3) {
    SquareMatrix<2> h;
    h(0, 0) = second_derivative([&](double u) { return f(u, y); }, x, rel * x);
    h(1, 1) = second_derivative([&](double v) { return f(x, v); }, y, rel * y);
    h(0, 1) = h(1, 0) = mixed_derivative(f, x, y, 0.5 * rel * x, 0.5 * rel * y);
    return h;
}

}  // namespace fd

struct NumericMetric {
    MetricTensor<4> metric{};
    double err_estimate{};
};

/// E[score_i score_j] by per-wedge quadrature; the alternate route to the
/// Fisher metric (equal to -E[hessian of log f] under the usual regularity).
inline NumericMetric fisher_metric_numeric(const FreundParams& p, const QuadratureConfig& q) {
    validate(p);
    validate(q);
    auto outer = [&](double x, double y) {
        const auto s = score(p, x, y);
        std::array<double, 10> v{};
        int c = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = i; j < 4; ++j) v[c++] = s[i] * s[j];
        return v;
    };
    QuadratureConfig half = q;
    half.nodes_per_axis = half_nodes(q.nodes_per_axis);
    const auto coarse = integrate_joint_multi<10>(p, outer, half);
    const auto fine = integrate_joint_multi<10>(p, outer, q);

    NumericMetric out;
    out.metric.labels = kFreundLabels;
    double scale = 0.0;
    int c = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) {
            out.metric.g(i, j) = out.metric.g(j, i) = fine[c];
            out.err_estimate = std::fmax(out.err_estimate, std::fabs(fine[c] - coarse[c]));
            scale = std::fmax(scale, std::fabs(fine[c]));
            ++c;
        }
    detail::gate_quadrature(out.err_estimate, scale, "fisher_metric_numeric");
    return out;
}

/// E[score_i] per component; zero for a normalized family, so this doubles
/// as a self-test of the quadrature pipeline.
inline Vec<4> score_mean_numeric(const FreundParams& p, const QuadratureConfig& q) {
    validate(p);
    validate(q);
    const auto v = integrate_joint_multi<4>(
        p, [&](double x, double y) { return score(p, x, y); }, q);
    return {v[0], v[1], v[2], v[3]};
}

struct NumericChristoffel {
    ChristoffelLower<4> gamma{};
    double err_estimate{};
};

/// The defining integral: E[(d2_ij log f) d_k log f]
///   + (1 - alpha)/2 E[d_i log f  d_j log f  d_k log f].
inline NumericChristoffel christoffel_lower_numeric(const FreundParams& p, const AlphaIndex& a,
                                                    const QuadratureConfig& q) {
    validate(p);
    validate(a);
    validate(q);
    const double c3 = (1.0 - a.value) / 2.0;
    auto integrand = [&](double x, double y) {
        const auto s = score(p, x, y);
        const auto h = log_density_hessian(p, wedge_of(x, y));
        std::array<double, 40> v{};
        int c = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = i; j < 4; ++j)
                for (int k = 0; k < 4; ++k) v[c++] = h(i, j) * s[k] + c3 * s[i] * s[j] * s[k];
        return v;
    };
    QuadratureConfig half = q;
    half.nodes_per_axis = half_nodes(q.nodes_per_axis);
    const auto coarse = integrate_joint_multi<40>(p, integrand, half);
    const auto fine = integrate_joint_multi<40>(p, integrand, q);

    NumericChristoffel out;
    double scale = 0.0;
    int c = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j)
            for (int k = 0; k < 4; ++k) {
                out.gamma(i, j, k) = out.gamma(j, i, k) = fine[c];
                out.err_estimate = std::fmax(out.err_estimate, std::fabs(fine[c] - coarse[c]));
                scale = std::fmax(scale, std::fabs(fine[c]));
                ++c;
            }
    detail::gate_quadrature(out.err_estimate, scale, "christoffel_lower_numeric");
    return out;
}

/// Curvature assembled by central differences of a mixed-connection field
/// over an N-dimensional chart, lowered with the metric at the base point.
template <int N, class GammaFn>
CurvatureTensor<N> assemble_curvature_fd(GammaFn&& gamma_at, const Vec<N>& point,
                                         const SquareMatrix<N>& metric,
                                         const FiniteDiffConfig& fd) {
    validate(fd);
    std::array<ChristoffelUpper<N>, N> dG;  // dG[i](j,k,l) = d_i Gamma^l_{jk}
    for (int i = 0; i < N; ++i) {
        const double h = fd.step_relative * point[i];
        if (!(point[i] > 10.0 * h))
            throw std::domain_error("assemble_curvature_fd: coordinate too close to zero");
        auto comp = [&](double t) {
            Vec<N> q = point;
            q[i] = t;
            return gamma_at(q);
        };
        if (fd.scheme == FiniteDiffConfig::Scheme::central_2nd) {
            const auto fp = comp(point[i] + h), fm = comp(point[i] - h);
            for (std::size_t t = 0; t < dG[i].a.size(); ++t)
                dG[i].a[t] = (fp.a[t] - fm.a[t]) / (2.0 * h);
        } else {
            const auto f2p = comp(point[i] + 2 * h), fp = comp(point[i] + h);
            const auto fm = comp(point[i] - h), f2m = comp(point[i] - 2 * h);
            for (std::size_t t = 0; t < dG[i].a.size(); ++t)
                dG[i].a[t] = (-f2p.a[t] + 8.0 * fp.a[t] - 8.0 * fm.a[t] + f2m.a[t]) / (12.0 * h);
        }
    }
    const ChristoffelUpper<N> g0 = gamma_at(point);
    CurvatureTensor<N> mixed;  // mixed(i,j,k,l) holds R^l_{ijk}
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            for (int k = 0; k < N; ++k)
                for (int l = 0; l < N; ++l) {
                    double r = dG[i](j, k, l) - dG[j](i, k, l);
                    for (int h2 = 0; h2 < N; ++h2)
                        r += g0(j, k, h2) * g0(i, h2, l) - g0(i, k, h2) * g0(j, h2, l);
                    mixed(i, j, k, l) = r;
                }
    CurvatureTensor<N> lowered;  // R_{ijkl} = g_{lm} R^m_{ijk}
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            for (int k = 0; k < N; ++k)
                for (int l = 0; l < N; ++l) {
                    double v = 0.0;
                    for (int m = 0; m < N; ++m) v += metric(l, m) * mixed(i, j, k, m);
                    lowered(i, j, k, l) = v;
                }
    return lowered;
}

/// Finite-difference curvature of the 4-manifold at (p, alpha).
inline CurvatureTensor<4> curvature_numeric(const FreundParams& p, const AlphaIndex& a,
                                            const FiniteDiffConfig& fd) {
    validate(p);
    validate(a);
    const Vec<4> pt = {p.alpha1, p.beta1, p.alpha2, p.beta2};
    auto gamma_at = [&](const Vec<4>& q) {
        return christoffel_upper(FreundParams{q[0], q[1], q[2], q[3]}, a);
    };
    return assemble_curvature_fd<4>(gamma_at, pt, fisher_metric(p).g, fd);
}

}  // namespace freundgeo
