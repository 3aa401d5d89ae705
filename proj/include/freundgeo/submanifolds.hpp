#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

#include "freundgeo/distribution.hpp"
#include "freundgeo/linalg.hpp"
#include "freundgeo/params.hpp"
#include "freundgeo/tensors.hpp"

// The four classical restrictions of the 4-manifold, each with its own
// chart, the embedding into the ambient coordinates, and closed-form
// geometry. Every embedding is exposed so tests can pull the ambient metric
// back through it.

namespace freundgeo {

namespace detail {
inline void require_positive(std::initializer_list<double> vs, const char* what) {
    for (double v : vs)
        if (!(v > kPositivityFloor) || !std::isfinite(v))
            throw std::domain_error(std::string(what) + ": parameters must be strictly positive");
}
}  // namespace detail

/// d(embedding_i) / d(theta_j): M ambient rows, N chart columns.
template <int M, int N>
using EmbeddingJacobian = std::array<std::array<double, N>, M>;

template <int M, int N>
SquareMatrix<N> pullback_metric(const SquareMatrix<M>& ambient, const EmbeddingJacobian<M, N>& jac) {
    SquareMatrix<N> out;
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) {
            double v = 0.0;
            for (int i = 0; i < M; ++i)
                for (int j = 0; j < M; ++j) v += jac[i][a] * ambient(i, j) * jac[j][b];
            out(a, b) = v;
        }
    return out;
}

/// Mixed-connection transform under a chart change theta(eta):
///   G'^c_{ab} = (d eta_c/d theta_k) [ (d theta_i/d eta_a)(d theta_j/d eta_b) G^k_{ij}
///               + d^2 theta_k / d eta_a d eta_b ].
/// jac(i, a) = d theta_i / d eta_a; hess[k](a, b) = d^2 theta_k / d eta_a d eta_b.
template <int N>
ChristoffelUpper<N> transform_christoffel(const ChristoffelUpper<N>& gamma,
                                          const SquareMatrix<N>& jac,
                                          const std::array<SquareMatrix<N>, N>& hess) {
    const SquareMatrix<N> jinv = inverse(jac);
    ChristoffelUpper<N> out;
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b)
            for (int c = 0; c < N; ++c) {
                double v = 0.0;
                for (int k = 0; k < N; ++k) {
                    double inner = hess[k](a, b);
                    for (int i = 0; i < N; ++i)
                        for (int j = 0; j < N; ++j)
                            inner += jac(i, a) * jac(j, b) * gamma(i, j, k);
                    v += jinv(c, k) * inner;
                }
                out(a, b, c) = v;
            }
    return out;
}

// ---- F1: independent exponential pair (beta_i == alpha_i) -----------------

struct F1Point {
    double alpha1{};
    double alpha2{};
};

inline void validate(const F1Point& p) {
    detail::require_positive({p.alpha1, p.alpha2}, "F1Point");
}

inline FreundParams embed_f1(const F1Point& p) {
    validate(p);
    return {p.alpha1, p.alpha1, p.alpha2, p.alpha2};
}

inline constexpr EmbeddingJacobian<4, 2> f1_embedding_jacobian() {
    return {{{1, 0}, {1, 0}, {0, 1}, {0, 1}}};
}

inline MetricTensor<2> f1_metric(const F1Point& p) {
    validate(p);
    MetricTensor<2> m;
    m.labels = {"alpha1", "alpha2"};
    m.g(0, 0) = 1.0 / (p.alpha1 * p.alpha1);
    m.g(1, 1) = 1.0 / (p.alpha2 * p.alpha2);
    return m;
}

struct Connection2 {
    ChristoffelLower<2> lower{};
    ChristoffelUpper<2> upper{};
};

/// Product geometry: one nonzero family per factor, flat at every alpha.
inline Connection2 f1_connection(const F1Point& p, const AlphaIndex& a) {
    validate(p);
    validate(a);
    Connection2 c;
    const double am1 = a.value - 1.0;
    c.lower(0, 0, 0) = am1 / (p.alpha1 * p.alpha1 * p.alpha1);
    c.lower(1, 1, 1) = am1 / (p.alpha2 * p.alpha2 * p.alpha2);
    c.upper(0, 0, 0) = am1 / p.alpha1;
    c.upper(1, 1, 1) = am1 / p.alpha2;
    return c;
}

// ---- F2: common rates (alpha1 == alpha2, beta1 == beta2) -------------------

struct F2Point {
    double alpha1{};
    double beta1{};
};

inline void validate(const F2Point& p) {
    detail::require_positive({p.alpha1, p.beta1}, "F2Point");
}

inline FreundParams embed_f2(const F2Point& p) {
    validate(p);
    return {p.alpha1, p.beta1, p.alpha1, p.beta1};
}

inline constexpr EmbeddingJacobian<4, 2> f2_embedding_jacobian() {
    return {{{1, 0}, {0, 1}, {1, 0}, {0, 1}}};
}

inline MetricTensor<2> f2_metric(const F2Point& p) {
    validate(p);
    MetricTensor<2> m;
    m.labels = {"alpha1", "beta1"};
    m.g(0, 0) = 1.0 / (p.alpha1 * p.alpha1);
    m.g(1, 1) = 1.0 / (p.beta1 * p.beta1);
    return m;
}

struct PotentialFunction {
    double value{};
    Vec<2> gradient{};
    SquareMatrix<2> hessian{};
};

/// The family is exponential with natural chart (alpha1, beta1) and
/// potential -log(alpha1 beta1); the metric is its Hessian.
inline PotentialFunction f2_potential(const F2Point& p) {
    validate(p);
    PotentialFunction out;
    out.value = -std::log(p.alpha1 * p.beta1);
    out.gradient = {-1.0 / p.alpha1, -1.0 / p.beta1};
    out.hessian(0, 0) = 1.0 / (p.alpha1 * p.alpha1);
    out.hessian(1, 1) = 1.0 / (p.beta1 * p.beta1);
    return out;
}

inline double f2_dual_potential(const F2Point& p) {
    validate(p);
    return std::log(p.alpha1 * p.beta1) - 2.0;
}

struct F2DualPoint {
    double eta1{};
    double eta2{};
};

inline void validate(const F2DualPoint& d) {
    if (!(d.eta1 < 0.0 && d.eta2 < 0.0) || !std::isfinite(d.eta1) || !std::isfinite(d.eta2))
        throw std::domain_error("F2DualPoint: dual coordinates must be strictly negative");
}

inline F2DualPoint f2_to_dual(const F2Point& p) {
    validate(p);
    return {-1.0 / p.alpha1, -1.0 / p.beta1};
}

inline F2Point f2_from_dual(const F2DualPoint& d) {
    validate(d);
    return {-1.0 / d.eta1, -1.0 / d.eta2};
}

/// Metric of the mixed chart (alpha1, eta2). Positive definite: the pure
/// dual direction transforms as g_22 (d beta1/d eta2)^2 = 1/eta2^2, and the
/// primal direction is untouched.
inline MetricTensor<2> f2_mixed_metric(double alpha1, double eta2) {
    detail::require_positive({alpha1, -eta2}, "f2_mixed_metric");
    MetricTensor<2> m;
    m.labels = {"alpha1", "eta2"};
    m.g(0, 0) = 1.0 / (alpha1 * alpha1);
    m.g(1, 1) = 1.0 / (eta2 * eta2);
    return m;
}

inline double f2_covariance(const F2Point& p) {
    validate(p);
    return 0.25 * (1.0 / (p.alpha1 * p.alpha1) - 1.0 / (p.beta1 * p.beta1));
}

/// Zero exactly on the diagonal alpha1 == beta1 (the independence locus).
inline double f2_correlation(const F2Point& p) {
    validate(p);
    return 1.0 - 4.0 * p.alpha1 * p.alpha1 / (3.0 * p.alpha1 * p.alpha1 + p.beta1 * p.beta1);
}

// ---- F3: switched rates pinned to the total (beta_i == alpha1+alpha2) ------

struct F3Point {
    double alpha1{};
    double alpha2{};
};

inline void validate(const F3Point& p) {
    detail::require_positive({p.alpha1, p.alpha2}, "F3Point");
}

inline FreundParams embed_f3(const F3Point& p) {
    validate(p);
    const double s = p.alpha1 + p.alpha2;
    return {p.alpha1, s, p.alpha2, s};
}

inline constexpr EmbeddingJacobian<4, 2> f3_embedding_jacobian() {
    return {{{1, 0}, {1, 1}, {0, 1}, {1, 1}}};
}

inline MetricTensor<2> f3_metric(const F3Point& p) {
    validate(p);
    const double s = p.alpha1 + p.alpha2;
    MetricTensor<2> m;
    m.labels = {"alpha1", "alpha2"};
    m.g(0, 0) = (p.alpha2 + 2.0 * p.alpha1) / (p.alpha1 * s * s);
    m.g(0, 1) = m.g(1, 0) = 1.0 / (s * s);
    m.g(1, 1) = (p.alpha1 + 2.0 * p.alpha2) / (p.alpha2 * s * s);
    return m;
}

/// Six nonzero mixed components (two tied by the lifetime swap); the family
/// is flat at every alpha even though the coefficients do not vanish.
inline ChristoffelUpper<2> f3_connection(const F3Point& p, const AlphaIndex& a) {
    validate(p);
    validate(a);
    const double al = a.value;
    const double s = p.alpha1 + p.alpha2;
    ChristoffelUpper<2> c;
    c(0, 0, 0) = 0.5 * (-(1.0 + al) / p.alpha1 + (3.0 * al - 1.0) / s);
    c(0, 1, 0) = c(1, 0, 0) = (al - 1.0) / (2.0 * s);
    c(0, 1, 1) = c(1, 0, 1) = (al - 1.0) / (2.0 * s);
    c(1, 1, 0) = (1.0 + al) * p.alpha1 / (2.0 * p.alpha2 * s);
    c(0, 0, 1) = (1.0 + al) * p.alpha2 / (2.0 * p.alpha1 * s);
    c(1, 1, 1) = 0.5 * (-(1.0 + al) / p.alpha2 + (3.0 * al - 1.0) / s);
    return c;
}

// ---- F4: the absolutely continuous bivariate exponential chart -------------

struct ACBEDPoint {
    double lambda1{};
    double lambda12{};
    double lambda2{};

    double lambda() const { return lambda1 + lambda12 + lambda2; }
};

inline void validate(const ACBEDPoint& p) {
    detail::require_positive({p.lambda1, p.lambda12, p.lambda2}, "ACBEDPoint");
}

/// Reparametrization into the ambient chart; the total rate lambda is the
/// image's alpha1 + alpha2.
inline FreundParams acbed_to_freund(const ACBEDPoint& p) {
    validate(p);
    const double ls = p.lambda1 + p.lambda2;
    return {p.lambda1 + p.lambda1 * p.lambda12 / ls, p.lambda1 + p.lambda12,
            p.lambda2 + p.lambda2 * p.lambda12 / ls, p.lambda2 + p.lambda12};
}

inline EmbeddingJacobian<4, 3> acbed_embedding_jacobian(const ACBEDPoint& p) {
    validate(p);
    const double ls = p.lambda1 + p.lambda2;
    const double ls2 = ls * ls;
    return {{{1.0 + p.lambda12 * p.lambda2 / ls2, p.lambda1 / ls, -p.lambda1 * p.lambda12 / ls2},
             {1.0, 1.0, 0.0},
             {-p.lambda2 * p.lambda12 / ls2, p.lambda2 / ls, 1.0 + p.lambda12 * p.lambda1 / ls2},
             {0.0, 1.0, 1.0}}};
}

/// Density written directly in the (lambda1, lambda12, lambda2) form;
/// pointwise equal to the composed ambient density.
inline double acbed_density(const ACBEDPoint& p, double x, double y) {
    validate(p);
    check_nonneg(x, y);
    const double ls = p.lambda1 + p.lambda2;
    const double lam = p.lambda();
    if (x < y) {
        return p.lambda1 * lam * (p.lambda2 + p.lambda12) / ls *
               std::exp(-p.lambda1 * x - (p.lambda2 + p.lambda12) * y);
    }
    return p.lambda2 * lam * (p.lambda1 + p.lambda12) / ls *
           std::exp(-(p.lambda1 + p.lambda12) * x - p.lambda2 * y);
}

inline MetricTensor<3> acbed_metric(const ACBEDPoint& p) {
    validate(p);
    const double l1 = p.lambda1, l12 = p.lambda12, l2 = p.lambda2;
    const double ls = l1 + l2;
    const double lam2 = p.lambda() * p.lambda();
    const double b1 = l1 + l12, b2 = l2 + l12;
    MetricTensor<3> m;
    m.labels = {"lambda1", "lambda12", "lambda2"};
    m.g(0, 0) = l2 * (1.0 / l1 + ls / (b1 * b1)) / (ls * ls) + 1.0 / lam2;
    m.g(0, 1) = m.g(1, 0) = l2 / (ls * b1 * b1) + 1.0 / lam2;
    m.g(0, 2) = m.g(2, 0) = -1.0 / (ls * ls) + 1.0 / lam2;
    m.g(1, 1) = (l2 / (b1 * b1) + l1 / (b2 * b2)) / ls + 1.0 / lam2;
    m.g(1, 2) = m.g(2, 1) = l1 / (ls * b2 * b2) + 1.0 / lam2;
    m.g(2, 2) = l1 * (1.0 / l2 + ls / (b2 * b2)) / (ls * ls) + 1.0 / lam2;
    return m;
}

inline double acbed_covariance(const ACBEDPoint& p) {
    validate(p);
    const double ls = p.lambda1 + p.lambda2;
    const double lam = p.lambda();
    const double b1 = p.lambda1 + p.lambda12, b2 = p.lambda2 + p.lambda12;
    return (ls * ls * b1 * b2 - lam * lam * p.lambda1 * p.lambda2) /
           (lam * lam * ls * ls * b1 * b2);
}

/// Positive whenever lambda12 > 0.
inline double acbed_correlation(const ACBEDPoint& p) {
    validate(p);
    const double l1 = p.lambda1, l12 = p.lambda12, l2 = p.lambda2;
    const double ls = l1 + l2;
    const double lam = p.lambda();
    const double num = ls * ls * (l1 + l12) * (l2 + l12) - lam * lam * l1 * l2;
    const double fx = ls * ls * (l1 + l12) * (l1 + l12) + l2 * lam * lam * (l2 + 2.0 * l1);
    const double fy = ls * ls * (l2 + l12) * (l2 + l12) + l1 * lam * lam * (l1 + 2.0 * l2);
    return num / (std::sqrt(fx) * std::sqrt(fy));
}

/// Negative mixture of two exponentials in either margin.
inline double acbed_marginal_x(const ACBEDPoint& p, double t) {
    validate(p);
    if (t < 0.0) throw std::domain_error("acbed_marginal_x: negative argument");
    const double ls = p.lambda1 + p.lambda2;
    const double lam = p.lambda();
    const double b1 = p.lambda1 + p.lambda12;
    return (-p.lambda12 / ls) * lam * std::exp(-lam * t) + (lam / ls) * b1 * std::exp(-b1 * t);
}

inline double acbed_marginal_y(const ACBEDPoint& p, double t) {
    validate(p);
    if (t < 0.0) throw std::domain_error("acbed_marginal_y: negative argument");
    const double ls = p.lambda1 + p.lambda2;
    const double lam = p.lambda();
    const double b2 = p.lambda2 + p.lambda12;
    return (-p.lambda12 / ls) * lam * std::exp(-lam * t) + (lam / ls) * b2 * std::exp(-b2 * t);
}

inline std::pair<double, double> acbed_marginals(const ACBEDPoint& p, double t) {
    return {acbed_marginal_x(p, t), acbed_marginal_y(p, t)};
}

// ---- the equal-rates slice lambda1 == lambda2 ------------------------------

/// Exponential family in the natural chart theta = (lambda1, lambda12):
/// potential, metric (its Hessian), both connection forms, and the dual
/// (gradient) chart with its potential. Flat at every alpha.
struct ACBEDSymmetricFamily {
    PotentialFunction potential{};
    MetricTensor<2> metric{};
    ChristoffelLower<2> lower{};
    ChristoffelUpper<2> upper{};
    Vec<2> dual_coords{};
    double dual_potential{};
};

inline ACBEDSymmetricFamily acbed_symmetric_family(double l1, double l12, const AlphaIndex& a) {
    detail::require_positive({l1, l12}, "acbed_symmetric_family");
    validate(a);
    const double A = l1 + l12;       // lambda1 + lambda12
    const double B = 2.0 * l1 + l12; // 2 lambda1 + lambda12
    const double A2 = A * A, A3 = A2 * A, B2 = B * B, B3 = B2 * B;
    ACBEDSymmetricFamily out;

    out.potential.value = std::log(2.0) - std::log(A) - std::log(B);
    out.potential.gradient = {-1.0 / A - 2.0 / B, -1.0 / A - 1.0 / B};
    out.potential.hessian(0, 0) = 1.0 / A2 + 4.0 / B2;
    out.potential.hessian(0, 1) = out.potential.hessian(1, 0) = 1.0 / A2 + 2.0 / B2;
    out.potential.hessian(1, 1) = 1.0 / A2 + 1.0 / B2;

    out.metric.labels = {"lambda1", "lambda12"};
    out.metric.g = out.potential.hessian;

    // (1 - alpha)/2 times the third derivatives of the potential; totally
    // symmetric in the three slots
    const double f = 1.0 - a.value;
    const double g111 = f * (-1.0 / A3 - 8.0 / B3);
    const double g112 = f * (-1.0 / A3 - 4.0 / B3);
    const double g122 = f * (-1.0 / A3 - 2.0 / B3);
    const double g222 = f * (-1.0 / A3 - 1.0 / B3);
    out.lower(0, 0, 0) = g111;
    out.lower(0, 0, 1) = out.lower(0, 1, 0) = out.lower(1, 0, 0) = g112;
    out.lower(0, 1, 1) = out.lower(1, 0, 1) = out.lower(1, 1, 0) = g122;
    out.lower(1, 1, 1) = g222;

    const double am1 = a.value - 1.0;
    out.upper(0, 0, 0) = -am1 / A + 4.0 * am1 / B;
    out.upper(0, 1, 0) = out.upper(1, 0, 0) = am1 * l12 / (A * B);
    out.upper(1, 1, 0) = -am1 * l1 / (A * B);
    out.upper(0, 0, 1) = -2.0 * am1 * l12 / (A * B);
    out.upper(0, 1, 1) = out.upper(1, 0, 1) = 2.0 * am1 * l1 / (A * B);
    out.upper(1, 1, 1) = 2.0 * am1 / A - am1 / B;

    out.dual_coords = out.potential.gradient;
    out.dual_potential = -2.0 - std::log(2.0) + std::log(B) + std::log(A);
    return out;
}

}  // namespace freundgeo
