#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "freundgeo/distribution.hpp"
#include "freundgeo/params.hpp"

// Deterministic quadrature over the two density wedges.
//
// Default scheme: map each wedge to the unit triangle through u = e^{-x},
// v = e^{-y}, open the triangle with the Duffy substitution, and apply a
// tensor-product Gauss-Legendre rule. The wedge carries an algebraic factor
// u^{rate-1} at the origin, so each axis is additionally mapped through
// u = w^k with k ~ 5/rate: the monomial becomes w^{5-ish} and the rule
// converges at full speed again. Exponents are accumulated in log space
// because the raw factors overflow long before their product does.
//
// Integrands are array-valued so one node sweep can serve a whole tensor.

namespace freundgeo {

struct quadrature_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct QuadratureConfig {
    enum class Transform { exp_substitution, direct_truncation };
    int nodes_per_axis = 64;
    double truncation_quantile = 1.0 - 1e-12;
    Transform transform = Transform::exp_substitution;
};

inline void validate(const QuadratureConfig& q) {
    if (q.nodes_per_axis < 16)
        throw std::domain_error("QuadratureConfig: nodes_per_axis must be >= 16");
    if (!(q.truncation_quantile > 0.0 && q.truncation_quantile < 1.0) ||
        1.0 - q.truncation_quantile > 1e-10)
        throw std::domain_error("QuadratureConfig: truncation_quantile must sit in [1-1e-10, 1)");
}

namespace quad {

struct Rule {
    std::vector<double> nodes;  // on (0, 1)
    std::vector<double> weights;
};

/// Gauss-Legendre rule on [0, 1] by Newton iteration on P_n.
inline Rule gauss_legendre(int n) {
    Rule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.nodes[i] = 0.5 * (1.0 - x);
        r.nodes[n - 1 - i] = 0.5 * (1.0 + x);
        r.weights[i] = 0.5 * w;
        r.weights[n - 1 - i] = 0.5 * w;
    }
    return r;
}

inline int power_exponent(double rate) {
    if (!(rate > 0.0)) throw std::domain_error("quadrature: nonpositive decay rate");
    const double k = std::ceil(5.0 / rate);
    return k < 1.0 ? 1 : (k > 64.0 ? 64 : static_cast<int>(k));
}

/// Integral over {0 < inner < outer < 1} of g * exp(log_dens), componentwise
/// for array-valued g. log_dens(outer, inner) carries every positive factor;
/// outer_rate / inner_rate are the algebraic orders of the singularities at
/// outer -> 0 and inner/outer -> 0.
template <int K, class LogDens, class GFun>
std::array<double, K> duffy_triangle(LogDens&& log_dens, GFun&& g, double outer_rate,
                                     double inner_rate, int n) {
    const Rule rule = gauss_legendre(n);
    const int k1 = power_exponent(outer_rate);
    const int k2 = power_exponent(inner_rate);
    std::array<double, K> acc{};
    for (int i = 0; i < n; ++i) {
        const double lw = std::log(rule.nodes[i]);
        const double outer = std::exp(k1 * lw);
        for (int j = 0; j < n; ++j) {
            const double ls = std::log(rule.nodes[j]);
            const double inner = outer * std::exp(k2 * ls);
            // log_dens plus the Duffy jacobian (log outer = k1 lw) plus both
            // power-map jacobians, folded analytically
            const double e = log_dens(outer, inner) + k1 * lw + (k1 - 1) * lw + (k2 - 1) * ls;
            if (!std::isfinite(e)) continue;  // underflowed tail
            const double base = std::exp(e) * rule.weights[i] * rule.weights[j] * k1 * k2;
            if (base == 0.0) continue;
            const std::array<double, K> vals = g(outer, inner);
            for (int c = 0; c < K; ++c) acc[c] += base * vals[c];
        }
    }
    return acc;
}

}  // namespace quad

/// Componentwise integral of g(x, y) * f(x, y) over the full quadrant, one
/// wedge at a time (the density is not smooth across x == y).
template <int K, class GFun>
std::array<double, K> integrate_joint_multi(const FreundParams& p, GFun&& g,
                                            const QuadratureConfig& cfg) {
    validate(p);
    validate(cfg);
    const double s = p.rate_sum();
    const int n = cfg.nodes_per_axis;
    std::array<double, K> total{};

    if (cfg.transform == QuadratureConfig::Transform::exp_substitution) {
        // wedge x < y: outer = e^{-x}, inner = e^{-y}; the 1/(uv) from dx dy
        // joins log f in the exponent
        const auto w1 = quad::duffy_triangle<K>(
            [&](double u, double v) {
                return log_joint_density(p, -std::log(u), -std::log(v)) - std::log(u) -
                       std::log(v);
            },
            [&](double u, double v) { return g(-std::log(u), -std::log(v)); }, s, p.beta2, n);
        // wedge y <= x: outer = e^{-y}, inner = e^{-x}
        const auto w2 = quad::duffy_triangle<K>(
            [&](double ey, double ex) {
                return log_joint_density(p, -std::log(ex), -std::log(ey)) - std::log(ex) -
                       std::log(ey);
            },
            [&](double ey, double ex) { return g(-std::log(ex), -std::log(ey)); }, s, p.beta1,
            n);
        for (int c = 0; c < K; ++c) total[c] = w1[c] + w2[c];
        return total;
    }

    // direct truncation: wedge coordinates (anchor, gap) with unit jacobian,
    // each axis cut at its exponential quantile
    const double tail = -std::log1p(-cfg.truncation_quantile);  // -log(1 - q)
    const quad::Rule rule = quad::gauss_legendre(n);
    auto box = [&](double ta, double tg, auto&& point, std::array<double, K>& acc) {
        for (int i = 0; i < n; ++i) {
            const double a = ta * rule.nodes[i];
            for (int j = 0; j < n; ++j) {
                const double gp = tg * rule.nodes[j];
                const auto [x, y] = point(a, gp);
                const double base = rule.weights[i] * rule.weights[j] * ta * tg *
                                    std::exp(log_joint_density(p, x, y));
                const std::array<double, K> vals = g(x, y);
                for (int c = 0; c < K; ++c) acc[c] += base * vals[c];
            }
        }
    };
    box(tail / s, tail / p.beta2, [](double a, double gp) { return std::pair{a, a + gp}; },
        total);
    box(tail / s, tail / p.beta1, [](double a, double gp) { return std::pair{a + gp, a}; },
        total);
    return total;
}

template <class GFun>
double integrate_joint(const FreundParams& p, GFun&& g, const QuadratureConfig& cfg) {
    return integrate_joint_multi<1>(
        p, [&](double x, double y) { return std::array<double, 1>{g(x, y)}; }, cfg)[0];
}

struct QuadratureValue {
    double value{};
    double err_estimate{};  // |half-resolution - full| as an absolute bound
};

inline int half_nodes(int n) { return n >= 32 ? n / 2 : 16; }

template <class GFun>
QuadratureValue integrate_joint_with_error(const FreundParams& p, GFun&& g,
                                           const QuadratureConfig& cfg) {
    QuadratureConfig half = cfg;
    half.nodes_per_axis = half_nodes(cfg.nodes_per_axis);
    const double coarse = integrate_joint(p, g, half);
    const double fine = integrate_joint(p, g, cfg);
    return {fine, std::fabs(fine - coarse)};
}

}  // namespace freundgeo
