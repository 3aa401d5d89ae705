#pragma once

#include <cmath>
#include <stdexcept>

#include "freundgeo/linalg.hpp"
#include "freundgeo/params.hpp"

// The bivariate mixture exponential density and its closed-form statistics.
// The density is defined piecewise on the two wedges x < y and y <= x; the
// log-density is affine in (x, y) on each wedge, which the score helpers
// below exploit.

namespace freundgeo {

enum class Wedge { lower_x = 0, lower_y = 1 };  // lower_x: x < y; lower_y: y <= x

inline Wedge wedge_of(double x, double y) {
    return x < y ? Wedge::lower_x : Wedge::lower_y;
}

inline void check_nonneg(double x, double y) {
    if (x < 0.0 || y < 0.0 || !std::isfinite(x) || !std::isfinite(y)) {
        throw std::domain_error("joint density: support is the nonnegative quadrant");
    }
}

inline double log_joint_density(const FreundParams& p, double x, double y) {
    check_nonneg(x, y);
    const double s = p.rate_sum();
    if (wedge_of(x, y) == Wedge::lower_x) {
        return std::log(p.alpha1) + std::log(p.beta2) - p.beta2 * y - (s - p.beta2) * x;
    }
    return std::log(p.alpha2) + std::log(p.beta1) - p.beta1 * x - (s - p.beta1) * y;
}

inline double joint_density(const FreundParams& p, double x, double y) {
    validate(p);
    return std::exp(log_joint_density(p, x, y));
}

/// Gradient of log f in (alpha1, beta1, alpha2, beta2); affine in (x, y).
inline Vec<4> score(const FreundParams& p, double x, double y) {
    if (wedge_of(x, y) == Wedge::lower_x) {
        return {1.0 / p.alpha1 - x, 0.0, -x, 1.0 / p.beta2 - y + x};
    }
    return {-y, 1.0 / p.beta1 - x + y, 1.0 / p.alpha2 - y, 0.0};
}

/// Second parameter derivatives of log f; constant on each wedge.
inline SquareMatrix<4> log_density_hessian(const FreundParams& p, Wedge w) {
    SquareMatrix<4> h;
    if (w == Wedge::lower_x) {
        h(0, 0) = -1.0 / (p.alpha1 * p.alpha1);
        h(3, 3) = -1.0 / (p.beta2 * p.beta2);
    } else {
        h(1, 1) = -1.0 / (p.beta1 * p.beta1);
        h(2, 2) = -1.0 / (p.alpha2 * p.alpha2);
    }
    return h;
}

// ---- marginals ----------------------------------------------------------
//
// Generic case (rate_sum != beta): a two-term exponential mixture. At
// rate_sum == beta both terms blow up individually; the limit is
// (alpha_own + alpha_other * s * t) e^{-s t}, reached continuously, so the
// degenerate band dispatches there.

namespace detail {

inline double marginal_mix(double a_other, double a_own, double beta, double s, double t) {
    const double d = s - beta;
    return (a_other / d) * beta * std::exp(-beta * t) +
           ((a_own - beta) / d) * s * std::exp(-s * t);
}

inline double marginal_limit(double a_own, double a_other, double s, double t) {
    return (a_own + a_other * s * t) * std::exp(-s * t);
}

inline double marginal_mix_cdf(double a_other, double a_own, double beta, double s, double t) {
    const double d = s - beta;
    return (a_other / d) * (1.0 - std::exp(-beta * t)) +
           ((a_own - beta) / d) * (1.0 - std::exp(-s * t));
}

inline double marginal_limit_cdf(double a_other, double s, double t) {
    return 1.0 - std::exp(-s * t) - a_other * t * std::exp(-s * t);
}

}  // namespace detail

inline double marginal_x(const FreundParams& p, double x) {
    validate(p);
    if (x < 0.0) throw std::domain_error("marginal_x: negative argument");
    const double s = p.rate_sum();
    if (!p.marginal_x_defined()) return detail::marginal_limit(p.alpha1, p.alpha2, s, x);
    return detail::marginal_mix(p.alpha2, p.alpha1, p.beta1, s, x);
}

inline double marginal_y(const FreundParams& p, double y) {
    validate(p);
    if (y < 0.0) throw std::domain_error("marginal_y: negative argument");
    const double s = p.rate_sum();
    if (!p.marginal_y_defined()) return detail::marginal_limit(p.alpha2, p.alpha1, s, y);
    return detail::marginal_mix(p.alpha1, p.alpha2, p.beta2, s, y);
}

inline double marginal_cdf_x(const FreundParams& p, double x) {
    validate(p);
    if (x < 0.0) return 0.0;
    const double s = p.rate_sum();
    if (!p.marginal_x_defined()) return detail::marginal_limit_cdf(p.alpha2, s, x);
    return detail::marginal_mix_cdf(p.alpha2, p.alpha1, p.beta1, s, x);
}

inline double marginal_cdf_y(const FreundParams& p, double y) {
    validate(p);
    if (y < 0.0) return 0.0;
    const double s = p.rate_sum();
    if (!p.marginal_y_defined()) return detail::marginal_limit_cdf(p.alpha1, s, y);
    return detail::marginal_mix_cdf(p.alpha1, p.alpha2, p.beta2, s, y);
}

// ---- moments -------------------------------------------------------------

inline double mean_x(const FreundParams& p) {
    validate(p);
    return (p.alpha2 + p.beta1) / (p.beta1 * p.rate_sum());
}

inline double mean_y(const FreundParams& p) {
    validate(p);
    return (p.alpha1 + p.beta2) / (p.beta2 * p.rate_sum());
}

inline double var_x(const FreundParams& p) {
    validate(p);
    const double s = p.rate_sum();
    return (2 * p.alpha1 * p.alpha2 + p.alpha2 * p.alpha2 + p.beta1 * p.beta1) /
           (p.beta1 * p.beta1 * s * s);
}

inline double var_y(const FreundParams& p) {
    validate(p);
    const double s = p.rate_sum();
    return (2 * p.alpha1 * p.alpha2 + p.alpha1 * p.alpha1 + p.beta2 * p.beta2) /
           (p.beta2 * p.beta2 * s * s);
}

inline double covariance(const FreundParams& p) {
    validate(p);
    const double s = p.rate_sum();
    return (p.beta1 * p.beta2 - p.alpha1 * p.alpha2) / (p.beta1 * p.beta2 * s * s);
}

/// Always in (-1/3, 1); tends to 1 as both switched rates grow and to -1/3
/// as they vanish with alpha1 == alpha2.
inline double correlation(const FreundParams& p) {
    validate(p);
    const double n = p.beta1 * p.beta2 - p.alpha1 * p.alpha2;
    const double u = p.alpha2 * p.alpha2 + 2 * p.alpha1 * p.alpha2 + p.beta1 * p.beta1;
    const double v = p.alpha1 * p.alpha1 + 2 * p.alpha1 * p.alpha2 + p.beta2 * p.beta2;
    return n / (std::sqrt(u) * std::sqrt(v));
}

}  // namespace freundgeo
