#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "freundgeo/distribution.hpp"
#include "freundgeo/io.hpp"
#include "freundgeo/params.hpp"
#include "freundgeo/quadrature.hpp"
#include "freundgeo/tensors.hpp"

// Sampling and the transformed family on the unit square.
//
// RNG stream contract: draw k of a batch with seed s is a pure function of
// (s, k) - three splitmix64 evaluations at counters 3k, 3k+1, 3k+2 - so a
// batch is identical however it is chunked across threads or runs.

namespace freundgeo {

namespace rng {

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Uniform on (0, 1]; counter-indexed, stateless.
inline double uniform(std::uint64_t seed, std::uint64_t counter) {
    const std::uint64_t z = splitmix64(seed + counter * 0x9E3779B97F4A7C15ull);
    return (static_cast<double>(z >> 11) + 1.0) * 0x1p-53;
}

inline double exponential(std::uint64_t seed, std::uint64_t counter, double rate) {
    return -std::log(uniform(seed, counter)) / rate;
}

}  // namespace rng

struct SampleBatch {
    std::vector<std::array<double, 2>> pairs;
    std::uint64_t seed{};

    std::size_t n() const { return pairs.size(); }
};

/// Competing-risks construction: the first failure happens at an
/// Exponential(alpha1 + alpha2) time and belongs to X with probability
/// alpha1 / (alpha1 + alpha2); the survivor then runs at its switched rate.
inline SampleBatch sample(const FreundParams& p, std::size_t n, std::uint64_t seed) {
    validate(p);
    if (n < 1) throw std::domain_error("sample: need n >= 1");
    const double s = p.rate_sum();
    SampleBatch out;
    out.seed = seed;
    out.pairs.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = rng::exponential(seed, 3 * k, s);
        const bool x_first = rng::uniform(seed, 3 * k + 1) * s < p.alpha1;
        if (x_first) {
            out.pairs[k] = {t, t + rng::exponential(seed, 3 * k + 2, p.beta2)};
        } else {
            out.pairs[k] = {t + rng::exponential(seed, 3 * k + 2, p.beta1), t};
        }
    }
    return out;
}

struct EmpiricalMoments {
    double mean_x{}, mean_y{};
    double cov{}, corr{};
    double se_mean_x{}, se_mean_y{};
    double se_cov{}, se_corr{};
    std::size_t n{};
};

/// Unbiased first and second moments with standard errors. The covariance
/// standard error is the delta-method asymptotic sqrt((m22 - cov^2)/n).
inline EmpiricalMoments empirical_moments(const SampleBatch& b) {
    const std::size_t n = b.n();
    if (n < 2) throw std::domain_error("empirical_moments: need n >= 2");
    EmpiricalMoments m;
    m.n = n;
    double sx = 0.0, sy = 0.0;
    for (const auto& xy : b.pairs) {
        sx += xy[0];
        sy += xy[1];
    }
    m.mean_x = sx / n;
    m.mean_y = sy / n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0, m22 = 0.0;
    for (const auto& xy : b.pairs) {
        const double dx = xy[0] - m.mean_x, dy = xy[1] - m.mean_y;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
        m22 += dx * dx * dy * dy;
    }
    const double vx = sxx / (n - 1), vy = syy / (n - 1);
    m.cov = sxy / (n - 1);
    m.corr = (vx > 0.0 && vy > 0.0) ? m.cov / std::sqrt(vx * vy) : 0.0;
    m.se_mean_x = std::sqrt(vx / n);
    m.se_mean_y = std::sqrt(vy / n);
    m.se_cov = std::sqrt(std::fmax(m22 / n - m.cov * m.cov, 0.0) / n);
    m.se_corr = (1.0 - m.corr * m.corr) / std::sqrt(static_cast<double>(n > 3 ? n - 3 : 1));
    return m;
}

inline void export_csv(const SampleBatch& b, std::ostream& os) {
    os << "x,y\n";
    for (const auto& xy : b.pairs) os << fmt17(xy[0]) << "," << fmt17(xy[1]) << "\n";
}

inline SampleBatch import_csv(std::istream& is) {
    SampleBatch b;
    std::string line;
    if (!std::getline(is, line) || line != "x,y")
        throw std::runtime_error("sample csv: missing x,y header");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw std::runtime_error("sample csv: malformed row");
        const double x = std::stod(line.substr(0, comma));
        const double y = std::stod(line.substr(comma + 1));
        if (!(x >= 0.0) || !(y >= 0.0) || !std::isfinite(x) || !std::isfinite(y))
            throw std::runtime_error("sample csv: coordinates must be nonnegative and finite");
        b.pairs.push_back({x, y});
    }
    return b;
}

// ---- goodness of fit -------------------------------------------------------

/// One-sample Kolmogorov-Smirnov statistic against a continuous CDF.
template <class Cdf>
double ks_statistic(std::vector<double> xs, Cdf&& cdf) {
    if (xs.empty()) throw std::domain_error("ks_statistic: empty sample");
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(xs[i]);
        d = std::fmax(d, std::fmax((i + 1) / n - f, f - i / n));
    }
    return d;
}

/// Asymptotic Kolmogorov tail Q(t) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 t^2).
inline double kolmogorov_tail(double t) {
    if (t <= 0.0) return 1.0;
    double q = 0.0;
    for (int k = 1; k <= 128; ++k) {
        const double term = 2.0 * std::exp(-2.0 * k * k * t * t);
        q += (k % 2 == 1) ? term : -term;
        if (term < 1e-16) break;
    }
    return std::clamp(q, 0.0, 1.0);
}

struct KsResult {
    double statistic{};
    double p_value{};
};

/// KS test of the X marginal of a batch against the closed-form CDF.
inline KsResult ks_test_marginal_x(const SampleBatch& b, const FreundParams& p) {
    std::vector<double> xs;
    xs.reserve(b.n());
    for (const auto& xy : b.pairs) xs.push_back(xy[0]);
    const double d = ks_statistic(std::move(xs), [&](double x) { return marginal_cdf_x(p, x); });
    const double n = static_cast<double>(b.n());
    return {d, kolmogorov_tail(std::sqrt(n) * d)};
}

// ---- log-exponential transform ---------------------------------------------
//
// Push the pair through (n, m) = (e^{-X}, e^{-Y}): the density lands on the
// open unit square, wedge by wedge, and the parameter geometry is untouched.

struct LogExpParams {
    double alpha1{};
    double beta1{};
    double alpha2{};
    double beta2{};

    FreundParams as_freund() const { return {alpha1, beta1, alpha2, beta2}; }
};

inline void validate(const LogExpParams& q) { validate(q.as_freund()); }

inline double logexp_log_density(const LogExpParams& q, double n, double m) {
    if (!(n > 0.0 && n < 1.0 && m > 0.0 && m < 1.0))
        throw std::domain_error("logexp density: support is the open unit square");
    const double s = q.alpha1 + q.alpha2;
    if (m < n) {
        return std::log(q.alpha1) + std::log(q.beta2) + (q.beta2 - 1.0) * std::log(m) +
               (s - q.beta2 - 1.0) * std::log(n);
    }
    return std::log(q.alpha2) + std::log(q.beta1) + (q.beta1 - 1.0) * std::log(n) +
           (s - q.beta1 - 1.0) * std::log(m);
}

inline double logexp_density(const LogExpParams& q, double n, double m) {
    validate(q);
    return std::exp(logexp_log_density(q, n, m));
}

/// Gradient of the log density in (alpha1, beta1, alpha2, beta2).
inline Vec<4> logexp_score(const LogExpParams& q, double n, double m) {
    const double ln = std::log(n), lm = std::log(m);
    if (m < n) {
        return {1.0 / q.alpha1 + ln, 0.0, ln, 1.0 / q.beta2 + lm - ln};
    }
    return {lm, 1.0 / q.beta1 + ln - lm, 1.0 / q.alpha2 + lm, 0.0};
}

struct LogExpMetric {
    MetricTensor<4> metric{};
    double err_estimate{};
};

/// Componentwise integral of g(n, m) against the transformed density over
/// the open unit square, one wedge at a time.
template <int K, class GFun>
std::array<double, K> logexp_integrate_multi(const LogExpParams& q, GFun&& g, int nodes) {
    const double s = q.alpha1 + q.alpha2;
    // wedge m < n: outer = n, inner = m
    const auto w1 = quad::duffy_triangle<K>(
        [&](double n, double m) { return logexp_log_density(q, n, m); },
        [&](double n, double m) { return g(n, m); }, s, q.beta2, nodes);
    // wedge n < m: outer = m, inner = n
    const auto w2 = quad::duffy_triangle<K>(
        [&](double m, double n) { return logexp_log_density(q, n, m); },
        [&](double m, double n) { return g(n, m); }, s, q.beta1, nodes);
    std::array<double, K> out{};
    for (int c = 0; c < K; ++c) out[c] = w1[c] + w2[c];
    return out;
}

template <class GFun>
QuadratureValue logexp_integrate_with_error(const LogExpParams& q, GFun&& g,
                                            const QuadratureConfig& cfg) {
    validate(q);
    validate(cfg);
    auto wrap = [&](double n, double m) { return std::array<double, 1>{g(n, m)}; };
    const double coarse = logexp_integrate_multi<1>(q, wrap, half_nodes(cfg.nodes_per_axis))[0];
    const double fine = logexp_integrate_multi<1>(q, wrap, cfg.nodes_per_axis)[0];
    return {fine, std::fabs(fine - coarse)};
}

inline LogExpMetric logexp_fisher_metric(const LogExpParams& q, const QuadratureConfig& cfg) {
    validate(q);
    validate(cfg);
    auto outer = [&](double n, double m) {
        const auto sc = logexp_score(q, n, m);
        std::array<double, 10> v{};
        int c = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = i; j < 4; ++j) v[c++] = sc[i] * sc[j];
        return v;
    };
    const auto coarse = logexp_integrate_multi<10>(q, outer, half_nodes(cfg.nodes_per_axis));
    const auto fine = logexp_integrate_multi<10>(q, outer, cfg.nodes_per_axis);

    LogExpMetric out;
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
    if (out.err_estimate > 1e-5 * std::fmax(scale, 1e-300))
        throw quadrature_error("logexp_fisher_metric: error estimate above 1e-5 of scale");
    return out;
}

inline double logexp_covariance(const LogExpParams& q) {
    validate(q);
    const double a1 = q.alpha1, b1 = q.beta1, a2 = q.alpha2, b2 = q.beta2;
    const double s = a1 + a2;
    return (a2 * (-(a1 * (2.0 + s)) + b1) + (a1 + s * b1) * b2) /
           ((1.0 + s) * (1.0 + s) * (2.0 + s) * (1.0 + b1) * (1.0 + b2));
}

}  // namespace freundgeo
