#pragma once

#include <cmath>

#include "freundgeo/linalg.hpp"
#include "freundgeo/params.hpp"
#include "freundgeo/tensors.hpp"

// Closed-form geometry of the 4-manifold in coordinates
// (x1, x2, x3, x4) = (alpha1, beta1, alpha2, beta2).
//
// Conventions, locked by the regression tests:
//   * curvature assembled as R^l_{ijk} = d_i G^l_{jk} - d_j G^l_{ik}
//       + sum_h (G^h_{jk} G^l_{ih} - G^h_{ik} G^l_{jh}),
//     lowered in the last slot, R_{ijkl} = g_{lm} R^m_{ijk};
//   * Ricci contraction R_{jk} = g^{il} R_{ijkl};
//   * sectional curvature of the (lambda, mu) coordinate plane is
//     R_{lm ml} / (g_ll g_mm) for this diagonal metric;
//   * mean curvature in direction lambda averages the three sectional
//     curvatures of the planes containing it.

namespace freundgeo {

inline MetricTensor<4> fisher_metric(const FreundParams& p) {
    validate(p);
    const double s = p.rate_sum();
    MetricTensor<4> m;
    m.labels = kFreundLabels;
    m.g(0, 0) = 1.0 / (p.alpha1 * p.alpha1 + p.alpha1 * p.alpha2);
    m.g(1, 1) = p.alpha2 / (p.beta1 * p.beta1 * s);
    m.g(2, 2) = 1.0 / (p.alpha2 * p.alpha2 + p.alpha1 * p.alpha2);
    m.g(3, 3) = p.alpha1 / (p.beta2 * p.beta2 * s);
    return m;
}

inline MetricTensor<4> fisher_metric_inverse(const FreundParams& p) {
    validate(p);
    const double s = p.rate_sum();
    MetricTensor<4> m;
    m.labels = kFreundLabels;
    m.g(0, 0) = p.alpha1 * p.alpha1 + p.alpha1 * p.alpha2;
    m.g(1, 1) = p.beta1 * p.beta1 * s / p.alpha2;
    m.g(2, 2) = p.alpha2 * p.alpha2 + p.alpha1 * p.alpha2;
    m.g(3, 3) = p.beta2 * p.beta2 * s / p.alpha1;
    return m;
}

namespace detail {

// Each nonzero component is affine in the connection parameter; keeping the
// (constant, slope) pair explicit makes Gamma(alpha) = c0 + alpha * c1 a
// single fma, so the duality and affinity identities hold to rounding.
struct AffinePair {
    double c0{};
    double c1{};
    double at(double alpha) const { return std::fma(alpha, c1, c0); }
};

template <int N>
struct AffineChristoffel {
    ChristoffelLower<N> lower0{}, lower1{};
    ChristoffelUpper<N> upper0{}, upper1{};

    void set_lower(int i, int j, int k, AffinePair v) {
        lower0(i, j, k) = lower0(j, i, k) = v.c0;
        lower1(i, j, k) = lower1(j, i, k) = v.c1;
    }
    void set_upper(int i, int j, int k, AffinePair v) {
        upper0(i, j, k) = upper0(j, i, k) = v.c0;
        upper1(i, j, k) = upper1(j, i, k) = v.c1;
    }
    ChristoffelLower<N> lower_at(double alpha) const {
        ChristoffelLower<N> out;
        for (std::size_t t = 0; t < out.a.size(); ++t)
            out.a[t] = std::fma(alpha, lower1.a[t], lower0.a[t]);
        return out;
    }
    ChristoffelUpper<N> upper_at(double alpha) const {
        ChristoffelUpper<N> out;
        for (std::size_t t = 0; t < out.a.size(); ++t)
            out.a[t] = std::fma(alpha, upper1.a[t], upper0.a[t]);
        return out;
    }
};

// The sixteen nonzero lower families (i <= j) and their mixed counterparts.
// The list is closed under the relabeling (1,2,3,4) -> (3,4,1,2) that swaps
// the two lifetimes, and satisfies Gamma_{ij,k} = g_kk Gamma^k_{ij}.
inline AffineChristoffel<4> freund_christoffel(const FreundParams& p) {
    const double a1 = p.alpha1, b1 = p.beta1, a2 = p.alpha2, b2 = p.beta2;
    const double s = a1 + a2;
    const double s2 = s * s;
    AffineChristoffel<4> c;

    // lower: split every component into (alpha^0, alpha^1) parts
    c.set_lower(0, 0, 0, {(-2 * a1 - a2) / (2 * a1 * a1 * s2), (2 * a1 - a2) / (2 * a1 * a1 * s2)});
    c.set_lower(0, 0, 2, {1 / (2 * a1 * s2), 1 / (2 * a1 * s2)});
    c.set_lower(0, 1, 1, {-a2 / (2 * b1 * b1 * s2), a2 / (2 * b1 * b1 * s2)});
    c.set_lower(0, 2, 0, {-1 / (2 * a1 * s2), 1 / (2 * a1 * s2)});
    c.set_lower(0, 2, 2, {-1 / (2 * a2 * s2), 1 / (2 * a2 * s2)});
    c.set_lower(0, 3, 3, {a2 / (2 * b2 * b2 * s2), -a2 / (2 * b2 * b2 * s2)});
    c.set_lower(1, 1, 0, {a2 / (2 * b1 * b1 * s2), a2 / (2 * b1 * b1 * s2)});
    c.set_lower(1, 1, 1, {-a2 / (b1 * b1 * b1 * s), a2 / (b1 * b1 * b1 * s)});
    c.set_lower(1, 1, 2, {-a1 / (2 * b1 * b1 * s2), -a1 / (2 * b1 * b1 * s2)});
    c.set_lower(1, 2, 1, {a1 / (2 * b1 * b1 * s2), -a1 / (2 * b1 * b1 * s2)});
    c.set_lower(2, 2, 0, {1 / (2 * a2 * s2), 1 / (2 * a2 * s2)});
    c.set_lower(2, 2, 2, {(-a1 - 2 * a2) / (2 * a2 * a2 * s2), (2 * a2 - a1) / (2 * a2 * a2 * s2)});
    c.set_lower(2, 3, 3, {-a1 / (2 * b2 * b2 * s2), a1 / (2 * b2 * b2 * s2)});
    c.set_lower(3, 3, 0, {-a2 / (2 * b2 * b2 * s2), -a2 / (2 * b2 * b2 * s2)});
    c.set_lower(3, 3, 2, {a1 / (2 * b2 * b2 * s2), a1 / (2 * b2 * b2 * s2)});
    c.set_lower(3, 3, 3, {-a1 / (b2 * b2 * b2 * s), a1 / (b2 * b2 * b2 * s)});

    c.set_upper(0, 0, 0, {(-2 * a1 - a2) / (2 * a1 * s), (2 * a1 - a2) / (2 * a1 * s)});
    c.set_upper(0, 0, 2, {a2 / (2 * a1 * s), a2 / (2 * a1 * s)});
    c.set_upper(0, 1, 1, {-1 / (2 * s), 1 / (2 * s)});
    c.set_upper(0, 2, 0, {-1 / (2 * s), 1 / (2 * s)});
    c.set_upper(0, 2, 2, {-1 / (2 * s), 1 / (2 * s)});
    c.set_upper(0, 3, 3, {a2 / (2 * a1 * s), -a2 / (2 * a1 * s)});
    c.set_upper(1, 1, 0, {a1 * a2 / (2 * b1 * b1 * s), a1 * a2 / (2 * b1 * b1 * s)});
    c.set_upper(1, 1, 1, {-1 / b1, 1 / b1});
    c.set_upper(1, 1, 2, {-a1 * a2 / (2 * b1 * b1 * s), -a1 * a2 / (2 * b1 * b1 * s)});
    c.set_upper(1, 2, 1, {a1 / (2 * a2 * s), -a1 / (2 * a2 * s)});
    c.set_upper(2, 2, 0, {a1 / (2 * a2 * s), a1 / (2 * a2 * s)});
    c.set_upper(2, 2, 2, {(-a1 - 2 * a2) / (2 * a2 * s), (2 * a2 - a1) / (2 * a2 * s)});
    c.set_upper(2, 3, 3, {-1 / (2 * s), 1 / (2 * s)});
    c.set_upper(3, 3, 0, {-a1 * a2 / (2 * b2 * b2 * s), -a1 * a2 / (2 * b2 * b2 * s)});
    c.set_upper(3, 3, 2, {a1 * a2 / (2 * b2 * b2 * s), a1 * a2 / (2 * b2 * b2 * s)});
    c.set_upper(3, 3, 3, {-1 / b2, 1 / b2});
    return c;
}

}  // namespace detail

inline ChristoffelLower<4> christoffel_lower(const FreundParams& p, const AlphaIndex& a) {
    validate(p);
    validate(a);
    return detail::freund_christoffel(p).lower_at(a.value);
}

inline ChristoffelUpper<4> christoffel_upper(const FreundParams& p, const AlphaIndex& a) {
    validate(p);
    validate(a);
    return detail::freund_christoffel(p).upper_at(a.value);
}

/// Seven canonical nonzero components, completed by the index symmetries.
/// Every one carries the factor (alpha^2 - 1): both extreme connections are
/// flat.
inline CurvatureTensor<4> curvature_tensor(const FreundParams& p, const AlphaIndex& a) {
    validate(p);
    validate(a);
    const double a1 = p.alpha1, b1 = p.beta1, a2 = p.alpha2, b2 = p.beta2;
    const double s = a1 + a2;
    const double s3 = s * s * s;
    const double q = (a.value * a.value - 1.0) / 4.0;
    CurvatureTensor<4> r;
    r.set_canonical(0, 1, 0, 1, q * a2 * a2 / (a1 * s3 * b1 * b1));
    r.set_canonical(0, 1, 1, 2, q * a2 / (s3 * b1 * b1));
    r.set_canonical(0, 3, 0, 3, q * a2 / (s3 * b2 * b2));
    r.set_canonical(0, 3, 2, 3, -q * a1 / (s3 * b2 * b2));
    r.set_canonical(1, 2, 1, 2, q * a1 / (s3 * b1 * b1));
    r.set_canonical(1, 3, 1, 3, q * a1 * a2 / (s * s * b1 * b1 * b2 * b2));
    r.set_canonical(2, 3, 2, 3, q * a1 * a1 / (a2 * s3 * b2 * b2));
    return r;
}

/// R_{jk} = g^{il} R_{ijkl} for a diagonal inverse metric.
inline SquareMatrix<4> ricci_from_curvature(const CurvatureTensor<4>& r,
                                            const MetricTensor<4>& ginv) {
    SquareMatrix<4> ric;
    for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) {
            double v = 0.0;
            for (int i = 0; i < 4; ++i)
                for (int l = 0; l < 4; ++l) v += ginv.g(i, l) * r(i, j, k, l);
            ric(j, k) = v;
        }
    return ric;
}

inline double scalar_from_ricci(const SquareMatrix<4>& ric, const MetricTensor<4>& ginv) {
    double v = 0.0;
    for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) v += ginv.g(j, k) * ric(j, k);
    return v;
}

inline RicciTensor ricci_tensor(const FreundParams& p, const AlphaIndex& a) {
    validate(p);
    validate(a);
    const double a1 = p.alpha1, b1 = p.beta1, a2 = p.alpha2, b2 = p.beta2;
    const double s = a1 + a2;
    const double q = a.value * a.value - 1.0;
    RicciTensor out;
    out.ric(0, 0) = -q * a2 / (2 * a1 * s * s);
    out.ric(0, 2) = out.ric(2, 0) = q / (2 * s * s);
    out.ric(1, 1) = -q * a2 / (2 * s * b1 * b1);
    out.ric(2, 2) = -q * a1 / (2 * a2 * s * s);
    out.ric(3, 3) = -q * a1 / (2 * s * b2 * b2);
    const auto es = eigen_symmetric<4>(out.ric);
    out.eigenvalues = es.values;
    out.eigenvectors = es.vectors;
    return out;
}

/// Constant over the manifold: -3 (alpha^2 - 1) / 2.
inline double scalar_curvature(const FreundParams& p, const AlphaIndex& a) {
    validate(p);
    validate(a);
    return -1.5 * (a.value * a.value - 1.0);
}

inline SectionalCurvatures sectional_curvatures(const FreundParams& p, const AlphaIndex& a) {
    const auto r = curvature_tensor(p, a);
    const auto g = fisher_metric(p);
    SectionalCurvatures out;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            const double v = r(i, j, j, i) / (g.g(i, i) * g.g(j, j));
            out.rho(i, j) = out.rho(j, i) = v;
        }
    return out;
}

inline MeanCurvatures mean_curvatures(const FreundParams& p, const AlphaIndex& a) {
    const auto sec = sectional_curvatures(p, a);
    MeanCurvatures out;
    for (int i = 0; i < 4; ++i) {
        double t = 0.0;
        for (int j = 0; j < 4; ++j)
            if (j != i) t += sec(i, j);
        out.rho[i] = t / 3.0;
    }
    return out;
}

}  // namespace freundgeo
