#pragma once

#include <array>
#include <cstddef>
#include <string_view>

#include "freundgeo/linalg.hpp"

namespace freundgeo {

/// Riemannian metric in a named coordinate chart.
template <int N>
struct MetricTensor {
    SquareMatrix<N> g{};
    std::array<std::string_view, N> labels{};
};

inline constexpr std::array<std::string_view, 4> kFreundLabels = {"alpha1", "beta1",
                                                                  "alpha2", "beta2"};

/// All-lower connection coefficients Gamma_{ij,k}; symmetric in (i, j).
template <int N>
struct ChristoffelLower {
    std::array<double, static_cast<std::size_t>(N) * N * N> a{};
    double& operator()(int i, int j, int k) {
        return a[(static_cast<std::size_t>(i) * N + j) * N + k];
    }
    double operator()(int i, int j, int k) const {
        return a[(static_cast<std::size_t>(i) * N + j) * N + k];
    }
    double max_abs() const {
        double m = 0.0;
        for (double v : a) m = std::fmax(m, std::fabs(v));
        return m;
    }
};

/// Mixed coefficients; (i, j, k) reads Gamma^k_{ij}, symmetric in (i, j).
template <int N>
struct ChristoffelUpper {
    std::array<double, static_cast<std::size_t>(N) * N * N> a{};
    double& operator()(int i, int j, int k) {
        return a[(static_cast<std::size_t>(i) * N + j) * N + k];
    }
    double operator()(int i, int j, int k) const {
        return a[(static_cast<std::size_t>(i) * N + j) * N + k];
    }
    double max_abs() const {
        double m = 0.0;
        for (double v : a) m = std::fmax(m, std::fabs(v));
        return m;
    }
};

/// All-lower curvature R_{ijkl} = <R(d_i, d_j) d_k, d_l>.
template <int N>
struct CurvatureTensor {
    std::array<double, static_cast<std::size_t>(N) * N * N * N> a{};
    double& operator()(int i, int j, int k, int l) {
        return a[((static_cast<std::size_t>(i) * N + j) * N + k) * N + l];
    }
    double operator()(int i, int j, int k, int l) const {
        return a[((static_cast<std::size_t>(i) * N + j) * N + k) * N + l];
    }
    double max_abs() const {
        double m = 0.0;
        for (double v : a) m = std::fmax(m, std::fabs(v));
        return m;
    }

    // Writes one canonical component together with the seven images under
    // the pair antisymmetries and the pair exchange.
    void set_canonical(int i, int j, int k, int l, double v) {
        (*this)(i, j, k, l) = v;
        (*this)(j, i, k, l) = -v;
        (*this)(i, j, l, k) = -v;
        (*this)(j, i, l, k) = v;
        (*this)(k, l, i, j) = v;
        (*this)(l, k, i, j) = -v;
        (*this)(k, l, j, i) = -v;
        (*this)(l, k, j, i) = v;
    }
};

/// Ricci matrix with its (plain, matrix-problem) eigendecomposition.
struct RicciTensor {
    SquareMatrix<4> ric{};
    Vec<4> eigenvalues{};          // ascending, ties lexicographic
    SquareMatrix<4> eigenvectors{};  // columns
};

/// Coordinate-plane sectional curvatures, stored for 0 <= i < j < 4.
struct SectionalCurvatures {
    SquareMatrix<4> rho{};  // symmetric, zero diagonal
    double operator()(int i, int j) const { return rho(i, j); }
};

struct MeanCurvatures {
    Vec<4> rho{};
    double operator()(int i) const { return rho[i]; }
};

}  // namespace freundgeo
