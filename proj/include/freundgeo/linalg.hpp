#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace freundgeo {

template <int N>
using Vec = std::array<double, N>;

/// Dense row-major NxN matrix, value semantics. Sized for the 2..4
/// dimensional tensors of this library; not a general linear algebra type.
template <int N>
struct SquareMatrix {
    std::array<double, static_cast<std::size_t>(N) * N> a{};

    double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * N + j]; }
    double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * N + j]; }

    static SquareMatrix identity() {
        SquareMatrix m;
        for (int i = 0; i < N; ++i) m(i, i) = 1.0;
        return m;
    }

    SquareMatrix operator*(const SquareMatrix& rhs) const {
        SquareMatrix out;
        for (int i = 0; i < N; ++i)
            for (int k = 0; k < N; ++k) {
                const double v = (*this)(i, k);
                for (int j = 0; j < N; ++j) out(i, j) += v * rhs(k, j);
            }
        return out;
    }

    Vec<N> operator*(const Vec<N>& v) const {
        Vec<N> out{};
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) out[i] += (*this)(i, j) * v[j];
        return out;
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : a) m = std::fmax(m, std::fabs(v));
        return m;
    }
};

template <int N>
inline double dot(const Vec<N>& a, const Vec<N>& b) {
    double s = 0.0;
    for (int i = 0; i < N; ++i) s += a[i] * b[i];
    return s;
}

template <int N>
inline double norm(const Vec<N>& a) {
    return std::sqrt(dot<N>(a, a));
}

/// Gauss-Jordan inverse with partial pivoting. Throws on (numerically)
/// singular input; fine at these sizes.
template <int N>
SquareMatrix<N> inverse(SquareMatrix<N> m) {
    SquareMatrix<N> inv = SquareMatrix<N>::identity();
    for (int col = 0; col < N; ++col) {
        int piv = col;
        for (int r = col + 1; r < N; ++r)
            if (std::fabs(m(r, col)) > std::fabs(m(piv, col))) piv = r;
        if (m(piv, col) == 0.0) throw std::domain_error("inverse: singular matrix");
        if (piv != col)
            for (int j = 0; j < N; ++j) {
                std::swap(m(piv, j), m(col, j));
                std::swap(inv(piv, j), inv(col, j));
            }
        const double d = m(col, col);
        for (int j = 0; j < N; ++j) {
            m(col, j) /= d;
            inv(col, j) /= d;
        }
        for (int r = 0; r < N; ++r) {
            if (r == col) continue;
            const double f = m(r, col);
            if (f == 0.0) continue;
            for (int j = 0; j < N; ++j) {
                m(r, j) -= f * m(col, j);
                inv(r, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

template <int N>
struct EigenSystem {
    Vec<N> values{};            // ascending
    SquareMatrix<N> vectors{};  // column k pairs with values[k]
};

/// Cyclic Jacobi eigensolver for symmetric matrices. Quadratic convergence;
/// a handful of sweeps reaches machine precision at N <= 4.
///
/// Ordering contract: eigenvalues ascending; exact ties broken by
/// lexicographic comparison of eigenvector components after normalizing the
/// first component of magnitude > 1e-12 to be positive.
template <int N>
EigenSystem<N> eigen_symmetric(SquareMatrix<N> m) {
    SquareMatrix<N> v = SquareMatrix<N>::identity();
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < N; ++p)
            for (int q = p + 1; q < N; ++q) off += m(p, q) * m(p, q);
        if (off <= 1e-300) break;
        for (int p = 0; p < N; ++p) {
            for (int q = p + 1; q < N; ++q) {
                if (m(p, q) == 0.0) continue;
                const double theta = (m(q, q) - m(p, p)) / (2.0 * m(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < N; ++k) {
                    const double mkp = m(k, p), mkq = m(k, q);
                    m(k, p) = c * mkp - s * mkq;
                    m(k, q) = s * mkp + c * mkq;
                }
                for (int k = 0; k < N; ++k) {
                    const double mpk = m(p, k), mqk = m(q, k);
                    m(p, k) = c * mpk - s * mqk;
                    m(q, k) = s * mpk + c * mqk;
                }
                for (int k = 0; k < N; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::array<int, N> order{};
    for (int i = 0; i < N; ++i) order[i] = i;
    std::array<Vec<N>, N> cols{};
    for (int k = 0; k < N; ++k) {
        for (int i = 0; i < N; ++i) cols[k][i] = v(i, k);
        for (int i = 0; i < N; ++i) {
            if (std::fabs(cols[k][i]) > 1e-12) {
                if (cols[k][i] < 0.0)
                    for (int j = 0; j < N; ++j) cols[k][j] = -cols[k][j];
                break;
            }
        }
    }
    auto less = [&](int x, int y) {
        if (m(x, x) != m(y, y)) return m(x, x) < m(y, y);
        for (int i = 0; i < N; ++i)
            if (cols[x][i] != cols[y][i]) return cols[x][i] < cols[y][i];
        return false;
    };
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j)
            if (less(order[j], order[i])) std::swap(order[i], order[j]);

    EigenSystem<N> out;
    for (int k = 0; k < N; ++k) {
        out.values[k] = m(order[k], order[k]);
        for (int i = 0; i < N; ++i) out.vectors(i, k) = cols[order[k]][i];
    }
    return out;
}

}  // namespace freundgeo
