// Sweeps the connection parameter at a fixed point: the scalar curvature
// traces the parabola -3(a^2 - 1)/2 while every sectional curvature
// collapses to zero at a = +/-1.

#include <cstdio>

#include "freundgeo/freundgeo.hpp"

int main() {
    const freundgeo::FreundParams p{1.0, 2.0, 0.5, 1.5};
    std::printf("%8s %12s %12s %12s\n", "alpha", "scalar", "rho(1,2)", "rho(2,4)");
    for (int i = -10; i <= 10; ++i) {
        const freundgeo::AlphaIndex a{i / 10.0};
        const auto sec = freundgeo::sectional_curvatures(p, a);
        std::printf("%8.2f %12.6f %12.6f %12.6f\n", a.value,
                    freundgeo::scalar_curvature(p, a), sec(0, 1), sec(1, 3));
    }
    return 0;
}
