#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace freundgeo {

// Strictly positive means representable and not denormal-zero.
inline constexpr double kPositivityFloor = 1e-300;
// Relative width of the band around alpha1+alpha2 == beta_i where the
// two-exponential marginal mixture is replaced by its limit form.
inline constexpr double kDegeneracyRelTol = 1e-9;

/// A point (alpha1, beta1, alpha2, beta2) of the bivariate mixture
/// exponential 4-manifold. alpha_i are the failure rates while both
/// components run; beta_i the switched rates after the other fails.
struct FreundParams {
    double alpha1{};
    double beta1{};
    double alpha2{};
    double beta2{};

    double rate_sum() const { return alpha1 + alpha2; }

    bool is_valid() const {
        for (double v : {alpha1, beta1, alpha2, beta2}) {
            if (!(v > kPositivityFloor) || !std::isfinite(v)) return false;
        }
        return true;
    }

    // The X marginal is the generic two-term mixture only away from
    // alpha1+alpha2 == beta1; inside the band the limit form applies.
    bool marginal_x_defined() const {
        const double s = rate_sum();
        return std::fabs(s - beta1) > kDegeneracyRelTol * std::fmax(s, beta1);
    }
    bool marginal_y_defined() const {
        const double s = rate_sum();
        return std::fabs(s - beta2) > kDegeneracyRelTol * std::fmax(s, beta2);
    }
};

inline void validate(const FreundParams& p) {
    if (!p.is_valid()) {
        throw std::domain_error(
            "FreundParams: all of (alpha1, beta1, alpha2, beta2) must be strictly "
            "positive and finite, got (" +
            std::to_string(p.alpha1) + ", " + std::to_string(p.beta1) + ", " +
            std::to_string(p.alpha2) + ", " + std::to_string(p.beta2) + ")");
    }
}

/// Selects a connection in the one-parameter affine family.
/// Any finite real value is admissible; 0 is the Levi-Civita connection,
/// +1/-1 the exponential/mixture pair.
struct AlphaIndex {
    double value{0.0};
};

inline void validate(const AlphaIndex& a) {
    if (!std::isfinite(a.value)) {
        throw std::domain_error("AlphaIndex: connection parameter must be finite");
    }
}

}  // namespace freundgeo
