#pragma once

// Single-element cores shared by the scalar backend and the SIMD backends'
// tail loops. The SIMD lanes mirror these expressions operation for
// operation (FMA contraction is disabled project-wide), which is what makes
// elementwise kernels bitwise-identical across backends.

namespace chdbc::kernels::detail {

inline double dw_prime_1(double x) {
    const double t = x * x - 1.0;
    return x * t;
}

inline double dw_value_1(double x) {
    const double t = x * x - 1.0;
    return 0.25 * (t * t);
}

// Branch seams: the quadratic tails own x > 1 and x <= -1; values and first
// derivatives agree exactly (both sides evaluate to 0) at +-1.
inline double tdw_prime_1(double x) {
    if (x > 1.0) return 2.0 * (x - 1.0);
    if (x <= -1.0) return 2.0 * (x + 1.0);
    const double t = x * x - 1.0;
    return x * t;
}

inline double tdw_value_1(double x) {
    if (x > 1.0) {
        const double t = x - 1.0;
        return t * t;
    }
    if (x <= -1.0) {
        const double t = x + 1.0;
        return t * t;
    }
    const double t = x * x - 1.0;
    return 0.25 * (t * t);
}

inline double axpby_1(double a, double x, double b, double y) {
    return a * x + b * y;
}

inline double lap5_1(double uc, double ue, double uw, double un, double us,
                     double inv_h2) {
    return ((ue + uw) + (un + us) - 4.0 * uc) * inv_h2;
}

}  // namespace chdbc::kernels::detail
