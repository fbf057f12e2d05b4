#pragma once

#include <cstddef>

// Data-parallel inner loops used by assembly, diagnostics and error norms.
// Every kernel has a scalar reference implementation and may have SIMD
// variants; the active variant is chosen once at startup from CPU features
// (override with the CHDBC_KERNELS environment variable or force()).
//
// Contract: elementwise kernels produce bitwise-identical results across
// backends (the build disables FMA contraction); reductions may differ by
// accumulation order and agree to ~1e-13 relative.

namespace chdbc::kernels {

enum class Backend { scalar, avx2 };

const char* backend_name(Backend b);
bool backend_supported(Backend b);
Backend active_backend();
// Throws std::invalid_argument if the backend is not supported on this host.
void force_backend(Backend b);

// out[i] = a*x[i] + b*y[i]
void axpby(double a, const double* x, double b, const double* y, double* out,
           std::size_t n);

// Classical double-well W(u) = (u^2-1)^2/4: out[i] = x[i]^3 - x[i].
void dw_prime(const double* x, double* out, std::size_t n);
// Sum of W over the array.
double dw_value_sum(const double* x, std::size_t n);

// Truncated double-well: quadratic growth (x-1)^2 for x > 1, (x+1)^2 for
// x <= -1, classical quartic in between. Derivative is 2-Lipschitz.
void tdw_prime(const double* x, double* out, std::size_t n);
double tdw_value_sum(const double* x, std::size_t n);

// 5-point Laplacian ((E+W)+(N+S)-4C)*inv_h2 written to the interior entries
// of out (size nx*ny); perimeter entries of out are left untouched.
void laplacian5(const double* u, double* out, int nx, int ny, double inv_h2);

double sum(const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
// Sum of (x[i]-y[i])^2.
double sum_sq_diff(const double* x, const double* y, std::size_t n);

}  // namespace chdbc::kernels
