#include <cstddef>

#include "kernels/scalar_core.hpp"
#include "kernels/table.hpp"

// Compiled with -mavx2 when the toolchain supports it (see CMakeLists);
// runtime entry is gated on cpu support by the dispatcher. Lanes mirror the
// scalar cores operation for operation so elementwise results are bitwise
// identical; reductions use four accumulators and a fixed fold order, so
// they are compared with a tolerance.

#if defined(CHDBC_HAVE_AVX2_BUILD)

#include <immintrin.h>

namespace chdbc::kernels::detail {
namespace {

inline double fold4(__m256d acc) {
    alignas(32) double lane[4];
    _mm256_store_pd(lane, acc);
    return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

void v_axpby(double a, const double* x, double b, const double* y, double* out,
             std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    const __m256d vb = _mm256_set1_pd(b);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vx = _mm256_loadu_pd(x + i);
        const __m256d vy = _mm256_loadu_pd(y + i);
        _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_mul_pd(va, vx),
                                                _mm256_mul_pd(vb, vy)));
    }
    for (; i < n; ++i) out[i] = axpby_1(a, x[i], b, y[i]);
}

inline __m256d dw_prime_4(__m256d x) {
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d t = _mm256_sub_pd(_mm256_mul_pd(x, x), one);
    return _mm256_mul_pd(x, t);
}

void v_dw_prime(const double* x, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(out + i, dw_prime_4(_mm256_loadu_pd(x + i)));
    }
    for (; i < n; ++i) out[i] = dw_prime_1(x[i]);
}

inline __m256d tdw_prime_4(__m256d x) {
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d none = _mm256_set1_pd(-1.0);
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d hi = _mm256_mul_pd(two, _mm256_sub_pd(x, one));
    const __m256d lo = _mm256_mul_pd(two, _mm256_add_pd(x, one));
    const __m256d mid = dw_prime_4(x);
    const __m256d hi_mask = _mm256_cmp_pd(x, one, _CMP_GT_OQ);
    const __m256d lo_mask = _mm256_cmp_pd(x, none, _CMP_LE_OQ);
    __m256d r = _mm256_blendv_pd(mid, hi, hi_mask);
    return _mm256_blendv_pd(r, lo, lo_mask);
}

void v_tdw_prime(const double* x, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(out + i, tdw_prime_4(_mm256_loadu_pd(x + i)));
    }
    for (; i < n; ++i) out[i] = tdw_prime_1(x[i]);
}

void v_laplacian5(const double* u, double* out, int nx, int ny,
                  double inv_h2) {
    const __m256d four = _mm256_set1_pd(4.0);
    const __m256d vih2 = _mm256_set1_pd(inv_h2);
    for (int j = 1; j < ny - 1; ++j) {
        const double* row = u + static_cast<std::size_t>(j) * nx;
        double* orow = out + static_cast<std::size_t>(j) * nx;
        int i = 1;
        for (; i + 4 <= nx - 1; i += 4) {
            const __m256d uc = _mm256_loadu_pd(row + i);
            const __m256d ue = _mm256_loadu_pd(row + i + 1);
            const __m256d uw = _mm256_loadu_pd(row + i - 1);
            const __m256d un = _mm256_loadu_pd(row + i + nx);
            const __m256d us = _mm256_loadu_pd(row + i - nx);
            const __m256d t = _mm256_sub_pd(
                _mm256_add_pd(_mm256_add_pd(ue, uw), _mm256_add_pd(un, us)),
                _mm256_mul_pd(four, uc));
            _mm256_storeu_pd(orow + i, _mm256_mul_pd(t, vih2));
        }
        for (; i < nx - 1; ++i) {
            orow[i] = lap5_1(row[i], row[i + 1], row[i - 1], row[i + nx],
                             row[i - nx], inv_h2);
        }
    }
}

double v_sum(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    double r = fold4(acc);
    for (; i < n; ++i) r += x[i];
    return r;
}

double v_dot(const double* x, const double* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_add_pd(
            acc, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    }
    double r = fold4(acc);
    for (; i < n; ++i) r += x[i] * y[i];
    return r;
}

double v_sum_sq_diff(const double* x, const double* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d =
            _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
    }
    double r = fold4(acc);
    for (; i < n; ++i) {
        const double d = x[i] - y[i];
        r += d * d;
    }
    return r;
}

inline __m256d dw_value_4(__m256d x) {
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d quarter = _mm256_set1_pd(0.25);
    const __m256d t = _mm256_sub_pd(_mm256_mul_pd(x, x), one);
    return _mm256_mul_pd(quarter, _mm256_mul_pd(t, t));
}

double v_dw_value_sum(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_add_pd(acc, dw_value_4(_mm256_loadu_pd(x + i)));
    }
    double r = fold4(acc);
    for (; i < n; ++i) r += dw_value_1(x[i]);
    return r;
}

double v_tdw_value_sum(const double* x, std::size_t n) {
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d none = _mm256_set1_pd(-1.0);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d x4 = _mm256_loadu_pd(x + i);
        const __m256d th = _mm256_sub_pd(x4, one);
        const __m256d tl = _mm256_add_pd(x4, one);
        const __m256d hi = _mm256_mul_pd(th, th);
        const __m256d lo = _mm256_mul_pd(tl, tl);
        const __m256d mid = dw_value_4(x4);
        const __m256d hi_mask = _mm256_cmp_pd(x4, one, _CMP_GT_OQ);
        const __m256d lo_mask = _mm256_cmp_pd(x4, none, _CMP_LE_OQ);
        __m256d v = _mm256_blendv_pd(mid, hi, hi_mask);
        v = _mm256_blendv_pd(v, lo, lo_mask);
        acc = _mm256_add_pd(acc, v);
    }
    double r = fold4(acc);
    for (; i < n; ++i) r += tdw_value_1(x[i]);
    return r;
}

}  // namespace

bool avx2_compiled() { return true; }

const KernelTable& avx2_table() {
    static const KernelTable table = {
        v_axpby,       v_dw_prime, v_tdw_prime,    v_laplacian5, v_sum,
        v_dot,         v_sum_sq_diff, v_dw_value_sum, v_tdw_value_sum,
    };
    return table;
}

}  // namespace chdbc::kernels::detail

#else  // !CHDBC_HAVE_AVX2_BUILD

namespace chdbc::kernels::detail {

bool avx2_compiled() { return false; }

const KernelTable& avx2_table() { return scalar_table(); }

}  // namespace chdbc::kernels::detail

#endif
