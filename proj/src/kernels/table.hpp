#pragma once

#include <cstddef>

// Internal dispatch table; one instance per backend.

namespace chdbc::kernels::detail {

struct KernelTable {
    void (*axpby)(double, const double*, double, const double*, double*,
                  std::size_t);
    void (*dw_prime)(const double*, double*, std::size_t);
    void (*tdw_prime)(const double*, double*, std::size_t);
    void (*laplacian5)(const double*, double*, int, int, double);
    double (*sum)(const double*, std::size_t);
    double (*dot)(const double*, const double*, std::size_t);
    double (*sum_sq_diff)(const double*, const double*, std::size_t);
    double (*dw_value_sum)(const double*, std::size_t);
    double (*tdw_value_sum)(const double*, std::size_t);
};

const KernelTable& scalar_table();

// Present only in builds whose toolchain can target AVX2; calling it is
// valid only when the running CPU supports AVX2.
bool avx2_compiled();
const KernelTable& avx2_table();

}  // namespace chdbc::kernels::detail
