#include <cstddef>

#include "kernels/scalar_core.hpp"
#include "kernels/table.hpp"

namespace chdbc::kernels::detail {
namespace {

void s_axpby(double a, const double* x, double b, const double* y, double* out,
             std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = axpby_1(a, x[i], b, y[i]);
}

void s_dw_prime(const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = dw_prime_1(x[i]);
}

void s_tdw_prime(const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = tdw_prime_1(x[i]);
}

void s_laplacian5(const double* u, double* out, int nx, int ny, double inv_h2) {
    for (int j = 1; j < ny - 1; ++j) {
        const double* row = u + static_cast<std::size_t>(j) * nx;
        double* orow = out + static_cast<std::size_t>(j) * nx;
        for (int i = 1; i < nx - 1; ++i) {
            orow[i] = lap5_1(row[i], row[i + 1], row[i - 1], row[i + nx],
                             row[i - nx], inv_h2);
        }
    }
}

double s_sum(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
}

double s_dot(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

double s_sum_sq_diff(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - y[i];
        acc += d * d;
    }
    return acc;
}

double s_dw_value_sum(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += dw_value_1(x[i]);
    return acc;
}

double s_tdw_value_sum(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += tdw_value_1(x[i]);
    return acc;
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable table = {
        s_axpby,       s_dw_prime, s_tdw_prime,    s_laplacian5, s_sum,
        s_dot,         s_sum_sq_diff, s_dw_value_sum, s_tdw_value_sum,
    };
    return table;
}

}  // namespace chdbc::kernels::detail
