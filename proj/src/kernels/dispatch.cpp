#include "chdbc/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>

#include "kernels/table.hpp"

namespace chdbc::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

struct Dispatch {
    Backend backend;
    const detail::KernelTable* table;
};

Dispatch select_initial() {
    const char* env = std::getenv("CHDBC_KERNELS");
    if (env != nullptr && *env != '\0') {
        if (std::strcmp(env, "scalar") == 0) {
            return {Backend::scalar, &detail::scalar_table()};
        }
        if (std::strcmp(env, "avx2") == 0) {
            if (!backend_supported(Backend::avx2)) {
                throw std::invalid_argument(
                    "CHDBC_KERNELS=avx2 but this host has no AVX2 support");
            }
            return {Backend::avx2, &detail::avx2_table()};
        }
        throw std::invalid_argument(std::string("unknown CHDBC_KERNELS value: ") +
                                    env);
    }
    if (backend_supported(Backend::avx2)) {
        return {Backend::avx2, &detail::avx2_table()};
    }
    return {Backend::scalar, &detail::scalar_table()};
}

Dispatch& dispatch() {
    static Dispatch d = select_initial();
    return d;
}

}  // namespace

const char* backend_name(Backend b) {
    switch (b) {
        case Backend::scalar:
            return "scalar";
        case Backend::avx2:
            return "avx2";
    }
    throw std::invalid_argument("unknown backend");
}

bool backend_supported(Backend b) {
    switch (b) {
        case Backend::scalar:
            return true;
        case Backend::avx2:
            return detail::avx2_compiled() && cpu_has_avx2();
    }
    throw std::invalid_argument("unknown backend");
}

Backend active_backend() { return dispatch().backend; }

void force_backend(Backend b) {
    if (!backend_supported(b)) {
        throw std::invalid_argument(std::string("backend not supported here: ") +
                                    backend_name(b));
    }
    dispatch().backend = b;
    dispatch().table =
        b == Backend::avx2 ? &detail::avx2_table() : &detail::scalar_table();
}

void axpby(double a, const double* x, double b, const double* y, double* out,
           std::size_t n) {
    dispatch().table->axpby(a, x, b, y, out, n);
}

void dw_prime(const double* x, double* out, std::size_t n) {
    dispatch().table->dw_prime(x, out, n);
}

double dw_value_sum(const double* x, std::size_t n) {
    return dispatch().table->dw_value_sum(x, n);
}

void tdw_prime(const double* x, double* out, std::size_t n) {
    dispatch().table->tdw_prime(x, out, n);
}

double tdw_value_sum(const double* x, std::size_t n) {
    return dispatch().table->tdw_value_sum(x, n);
}

void laplacian5(const double* u, double* out, int nx, int ny, double inv_h2) {
    dispatch().table->laplacian5(u, out, nx, ny, inv_h2);
}

double sum(const double* x, std::size_t n) { return dispatch().table->sum(x, n); }

double dot(const double* x, const double* y, std::size_t n) {
    return dispatch().table->dot(x, y, n);
}

double sum_sq_diff(const double* x, const double* y, std::size_t n) {
    return dispatch().table->sum_sq_diff(x, y, n);
}

}  // namespace chdbc::kernels
