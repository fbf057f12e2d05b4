#include "chdbc/potential.hpp"

#include <cmath>
#include <stdexcept>

#include "chdbc/kernels.hpp"
#include "kernels/scalar_core.hpp"

namespace chdbc {
namespace {

constexpr double kPi = 3.14159265358979323846;
// 2*sqrt(2)/3
constexpr double kDefaultGamma = 0.94280904158206336587;

}  // namespace

Potential make_contact_line(double cos_theta_s) {
    return make_contact_line(cos_theta_s, kDefaultGamma);
}

Potential make_contact_line(double cos_theta_s, double gamma) {
    if (!(gamma > 0.0)) {
        throw std::invalid_argument("contact_line gamma must be positive");
    }
    if (!(cos_theta_s >= -1.0 && cos_theta_s <= 1.0)) {
        throw std::invalid_argument("cos(theta_s) must lie in [-1, 1]");
    }
    Potential p;
    p.kind = PotentialKind::contact_line;
    p.gamma = gamma;
    p.cos_theta_s = cos_theta_s;
    return p;
}

double potential_value(const Potential& p, double u) {
    switch (p.kind) {
        case PotentialKind::double_well:
            return kernels::detail::dw_value_1(u);
        case PotentialKind::truncated_double_well:
            return kernels::detail::tdw_value_1(u);
        case PotentialKind::contact_line:
            return 0.5 * p.gamma * p.cos_theta_s * std::sin(0.5 * kPi * u);
    }
    throw std::invalid_argument("unknown potential kind");
}

double potential_derivative(const Potential& p, double u) {
    switch (p.kind) {
        case PotentialKind::double_well:
            return kernels::detail::dw_prime_1(u);
        case PotentialKind::truncated_double_well:
            return kernels::detail::tdw_prime_1(u);
        case PotentialKind::contact_line:
            return 0.25 * kPi * p.gamma * p.cos_theta_s *
                   std::cos(0.5 * kPi * u);
    }
    throw std::invalid_argument("unknown potential kind");
}

std::optional<double> curvature_bound(const Potential& p) {
    switch (p.kind) {
        case PotentialKind::double_well:
            return std::nullopt;
        case PotentialKind::truncated_double_well:
            return 2.0;
        case PotentialKind::contact_line:
            // |G''| = (gamma/2)(pi/2)^2 |cos(theta_s) sin(pi u/2)|
            return 0.5 * p.gamma * 0.25 * kPi * kPi *
                   std::fabs(p.cos_theta_s);
    }
    throw std::invalid_argument("unknown potential kind");
}

void potential_derivative_batch(const Potential& p, const double* u,
                                double* out, std::size_t n) {
    switch (p.kind) {
        case PotentialKind::double_well:
            kernels::dw_prime(u, out, n);
            return;
        case PotentialKind::truncated_double_well:
            kernels::tdw_prime(u, out, n);
            return;
        case PotentialKind::contact_line: {
            const double c = 0.25 * kPi * p.gamma * p.cos_theta_s;
            for (std::size_t i = 0; i < n; ++i) {
                out[i] = c * std::cos(0.5 * kPi * u[i]);
            }
            return;
        }
    }
    throw std::invalid_argument("unknown potential kind");
}

double potential_value_sum(const Potential& p, const double* u,
                           std::size_t n) {
    switch (p.kind) {
        case PotentialKind::double_well:
            return kernels::dw_value_sum(u, n);
        case PotentialKind::truncated_double_well:
            return kernels::tdw_value_sum(u, n);
        case PotentialKind::contact_line: {
            const double c = 0.5 * p.gamma * p.cos_theta_s;
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                acc += c * std::sin(0.5 * kPi * u[i]);
            }
            return acc;
        }
    }
    throw std::invalid_argument("unknown potential kind");
}

const char* potential_kind_name(PotentialKind k) {
    switch (k) {
        case PotentialKind::double_well:
            return "double_well";
        case PotentialKind::truncated_double_well:
            return "truncated_double_well";
        case PotentialKind::contact_line:
            return "contact_line";
    }
    throw std::invalid_argument("unknown potential kind");
}

PotentialKind parse_potential_kind(const std::string& name) {
    if (name == "double_well") return PotentialKind::double_well;
    if (name == "truncated_double_well") {
        return PotentialKind::truncated_double_well;
    }
    if (name == "contact_line") return PotentialKind::contact_line;
    throw std::invalid_argument("unknown potential kind: " + name);
}

}  // namespace chdbc
