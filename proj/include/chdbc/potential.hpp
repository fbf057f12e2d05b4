#pragma once

#include <cstddef>
#include <optional>
#include <string>

namespace chdbc {

enum class PotentialKind {
    double_well,            // W(u) = (u^2-1)^2/4, F'' unbounded
    truncated_double_well,  // quadratic tails outside [-1,1], |F''| <= 2
    contact_line,           // G(u) = (gamma/2) cos(theta_s) sin(pi u / 2)
};

struct Potential {
    PotentialKind kind = PotentialKind::double_well;
    // contact_line parameters; ignored by the double wells.
    double gamma = 0.0;
    double cos_theta_s = 0.0;
};

// gamma defaults to 2*sqrt(2)/3 (the surface-tension normalization the
// contact-line experiments use).
Potential make_contact_line(double cos_theta_s);
Potential make_contact_line(double cos_theta_s, double gamma);

double potential_value(const Potential& p, double u);
double potential_derivative(const Potential& p, double u);

// Supremum of the second derivative over the real line; empty when
// unbounded (classical double well).
std::optional<double> curvature_bound(const Potential& p);

// Batch forms dispatch to the kernel layer; contact_line stays scalar
// (vector sin/cos is not available portably).
void potential_derivative_batch(const Potential& p, const double* u,
                                double* out, std::size_t n);
double potential_value_sum(const Potential& p, const double* u, std::size_t n);

const char* potential_kind_name(PotentialKind k);
// Throws std::invalid_argument for unknown names.
PotentialKind parse_potential_kind(const std::string& name);

}  // namespace chdbc
