#include "chdbc/snapshot.hpp"

#include <sstream>
#include <stdexcept>

#include "chdbc/io.hpp"

namespace chdbc {
namespace {

[[noreturn]] void malformed(const std::string& path, const std::string& why) {
    throw std::runtime_error("malformed snapshot " + path + ": " + why);
}

}  // namespace

void write_snapshot(const std::string& path, const State& state,
                    const Grid& grid) {
    if (state.phi.size() != static_cast<std::size_t>(grid.n_nodes())) {
        throw std::invalid_argument("write_snapshot: field size mismatch");
    }
    std::string out;
    out.reserve(state.phi.size() * 24 + 64);
    out += "CHDBC1 ";
    out += std::to_string(grid.nx);
    out += ' ';
    out += std::to_string(grid.ny);
    out += ' ';
    out += format_g17(grid.h);
    out += ' ';
    out += format_g17(state.time);
    out += '\n';
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            if (i > 0) out += ' ';
            out += format_g17(state.phi[grid.node(i, j)]);
        }
        out += '\n';
    }
    if (state.mu_gamma.size() == static_cast<std::size_t>(grid.n_perimeter())) {
        for (std::size_t k = 0; k < state.mu_gamma.size(); ++k) {
            if (k > 0) out += ' ';
            out += format_g17(state.mu_gamma[k]);
        }
    } else {
        out += '-';
    }
    out += '\n';
    atomic_write_text(path, out);
}

Snapshot read_snapshot(const std::string& path) {
    std::istringstream in(read_text_file(path));
    std::string magic;
    Snapshot s;
    if (!(in >> magic >> s.nx >> s.ny >> s.h >> s.time)) {
        malformed(path, "unreadable header");
    }
    if (magic != "CHDBC1") malformed(path, "bad magic '" + magic + "'");
    if (s.nx < 5 || s.ny < 5) malformed(path, "grid too small");
    if (!(s.h > 0.0)) malformed(path, "non-positive spacing");
    s.field.resize(static_cast<std::size_t>(s.nx) * s.ny);
    for (double& v : s.field) {
        if (!(in >> v)) malformed(path, "short field data");
    }
    std::string tok;
    if (!(in >> tok)) malformed(path, "missing mu_gamma line");
    if (tok != "-") {
        const std::size_t m = 2 * static_cast<std::size_t>(s.nx - 1) +
                              2 * static_cast<std::size_t>(s.ny - 1);
        std::vector<double> mg(m);
        try {
            mg[0] = std::stod(tok);
        } catch (const std::exception&) {
            malformed(path, "bad mu_gamma value '" + tok + "'");
        }
        for (std::size_t k = 1; k < m; ++k) {
            if (!(in >> mg[k])) malformed(path, "short mu_gamma data");
        }
        s.mu_gamma = std::move(mg);
    }
    if (in >> tok) malformed(path, "trailing data '" + tok + "'");
    return s;
}

}  // namespace chdbc
