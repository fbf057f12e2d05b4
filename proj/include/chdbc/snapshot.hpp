#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chdbc/grid.hpp"
#include "chdbc/state.hpp"

namespace chdbc {

// Snapshot text format:
//   line 1: CHDBC1 <nx> <ny> <h> <time>
//   next ny lines: nx whitespace-separated values (row-major, y-major outer)
//   last line: perimeter-ordered mu_gamma values, or "-" if absent
// All values carry 17 significant digits.
struct Snapshot {
    int nx = 0;
    int ny = 0;
    double h = 0.0;
    double time = 0.0;
    std::vector<double> field;                     // size nx*ny
    std::optional<std::vector<double>> mu_gamma;   // ring order
};

// Atomic (write-temp-rename).
void write_snapshot(const std::string& path, const State& state,
                    const Grid& grid);

// Throws std::runtime_error on malformed input.
Snapshot read_snapshot(const std::string& path);

}  // namespace chdbc
