#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace jumpcp {

// Level grids for the jump-size coordinate. Entries are integer-over-ten
// quotients so equal levels compare bitwise equal across modules.
std::vector<double> level_grid_fine();    // {0.1 j : j = 1..30}
std::vector<double> level_grid_coarse();  // {0.1 + 0.3 j : j = 0..9}, subset of the fine grid

// Index of t within the sorted grid, matched to 1e-9; throws when absent.
std::size_t level_index(std::span<const double> grid, double t);

}  // namespace jumpcp
