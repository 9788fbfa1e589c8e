#include "jumpcp/grids.hpp"

#include <cmath>
#include <stdexcept>

namespace jumpcp {

std::vector<double> level_grid_fine() {
    std::vector<double> grid(30);
    for (int j = 1; j <= 30; ++j) grid[j - 1] = static_cast<double>(j) / 10.0;
    return grid;
}

std::vector<double> level_grid_coarse() {
    std::vector<double> grid(10);
    for (int j = 0; j <= 9; ++j) grid[j] = static_cast<double>(1 + 3 * j) / 10.0;
    return grid;
}

std::size_t level_index(std::span<const double> grid, double t) {
    for (std::size_t u = 0; u < grid.size(); ++u) {
        if (std::abs(grid[u] - t) <= 1e-9) return u;
    }
    throw std::invalid_argument("level_index: level is not on the grid");
}

}  // namespace jumpcp
