#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace rdlab {

/// Value of a residual at grid node (x_i, t_j); must be safe to call concurrently.
using GridResidual = std::function<double(std::size_t i, std::size_t j)>;

struct GridMax {
    double value = 0.0;
    std::size_t i = 0;
    std::size_t j = 0;
    bool has_nan = false;
};

/// Max over an nx-by-nt grid; the field, if requested, is stored row-major in t.
/// NaN values are reported through has_nan and count as +inf for the max.
GridMax grid_max_serial(const GridResidual& r, std::size_t nx, std::size_t nt,
                        std::vector<double>* field = nullptr);
GridMax grid_max_parallel(const GridResidual& r, std::size_t nx, std::size_t nt,
                          std::vector<double>* field = nullptr);

/// Dispatches to the parallel kernel when OpenMP has more than one thread.
GridMax grid_max(const GridResidual& r, std::size_t nx, std::size_t nt,
                 std::vector<double>* field = nullptr);

}  // namespace rdlab
