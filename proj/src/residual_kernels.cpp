#include "rdlab/residual_kernels.hpp"

#include <cmath>
#include <limits>

#include <omp.h>

namespace rdlab {

namespace {

// ties broken toward the smaller flat index so both kernels agree exactly
void fold(GridMax& acc, double v, std::size_t i, std::size_t j, std::size_t nx) {
    if (std::isnan(v)) {
        acc.has_nan = true;
        v = std::numeric_limits<double>::infinity();
    }
    std::size_t k = j * nx + i, ka = acc.j * nx + acc.i;
    if (v > acc.value || (v == acc.value && k < ka)) {
        acc.value = v;
        acc.i = i;
        acc.j = j;
    }
}

}  // namespace

GridMax grid_max_serial(const GridResidual& r, std::size_t nx, std::size_t nt,
                        std::vector<double>* field) {
    GridMax acc;
    acc.value = -std::numeric_limits<double>::infinity();
    if (field) field->assign(nx * nt, 0.0);
    for (std::size_t j = 0; j < nt; ++j)
        for (std::size_t i = 0; i < nx; ++i) {
            double v = r(i, j);
            if (field) (*field)[j * nx + i] = v;
            fold(acc, v, i, j, nx);
        }
    return acc;
}

GridMax grid_max_parallel(const GridResidual& r, std::size_t nx, std::size_t nt,
                          std::vector<double>* field) {
    const long n = static_cast<long>(nx * nt);
    if (field) field->assign(nx * nt, 0.0);
    GridMax best;
    best.value = -std::numeric_limits<double>::infinity();
#pragma omp parallel
    {
        GridMax local;
        local.value = -std::numeric_limits<double>::infinity();
#pragma omp for schedule(dynamic, 64) nowait
        for (long k = 0; k < n; ++k) {
            std::size_t i = static_cast<std::size_t>(k) % nx, j = static_cast<std::size_t>(k) / nx;
            double v = r(i, j);
            if (field) (*field)[static_cast<std::size_t>(k)] = v;
            fold(local, v, i, j, nx);
        }
#pragma omp critical
        {
            best.has_nan = best.has_nan || local.has_nan;
            if (local.value > -std::numeric_limits<double>::infinity())
                fold(best, local.value, local.i, local.j, nx);
        }
    }
    return best;
}

GridMax grid_max(const GridResidual& r, std::size_t nx, std::size_t nt, std::vector<double>* field) {
    if (omp_get_max_threads() > 1) return grid_max_parallel(r, nx, nt, field);
    return grid_max_serial(r, nx, nt, field);
}

}  // namespace rdlab
