/// Serial vs OpenMP grid-max kernels on a barrier residual workload.
#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "rdlab/barriers.hpp"
#include "rdlab/residual_kernels.hpp"

using namespace rdlab;

namespace {

template <class F>
double best_of(int reps, F&& f) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        auto t0 = std::chrono::steady_clock::now();
        f();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

}  // namespace

int main(int argc, char** argv) {
    const std::size_t nx = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 801;
    const std::size_t nt = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 200;
    const int reps = argc > 3 ? std::atoi(argv[3]) : 5;

    BarrierParams p{1.0, 3.0, 1778.0, 1, BarrierFamily::Thm1Barrier};
    Operator1D op(Coefficient::weight(1.0, 0.5), Coefficient::sine(0.0, 0.5));
    const double X = 0.9;
    GridResidual r = [&](std::size_t i, std::size_t j) {
        double x = -X + 2 * X * static_cast<double>(i) / static_cast<double>(nx - 1);
        double t = static_cast<double>(j) / static_cast<double>(nt - 1);
        BarrierDerivatives d = barrier_derivatives(p, op, x, t);
        return std::tanh(d.bracket * 1e-3) - 0.5 * std::tanh(d.log_phi * 1e-3) - p.K * 1e-4;
    };

    GridMax s{}, q{};
    double ts = best_of(reps, [&] { s = grid_max_serial(r, nx, nt); });
    double tp = best_of(reps, [&] { q = grid_max_parallel(r, nx, nt); });
    std::printf("grid %zu x %zu, %d threads, best of %d\n", nx, nt, omp_get_max_threads(), reps);
    std::printf("serial    %.4f s  max %.17g at (%zu, %zu)\n", ts, s.value, s.i, s.j);
    std::printf("parallel  %.4f s  max %.17g at (%zu, %zu)\n", tp, q.value, q.i, q.j);
    std::printf("speedup   %.2f\n", ts / tp);
    if (s.value != q.value || s.i != q.i || s.j != q.j) {
        std::printf("MISMATCH between serial and parallel kernels\n");
        return 1;
    }
    return 0;
}
