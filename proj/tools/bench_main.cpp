// Benchmark comparing the serial reference loops against the OpenMP kernels
// and timing the two parallel pipeline stages (family solves, contour
// quadrature) in both modes.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "aihs/kernels.hpp"
#include "aihs/resolvent_family.hpp"
#include "aihs/structure_analysis.hpp"
#include "aihs/zoo.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double time_ms(int reps, const std::function<void()>& fn) {
    fn();  // warm-up
    const auto t0 = Clock::now();
    for (int i = 0; i < reps; ++i) fn();
    const auto t1 = Clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void row(const char* name, aihs::Index d, double serial_ms, double parallel_ms) {
    std::printf("%-22s D=%-5lld serial %6.2f ms   omp %6.2f ms   speedup %.2fx\n", name,
                static_cast<long long>(d), serial_ms, parallel_ms, serial_ms / parallel_ms);
}

}  // namespace

int main(int argc, char** argv) {
    int reps = 5;
    std::vector<aihs::Index> dims = {256, 512, 1024};
    if (argc > 1 && std::string(argv[1]) == "--quick") {
        dims = {256, 512};
        reps = 3;
    }
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#endif

    using namespace aihs;
    for (Index d : dims) {
        std::uint64_t state = 42;
        CMatrix A(d, d);
        for (Index j = 0; j < d; ++j)
            for (Index i = 0; i < d; ++i)
                A(i, j) = Complex(deterministic_gaussian(state), deterministic_gaussian(state));
        CVector x(d);
        for (Index i = 0; i < d; ++i) x(i) = Complex(deterministic_gaussian(state), 0.0);
        CMatrix B(d, d / 8);
        for (Index j = 0; j < B.cols(); ++j)
            for (Index i = 0; i < d; ++i) B(i, j) = Complex(deterministic_gaussian(state), 0.0);

        CVector y;
        row("matvec", d, time_ms(reps, [&] { kernels::ref::matvec(A, x, y); }),
            time_ms(reps, [&] { kernels::matvec(A, x, y, kernels::Exec::Parallel); }));
        row("matvec_transpose", d,
            time_ms(reps, [&] { kernels::ref::matvec_transpose(A, x, y); }),
            time_ms(reps, [&] { kernels::matvec_transpose(A, x, y, kernels::Exec::Parallel); }));
        CMatrix C;
        row("matmul (D x D/8)", d, time_ms(1, [&] { kernels::ref::matmul(A, B, C); }),
            time_ms(1, [&] { kernels::matmul(A, B, C, kernels::Exec::Parallel); }));
    }

    // pipeline stages: resolvent family on the shift, quadrature on clusters
    {
        const Index d = 2048;
        const OperatorRep T = zoo_build("forward_shift_unweighted", {d, 0, {}});
        const CVector estar = named_estar_profile("pow34", d, 0);
        ApproachSchedule sched{1.0, 0.25, 8};
        FamilyOptions serial_opts, parallel_opts;
        serial_opts.parallel = false;
        parallel_opts.parallel = true;
        row("family (8 solves)", d,
            time_ms(reps, [&] { build_family(T, Complex(1.0, 0.0), sched, estar, serial_opts); }),
            time_ms(reps,
                    [&] { build_family(T, Complex(1.0, 0.0), sched, estar, parallel_opts); }));
    }
    {
        const Index d = 96;
        const OperatorRep T = zoo_build("diag_two_clusters", {d, 0, {}});
        RieszOptions serial_opts, parallel_opts;
        serial_opts.parallel = false;
        parallel_opts.parallel = true;
        row("riesz (64+ nodes)", d,
            time_ms(reps, [&] { riesz_projection(T, Complex(0.0, 0.0), 1.0, serial_opts); }),
            time_ms(reps, [&] { riesz_projection(T, Complex(0.0, 0.0), 1.0, parallel_opts); }));
    }
    return 0;
}
