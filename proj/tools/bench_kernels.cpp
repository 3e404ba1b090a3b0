// Compares the serial reference kernels against the OpenMP production paths:
// distance-table construction and batch perturbation verification.

#include "clopen/model.hpp"
#include "clopen/stability.hpp"
#include "clopen/system.hpp"

#include <chrono>
#include <cstdio>
#include <omp.h>

using namespace clopen;

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

void bench_tables(int level) {
    SystemFamily fam = build_modified_odometer(level);
    const std::vector<Atom>& atoms = fam.top().model->atoms;
    std::vector<Rational> smin, smax, pmin, pmax;

    auto t0 = std::chrono::steady_clock::now();
    build_tables_serial(atoms, MetricKind::interval, smin, smax);
    double serial = ms_since(t0);

    t0 = std::chrono::steady_clock::now();
    build_tables_parallel(atoms, MetricKind::interval, pmin, pmax);
    double parallel = ms_since(t0);

    bool equal = smin == pmin && smax == pmax;
    std::printf("tables      level=%d atoms=%4zu  serial %8.2f ms  parallel %8.2f ms  x%.2f  %s\n",
                level, atoms.size(), serial, parallel, serial / parallel,
                equal ? "identical" : "MISMATCH");
}

void bench_verification(int level) {
    SystemFamily fam = family_power(build_modified_odometer(level), 3);
    const SystemLevel& sys = fam.top();
    const int n = sys.size();

    // one swap candidate per interval sibling pair
    std::vector<std::vector<int>> taus;
    for (int a = 0; a + 1 < (1 << level); a += 2) {
        std::vector<int> tau(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) tau[static_cast<size_t>(i)] = i;
        tau[static_cast<size_t>(a)] = a + 1;
        tau[static_cast<size_t>(a) + 1] = a;
        taus.push_back(std::move(tau));
    }
    std::vector<int> h(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) h[static_cast<size_t>(i)] = i;

    auto equation_violations = [&](const std::vector<int>& tau) {
        long bad = 0;
        for (int x = 0; x < n; ++x) {
            int gx = tau[static_cast<size_t>(sys.pi[x])];
            if (h[static_cast<size_t>(gx)] != sys.pi[static_cast<size_t>(h[static_cast<size_t>(x)])])
                ++bad;
        }
        return bad;
    };

    auto t0 = std::chrono::steady_clock::now();
    long serial_bad = 0;
    for (const auto& tau : taus) serial_bad += equation_violations(tau);
    double serial = ms_since(t0);

    t0 = std::chrono::steady_clock::now();
    long parallel_bad = 0;
#pragma omp parallel for reduction(+ : parallel_bad) schedule(static)
    for (long i = 0; i < static_cast<long>(taus.size()); ++i)
        parallel_bad += equation_violations(taus[static_cast<size_t>(i)]);
    double parallel = ms_since(t0);

    std::printf("batch-verify level=%d swaps=%3zu  serial %8.2f ms  parallel %8.2f ms  x%.2f  %s\n",
                level, taus.size(), serial, parallel, serial / parallel,
                serial_bad == parallel_bad ? "identical" : "MISMATCH");
}

}  // namespace

int main() {
    std::printf("threads: %d\n", omp_get_max_threads());
    for (int level : {5, 6, 7, 8}) bench_tables(level);
    for (int level : {6, 7, 8}) bench_verification(level);
    return 0;
}
