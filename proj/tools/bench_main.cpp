// Benchmark: OpenMP kernels against their serial references.
//   1. RGG adjacency: all-pairs reference vs cell-grid build (1 and N threads)
//   2. q Monte Carlo (1e7 samples): 1 thread vs N threads
//   3. static batch (uniform placements + connectivity): 1 thread vs N threads

#include <chrono>
#include <cstdio>
#include <vector>

#include <omp.h>

#include "dynrgg/geometry.hpp"
#include "dynrgg/graph.hpp"
#include "dynrgg/rng.hpp"
#include "dynrgg/theory.hpp"

using namespace dynrgg;

namespace {

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

template <class F>
double time_best_of(int reps, const F& f) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const double t0 = now_seconds();
        f();
        best = std::min(best, now_seconds() - t0);
    }
    return best;
}

std::vector<Point> random_points(std::int64_t n, std::uint64_t seed) {
    std::vector<Point> pts(static_cast<std::size_t>(n));
    SplitMix64 rng(seed);
    for (Point& p : pts) {
        p.x = rng.next_double();
        p.y = rng.next_double();
    }
    return pts;
}

void static_batch(std::int64_t n, double r, std::int64_t trials, std::uint64_t seed) {
    std::vector<std::uint8_t> connected(static_cast<std::size_t>(trials));
#pragma omp parallel
    {
        std::vector<Point> pts(static_cast<std::size_t>(n));
        SnapshotScratch scratch;
        SnapshotStats snap;
#pragma omp for schedule(dynamic, 8)
        for (std::int64_t t = 0; t < trials; ++t) {
            SplitMix64 rng(derive_stream(seed, static_cast<std::uint64_t>(t)));
            for (Point& p : pts) {
                p.x = rng.next_double();
                p.y = rng.next_double();
            }
            snapshot_stats(pts, r, scratch, snap);
            connected[static_cast<std::size_t>(t)] = snap.connected;
        }
    }
}

} // namespace

int main() {
    const int threads = omp_get_max_threads();
    std::printf("threads available: %d\n\n", threads);

    std::printf("RGG adjacency build (best of 3, seconds)\n");
    std::printf("%8s %12s %14s %14s %10s\n", "n", "all-pairs", "grid(1 thr)", "grid(N thr)",
                "speedup");
    for (std::int64_t n : {1000, 2000, 4000, 8000}) {
        const double r = radius_for_mu(n, 1.0);
        const auto pts = random_points(n, 7u + static_cast<std::uint64_t>(n));

        const double t_brute = time_best_of(3, [&] { (void)build_rgg_bruteforce(pts, r); });
        omp_set_num_threads(1);
        const double t_grid1 = time_best_of(3, [&] { (void)build_rgg(pts, r); });
        omp_set_num_threads(threads);
        const double t_gridn = time_best_of(3, [&] { (void)build_rgg(pts, r); });

        const Graph a = build_rgg(pts, r);
        const Graph b = build_rgg_bruteforce(pts, r);
        if (a.adjacency != b.adjacency) {
            std::printf("MISMATCH at n=%lld\n", static_cast<long long>(n));
            return 1;
        }
        std::printf("%8lld %12.6f %14.6f %14.6f %9.2fx\n", static_cast<long long>(n), t_brute,
                    t_grid1, t_gridn, t_brute / t_gridn);
    }

    std::printf("\nq Monte Carlo, disk sampling, 1e7 samples (best of 3, seconds)\n");
    {
        const double r = 0.02, s = 0.1;
        omp_set_num_threads(1);
        const double t1 = time_best_of(3, [&] { (void)q_montecarlo(r, s); });
        const double v1 = q_montecarlo(r, s).value;
        omp_set_num_threads(threads);
        const double tn = time_best_of(3, [&] { (void)q_montecarlo(r, s); });
        const double vn = q_montecarlo(r, s).value;
        std::printf("%8s %12.6f %14.6f %9.2fx   bit-identical: %s\n", "", t1, tn, t1 / tn,
                    v1 == vn ? "yes" : "NO");
    }

    std::printf("\nstatic batch, n=1000, 2000 trials (best of 3, seconds)\n");
    {
        const double r = radius_for_mu(1000, 1.0);
        omp_set_num_threads(1);
        const double t1 = time_best_of(3, [&] { static_batch(1000, r, 2000, 99); });
        omp_set_num_threads(threads);
        const double tn = time_best_of(3, [&] { static_batch(1000, r, 2000, 99); });
        std::printf("%8s %12.6f %14.6f %9.2fx\n", "", t1, tn, t1 / tn);
    }
    return 0;
}
