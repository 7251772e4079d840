// Micro-benchmark for the ellipsoid fitter: times MVEE fits on workspace
// clouds of the size the optimizer uses, and reports iteration counts and
// certified duality gaps.
#include <wsopt/ellipsoid.hpp>
#include <wsopt/workspace.hpp>

#include <chrono>
#include <cstdio>

int main(int argc, char** argv)
{
    using namespace wsopt;
    const int n = argc > 1 ? std::atoi(argv[1]) : 2000;
    const int repeats = argc > 2 ? std::atoi(argv[2]) : 50;

    BodyParams cfg;
    double total_ms = 0.0;
    long total_iters = 0;
    double worst_gap = 0.0;
    for (int r = 0; r < repeats; ++r) {
        DecisionVector x;
        // Spread candidates over the box so support sets differ run to run.
        RngSequence rng(RngStream(1234 + static_cast<unsigned>(r)));
        for (auto& l : x.l)
            l = rng.uniform(0.1, 0.6);
        x.c = rng.uniform(-0.5, 0.5);
        const ChainModel chain = build_srl_upper(x, cfg);
        const PointCloud cloud = sample_workspace(chain, n, 42);

        const auto t0 = std::chrono::steady_clock::now();
        const MveeResult<3> fit = mvee_fit<3>(cloud.pts);
        const auto t1 = std::chrono::steady_clock::now();
        total_ms += std::chrono::duration<double, std::milli>(t1 - t0).count();
        total_iters += fit.report.iterations;
        worst_gap = std::max(worst_gap, fit.report.duality_gap);
    }
    std::printf("n=%d repeats=%d  mean fit %.3f ms  mean iters %.1f  worst gap %.2e\n", n, repeats,
                total_ms / repeats, static_cast<double>(total_iters) / repeats, worst_gap);

    // Planar (support mode) fit timing via the dispatcher.
    total_ms = 0.0;
    for (int r = 0; r < repeats; ++r) {
        DecisionVector x;
        RngSequence rng(RngStream(99 + static_cast<unsigned>(r)));
        for (auto& l : x.l)
            l = rng.uniform(0.15, 0.6);
        const ChainModel chain = build_srl_lower(x, cfg);
        const PointCloud cloud = sample_workspace(chain, n, 42);
        const auto t0 = std::chrono::steady_clock::now();
        const EllipsoidFit fit = fit_enclosing_ellipsoid(cloud.pts);
        const auto t1 = std::chrono::steady_clock::now();
        total_ms += std::chrono::duration<double, std::milli>(t1 - t0).count();
        if (r == 0)
            std::printf("planar fit rank=%d semi=(%.3f %.3f %.3f)\n", fit.rank, fit.ellipsoid.semi_axes[0],
                        fit.ellipsoid.semi_axes[1], fit.ellipsoid.semi_axes[2]);
    }
    std::printf("planar n=%d  mean fit %.3f ms\n", n, total_ms / repeats);
    return 0;
}
