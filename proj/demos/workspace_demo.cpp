// Minimal end-to-end usage example: build the limb for a candidate design,
// sample its manipulation workspace, fit the enclosing ellipsoid and compare
// it against the wearer's-arm reference.
#include <wsopt/ellipsoid.hpp>
#include <wsopt/metrics.hpp>
#include <wsopt/workspace.hpp>

#include <cstdio>

int main()
{
    using namespace wsopt;
    BodyParams cfg;
    DecisionVector x;
    x.l = {0.10, 0.40, 0.29, 0.21};
    x.c = 0.19;

    const PointCloud limb = sample_workspace(build_srl_upper(x, cfg), 10000, 7);
    const PointCloud arm = sample_workspace(build_human_arm(cfg), 10000, 8);

    const EllipsoidFit e_limb = fit_enclosing_ellipsoid(limb.pts);
    const EllipsoidFit e_arm = fit_enclosing_ellipsoid(arm.pts);

    std::printf("limb ellipsoid: center (%.3f, %.3f, %.3f), semi-axes (%.3f, %.3f, %.3f)\n",
                e_limb.ellipsoid.center.x(), e_limb.ellipsoid.center.y(), e_limb.ellipsoid.center.z(),
                e_limb.ellipsoid.semi_axes[0], e_limb.ellipsoid.semi_axes[1], e_limb.ellipsoid.semi_axes[2]);
    std::printf("arm ellipsoid:  center (%.3f, %.3f, %.3f), semi-axes (%.3f, %.3f, %.3f)\n",
                e_arm.ellipsoid.center.x(), e_arm.ellipsoid.center.y(), e_arm.ellipsoid.center.z(),
                e_arm.ellipsoid.semi_axes[0], e_arm.ellipsoid.semi_axes[1], e_arm.ellipsoid.semi_axes[2]);

    const SimilarityBlock sim = similarity_block(e_limb.ellipsoid, e_arm.ellipsoid);
    std::printf("similarity [center, axis, oblateness, volume] = [%.4f, %.4f, %.4f, %.4f]\n", sim.f[0], sim.f[1],
                sim.f[2], sim.f[3]);
    return 0;
}
