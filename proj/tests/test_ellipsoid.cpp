#include <catch2/catch_amalgamated.hpp>

#include <wsopt/ellipsoid.hpp>
#include <wsopt/rng.hpp>
#include <wsopt/workspace.hpp>

#include <cmath>

using namespace wsopt;

namespace {

    Eigen::Matrix3Xd cube_corners()
    {
        Eigen::Matrix3Xd pts(3, 8);
        int k = 0;
        for (double x : {-1.0, 1.0})
            for (double y : {-1.0, 1.0})
                for (double z : {-1.0, 1.0})
                    pts.col(k++) = Vec3(x, y, z);
        return pts;
    }

    Eigen::Matrix3Xd upper_cloud(int n, std::uint64_t seed)
    {
        DecisionVector x;
        x.l = {0.1, 0.4, 0.3, 0.2};
        const ChainModel chain = build_srl_upper(x, BodyParams{});
        return sample_workspace(chain, n, seed).pts;
    }

    // Deterministic points on the surface of a transformed unit sphere.
    Eigen::Matrix3Xd ellipsoid_surface(const Mat3& A, const Vec3& t, int n, std::uint64_t seed)
    {
        RngSequence rng{RngStream(seed)};
        Eigen::Matrix3Xd pts(3, n);
        for (int i = 0; i < n; ++i) {
            const double z = rng.uniform(-1.0, 1.0);
            const double phi = rng.uniform(0.0, 2.0 * pi);
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            pts.col(i) = A * Vec3(r * std::cos(phi), r * std::sin(phi), z) + t;
        }
        return pts;
    }

} // namespace

TEST_CASE("enclosing ellipsoid of the cube corners is the circumscribed sphere")
{
    const EllipsoidFit fit = fit_enclosing_ellipsoid(cube_corners());

    CHECK(fit.rank == 3);
    CHECK(fit.report.status == FitStatus::converged);
    CHECK(fit.report.duality_gap <= 1e-7);
    CHECK(fit.ellipsoid.center.norm() < 1e-6);
    CHECK((fit.ellipsoid.shape - Mat3::Identity() / 3.0).cwiseAbs().maxCoeff() < 1e-5);
    for (int i = 0; i < 3; ++i)
        CHECK(fit.ellipsoid.semi_axes[i] == Catch::Approx(std::sqrt(3.0)).margin(1e-5));
    CHECK(fit.ellipsoid.volume() ==
          Catch::Approx(4.0 / 3.0 * pi * std::pow(3.0, 1.5)).epsilon(1e-5));
}

TEST_CASE("enclosing ellipsoid commutes with affine maps")
{
    // The smallest enclosing ellipsoid of T(S) is T applied to the smallest
    // enclosing ellipsoid of S for any invertible affine T, so the mapped cube
    // corners have the exactly known answer (3 A A^T)^{-1}.
    const Mat3 R = Eigen::AngleAxisd(0.7, Vec3(1.0, 1.0, 0.5).normalized()).toRotationMatrix();
    const Mat3 A = R * Vec3(2.0, 1.0, 1.0).asDiagonal();
    const Vec3 t(0.3, -0.2, 0.5);

    Eigen::Matrix3Xd pts = cube_corners();
    for (Eigen::Index i = 0; i < pts.cols(); ++i)
        pts.col(i) = A * pts.col(i) + t;

    const EllipsoidFit fit = fit_enclosing_ellipsoid(pts);
    const Mat3 expect_shape = (3.0 * A * A.transpose()).inverse();

    CHECK(fit.report.status == FitStatus::converged);
    CHECK((fit.ellipsoid.center - t).norm() < 1e-6);
    CHECK((fit.ellipsoid.shape - expect_shape).cwiseAbs().maxCoeff() < 1e-5);
    CHECK(fit.ellipsoid.semi_axes[0] == Catch::Approx(2.0 * std::sqrt(3.0)).margin(1e-5));
    CHECK(fit.ellipsoid.semi_axes[1] == Catch::Approx(std::sqrt(3.0)).margin(1e-5));
    CHECK(fit.ellipsoid.semi_axes[2] == Catch::Approx(std::sqrt(3.0)).margin(1e-5));
    // Major axis along R e1, up to the canonical sign.
    CHECK(std::abs(fit.ellipsoid.axes.col(0).dot(R.col(0))) > 1.0 - 1e-8);
}

TEST_CASE("dense surface samples recover the generating ellipsoid")
{
    const Mat3 R = Eigen::AngleAxisd(0.4, Vec3(0.2, 1.0, 0.3).normalized()).toRotationMatrix();
    const Mat3 A = R * Vec3(2.0, 1.0, 1.0).asDiagonal();
    const Vec3 t(0.1, 0.7, -0.4);
    const Eigen::Matrix3Xd pts = ellipsoid_surface(A, t, 1500, 2718);

    const EllipsoidFit fit = fit_enclosing_ellipsoid(pts);
    CHECK(fit.report.status == FitStatus::converged);
    CHECK((fit.ellipsoid.center - t).norm() < 0.02);
    CHECK(fit.ellipsoid.semi_axes[0] == Catch::Approx(2.0).margin(0.02));
    CHECK(fit.ellipsoid.semi_axes[1] == Catch::Approx(1.0).margin(0.02));
    CHECK(fit.ellipsoid.semi_axes[2] == Catch::Approx(1.0).margin(0.02));
    CHECK(std::abs(fit.ellipsoid.axes.col(0).dot(R.col(0))) > 1.0 - 1e-4);
}

TEST_CASE("workspace clouds: containment, certificate, and axis frame")
{
    const Eigen::Matrix3Xd pts = upper_cloud(2000, 1);
    const EllipsoidFit fit = fit_enclosing_ellipsoid(pts);
    const Ellipsoid& e = fit.ellipsoid;

    CHECK(fit.rank == 3);
    CHECK(fit.report.status == FitStatus::converged);
    CHECK(fit.report.duality_gap <= 1e-7);
    CHECK(fit.report.contained_fraction == 1.0);
    CHECK(fit.report.iterations > 0);

    double max_form = 0.0;
    for (Eigen::Index i = 0; i < pts.cols(); ++i) {
        CHECK(e.contains(pts.col(i), 1e-9));
        max_form = std::max(max_form, e.quadratic_form(pts.col(i)));
    }
    // The farthest point sits exactly on the boundary by construction.
    CHECK(max_form == Catch::Approx(1.0).margin(1e-9));

    CHECK(e.semi_axes[0] >= e.semi_axes[1]);
    CHECK(e.semi_axes[1] >= e.semi_axes[2]);
    CHECK(e.semi_axes[2] > 0.0);
    CHECK((e.axes.transpose() * e.axes - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("the fitted ellipsoid beats the naive bounding sphere")
{
    const Eigen::Matrix3Xd pts = upper_cloud(1500, 8);
    const EllipsoidFit fit = fit_enclosing_ellipsoid(pts);

    const Vec3 lo = pts.rowwise().minCoeff();
    const Vec3 hi = pts.rowwise().maxCoeff();
    const Vec3 mid = 0.5 * (lo + hi);
    const double radius = (pts.colwise() - mid).colwise().norm().maxCoeff();
    const double sphere_volume = 4.0 / 3.0 * pi * radius * radius * radius;
    CHECK(fit.ellipsoid.volume() <= sphere_volume * (1.0 + 1e-9));

    // Two contained points at distance d force a semi-major axis >= d/2.
    double dmax = 0.0;
    for (int d = 0; d < 3; ++d) {
        Eigen::Index imin, imax;
        pts.row(d).minCoeff(&imin);
        pts.row(d).maxCoeff(&imax);
        dmax = std::max(dmax, (pts.col(imax) - pts.col(imin)).norm());
    }
    CHECK(fit.ellipsoid.semi_axes[0] >= 0.5 * dmax - 1e-9);
}

TEST_CASE("fits are equivariant under rigid motions")
{
    const Eigen::Matrix3Xd pts = upper_cloud(400, 17);
    const Mat3 R = Eigen::AngleAxisd(1.1, Vec3(0.3, -0.5, 1.0).normalized()).toRotationMatrix();
    const Vec3 t(0.2, -0.1, 0.4);
    Eigen::Matrix3Xd moved(3, pts.cols());
    for (Eigen::Index i = 0; i < pts.cols(); ++i)
        moved.col(i) = R * pts.col(i) + t;

    const EllipsoidFit a = fit_enclosing_ellipsoid(pts);
    const EllipsoidFit b = fit_enclosing_ellipsoid(moved);

    CHECK((b.ellipsoid.center - (R * a.ellipsoid.center + t)).norm() < 1e-6);
    CHECK((b.ellipsoid.semi_axes - a.ellipsoid.semi_axes).cwiseAbs().maxCoeff() < 1e-6);
    CHECK(b.ellipsoid.volume() == Catch::Approx(a.ellipsoid.volume()).epsilon(1e-6));
}

TEST_CASE("planar clouds are fitted in-plane and extruded")
{
    // The support-mode workspace is exactly planar (x = const).
    DecisionVector x;
    x.l = {0.1, 0.4, 0.3, 0.2};
    BodyParams cfg;
    const ChainModel lower = build_srl_lower(x, cfg);
    const Eigen::Matrix3Xd pts = sample_workspace(lower, 1500, 33).pts;

    const double thick = 1e-3;
    const EllipsoidFit fit = fit_enclosing_ellipsoid(pts, MveeOptions{}, thick);
    const Ellipsoid& e = fit.ellipsoid;

    CHECK(fit.rank == 2);
    CHECK(fit.report.status == FitStatus::converged);
    CHECK(e.semi_axes[2] == Catch::Approx(thick).margin(1e-12));
    CHECK(e.semi_axes[1] > 10.0 * thick);
    CHECK(std::abs(e.axes.col(2).dot(Vec3::UnitX())) > 1.0 - 1e-9);
    for (Eigen::Index i = 0; i < pts.cols(); ++i)
        CHECK(e.contains(pts.col(i), 1e-9));
}

TEST_CASE("a tilted circle fits to a coin of the right radius")
{
    const Vec3 normal = Vec3(1.0, 1.0, 1.0).normalized();
    const Vec3 center(0.5, -0.3, 0.2);
    Vec3 u = normal.cross(Vec3::UnitX()).normalized();
    Vec3 v = normal.cross(u);
    Eigen::Matrix3Xd pts(3, 200);
    for (int i = 0; i < 200; ++i) {
        const double th = 2.0 * pi * i / 200.0;
        pts.col(i) = center + std::cos(th) * u + std::sin(th) * v;
    }

    const EllipsoidFit fit = fit_enclosing_ellipsoid(pts);
    CHECK(fit.rank == 2);
    CHECK(fit.ellipsoid.semi_axes[0] == Catch::Approx(1.0).margin(2e-3));
    CHECK(fit.ellipsoid.semi_axes[1] == Catch::Approx(1.0).margin(2e-3));
    CHECK(fit.ellipsoid.semi_axes[2] == Catch::Approx(1e-3).margin(1e-12));
    CHECK((fit.ellipsoid.center - center).norm() < 1e-3);
    CHECK(std::abs(fit.ellipsoid.axes.col(2).dot(normal)) > 1.0 - 1e-6);
}

TEST_CASE("degenerate clouds are rejected")
{
    Eigen::Matrix3Xd two(3, 2);
    two << 0.0, 1.0, 0.0, 1.0, 0.0, 1.0;
    CHECK_THROWS_AS(fit_enclosing_ellipsoid(two), DegenerateCloud);

    Eigen::Matrix3Xd line(3, 50);
    for (int i = 0; i < 50; ++i)
        line.col(i) = Vec3(0.1 * i, -0.2 * i, 0.05 * i);
    CHECK_THROWS_AS(fit_enclosing_ellipsoid(line), DegenerateCloud);

    Eigen::Matrix3Xd same = Eigen::Matrix3Xd::Zero(3, 20);
    same.colwise() += Vec3(1.0, 2.0, 3.0);
    CHECK_THROWS_AS(fit_enclosing_ellipsoid(same), DegenerateCloud);

    Eigen::Matrix3Xd bad = cube_corners();
    bad(1, 3) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(fit_enclosing_ellipsoid(bad), DegenerateCloud);
}

TEST_CASE("principal axes round-trip through the shape matrix")
{
    const Mat3 R = Eigen::AngleAxisd(0.9, Vec3(1.0, -0.4, 0.2).normalized()).toRotationMatrix();
    const Vec3 semi(3.0, 2.0, 1.0);
    const Mat3 shape = R * semi.array().square().inverse().matrix().asDiagonal() * R.transpose();
    const Vec3 center(1.0, 2.0, 3.0);

    const Ellipsoid e = axes_from_shape(center, shape);
    CHECK((e.center - center).norm() == 0.0);
    CHECK((e.semi_axes - semi).cwiseAbs().maxCoeff() < 1e-12);
    for (int i = 0; i < 3; ++i)
        CHECK(std::abs(e.axes.col(i).dot(R.col(i))) > 1.0 - 1e-12);

    const Mat3 rebuilt = e.axes * e.semi_axes.array().square().inverse().matrix().asDiagonal() * e.axes.transpose();
    CHECK((rebuilt - shape).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("axes_from_shape rejects non-SPD inputs")
{
    Mat3 asym = Mat3::Identity();
    asym(0, 1) = 0.5; // not mirrored
    CHECK_THROWS_AS(axes_from_shape(Vec3::Zero(), asym), NotSPD);

    CHECK_THROWS_AS(axes_from_shape(Vec3::Zero(), Mat3(-Mat3::Identity())), NotSPD);

    Mat3 singular = Vec3(1.0, 1.0, 0.0).asDiagonal();
    CHECK_THROWS_AS(axes_from_shape(Vec3::Zero(), singular), NotSPD);
}

TEST_CASE("iteration caps are reported honestly and containment still holds")
{
    const Eigen::Matrix3Xd pts = upper_cloud(800, 4);
    MveeOptions strangled;
    strangled.tol = 1e-12;
    strangled.max_iter = 3;

    const EllipsoidFit fit = fit_enclosing_ellipsoid(pts, strangled);
    CHECK(fit.report.status == FitStatus::max_iter_exceeded);
    CHECK(fit.report.duality_gap > strangled.tol);
    CHECK(fit.report.contained_fraction == 1.0);
    for (Eigen::Index i = 0; i < pts.cols(); ++i)
        CHECK(fit.ellipsoid.contains(pts.col(i), 1e-9));
}

TEST_CASE("a minimal four-point cloud touches the boundary everywhere")
{
    Eigen::Matrix3Xd simplex(3, 4);
    simplex.col(0) = Vec3(0.0, 0.0, 0.0);
    simplex.col(1) = Vec3(1.0, 0.0, 0.0);
    simplex.col(2) = Vec3(0.0, 1.0, 0.0);
    simplex.col(3) = Vec3(0.0, 0.0, 1.0);

    const EllipsoidFit fit = fit_enclosing_ellipsoid(simplex);
    CHECK(fit.report.status == FitStatus::converged);
    for (Eigen::Index i = 0; i < 4; ++i)
        CHECK(fit.ellipsoid.quadratic_form(simplex.col(i)) == Catch::Approx(1.0).margin(1e-6));
}

TEST_CASE("extremes-accelerated fit matches the full fit and certifies the whole cloud")
{
    RngSequence rng{RngStream(424242)};
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 300 + static_cast<int>(rng.uniform(0.0, 2700.0));
        Mat3 A;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c)
                A(r, c) = rng.uniform(-1.0, 1.0);
        A += 2.5 * Mat3::Identity(); // keep the transform well-conditioned
        const Vec3 t(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0));

        // Mixture of boundary and interior points.
        Eigen::Matrix3Xd pts = ellipsoid_surface(A, t, n, 77 + static_cast<std::uint64_t>(trial));
        for (int i = 0; i < n; i += 3)
            pts.col(i) *= rng.uniform(0.2, 0.999);

        const MveeResult<3> full = mvee_fit<3>(pts);
        const MveeResult<3> fast = mvee_fit_extremes<3>(pts);

        CHECK(fast.report.status == FitStatus::converged);
        CHECK(fast.report.duality_gap <= 1e-7);
        CHECK(fast.report.contained_fraction == 1.0);
        for (Eigen::Index i = 0; i < n; ++i) {
            const Vec3 d = pts.col(i) - fast.center;
            CHECK(d.dot(fast.shape * d) <= 1.0 + 1e-9);
        }
        const double scale = full.center.norm() + 1.0;
        CHECK((fast.center - full.center).norm() / scale < 1e-4);
        CHECK((fast.shape - full.shape).cwiseAbs().maxCoeff() / full.shape.norm() < 1e-4);
    }
}

TEST_CASE("extremes-accelerated fit falls back to the full fit on small clouds")
{
    const Eigen::Matrix3Xd pts = cube_corners();
    const MveeResult<3> full = mvee_fit<3>(pts);
    const MveeResult<3> fast = mvee_fit_extremes<3>(pts);
    CHECK(fast.center == full.center);
    CHECK(fast.shape == full.shape);
    CHECK(fast.report.iterations == full.report.iterations);
}
