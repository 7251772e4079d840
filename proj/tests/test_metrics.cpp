#include <catch2/catch_amalgamated.hpp>

#include <wsopt/metrics.hpp>
#include <wsopt/rng.hpp>

#include <cmath>

using namespace wsopt;

namespace {

    // Ellipsoid assembled directly from its principal-axes form; the metrics
    // only read center / semi_axes / axes / volume.
    Ellipsoid make(const Vec3& center, const Vec3& semi, const Mat3& R = Mat3::Identity())
    {
        Ellipsoid e;
        e.center = center;
        e.semi_axes = semi;
        e.axes = R;
        e.shape = R * semi.array().square().inverse().matrix().asDiagonal() * R.transpose();
        return e;
    }

    Mat3 rot(double angle, const Vec3& axis) { return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix(); }

} // namespace

TEST_CASE("an ellipsoid compared with itself scores (0, 0, 0, 1)")
{
    const Ellipsoid e = make(Vec3(1.0, 2.0, 3.0), Vec3(3.0, 2.0, 1.0), rot(0.8, Vec3(1.0, -1.0, 0.5)));
    const SimilarityBlock s = similarity_block(e, e);
    CHECK(s.f[0] == 0.0);
    CHECK(s.f[1] == 0.0);
    CHECK(s.f[2] == 0.0);
    CHECK(s.f[3] == 1.0);
    CHECK_FALSE(s.axis_ambiguous);
    CHECK_FALSE(s.obl_clamped);
}

TEST_CASE("center distance is the Euclidean gap and is symmetric")
{
    const Ellipsoid a = make(Vec3::Zero(), Vec3(2.0, 1.5, 1.0));
    const Ellipsoid b = make(Vec3(3.0, 4.0, 0.0), Vec3(2.0, 1.5, 1.0));
    CHECK(center_distance(a, b) == Catch::Approx(5.0).margin(1e-12));
    CHECK(center_distance(b, a) == Catch::Approx(5.0).margin(1e-12));
}

TEST_CASE("major-axis alignment: parallel, oblique, orthogonal")
{
    const Vec3 semi(3.0, 1.0, 0.5);
    const Ellipsoid along_x = make(Vec3::Zero(), semi);
    const Ellipsoid along_y = make(Vec3::Zero(), semi, rot(pi / 2.0, Vec3::UnitZ()));
    const Ellipsoid oblique = make(Vec3::Zero(), semi, rot(pi / 4.0, Vec3::UnitZ()));

    CHECK(major_axis_alignment(along_x, along_x).value == 0.0);
    CHECK(major_axis_alignment(along_x, along_y).value == Catch::Approx(1.0).margin(1e-12));
    CHECK(major_axis_alignment(along_x, oblique).value ==
          Catch::Approx(1.0 - std::sqrt(0.5)).margin(1e-12));

    // Axes are undirected: flipping one of them changes nothing.
    Ellipsoid flipped = along_y;
    flipped.axes.col(0) *= -1.0;
    CHECK(major_axis_alignment(along_x, flipped).value ==
          major_axis_alignment(along_x, along_y).value);
}

TEST_CASE("major-axis alignment flags near-tied leading axes")
{
    const Ellipsoid sphere = make(Vec3::Zero(), Vec3::Ones());
    const Ellipsoid cigar = make(Vec3::Zero(), Vec3(3.0, 1.0, 0.5));
    CHECK(major_axis_alignment(sphere, cigar).ambiguous);
    CHECK(major_axis_alignment(cigar, sphere).ambiguous);
    CHECK_FALSE(major_axis_alignment(cigar, cigar).ambiguous);
}

TEST_CASE("oblateness: analytic values, clamping, and scale invariance")
{
    const Ellipsoid two11 = make(Vec3::Zero(), Vec3(2.0, 1.0, 1.0));
    const Ellipsoid three11 = make(Vec3::Zero(), Vec3(3.0, 1.0, 1.0));
    const Ellipsoid sphere = make(Vec3::Zero(), Vec3::Ones());

    bool clamped = false;
    CHECK(oblateness(two11, 1e-6, &clamped) == Catch::Approx(0.25).margin(1e-15));
    CHECK_FALSE(clamped);
    CHECK(oblateness(three11, 1e-6) == Catch::Approx(4.0 / 9.0).margin(1e-15));
    CHECK(oblateness(sphere, 1e-6, &clamped) == 1e-6);
    CHECK(clamped);

    // The ratio is scale-free: a uniformly magnified ellipsoid is equally flat.
    const Ellipsoid big = make(Vec3::Zero(), Vec3(20.0, 10.0, 10.0));
    CHECK(oblateness(big, 1e-6) == Catch::Approx(oblateness(two11, 1e-6)).margin(1e-15));
}

TEST_CASE("oblateness similarity compares flatness on a log scale")
{
    const Ellipsoid two11 = make(Vec3::Zero(), Vec3(2.0, 1.0, 1.0));
    const Ellipsoid three11 = make(Vec3::Zero(), Vec3(3.0, 1.0, 1.0));

    const OblatenessSimilarity s = oblateness_similarity(two11, three11);
    CHECK(s.value == Catch::Approx(std::log(16.0 / 9.0)).margin(1e-12));
    CHECK_FALSE(s.clamped);

    // |log| makes the comparison direction-free.
    CHECK(oblateness_similarity(three11, two11).value == Catch::Approx(s.value).margin(1e-15));

    const Ellipsoid sphere = make(Vec3::Zero(), Vec3::Ones());
    const OblatenessSimilarity c = oblateness_similarity(sphere, two11);
    CHECK(c.clamped);
    CHECK(c.value == Catch::Approx(std::log(0.25 / 1e-6)).margin(1e-9));
}

TEST_CASE("volume ratio penalizes a shrinking candidate")
{
    const Ellipsoid unit = make(Vec3::Zero(), Vec3::Ones());
    const Ellipsoid twice = make(Vec3::Zero(), Vec3(2.0, 1.0, 1.0));
    CHECK(volume_ratio(unit, twice) == Catch::Approx(2.0).margin(1e-12));
    CHECK(volume_ratio(twice, unit) == Catch::Approx(0.5).margin(1e-12));

    Ellipsoid half = unit;
    half.semi_axes *= 0.5;
    CHECK(volume_ratio(half, twice) == Catch::Approx(16.0).margin(1e-12));
}

TEST_CASE("similarity block collects the four metrics and the quality flags")
{
    const Ellipsoid cand = make(Vec3(0.1, 0.0, 0.0), Vec3::Ones());
    const Ellipsoid ref = make(Vec3(0.1, 0.4, 0.0), Vec3(2.0, 1.0, 1.0), rot(0.3, Vec3::UnitY()));

    const SimilarityBlock s = similarity_block(cand, ref);
    CHECK(s.f[0] == Catch::Approx(0.4).margin(1e-12));
    CHECK(s.axis_ambiguous); // spherical candidate: direction meaningless
    CHECK(s.obl_clamped);    // spherical candidate: flatness clamped
    CHECK(s.f[3] == Catch::Approx(2.0).margin(1e-12));
}

TEST_CASE("metric ranges hold for random ellipsoid pairs")
{
    RngSequence rng{RngStream(6021)};
    for (int rep = 0; rep < 200; ++rep) {
        const auto random_ellipsoid = [&]() {
            Vec3 semi(rng.uniform(0.2, 3.0), rng.uniform(0.2, 3.0), rng.uniform(0.2, 3.0));
            std::sort(semi.data(), semi.data() + 3, std::greater<double>());
            const Vec3 axis(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
            const Mat3 R = axis.norm() > 1e-6 ? rot(rng.uniform(0.0, pi), axis) : Mat3::Identity();
            const Vec3 c(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
            return make(c, semi, R);
        };
        const Ellipsoid a = random_ellipsoid();
        const Ellipsoid b = random_ellipsoid();
        const SimilarityBlock s = similarity_block(a, b);
        CHECK(s.f[0] >= 0.0);
        CHECK(s.f[1] >= 0.0);
        CHECK(s.f[1] <= 1.0);
        CHECK(s.f[2] >= 0.0);
        CHECK(s.f[3] > 0.0);
        CHECK(s.f.allFinite());
    }
}
