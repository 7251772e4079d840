#ifndef WSOPT_ELLIPSOID_HPP
#define WSOPT_ELLIPSOID_HPP

#include <wsopt/mvee.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>

namespace wsopt {

    // Ellipsoid in both algebraic and principal-axes form.
    // semi_axes is sorted descending; axes.col(i) is the unit direction of
    // semi_axes[i]. Axis signs are canonicalized (largest component positive)
    // so serialized output is reproducible.
    struct Ellipsoid {
        Vec3 center = Vec3::Zero();
        Mat3 shape = Mat3::Identity();
        Vec3 semi_axes = Vec3::Ones();
        Mat3 axes = Mat3::Identity();

        double volume() const { return 4.0 / 3.0 * pi * semi_axes.prod(); }

        double quadratic_form(const Vec3& p) const
        {
            const Vec3 d = p - center;
            return d.dot(shape * d);
        }

        bool contains(const Vec3& p, double tol = 1e-12) const { return quadratic_form(p) <= 1.0 + tol; }
    };

    namespace detail {

        inline void canonicalize_sign(Eigen::Ref<Vec3> v)
        {
            int imax = 0;
            v.cwiseAbs().maxCoeff(&imax);
            if (v[imax] < 0.0)
                v = -v;
        }

    } // namespace detail

    // Principal-axes decomposition of a shape matrix: semi-axis lengths are
    // the inverse square roots of the eigenvalues. Throws NotSPD when the
    // matrix is not symmetric positive definite.
    inline Ellipsoid axes_from_shape(const Vec3& center, const Mat3& shape)
    {
        const double scale = std::max(1.0, shape.cwiseAbs().maxCoeff());
        if ((shape - shape.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale)
            throw NotSPD("axes_from_shape: shape matrix is not symmetric");
        Eigen::SelfAdjointEigenSolver<Mat3> es(shape);
        if (es.info() != Eigen::Success)
            throw NotSPD("axes_from_shape: eigendecomposition failed");
        const Vec3 ev = es.eigenvalues(); // ascending
        if (!(ev.minCoeff() > 0.0))
            throw NotSPD("axes_from_shape: shape matrix is not positive definite");
        Ellipsoid e;
        e.center = center;
        e.shape = 0.5 * (shape + shape.transpose());
        // Ascending eigenvalues give descending semi-axes in the same order.
        for (int i = 0; i < 3; ++i) {
            e.semi_axes[i] = 1.0 / std::sqrt(ev[i]);
            e.axes.col(i) = es.eigenvectors().col(i);
            detail::canonicalize_sign(e.axes.col(i));
        }
        return e;
    }

    // Assemble a 3-D ellipsoid from a 2-D fit expressed in the orthonormal
    // in-plane basis (b0, b1) anchored at origin: the two in-plane semi-axes
    // come from the fitted shape, the out-of-plane one is min_thickness.
    inline Ellipsoid extrude_planar_fit(const Vec3& origin, const Vec3& b0, const Vec3& b1,
                                        const MveeResult<2>& fit, double min_thickness)
    {
        if (!(min_thickness > 0.0))
            throw InvalidConfig("extrude_planar_fit: thickness must be positive");
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(fit.shape);
        if (es.info() != Eigen::Success || !(es.eigenvalues().minCoeff() > 0.0))
            throw NotSPD("extrude_planar_fit: planar shape not positive definite");

        const Vec3 normal = b0.cross(b1).normalized();
        std::array<std::pair<double, Vec3>, 3> axes;
        for (int i = 0; i < 2; ++i) {
            // Ascending eigenvalues: index 0 is the larger in-plane semi-axis.
            const Eigen::Vector2d v = es.eigenvectors().col(i);
            axes[static_cast<size_t>(i)] = {1.0 / std::sqrt(es.eigenvalues()[i]), v[0] * b0 + v[1] * b1};
        }
        axes[2] = {min_thickness, normal};
        std::sort(axes.begin(), axes.end(), [](const auto& a, const auto& b) { return a.first > b.first; });

        Ellipsoid e;
        e.center = origin + fit.center[0] * b0 + fit.center[1] * b1;
        for (int i = 0; i < 3; ++i) {
            e.semi_axes[i] = axes[static_cast<size_t>(i)].first;
            Vec3 dir = axes[static_cast<size_t>(i)].second.normalized();
            detail::canonicalize_sign(dir);
            e.axes.col(i) = dir;
        }
        e.shape = e.axes * e.semi_axes.array().square().inverse().matrix().asDiagonal() * e.axes.transpose();
        e.shape = 0.5 * (e.shape + e.shape.transpose());
        return e;
    }

    struct EllipsoidFit {
        Ellipsoid ellipsoid;
        FitReport report;
        int rank = 3; // affine rank of the input cloud (2 = fitted in-plane)
    };

    // Fit a workspace cloud, dispatching on affine rank: full-rank clouds get
    // the 3-D solver; planar clouds (the support-mode workspace is exactly
    // planar) are fitted in-plane and extruded by min_thickness out of plane.
    // Rank < 2 clouds cannot support an ellipsoid and raise DegenerateCloud.
    inline EllipsoidFit fit_enclosing_ellipsoid(const Eigen::Matrix3Xd& pts,
                                                const MveeOptions& opts = MveeOptions{},
                                                double min_thickness = 1e-3)
    {
        if (pts.cols() < 3)
            throw DegenerateCloud("fit_enclosing_ellipsoid: need at least 3 points");
        if (!pts.allFinite())
            throw DegenerateCloud("fit_enclosing_ellipsoid: cloud contains non-finite coordinates");
        Mat3 scatter;
        Vec3 mu;
        const int rank = detail::affine_rank<3>(pts, &scatter, &mu);
        EllipsoidFit out;
        out.rank = rank;
        if (rank >= 3) {
            const MveeResult<3> fit = mvee_fit<3>(pts, opts);
            out.ellipsoid = axes_from_shape(fit.center, fit.shape);
            out.report = fit.report;
            return out;
        }
        if (rank < 2)
            throw DegenerateCloud("fit_enclosing_ellipsoid: cloud is collinear or a single point");

        // Planar path: project onto the two dominant scatter directions.
        Eigen::SelfAdjointEigenSolver<Mat3> es(scatter);
        Eigen::Matrix<double, 3, 2> basis;
        basis.col(0) = es.eigenvectors().col(2); // largest
        basis.col(1) = es.eigenvectors().col(1);
        Eigen::Matrix2Xd flat = basis.transpose() * (pts.colwise() - mu);
        const MveeResult<2> fit = mvee_fit<2>(flat, opts);
        out.ellipsoid = extrude_planar_fit(mu, basis.col(0), basis.col(1), fit, min_thickness);
        out.report = fit.report;
        return out;
    }

} // namespace wsopt

#endif
