#ifndef WSOPT_METRICS_HPP
#define WSOPT_METRICS_HPP

#include <wsopt/ellipsoid.hpp>

#include <cmath>

namespace wsopt {

    // Pairwise ellipsoid similarity metrics. Convention for the asymmetric
    // ones: the first argument is the candidate (limb) ellipsoid, the second
    // the reference. All four are >= 0 and identical ellipsoids score
    // (0, 0, 0, 1).

    inline double center_distance(const Ellipsoid& a, const Ellipsoid& b)
    {
        return (b.center - a.center).norm();
    }

    struct AxisAlignment {
        double value = 0.0;
        bool ambiguous = false; // near-tied leading semi-axes: direction ill-defined
    };

    // 1 - |cos angle| between the major axes. Axes are undirected lines, so
    // the absolute cosine makes the metric sign-invariant and maps to [0, 1].
    inline AxisAlignment major_axis_alignment(const Ellipsoid& a, const Ellipsoid& b, double tie_tol = 1e-9)
    {
        AxisAlignment out;
        const Vec3 u = a.axes.col(0);
        const Vec3 v = b.axes.col(0);
        const double denom = u.norm() * v.norm();
        out.value = denom > 0.0 ? 1.0 - std::abs(u.dot(v)) / denom : 1.0;
        out.ambiguous = (a.semi_axes[0] - a.semi_axes[1] < tie_tol * a.semi_axes[0]) ||
                        (b.semi_axes[0] - b.semi_axes[1] < tie_tol * b.semi_axes[0]);
        return out;
    }

    struct OblatenessSimilarity {
        double value = 0.0;
        bool clamped = false; // a near-spherical operand hit the lower clamp
    };

    // Flatness measure (a-b)(a-c)/a^2 for semi-axes a >= b >= c; zero for a
    // sphere, which is why the ratio is clamped below before taking the log.
    inline double oblateness(const Ellipsoid& e, double obl_eps, bool* clamped = nullptr)
    {
        const double a = e.semi_axes[0], b = e.semi_axes[1], c = e.semi_axes[2];
        const double raw = (a - b) * (a - c) / (a * a);
        if (clamped)
            *clamped = raw < obl_eps;
        return std::max(raw, obl_eps);
    }

    inline OblatenessSimilarity oblateness_similarity(const Ellipsoid& cand, const Ellipsoid& ref,
                                                      double obl_eps = 1e-6)
    {
        OblatenessSimilarity out;
        bool c1 = false, c2 = false;
        const double o_cand = oblateness(cand, obl_eps, &c1);
        const double o_ref = oblateness(ref, obl_eps, &c2);
        out.value = std::abs(std::log(o_ref / o_cand));
        out.clamped = c1 || c2;
        return out;
    }

    // Reference volume over candidate volume: shrinking the candidate
    // workspace inflates the metric.
    inline double volume_ratio(const Ellipsoid& cand, const Ellipsoid& ref)
    {
        return ref.volume() / cand.volume();
    }

    struct SimilarityBlock {
        Eigen::Vector4d f = Eigen::Vector4d::Zero(); // [center, axis, oblateness, volume]
        bool axis_ambiguous = false;
        bool obl_clamped = false;
    };

    inline SimilarityBlock similarity_block(const Ellipsoid& cand, const Ellipsoid& ref,
                                            double obl_eps = 1e-6, double tie_tol = 1e-9)
    {
        SimilarityBlock out;
        out.f[0] = center_distance(cand, ref);
        const AxisAlignment axis = major_axis_alignment(cand, ref, tie_tol);
        out.f[1] = axis.value;
        out.axis_ambiguous = axis.ambiguous;
        const OblatenessSimilarity obl = oblateness_similarity(cand, ref, obl_eps);
        out.f[2] = obl.value;
        out.obl_clamped = obl.clamped;
        out.f[3] = volume_ratio(cand, ref);
        return out;
    }

} // namespace wsopt

#endif
