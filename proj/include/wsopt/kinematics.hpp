#ifndef WSOPT_KINEMATICS_HPP
#define WSOPT_KINEMATICS_HPP

#include <wsopt/common.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <vector>

namespace wsopt {

    // Rigid transform (rotation + translation), the SE(3) element used
    // throughout. Composition is pose-on-the-right, matching homogeneous
    // matrix multiplication.
    struct Pose {
        Mat3 R = Mat3::Identity();
        Vec3 t = Vec3::Zero();

        static Pose Identity() { return Pose{}; }

        Pose operator*(const Pose& other) const
        {
            Pose out;
            out.R.noalias() = R * other.R;
            out.t.noalias() = R * other.t;
            out.t += t;
            return out;
        }

        Vec3 apply(const Vec3& p) const { return R * p + t; }

        Pose inverse() const
        {
            Pose out;
            out.R = R.transpose();
            out.t.noalias() = -(out.R * t);
            return out;
        }

        // Rotation sanity: orthonormal with determinant +1.
        bool is_valid(double tol = 1e-9) const
        {
            const Mat3 err = R.transpose() * R - Mat3::Identity();
            return err.cwiseAbs().maxCoeff() < tol && std::abs(R.determinant() - 1.0) < tol && t.allFinite();
        }

        Eigen::Matrix4d homogeneous() const
        {
            Eigen::Matrix4d H = Eigen::Matrix4d::Identity();
            H.topLeftCorner<3, 3>() = R;
            H.topRightCorner<3, 1>() = t;
            return H;
        }
    };

    inline Mat3 skew(const Vec3& w)
    {
        Mat3 S;
        S << 0.0, -w.z(), w.y(),
            w.z(), 0.0, -w.x(),
            -w.y(), w.x(), 0.0;
        return S;
    }

    // Rodrigues rotation about a unit axis.
    inline Mat3 rodrigues(const Vec3& axis, double angle)
    {
        const Mat3 K = skew(axis);
        return Mat3::Identity() + std::sin(angle) * K + (1.0 - std::cos(angle)) * (K * K);
    }

    // Unit twist of a revolute joint: omega is the (unit) axis direction,
    // v = -omega x q for any point q on the axis line.
    struct Twist {
        Vec3 omega = Vec3::UnitZ();
        Vec3 v = Vec3::Zero();

        static Twist revolute(const Vec3& axis, const Vec3& point)
        {
            const double norm = axis.norm();
            if (!(norm > 1e-12) || !axis.allFinite())
                throw InvalidConfig("revolute twist: axis must be a nonzero finite vector");
            Twist tw;
            tw.omega = axis / norm;
            tw.v = -tw.omega.cross(point);
            return tw;
        }
    };

    // Exponential of a revolute unit twist scaled by theta (closed form).
    // For the general screw the translation is
    //   (I - R)(omega x v) + omega omega^T v theta,
    // which reduces to a pure rotation about the axis line when omega^T v = 0.
    inline Pose exp_twist(const Twist& tw, double theta)
    {
        Pose g;
        g.R = rodrigues(tw.omega, theta);
        const Vec3 wxv = tw.omega.cross(tw.v);
        g.t = (Mat3::Identity() - g.R) * wxv + tw.omega * (tw.omega.dot(tw.v)) * theta;
        return g;
    }

    struct JointSpec {
        Vec3 axis = Vec3::UnitZ(); // unit direction in the base frame (zero pose)
        Vec3 point = Vec3::Zero(); // a point on the axis line (zero pose)
        double min_angle = -pi;
        double max_angle = pi;
        bool locked = false;
        double locked_angle = 0.0;

        Twist twist() const { return Twist::revolute(axis, point); }

        double effective_angle(double commanded) const { return locked ? locked_angle : commanded; }
    };

    // Serial chain in product-of-exponentials form:
    //   g(theta) = exp(xi_1 th_1) ... exp(xi_n th_n) * tool_zero.
    //
    // Builders additionally mark chains as "serial link" chains: every joint
    // sits at the tip of the previous straight link, so the endpoint is an
    // affine function of the link lengths. That metadata enables the scaled
    // sampling fast path (see workspace.hpp); the generic PoE path below works
    // for every chain.
    struct ChainModel {
        std::vector<JointSpec> joints;
        Pose tool_zero = Pose::Identity();

        // Serial-link metadata (set by builders; see link_vector(i) semantics).
        bool serial_links = false;
        Vec3 base_point = Vec3::Zero();               // position of joint 1
        std::vector<Vec3> link_vectors;               // link i: joint i -> joint i+1 (last: -> tool point)

        size_t joint_count() const { return joints.size(); }

        int dof() const
        {
            int n = 0;
            for (const auto& j : joints)
                if (!j.locked)
                    ++n;
            return n;
        }

        void validate() const
        {
            for (const auto& j : joints) {
                if (!(j.axis.norm() > 1e-12) || !j.axis.allFinite() || !j.point.allFinite())
                    throw InvalidConfig("chain: joint axis/point must be finite and nonzero");
                if (!(j.min_angle <= j.max_angle))
                    throw InvalidConfig("chain: joint limit min must not exceed max");
                if (j.locked && (j.locked_angle < j.min_angle || j.locked_angle > j.max_angle))
                    throw InvalidConfig("chain: locked angle outside joint limits");
            }
            if (serial_links && link_vectors.size() != joints.size())
                throw InvalidConfig("chain: serial-link metadata size mismatch");
        }
    };

    // Full-pose forward kinematics. angles must have one entry per joint
    // (locked joints ignore the commanded entry and use their lock angle).
    inline Pose forward_kinematics(const ChainModel& chain, const Eigen::VectorXd& angles)
    {
        if (static_cast<size_t>(angles.size()) != chain.joint_count())
            throw AngleCountMismatch("forward_kinematics: angle count != joint count");
        Pose g = Pose::Identity();
        for (size_t i = 0; i < chain.joints.size(); ++i) {
            const JointSpec& j = chain.joints[i];
            g = g * exp_twist(j.twist(), j.effective_angle(angles[static_cast<Eigen::Index>(i)]));
        }
        return g * chain.tool_zero;
    }

    inline Vec3 endpoint(const ChainModel& chain, const Eigen::VectorXd& angles)
    {
        return forward_kinematics(chain, angles).t;
    }

    // Largest possible distance of the endpoint from the first joint: total
    // path length of the serial links (reach envelope radius).
    inline double reach(const ChainModel& chain)
    {
        if (chain.serial_links) {
            double sum = 0.0;
            for (const Vec3& l : chain.link_vectors)
                sum += l.norm();
            return sum;
        }
        // Fallback: distance of the zero-pose tool point from the first axis point.
        const Vec3 p0 = chain.joints.empty() ? Vec3::Zero() : chain.joints.front().point;
        return (chain.tool_zero.t - p0).norm();
    }

} // namespace wsopt

#endif
