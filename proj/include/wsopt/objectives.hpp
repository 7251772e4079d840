#ifndef WSOPT_OBJECTIVES_HPP
#define WSOPT_OBJECTIVES_HPP

#include <wsopt/metrics.hpp>
#include <wsopt/planar_ik.hpp>

#include <cmath>
#include <limits>

namespace wsopt {

    // --- braced support force ---------------------------------------------

    // Vertical endpoint force the limb can sustain while braced against the
    // ground during a sit-to-stand transfer.
    //
    // Model: joints 1 and 4 locked, so the limb is the planar 2R leg of
    // planar_ik.hpp. The brace point sits on the ground at horizontal offset
    // c in front of the wearer, and the mount height sweeps a small pose set
    // from the seated to the standing value. At each pose the ground closure
    // is solved in closed form; a vertical force F at the brace point then
    // loads every in-plane joint with torque arm_i * F, where arm_i is the
    // horizontal distance from joint i to the brace point (the yaw joint's
    // vertical axis carries no moment from a vertical force). The pose
    // supports F up to min_i limit_i / |arm_i|, the better elbow branch is
    // used, and the weakest pose governs the reported force.
    //
    // Poses where every usable closure is kinematically singular (leg fully
    // straight or folded flat) are skipped and flagged; poses the leg cannot
    // reach at all contribute zero force, since the wearer cannot brace
    // there.
    struct SupportForceResult {
        double force = 0.0;
        bool singular_pose = false; // at least one pose was skipped as singular
        int poses_evaluated = 0;    // poses that produced a force bound
    };

    inline SupportForceResult sts_support_force(const DecisionVector& x, const BodyParams& cfg)
    {
        if (!decision_in_bounds(x))
            throw OutOfBounds("sts_support_force: design variables outside the search box");
        for (double t : cfg.torque_limits)
            if (!(t >= 0.0) || !std::isfinite(t))
                throw InvalidConfig("sts_support_force: torque limits must be finite and >= 0");

        const double l1 = x.l[0];
        const Planar2R leg =
            Planar2R::from_lengths(x.l[1], x.l[2], x.l[3], cfg.lower_locked[1], cfg.joint_limits_lo[1],
                                   cfg.joint_limits_hi[1], cfg.joint_limits_lo[2], cfg.joint_limits_hi[2]);

        const int poses = std::max(1, cfg.sts_pose_count);
        SupportForceResult out;
        double weakest = std::numeric_limits<double>::infinity();
        for (int k = 0; k < poses; ++k) {
            const double frac = poses == 1 ? 1.0 : static_cast<double>(k) / static_cast<double>(poses - 1);
            const double mount_height = cfg.sts_height_start + frac * (cfg.sts_height_end - cfg.sts_height_start);
            const double y_t = x.c;
            const double z_t = -(mount_height - l1); // brace point in the hip frame

            const Planar2RSolution sol = planar2r_solve(leg, y_t, z_t);
            if (!sol.any_valid()) {
                weakest = 0.0;
                ++out.poses_evaluated;
                continue;
            }

            double best = -1.0;
            bool skipped_singular = false;
            for (const Planar2RBranch& br : sol.branch) {
                if (!br.valid)
                    continue;
                if (std::abs(std::sin(br.th3_eff)) < 1e-9) {
                    skipped_singular = true;
                    continue;
                }
                const double knee_y = x.l[1] * std::sin(br.th2);
                const double ankle_y = knee_y + x.l[2] * std::sin(br.th2 + br.th3);
                const double arms[3] = {y_t, y_t - knee_y, y_t - ankle_y};
                double cap = std::numeric_limits<double>::infinity();
                for (int j = 0; j < 3; ++j)
                    cap = std::min(cap, cfg.torque_limits[static_cast<size_t>(j + 1)] /
                                            std::max(std::abs(arms[j]), 1e-9));
                best = std::max(best, cap);
            }
            if (best < 0.0) {
                // Every admissible closure was singular: skip the pose.
                out.singular_pose = true;
                continue;
            }
            weakest = std::min(weakest, best);
            ++out.poses_evaluated;
        }
        out.force = (out.poses_evaluated == 0 || !std::isfinite(weakest)) ? 0.0 : weakest;
        return out;
    }

    // Reciprocal force indicator: smaller is stronger. A limb that cannot
    // brace at all gets the big-cost sentinel instead of a division by zero.
    inline double support_force_objective(double force, double kappa)
    {
        return force > 0.0 ? kappa / force : big_cost;
    }

    // --- mass and inertia --------------------------------------------------

    // Structural mass penalty: linear density times the deviation of the
    // total link length from the preferred total.
    inline double relative_mass(const DecisionVector& x, const BodyParams& cfg)
    {
        return cfg.rho_lin * std::abs(x.total_length() - cfg.total_length_target);
    }

    // Moment of inertia about the first joint with the module masses lumped
    // at the link tips (link mass neglected next to the modules).
    inline double moment_of_inertia(const DecisionVector& x, const BodyParams& cfg)
    {
        double r = 0.0;
        double inertia = 0.0;
        for (size_t i = 0; i < 4; ++i) {
            r += x.l[i];
            inertia += cfg.module_masses[i] * r * r;
        }
        return inertia;
    }

    // --- profile, reference front, scalar cost -----------------------------

    inline constexpr int objective_count = 11;

    // The eleven sub-objectives of one design: four workspace-similarity
    // metrics for the manipulation mode (vs. the wearer's arm), four for the
    // support mode (vs. the cane), then force, mass, and inertia. The D
    // vector and the scalar cost are filled in once a reference front is
    // supplied (see score()).
    struct ObjectiveProfile {
        Eigen::Vector4d upper = Eigen::Vector4d::Zero();
        Eigen::Vector4d lower = Eigen::Vector4d::Zero();
        double f5 = 0.0;
        double f6 = 0.0;
        double f7 = 0.0;
        double support_force = 0.0;

        bool upper_axis_ambiguous = false;
        bool lower_axis_ambiguous = false;
        bool upper_obl_clamped = false;
        bool lower_obl_clamped = false;
        bool sts_singular_pose = false;

        Eigen::Matrix<double, 11, 1> D = Eigen::Matrix<double, 11, 1>::Zero();
        double phi = 0.0;
        bool scored = false;

        Eigen::Matrix<double, 11, 1> values() const
        {
            Eigen::Matrix<double, 11, 1> v;
            v << upper[0], upper[1], upper[2], upper[3], lower[0], lower[1], lower[2], lower[3], f5, f6, f7;
            return v;
        }
    };

    // Per-component reference values the distance vector is measured against.
    struct ReferenceFront {
        enum class Provenance {
            user_supplied,
            estimated
        };
        Eigen::Matrix<double, 11, 1> pf = Eigen::Matrix<double, 11, 1>::Zero();
        Provenance provenance = Provenance::user_supplied;
        int budget = 0;
        std::uint64_t seed = 0;
    };

    // Component distances to the reference, clamped at zero from below: a
    // candidate beating the reference on one component must not earn negative
    // distance, or the p-norm aggregation would be corrupted.
    inline Eigen::VectorXd distance_vector(const Eigen::VectorXd& values, const Eigen::VectorXd& pf)
    {
        if (values.size() != pf.size())
            throw LengthMismatch("distance_vector: value/reference length mismatch");
        return (values - pf).cwiseMax(0.0);
    }

    // Generational-distance aggregation: the length-normalized p-norm of the
    // component distances.
    inline double igd(const Eigen::VectorXd& D, double p = 2.0)
    {
        if (D.size() == 0)
            throw LengthMismatch("igd: empty distance vector");
        if (!(p >= 1.0))
            throw InvalidConfig("igd: order must be >= 1");
        double acc = 0.0;
        for (Eigen::Index i = 0; i < D.size(); ++i)
            acc += std::pow(std::abs(D[i]), p);
        return std::pow(acc, 1.0 / p) / static_cast<double>(D.size());
    }

    inline void score(ObjectiveProfile& profile, const ReferenceFront& front, double p = 2.0)
    {
        profile.D = distance_vector(profile.values(), front.pf);
        profile.phi = igd(profile.D, p);
        profile.scored = true;
    }

} // namespace wsopt

#endif
