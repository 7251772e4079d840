#ifndef WSOPT_PARAMS_HPP
#define WSOPT_PARAMS_HPP

#include <wsopt/common.hpp>

#include <array>
#include <cmath>

namespace wsopt {

    // Design variables of the limb: four link lengths [m] and the stance
    // offset c [m] of the brace point in front of (+) or behind (-) the user.
    struct DecisionVector {
        std::array<double, 4> l{0.25, 0.25, 0.25, 0.25};
        double c = 0.0;

        double total_length() const { return l[0] + l[1] + l[2] + l[3]; }

        Eigen::Matrix<double, 5, 1> to_vector() const
        {
            Eigen::Matrix<double, 5, 1> v;
            v << l[0], l[1], l[2], l[3], c;
            return v;
        }

        static DecisionVector from_vector(const Eigen::Matrix<double, 5, 1>& v)
        {
            DecisionVector x;
            x.l = {v[0], v[1], v[2], v[3]};
            x.c = v[4];
            return x;
        }
    };

    // Search box for the five design variables.
    inline Eigen::Matrix<double, 5, 1> decision_lower_bounds()
    {
        Eigen::Matrix<double, 5, 1> lb;
        lb << 0.1, 0.1, 0.1, 0.1, -0.5;
        return lb;
    }

    inline Eigen::Matrix<double, 5, 1> decision_upper_bounds()
    {
        Eigen::Matrix<double, 5, 1> ub;
        ub << 0.6, 0.6, 0.6, 0.6, 0.5;
        return ub;
    }

    inline bool decision_in_bounds(const DecisionVector& x, double slack = 0.0)
    {
        const auto v = x.to_vector();
        const auto lb = decision_lower_bounds();
        const auto ub = decision_upper_bounds();
        for (int i = 0; i < 5; ++i)
            if (!(v[i] >= lb[i] - slack && v[i] <= ub[i] + slack))
                return false;
        return true;
    }

    // Everything about the bodies involved: the limb chain layout, the two
    // reference chains (wearer's arm, cane), the mass/actuation model and the
    // support-task geometry. All fields have physical defaults and every one
    // can be overridden from the JSON config.
    struct BodyParams {
        // --- limb chain (waist-mounted, 4 revolute joints) ---
        Vec3 mount{0.0, 0.0, 0.0};
        std::array<Vec3, 4> joint_axes{Vec3::UnitZ(), Vec3::UnitX(), Vec3::UnitX(), Vec3::UnitX()};
        std::array<double, 4> joint_limits_lo{-pi, -pi / 2.0, 0.0, -pi / 2.0};
        std::array<double, 4> joint_limits_hi{pi, pi / 2.0, 5.0 * pi / 6.0, pi / 2.0};
        // Lock angles used by the support (lower) mode: joint 1 and joint 4.
        std::array<double, 2> lower_locked{0.0, 0.0};

        // --- reference: wearer's arm (3 shoulder axes + elbow) ---
        Vec3 shoulder{0.18, 0.0, 0.45};
        double upper_arm = 0.30;
        double forearm = 0.33; // includes the hand
        std::array<Vec3, 4> arm_axes{Vec3::UnitZ(), Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitX()};
        std::array<double, 4> arm_limits_lo{-1.0, -0.7, -1.2, 0.0};
        std::array<double, 4> arm_limits_hi{2.0, 2.9, 1.2, 2.53};

        // --- reference: cane (2-DoF pivot at the hand) ---
        Vec3 cane_pivot{0.18, 0.10, -0.15};
        double cane_length = 0.85;
        double cane_sweep_sagittal = pi / 6.0; // +/- about the lateral axis
        double cane_sweep_lateral = pi / 12.0; // +/- about the fore-aft axis

        // --- mass / actuation model ---
        double total_length_target = 0.9; // preferred total limb length L0 [m]
        double rho_lin = 0.208;           // structural linear density [kg/m]
        // Lumped module masses at the tips of links 1..4 [kg].
        std::array<double, 4> module_masses{0.521, 1.0, 0.521, 0.3};
        // Rated torque per joint [N m]; proximal joints carry the larger motors.
        std::array<double, 4> torque_limits{38.0, 38.0, 8.3, 8.3};
        double kappa = 100.0; // required support force scale [N]

        // --- support task / ground geometry ---
        double ground_offset = 0.95; // mount height above ground when standing [m]
        bool ground_filter = true;   // apply the ground-feasibility filter to the support workspace
        double sts_height_start = 0.55; // mount height at the seated pose [m]
        double sts_height_end = 0.95;   // mount height at the standing pose [m]
        int sts_pose_count = 11;

        // --- numeric guards ---
        double obl_eps = 1e-6;       // lower clamp for the oblateness ratio
        double min_thickness = 1e-3; // out-of-plane semi-axis for planar clouds [m]
    };

    struct SamplingParams {
        int n = 10000;     // samples for reporting-quality workspaces
        int n_opt = 2000;  // samples inside the optimization loop
    };

    struct MveeOptions {
        double tol = 1e-7; // relative duality-gap target
        int max_iter = 10000;
    };

} // namespace wsopt

#endif
