#ifndef WSOPT_BUILDERS_HPP
#define WSOPT_BUILDERS_HPP

#include <wsopt/kinematics.hpp>
#include <wsopt/params.hpp>

#include <string>

namespace wsopt {

    // The four workspace sources the pipeline compares.
    enum class Mode {
        srl_upper, // limb in manipulation service, all four joints free
        srl_lower, // limb in support service, joints 1 and 4 locked
        human_arm, // reference: wearer's arm endpoint
        cane       // reference: cane tip
    };

    inline std::string to_string(Mode m)
    {
        switch (m) {
        case Mode::srl_upper: return "srl_upper";
        case Mode::srl_lower: return "srl_lower";
        case Mode::human_arm: return "human_arm";
        case Mode::cane: return "cane";
        }
        return "?";
    }

    inline Mode mode_from_string(const std::string& s)
    {
        if (s == "srl_upper") return Mode::srl_upper;
        if (s == "srl_lower") return Mode::srl_lower;
        if (s == "human_arm") return Mode::human_arm;
        if (s == "cane") return Mode::cane;
        throw InvalidConfig("unknown mode '" + s + "' (expected srl_upper|srl_lower|human_arm|cane)");
    }

    namespace detail {

        // Chains are assembled joint-by-joint down a path of straight links:
        // joint i sits at the end of link i-1, its axis passes through that
        // point, and the zero pose is the straight configuration. This is what
        // makes the endpoint affine in the link lengths.
        struct SerialChainBuilder {
            ChainModel chain;
            Vec3 cursor;

            explicit SerialChainBuilder(const Vec3& base)
            {
                chain.serial_links = true;
                chain.base_point = base;
                cursor = base;
            }

            void add_joint(const Vec3& axis, double lo, double hi, bool locked = false, double locked_angle = 0.0)
            {
                JointSpec j;
                const double norm = axis.norm();
                if (!(norm > 1e-12) || !axis.allFinite())
                    throw InvalidConfig("chain builder: joint axis must be nonzero");
                j.axis = axis / norm;
                j.point = cursor;
                j.min_angle = lo;
                j.max_angle = hi;
                j.locked = locked;
                j.locked_angle = locked_angle;
                chain.joints.push_back(j);
                chain.link_vectors.push_back(Vec3::Zero()); // filled by add_link
            }

            void add_link(const Vec3& v)
            {
                if (chain.joints.empty())
                    throw InvalidConfig("chain builder: link before first joint");
                chain.link_vectors.back() += v;
                cursor += v;
            }

            ChainModel finish()
            {
                chain.tool_zero = Pose::Identity();
                chain.tool_zero.t = cursor;
                chain.validate();
                return chain;
            }
        };

    } // namespace detail

    // Manipulation-mode limb: joint 1 about the vertical at the waist mount,
    // joints 2-4 about the lateral axis, links hanging straight down at zero.
    inline ChainModel build_srl_upper(const DecisionVector& x, const BodyParams& cfg)
    {
        if (!decision_in_bounds(x))
            throw OutOfBounds("build_srl_upper: design variables outside the search box");
        detail::SerialChainBuilder b(cfg.mount);
        for (int i = 0; i < 4; ++i) {
            b.add_joint(cfg.joint_axes[static_cast<size_t>(i)], cfg.joint_limits_lo[static_cast<size_t>(i)],
                        cfg.joint_limits_hi[static_cast<size_t>(i)]);
            b.add_link(Vec3(0.0, 0.0, -x.l[static_cast<size_t>(i)]));
        }
        return b.finish();
    }

    // Support-mode limb: same chain with the yaw joint and the distal pitch
    // joint locked, leaving a planar 2-DoF leg.
    inline ChainModel build_srl_lower(const DecisionVector& x, const BodyParams& cfg)
    {
        ChainModel chain = build_srl_upper(x, cfg);
        chain.joints[0].locked = true;
        chain.joints[0].locked_angle = cfg.lower_locked[0];
        chain.joints[3].locked = true;
        chain.joints[3].locked_angle = cfg.lower_locked[1];
        chain.validate();
        return chain;
    }

    // Wearer's arm: three concurrent shoulder axes (zero-length links between
    // them) plus the elbow; the hand point is the endpoint.
    inline ChainModel build_human_arm(const BodyParams& cfg)
    {
        if (!(cfg.upper_arm > 0.0) || !(cfg.forearm > 0.0))
            throw InvalidConfig("build_human_arm: segment lengths must be positive");
        detail::SerialChainBuilder b(cfg.shoulder);
        for (int i = 0; i < 3; ++i)
            b.add_joint(cfg.arm_axes[static_cast<size_t>(i)], cfg.arm_limits_lo[static_cast<size_t>(i)],
                        cfg.arm_limits_hi[static_cast<size_t>(i)]);
        b.add_link(Vec3(0.0, 0.0, -cfg.upper_arm));
        b.add_joint(cfg.arm_axes[3], cfg.arm_limits_lo[3], cfg.arm_limits_hi[3]);
        b.add_link(Vec3(0.0, 0.0, -cfg.forearm));
        return b.finish();
    }

    // Cane: a stick pivoting about the hand point, swept over a small solid
    // angle; the tip is the endpoint.
    inline ChainModel build_cane_model(const BodyParams& cfg)
    {
        if (!(cfg.cane_length > 0.0))
            throw InvalidConfig("build_cane_model: cane length must be positive");
        if (cfg.cane_sweep_sagittal < 0.0 || cfg.cane_sweep_lateral < 0.0)
            throw InvalidConfig("build_cane_model: sweep half-angles must be non-negative");
        detail::SerialChainBuilder b(cfg.cane_pivot);
        b.add_joint(Vec3::UnitX(), -cfg.cane_sweep_sagittal, cfg.cane_sweep_sagittal);
        b.add_joint(Vec3::UnitY(), -cfg.cane_sweep_lateral, cfg.cane_sweep_lateral);
        b.add_link(Vec3(0.0, 0.0, -cfg.cane_length));
        return b.finish();
    }

    inline ChainModel build_chain(Mode mode, const DecisionVector& x, const BodyParams& cfg)
    {
        switch (mode) {
        case Mode::srl_upper: return build_srl_upper(x, cfg);
        case Mode::srl_lower: return build_srl_lower(x, cfg);
        case Mode::human_arm: return build_human_arm(cfg);
        case Mode::cane: return build_cane_model(cfg);
        }
        throw InvalidConfig("build_chain: unknown mode");
    }

} // namespace wsopt

#endif
