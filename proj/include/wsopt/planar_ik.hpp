#ifndef WSOPT_PLANAR_IK_HPP
#define WSOPT_PLANAR_IK_HPP

#include <wsopt/common.hpp>

#include <array>
#include <cmath>

namespace wsopt {

    // Closed-form inverse kinematics of the support-mode leg.
    //
    // With joints 1 and 4 locked the limb is a planar 2R linkage in the plane
    // spanned by the (rotated) lateral axis normal: a proximal link of length
    // a = l2 and a composite distal link, l3 followed by l4 bent at the lock
    // angle phi4. The composite acts as one rigid link of length
    // b = |l3 + l4 e^{i phi4}| whose direction leads joint angle th3 by delta.
    //
    // Coordinates: (y, z) in the hip frame, y in-plane horizontal, z up; the
    // zero pose points straight down (phi = -pi/2), so phi_thigh = th2 - pi/2.
    struct Planar2R {
        double a = 0.0;
        double b = 0.0;
        double delta = 0.0; // composite-link lead angle [rad]
        double th2_lo = -pi / 2.0, th2_hi = pi / 2.0;
        double th3_lo = 0.0, th3_hi = 5.0 * pi / 6.0;

        static Planar2R from_lengths(double l2, double l3, double l4, double phi4_lock,
                                     double th2_lo, double th2_hi, double th3_lo, double th3_hi)
        {
            Planar2R leg;
            leg.a = l2;
            const double by = l3 + l4 * std::cos(phi4_lock);
            const double bz = l4 * std::sin(phi4_lock);
            leg.b = std::hypot(by, bz);
            leg.delta = std::atan2(bz, by);
            leg.th2_lo = th2_lo;
            leg.th2_hi = th2_hi;
            leg.th3_lo = th3_lo;
            leg.th3_hi = th3_hi;
            return leg;
        }
    };

    struct Planar2RBranch {
        double th2 = 0.0;
        double th3 = 0.0;     // joint-3 angle
        double th3_eff = 0.0; // elbow angle of the composite linkage
        bool valid = false;
    };

    struct Planar2RSolution {
        std::array<Planar2RBranch, 2> branch{};
        bool reachable = false; // distance within the annulus, before limit checks

        bool any_valid() const { return branch[0].valid || branch[1].valid; }
    };

    inline double wrap_pi(double a)
    {
        a = std::fmod(a + pi, 2.0 * pi);
        if (a < 0.0)
            a += 2.0 * pi;
        return a - pi;
    }

    // Solve for the target (y, z) in the hip frame. Both elbow branches are
    // returned; a branch is valid only if both joint angles lie within limits.
    inline Planar2RSolution planar2r_solve(const Planar2R& leg, double y, double z)
    {
        Planar2RSolution sol;
        const double d2 = y * y + z * z;
        const double denom = 2.0 * leg.a * leg.b;
        if (!(denom > 0.0))
            return sol;
        double cos_eff = (d2 - leg.a * leg.a - leg.b * leg.b) / denom;
        if (cos_eff < -1.0 || cos_eff > 1.0) {
            // Allow roundoff at full extension / full fold.
            if (cos_eff > 1.0 && cos_eff < 1.0 + 1e-12)
                cos_eff = 1.0;
            else if (cos_eff < -1.0 && cos_eff > -1.0 - 1e-12)
                cos_eff = -1.0;
            else
                return sol;
        }
        sol.reachable = true;
        const double phi_t = std::atan2(z, y);
        const double eff = std::acos(cos_eff);
        int k = 0;
        for (double th3_eff : {eff, -eff}) {
            Planar2RBranch br;
            br.th3_eff = th3_eff;
            br.th3 = th3_eff - leg.delta;
            const double psi = std::atan2(leg.b * std::sin(th3_eff), leg.a + leg.b * std::cos(th3_eff));
            br.th2 = wrap_pi(phi_t - psi + pi / 2.0);
            br.valid = br.th3 >= leg.th3_lo && br.th3 <= leg.th3_hi && br.th2 >= leg.th2_lo && br.th2 <= leg.th2_hi;
            sol.branch[static_cast<size_t>(k++)] = br;
            if (eff == 0.0)
                break; // the two branches coincide at full extension
        }
        return sol;
    }

} // namespace wsopt

#endif
