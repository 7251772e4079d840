#ifndef WSOPT_WORKSPACE_HPP
#define WSOPT_WORKSPACE_HPP

#include <wsopt/builders.hpp>
#include <wsopt/parallel.hpp>
#include <wsopt/planar_ik.hpp>
#include <wsopt/rng.hpp>

#include <string>
#include <vector>

namespace wsopt {

    struct PointCloud {
        Eigen::Matrix3Xd pts;
        std::uint64_t seed = 0;
        std::string label;

        Eigen::Index size() const { return pts.cols(); }
    };

    // Joint-angle draw for sample s: locked joints consume their lock angle,
    // free joints draw uniformly within limits. The draw is keyed by
    // (seed, sample, joint) only, so it is identical across thread counts,
    // across chains that share a joint layout, and across sample counts
    // (the first 100 samples of an n=10000 run equal an n=100 run).
    inline constexpr std::uint64_t joint_stride = 16;

    inline double sampled_angle(const JointSpec& j, const RngStream& stream, std::uint64_t sample, std::uint64_t joint)
    {
        if (j.locked)
            return j.locked_angle;
        return stream.uniform(sample * joint_stride + joint, j.min_angle, j.max_angle);
    }

    // Monte Carlo workspace: endpoint positions under i.i.d. uniform joint
    // angles, via the generic product-of-exponentials path.
    inline PointCloud sample_workspace(const ChainModel& chain, int n, std::uint64_t seed, int threads = 1)
    {
        if (n < 1)
            throw InvalidConfig("sample_workspace: n must be >= 1");
        if (chain.joint_count() > joint_stride)
            throw InvalidConfig("sample_workspace: too many joints");
        chain.validate();
        const RngStream stream(seed);
        PointCloud cloud;
        cloud.seed = seed;
        cloud.pts.resize(3, n);
        const auto nj = chain.joint_count();
        parallel_for(0, n, threads, [&](int s) {
            Eigen::VectorXd th(static_cast<Eigen::Index>(nj));
            for (size_t j = 0; j < nj; ++j)
                th[static_cast<Eigen::Index>(j)] = sampled_angle(chain.joints[j], stream,
                                                                 static_cast<std::uint64_t>(s), j);
            cloud.pts.col(s) = endpoint(chain, th);
        });
        return cloud;
    }

    // --- ground-feasibility filter for the support mode -------------------

    // Geometry of the support filter, extracted from a support-mode chain:
    // the leg plane (normal = rotated joint-2 axis), the hip point, and the
    // planar 2R closure model.
    struct SupportGeometry {
        Vec3 hip = Vec3::Zero();
        Vec3 plane_y = Vec3::UnitY(); // in-plane horizontal unit vector
        Planar2R leg;

        static SupportGeometry from_chain(const ChainModel& chain)
        {
            if (!chain.serial_links || chain.joint_count() != 4)
                throw InvalidConfig("support geometry: expected a 4-joint serial-link chain");
            if (!chain.joints[0].locked || !chain.joints[3].locked)
                throw InvalidConfig("support geometry: joints 1 and 4 must be locked");
            SupportGeometry g;
            const Mat3 R1 = rodrigues(chain.joints[0].axis, chain.joints[0].locked_angle);
            g.hip = chain.base_point + R1 * chain.link_vectors[0];
            const Vec3 normal = R1 * chain.joints[1].axis;
            const Vec3 y_dir = Vec3::UnitZ().cross(normal);
            if (y_dir.norm() < 1e-9)
                throw InvalidConfig("support geometry: joint-2 axis must not be vertical");
            g.plane_y = y_dir.normalized();
            g.leg = Planar2R::from_lengths(chain.link_vectors[1].norm(), chain.link_vectors[2].norm(),
                                           chain.link_vectors[3].norm(), chain.joints[3].locked_angle,
                                           chain.joints[1].min_angle, chain.joints[1].max_angle,
                                           chain.joints[2].min_angle, chain.joints[2].max_angle);
            return g;
        }
    };

    // A sampled endpoint is usable for ground support only if it is above the
    // ground plane and the leg can close onto the ground point below it
    // within joint limits.
    inline bool support_feasible(const SupportGeometry& g, const Vec3& p, double ground_offset)
    {
        if (p.z() < -ground_offset)
            return false;
        const double y = g.plane_y.dot(p - g.hip);
        const double z_target = -ground_offset - g.hip.z();
        return planar2r_solve(g.leg, y, z_target).any_valid();
    }

    // Support-mode workspace: same draws as sample_workspace (same seed gives
    // a subset), with infeasible samples removed. With the filter disabled the
    // result is identical to sample_workspace.
    inline PointCloud reduced_workspace(const ChainModel& chain, const BodyParams& cfg, int n, std::uint64_t seed,
                                        int threads = 1)
    {
        PointCloud cloud = sample_workspace(chain, n, seed, threads);
        if (!cfg.ground_filter)
            return cloud;
        const SupportGeometry g = SupportGeometry::from_chain(chain);
        Eigen::Matrix3Xd kept(3, cloud.pts.cols());
        Eigen::Index m = 0;
        for (Eigen::Index i = 0; i < cloud.pts.cols(); ++i)
            if (support_feasible(g, cloud.pts.col(i), cfg.ground_offset))
                kept.col(m++) = cloud.pts.col(i);
        if (m == 0)
            throw EmptyWorkspace("reduced_workspace: no sample survives the ground-feasibility filter");
        cloud.pts = kept.leftCols(m);
        return cloud;
    }

    // --- common-random-numbers fast path ----------------------------------

    // Per-sample rotated unit link directions. For builder chains every joint
    // axis passes through the chain point, so the endpoint is affine in the
    // link lengths:
    //   p_s(l) = base + sum_k l_k * dir_k(s).
    // One tensor per (chain layout, seed, n) serves every candidate length
    // vector; rebuilding the cloud for a candidate is a 3xN axpy chain.
    struct LinkTensor {
        Vec3 base = Vec3::Zero();
        std::vector<Eigen::Matrix3Xd> dirs; // one 3 x n block per link

        Eigen::Index samples() const { return dirs.empty() ? 0 : dirs.front().cols(); }

        // Cloud for the given link lengths (must match the link count).
        void points_into(const std::vector<double>& lengths, Eigen::Matrix3Xd& out) const
        {
            if (lengths.size() != dirs.size())
                throw LengthMismatch("LinkTensor::points: length count != link count");
            out.resize(3, samples());
            out.setZero();
            for (size_t k = 0; k < dirs.size(); ++k)
                out.noalias() += lengths[k] * dirs[k];
            out.colwise() += base;
        }

        Eigen::Matrix3Xd points(const std::vector<double>& lengths) const
        {
            Eigen::Matrix3Xd out;
            points_into(lengths, out);
            return out;
        }
    };

    inline LinkTensor build_link_tensor(const ChainModel& chain, int n, std::uint64_t seed, int threads = 1)
    {
        if (!chain.serial_links)
            throw InvalidConfig("build_link_tensor: chain lacks serial-link metadata");
        if (n < 1)
            throw InvalidConfig("build_link_tensor: n must be >= 1");
        chain.validate();
        const RngStream stream(seed);
        const size_t nj = chain.joint_count();
        LinkTensor tensor;
        tensor.base = chain.base_point;
        tensor.dirs.assign(nj, Eigen::Matrix3Xd(3, n));
        std::vector<Vec3> unit_dirs(nj);
        for (size_t k = 0; k < nj; ++k) {
            const double len = chain.link_vectors[k].norm();
            unit_dirs[k] = len > 1e-12 ? Vec3(chain.link_vectors[k] / len) : Vec3::Zero();
        }
        parallel_for(0, n, threads, [&](int s) {
            Mat3 R = Mat3::Identity();
            for (size_t j = 0; j < nj; ++j) {
                const double th = sampled_angle(chain.joints[j], stream, static_cast<std::uint64_t>(s), j);
                R = R * rodrigues(chain.joints[j].axis, th);
                tensor.dirs[j].col(s) = R * unit_dirs[j];
            }
        });
        return tensor;
    }

} // namespace wsopt

#endif
