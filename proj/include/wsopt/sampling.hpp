#ifndef WSOPT_SAMPLING_HPP
#define WSOPT_SAMPLING_HPP

#include <wsopt/rng.hpp>

#include <Eigen/Core>

#include <numeric>
#include <vector>

namespace wsopt {

    // Latin-hypercube sample of the box [lb, ub]: each dimension is split
    // into `count` strata, every stratum is used exactly once per dimension
    // (seeded permutation), and the point jitters uniformly inside its
    // stratum. Deterministic given the stream; columns are points.
    inline Eigen::MatrixXd latin_hypercube(const Eigen::VectorXd& lb, const Eigen::VectorXd& ub, int count,
                                           const RngStream& stream)
    {
        if (lb.size() != ub.size())
            throw LengthMismatch("latin_hypercube: bound length mismatch");
        if (count < 1)
            throw InvalidConfig("latin_hypercube: need at least one point");
        for (Eigen::Index d = 0; d < lb.size(); ++d)
            if (!(lb[d] <= ub[d]))
                throw InvalidConfig("latin_hypercube: lower bound exceeds upper bound");

        const Eigen::Index dim = lb.size();
        Eigen::MatrixXd pts(dim, count);
        std::vector<int> perm(static_cast<size_t>(count));
        for (Eigen::Index d = 0; d < dim; ++d) {
            std::iota(perm.begin(), perm.end(), 0);
            RngSequence shuffle(stream.sub(2 * static_cast<std::uint64_t>(d)));
            for (int i = count - 1; i > 0; --i) {
                const auto j = static_cast<int>(shuffle.below(static_cast<std::uint64_t>(i) + 1));
                std::swap(perm[static_cast<size_t>(i)], perm[static_cast<size_t>(j)]);
            }
            const RngStream jitter = stream.sub(2 * static_cast<std::uint64_t>(d) + 1);
            for (int j = 0; j < count; ++j) {
                const double u = jitter.u01(static_cast<std::uint64_t>(j));
                pts(d, j) = lb[d] + (ub[d] - lb[d]) * (perm[static_cast<size_t>(j)] + u) /
                                        static_cast<double>(count);
            }
        }
        return pts;
    }

} // namespace wsopt

#endif
