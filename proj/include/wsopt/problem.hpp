#ifndef WSOPT_PROBLEM_HPP
#define WSOPT_PROBLEM_HPP

#include <wsopt/objectives.hpp>
#include <wsopt/sampling.hpp>
#include <wsopt/workspace.hpp>

#include <cmath>
#include <vector>

namespace wsopt {

    // Every random draw in the pipeline flows from one master seed combined
    // with a fixed role tag, so the reference, optimization, reporting, and
    // front-estimation draws are reproducible and never collide.
    namespace seed_role {
        inline constexpr std::uint64_t arm_reference = 0x11;
        inline constexpr std::uint64_t cane_reference = 0x22;
        inline constexpr std::uint64_t optimization = 0x33;
        inline constexpr std::uint64_t reporting = 0x44;
        inline constexpr std::uint64_t front_estimate = 0x55;
        inline constexpr std::uint64_t solver = 0x66;
    } // namespace seed_role

    inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t role)
    {
        return rng::combine(rng::mix64(master), role);
    }

    struct EvalSettings {
        SamplingParams sampling;
        MveeOptions mvee;     // reference fits and reporting-quality fits
        MveeOptions mvee_opt; // in-loop candidate fits
        std::uint64_t seed = 1;
        int threads = 1;
        double igd_order = 2.0;
    };

    // Evaluates the eleven sub-objectives of a candidate design.
    //
    // Construction samples and fits the two reference workspaces (wearer's
    // arm for the manipulation mode, cane for the support mode) once, and
    // precomputes the common-random-numbers link tensors at n_opt samples:
    // every candidate is evaluated under the same joint-angle draws, so the
    // objective landscape seen by the optimizer has no resampling noise.
    //
    // evaluate() is the fast in-loop path (link-tensor rebuild, planar
    // support fit in the leg plane). evaluate_report() re-runs the full
    // generic pipeline (fresh chains, n samples, rank-dispatched fit) and is
    // used for final reporting; pointed at the optimization seed role and
    // sample count it doubles as an independent cross-check of the fast path.
    class SrlEvaluator {
    public:
        SrlEvaluator(const BodyParams& cfg, const EvalSettings& settings) : cfg_(cfg), s_(settings)
        {
            if (s_.sampling.n < 4 || s_.sampling.n_opt < 4)
                throw InvalidConfig("evaluator: need at least 4 workspace samples");
            if (s_.threads < 1)
                throw InvalidConfig("evaluator: thread count must be >= 1");
            prepare();
        }

        const BodyParams& body() const { return cfg_; }
        const EvalSettings& settings() const { return s_; }
        const Ellipsoid& arm_reference() const { return ref_arm_; }
        const Ellipsoid& cane_reference() const { return ref_cane_; }
        bool planar_support_path() const { return lower_fast_; }

        ObjectiveProfile evaluate(const DecisionVector& x) const
        {
            if (!decision_in_bounds(x))
                throw OutOfBounds("evaluate: design variables outside the search box");
            ObjectiveProfile prof;

            // Manipulation mode vs. the wearer's arm.
            Eigen::Matrix3Xd pts;
            upper_tensor_.points_into({x.l[0], x.l[1], x.l[2], x.l[3]}, pts);
            const MveeResult<3> fit3 = mvee_fit_extremes<3>(pts, s_.mvee_opt, 12, 24);
            const Ellipsoid e_up = axes_from_shape(fit3.center, fit3.shape);
            fill_block(prof, e_up, ref_arm_, /*upper=*/true);

            // Support mode vs. the cane.
            const Ellipsoid e_lo = lower_fast_ ? support_fit_planar(x) : support_fit_generic(x, s_.sampling.n_opt,
                                                                                            opt_seed(), s_.mvee_opt);
            fill_block(prof, e_lo, ref_cane_, /*upper=*/false);

            fill_scalars(prof, x);
            return prof;
        }

        ObjectiveProfile evaluate_report(const DecisionVector& x) const
        {
            return evaluate_full(x, s_.sampling.n, derive_seed(s_.seed, seed_role::reporting));
        }

        ObjectiveProfile evaluate_full(const DecisionVector& x, int n, std::uint64_t sample_seed) const
        {
            if (!decision_in_bounds(x))
                throw OutOfBounds("evaluate: design variables outside the search box");
            ObjectiveProfile prof;

            const ChainModel upper = build_srl_upper(x, cfg_);
            const PointCloud up_cloud = sample_workspace(upper, n, sample_seed, s_.threads);
            const Ellipsoid e_up =
                fit_enclosing_ellipsoid(up_cloud.pts, s_.mvee, cfg_.min_thickness).ellipsoid;
            fill_block(prof, e_up, ref_arm_, /*upper=*/true);

            const Ellipsoid e_lo = support_fit_generic(x, n, sample_seed, s_.mvee);
            fill_block(prof, e_lo, ref_cane_, /*upper=*/false);

            fill_scalars(prof, x);
            return prof;
        }

    private:
        std::uint64_t opt_seed() const { return derive_seed(s_.seed, seed_role::optimization); }

        void prepare()
        {
            const ChainModel arm = build_human_arm(cfg_);
            ref_arm_ = fit_enclosing_ellipsoid(sample_workspace(arm, s_.sampling.n,
                                                                derive_seed(s_.seed, seed_role::arm_reference),
                                                                s_.threads)
                                                   .pts,
                                               s_.mvee, cfg_.min_thickness)
                           .ellipsoid;

            const ChainModel cane = build_cane_model(cfg_);
            ref_cane_ = fit_enclosing_ellipsoid(sample_workspace(cane, s_.sampling.n,
                                                                 derive_seed(s_.seed, seed_role::cane_reference),
                                                                 s_.threads)
                                                    .pts,
                                                s_.mvee, cfg_.min_thickness)
                            .ellipsoid;

            // Layout tensors: lengths only scale the tensors, so any
            // in-bounds design fixes joint axes, limits, and locks.
            const DecisionVector layout;
            upper_tensor_ = build_link_tensor(build_srl_upper(layout, cfg_), s_.sampling.n_opt, opt_seed(),
                                              s_.threads);
            const ChainModel lower = build_srl_lower(layout, cfg_);
            lower_tensor_ = build_link_tensor(lower, s_.sampling.n_opt, opt_seed(), s_.threads);

            // Support-plane geometry for the fast path. The support chain is
            // planar for pitch-style layouts; if a configured layout breaks
            // that (out-of-plane link directions), fall back to the generic
            // rank-dispatched pipeline for correctness.
            lower_fast_ = true;
            const Mat3 R1 = rodrigues(lower.joints[0].axis, lower.joints[0].locked_angle);
            normal_ = R1 * lower.joints[1].axis;
            const Vec3 y_dir = Vec3::UnitZ().cross(normal_);
            if (y_dir.norm() < 1e-9)
                lower_fast_ = false;
            else
                plane_y_ = y_dir.normalized();

            hip_dir_ = lower_tensor_.dirs[0].col(0);
            for (size_t k = 0; k < 4 && lower_fast_; ++k) {
                const auto& dirs = lower_tensor_.dirs[k];
                if (k == 0) {
                    for (Eigen::Index s2 = 0; s2 < dirs.cols(); ++s2)
                        if ((dirs.col(s2) - hip_dir_).norm() > 1e-12)
                            lower_fast_ = false;
                }
                else if ((normal_.transpose() * dirs).cwiseAbs().maxCoeff() > 1e-9)
                    lower_fast_ = false;
            }
            if (lower_fast_)
                for (int k = 0; k < 3; ++k) {
                    const auto& dirs = lower_tensor_.dirs[static_cast<size_t>(k) + 1];
                    plane_rows_y_[static_cast<size_t>(k)] = plane_y_.transpose() * dirs;
                    plane_rows_z_[static_cast<size_t>(k)] = dirs.row(2);
                }
        }

        // Support workspace in the leg plane: coordinates relative to the
        // hip are affine in the link lengths, the ground filter reduces to
        // one closed-form closure test per sample, and the fit is 2-D.
        Ellipsoid support_fit_planar(const DecisionVector& x) const
        {
            const Eigen::Index n = lower_tensor_.samples();
            Eigen::RowVectorXd y = x.l[1] * plane_rows_y_[0];
            y.noalias() += x.l[2] * plane_rows_y_[1];
            y.noalias() += x.l[3] * plane_rows_y_[2];
            Eigen::RowVectorXd z = x.l[1] * plane_rows_z_[0];
            z.noalias() += x.l[2] * plane_rows_z_[1];
            z.noalias() += x.l[3] * plane_rows_z_[2];

            const Vec3 hip = lower_tensor_.base + x.l[0] * hip_dir_;
            Eigen::Matrix2Xd flat(2, n);
            Eigen::Index m = 0;
            if (cfg_.ground_filter) {
                const Planar2R leg = Planar2R::from_lengths(x.l[1], x.l[2], x.l[3], cfg_.lower_locked[1],
                                                            cfg_.joint_limits_lo[1], cfg_.joint_limits_hi[1],
                                                            cfg_.joint_limits_lo[2], cfg_.joint_limits_hi[2]);
                const double z_ground = -cfg_.ground_offset - hip.z();
                for (Eigen::Index i = 0; i < n; ++i) {
                    if (hip.z() + z[i] < -cfg_.ground_offset)
                        continue;
                    if (!planar2r_solve(leg, y[i], z_ground).any_valid())
                        continue;
                    flat.col(m++) = Eigen::Vector2d(y[i], z[i]);
                }
                if (m == 0)
                    throw EmptyWorkspace("evaluate: no support sample survives the ground-feasibility filter");
            }
            else {
                flat.row(0) = y;
                flat.row(1) = z;
                m = n;
            }
            const MveeResult<2> fit2 = mvee_fit_extremes<2>(flat.leftCols(m), s_.mvee_opt);
            return extrude_planar_fit(hip, plane_y_, Vec3::UnitZ(), fit2, cfg_.min_thickness);
        }

        Ellipsoid support_fit_generic(const DecisionVector& x, int n, std::uint64_t sample_seed,
                                      const MveeOptions& opts) const
        {
            const ChainModel lower = build_srl_lower(x, cfg_);
            const PointCloud cloud = reduced_workspace(lower, cfg_, n, sample_seed, s_.threads);
            return fit_enclosing_ellipsoid(cloud.pts, opts, cfg_.min_thickness).ellipsoid;
        }

        void fill_block(ObjectiveProfile& prof, const Ellipsoid& cand, const Ellipsoid& ref, bool upper) const
        {
            const SimilarityBlock block = similarity_block(cand, ref, cfg_.obl_eps);
            if (upper) {
                prof.upper = block.f;
                prof.upper_axis_ambiguous = block.axis_ambiguous;
                prof.upper_obl_clamped = block.obl_clamped;
            }
            else {
                prof.lower = block.f;
                prof.lower_axis_ambiguous = block.axis_ambiguous;
                prof.lower_obl_clamped = block.obl_clamped;
            }
        }

        void fill_scalars(ObjectiveProfile& prof, const DecisionVector& x) const
        {
            const SupportForceResult sts = sts_support_force(x, cfg_);
            prof.support_force = sts.force;
            prof.sts_singular_pose = sts.singular_pose;
            prof.f5 = support_force_objective(sts.force, cfg_.kappa);
            prof.f6 = relative_mass(x, cfg_);
            prof.f7 = moment_of_inertia(x, cfg_);
        }

        BodyParams cfg_;
        EvalSettings s_;
        Ellipsoid ref_arm_;
        Ellipsoid ref_cane_;
        LinkTensor upper_tensor_;
        LinkTensor lower_tensor_;
        bool lower_fast_ = false;
        Vec3 normal_ = Vec3::UnitX();
        Vec3 plane_y_ = Vec3::UnitY();
        Vec3 hip_dir_ = -Vec3::UnitZ();
        std::array<Eigen::RowVectorXd, 3> plane_rows_y_;
        std::array<Eigen::RowVectorXd, 3> plane_rows_z_;
    };

    // Component-wise utopia estimate of the reference front: the minimum of
    // every sub-objective over a space-filling sample of the search box.
    //
    // The sample is organized in fixed blocks of 1000 Latin-hypercube points
    // (block b drawn from sub-stream b), and a budget takes the first
    // `budget` points of that fixed stream. Two consequences: the estimate
    // is deterministic given the seed, and raising the budget only ever
    // extends the sample, so no pf component can get worse.
    inline constexpr int front_block_size = 1000;

    inline ReferenceFront estimate_reference_front(const SrlEvaluator& evaluator, int budget, std::uint64_t seed)
    {
        if (budget < 1)
            throw InvalidConfig("estimate_reference_front: budget must be >= 1");
        const RngStream root = RngStream::from_key(derive_seed(seed, seed_role::front_estimate));
        const auto lb = decision_lower_bounds();
        const auto ub = decision_upper_bounds();

        ReferenceFront front;
        front.provenance = ReferenceFront::Provenance::estimated;
        front.budget = budget;
        front.seed = seed;
        front.pf.setConstant(std::numeric_limits<double>::infinity());

        Eigen::MatrixXd block;
        int block_id = -1;
        int usable = 0;
        for (int j = 0; j < budget; ++j) {
            const int b = j / front_block_size;
            if (b != block_id) {
                block = latin_hypercube(lb, ub, front_block_size, root.sub(static_cast<std::uint64_t>(b)));
                block_id = b;
            }
            const DecisionVector x = DecisionVector::from_vector(block.col(j % front_block_size));
            try {
                front.pf = front.pf.cwiseMin(evaluator.evaluate(x).values());
                ++usable;
            }
            catch (const NumericError&) {
                // Infeasible corner of the box (e.g. a support limb that
                // cannot reach the ground): contributes nothing.
            }
        }
        if (usable == 0)
            throw EmptyWorkspace("estimate_reference_front: every sampled design failed to evaluate");
        return front;
    }

} // namespace wsopt

#endif
