#ifndef WSOPT_MVEE_HPP
#define WSOPT_MVEE_HPP

#include <wsopt/common.hpp>
#include <wsopt/params.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace wsopt {

    enum class FitStatus {
        converged,
        max_iter_exceeded
    };

    struct FitReport {
        int iterations = 0;              // total update steps (Newton + first-order)
        double duality_gap = 0.0;        // kappa/(d+1) - 1 over *all* points at exit
        double contained_fraction = 1.0; // fraction of points inside after the final rescale
        FitStatus status = FitStatus::converged;
    };

    template <int D>
    struct MveeResult {
        Eigen::Matrix<double, D, 1> center;
        Eigen::Matrix<double, D, D> shape; // E = {x : (x-c)^T shape (x-c) <= 1}
        FitReport report;
    };

    namespace detail {

        // Affine rank of a point cloud: eigenvalues of the centered scatter
        // above a threshold. The 1e-12 ridge retry is attempted once before
        // declaring the cloud degenerate.
        template <int D>
        int affine_rank(const Eigen::Matrix<double, D, Eigen::Dynamic>& pts,
                        Eigen::Matrix<double, D, D>* scatter_out = nullptr,
                        Eigen::Matrix<double, D, 1>* mean_out = nullptr)
        {
            using MatD = Eigen::Matrix<double, D, D>;
            using VecD = Eigen::Matrix<double, D, 1>;
            const auto n = pts.cols();
            const VecD mu = pts.rowwise().mean();
            MatD C = MatD::Zero();
            for (Eigen::Index i = 0; i < n; ++i) {
                const VecD d = pts.col(i) - mu;
                C.noalias() += d * d.transpose();
            }
            C /= static_cast<double>(n);
            if (scatter_out)
                *scatter_out = C;
            if (mean_out)
                *mean_out = mu;
            Eigen::SelfAdjointEigenSolver<MatD> es(C);
            const auto rank_of = [](const VecD& ev) {
                const double lmax = ev.maxCoeff();
                const double thr = std::max(lmax * 1e-10, 1e-11);
                int r = 0;
                for (int i = 0; i < D; ++i)
                    if (ev[i] > thr)
                        ++r;
                return r;
            };
            int r = rank_of(es.eigenvalues());
            if (r < D) {
                Eigen::SelfAdjointEigenSolver<MatD> es2(C + 1e-12 * MatD::Identity());
                r = std::max(r, rank_of(es2.eigenvalues()));
            }
            return r;
        }

    } // namespace detail

    // Minimum-volume enclosing ellipsoid via the lifted (d+1)-dimensional
    // weight problem: maximize log det M(u), M = sum_i u_i q_i q_i^T over the
    // simplex, with q_i = [p_i; 1]. The leverage w_i = q_i^T M^{-1} q_i is the
    // gradient; at the optimum w_i = d+1 on the support.
    //
    // Method: active-set Newton. Seed the support with coordinate-extreme
    // points, then alternate (a) a Newton solve of the support KKT system
    // (leverage = d+1 for every support point, weights on the simplex) and
    // (b) a certificate sweep that admits the worst violators. Workspace
    // clouds are nearly rotationally symmetric, so the optimal support is a
    // degenerate ring on which plain barycentric (Frank-Wolfe style) updates
    // crawl sublinearly; the Newton solve is what makes tol = 1e-7 cheap.
    // Points provably outside the optimal support (Harman-Pronzato screening)
    // are excluded from later sweeps; the final certificate is always
    // re-verified over *all* points, and on a screening miss the sweep set is
    // restored, so correctness never depends on the screening bound. A plain
    // barycentric loop with away/drop steps remains as the fallback path if a
    // Newton solve misbehaves numerically.
    //
    // Optimality certificate: kappa/(d+1) - 1 <= tol with
    // kappa = max_i q_i^T M(u)^{-1} q_i, from a fresh factorization.
    //
    // Throws DegenerateCloud when the cloud has affine rank < D (coplanar in
    // 3-D, collinear in 2-D) or fewer than D+1 points. On exhausting max_iter
    // the best iterate is returned with status max_iter_exceeded (no throw).
    // The final shape is rescaled so that max_i (p_i-c)^T A (p_i-c) = 1
    // exactly: containment is guaranteed by construction.
    template <int D>
    MveeResult<D> mvee_fit(const Eigen::Matrix<double, D, Eigen::Dynamic>& pts,
                           const MveeOptions& opts = MveeOptions{})
    {
        using VecD = Eigen::Matrix<double, D, 1>;
        using MatD = Eigen::Matrix<double, D, D>;
        constexpr int K = D + 1;
        using VecK = Eigen::Matrix<double, K, 1>;
        using MatK = Eigen::Matrix<double, K, K>;

        const Eigen::Index n = pts.cols();
        if (n < K)
            throw DegenerateCloud("mvee_fit: need at least d+1 points");
        if (!pts.allFinite())
            throw DegenerateCloud("mvee_fit: cloud contains non-finite coordinates");
        if (detail::affine_rank<D>(pts) < D)
            throw DegenerateCloud("mvee_fit: cloud is affinely rank-deficient");

        // Lifted points q_i = [p_i; 1].
        Eigen::Matrix<double, K, Eigen::Dynamic> Q(K, n);
        Q.template topRows<D>() = pts;
        Q.row(D).setOnes();

        const double kd = static_cast<double>(K);
        Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
        Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
        MatK Minv = MatK::Identity();
        int iters = 0;

        // Fresh factorization from the current weights; w only for `idx`.
        std::vector<Eigen::Index> support; // indices with u > 0, kept current
        const auto factorize = [&]() -> bool {
            MatK M = MatK::Zero();
            for (Eigen::Index i : support)
                M.noalias() += u[i] * (Q.col(i) * Q.col(i).transpose());
            Minv = M.ldlt().solve(MatK::Identity());
            return Minv.allFinite();
        };
        const auto sweep_w = [&](const std::vector<Eigen::Index>& idx) {
            for (Eigen::Index i : idx)
                w[i] = Q.col(i).dot(Minv * Q.col(i));
        };
        const auto rebuild_support = [&]() {
            support.clear();
            for (Eigen::Index i = 0; i < n; ++i)
                if (u[i] > 0.0)
                    support.push_back(i);
        };

        // Screening bound: with current gap eps, points whose leverage is
        // below (d+1) * h(eps) cannot be in the optimal support; their mass
        // is removed and they leave the sweep set.
        const auto screening_threshold = [&](double eps) {
            const double arg = eps * (4.0 + eps - 4.0 / kd);
            return kd * (1.0 + 0.5 * eps - 0.5 * std::sqrt(std::max(0.0, arg)));
        };

        // One Newton step on the current support: solve the bordered KKT
        // system (leverage = d+1 on the support, unit mass) by minimum-norm,
        // which guards the near-singular Hessian of a degenerate ring/shell
        // support, then clamp to the simplex (fraction-to-boundary). A weight
        // that blocks the step while its own leverage is already below target
        // is dropped outright. Returns the step fraction taken, or a negative
        // value when the solve is unusable (caller falls back to a sweep).
        const auto newton_step = [&]() -> double {
            const int s = static_cast<int>(support.size());
            if (s < K || s > 80)
                return -1.0;
            Eigen::MatrixXd G(s, s);
            for (int a = 0; a < s; ++a) {
                const VecK va = Minv * Q.col(support[static_cast<size_t>(a)]);
                for (int b = a; b < s; ++b) {
                    G(a, b) = Q.col(support[static_cast<size_t>(b)]).dot(va);
                    G(b, a) = G(a, b);
                }
            }
            const Eigen::VectorXd wS = G.diagonal();
            const double resid = (wS.array() - kd).abs().maxCoeff();
            double mass = 0.0;
            for (Eigen::Index i : support)
                mass += u[i];
            Eigen::MatrixXd J(s + 1, s + 1);
            J.topLeftCorner(s, s) = -G.array().square().matrix();
            // Levenberg-style damping, proportional to the residual: large
            // enough to suppress the huge mass-swap steps a near-singular
            // (ring/shell) Hessian would emit, and vanishing as the iterate
            // converges so the quadratic endgame is untouched.
            J.topLeftCorner(s, s).diagonal().array() -= 0.1 * kd * resid;
            J.topRightCorner(s, 1).setConstant(-1.0);
            J.bottomLeftCorner(1, s).setOnes();
            J(s, s) = 0.0;
            Eigen::VectorXd rhs(s + 1);
            rhs.head(s) = -(wS.array() - kd).matrix();
            rhs[s] = -(mass - 1.0);
            Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(J);
            cod.setThreshold(1e-10);
            const Eigen::VectorXd step = cod.solve(rhs);
            if (!step.allFinite())
                return -1.0;
            double amax = 1.0;
            int blocker = -1;
            for (int a = 0; a < s; ++a)
                if (step[a] < 0.0) {
                    const double lim = -u[support[static_cast<size_t>(a)]] / step[a];
                    if (lim < amax) {
                        amax = lim;
                        blocker = a;
                    }
                }
            const double alpha = std::min(1.0, 0.9995 * amax);
            for (int a = 0; a < s; ++a) {
                double& ua = u[support[static_cast<size_t>(a)]];
                const double ua_pre = ua;
                ua += alpha * step[a];
                // Only near-zero weights may be dropped by a blocked step;
                // ejecting a well-established support point here can cycle
                // against the admission phase.
                if (ua < 1e-14 || (a == blocker && amax < 1.0 && wS[a] < kd && ua_pre < 1e-6))
                    ua = 0.0;
            }
            return alpha;
        };

        // Frank-Wolfe with away steps (Khachiyan / Wolfe-Atwood) over an index
        // subset, maintaining w by rank-one updates with periodic refreshes.
        // Monotone ascent with cheap O(|set|) steps; fast until the iterate
        // nears a degenerate optimum, where its rate turns sublinear — hence
        // only a warm-up target or last-resort use.
        const auto khachiyan = [&](const std::vector<Eigen::Index>& set, double target,
                                   int budget) -> bool {
            if (!factorize())
                return false;
            sweep_w(set);
            int since_refresh = 0;
            while (budget-- > 0 && iters < opts.max_iter) {
                Eigen::Index jmax = -1, jmin = -1;
                double wmax = -std::numeric_limits<double>::infinity();
                double wmin = std::numeric_limits<double>::infinity();
                for (Eigen::Index i : set) {
                    if (w[i] > wmax) {
                        wmax = w[i];
                        jmax = i;
                    }
                    if (u[i] > 0.0 && w[i] < wmin) {
                        wmin = w[i];
                        jmin = i;
                    }
                }
                double eps_plus = wmax / kd - 1.0;
                if (eps_plus <= target) {
                    rebuild_support();
                    factorize();
                    sweep_w(set);
                    since_refresh = 0;
                    wmax = -std::numeric_limits<double>::infinity();
                    for (Eigen::Index i : set)
                        if (w[i] > wmax) {
                            wmax = w[i];
                            jmax = i;
                        }
                    eps_plus = wmax / kd - 1.0;
                    if (eps_plus <= target)
                        return true;
                    continue;
                }
                const double eps_minus = 1.0 - wmin / kd;

                Eigen::Index j;
                bool drop = false;
                double alpha;
                if (eps_plus >= eps_minus || jmin < 0 || u[jmin] >= 1.0) {
                    j = jmax;
                    alpha = (w[j] - kd) / (kd * (w[j] - 1.0));
                }
                else {
                    j = jmin;
                    const double wj = w[j];
                    const double alpha_star = (std::abs(wj - 1.0) < 1e-14)
                                                  ? -std::numeric_limits<double>::infinity()
                                                  : (wj - kd) / (kd * (wj - 1.0));
                    const double alpha_min = -u[j] / (1.0 - u[j]);
                    alpha = std::max(alpha_star, alpha_min);
                    drop = alpha == alpha_min;
                }

                ++iters;
                const double one_minus = 1.0 - alpha;
                if (!(one_minus > 1e-12)) {
                    rebuild_support();
                    factorize();
                    sweep_w(set);
                    since_refresh = 0;
                    continue;
                }
                u *= one_minus;
                u[j] += alpha;
                if (drop)
                    u[j] = 0.0;

                // Rank-one update: M' = (1-a) M + a q q^T.
                const VecK v = Minv * Q.col(j);
                const double wj = Q.col(j).dot(v);
                const double beta = alpha / one_minus;
                const double denom = 1.0 + beta * wj;
                if (!(std::abs(denom) > 1e-14) || !std::isfinite(denom)) {
                    rebuild_support();
                    factorize();
                    sweep_w(set);
                    since_refresh = 0;
                    continue;
                }
                const double cfac = beta / denom;
                Minv.noalias() -= cfac * (v * v.transpose());
                Minv /= one_minus;
                for (Eigen::Index i : set) {
                    const double si = Q.col(i).dot(v);
                    w[i] = (w[i] - cfac * si * si) / one_minus;
                }

                if (++since_refresh >= 100) {
                    rebuild_support();
                    factorize();
                    sweep_w(set);
                    since_refresh = 0;
                }
            }
            rebuild_support();
            return false;
        };

        // --- seed: per-axis extremes plus the farthest-from-centroid point --
        {
            std::vector<Eigen::Index> chosen;
            for (int d = 0; d < D; ++d) {
                Eigen::Index imin, imax;
                pts.row(d).minCoeff(&imin);
                pts.row(d).maxCoeff(&imax);
                chosen.push_back(imin);
                chosen.push_back(imax);
            }
            const VecD mu = pts.rowwise().mean();
            Eigen::Index ifar;
            (pts.colwise() - mu).colwise().squaredNorm().maxCoeff(&ifar);
            chosen.push_back(ifar);
            double mass = 0.0;
            for (Eigen::Index idx : chosen)
                if (u[idx] == 0.0) { // skip duplicates
                    u[idx] = 1.0;
                    mass += 1.0;
                }
            u /= mass;
            rebuild_support();
            if (!factorize()) {
                u.setConstant(1.0 / static_cast<double>(n));
                rebuild_support();
            }
        }

        std::vector<Eigen::Index> all_idx(static_cast<size_t>(n));
        for (Eigen::Index i = 0; i < n; ++i)
            all_idx[static_cast<size_t>(i)] = i;
        std::vector<Eigen::Index> active = all_idx;
        std::vector<Eigen::Index> next;

        // --- phase 1: cheap warm-up into the Newton basin -------------------
        bool converged = khachiyan(active, std::max(1e-2, opts.tol), 2000);
        bool numeric_trouble = false;

        // --- phase 2: certified deletion + violator admission + inner solve -
        // Each round: re-certify over the (screened) active set, delete points
        // that provably cannot support the optimum, admit the worst violators
        // with a pinch of mass, then polish the support. The polish prefers
        // the Newton jump and falls back to multiplicative fixed-point sweeps
        // u_i <- u_i * (w_i / (d+1)) when the step is boundary-blocked: those
        // sweeps are monotone in log det and redistribute mass across a
        // degenerate ring symmetrically, which is exactly the case where
        // single-point exchanges crawl. Every phase ascends log det, so the
        // admit/delete alternation cannot cycle.
        converged = converged && opts.tol >= 1e-2;
        for (int restore = 0; restore < 2 && !converged && !numeric_trouble; ++restore) {
            for (int round = 0; round < 300 && iters < opts.max_iter; ++round) {
                ++iters;
                rebuild_support();
                if (support.size() < static_cast<size_t>(K) || !factorize()) {
                    numeric_trouble = true;
                    break;
                }
                sweep_w(active);
                double wmax = 0.0;
                for (Eigen::Index i : active)
                    wmax = std::max(wmax, w[i]);
                const double eps = wmax / kd - 1.0;
                if (eps <= opts.tol) {
                    converged = true;
                    break;
                }

                // Delete points below the screening bound (their mass is
                // redistributed by the renormalization at the end).
                const double keep = screening_threshold(eps);
                next.clear();
                next.reserve(active.size());
                for (Eigen::Index i : active) {
                    if (w[i] < keep)
                        u[i] = 0.0;
                    else
                        next.push_back(i);
                }
                active.swap(next);

                // Admit the worst certificate violators with a pinch of mass.
                std::vector<Eigen::Index> violators;
                for (Eigen::Index i : active)
                    if (u[i] == 0.0 && w[i] > kd * (1.0 + opts.tol))
                        violators.push_back(i);
                std::sort(violators.begin(), violators.end(),
                          [&](Eigen::Index a, Eigen::Index b) { return w[a] > w[b]; });
                if (violators.size() > 8)
                    violators.resize(8);
                if (!violators.empty()) {
                    const double seed_mass = 1e-3 / static_cast<double>(violators.size());
                    for (Eigen::Index i : active)
                        u[i] *= 1.0 - 1e-3;
                    for (Eigen::Index idx : violators)
                        u[idx] = seed_mass;
                }
                rebuild_support();

                int blocked_streak = 0;
                for (int inner = 0; inner < 60 && iters < opts.max_iter; ++inner) {
                    ++iters;
                    if (!factorize()) {
                        numeric_trouble = true;
                        break;
                    }
                    const int s = static_cast<int>(support.size());
                    if (s < K) {
                        numeric_trouble = true;
                        break;
                    }
                    Eigen::VectorXd wS(s);
                    for (int a = 0; a < s; ++a) {
                        const auto qa = Q.col(support[static_cast<size_t>(a)]);
                        wS[a] = qa.dot(Minv * qa);
                    }
                    if ((wS.array() - kd).abs().maxCoeff() <= 0.05 * opts.tol * kd)
                        break;
                    double alpha = -1.0;
                    if (blocked_streak < 3)
                        alpha = newton_step();
                    if (alpha < 0.25) {
                        // Unusable or repeatedly boundary-blocked step: one
                        // multiplicative sweep redistributes ring mass and
                        // shrinks the leavers, then Newton gets another shot.
                        if (alpha < 0.0) {
                            for (int a = 0; a < s; ++a) {
                                double& ua = u[support[static_cast<size_t>(a)]];
                                ua *= wS[a] / kd;
                                if (ua < 1e-15)
                                    ua = 0.0;
                            }
                            blocked_streak = 0;
                        }
                        else
                            ++blocked_streak;
                    }
                    else
                        blocked_streak = 0;
                    rebuild_support();
                }
                if (numeric_trouble)
                    break;

                double total = 0.0;
                for (Eigen::Index i : support)
                    total += u[i];
                if (!(total > 0.0) || !std::isfinite(total)) {
                    numeric_trouble = true;
                    break;
                }
                for (Eigen::Index i : support)
                    u[i] /= total;
            }

            if (converged && active.size() < static_cast<size_t>(n)) {
                // The certificate so far covers the screened set only;
                // verify over all points and retry once on a miss.
                factorize();
                sweep_w(all_idx);
                if (w.maxCoeff() / kd - 1.0 > opts.tol) {
                    converged = false;
                    active = all_idx;
                }
            }
        }

        // Last resort: monotone first-order steps over everything.
        if (!converged && iters < opts.max_iter) {
            rebuild_support();
            converged = khachiyan(all_idx, opts.tol, opts.max_iter);
        }

        // Honest certificate from a fresh factorization over all points.
        {
            std::vector<Eigen::Index> all(static_cast<size_t>(n));
            for (Eigen::Index i = 0; i < n; ++i)
                all[static_cast<size_t>(i)] = i;
            rebuild_support();
            factorize();
            sweep_w(all);
        }
        FitReport report;
        report.iterations = iters;
        report.duality_gap = w.maxCoeff() / kd - 1.0;
        report.status = (report.duality_gap > opts.tol) ? FitStatus::max_iter_exceeded : FitStatus::converged;

        // Recover the center/shape in point space:
        //   c = P u,  A = (P diag(u) P^T - c c^T)^{-1} / d.
        MveeResult<D> out;
        VecD c = VecD::Zero();
        for (Eigen::Index i : support)
            c.noalias() += u[i] * pts.col(i);
        MatD S = MatD::Zero();
        for (Eigen::Index i : support) {
            const VecD d = pts.col(i) - c;
            S.noalias() += u[i] * (d * d.transpose());
        }
        MatD A = S.ldlt().solve(MatD::Identity()) / static_cast<double>(D);
        A = 0.5 * (A + A.transpose());

        // Exact containment: scale so the farthest point sits on the boundary.
        double max_form = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const VecD d = pts.col(i) - c;
            max_form = std::max(max_form, d.dot(A * d));
        }
        if (max_form > 0.0)
            A /= max_form;
        Eigen::Index inside = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const VecD d = pts.col(i) - c;
            if (d.dot(A * d) <= 1.0 + 1e-12)
                ++inside;
        }
        report.contained_fraction = static_cast<double>(inside) / static_cast<double>(n);

        out.center = c;
        out.shape = A;
        out.report = report;
        return out;
    }

    namespace detail {

        // Deterministic well-spread unit directions: uniform half-circle in
        // 2-D, Fibonacci sphere in 3-D. Min and max are taken along each
        // direction, so a half-cover suffices in 2-D.
        template <int D>
        Eigen::Matrix<double, Eigen::Dynamic, D> extreme_directions(int k)
        {
            Eigen::Matrix<double, Eigen::Dynamic, D> dirs(k, D);
            for (int j = 0; j < k; ++j) {
                if constexpr (D == 2) {
                    const double th = pi * j / k;
                    dirs.row(j) << std::cos(th), std::sin(th);
                }
                else {
                    const double z = 1.0 - 2.0 * (j + 0.5) / k;
                    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
                    const double th = pi * (3.0 - std::sqrt(5.0)) * j;
                    dirs.row(j) << r * std::cos(th), r * std::sin(th), z;
                }
            }
            return dirs;
        }

    } // namespace detail

    // Same optimum as mvee_fit, certified over the whole cloud, at a fraction
    // of the cost on large clouds: the enclosing ellipsoid is determined by
    // convex-hull extreme points, so the fit runs on directional extremes and
    // admits any point left outside until the full-cloud duality gap passes.
    //
    // The certificate is exact, not heuristic. The subset solution's weights,
    // extended by zeros, are a feasible dual for the full problem, and for
    // any feasible dual the gap is D*(max_pre - 1)/(D+1), where max_pre is
    // the largest pre-rescale quadratic form over all points; max_pre is
    // recovered from the subset report's gap and the measured forms.
    template <int D>
    MveeResult<D> mvee_fit_extremes(const Eigen::Matrix<double, D, Eigen::Dynamic>& pts,
                                    const MveeOptions& opts = {}, int directions = 32, int admit_per_round = 8)
    {
        const Eigen::Index n = pts.cols();
        if constexpr (D != 2 && D != 3)
            return mvee_fit<D>(pts, opts);
        const int k = std::max(directions, D + 1);
        if (n <= 8 * static_cast<Eigen::Index>(k))
            return mvee_fit<D>(pts, opts);

        const Eigen::Matrix<double, Eigen::Dynamic, D> dirs = detail::extreme_directions<D>(k);
        const Eigen::MatrixXd proj = dirs * pts;
        std::vector<char> picked(static_cast<size_t>(n), 0);
        std::vector<Eigen::Index> sel;
        sel.reserve(static_cast<size_t>(2 * k));
        const auto admit = [&](Eigen::Index i) {
            if (!picked[static_cast<size_t>(i)]) {
                picked[static_cast<size_t>(i)] = 1;
                sel.push_back(i);
            }
        };
        for (int r = 0; r < k; ++r) {
            Eigen::Index imax = 0, imin = 0;
            proj.row(r).maxCoeff(&imax);
            proj.row(r).minCoeff(&imin);
            admit(imax);
            admit(imin);
        }

        int total_iters = 0;
        const int max_rounds = 64;
        for (int round = 0;; ++round) {
            Eigen::Matrix<double, D, Eigen::Dynamic> sub(D, static_cast<Eigen::Index>(sel.size()));
            for (size_t j = 0; j < sel.size(); ++j)
                sub.col(static_cast<Eigen::Index>(j)) = pts.col(sel[j]);
            MveeResult<D> fit;
            try {
                fit = mvee_fit<D>(sub, opts);
            }
            catch (const NumericError&) {
                // Degenerate extreme subset (e.g. near-planar cloud): the
                // full fit settles it either way.
                return mvee_fit<D>(pts, opts);
            }
            total_iters += fit.report.iterations;

            const Eigen::Matrix<double, D, Eigen::Dynamic> dx = pts.colwise() - fit.center;
            const Eigen::RowVectorXd form = (dx.cwiseProduct(fit.shape * dx)).colwise().sum();
            const double max_form = form.maxCoeff();

            const double sub_pre = 1.0 + fit.report.duality_gap * (D + 1.0) / D;
            const double full_pre = std::max(max_form, 1.0) * sub_pre;
            const double gap = D * (full_pre - 1.0) / (D + 1.0);

            std::vector<Eigen::Index> outside;
            for (Eigen::Index i = 0; i < n; ++i)
                if (form[i] > 1.0 && !picked[static_cast<size_t>(i)])
                    outside.push_back(i);

            const bool stalled = fit.report.duality_gap > opts.tol || round >= max_rounds ||
                                 static_cast<Eigen::Index>(sel.size()) >= n / 2 || outside.empty();
            if (gap <= opts.tol || stalled) {
                MveeResult<D> out = fit;
                const double scale = std::max(max_form, 1.0);
                if (max_form > 1.0)
                    out.shape /= max_form;
                Eigen::Index inside = 0;
                for (Eigen::Index i = 0; i < n; ++i)
                    if (form[i] <= scale * (1.0 + 1e-12))
                        ++inside;
                out.report.iterations = total_iters;
                out.report.duality_gap = gap;
                out.report.status = (gap > opts.tol) ? FitStatus::max_iter_exceeded : FitStatus::converged;
                out.report.contained_fraction = static_cast<double>(inside) / static_cast<double>(n);
                return out;
            }

            const size_t take = std::min<size_t>(static_cast<size_t>(std::max(admit_per_round, 1)),
                                                 outside.size());
            std::partial_sort(outside.begin(), outside.begin() + static_cast<std::ptrdiff_t>(take), outside.end(),
                              [&](Eigen::Index a, Eigen::Index b) { return form[a] > form[b]; });
            for (size_t j = 0; j < take; ++j)
                admit(outside[j]);
        }
    }

} // namespace wsopt

#endif
