#ifndef WSOPT_SOLVER_HPP
#define WSOPT_SOLVER_HPP

#include <wsopt/common.hpp>
#include <wsopt/parallel.hpp>
#include <wsopt/rng.hpp>
#include <wsopt/sampling.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

namespace wsopt {

    // --- problem abstraction ----------------------------------------------

    // What one fitness evaluation reports back: the scalar cost driving the
    // search, the sub-objective vector driving dominance checks, and whether
    // the design was actually evaluable (an infeasible design carries penalty
    // values and ok = false).
    struct EvalResult {
        double phi = big_cost;
        Eigen::VectorXd objectives;
        bool ok = false;
    };

    struct Problem {
        Eigen::VectorXd lb;
        Eigen::VectorXd ub;
        int length_dims = 0;    // leading components reported as link lengths
        int objective_dims = 0; // size of EvalResult::objectives
        std::function<EvalResult(const Eigen::VectorXd&)> eval;

        Eigen::Index dims() const { return lb.size(); }

        void validate() const
        {
            if (lb.size() == 0 || lb.size() != ub.size())
                throw InvalidConfig("problem: bounds must be non-empty and of equal size");
            if ((ub.array() <= lb.array()).any())
                throw InvalidConfig("problem: every upper bound must exceed its lower bound");
            if (length_dims < 0 || length_dims > lb.size())
                throw InvalidConfig("problem: length_dims outside [0, dims]");
            if (objective_dims < 1)
                throw InvalidConfig("problem: objective_dims must be >= 1");
            if (!eval)
                throw InvalidConfig("problem: evaluation callback not set");
        }
    };

    // --- search parameters ------------------------------------------------

    struct SolverParams {
        int pop = 81;
        int max_iter = 300;
        double alpha = 0.5;        // perturbation scale at the first iteration
        double alpha_final = 0.05; // linearly annealed to this at the last
        double I0 = 1.0;
        double I_min = 0.2;
        double gamma = 1.0;
        double beta0 = 1.0;
        double beta_min = 0.01;
        double eta = 10.0;
        double k_replace = 0.1; // replacement jitter, in units of (UB - LB)
        double conv_threshold = 0.2;
        int conv_window = 10;
        int threads = 1;
        bool timing = false; // record wall time per iteration (off keeps
                             // outputs byte-stable across reruns)

        // Feature switches. Both on: full algorithm. Both off: plain firefly
        // attraction, which is exactly what the baseline runs use.
        bool partition_enabled = true;
        bool replacement_enabled = true;

        void validate() const
        {
            if (pop < 3)
                throw InvalidConfig("solver: population must be >= 3");
            if (max_iter < 1)
                throw InvalidConfig("solver: max_iter must be >= 1");
            if (!(gamma > 0.0) || !(eta > 0.0))
                throw InvalidConfig("solver: gamma and eta must be > 0");
            if (I0 < 0.0 || beta0 < 0.0 || I_min < 0.0 || beta_min < 0.0)
                throw InvalidConfig("solver: region coefficients must be >= 0");
            if (alpha < 0.0 || alpha_final < 0.0 || k_replace < 0.0)
                throw InvalidConfig("solver: step scales must be >= 0");
            if (conv_window < 1)
                throw InvalidConfig("solver: convergence window must be >= 1");
            if (threads < 1)
                throw InvalidConfig("solver: thread count must be >= 1");
        }
    };

    // --- primitive operations ---------------------------------------------

    inline bool pareto_dominates(const Eigen::VectorXd& a, const Eigen::VectorXd& b)
    {
        if (a.size() != b.size())
            throw LengthMismatch("pareto_dominates: objective vectors differ in length");
        bool strict = false;
        for (Eigen::Index i = 0; i < a.size(); ++i) {
            if (a[i] > b[i])
                return false;
            if (a[i] < b[i])
                strict = true;
        }
        return strict;
    }

    inline double pair_distance(const Eigen::VectorXd& xi, const Eigen::VectorXd& xj)
    {
        if (xi.size() != xj.size())
            throw LengthMismatch("pair_distance: vectors differ in length");
        return (xj - xi).norm();
    }

    inline double attraction(double r, const SolverParams& p)
    {
        return p.I0 * std::exp(-p.gamma * r * r) + p.I_min;
    }

    inline double repulsion(double r, const SolverParams& p)
    {
        return p.beta0 * std::exp(-p.eta * r * r) + p.beta_min;
    }

    // --- population state -------------------------------------------------

    enum class SubPop {
        high,
        medium,
        low
    };

    struct Individual {
        Eigen::VectorXd x;
        Eigen::VectorXd objectives;
        double phi = big_cost;
        bool ok = false;
        SubPop subpop = SubPop::high;
        bool dominated = false; // replaced in the current iteration
    };

    struct RunTrace {
        // Entry 0 is the initial population; entry t is after iteration t.
        std::vector<double> best_phi_per_iter;
        std::vector<Eigen::VectorXd> best_x_per_iter;
        std::vector<double> wall_time_per_iter; // seconds; zeros unless timed
        std::optional<int> conv_iter;
    };

    struct RunResult {
        Individual best; // elitist archive: never lost, never re-injected
        RunTrace trace;
        long evals = 0;
        long replacements = 0; // dominance-correction events across the run
    };

    // First trace index from which the running best stays below the
    // threshold for a full window. With an elitist (non-increasing) trace
    // this is simply the first crossing, provided a full window remains.
    inline std::optional<int> conv_iteration(const std::vector<double>& best_phi, double threshold, int window)
    {
        if (window < 1)
            throw InvalidConfig("conv_iteration: window must be >= 1");
        const int n = static_cast<int>(best_phi.size());
        for (int t = 0; t + window <= n; ++t) {
            bool held = true;
            for (int u = t; u < t + window && held; ++u)
                held = best_phi[static_cast<size_t>(u)] < threshold;
            if (held)
                return t;
        }
        return std::nullopt;
    }

    // Tertile split by correlation psi = |phi_i - phi_best|, ascending, ties
    // stable by index; sizes differ by at most one. The population is labeled
    // in place and the subpopulation index lists are returned in H, M, L
    // order. With partitioning disabled everyone lands in H, which reduces
    // every update law to plain attraction.
    inline std::array<std::vector<int>, 3> partition(std::vector<Individual>& pop, bool enabled = true)
    {
        const int n = static_cast<int>(pop.size());
        std::array<std::vector<int>, 3> groups;
        if (!enabled) {
            for (int i = 0; i < n; ++i) {
                pop[static_cast<size_t>(i)].subpop = SubPop::high;
                groups[0].push_back(i);
            }
            return groups;
        }
        double phi_best = pop.front().phi;
        for (const Individual& ind : pop)
            phi_best = std::min(phi_best, ind.phi);
        std::vector<int> order(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i)
            order[static_cast<size_t>(i)] = i;
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return std::abs(pop[static_cast<size_t>(a)].phi - phi_best) <
                   std::abs(pop[static_cast<size_t>(b)].phi - phi_best);
        });
        const int base = n / 3;
        const int rem = n % 3;
        int cursor = 0;
        for (int g = 0; g < 3; ++g) {
            const int size = base + (g < rem ? 1 : 0);
            for (int j = 0; j < size; ++j) {
                const int idx = order[static_cast<size_t>(cursor++)];
                pop[static_cast<size_t>(idx)].subpop = g == 0   ? SubPop::high
                                                       : g == 1 ? SubPop::medium
                                                                : SubPop::low;
                groups[static_cast<size_t>(g)].push_back(idx);
            }
        }
        return groups;
    }

    // Dominated-individual replacement: anyone whose objective vector is
    // Pareto-dominated moves next to their best dominator (jittered by
    // k_replace per dimension, projected into the box). The abandoned
    // positions are returned as this iteration's repulsion centers; the
    // newcomers keep their stale fitness until the next evaluation sweep,
    // mirroring the once-per-iteration evaluation order of the algorithm.
    inline std::vector<Eigen::VectorXd> replace_dominated(std::vector<Individual>& pop, const Problem& prob,
                                                          const SolverParams& p, const RngStream& iter_stream)
    {
        const int n = static_cast<int>(pop.size());
        std::vector<int> dominator(static_cast<size_t>(n), -1);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (j == i || !pareto_dominates(pop[static_cast<size_t>(j)].objectives,
                                                pop[static_cast<size_t>(i)].objectives))
                    continue;
                int& d = dominator[static_cast<size_t>(i)];
                if (d < 0 || pop[static_cast<size_t>(j)].phi < pop[static_cast<size_t>(d)].phi)
                    d = j;
            }
        }
        std::vector<Eigen::VectorXd> centers;
        const Eigen::VectorXd span = prob.ub - prob.lb;
        for (int i = 0; i < n; ++i) {
            Individual& ind = pop[static_cast<size_t>(i)];
            const int d = dominator[static_cast<size_t>(i)];
            ind.dominated = d >= 0;
            if (d < 0)
                continue;
            centers.push_back(ind.x);
            RngSequence draw{iter_stream.sub(2 * static_cast<std::uint64_t>(i))};
            Eigen::VectorXd y = pop[static_cast<size_t>(d)].x;
            for (Eigen::Index k = 0; k < y.size(); ++k)
                y[k] += p.k_replace * (draw.u01() - 0.5) * span[k];
            ind.x = y.cwiseMax(prob.lb).cwiseMin(prob.ub);
        }
        return centers;
    }

    namespace detail {

        inline int nearest_center(const std::vector<Eigen::VectorXd>& centers, const Eigen::VectorXd& x)
        {
            int best = 0;
            double best_r = (centers.front() - x).norm();
            for (int k = 1; k < static_cast<int>(centers.size()); ++k) {
                const double r = (centers[static_cast<size_t>(k)] - x).norm();
                if (r < best_r) {
                    best_r = r;
                    best = k;
                }
            }
            return best;
        }

    } // namespace detail

    // One synchronous update sweep. All moves are computed from the same
    // snapshot of positions and fitness, then applied, so the result is
    // independent of member order and thread count. Update laws:
    //   H: x + I(r_ij) (x_j - x)                 + eps
    //   M: x + I(r_ij) (x_j - x) - B(r_ik) (x_k - x) + eps
    //   L: x            - B(r_ik) (x_k - x)          + eps
    // The attractor x_j is the population's brightest individual for every
    // subpopulation (brighter fireflies lead dimmer ones toward better
    // positions; the best itself keeps only its random walk); the repulsion
    // center x_k is the nearest abandoned position. Without centers the
    // repulsion terms vanish, which turns M — and, by the same fallback, L —
    // into the plain-attraction H law.
    inline void step(std::vector<Individual>& pop, const Problem& prob, const SolverParams& p,
                     const std::vector<Eigen::VectorXd>& centers, double alpha_t, const RngStream& iter_stream)
    {
        const int n = static_cast<int>(pop.size());
        const Eigen::VectorXd span = prob.ub - prob.lb;

        std::vector<Eigen::VectorXd> snapshot(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i)
            snapshot[static_cast<size_t>(i)] = pop[static_cast<size_t>(i)].x;

        int global_best = 0;
        for (int i = 1; i < n; ++i)
            if (pop[static_cast<size_t>(i)].phi < pop[static_cast<size_t>(global_best)].phi)
                global_best = i;

        for (int i = 0; i < n; ++i) {
            Individual& ind = pop[static_cast<size_t>(i)];
            const Eigen::VectorXd& xi = snapshot[static_cast<size_t>(i)];
            const Eigen::VectorXd& xj = snapshot[static_cast<size_t>(global_best)];

            Eigen::VectorXd x = xi;
            const bool repel = !centers.empty() &&
                               (ind.subpop == SubPop::medium || ind.subpop == SubPop::low);
            const bool attract = ind.subpop == SubPop::high || ind.subpop == SubPop::medium ||
                                 (ind.subpop == SubPop::low && centers.empty());
            if (attract)
                x += attraction(pair_distance(xi, xj), p) * (xj - xi);
            if (repel) {
                const Eigen::VectorXd& xk = centers[static_cast<size_t>(detail::nearest_center(centers, xi))];
                x -= repulsion(pair_distance(xi, xk), p) * (xk - xi);
            }

            RngSequence draw{iter_stream.sub(2 * static_cast<std::uint64_t>(i) + 1)};
            for (Eigen::Index k = 0; k < x.size(); ++k)
                x[k] += alpha_t * (draw.u01() - 0.5) * span[k];

            ind.x = x.cwiseMax(prob.lb).cwiseMin(prob.ub);
        }
    }

    namespace detail {

        inline void evaluate_sweep(std::vector<Individual>& pop, const Problem& prob, int threads)
        {
            parallel_for(0, static_cast<int>(pop.size()), threads, [&](int i) {
                Individual& ind = pop[static_cast<size_t>(i)];
                const EvalResult r = prob.eval(ind.x);
                ind.phi = r.phi;
                ind.objectives = r.objectives;
                ind.ok = r.ok;
            });
        }

        inline void record(RunTrace& trace, RunResult& out, const std::vector<Individual>& pop, double seconds,
                           bool timing)
        {
            for (const Individual& ind : pop)
                if (ind.phi < out.best.phi || out.best.x.size() == 0)
                    out.best = ind;
            trace.best_phi_per_iter.push_back(out.best.phi);
            trace.best_x_per_iter.push_back(out.best.x);
            trace.wall_time_per_iter.push_back(timing ? seconds : 0.0);
        }

    } // namespace detail

    // Full search loop. Per iteration: dominance replacement seeds this
    // iteration's repulsion centers, the tertile partition assigns update
    // laws, one synchronous sweep moves everyone, one evaluation sweep
    // scores the new positions. Evaluation count is exactly
    // pop * (max_iter + 1) for any flag combination.
    inline RunResult run_mscfa(const Problem& prob, const SolverParams& params, std::uint64_t seed)
    {
        prob.validate();
        params.validate();
        using clock = std::chrono::steady_clock;
        const RngStream root = RngStream(seed);

        RunResult out;
        out.best.phi = big_cost * 2.0;

        auto t0 = clock::now();
        const Eigen::MatrixXd init = latin_hypercube(prob.lb, prob.ub, params.pop, root.sub(0));
        std::vector<Individual> pop(static_cast<size_t>(params.pop));
        for (int i = 0; i < params.pop; ++i)
            pop[static_cast<size_t>(i)].x = init.col(i);
        detail::evaluate_sweep(pop, prob, params.threads);
        out.evals += params.pop;
        detail::record(out.trace, out, pop, std::chrono::duration<double>(clock::now() - t0).count(),
                       params.timing);

        for (int t = 1; t <= params.max_iter; ++t) {
            t0 = clock::now();
            const RngStream iter_stream = root.sub(static_cast<std::uint64_t>(t));

            partition(pop, params.partition_enabled);
            std::vector<Eigen::VectorXd> centers;
            if (params.replacement_enabled) {
                centers = replace_dominated(pop, prob, params, iter_stream);
                out.replacements += static_cast<long>(centers.size());
            }

            const double frac = params.max_iter > 1 ? static_cast<double>(t - 1) / (params.max_iter - 1) : 0.0;
            const double alpha_t = params.alpha + (params.alpha_final - params.alpha) * frac;
            step(pop, prob, params, centers, alpha_t, iter_stream);

            detail::evaluate_sweep(pop, prob, params.threads);
            out.evals += params.pop;
            detail::record(out.trace, out, pop, std::chrono::duration<double>(clock::now() - t0).count(),
                           params.timing);
        }
        out.trace.conv_iter = conv_iteration(out.trace.best_phi_per_iter, params.conv_threshold,
                                             params.conv_window);
        return out;
    }

    // Plain firefly baseline: the same loop with replacement and partitioning
    // switched off, which collapses every update law to attraction toward the
    // population best. Identical RNG substream layout, so this equals
    // run_mscfa with both switches off, bit for bit.
    inline RunResult run_firefly(const Problem& prob, const SolverParams& params, std::uint64_t seed)
    {
        SolverParams p = params;
        p.partition_enabled = false;
        p.replacement_enabled = false;
        return run_mscfa(prob, p, seed);
    }

    // Uniform random search at the same evaluation budget, chunked into
    // pop-sized "iterations" so traces align with the other algorithms.
    inline RunResult run_random_search(const Problem& prob, const SolverParams& params, std::uint64_t seed)
    {
        prob.validate();
        params.validate();
        using clock = std::chrono::steady_clock;
        const RngStream root = RngStream(seed);

        RunResult out;
        out.best.phi = big_cost * 2.0;
        std::vector<Individual> pop(static_cast<size_t>(params.pop));
        for (int t = 0; t <= params.max_iter; ++t) {
            const auto t0 = clock::now();
            const RngStream iter_stream = root.sub(static_cast<std::uint64_t>(t));
            parallel_for(0, params.pop, params.threads, [&](int i) {
                Individual& ind = pop[static_cast<size_t>(i)];
                const RngStream s = iter_stream.sub(static_cast<std::uint64_t>(i));
                Eigen::VectorXd x(prob.dims());
                for (Eigen::Index k = 0; k < x.size(); ++k)
                    x[k] = s.uniform(static_cast<std::uint64_t>(k), prob.lb[k], prob.ub[k]);
                const EvalResult r = prob.eval(x);
                ind.x = x;
                ind.phi = r.phi;
                ind.objectives = r.objectives;
                ind.ok = r.ok;
            });
            out.evals += params.pop;
            detail::record(out.trace, out, pop, std::chrono::duration<double>(clock::now() - t0).count(),
                           params.timing);
        }
        out.trace.conv_iter = conv_iteration(out.trace.best_phi_per_iter, params.conv_threshold,
                                             params.conv_window);
        return out;
    }

} // namespace wsopt

#endif
