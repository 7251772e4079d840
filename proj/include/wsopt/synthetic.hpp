#ifndef WSOPT_SYNTHETIC_HPP
#define WSOPT_SYNTHETIC_HPP

#include <wsopt/solver.hpp>

#include <cmath>

namespace wsopt {

    // Built-in biobjective validation problem with an analytically known
    // front: minimize (x1^2, (x1-2)^2) over the box [-2, 4]^2. Both
    // objectives depend on x1 alone; every x1 in [0, 2] is Pareto-optimal
    // and the front is the curve {(t^2, (t-2)^2) : t in [0, 2]}. Because the
    // front is known exactly, the scalar cost needs no estimated reference
    // vector, making this the ground-truth check for the whole
    // scalarization-plus-search stack.

    inline Eigen::Vector2d synthetic_objectives(double x1)
    {
        return {x1 * x1, (x1 - 2.0) * (x1 - 2.0)};
    }

    // Exact scalar cost of one objective point: the front-distance analogue
    // of the eleven-objective cost, min over front points of
    // (1/m) * || max(f - pf(t), 0) ||_2. Deterministic: a fixed coarse grid
    // brackets the global minimizer, ternary refinement polishes it.
    inline double synthetic_front_distance(const Eigen::Vector2d& f)
    {
        const auto h = [&f](double t) {
            const double d1 = std::max(f[0] - t * t, 0.0);
            const double d2 = std::max(f[1] - (t - 2.0) * (t - 2.0), 0.0);
            return d1 * d1 + d2 * d2;
        };
        const int grid = 2001;
        double best_t = 0.0;
        double best_h = h(0.0);
        for (int j = 1; j < grid; ++j) {
            const double t = 2.0 * j / (grid - 1);
            const double v = h(t);
            if (v < best_h) {
                best_h = v;
                best_t = t;
            }
        }
        double lo = std::max(0.0, best_t - 2.0 / (grid - 1));
        double hi = std::min(2.0, best_t + 2.0 / (grid - 1));
        for (int it = 0; it < 120; ++it) {
            const double a = lo + (hi - lo) / 3.0;
            const double b = hi - (hi - lo) / 3.0;
            if (h(a) <= h(b))
                hi = b;
            else
                lo = a;
        }
        return 0.5 * std::sqrt(std::min(best_h, h(0.5 * (lo + hi))));
    }

    inline Problem make_synthetic_problem()
    {
        Problem p;
        p.lb = Eigen::Vector2d(-2.0, -2.0);
        p.ub = Eigen::Vector2d(4.0, 4.0);
        p.length_dims = 0;
        p.objective_dims = 2;
        p.eval = [](const Eigen::VectorXd& x) {
            EvalResult r;
            const Eigen::Vector2d f = synthetic_objectives(x[0]);
            r.objectives = f;
            r.phi = synthetic_front_distance(f);
            r.ok = true;
            return r;
        };
        return p;
    }

} // namespace wsopt

#endif
